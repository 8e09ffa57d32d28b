//! Integrals, the modular element and modular function, and the identities relating them to
//! the antipode.

use serde::{Deserialize, Serialize};

use crate::cyclofield::CycloNum;
use crate::error::{HopfError, Result};
use crate::hopf::{map_order, AxiomReport, Functional, HopfAlgebra};
use crate::linalg::{dot, scale_vec, LinearSystem, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralData {
    /// left integral in `H*`: `sum x_1 lambda(x_2) = lambda(x) 1`
    pub lambda: Functional,
    /// left integral in `H`: `x l = eps(x) l`
    pub ell: Vector,
    /// `lambda o S`
    pub rho: Functional,
    /// `S^{-1}(l)`
    pub r: Vector,
    /// modular element: `sum lambda(x_1) x_2 = lambda(x) a`
    pub a: Vector,
    /// modular function: `l x = alpha(x) l`
    pub alpha: Functional,
    pub alpha_of_a: CycloNum,
    /// `lambda(l) = 1`
    pub normalized: bool,
}

fn one_dimensional(sys: &LinearSystem, which: &'static str) -> Result<Vector> {
    let (_, dirs) = sys.solution();
    if dirs.len() != 1 {
        return Err(HopfError::IntegralSpaceError {
            which,
            dim: dirs.len(),
        });
    }
    Ok(dirs.into_iter().next().unwrap())
}

/// Left integral `l` of `H`.
fn left_integral_element(h: &HopfAlgebra) -> Result<Vector> {
    let n = h.dim();
    let field = h.field();
    let mut sys = LinearSystem::new(field, n);
    // (e_i l)_c - eps(e_i) l_c = 0
    for i in 0..n {
        let mut rows: Vec<Vec<(usize, CycloNum)>> = vec![Vec::new(); n];
        for k in 0..n {
            for (c, m) in h.mul_tensor().nonzero_c(i, k) {
                rows[c].push((k, m.clone()));
            }
        }
        let eps = &h.counit()[i];
        for (c, row) in rows.iter_mut().enumerate() {
            if !eps.is_zero() {
                row.push((c, -eps));
            }
            sys.add_equation(row, &field.zero()).expect("homogeneous");
        }
    }
    one_dimensional(&sys, "left integral in H")
}

/// Left integral `lambda` of `H*`.
fn left_integral_functional(h: &HopfAlgebra) -> Result<Vector> {
    let n = h.dim();
    let field = h.field();
    let mut sys = LinearSystem::new(field, n);
    // for x = e_k and each i: sum_j comul[k][i][j] lambda_j - lambda_k 1_i = 0
    for k in 0..n {
        let mut rows: Vec<Vec<(usize, CycloNum)>> = vec![Vec::new(); n];
        for (i, j, c) in h.comul_tensor().nonzero_bc(k) {
            rows[i].push((j, c.clone()));
        }
        for (i, row) in rows.iter_mut().enumerate() {
            let u = &h.unit()[i];
            if !u.is_zero() {
                row.push((k, -u));
            }
            sys.add_equation(row, &field.zero()).expect("homogeneous");
        }
    }
    one_dimensional(&sys, "left integral in H*")
}

pub fn compute_integrals(h: &HopfAlgebra) -> Result<IntegralData> {
    let n = h.dim();
    let mut ell = left_integral_element(h)?;
    let mut lambda = left_integral_functional(h)?;

    let pivot = lambda.iter().position(|x| !x.is_zero()).expect("nonzero solution");
    let inv = lambda[pivot].inv()?;
    lambda = scale_vec(&inv, &lambda);
    let pairing = dot(&lambda, &ell);
    if pairing.is_zero() {
        return Err(HopfError::NormalizationError);
    }
    ell = scale_vec(&pairing.inv()?, &ell);

    // a from sum lambda(x_1) x_2 = lambda(x) a at x = e_pivot, then checked at every basis x
    let lam_of = |k: usize| {
        let mut out = h.zero();
        for (i, j, c) in h.comul_tensor().nonzero_bc(k) {
            if !lambda[i].is_zero() {
                out[j] += &(c * &lambda[i]);
            }
        }
        out
    };
    let a = scale_vec(&lambda[pivot].inv()?, &lam_of(pivot));
    for k in 0..n {
        if lam_of(k) != scale_vec(&lambda[k], &a) {
            return Err(HopfError::ModularData(format!(
                "sum lambda(x_1) x_2 != lambda(x) a at x = {}",
                h.labels()[k]
            )));
        }
    }
    if !h.is_grouplike(&a) {
        return Err(HopfError::ModularData("modular element is not grouplike".into()));
    }

    // alpha from l x = alpha(x) l
    let lp = ell.iter().position(|x| !x.is_zero()).expect("nonzero integral");
    let lp_inv = ell[lp].inv()?;
    let mut alpha = Vec::with_capacity(n);
    for k in 0..n {
        let lx = h.mul_vec(&ell, &h.basis(k));
        let c = &lx[lp] * &lp_inv;
        if lx != scale_vec(&c, &ell) {
            return Err(HopfError::ModularData(format!(
                "l x is not a multiple of l at x = {}",
                h.labels()[k]
            )));
        }
        alpha.push(c);
    }
    if !h.is_character(&alpha) {
        return Err(HopfError::ModularData("modular function is not a character".into()));
    }
    let alpha_of_a = dot(&alpha, &a);

    let lambda = Functional(lambda);
    let rho = lambda.compose(h.antipode());
    let r = h.antipode_inverse()?.apply(&ell);
    if !rho.eval(&r).is_one() {
        return Err(HopfError::NormalizationError);
    }
    Ok(IntegralData {
        lambda,
        ell,
        rho,
        r,
        a,
        alpha: Functional(alpha),
        alpha_of_a,
        normalized: true,
    })
}

/// Whether `v` is a right integral of `H`: `v x = eps(x) v`.
pub fn is_right_integral_element(h: &HopfAlgebra, v: &[CycloNum]) -> bool {
    (0..h.dim()).all(|k| h.mul_vec(v, &h.basis(k)) == scale_vec(&h.counit()[k], v))
}

/// Whether `f` is a right integral of `H*`: `sum f(x_1) x_2 = f(x) 1`.
pub fn is_right_integral_functional(h: &HopfAlgebra, f: &Functional) -> bool {
    (0..h.dim()).all(|k| {
        let mut out = h.zero();
        for (i, j, c) in h.comul_tensor().nonzero_bc(k) {
            out[j] += &(c * &f.0[i]);
        }
        out == scale_vec(&f.0[k], h.unit())
    })
}

/// Checks every identity between integrals, modular data and the antipode on all basis elements.
pub fn verify_identities(h: &HopfAlgebra, d: &IntegralData) -> AxiomReport {
    let n = h.dim();
    let s = h.antipode();
    let s2 = h.s2();
    let aa = &d.alpha_of_a;
    let lam = |v: &[CycloNum]| d.lambda.eval(v);
    let label = |k: usize| h.labels()[k].clone();
    let mut report = AxiomReport::default();
    let mut check = |name: &str, bad: Vec<String>| report.record(name, bad);

    let delta_ell = h.comul_sparse(&d.ell);

    let mut bad = Vec::new();
    for k in 0..n {
        if h.mul_vec(&h.basis(k), &d.ell) != scale_vec(&h.counit()[k], &d.ell) {
            bad.push(label(k));
        }
    }
    check("x l = eps(x) l", bad);

    let mut bad = Vec::new();
    for k in 0..n {
        let mut out = h.zero();
        for (i, j, c) in h.comul_tensor().nonzero_bc(k) {
            out[i] += &(c * &d.lambda.0[j]);
        }
        if out != scale_vec(&d.lambda.0[k], h.unit()) {
            bad.push(label(k));
        }
    }
    check("sum x_1 lambda(x_2) = lambda(x) 1", bad);

    let bad = (0..n).filter(|&k| h.mul_vec(&d.r, &h.basis(k)) != scale_vec(&h.counit()[k], &d.r)).map(label).collect();
    check("r x = eps(x) r", bad);
    let bad = if is_right_integral_functional(h, &d.rho) { vec![] } else { vec!["rho".into()] };
    check("sum rho(x_1) x_2 = rho(x) 1", bad);

    let mut bad = Vec::new();
    for k in 0..n {
        let mut out = h.zero();
        for (&(i, j), c) in &delta_ell {
            let v = lam(&h.mul_basis(k, j));
            if !v.is_zero() {
                out[i] += &(c * &v);
            }
        }
        if out != s.image(k) {
            bad.push(label(k));
        }
    }
    check("S(x) = sum l_1 lambda(x l_2)", bad);

    let bad = (0..n)
        .filter(|&k| lam(&s.image(k)) != lam(&h.mul_vec(&h.basis(k), &d.a)))
        .map(label)
        .collect();
    check("lambda(S(x)) = lambda(x a)", bad);

    let mut out = h.zero();
    for (&(i, j), c) in &delta_ell {
        out[i] += &(c * &d.alpha.0[j]);
    }
    let bad = if out == s.apply(&d.ell) { vec![] } else { vec!["l".into()] };
    check("S(l) = sum l_1 alpha(l_2)", bad);

    let bad = if s2.apply(&d.ell) == scale_vec(aa, &d.ell) { vec![] } else { vec!["l".into()] };
    check("S^2(l) = alpha(a) l", bad);
    let bad = if s2.apply(&d.r) == scale_vec(aa, &d.r) { vec![] } else { vec!["r".into()] };
    check("S^2(r) = alpha(a) r", bad);
    let bad = if d.lambda.compose(&s2) == d.lambda.scale(aa) { vec![] } else { vec!["lambda".into()] };
    check("lambda o S^2 = alpha(a) lambda", bad);
    let bad = if d.rho.compose(&s2) == d.rho.scale(aa) { vec![] } else { vec!["rho".into()] };
    check("rho o S^2 = alpha(a) rho", bad);
    let bad = if lam(&s.apply(&d.ell)) == *aa { vec![] } else { vec!["l".into()] };
    check("lambda(S(l)) = alpha(a)", bad);
    let bad = if lam(&d.r).is_one() { vec![] } else { vec!["r".into()] };
    check("lambda(r) = 1", bad);
    let bad = if d.rho.eval(&d.r).is_one() && lam(&d.ell).is_one() { vec![] } else { vec!["normalization".into()] };
    check("lambda(l) = rho(r) = 1", bad);
    report
}

/// Orders entering the bound `ord(S^2) | 2 ord(a) ord(alpha)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadfordBound {
    pub ord_a: u32,
    pub ord_alpha: u32,
    pub ord_s2: u32,
    pub ord_alpha_of_a: u32,
    /// `ord(S^2) | 2 ord(a) ord(alpha)`
    pub s2_divides: bool,
    /// `ord(alpha(a)) | gcd(ord(alpha), ord(a))`
    pub alpha_of_a_divides: bool,
}

impl RadfordBound {
    pub fn passed(&self) -> bool {
        self.s2_divides && self.alpha_of_a_divides
    }
}

pub fn radford_bound_check(h: &HopfAlgebra, d: &IntegralData) -> Result<RadfordBound> {
    let n = h.dim() as u32;
    let bound = 2 * n * n;
    let exceeded = |what: &str| HopfError::OrderBoundExceeded(format!("{what} has no order up to {bound}"));

    let mut acc = d.a.clone();
    let mut ord_a = None;
    for k in 1..=bound {
        if acc == *h.unit() {
            ord_a = Some(k);
            break;
        }
        acc = h.mul_vec(&acc, &d.a);
    }
    let ord_a = ord_a.ok_or_else(|| exceeded("a"))?;

    let mut acc = d.alpha.0.clone();
    let mut ord_alpha = None;
    for k in 1..=bound {
        if acc == *h.counit() {
            ord_alpha = Some(k);
            break;
        }
        acc = h.convolve(&acc, &d.alpha.0);
    }
    let ord_alpha = ord_alpha.ok_or_else(|| exceeded("alpha"))?;

    let ord_s2 = match map_order(&h.s2(), bound) {
        Ok(k) => k,
        Err(HopfError::NotFinite(_)) => return Err(exceeded("S^2")),
        Err(e) => return Err(e),
    };
    let ord_alpha_of_a = d.alpha_of_a.multiplicative_order(bound).ok_or_else(|| exceeded("alpha(a)"))?;
    let g = num_integer::gcd(ord_a, ord_alpha);
    Ok(RadfordBound {
        ord_a,
        ord_alpha,
        ord_s2,
        ord_alpha_of_a,
        s2_divides: (2 * ord_a * ord_alpha) % ord_s2 == 0,
        alpha_of_a_divides: g % ord_alpha_of_a == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_named, Family};

    fn idx(h: &HopfAlgebra, l: &str) -> usize {
        h.labels().iter().position(|x| x == l).unwrap()
    }

    #[test]
    fn sweedler_integrals() {
        let h = build_named(Family::Sweedler).unwrap();
        let d = compute_integrals(&h).unwrap();
        let e = |l| h.basis(idx(&h, l));
        let x = e("x");
        let g = e("g");
        let m = |a: &Vector, b: &Vector| h.mul_vec(a, b);
        let one_plus_g = crate::linalg::add_vec(h.unit(), &g);
        assert_eq!(d.ell, m(&one_plus_g, &x));
        assert_eq!(d.r, m(&x, &one_plus_g));
        assert_eq!(d.lambda.0, x);
        assert_eq!(d.rho.0, scale_vec(&h.field().int(-1), &e("gx")));
        assert_eq!(d.a, g);
        assert_eq!(d.alpha.0[idx(&h, "g")], h.field().int(-1));
        assert_eq!(d.alpha_of_a, h.field().int(-1));
        assert!(verify_identities(&h, &d).all_passed());
        let b = radford_bound_check(&h, &d).unwrap();
        assert_eq!((b.ord_a, b.ord_alpha, b.ord_s2), (2, 2, 2));
        assert!(b.passed());
    }

    #[test]
    fn group_algebra_is_unimodular() {
        let h = build_named(Family::GroupAlgebraCyclic(2)).unwrap();
        let d = compute_integrals(&h).unwrap();
        assert_eq!(d.a, *h.unit());
        assert_eq!(d.alpha.0, *h.counit());
        assert!(d.alpha_of_a.is_one());
        assert!(verify_identities(&h, &d).all_passed());
        assert!(radford_bound_check(&h, &d).unwrap().passed());
    }

    #[test]
    fn taft_three_left_integral_equations() {
        let h = build_named(Family::Taft(3)).unwrap();
        let d = compute_integrals(&h).unwrap();
        assert!(d.lambda.eval(&d.ell).is_one());
        for k in 0..h.dim() {
            assert_eq!(h.mul_vec(&h.basis(k), &d.ell), scale_vec(&h.counit()[k], &d.ell));
        }
        assert!(verify_identities(&h, &d).all_passed());
        let t4 = build_named(Family::Taft(4)).unwrap();
        let b = radford_bound_check(&t4, &compute_integrals(&t4).unwrap()).unwrap();
        assert_eq!(b.ord_s2, 4);
        assert_eq!((2 * b.ord_a * b.ord_alpha) % 4, 0);
    }
}
