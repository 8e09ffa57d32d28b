//! Square roots of the squared antipode that are Hopf automorphisms (companions).
//!
//! `D = S^2` has finite order `m` and is diagonalizable with eigenvalues `q^i`, `q` a primitive
//! `m`-th root of unity. Fix `r` with `r^2 = q`, of order `2m` for even `m` and `m` for odd `m`.
//! A splitting `E_{D,q^i} = V_{+,i} (+) V_{-,i}` defines the square root `sigma = +-r^i` on
//! `V_{+-,i}`; it is a Hopf map iff the algebra and coalgebra sign conditions hold.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::primitive_space;
use crate::cyclofield::{lcm, CycloNum};
use crate::error::{HopfError, Result};
use crate::hopf::{
    is_algebra_morphism, is_coalgebra_morphism, is_hopf_morphism, map_order, AxiomReport, HopfAlgebra,
    LinearMap, RelationSide,
};
use crate::integrals::{compute_integrals, IntegralData};
use crate::linalg::{axpy, is_zero_vec, scale_vec, sub_vec, LinearSystem, Matrix, Span, Vector};

#[derive(Clone, Debug)]
pub struct EigenData {
    /// order of `D = S^2`
    pub m: u32,
    pub q: CycloNum,
    pub r: CycloNum,
    /// `i` with `q^i` an eigenvalue, ascending
    pub exponents: Vec<u32>,
    pub spaces: BTreeMap<u32, Vec<Vector>>,
    pub d: LinearMap,
}

impl EigenData {
    pub fn eigenvalue(&self, i: u32) -> CycloNum {
        self.q.pow(i as i64).expect("root of unity")
    }

    pub fn r_pow(&self, i: u32) -> CycloNum {
        self.r.pow(i as i64).expect("root of unity")
    }

    /// `-1` when `r^(i+j)` wraps past `r^m = -1`.
    fn wrap(&self, i: u32, j: u32) -> i8 {
        if i + j >= self.m && self.m.is_multiple_of(2) {
            -1
        } else {
            1
        }
    }

    pub fn dim(&self) -> usize {
        self.d.source_dim()
    }
}

fn bound_for(h: &HopfAlgebra) -> u32 {
    let n = h.dim() as u32;
    2 * n * n
}

/// The same algebra over a conductor containing `r` and every candidate `r_sigma`.
pub fn with_companion_field(h: &HopfAlgebra) -> Result<HopfAlgebra> {
    let m = map_order(&h.s2(), bound_for(h))?;
    let needed = lcm(h.field().conductor(), 2 * m);
    if needed == h.field().conductor() {
        return Ok(h.clone());
    }
    h.with_field(&crate::cyclofield::CycloField::new(needed))
}

pub fn eigendecompose_s2(h: &HopfAlgebra) -> Result<EigenData> {
    let d = h.s2();
    let m = map_order(&d, bound_for(h))?;
    let field = h.field();
    let needed = if m % 2 == 0 { 2 * m } else { m };
    if !field.conductor().is_multiple_of(needed) {
        return Err(HopfError::ConductorTooSmall {
            conductor: field.conductor(),
            needed,
        });
    }
    let q = field.root_of_unity(m, 1)?;
    let r = if m % 2 == 0 {
        field.root_of_unity(2 * m, 1)?
    } else {
        q.pow(m.div_ceil(2) as i64)?
    };
    let n = h.dim();
    let mut spaces = BTreeMap::new();
    let mut total = 0;
    for i in 0..m {
        let qi = q.pow(i as i64)?;
        let shifted = d.matrix().sub(&Matrix::identity(field, n).scale(&qi));
        let ns = shifted.nullspace();
        if !ns.is_empty() {
            total += ns.len();
            spaces.insert(i, ns);
        }
    }
    if total != n {
        return Err(HopfError::NotDiagonalizable { found: total, dim: n });
    }
    Ok(EigenData {
        m,
        q,
        r,
        exponents: spaces.keys().copied().collect(),
        spaces,
        d,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub plus: BTreeMap<u32, Vec<Vector>>,
    pub minus: BTreeMap<u32, Vec<Vector>>,
}

impl Splitting {
    /// `V_{+,i} = E_{D,q^i}`, `V_{-,i} = 0`.
    pub fn trivial(e: &EigenData) -> Splitting {
        Splitting {
            plus: e.spaces.clone(),
            minus: e.exponents.iter().map(|&i| (i, Vec::new())).collect(),
        }
    }

    /// Splitting from one sign per vector of the stored eigenbasis (in exponent order).
    pub fn from_signs(e: &EigenData, signs: &[bool]) -> Splitting {
        let mut plus = BTreeMap::new();
        let mut minus = BTreeMap::new();
        let mut k = 0;
        for (&i, basis) in &e.spaces {
            let (p, m): (Vec<_>, Vec<_>) = basis.iter().partition(|_| {
                let s = signs[k];
                k += 1;
                s
            });
            plus.insert(i, p.into_iter().cloned().collect());
            minus.insert(i, m.into_iter().cloned().collect());
        }
        Splitting { plus, minus }
    }
}

/// Basis adapted to a splitting, with `(sign, exponent)` tags and the inverse change of basis.
struct Adapted {
    vectors: Vec<Vector>,
    tags: Vec<(i8, u32)>,
    p: Matrix,
    pinv: Matrix,
    /// nonzero rows of each column of `pinv`
    pinv_cols: Vec<Vec<usize>>,
}

impl Adapted {
    fn new(e: &EigenData, s: &Splitting) -> Result<Adapted> {
        for i in s.plus.keys().chain(s.minus.keys()) {
            if !e.spaces.contains_key(i) {
                return Err(HopfError::InvalidSplitting(format!("q^{i} is not an eigenvalue of S^2")));
            }
        }
        let n = e.dim();
        let field = e.d.matrix().field().clone();
        let mut vectors = Vec::with_capacity(n);
        let mut tags = Vec::with_capacity(n);
        for (&i, basis) in &e.spaces {
            let eig = Span::from_vectors(&field, n, basis);
            let empty = Vec::new();
            let plus = s.plus.get(&i).unwrap_or(&empty);
            let minus = s.minus.get(&i).unwrap_or(&empty);
            let mut part = Span::new(&field, n);
            for (sign, vs) in [(1i8, plus), (-1i8, minus)] {
                for v in vs {
                    if v.len() != n || !eig.contains(v) {
                        return Err(HopfError::InvalidSplitting(format!(
                            "a vector of V{},{i} is not in E_(S^2,q^{i})",
                            sign_str(sign)
                        )));
                    }
                    if !part.insert(v) {
                        return Err(HopfError::InvalidSplitting(format!(
                            "V+,{i} and V-,{i} are not independent"
                        )));
                    }
                    vectors.push(v.clone());
                    tags.push((sign, i));
                }
            }
            if part.rank() != basis.len() {
                return Err(HopfError::InvalidSplitting(format!(
                    "V+,{i} + V-,{i} has dimension {} but E_(S^2,q^{i}) has dimension {}",
                    part.rank(),
                    basis.len()
                )));
            }
        }
        let p = Matrix::from_columns(&vectors);
        let pinv = p.inverse().map_err(|_| HopfError::InvalidSplitting("splitting is not a basis".into()))?;
        let pinv_cols = (0..n)
            .map(|j| (0..n).filter(|&a| !pinv.get(a, j).is_zero()).collect())
            .collect();
        Ok(Adapted {
            vectors,
            tags,
            p,
            pinv,
            pinv_cols,
        })
    }

    /// Coordinates in the adapted basis, as a sparse list.
    fn coords(&self, v: &[CycloNum]) -> Vec<(usize, CycloNum)> {
        let mut acc: BTreeMap<usize, CycloNum> = BTreeMap::new();
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &a in &self.pinv_cols[j] {
                let t = x * self.pinv.get(a, j);
                let e = acc.entry(a).or_insert_with(|| t.field().zero());
                *e += &t;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Coordinates of an element of `H (x) H` in the adapted tensor basis.
    fn coords2(&self, w: &crate::hopf::Sparse2) -> Vec<((usize, usize), CycloNum)> {
        let mut half: BTreeMap<(usize, usize), CycloNum> = BTreeMap::new();
        for (&(i, j), c) in w {
            for &a in &self.pinv_cols[i] {
                let t = c * self.pinv.get(a, i);
                let e = half.entry((a, j)).or_insert_with(|| t.field().zero());
                *e += &t;
            }
        }
        let mut full: BTreeMap<(usize, usize), CycloNum> = BTreeMap::new();
        for ((a, j), c) in half {
            if c.is_zero() {
                continue;
            }
            for &b in &self.pinv_cols[j] {
                let t = &c * self.pinv.get(b, j);
                let e = full.entry((a, b)).or_insert_with(|| t.field().zero());
                *e += &t;
            }
        }
        full.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

fn sign_str(s: i8) -> &'static str {
    if s > 0 {
        "+"
    } else {
        "-"
    }
}

fn space_name(tag: (i8, u32)) -> String {
    format!("V{},{}", sign_str(tag.0), tag.1)
}

pub fn sqrt_from_splitting(e: &EigenData, s: &Splitting) -> Result<LinearMap> {
    let ad = Adapted::new(e, s)?;
    let diag: Vec<CycloNum> = ad
        .tags
        .iter()
        .map(|&(sign, i)| e.r_pow(i).scale_int(sign as i64))
        .collect();
    let sigma = LinearMap::new(ad.p.mul(&Matrix::diagonal(&diag)).mul(&ad.pinv));
    if sigma.compose(&sigma) != e.d {
        return Err(HopfError::InvalidSplitting("sigma^2 != S^2".into()));
    }
    Ok(sigma)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingCheck {
    pub passed: bool,
    pub violation: Option<String>,
}

impl SplittingCheck {
    fn from(violation: Option<String>) -> SplittingCheck {
        SplittingCheck {
            passed: violation.is_none(),
            violation,
        }
    }
}

fn condition_name(e: &EigenData, i: u32, j: u32) -> &'static str {
    if e.m % 2 == 1 {
        "m odd"
    } else if i + j < e.m {
        "i+j < m"
    } else {
        "i+j >= m, m even"
    }
}

/// `1 in V_{+,0}` and `V_{s,i} V_{t,j} in V_{st,i+j}`, with the sign flipped on wrap for even `m`.
pub fn check_splitting_algebra(h: &HopfAlgebra, e: &EigenData, s: &Splitting) -> Result<SplittingCheck> {
    let ad = Adapted::new(e, s)?;
    for (c, _) in ad.coords(h.unit()) {
        if ad.tags[c] != (1, 0) {
            return Ok(SplittingCheck::from(Some(format!(
                "1 is not in V+,0: it has a component in {}",
                space_name(ad.tags[c])
            ))));
        }
    }
    let n = ad.vectors.len();
    let violation = (0..n).into_par_iter().find_map_first(|a| {
        (0..n).find_map(|b| {
            let prod = h.mul_vec(&ad.vectors[a], &ad.vectors[b]);
            let (sa, ia) = ad.tags[a];
            let (sb, ib) = ad.tags[b];
            let target = (sa * sb * e.wrap(ia, ib), (ia + ib) % e.m);
            let bad = ad.coords(&prod).into_iter().find(|(c, _)| ad.tags[*c] != target)?;
            Some(format!(
                "{}: {} * {} = {} lies in {} * {} but has a component outside {} (in {})",
                condition_name(e, ia, ib),
                h.format_element(&ad.vectors[a]),
                h.format_element(&ad.vectors[b]),
                h.format_element(&prod),
                space_name(ad.tags[a]),
                space_name(ad.tags[b]),
                space_name(target),
                space_name(ad.tags[bad.0]),
            ))
        })
    });
    Ok(SplittingCheck::from(violation))
}

/// `eps(V_{-,0}) = 0` and `Delta(V_{t,k})` inside the sum of the allowed `V_{s,i} (x) V_{s',j}`.
pub fn check_splitting_coalgebra(h: &HopfAlgebra, e: &EigenData, s: &Splitting) -> Result<SplittingCheck> {
    let ad = Adapted::new(e, s)?;
    for (c, v) in ad.vectors.iter().enumerate() {
        if !h.counit_of(v).is_zero() && ad.tags[c] != (1, 0) {
            return Ok(SplittingCheck::from(Some(format!(
                "eps({}) != 0 for a vector of {}",
                h.format_element(v),
                space_name(ad.tags[c])
            ))));
        }
    }
    let n = ad.vectors.len();
    let violation = (0..n).into_par_iter().find_map_first(|c| {
        let w = h.comul_sparse(&ad.vectors[c]);
        let (tc, kc) = ad.tags[c];
        ad.coords2(&w).into_iter().find_map(|((a, b), _)| {
            let (sa, ia) = ad.tags[a];
            let (sb, ib) = ad.tags[b];
            let ok = (ia + ib) % e.m == kc && sa * sb * e.wrap(ia, ib) == tc;
            (!ok).then(|| {
                format!(
                    "{}: Delta({}) with {} in {} has a component in {} (x) {}",
                    condition_name(e, ia, ib),
                    h.format_element(&ad.vectors[c]),
                    h.format_element(&ad.vectors[c]),
                    space_name((tc, kc)),
                    space_name(ad.tags[a]),
                    space_name(ad.tags[b]),
                )
            })
        })
    });
    Ok(SplittingCheck::from(violation))
}

/// `(S^2)^k` when `m = 2k - 1` is odd.
pub fn odd_order_companion(e: &EigenData) -> Option<LinearMap> {
    if e.m.is_multiple_of(2) {
        return None;
    }
    let sigma = e.d.pow(e.m.div_ceil(2));
    (sigma.compose(&sigma) == e.d).then_some(sigma)
}

#[derive(Clone, Debug)]
pub struct TrivialOutcome {
    pub sigma: Option<LinearMap>,
    pub algebra: SplittingCheck,
    pub coalgebra: SplittingCheck,
}

pub fn trivial_splitting_companion(h: &HopfAlgebra, e: &EigenData) -> Result<TrivialOutcome> {
    let s = Splitting::trivial(e);
    let algebra = check_splitting_algebra(h, e, &s)?;
    let coalgebra = check_splitting_coalgebra(h, e, &s)?;
    let sigma = if algebra.passed && coalgebra.passed {
        let sigma = sqrt_from_splitting(e, &s)?;
        let check = is_hopf_morphism(&sigma, h, h)?;
        if !check.passed {
            return Err(HopfError::InvalidSplitting(format!(
                "sign conditions hold but sigma is not a Hopf map: {}",
                check.failure.unwrap_or_default()
            )));
        }
        Some(sigma)
    } else {
        None
    };
    Ok(TrivialOutcome {
        sigma,
        algebra,
        coalgebra,
    })
}

/// Per eigenspace: a random change of basis (unimodular, small entries) with probability 1/2,
/// then either one sign for the whole space or independent signs per vector.
pub fn random_splitting<R: Rng>(e: &EigenData, rng: &mut R) -> Splitting {
    let mut plus = BTreeMap::new();
    let mut minus = BTreeMap::new();
    for (&i, basis) in &e.spaces {
        let mut vs = basis.clone();
        if vs.len() > 1 && rng.gen_bool(0.5) {
            for _ in 0..rng.gen_range(1..=3) {
                let a = rng.gen_range(0..vs.len());
                let mut b = rng.gen_range(0..vs.len());
                if a == b {
                    b = (a + 1) % vs.len();
                }
                let c = vs[a][0].field().int(rng.gen_range(-2..=2));
                let src = vs[a].clone();
                axpy(&mut vs[b], &c, &src);
            }
        }
        let uniform = rng.gen_bool(0.4);
        let global = rng.gen_bool(0.5);
        let (mut p, mut m) = (Vec::new(), Vec::new());
        for v in vs {
            let positive = if uniform { global } else { rng.gen_bool(0.5) };
            if positive {
                p.push(v);
            } else {
                m.push(v);
            }
        }
        plus.insert(i, p);
        minus.insert(i, m);
    }
    Splitting { plus, minus }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompanionReport {
    pub checks: AxiomReport,
    pub r_sigma: Option<CycloNum>,
}

impl CompanionReport {
    pub fn passed(&self) -> bool {
        self.checks.all_passed()
    }
}

fn flag(ok: bool, what: &str) -> Vec<String> {
    if ok {
        Vec::new()
    } else {
        vec![what.to_string()]
    }
}

/// Full check that `sigma` is a Hopf automorphism with `sigma^2 = S^2`, plus the eigen-structure
/// consequences for integrals and modular data.
pub fn verify_companion(h: &HopfAlgebra, sigma: &LinearMap) -> Result<CompanionReport> {
    let data = compute_integrals(h)?;
    verify_companion_with(h, &data, sigma)
}

pub fn verify_companion_with(h: &HopfAlgebra, data: &IntegralData, sigma: &LinearMap) -> Result<CompanionReport> {
    let n = h.dim();
    if sigma.source_dim() != n || sigma.target_dim() != n {
        return Err(HopfError::ShapeError(format!("sigma is not an endomorphism of a {n}-dimensional space")));
    }
    let mut report = AxiomReport::default();
    let sq_ok = sigma.compose(sigma) == h.s2();
    report.record("sigma^2 = S^2", flag(sq_ok, "sigma^2"));
    report.record("sigma invertible", flag(sigma.inverse().is_ok(), "sigma"));
    let alg = is_algebra_morphism(sigma, h, h)?;
    report.record("algebra morphism", alg.failure.into_iter().collect());
    let coalg = is_coalgebra_morphism(sigma, h, h)?;
    report.record("coalgebra morphism", coalg.failure.into_iter().collect());
    let commutes = sigma.compose(h.antipode()) == h.antipode().compose(sigma);
    report.record("sigma o S = S o sigma", flag(commutes, "S"));

    let s_ell = sigma.apply(&data.ell);
    let r_sigma = data.lambda.eval(&s_ell);
    report.record("sigma(l) = r_sigma l", flag(s_ell == scale_vec(&r_sigma, &data.ell), "l"));
    report.record("sigma(r) = r_sigma r", flag(sigma.apply(&data.r) == scale_vec(&r_sigma, &data.r), "r"));
    report.record(
        "lambda o sigma = r_sigma lambda",
        flag(data.lambda.compose(sigma) == data.lambda.scale(&r_sigma), "lambda"),
    );
    report.record(
        "rho o sigma = r_sigma rho",
        flag(data.rho.compose(sigma) == data.rho.scale(&r_sigma), "rho"),
    );
    report.record("r_sigma^2 = alpha(a)", flag(&r_sigma * &r_sigma == data.alpha_of_a, "r_sigma"));
    report.record(
        "1, a in E_(sigma,1)",
        flag(sigma.apply(h.unit()) == *h.unit() && sigma.apply(&data.a) == data.a, "a"),
    );
    // For diagonalizable sigma the sum of the eigenspaces with eigenvalue != 1 is Im(sigma - id).
    let moved: Vec<Vector> = (0..n).map(|k| sub_vec(&sigma.image(k), &h.basis(k))).collect();
    let kernel_bad = moved
        .iter()
        .enumerate()
        .filter(|(_, v)| !data.alpha.eval(v).is_zero() || !h.counit_of(v).is_zero())
        .map(|(k, _)| h.labels()[k].clone())
        .collect();
    report.record("E_(sigma,nu) in Ker(alpha) and Ker(eps) for nu != 1", kernel_bad);
    let ann_bad = moved
        .iter()
        .enumerate()
        .filter(|(_, v)| !is_zero_vec(&h.mul_vec(v, &data.ell)) || !is_zero_vec(&h.mul_vec(&data.ell, v)))
        .map(|(k, _)| h.labels()[k].clone())
        .collect();
    report.record("E_(sigma,nu) l = l E_(sigma,nu) = 0 for nu != 1", ann_bad);
    Ok(CompanionReport {
        checks: report,
        r_sigma: Some(r_sigma),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrivialExtension {
    pub holds: bool,
    pub k_basis: Vec<Vector>,
    pub m_basis: Vec<Vector>,
    /// first failing condition, with a witness
    pub violation: Option<String>,
    /// `eps(M) = 0`, checked when the decomposition is a trivial extension
    pub counit_vanishes_on_m: bool,
    #[serde(skip)]
    pub companion: Option<LinearMap>,
}

/// `K = E_(S^2,1)`, `M = sum of the other eigenspaces`; checks the trivial-extension conditions.
pub fn is_trivial_extension_over_fixed_space(h: &HopfAlgebra) -> Result<TrivialExtension> {
    let hc = with_companion_field(h)?;
    let e = eigendecompose_s2(&hc)?;
    let ad = Adapted::new(&e, &Splitting::trivial(&e))?;
    let in_k = |c: usize| ad.tags[c].1 == 0;
    let k_idx: Vec<usize> = (0..ad.vectors.len()).filter(|&c| in_k(c)).collect();
    let m_idx: Vec<usize> = (0..ad.vectors.len()).filter(|&c| !in_k(c)).collect();
    let fmt = |v: &[CycloNum]| hc.format_element(v);

    let mut violation = None;
    let mut fail = |msg: String| {
        if violation.is_none() {
            violation = Some(msg);
        }
    };
    let outside = |v: &[CycloNum], want_k: bool| ad.coords(v).into_iter().any(|(c, _)| in_k(c) != want_k);

    if outside(hc.unit(), true) {
        fail("1 is not in K".into());
    }
    for &a in &k_idx {
        for &b in &k_idx {
            let p = hc.mul_vec(&ad.vectors[a], &ad.vectors[b]);
            if outside(&p, true) {
                fail(format!("K K in K: {} * {} = {}", fmt(&ad.vectors[a]), fmt(&ad.vectors[b]), fmt(&p)));
            }
        }
        let d = hc.comul_sparse(&ad.vectors[a]);
        if ad.coords2(&d).iter().any(|((x, y), _)| !in_k(*x) || !in_k(*y)) {
            fail(format!("Delta(K) in K (x) K: Delta({})", fmt(&ad.vectors[a])));
        }
        if outside(&hc.antipode().apply(&ad.vectors[a]), true) {
            fail(format!("S(K) in K: S({})", fmt(&ad.vectors[a])));
        }
    }
    for &a in &k_idx {
        for &b in &m_idx {
            for p in [
                hc.mul_vec(&ad.vectors[a], &ad.vectors[b]),
                hc.mul_vec(&ad.vectors[b], &ad.vectors[a]),
            ] {
                if outside(&p, false) {
                    fail(format!("KM + MK in M: {} and {}", fmt(&ad.vectors[a]), fmt(&ad.vectors[b])));
                }
            }
        }
    }
    for &b in &m_idx {
        let d = hc.comul_sparse(&ad.vectors[b]);
        if ad.coords2(&d).iter().any(|((x, y), _)| in_k(*x) == in_k(*y)) {
            fail(format!("Delta(M) in K (x) M + M (x) K: Delta({})", fmt(&ad.vectors[b])));
        }
        if outside(&hc.antipode().apply(&ad.vectors[b]), false) {
            fail(format!("S(M) in M: S({})", fmt(&ad.vectors[b])));
        }
    }
    'sq: for &a in &m_idx {
        for &b in &m_idx {
            let p = hc.mul_vec(&ad.vectors[a], &ad.vectors[b]);
            if !is_zero_vec(&p) {
                fail(format!(
                    "M^2 = 0: {} * {} = {}",
                    fmt(&ad.vectors[a]),
                    fmt(&ad.vectors[b]),
                    fmt(&p)
                ));
                break 'sq;
            }
        }
    }
    let holds = violation.is_none();
    let k_basis: Vec<Vector> = k_idx.iter().map(|&c| ad.vectors[c].clone()).collect();
    let m_basis: Vec<Vector> = m_idx.iter().map(|&c| ad.vectors[c].clone()).collect();
    let counit_vanishes_on_m = m_basis.iter().all(|v| hc.counit_of(v).is_zero());
    let companion = if holds {
        let t = trivial_splitting_companion(&hc, &e)?;
        if t.sigma.is_none() {
            return Err(HopfError::InvalidSplitting(
                "trivial extension without a trivial-splitting companion".into(),
            ));
        }
        t.sigma
    } else {
        None
    };
    Ok(TrivialExtension {
        holds,
        k_basis,
        m_basis,
        violation,
        counit_vanishes_on_m,
        companion,
    })
}

// ---------------------------------------------------------------------------------------------
// Tier 3: linear constraints per branch

/// Images of the declared grouplikes and characters under `sigma`, as index permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    /// `sigma(grouplikes[t]) = grouplikes[grouplikes_map[t]]`
    pub grouplikes: Vec<usize>,
    /// `characters[t] o sigma = characters[characters_map[t]]`
    pub characters: Vec<usize>,
}

impl Assignment {
    pub fn identity(h: &HopfAlgebra) -> Assignment {
        Assignment {
            grouplikes: (0..h.meta.grouplikes.len()).collect(),
            characters: (0..h.meta.characters.len()).collect(),
        }
    }
}

/// Affine family `particular + span(directions)` of candidate matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineFamily {
    pub particular: LinearMap,
    pub directions: Vec<LinearMap>,
}

struct SigmaSystem {
    n: usize,
    sys: LinearSystem,
}

impl SigmaSystem {
    fn new(h: &HopfAlgebra) -> SigmaSystem {
        let n = h.dim();
        SigmaSystem {
            n,
            sys: LinearSystem::new(h.field(), n * n),
        }
    }

    fn add(&mut self, name: &str, coeffs: &[(usize, CycloNum)], rhs: &CycloNum) -> Result<()> {
        self.sys
            .add_equation(coeffs, rhs)
            .map(|_| ())
            .map_err(|_| HopfError::EmptyBranch(name.to_string()))
    }

    /// `sigma(v) = w`
    fn maps_to(&mut self, name: &str, v: &[CycloNum], w: &[CycloNum]) -> Result<()> {
        let n = self.n;
        for (i, wi) in w.iter().enumerate() {
            let row: Vec<(usize, CycloNum)> = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (i * n + j, x.clone()))
                .collect();
            self.add(name, &row, wi)?;
        }
        Ok(())
    }

    /// `f o sigma = g`
    fn pulls_back(&mut self, name: &str, f: &[CycloNum], g: &[CycloNum]) -> Result<()> {
        let n = self.n;
        for (j, gj) in g.iter().enumerate() {
            let row: Vec<(usize, CycloNum)> = f
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i * n + j, x.clone()))
                .collect();
            self.add(name, &row, gj)?;
        }
        Ok(())
    }

    /// `sigma o a = b o sigma`
    fn intertwines(&mut self, name: &str, a: &Matrix, b: &Matrix) -> Result<()> {
        let n = self.n;
        let field = a.field().clone();
        let a_cols: Vec<Vec<usize>> = (0..n).map(|j| (0..n).filter(|&k| !a.get(k, j).is_zero()).collect()).collect();
        let b_rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&k| !b.get(i, k).is_zero()).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                let mut row: Vec<(usize, CycloNum)> = Vec::new();
                for &k in &a_cols[j] {
                    row.push((i * n + k, a.get(k, j).clone()));
                }
                for &k in &b_rows[i] {
                    row.push((k * n + j, -b.get(i, k)));
                }
                if !row.is_empty() {
                    self.add(name, &row, &field.zero())?;
                }
            }
        }
        Ok(())
    }

    fn family(&self) -> AffineFamily {
        let n = self.n;
        let to_map = |v: &Vector| LinearMap::new(Matrix::from_rows((0..n).map(|i| v[i * n..(i + 1) * n].to_vec()).collect()));
        let (part, dirs) = self.sys.solution();
        AffineFamily {
            particular: to_map(&part),
            directions: dirs.iter().map(to_map).collect(),
        }
    }
}

fn left_mult(h: &HopfAlgebra, g: &[CycloNum]) -> Matrix {
    Matrix::from_columns(&(0..h.dim()).map(|j| h.mul_vec(g, &h.basis(j))).collect::<Vec<_>>())
}

fn right_mult(h: &HopfAlgebra, g: &[CycloNum]) -> Matrix {
    Matrix::from_columns(&(0..h.dim()).map(|j| h.mul_vec(&h.basis(j), g)).collect::<Vec<_>>())
}

/// `v -> sum v_1 chi(v_2)`
fn right_conv(h: &HopfAlgebra, chi: &[CycloNum]) -> Matrix {
    let cols: Vec<Vector> = (0..h.dim())
        .map(|k| {
            let mut out = h.zero();
            for (i, j, c) in h.comul_tensor().nonzero_bc(k) {
                if !chi[j].is_zero() {
                    out[i] += &(c * &chi[j]);
                }
            }
            out
        })
        .collect();
    Matrix::from_columns(&cols)
}

/// `v -> sum chi(v_1) v_2`
fn left_conv(h: &HopfAlgebra, chi: &[CycloNum]) -> Matrix {
    let cols: Vec<Vector> = (0..h.dim())
        .map(|k| {
            let mut out = h.zero();
            for (i, j, c) in h.comul_tensor().nonzero_bc(k) {
                if !chi[i].is_zero() {
                    out[j] += &(c * &chi[i]);
                }
            }
            out
        })
        .collect();
    Matrix::from_columns(&cols)
}

/// Exact affine conditions on `sigma` implied by the branch data.
pub fn propagate_linear_constraints(
    h: &HopfAlgebra,
    data: &IntegralData,
    r_sigma: &CycloNum,
    assignment: &Assignment,
) -> Result<AffineFamily> {
    let gl = &h.meta.grouplikes;
    let ch = &h.meta.characters;
    if assignment.grouplikes.len() != gl.len() || assignment.characters.len() != ch.len() {
        return Err(HopfError::ShapeError("assignment does not match the declared sets".into()));
    }
    let mut s = SigmaSystem::new(h);
    for (t, &u) in assignment.grouplikes.iter().enumerate() {
        s.maps_to("grouplike assignment", &gl[t], &gl[u])?;
    }
    s.maps_to("sigma(1) = 1", h.unit(), h.unit())?;
    s.pulls_back("eps o sigma = eps", h.counit(), h.counit())?;
    s.maps_to("sigma(a) = a", &data.a, &data.a)?;
    s.pulls_back("alpha o sigma = alpha", &data.alpha.0, &data.alpha.0)?;
    for (t, &u) in assignment.characters.iter().enumerate() {
        s.pulls_back("character assignment", &ch[t], &ch[u])?;
    }
    s.pulls_back("lambda o sigma = r_sigma lambda", &data.lambda.0, &data.lambda.scale(r_sigma).0)?;
    s.pulls_back("rho o sigma = r_sigma rho", &data.rho.0, &data.rho.scale(r_sigma).0)?;
    s.maps_to("sigma(l) = r_sigma l", &data.ell, &scale_vec(r_sigma, &data.ell))?;
    s.maps_to("sigma(r) = r_sigma r", &data.r, &scale_vec(r_sigma, &data.r))?;
    s.intertwines("sigma o S = S o sigma", h.antipode().matrix(), h.antipode().matrix())?;
    let s2 = h.s2();
    s.intertwines("sigma o S^2 = S^2 o sigma", s2.matrix(), s2.matrix())?;
    for p in &h.meta.skew_primitives {
        let src = primitive_space(h, &gl[p.g], &gl[p.h])?;
        let dst = primitive_space(h, &gl[assignment.grouplikes[p.g]], &gl[assignment.grouplikes[p.h]])?;
        let ann = if dst.is_empty() {
            (0..h.dim()).map(|i| h.basis(i)).collect()
        } else {
            Matrix::from_rows(dst).nullspace()
        };
        let n = h.dim();
        for c in &ann {
            for v in &src {
                let mut row = Vec::new();
                for (i, ci) in c.iter().enumerate() {
                    if ci.is_zero() {
                        continue;
                    }
                    for (j, vj) in v.iter().enumerate() {
                        if !vj.is_zero() {
                            row.push((i * n + j, ci * vj));
                        }
                    }
                }
                s.add("sigma(P_(g,h)) in P_(sigma g, sigma h)", &row, &h.field().zero())?;
            }
        }
    }
    for (t, &u) in assignment.grouplikes.iter().enumerate() {
        s.intertwines("sigma(g v) = sigma(g) sigma(v)", &left_mult(h, &gl[t]), &left_mult(h, &gl[u]))?;
        s.intertwines("sigma(v g) = sigma(v) sigma(g)", &right_mult(h, &gl[t]), &right_mult(h, &gl[u]))?;
    }
    for (t, &u) in assignment.characters.iter().enumerate() {
        // sigma o R_(chi o sigma) = R_chi o sigma, with chi_t o sigma = chi_u
        s.intertwines("convolution by characters", &right_conv(h, &ch[u]), &right_conv(h, &ch[t]))?;
        s.intertwines("convolution by characters", &left_conv(h, &ch[u]), &left_conv(h, &ch[t]))?;
    }
    Ok(s.family())
}

/// Automorphisms of a finite group given by elements and a product, fixing `fixed`.
/// Returned as permutations of element indices, in lexicographic order of generator images.
fn group_automorphisms(
    elems: &[Vector],
    op: &(dyn Fn(&Vector, &Vector) -> Vector + Sync),
    fixed: &[usize],
    budget: usize,
) -> Result<Vec<Vec<usize>>> {
    let k = elems.len();
    if k == 0 {
        return Ok(vec![Vec::new()]);
    }
    let index: HashMap<&Vector, usize> = elems.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut table = vec![vec![0usize; k]; k];
    for i in 0..k {
        for j in 0..k {
            let p = op(&elems[i], &elems[j]);
            table[i][j] = *index.get(&p).ok_or_else(|| {
                HopfError::InvalidParameter("declared set is not closed under its product".into())
            })?;
        }
    }
    let identity = (0..k)
        .find(|&e| (0..k).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or_else(|| HopfError::InvalidParameter("declared set has no identity".into()))?;
    let order = |x: usize| {
        let mut acc = x;
        let mut o = 1;
        while acc != identity {
            acc = table[acc][x];
            o += 1;
        }
        o
    };
    let orders: Vec<usize> = (0..k).map(order).collect();
    // greedy generating set
    let mut gens = Vec::new();
    let mut reached = vec![false; k];
    reached[identity] = true;
    let closure = |gens: &[usize]| {
        let mut seen = vec![false; k];
        seen[identity] = true;
        let mut stack = vec![identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = table[x][g];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    for x in 0..k {
        if !reached[x] {
            gens.push(x);
            reached = closure(&gens);
        }
    }
    let mut out = Vec::new();
    let mut tried = 0usize;
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| (0..k).filter(|&y| orders[y] == orders[g]).collect())
        .collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        tried += 1;
        if tried > budget {
            return Err(HopfError::BranchBudgetExceeded(budget));
        }
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cs)| cs[c]).collect();
        if let Some(perm) = extend_hom(&table, identity, &gens, &images) {
            if fixed.iter().all(|&f| perm[f] == f) {
                out.push(perm);
            }
        }
        // next tuple
        let mut pos = gens.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

fn extend_hom(table: &[Vec<usize>], identity: usize, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let k = table.len();
    let mut map = vec![usize::MAX; k];
    map[identity] = identity;
    let mut stack = vec![identity];
    while let Some(x) = stack.pop() {
        for (g, &img) in gens.iter().zip(images) {
            let y = table[x][*g];
            let fy = table[map[x]][img];
            if map[y] == usize::MAX {
                map[y] = fy;
                stack.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    // homomorphism on all pairs, and bijective
    let mut seen = vec![false; k];
    for &v in &map {
        if v == usize::MAX || seen[v] {
            return None;
        }
        seen[v] = true;
    }
    for x in 0..k {
        for y in 0..k {
            if map[table[x][y]] != table[map[x]][map[y]] {
                return None;
            }
        }
    }
    Some(map)
}

/// Whether `sigma` maps a declared relation to zero.
pub fn relation_preserved(h: &HopfAlgebra, sigma: &LinearMap, rel: &crate::hopf::Relation) -> bool {
    let mut acc = h.zero();
    let st = sigma.transpose();
    for (c, factors) in &rel.terms {
        let value = match rel.side {
            RelationSide::Algebra => {
                let imgs: Vec<Vector> = factors.iter().map(|f| sigma.apply(f)).collect();
                h.product(&imgs)
            }
            RelationSide::Coalgebra => factors
                .iter()
                .map(|f| st.apply(f))
                .fold(h.counit().clone(), |acc, f| h.convolve(&acc, &f)),
        };
        axpy(&mut acc, c, &value);
    }
    is_zero_vec(&acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessMethod {
    OddOrder,
    TrivialSplitting,
    LinearConstraints,
    SignSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchLog {
    pub branch: usize,
    pub r_sigma: String,
    pub grouplikes: Vec<String>,
    pub characters: Vec<String>,
    pub residual_dim: Option<usize>,
    pub outcome: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualFamily {
    pub branch: usize,
    pub family: AffineFamily,
    pub particular_verified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum AIVerdict {
    Witness {
        sigma: LinearMap,
        r_sigma: CycloNum,
        method: WitnessMethod,
        branches: Vec<BranchLog>,
    },
    NotAI {
        alpha_of_a: CycloNum,
        certificate: Vec<BranchLog>,
    },
    Inconclusive {
        reason: String,
        branches: Vec<BranchLog>,
        residuals: Vec<ResidualFamily>,
    },
}

impl AIVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            AIVerdict::Witness { .. } => "Witness",
            AIVerdict::NotAI { .. } => "NotAI",
            AIVerdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn sigma(&self) -> Option<&LinearMap> {
        match self {
            AIVerdict::Witness { sigma, .. } => Some(sigma),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    /// maximal number of (r_sigma, grouplike, character) branches
    pub branch_budget: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { branch_budget: 10_000 }
    }
}

pub fn decide_ai(h: &HopfAlgebra) -> Result<AIVerdict> {
    decide_ai_with(h, DecideOptions::default())
}

pub fn decide_ai_with(h: &HopfAlgebra, opts: DecideOptions) -> Result<AIVerdict> {
    let h = with_companion_field(h)?;
    let e = eigendecompose_s2(&h)?;
    let data = compute_integrals(&h)?;
    let witness = |sigma: LinearMap, method, branches: Vec<BranchLog>| -> Result<Option<AIVerdict>> {
        let report = verify_companion_with(&h, &data, &sigma)?;
        Ok(report.passed().then(|| AIVerdict::Witness {
            sigma,
            r_sigma: report.r_sigma.expect("computed"),
            method,
            branches,
        }))
    };

    if let Some(sigma) = odd_order_companion(&e) {
        if let Some(v) = witness(sigma, WitnessMethod::OddOrder, Vec::new())? {
            return Ok(v);
        }
    }
    if let Some(sigma) = trivial_splitting_companion(&h, &e)?.sigma {
        if let Some(v) = witness(sigma, WitnessMethod::TrivialSplitting, Vec::new())? {
            return Ok(v);
        }
    }

    let roots: Vec<CycloNum> = data
        .alpha_of_a
        .sqrt_of_root_of_unity(bound_for(&h))?
        .into_iter()
        .map(|x| x.embed(h.field()))
        .collect::<Result<_>>()?;
    let unit_idx = h.meta.grouplikes.iter().position(|g| g == h.unit());
    let a_idx = h.meta.grouplikes.iter().position(|g| *g == data.a);
    let alpha_idx = h.meta.characters.iter().position(|c| *c == data.alpha.0);
    let eps_idx = h.meta.characters.iter().position(|c| c == h.counit());
    let gmul = |x: &Vector, y: &Vector| h.mul_vec(x, y);
    let cmul = |x: &Vector, y: &Vector| h.convolve(x, y);
    let budget_exceeded = |reason: String| AIVerdict::Inconclusive {
        reason,
        branches: Vec::new(),
        residuals: Vec::new(),
    };
    let gfixed: Vec<usize> = unit_idx.into_iter().chain(a_idx).collect();
    let xfixed: Vec<usize> = eps_idx.into_iter().chain(alpha_idx).collect();
    let gauts = match group_automorphisms(&h.meta.grouplikes, &gmul, &gfixed, opts.branch_budget) {
        Ok(v) => v,
        Err(HopfError::BranchBudgetExceeded(b)) => {
            return Ok(budget_exceeded(format!("grouplike automorphism search exceeded {b} candidates")))
        }
        Err(e) => return Err(e),
    };
    let xauts = match group_automorphisms(&h.meta.characters, &cmul, &xfixed, opts.branch_budget) {
        Ok(v) => v,
        Err(HopfError::BranchBudgetExceeded(b)) => {
            return Ok(budget_exceeded(format!("character automorphism search exceeded {b} candidates")))
        }
        Err(e) => return Err(e),
    };
    let total = roots.len() * gauts.len() * xauts.len();
    if total > opts.branch_budget {
        return Ok(budget_exceeded(format!(
            "{total} branches exceed the budget of {}",
            opts.branch_budget
        )));
    }

    let glabel = |t: usize| h.format_element(&h.meta.grouplikes[t]);
    let mut logs = Vec::new();
    let mut residuals = Vec::new();
    let mut sign_search_done = false;
    for r_sigma in &roots {
        for ga in &gauts {
            for xa in &xauts {
                let assignment = Assignment {
                    grouplikes: ga.clone(),
                    characters: xa.clone(),
                };
                let branch = logs.len();
                let mut log = BranchLog {
                    branch,
                    r_sigma: r_sigma.to_string(),
                    grouplikes: ga
                        .iter()
                        .enumerate()
                        .filter(|(t, u)| t != *u)
                        .map(|(t, &u)| format!("{} -> {}", glabel(t), glabel(u)))
                        .collect(),
                    characters: xa
                        .iter()
                        .enumerate()
                        .filter(|(t, u)| t != *u)
                        .map(|(t, &u)| format!("chi{t} -> chi{u}"))
                        .collect(),
                    residual_dim: None,
                    outcome: String::new(),
                };
                match propagate_linear_constraints(&h, &data, r_sigma, &assignment) {
                    Err(HopfError::EmptyBranch(c)) => {
                        log.outcome = format!("inconsistent linear constraints at: {c}");
                        logs.push(log);
                    }
                    Err(e) => return Err(e),
                    Ok(fam) => {
                        log.residual_dim = Some(fam.directions.len());
                        let candidate = fam.particular.clone();
                        let violated = h.meta.relations.iter().find(|rel| !relation_preserved(&h, &candidate, rel));
                        let report = verify_companion_with(&h, &data, &candidate)?;
                        if violated.is_none() && report.passed() {
                            log.outcome = "candidate is a companion".into();
                            logs.push(log);
                            return Ok(AIVerdict::Witness {
                                sigma: candidate,
                                r_sigma: r_sigma.clone(),
                                method: WitnessMethod::LinearConstraints,
                                branches: logs,
                            });
                        }
                        let failure = match violated {
                            Some(rel) => format!("{} not preserved", rel.label),
                            None => {
                                let f = report.checks.failed();
                                format!("{} fails", f.first().map_or("companion check", |c| c.axiom.as_str()))
                            }
                        };
                        if fam.directions.is_empty() {
                            log.outcome = format!("unique candidate: {failure}");
                            logs.push(log);
                        } else {
                            log.outcome = format!("particular point: {failure}");
                            logs.push(log);
                            residuals.push(ResidualFamily {
                                branch,
                                family: fam,
                                particular_verified: false,
                            });
                            if !sign_search_done {
                                sign_search_done = true;
                                if let Some(sigma) = sign_search_companion(&h, &e)? {
                                    if let Some(v) = witness(sigma, WitnessMethod::SignSearch, logs.clone())? {
                                        return Ok(v);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if residuals.is_empty() {
        Ok(AIVerdict::NotAI {
            alpha_of_a: data.alpha_of_a.clone(),
            certificate: logs,
        })
    } else {
        Ok(AIVerdict::Inconclusive {
            reason: "linear constraints leave a positive-dimensional family and no sign pattern of the eigenbasis gives a companion".into(),
            branches: logs,
            residuals,
        })
    }
}

/// Linear system over GF(2), rows as bitsets with the right-hand side in a separate bit.
struct Gf2System {
    nvars: usize,
    pivots: BTreeMap<usize, (Vec<u64>, bool)>,
}

impl Gf2System {
    fn new(nvars: usize) -> Gf2System {
        Gf2System {
            nvars,
            pivots: BTreeMap::new(),
        }
    }

    /// `xor of vars = rhs`; returns false when inconsistent.
    fn add(&mut self, vars: &[usize], rhs: bool) -> bool {
        let mut row = vec![0u64; self.nvars.div_ceil(64)];
        for &v in vars {
            row[v / 64] ^= 1 << (v % 64);
        }
        let mut rhs = rhs;
        for (&p, (prow, prhs)) in &self.pivots {
            if row[p / 64] >> (p % 64) & 1 == 1 {
                for (a, b) in row.iter_mut().zip(prow) {
                    *a ^= b;
                }
                rhs ^= prhs;
            }
        }
        let Some(p) = (0..self.nvars).find(|&v| row[v / 64] >> (v % 64) & 1 == 1) else {
            return !rhs;
        };
        for (prow, prhs) in self.pivots.values_mut() {
            if prow[p / 64] >> (p % 64) & 1 == 1 {
                for (a, b) in prow.iter_mut().zip(&row) {
                    *a ^= b;
                }
                *prhs ^= rhs;
            }
        }
        self.pivots.insert(p, (row, rhs));
        true
    }

    /// Solution with all free variables zero.
    fn solution(&self) -> Vec<bool> {
        let mut x = vec![false; self.nvars];
        for (&p, (_, rhs)) in &self.pivots {
            x[p] = *rhs;
        }
        x
    }
}

/// Searches the splittings given by signs on the stored eigenbasis: the sign conditions are linear
/// over GF(2). Any solution is a Hopf companion.
pub fn sign_search_companion(h: &HopfAlgebra, e: &EigenData) -> Result<Option<LinearMap>> {
    let ad = Adapted::new(e, &Splitting::trivial(e))?;
    let n = ad.vectors.len();
    let mut sys = Gf2System::new(n);
    let wrap_bit = |a: usize, b: usize| e.wrap(ad.tags[a].1, ad.tags[b].1) < 0;
    let mut ok = true;
    for (c, _) in ad.coords(h.unit()) {
        ok &= sys.add(&[c], false);
    }
    for (c, v) in ad.vectors.iter().enumerate() {
        if !h.counit_of(v).is_zero() {
            ok &= sys.add(&[c], false);
        }
    }
    let products: Vec<Vec<(usize, usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut eqs = Vec::new();
            for b in 0..n {
                let prod = h.mul_vec(&ad.vectors[a], &ad.vectors[b]);
                for (c, _) in ad.coords(&prod) {
                    eqs.push((a, b, c));
                }
            }
            eqs
        })
        .collect();
    for (a, b, c) in products.into_iter().flatten() {
        ok &= sys.add(&[a, b, c], wrap_bit(a, b));
        if !ok {
            return Ok(None);
        }
    }
    let coproducts: Vec<Vec<(usize, usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|c| {
            let w = h.comul_sparse(&ad.vectors[c]);
            ad.coords2(&w).into_iter().map(|((a, b), _)| (a, b, c)).collect()
        })
        .collect();
    for (a, b, c) in coproducts.into_iter().flatten() {
        ok &= sys.add(&[a, b, c], wrap_bit(a, b));
        if !ok {
            return Ok(None);
        }
    }
    if !ok {
        return Ok(None);
    }
    let signs: Vec<bool> = sys.solution().into_iter().map(|minus| !minus).collect();
    let split = Splitting::from_signs(e, &signs);
    let sigma = sqrt_from_splitting(e, &split)?;
    Ok(is_hopf_morphism(&sigma, h, h)?.passed.then_some(sigma))
}
