//! Duals, tensor products, bicrossed products and the Drinfel'd double, with companion lifts.
//!
//! Basis conventions: the dual uses the dual basis in source order, labelled `e*`; tensor
//! products and bicrossed products use row-major pairs `(i, j) -> i * dim(B) + j`; the double
//! `D(H) = H^(v cop) |><| H` uses `(dual index, primal index)` row-major.

use rayon::prelude::*;

use crate::companion::verify_companion;
use crate::cyclofield::{lcm, CycloField, CycloNum};
use crate::error::{HopfError, Result};
use crate::hopf::{HopfAlgebra, LinearMap, Meta, Relation, RelationSide, SkewPrimitive, Sparse2, Tensor3};
use crate::linalg::{scale_vec, Vector};

fn common_field(a: &HopfAlgebra, b: &HopfAlgebra) -> CycloField {
    CycloField::new(lcm(a.field().conductor(), b.field().conductor()))
}

fn lift(h: &HopfAlgebra, field: &CycloField) -> HopfAlgebra {
    h.with_field(field).expect("embedding into a multiple of the conductor")
}

fn lift_map(f: &LinearMap, field: &CycloField) -> LinearMap {
    LinearMap::new(f.matrix().embed(field).expect("embedding into a multiple of the conductor"))
}

fn kron_vec(a: &[CycloNum], b: &[CycloNum]) -> Vector {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn add_into(v: &mut [CycloNum], c: &CycloNum, w: &[CycloNum]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in v.iter_mut().zip(w) {
        if !y.is_zero() {
            *x += &(c * y);
        }
    }
}

/// `H^*` with transposed structure. The declared characters of `H` become the grouplikes of the
/// dual and vice versa; defining relations move to the coalgebra side.
pub fn dual_hopf(h: &HopfAlgebra) -> HopfAlgebra {
    let n = h.dim();
    let mul = h.mul_tensor();
    let comul = h.comul_tensor();
    let dual_mul = Tensor3::from_fn(n, |i, j, k| comul.get(k, i, j).clone());
    let dual_comul = Tensor3::from_fn(n, |k, i, j| mul.get(i, j, k).clone());
    let flip = |side| match side {
        RelationSide::Algebra => RelationSide::Coalgebra,
        RelationSide::Coalgebra => RelationSide::Algebra,
    };
    let meta = Meta {
        family: format!("dual({})", h.meta.family),
        params: h.meta.params.clone(),
        pointed: false,
        grouplikes: h.meta.characters.clone(),
        characters: h.meta.grouplikes.clone(),
        skew_primitives: Vec::new(),
        relations: h
            .meta
            .relations
            .iter()
            .map(|r| Relation {
                side: flip(r.side),
                ..r.clone()
            })
            .collect(),
    };
    HopfAlgebra::new(
        h.field().clone(),
        h.labels().iter().map(|l| format!("{l}*")).collect(),
        dual_mul,
        h.counit().clone(),
        dual_comul,
        h.unit().clone(),
        h.antipode().transpose(),
        meta,
    )
    .expect("transposed tensors have matching shapes")
}

/// `sigma^*`, a companion of `H^*` when `sigma` is one of `H`.
pub fn companion_dual(sigma: &LinearMap) -> LinearMap {
    sigma.transpose()
}

/// `H^(v cop)`: the dual with opposite comultiplication; its antipode is `(S^-1)^*`.
pub fn cop_dual(h: &HopfAlgebra) -> Result<HopfAlgebra> {
    let s_inv = h.antipode_inverse()?;
    let d = dual_hopf(h);
    let n = h.dim();
    let comul = d.comul_tensor();
    let flipped = Tensor3::from_fn(n, |k, i, j| comul.get(k, j, i).clone());
    let meta = Meta {
        family: format!("dualcop({})", h.meta.family),
        relations: Vec::new(),
        ..d.meta.clone()
    };
    HopfAlgebra::new(
        h.field().clone(),
        d.labels().to_vec(),
        d.mul_tensor().clone(),
        d.unit().clone(),
        flipped,
        d.counit().clone(),
        s_inv.transpose(),
        meta,
    )
}

fn pair_labels(a: &HopfAlgebra, b: &HopfAlgebra) -> Vec<String> {
    a.labels()
        .iter()
        .flat_map(|x| b.labels().iter().map(move |y| format!("{x}⊗{y}")))
        .collect()
}

/// Tensor coalgebra structure on row-major pairs.
fn tensor_comul(a: &HopfAlgebra, b: &HopfAlgebra) -> Tensor3 {
    let (p, q) = (a.dim(), b.dim());
    let n = p * q;
    let field = a.field();
    let mut data = vec![field.zero(); n * n * n];
    for i in 0..p {
        for (i1, i2, c) in a.comul_tensor().nonzero_bc(i) {
            for j in 0..q {
                for (j1, j2, d) in b.comul_tensor().nonzero_bc(j) {
                    let k = i * q + j;
                    let l = i1 * q + j1;
                    let m = i2 * q + j2;
                    data[(k * n + l) * n + m] += &(c * d);
                }
            }
        }
    }
    Tensor3::from_dense(n, data)
}

fn tensor_meta(a: &HopfAlgebra, b: &HopfAlgebra, family: String) -> Meta {
    let ua = a.unit();
    let ub = b.unit();
    let gb = b.meta.grouplikes.len();
    let mut grouplikes = Vec::new();
    for g in &a.meta.grouplikes {
        for h in &b.meta.grouplikes {
            grouplikes.push(kron_vec(g, h));
        }
    }
    let mut characters = Vec::new();
    for f in &a.meta.characters {
        for h in &b.meta.characters {
            characters.push(kron_vec(f, h));
        }
    }
    let mut skew_primitives = Vec::new();
    if !a.meta.grouplikes.is_empty() && !b.meta.grouplikes.is_empty() {
        for p in &a.meta.skew_primitives {
            skew_primitives.push(SkewPrimitive {
                label: format!("{}⊗1", p.label),
                element: kron_vec(&p.element, ub),
                g: p.g * gb,
                h: p.h * gb,
            });
        }
        for p in &b.meta.skew_primitives {
            skew_primitives.push(SkewPrimitive {
                label: format!("1⊗{}", p.label),
                element: kron_vec(ua, &p.element),
                g: p.g,
                h: p.h,
            });
        }
    }
    let lift_rel = |r: &Relation, left: bool, other: &Vector| Relation {
        label: r.label.clone(),
        side: r.side,
        terms: r
            .terms
            .iter()
            .map(|(c, fs)| {
                let fs = fs
                    .iter()
                    .map(|f| if left { kron_vec(f, other) } else { kron_vec(other, f) })
                    .collect();
                (c.clone(), fs)
            })
            .collect(),
    };
    let mut relations = Vec::new();
    for r in &a.meta.relations {
        let other = if r.side == RelationSide::Algebra { ub } else { b.counit() };
        relations.push(lift_rel(r, true, other));
    }
    for r in &b.meta.relations {
        let other = if r.side == RelationSide::Algebra { ua } else { a.counit() };
        relations.push(lift_rel(r, false, other));
    }
    Meta {
        family,
        params: Default::default(),
        pointed: a.meta.pointed && b.meta.pointed,
        grouplikes,
        characters,
        skew_primitives,
        relations,
    }
}

/// `A (x) B` with componentwise structure, over the lcm of the two conductors.
pub fn tensor_product(a: &HopfAlgebra, b: &HopfAlgebra) -> HopfAlgebra {
    let field = common_field(a, b);
    let (a, b) = (lift(a, &field), lift(b, &field));
    let (p, q) = (a.dim(), b.dim());
    let n = p * q;
    let (ma, mb) = (a.mul_tensor(), b.mul_tensor());
    let mut mul = vec![field.zero(); n * n * n];
    for i in 0..p {
        for k in 0..p {
            for (c1, x) in ma.nonzero_c(i, k) {
                for j in 0..q {
                    for l in 0..q {
                        for (c2, y) in mb.nonzero_c(j, l) {
                            mul[((i * q + j) * n + (k * q + l)) * n + c1 * q + c2] += &(x * y);
                        }
                    }
                }
            }
        }
    }
    let family = format!("{}⊗{}", a.meta.family, b.meta.family);
    let meta = tensor_meta(&a, &b, family);
    HopfAlgebra::new(
        field.clone(),
        pair_labels(&a, &b),
        Tensor3::from_dense(n, mul),
        kron_vec(a.unit(), b.unit()),
        tensor_comul(&a, &b),
        kron_vec(a.counit(), b.counit()),
        a.antipode().tensor(b.antipode()),
        meta,
    )
    .expect("tensor shapes match")
}

/// `sigma_A (x) sigma_B` on the row-major tensor basis.
pub fn companion_tensor(sigma_a: &LinearMap, sigma_b: &LinearMap) -> LinearMap {
    let field = CycloField::new(lcm(
        sigma_a.matrix().field().conductor(),
        sigma_b.matrix().field().conductor(),
    ));
    lift_map(sigma_a, &field).tensor(&lift_map(sigma_b, &field))
}

/// Exact actions of a matched pair `(A, H)`: `left[x][a] = x |> a` in `A`, `right[x][a] = x <| a` in `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPairActions {
    pub left: Vec<Vec<Vector>>,
    pub right: Vec<Vec<Vector>>,
}

impl MatchedPairActions {
    /// `x |> a = eps(x) a`, `x <| a = eps(a) x`; the bicrossed product is then `A (x) H`.
    pub fn trivial(a: &HopfAlgebra, h: &HopfAlgebra) -> MatchedPairActions {
        let left = (0..h.dim())
            .map(|x| {
                (0..a.dim())
                    .map(|i| scale_vec(&h.counit()[x], &a.basis(i)))
                    .collect()
            })
            .collect();
        let right = (0..h.dim())
            .map(|x| {
                (0..a.dim())
                    .map(|i| scale_vec(&a.counit()[i], &h.basis(x)))
                    .collect()
            })
            .collect();
        MatchedPairActions { left, right }
    }
}

/// Iterated coproduct `Delta^2(e_k)` as `(i, j, l, coefficient)`.
fn comul3(h: &HopfAlgebra, k: usize) -> Vec<(usize, usize, usize, CycloNum)> {
    let mut out = Vec::new();
    for (a, b, c) in h.comul_tensor().nonzero_bc(k) {
        for (d, e, c2) in h.comul_tensor().nonzero_bc(b) {
            out.push((a, d, e, c * c2));
        }
    }
    out
}

/// The actions with `D(H) = H^(v cop) |><| H`:
/// `(x |> alpha)(y) = sum alpha(S^-1(x_2) y x_1)` and `x <| alpha = sum alpha(S^-1(x_3) x_1) x_2`.
pub fn double_actions(h: &HopfAlgebra) -> Result<MatchedPairActions> {
    let n = h.dim();
    let s_inv = h.antipode_inverse()?;
    let basis: Vec<Vector> = (0..n).map(|i| h.basis(i)).collect();
    let s_inv_basis: Vec<Vector> = (0..n).map(|i| s_inv.image(i)).collect();
    let results: Vec<(Vec<Vector>, Vec<Vector>)> = (0..n)
        .into_par_iter()
        .map(|x| {
            // (x |> e^k)(e_y) = sum [S^-1(x_2) e_y x_1]_k
            let mut left = vec![h.zero(); n];
            for (x1, x2, c) in h.comul_tensor().nonzero_bc(x) {
                for (y, e_y) in basis.iter().enumerate() {
                    let v = h.product(&[s_inv_basis[x2].clone(), e_y.clone(), basis[x1].clone()]);
                    for (k, vk) in v.iter().enumerate() {
                        if !vk.is_zero() {
                            left[k][y] += &(c * vk);
                        }
                    }
                }
            }
            // x <| e^k = sum [S^-1(x_3) x_1]_k x_2
            let mut right = vec![h.zero(); n];
            for (x1, x2, x3, c) in comul3(h, x) {
                let v = h.mul_vec(&s_inv_basis[x3], &basis[x1]);
                for (k, vk) in v.iter().enumerate() {
                    if !vk.is_zero() {
                        right[k][x2] += &(&c * vk);
                    }
                }
            }
            (left, right)
        })
        .collect();
    let (left, right) = results.into_iter().unzip();
    Ok(MatchedPairActions { left, right })
}

/// Builds a Hopf algebra on `A (x) H` from `(1 (x) x)(b (x) 1)` for basis elements, with the
/// tensor coalgebra and antipode `S(a x) = S_H(x) S_A(a)`.
fn from_cross(
    a: &HopfAlgebra,
    h: &HopfAlgebra,
    cross: &[Vec<Sparse2>],
    labels: Vec<String>,
    antipode_a: &LinearMap,
    meta: Meta,
) -> Result<HopfAlgebra> {
    let (p, q) = (a.dim(), h.dim());
    let n = p * q;
    let field = a.field().clone();
    let a_prod: Vec<Vec<Vector>> = (0..p).map(|i| (0..p).map(|k| a.mul_basis(i, k)).collect()).collect();
    let h_prod: Vec<Vec<Vector>> = (0..q).map(|j| (0..q).map(|l| h.mul_basis(j, l)).collect()).collect();
    // (a_i (x) x_j)(b_k (x) y_l) = sum coef (a_i c) (x) (z y_l) over (c, z) in cross[j][k]
    let product = |i: usize, j: usize, k: usize, l: usize| -> Vector {
        let mut out = vec![field.zero(); n];
        for (&(c, z), coef) in &cross[j][k] {
            let left = &a_prod[i][c];
            let right = &h_prod[z][l];
            for (u, au) in left.iter().enumerate() {
                if au.is_zero() {
                    continue;
                }
                let t = coef * au;
                add_into(&mut out[u * q..(u + 1) * q], &t, right);
            }
        }
        out
    };
    let rows: Vec<Vec<CycloNum>> = (0..n * n)
        .into_par_iter()
        .map(|ab| {
            let (s, t) = (ab / n, ab % n);
            product(s / q, s % q, t / q, t % q)
        })
        .collect();
    let mul = Tensor3::from_dense(n, rows.into_iter().flatten().collect());
    let unit = kron_vec(a.unit(), h.unit());
    let counit = kron_vec(a.counit(), h.counit());
    let comul = tensor_comul(a, h);
    let placeholder = HopfAlgebra::new(
        field.clone(),
        labels.clone(),
        mul.clone(),
        unit.clone(),
        comul.clone(),
        counit.clone(),
        LinearMap::identity(&field, n),
        Meta::default(),
    )?;
    // S(b (x) x) = (1 (x) S_H x)(S_A b (x) 1)
    let images: Vec<Vector> = (0..n)
        .into_par_iter()
        .map(|k| {
            let (b, x) = (k / q, k % q);
            let left = kron_vec(a.unit(), &h.antipode().image(x));
            let right = kron_vec(&antipode_a.image(b), h.unit());
            placeholder.mul_vec(&left, &right)
        })
        .collect();
    HopfAlgebra::new(field, labels, mul, unit, comul, counit, LinearMap::from_images(&images), meta)
}

fn bicrossed_meta(a: &HopfAlgebra, h: &HopfAlgebra, family: String) -> Meta {
    let mut grouplikes = Vec::new();
    for g in &a.meta.grouplikes {
        for x in &h.meta.grouplikes {
            grouplikes.push(kron_vec(g, x));
        }
    }
    Meta {
        family,
        grouplikes,
        ..Meta::default()
    }
}

/// `A |><| H` with `(a (x) x)(b (x) y) = sum a (x_1 |> b_1) (x) (x_2 <| b_2) y`; axioms are checked
/// and a failure is reported as `NotAMatchedPair`.
pub fn bicrossed_product(a: &HopfAlgebra, h: &HopfAlgebra, actions: &MatchedPairActions) -> Result<HopfAlgebra> {
    if a.field() != h.field() {
        return Err(HopfError::ShapeError("factors of a bicrossed product must share a field".into()));
    }
    let (p, q) = (a.dim(), h.dim());
    let shape_ok = actions.left.len() == q
        && actions.right.len() == q
        && actions.left.iter().all(|r| r.len() == p && r.iter().all(|v| v.len() == p))
        && actions.right.iter().all(|r| r.len() == p && r.iter().all(|v| v.len() == q));
    if !shape_ok {
        return Err(HopfError::ShapeError(format!("actions do not match dimensions ({p}, {q})")));
    }
    let cross: Vec<Vec<Sparse2>> = (0..q)
        .into_par_iter()
        .map(|x| {
            (0..p)
                .map(|b| {
                    let mut acc = Sparse2::new();
                    for (x1, x2, c) in h.comul_tensor().nonzero_bc(x) {
                        for (b1, b2, d) in a.comul_tensor().nonzero_bc(b) {
                            let cd = c * d;
                            let l = &actions.left[x1][b1];
                            let r = &actions.right[x2][b2];
                            for (u, lu) in l.iter().enumerate() {
                                if lu.is_zero() {
                                    continue;
                                }
                                for (v, rv) in r.iter().enumerate() {
                                    if !rv.is_zero() {
                                        let e = acc.entry((u, v)).or_insert_with(|| a.field().zero());
                                        *e += &(&cd * &(lu * rv));
                                    }
                                }
                            }
                        }
                    }
                    acc.retain(|_, c| !c.is_zero());
                    acc
                })
                .collect()
        })
        .collect();
    let family = format!("{}|><|{}", a.meta.family, h.meta.family);
    let meta = bicrossed_meta(a, h, family);
    let built = from_cross(a, h, &cross, pair_labels(a, h), a.antipode(), meta)?;
    let report = built.verify_axioms();
    if let Some(f) = report.failed().first() {
        return Err(HopfError::NotAMatchedPair(format!(
            "{} fails at {}",
            f.axiom,
            f.first_counterexample.clone().unwrap_or_default()
        )));
    }
    Ok(built)
}

/// Checks `sigma_A(x |> a) = sigma_H(x) |> sigma_A(a)` and `sigma_H(x <| a) = sigma_H(x) <| sigma_A(a)`
/// on basis pairs, then returns `sigma(a x) = sigma_A(a) sigma_H(x)` after verifying it.
pub fn matched_pair_companion(
    a: &HopfAlgebra,
    h: &HopfAlgebra,
    actions: &MatchedPairActions,
    sigma_a: &LinearMap,
    sigma_h: &LinearMap,
) -> Result<LinearMap> {
    let product = bicrossed_product(a, h, actions)?;
    // bilinear extension of an action to arbitrary vectors
    let act = |table: &Vec<Vec<Vector>>, x: &[CycloNum], b: &[CycloNum], dim: usize| -> Vector {
        let mut out = vec![a.field().zero(); dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, bk) in b.iter().enumerate() {
                if !bk.is_zero() {
                    add_into(&mut out, &(xi * bk), &table[i][k]);
                }
            }
        }
        out
    };
    for x in 0..h.dim() {
        for b in 0..a.dim() {
            let sx = sigma_h.image(x);
            let sb = sigma_a.image(b);
            if sigma_a.apply(&actions.left[x][b]) != act(&actions.left, &sx, &sb, a.dim()) {
                return Err(HopfError::CompatibilityFailure(format!(
                    "sigma_A(x |> a) != sigma_H(x) |> sigma_A(a) at ({}, {})",
                    h.labels()[x],
                    a.labels()[b]
                )));
            }
            if sigma_h.apply(&actions.right[x][b]) != act(&actions.right, &sx, &sb, h.dim()) {
                return Err(HopfError::CompatibilityFailure(format!(
                    "sigma_H(x <| a) != sigma_H(x) <| sigma_A(a) at ({}, {})",
                    h.labels()[x],
                    a.labels()[b]
                )));
            }
        }
    }
    let sigma = sigma_a.tensor(sigma_h);
    let report = verify_companion(&product, &sigma)?;
    if !report.passed() {
        let f = report.checks.failed();
        return Err(HopfError::CompatibilityFailure(format!(
            "sigma_A (x) sigma_H is not a companion of the bicrossed product: {} fails",
            f.first().map_or("", |c| c.axiom.as_str())
        )));
    }
    Ok(sigma)
}

/// `D(H)` from the explicit formula
/// `(f (x) a)(g (x) b) = sum f g(S^-1(a_3) ? a_1) (x) a_2 b` on `H^(v cop) (x) H`.
pub fn drinfeld_double(h: &HopfAlgebra) -> Result<HopfAlgebra> {
    let n = h.dim();
    let x = cop_dual(h)?;
    let s_inv = h.antipode_inverse()?;
    // cross[a][k] = (1 (x) e_a)(e^k (x) 1)
    let cross: Vec<Vec<Sparse2>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut out = vec![Sparse2::new(); n];
            for (a1, a2, a3, c) in comul3(h, a) {
                let left = s_inv.image(a3);
                for z in 0..n {
                    let v = h.mul_vec(&h.mul_vec(&left, &h.basis(z)), &h.basis(a1));
                    for (k, vk) in v.iter().enumerate() {
                        if !vk.is_zero() {
                            let e = out[k].entry((z, a2)).or_insert_with(|| h.field().zero());
                            *e += &(&c * vk);
                        }
                    }
                }
            }
            for m in out.iter_mut() {
                m.retain(|_, c| !c.is_zero());
            }
            out
        })
        .collect();
    let labels = pair_labels(&x, h);
    let mut meta = Meta {
        family: format!("D({})", h.meta.family),
        ..Meta::default()
    };
    for chi in &h.meta.characters {
        for g in &h.meta.grouplikes {
            meta.grouplikes.push(kron_vec(chi, g));
        }
    }
    from_cross(&x, h, &cross, labels, x.antipode(), meta)
}

/// `sigma_D(alpha (x) x) = (alpha o sigma^-1) (x) sigma(x)`, verified to be a companion of `D(H)`.
pub fn companion_double(h: &HopfAlgebra, double: &HopfAlgebra, sigma: &LinearMap) -> Result<LinearMap> {
    if double.dim() != h.dim() * h.dim() {
        return Err(HopfError::ShapeError("second argument is not the double of the first".into()));
    }
    let sigma_d = double_companion_map(sigma)?;
    let report = verify_companion(double, &sigma_d)?;
    if !report.passed() {
        let f = report.checks.failed();
        return Err(HopfError::CompatibilityFailure(format!(
            "lifted map is not a companion of D(H): {} fails",
            f.first().map_or("", |c| c.axiom.as_str())
        )));
    }
    Ok(sigma_d)
}

/// The lifted map `(sigma^-1)^* (x) sigma`, without verification.
pub fn double_companion_map(sigma: &LinearMap) -> Result<LinearMap> {
    Ok(sigma.inverse()?.transpose().tensor(sigma))
}

/// Companion of `H^(v cop)` induced by a companion of `H`.
pub fn companion_cop_dual(sigma: &LinearMap) -> Result<LinearMap> {
    Ok(sigma.inverse()?.transpose())
}
