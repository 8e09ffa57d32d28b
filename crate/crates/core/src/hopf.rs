//! Structure-constant Hopf algebras and exact checks of the Hopf axioms and of morphisms.
//!
//! Conventions: `mul[i][j][k]` is the coefficient of `e_k` in `e_i e_j`, `comul[k][i][j]` the
//! coefficient of `e_i (x) e_j` in `Delta(e_k)`, and a [`LinearMap`] matrix holds `f(e_j)` in
//! column `j`. Elements of `H (x) H` are dense `n*n` vectors indexed by `i*n + j`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclofield::{CycloField, CycloNum};
use crate::error::{HopfError, Result};
use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, Matrix, Vector};

/// Dense `n x n x n` tensor with nonzero indices for both access patterns we need.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<CycloNum>,
    /// nonzero `c` for each `(a, b)`
    by_ab: Vec<Vec<usize>>,
    /// nonzero `(b, c)` for each `a`
    by_a: Vec<Vec<(usize, usize)>>,
}

impl fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor3(n = {}, nnz = {})", self.n, self.nnz())
    }
}

impl Tensor3 {
    pub fn from_dense(n: usize, data: Vec<CycloNum>) -> Tensor3 {
        assert_eq!(data.len(), n * n * n, "tensor size");
        let mut by_ab = vec![Vec::new(); n * n];
        let mut by_a = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !data[(a * n + b) * n + c].is_zero() {
                        by_ab[a * n + b].push(c);
                        by_a[a].push((b, c));
                    }
                }
            }
        }
        Tensor3 {
            n,
            data,
            by_ab,
            by_a,
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> CycloNum) -> Tensor3 {
        let mut data = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    data.push(f(a, b, c));
                }
            }
        }
        Tensor3::from_dense(n, data)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &CycloNum {
        &self.data[(a * self.n + b) * self.n + c]
    }

    pub fn nonzero_c(&self, a: usize, b: usize) -> impl Iterator<Item = (usize, &CycloNum)> {
        self.by_ab[a * self.n + b]
            .iter()
            .map(move |&c| (c, self.get(a, b, c)))
    }

    pub fn nonzero_bc(&self, a: usize) -> impl Iterator<Item = (usize, usize, &CycloNum)> {
        self.by_a[a].iter().map(move |&(b, c)| (b, c, self.get(a, b, c)))
    }

    pub fn nnz(&self) -> usize {
        self.by_a.iter().map(Vec::len).sum()
    }

    pub fn dense(&self) -> &[CycloNum] {
        &self.data
    }

    pub fn embed(&self, field: &CycloField) -> Result<Tensor3> {
        Ok(Tensor3 {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|x| x.embed(field))
                .collect::<Result<_>>()?,
            by_ab: self.by_ab.clone(),
            by_a: self.by_a.clone(),
        })
    }
}

/// A linear map between algebras, `f(e_j)` = column `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearMap {
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> LinearMap {
        LinearMap { matrix }
    }

    pub fn identity(field: &CycloField, n: usize) -> LinearMap {
        LinearMap::new(Matrix::identity(field, n))
    }

    /// Map sending `e_j` to `images[j]`.
    pub fn from_images(images: &[Vector]) -> LinearMap {
        LinearMap::new(Matrix::from_columns(images))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn image(&self, j: usize) -> Vector {
        self.matrix.column(j)
    }

    pub fn apply(&self, v: &[CycloNum]) -> Vector {
        self.matrix.apply(v)
    }

    /// `self o other`
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap::new(self.matrix.mul(&other.matrix))
    }

    pub fn pow(&self, e: u32) -> LinearMap {
        LinearMap::new(self.matrix.pow(e))
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        Ok(LinearMap::new(self.matrix.inverse()?))
    }

    pub fn transpose(&self) -> LinearMap {
        LinearMap::new(self.matrix.transpose())
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn tensor(&self, other: &LinearMap) -> LinearMap {
        LinearMap::new(self.matrix.kron(&other.matrix))
    }
}

/// An element of the dual space, as coordinates against the dual basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Functional(pub Vector);

impl Functional {
    pub fn eval(&self, v: &[CycloNum]) -> CycloNum {
        crate::linalg::dot(&self.0, v)
    }

    /// `self o f`
    pub fn compose(&self, f: &LinearMap) -> Functional {
        Functional(f.matrix().apply_left(&self.0))
    }

    pub fn scale(&self, c: &CycloNum) -> Functional {
        Functional(crate::linalg::scale_vec(c, &self.0))
    }
}

/// A `(g, h)`-primitive element: `Delta(x) = x (x) g + h (x) x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewPrimitive {
    pub label: String,
    pub element: Vector,
    /// index into `Meta::grouplikes`
    pub g: usize,
    /// index into `Meta::grouplikes`
    pub h: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationSide {
    /// The relation holds among elements of the algebra itself.
    Algebra,
    /// The relation holds in the dual (convolution) algebra; checked through transposes.
    Coalgebra,
}

/// A defining relation `sum_t c_t * prod(factors_t) = 0`, kept to name violations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub label: String,
    pub side: RelationSide,
    pub terms: Vec<(CycloNum, Vec<Vector>)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default)]
    pub pointed: bool,
    /// Declared grouplike elements; the first one is the unit.
    #[serde(default)]
    pub grouplikes: Vec<Vector>,
    /// Declared algebra characters `H -> K`; the first one is the counit.
    #[serde(default)]
    pub characters: Vec<Vector>,
    #[serde(default)]
    pub skew_primitives: Vec<SkewPrimitive>,
    #[serde(default)]
    pub relations: Vec<Relation>,
}

/// A finite-dimensional Hopf algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct HopfAlgebra {
    field: CycloField,
    labels: Vec<String>,
    mul: Tensor3,
    unit: Vector,
    comul: Tensor3,
    counit: Vector,
    antipode: LinearMap,
    pub meta: Meta,
}

/// Sparse element of `H (x) H`.
pub type Sparse2 = BTreeMap<(usize, usize), CycloNum>;

fn add_to(map: &mut Sparse2, key: (usize, usize), v: CycloNum) {
    if v.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(x) => {
            *x += &v;
            if x.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, v);
        }
    }
}

impl HopfAlgebra {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: CycloField,
        labels: Vec<String>,
        mul: Tensor3,
        unit: Vector,
        comul: Tensor3,
        counit: Vector,
        antipode: LinearMap,
        meta: Meta,
    ) -> Result<HopfAlgebra> {
        let n = labels.len();
        let shape_ok = n > 0
            && mul.dim() == n
            && comul.dim() == n
            && unit.len() == n
            && counit.len() == n
            && antipode.source_dim() == n
            && antipode.target_dim() == n;
        if !shape_ok {
            return Err(HopfError::ShapeError(format!(
                "inconsistent structure tensors for dimension {n}"
            )));
        }
        let fields_ok = unit.iter().chain(&counit).all(|x| *x.field() == field)
            && mul.dense().first().is_none_or(|x| *x.field() == field)
            && comul.dense().first().is_none_or(|x| *x.field() == field)
            && *antipode.matrix().field() == field;
        if !fields_ok {
            return Err(HopfError::ShapeError(
                "structure constants live in different fields".into(),
            ));
        }
        Ok(HopfAlgebra {
            field,
            labels,
            mul,
            unit,
            comul,
            counit,
            antipode,
            meta,
        })
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul_tensor(&self) -> &Tensor3 {
        &self.mul
    }

    pub fn comul_tensor(&self) -> &Tensor3 {
        &self.comul
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn counit(&self) -> &Vector {
        &self.counit
    }

    pub fn counit_functional(&self) -> Functional {
        Functional(self.counit.clone())
    }

    pub fn antipode(&self) -> &LinearMap {
        &self.antipode
    }

    pub fn s2(&self) -> LinearMap {
        self.antipode.compose(&self.antipode)
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vec(&self.field, self.dim(), i)
    }

    pub fn zero(&self) -> Vector {
        zero_vec(&self.field, self.dim())
    }

    /// Same algebra over a larger conductor.
    pub fn with_field(&self, field: &CycloField) -> Result<HopfAlgebra> {
        if *field == self.field {
            return Ok(self.clone());
        }
        let ev = |v: &Vector| v.iter().map(|x| x.embed(field)).collect::<Result<Vector>>();
        let meta = Meta {
            grouplikes: self.meta.grouplikes.iter().map(ev).collect::<Result<_>>()?,
            characters: self.meta.characters.iter().map(ev).collect::<Result<_>>()?,
            skew_primitives: self
                .meta
                .skew_primitives
                .iter()
                .map(|p| {
                    Ok(SkewPrimitive {
                        element: ev(&p.element)?,
                        ..p.clone()
                    })
                })
                .collect::<Result<_>>()?,
            relations: self
                .meta
                .relations
                .iter()
                .map(|r| {
                    Ok(Relation {
                        terms: r
                            .terms
                            .iter()
                            .map(|(c, fs)| Ok((c.embed(field)?, fs.iter().map(ev).collect::<Result<_>>()?)))
                            .collect::<Result<_>>()?,
                        ..r.clone()
                    })
                })
                .collect::<Result<_>>()?,
            ..self.meta.clone()
        };
        HopfAlgebra::new(
            field.clone(),
            self.labels.clone(),
            self.mul.embed(field)?,
            ev(&self.unit)?,
            self.comul.embed(field)?,
            ev(&self.counit)?,
            LinearMap::new(self.antipode.matrix().embed(field)?),
            meta,
        )
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Vector {
        let mut out = self.zero();
        for (k, c) in self.mul.nonzero_c(i, j) {
            out[k] = c.clone();
        }
        out
    }

    pub fn mul_vec(&self, a: &[CycloNum], b: &[CycloNum]) -> Vector {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.mul.nonzero_c(i, j) {
                    out[k] += &(&xy * c);
                }
            }
        }
        out
    }

    /// Product of a list of elements; the empty product is the unit.
    pub fn product(&self, factors: &[Vector]) -> Vector {
        factors
            .iter()
            .fold(self.unit.clone(), |acc, f| self.mul_vec(&acc, f))
    }

    pub fn power(&self, a: &[CycloNum], e: usize) -> Vector {
        let mut acc = self.unit.clone();
        for _ in 0..e {
            acc = self.mul_vec(&acc, a);
        }
        acc
    }

    pub fn comul_sparse(&self, a: &[CycloNum]) -> Sparse2 {
        let mut out = Sparse2::new();
        for (k, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, j, c) in self.comul.nonzero_bc(k) {
                add_to(&mut out, (i, j), x * c);
            }
        }
        out
    }

    /// `Delta(a)` as a dense `n*n` vector.
    pub fn comul_vec(&self, a: &[CycloNum]) -> Vector {
        let n = self.dim();
        let mut out = zero_vec(&self.field, n * n);
        for ((i, j), v) in self.comul_sparse(a) {
            out[i * n + j] = v;
        }
        out
    }

    pub fn counit_of(&self, a: &[CycloNum]) -> CycloNum {
        crate::linalg::dot(&self.counit, a)
    }

    /// Product in the algebra `H (x) H`.
    pub fn mul2(&self, a: &Sparse2, b: &Sparse2) -> Sparse2 {
        let mut out = Sparse2::new();
        for (&(i, j), x) in a {
            for (&(k, l), y) in b {
                let xy = x * y;
                for (p, c1) in self.mul.nonzero_c(i, k) {
                    let xyc = &xy * c1;
                    for (q, c2) in self.mul.nonzero_c(j, l) {
                        add_to(&mut out, (p, q), &xyc * c2);
                    }
                }
            }
        }
        out
    }

    pub fn is_grouplike(&self, g: &[CycloNum]) -> bool {
        if is_zero_vec(g) || !self.counit_of(g).is_one() {
            return false;
        }
        self.comul_sparse(g) == outer(g, g)
    }

    /// Whether `Delta(x) = x (x) g + h (x) x`.
    pub fn is_skew_primitive(&self, x: &[CycloNum], g: &[CycloNum], h: &[CycloNum]) -> bool {
        let mut rhs = outer(x, g);
        for (k, v) in outer(h, x) {
            add_to(&mut rhs, k, v);
        }
        self.comul_sparse(x) == rhs
    }

    /// Whether the functional is an algebra map `H -> K`.
    pub fn is_character(&self, chi: &[CycloNum]) -> bool {
        let f = |v: &[CycloNum]| crate::linalg::dot(chi, v);
        if !f(&self.unit).is_one() {
            return false;
        }
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| f(&self.mul_basis(i, j)) == &chi[i] * &chi[j]))
    }

    /// Convolution product of two functionals: `(f*g)(x) = sum f(x_1) g(x_2)`.
    pub fn convolve(&self, f: &[CycloNum], g: &[CycloNum]) -> Vector {
        (0..self.dim())
            .map(|k| {
                let mut acc = self.field.zero();
                for (i, j, c) in self.comul.nonzero_bc(k) {
                    if !f[i].is_zero() && !g[j].is_zero() {
                        acc += &(&(c * &f[i]) * &g[j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Human-readable linear combination of basis labels.
    pub fn format_element(&self, v: &[CycloNum]) -> String {
        format_combination(&self.labels, v)
    }

    pub fn verify_axioms(&self) -> AxiomReport {
        verify_axioms(self)
    }

    pub fn verify_metadata(&self) -> AxiomReport {
        verify_metadata(self)
    }

    pub fn antipode_inverse(&self) -> Result<LinearMap> {
        antipode_inverse(self)
    }
}

pub fn outer(a: &[CycloNum], b: &[CycloNum]) -> Sparse2 {
    let mut out = Sparse2::new();
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out.insert((i, j), x * y);
            }
        }
    }
    out
}

pub fn format_combination(labels: &[String], v: &[CycloNum]) -> String {
    let mut terms = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let l = &labels[i];
        let t = if c.is_one() {
            l.clone()
        } else if (-c).is_one() {
            format!("-{l}")
        } else {
            let s = c.to_string();
            if s.contains(' ') {
                format!("({s})*{l}")
            } else {
                format!("{s}*{l}")
            }
        };
        terms.push(t);
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

/// Outcome of one identity checked on every basis tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub failures: usize,
    pub first_counterexample: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn failed(&self) -> Vec<&AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn record(&mut self, axiom: &str, failures: Vec<String>) {
        self.checks.push(AxiomCheck {
            axiom: axiom.into(),
            passed: failures.is_empty(),
            failures: failures.len(),
            first_counterexample: failures.into_iter().next(),
        });
    }
}

fn tuple_label(h: &HopfAlgebra, idx: &[usize]) -> String {
    let parts: Vec<&str> = idx.iter().map(|&i| h.labels[i].as_str()).collect();
    format!("({})", parts.join(", "))
}

/// Checks the Hopf axioms exactly on all basis tuples; every axiom is always evaluated.
pub fn verify_axioms(h: &HopfAlgebra) -> AxiomReport {
    let n = h.dim();
    let products: Vec<Vector> = (0..n * n).map(|p| h.mul_basis(p / n, p % n)).collect();
    let mut report = AxiomReport::default();

    let assoc: Vec<String> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut bad = Vec::new();
            for j in 0..n {
                let ij = &products[i * n + j];
                for k in 0..n {
                    let mut left = h.zero();
                    for (p, c) in ij.iter().enumerate() {
                        axpy(&mut left, c, &products[p * n + k]);
                    }
                    let jk = &products[j * n + k];
                    let mut right = h.zero();
                    for (q, c) in jk.iter().enumerate() {
                        axpy(&mut right, c, &products[i * n + q]);
                    }
                    if left != right {
                        bad.push(tuple_label(h, &[i, j, k]));
                    }
                }
            }
            bad
        })
        .collect();
    report.record("associativity", assoc);

    let mut unit_bad = Vec::new();
    for i in 0..n {
        let e = h.basis(i);
        if h.mul_vec(&h.unit, &e) != e || h.mul_vec(&e, &h.unit) != e {
            unit_bad.push(tuple_label(h, &[i]));
        }
    }
    report.record("unit", unit_bad);

    let coassoc: Vec<String> = (0..n)
        .into_par_iter()
        .filter_map(|k| {
            let mut left: BTreeMap<(usize, usize, usize), CycloNum> = BTreeMap::new();
            let mut right = left.clone();
            for (i, j, c) in h.comul.nonzero_bc(k) {
                for (a, b, d) in h.comul.nonzero_bc(i) {
                    add3(&mut left, (a, b, j), c * d);
                }
                for (a, b, d) in h.comul.nonzero_bc(j) {
                    add3(&mut right, (i, a, b), c * d);
                }
            }
            (left != right).then(|| tuple_label(h, &[k]))
        })
        .collect();
    report.record("coassociativity", coassoc);

    let mut counit_bad = Vec::new();
    for k in 0..n {
        let mut left = h.zero();
        let mut right = h.zero();
        for (i, j, c) in h.comul.nonzero_bc(k) {
            left[j] += &(c * &h.counit[i]);
            right[i] += &(c * &h.counit[j]);
        }
        let e = h.basis(k);
        if left != e || right != e {
            counit_bad.push(tuple_label(h, &[k]));
        }
    }
    report.record("counit", counit_bad);

    let coproducts: Vec<Sparse2> = (0..n).map(|k| h.comul_sparse(&h.basis(k))).collect();
    let mut delta_bad: Vec<String> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut bad = Vec::new();
            for j in 0..n {
                let lhs = h.comul_sparse(&products[i * n + j]);
                let rhs = h.mul2(&coproducts[i], &coproducts[j]);
                if lhs != rhs {
                    bad.push(tuple_label(h, &[i, j]));
                }
            }
            bad
        })
        .collect();
    if h.comul_sparse(&h.unit) != outer(&h.unit, &h.unit) {
        delta_bad.insert(0, "(1)".into());
    }
    report.record("comultiplication is multiplicative", delta_bad);

    let mut eps_bad = Vec::new();
    if !h.counit_of(&h.unit).is_one() {
        eps_bad.push("(1)".into());
    }
    for i in 0..n {
        for j in 0..n {
            if h.counit_of(&products[i * n + j]) != &h.counit[i] * &h.counit[j] {
                eps_bad.push(tuple_label(h, &[i, j]));
            }
        }
    }
    report.record("counit is multiplicative", eps_bad);

    let s = h.antipode.matrix();
    let mut left_bad = Vec::new();
    let mut right_bad = Vec::new();
    for k in 0..n {
        let mut left = h.zero();
        let mut right = h.zero();
        for (i, j, c) in h.comul.nonzero_bc(k) {
            // S(e_i) e_j and e_i S(e_j)
            for p in 0..n {
                let sp = s.get(p, i);
                if !sp.is_zero() {
                    axpy(&mut left, &(c * sp), &products[p * n + j]);
                }
                let sq = s.get(p, j);
                if !sq.is_zero() {
                    axpy(&mut right, &(c * sq), &products[i * n + p]);
                }
            }
        }
        let target = crate::linalg::scale_vec(&h.counit[k], &h.unit);
        if left != target {
            left_bad.push(tuple_label(h, &[k]));
        }
        if right != target {
            right_bad.push(tuple_label(h, &[k]));
        }
    }
    report.record("antipode (left convolution inverse)", left_bad);
    report.record("antipode (right convolution inverse)", right_bad);
    report
}

fn add3(map: &mut BTreeMap<(usize, usize, usize), CycloNum>, key: (usize, usize, usize), v: CycloNum) {
    if v.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(x) => {
            *x += &v;
            if x.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, v);
        }
    }
}

/// Checks the declared grouplikes, skew-primitives and characters.
pub fn verify_metadata(h: &HopfAlgebra) -> AxiomReport {
    let mut report = AxiomReport::default();
    let g_bad = h
        .meta
        .grouplikes
        .iter()
        .filter(|g| !h.is_grouplike(g))
        .map(|g| h.format_element(g))
        .collect();
    report.record("declared grouplikes", g_bad);
    let p_bad = h
        .meta
        .skew_primitives
        .iter()
        .filter(|p| {
            let (Some(g), Some(hh)) = (h.meta.grouplikes.get(p.g), h.meta.grouplikes.get(p.h)) else {
                return true;
            };
            !h.is_skew_primitive(&p.element, g, hh)
        })
        .map(|p| p.label.clone())
        .collect();
    report.record("declared skew-primitives", p_bad);
    let c_bad = h
        .meta
        .characters
        .iter()
        .enumerate()
        .filter(|(_, c)| !h.is_character(c))
        .map(|(i, _)| format!("character #{i}"))
        .collect();
    report.record("declared characters", c_bad);
    report
}

/// Result of a morphism check, with the first failing basis tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismCheck {
    pub passed: bool,
    pub failure: Option<String>,
}

impl MorphismCheck {
    fn pass() -> Self {
        MorphismCheck {
            passed: true,
            failure: None,
        }
    }
    fn fail(msg: String) -> Self {
        MorphismCheck {
            passed: false,
            failure: Some(msg),
        }
    }
}

fn check_dims(f: &LinearMap, a: &HopfAlgebra, b: &HopfAlgebra) -> Result<()> {
    if f.source_dim() != a.dim() || f.target_dim() != b.dim() {
        return Err(HopfError::ShapeError(format!(
            "map is {}x{}, algebras have dimensions {} -> {}",
            f.target_dim(),
            f.source_dim(),
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

pub fn is_algebra_morphism(f: &LinearMap, a: &HopfAlgebra, b: &HopfAlgebra) -> Result<MorphismCheck> {
    check_dims(f, a, b)?;
    if f.apply(a.unit()) != *b.unit() {
        return Ok(MorphismCheck::fail("f(1) != 1".into()));
    }
    let n = a.dim();
    let imgs: Vec<Vector> = (0..n).map(|j| f.image(j)).collect();
    let failure = (0..n).into_par_iter().find_map_first(|i| {
        (0..n).find_map(|j| {
            let lhs = f.apply(&a.mul_basis(i, j));
            let rhs = b.mul_vec(&imgs[i], &imgs[j]);
            (lhs != rhs).then(|| format!("f({}*{}) != f({})f({})", a.labels[i], a.labels[j], a.labels[i], a.labels[j]))
        })
    });
    Ok(failure.map_or_else(MorphismCheck::pass, MorphismCheck::fail))
}

pub fn is_coalgebra_morphism(f: &LinearMap, a: &HopfAlgebra, b: &HopfAlgebra) -> Result<MorphismCheck> {
    check_dims(f, a, b)?;
    let n = a.dim();
    let imgs: Vec<Vector> = (0..n).map(|j| f.image(j)).collect();
    for (k, img) in imgs.iter().enumerate() {
        if b.counit_of(img) != a.counit()[k] {
            return Ok(MorphismCheck::fail(format!("eps(f({})) != eps({})", a.labels[k], a.labels[k])));
        }
    }
    let failure = (0..n).into_par_iter().find_map_first(|k| {
        let mut lhs = Sparse2::new();
        for (i, j, c) in a.comul.nonzero_bc(k) {
            for (key, v) in outer(&imgs[i], &imgs[j]) {
                add_to(&mut lhs, key, c * &v);
            }
        }
        let rhs = b.comul_sparse(&imgs[k]);
        (lhs != rhs).then(|| format!("(f(x)f)Delta({0}) != Delta(f({0}))", a.labels[k]))
    });
    Ok(failure.map_or_else(MorphismCheck::pass, MorphismCheck::fail))
}

/// Bialgebra morphism that also commutes with the antipodes.
pub fn is_hopf_morphism(f: &LinearMap, a: &HopfAlgebra, b: &HopfAlgebra) -> Result<MorphismCheck> {
    let alg = is_algebra_morphism(f, a, b)?;
    if !alg.passed {
        return Ok(alg);
    }
    let coalg = is_coalgebra_morphism(f, a, b)?;
    if !coalg.passed {
        return Ok(coalg);
    }
    if f.compose(a.antipode()) != b.antipode().compose(f) {
        return Ok(MorphismCheck::fail("f o S != S o f".into()));
    }
    Ok(MorphismCheck::pass())
}

/// Smallest `k <= bound` with `f^k = id`.
pub fn map_order(f: &LinearMap, bound: u32) -> Result<u32> {
    if f.source_dim() != f.target_dim() {
        return Err(HopfError::ShapeError("map_order needs a square map".into()));
    }
    f.inverse()?;
    let mut acc = f.clone();
    for k in 1..=bound {
        if acc.is_identity() {
            return Ok(k);
        }
        acc = acc.compose(f);
    }
    Err(HopfError::NotFinite(bound))
}

pub fn antipode_inverse(h: &HopfAlgebra) -> Result<LinearMap> {
    let inv = h.antipode().inverse()?;
    debug_assert!(h.antipode().compose(&inv).is_identity());
    if !h.antipode().compose(&inv).is_identity() {
        return Err(HopfError::SingularMap);
    }
    Ok(inv)
}
