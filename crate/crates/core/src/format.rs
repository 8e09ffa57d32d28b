//! JSON file format for algebras: sparse structure constants with exact coefficients.
//!
//! A scalar is written as the nonzero power-basis coefficients `[[k, "p/q"], ...]` of
//! `sum (p/q) z^k` in the field of the file's conductor.

use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclofield::{CycloField, CycloNum};
use crate::error::{HopfError, Result};
use crate::hopf::{HopfAlgebra, LinearMap, Meta, Tensor3};
use crate::linalg::{zero_vec, Matrix};

pub const FORMAT_VERSION: u32 = 1;

pub type Scalar = Vec<(usize, String)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry3 {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry2 {
    pub i: usize,
    pub j: usize,
    pub c: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry1 {
    pub i: usize,
    pub c: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub format_version: u32,
    pub conductor: u32,
    pub dim: usize,
    pub basis_labels: Vec<String>,
    /// `e_i e_j = sum c e_k`
    pub mul: Vec<Entry3>,
    /// `Delta(e_i) = sum c e_j (x) e_k`
    pub comul: Vec<Entry3>,
    pub unit: Vec<Entry1>,
    pub counit: Vec<Entry1>,
    /// `S(e_j) = sum c e_i`
    pub antipode: Vec<Entry2>,
    pub meta: Meta,
}

fn encode(x: &CycloNum) -> Scalar {
    x.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(k, q)| (k, q.to_string()))
        .collect()
}

fn decode(field: &CycloField, s: &Scalar) -> Result<CycloNum> {
    let mut coeffs = vec![BigRational::zero(); field.degree()];
    for (k, q) in s {
        let slot = coeffs
            .get_mut(*k)
            .ok_or_else(|| HopfError::Format(format!("power {k} out of range for conductor {}", field.conductor())))?;
        let value = BigRational::from_str(q).map_err(|_| HopfError::Format(format!("bad rational {q:?}")))?;
        *slot += value;
    }
    Ok(field.from_coeffs(&coeffs))
}

fn check_index(i: usize, n: usize) -> Result<usize> {
    if i < n {
        Ok(i)
    } else {
        Err(HopfError::Format(format!("index {i} out of range for dimension {n}")))
    }
}

impl AlgebraFile {
    pub fn from_algebra(h: &HopfAlgebra) -> AlgebraFile {
        let n = h.dim();
        let tensor = |t: &Tensor3| {
            let mut out = Vec::new();
            for i in 0..n {
                for (j, k, c) in t.nonzero_bc(i) {
                    out.push(Entry3 { i, j, k, c: encode(c) });
                }
            }
            out
        };
        let vector = |v: &[CycloNum]| {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| Entry1 { i, c: encode(c) })
                .collect()
        };
        let m = h.antipode().matrix();
        let mut antipode = Vec::new();
        for j in 0..n {
            for i in 0..n {
                if !m.get(i, j).is_zero() {
                    antipode.push(Entry2 { i, j, c: encode(m.get(i, j)) });
                }
            }
        }
        AlgebraFile {
            format_version: FORMAT_VERSION,
            conductor: h.field().conductor(),
            dim: n,
            basis_labels: h.labels().to_vec(),
            mul: tensor(h.mul_tensor()),
            comul: tensor(h.comul_tensor()),
            unit: vector(h.unit()),
            counit: vector(h.counit()),
            antipode,
            meta: h.meta.clone(),
        }
    }

    /// Rebuilds the algebra; unless `trust` is set the Hopf axioms are re-verified.
    pub fn to_algebra(&self, trust: bool) -> Result<HopfAlgebra> {
        if self.format_version != FORMAT_VERSION {
            return Err(HopfError::Format(format!("unsupported format version {}", self.format_version)));
        }
        if self.conductor == 0 {
            return Err(HopfError::Format("conductor must be positive".into()));
        }
        let n = self.dim;
        if self.basis_labels.len() != n {
            return Err(HopfError::Format(format!("{} labels for dimension {n}", self.basis_labels.len())));
        }
        let field = CycloField::new(self.conductor);
        let tensor = |entries: &[Entry3]| -> Result<Tensor3> {
            let mut data = vec![field.zero(); n * n * n];
            for e in entries {
                let idx = (check_index(e.i, n)? * n + check_index(e.j, n)?) * n + check_index(e.k, n)?;
                data[idx] += &decode(&field, &e.c)?;
            }
            Ok(Tensor3::from_dense(n, data))
        };
        let vector = |entries: &[Entry1]| -> Result<Vec<CycloNum>> {
            let mut v = zero_vec(&field, n);
            for e in entries {
                v[check_index(e.i, n)?] += &decode(&field, &e.c)?;
            }
            Ok(v)
        };
        let mut s = Matrix::zeros(&field, n, n);
        for e in &self.antipode {
            let (i, j) = (check_index(e.i, n)?, check_index(e.j, n)?);
            let v = s.get(i, j) + &decode(&field, &e.c)?;
            s.set(i, j, v);
        }
        let meta_field_ok = self
            .meta
            .grouplikes
            .iter()
            .chain(&self.meta.characters)
            .flatten()
            .all(|x| x.conductor() == self.conductor);
        if !meta_field_ok {
            return Err(HopfError::Format("metadata uses a different conductor".into()));
        }
        let h = HopfAlgebra::new(
            field.clone(),
            self.basis_labels.clone(),
            tensor(&self.mul)?,
            vector(&self.unit)?,
            tensor(&self.comul)?,
            vector(&self.counit)?,
            LinearMap::new(s),
            self.meta.clone(),
        )?;
        if !trust {
            let report = h.verify_axioms();
            if let Some(f) = report.failed().first() {
                return Err(HopfError::Format(format!(
                    "loaded structure fails {} at {}",
                    f.axiom,
                    f.first_counterexample.clone().unwrap_or_default()
                )));
            }
        }
        Ok(h)
    }
}

pub fn to_json(h: &HopfAlgebra) -> Result<String> {
    Ok(serde_json::to_string_pretty(&AlgebraFile::from_algebra(h))?)
}

pub fn from_json(s: &str, trust: bool) -> Result<HopfAlgebra> {
    let file: AlgebraFile = serde_json::from_str(s)?;
    file.to_algebra(trust)
}

pub fn save(h: &HopfAlgebra, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(h)? + "\n")?;
    Ok(())
}

pub fn load(path: &Path, trust: bool) -> Result<HopfAlgebra> {
    from_json(&std::fs::read_to_string(path)?, trust)
}
