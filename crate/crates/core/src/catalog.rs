//! Pointed Hopf algebras built from presentations, and the named families of small dimension.
//!
//! A presentation has commuting grouplike generators `g_k` of finite order and skew generators
//! `x_s` with `x_s^N_s = c_s` (an element of the group algebra), ω-commutation
//! `g_k x_s = c_ks x_s g_k` and `x_a x_b = q_ab x_b x_a` (`a < b`), and coproducts
//! `Delta(x_s) = x_s (x) γ_s + δ_s (x) x_s`. Products of normal words `G x_1^p_1 ... x_r^p_r`
//! are rewritten deterministically by moving grouplikes to the left and reducing powers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cyclofield::{lcm, CycloField, CycloNum};
use crate::error::{HopfError, Result};
use crate::hopf::{
    HopfAlgebra, LinearMap, Meta, Relation, RelationSide, SkewPrimitive, Sparse2, Tensor3,
};
use crate::linalg::{scale_vec, unit_vec, zero_vec, LinearSystem, Vector};

/// `coeff * z_order^power`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scalar {
    #[serde(default = "one_i64")]
    pub coeff: i64,
    #[serde(default = "one_u32")]
    pub order: u32,
    #[serde(default)]
    pub power: i64,
}

fn one_i64() -> i64 {
    1
}
fn one_u32() -> u32 {
    1
}

impl Scalar {
    pub const ONE: Scalar = Scalar {
        coeff: 1,
        order: 1,
        power: 0,
    };
    pub const MINUS_ONE: Scalar = Scalar {
        coeff: -1,
        order: 1,
        power: 0,
    };

    pub fn root(order: u32, power: i64) -> Scalar {
        Scalar {
            coeff: 1,
            order,
            power,
        }
    }

    fn value(&self, field: &CycloField) -> Result<CycloNum> {
        Ok(field.root_of_unity(self.order, self.power)?.scale_int(self.coeff))
    }

    fn root_order(&self) -> u32 {
        let k = self.order.max(1) as i64;
        let g = num_integer::gcd(k, self.power.rem_euclid(k));
        let base = (k / g.max(1)) as u32;
        if self.coeff < 0 {
            lcm(base, 2)
        } else {
            base
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupGen {
    pub name: String,
    pub order: u32,
}

/// `coeff * g_1^e_1 ... g_k^e_k`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTerm {
    pub coeff: Scalar,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewGen {
    pub name: String,
    /// `N` in `x^N = power_value`
    pub nilpotency: u32,
    /// Empty means `x^N = 0`.
    #[serde(default)]
    pub power_value: Vec<GroupTerm>,
    /// Exponents of `γ` in `Delta(x) = x (x) γ + δ (x) x`.
    pub right_grouplike: Vec<u32>,
    /// Exponents of `δ`.
    pub left_grouplike: Vec<u32>,
}

/// `g x = scalar * x g`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commutation {
    pub grouplike: String,
    pub skew: String,
    pub scalar: Scalar,
}

/// `first * second = scalar * second * first`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewCommutation {
    pub first: String,
    pub second: String,
    pub scalar: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    /// Overrides the computed ambient conductor; must be a multiple of it.
    #[serde(default)]
    pub conductor: Option<u32>,
    pub grouplikes: Vec<GroupGen>,
    #[serde(default)]
    pub skews: Vec<SkewGen>,
    #[serde(default)]
    pub commutations: Vec<Commutation>,
    #[serde(default)]
    pub skew_commutations: Vec<SkewCommutation>,
}

/// Compiled presentation with resolved indices and scalars.
struct Rules {
    field: CycloField,
    group_orders: Vec<u32>,
    nilp: Vec<u32>,
    /// comm[k][s]: g_k x_s = comm * x_s g_k
    comm: Vec<Vec<CycloNum>>,
    /// skew_comm[a][b] for a < b: x_a x_b = q x_b x_a
    skew_comm: Vec<Vec<CycloNum>>,
    power_values: Vec<Vec<(CycloNum, Vec<u32>)>>,
    group_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Word {
    g: Vec<u32>,
    s: Vec<u32>,
}

impl Rules {
    fn group_index(&self, g: &[u32]) -> usize {
        let mut idx = 0;
        let mut radix = 1;
        for (e, n) in g.iter().zip(&self.group_orders) {
            idx += (*e % *n) as usize * radix;
            radix *= *n as usize;
        }
        idx
    }

    fn skew_index(&self, s: &[u32]) -> usize {
        let mut idx = 0;
        let mut radix = 1;
        for (e, n) in s.iter().zip(&self.nilp) {
            idx += (*e as usize) * radix;
            radix *= *n as usize;
        }
        idx
    }

    fn index(&self, w: &Word) -> usize {
        self.group_index(&w.g) + self.group_size * self.skew_index(&w.s)
    }

    fn words(&self) -> Vec<Word> {
        let skew_total: usize = self.nilp.iter().map(|&n| n as usize).product();
        let mut out = Vec::with_capacity(self.group_size * skew_total);
        for si in 0..skew_total {
            let s = mixed_radix(si, &self.nilp);
            for gi in 0..self.group_size {
                out.push(Word {
                    g: mixed_radix(gi, &self.group_orders),
                    s: s.clone(),
                });
            }
        }
        out
    }

    fn pow(&self, c: &CycloNum, e: i64) -> CycloNum {
        c.pow(e).expect("commutation scalars are roots of unity")
    }

    /// Scalar `χ` with `x^s G = χ G x^s` for skew exponents `s` and group exponents `g`.
    fn move_group_left(&self, s: &[u32], g: &[u32]) -> CycloNum {
        let mut acc = self.field.one();
        for (k, &b) in g.iter().enumerate() {
            if b == 0 {
                continue;
            }
            for (sidx, &p) in s.iter().enumerate() {
                if p != 0 {
                    acc = &acc * &self.pow(&self.comm[k][sidx], -((b as i64) * (p as i64)));
                }
            }
        }
        acc
    }

    fn add_group(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter()
            .zip(b)
            .zip(&self.group_orders)
            .map(|((x, y), n)| (x + y) % n)
            .collect()
    }

    /// Normal form of `coeff * G * x_1^e_1 ... x_r^e_r` where exponents may exceed `N`.
    fn normalize(&self, coeff: CycloNum, g: Vec<u32>, s: Vec<u32>, out: &mut BTreeMap<Word, CycloNum>) {
        if coeff.is_zero() {
            return;
        }
        let Some(k) = (0..s.len()).find(|&k| s[k] >= self.nilp[k]) else {
            let w = Word { g, s };
            let entry = out.entry(w).or_insert_with(|| self.field.zero());
            *entry += &coeff;
            return;
        };
        let mut s2 = s.clone();
        s2[k] -= self.nilp[k];
        // x_k^N = c_k sits right after x_k^(e_k - N); move its grouplikes past x_1..x_k.
        let prefix: Vec<u32> = s2.iter().enumerate().map(|(i, &e)| if i <= k { e } else { 0 }).collect();
        for (c, gp) in &self.power_values[k] {
            let chi = self.move_group_left(&prefix, gp);
            self.normalize(&(&coeff * c) * &chi, self.add_group(&g, gp), s2.clone(), out);
        }
    }

    fn multiply(&self, a: &Word, b: &Word) -> BTreeMap<Word, CycloNum> {
        let mut coeff = self.move_group_left(&a.s, &b.g);
        let g = self.add_group(&a.g, &b.g);
        // (prod_a x_a^p_a)(prod_b x_b^r_b): move x_b^r_b left past x_a^p_a for a > b.
        let r = a.s.len();
        for bi in 0..r {
            for ai in (bi + 1)..r {
                let (p, q) = (a.s[ai] as i64, b.s[bi] as i64);
                if p != 0 && q != 0 {
                    coeff = &coeff * &self.pow(&self.skew_comm[bi][ai], -(p * q));
                }
            }
        }
        let s: Vec<u32> = a.s.iter().zip(&b.s).map(|(x, y)| x + y).collect();
        let mut out = BTreeMap::new();
        self.normalize(coeff, g, s, &mut out);
        out.retain(|_, v| !v.is_zero());
        out
    }
}

fn mixed_radix(mut idx: usize, radices: &[u32]) -> Vec<u32> {
    radices
        .iter()
        .map(|&n| {
            let e = (idx % n as usize) as u32;
            idx /= n as usize;
            e
        })
        .collect()
}

fn power_label(name: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    }
}

fn word_label(p: &Presentation, w: &Word) -> String {
    let mut s = String::new();
    for (gen, &e) in p.grouplikes.iter().zip(&w.g) {
        s.push_str(&power_label(&gen.name, e));
    }
    for (gen, &e) in p.skews.iter().zip(&w.s) {
        s.push_str(&power_label(&gen.name, e));
    }
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

fn group_word_label(p: &Presentation, g: &[u32]) -> String {
    let w = Word {
        g: g.to_vec(),
        s: vec![0; p.skews.len()],
    };
    word_label(p, &w)
}

fn scalar_label(s: &Scalar) -> String {
    match (s.order, s.coeff) {
        (1, 1) => String::new(),
        (1, c) => format!("{c}"),
        (k, 1) => format!("w{k}^{}", s.power),
        (k, c) => format!("{c}*w{k}^{}", s.power),
    }
}

fn group_terms_label(p: &Presentation, terms: &[GroupTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let word = group_word_label(p, &t.exponents);
        let (neg, mag) = if t.coeff.order == 1 && t.coeff.coeff < 0 {
            (true, Scalar {
                coeff: -t.coeff.coeff,
                ..t.coeff
            })
        } else {
            (false, t.coeff)
        };
        let sc = scalar_label(&mag);
        let body = match (sc.is_empty(), word.as_str()) {
            (true, w) => w.to_string(),
            (false, "1") => sc,
            (false, w) => format!("{sc}*{w}"),
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
            out.push_str(&body);
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    out
}

impl Presentation {
    fn group_position(&self, name: &str) -> Result<usize> {
        self.grouplikes
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| HopfError::PresentationError(format!("unknown grouplike generator {name:?}")))
    }

    fn skew_position(&self, name: &str) -> Result<usize> {
        self.skews
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| HopfError::PresentationError(format!("unknown skew generator {name:?}")))
    }

    /// lcm of 4, twice the group exponent and the orders of all scalars.
    pub fn natural_conductor(&self) -> u32 {
        let mut m = 4;
        for g in &self.grouplikes {
            m = lcm(m, 2 * g.order.max(1));
        }
        let scalars = self
            .commutations
            .iter()
            .map(|c| c.scalar)
            .chain(self.skew_commutations.iter().map(|c| c.scalar))
            .chain(self.skews.iter().flat_map(|s| s.power_value.iter().map(|t| t.coeff)));
        for s in scalars {
            m = lcm(m, s.root_order());
        }
        m
    }

    pub fn dimension(&self) -> usize {
        let g: usize = self.grouplikes.iter().map(|g| g.order as usize).product();
        let s: usize = self.skews.iter().map(|s| s.nilpotency as usize).product();
        g * s
    }

    fn validate(&self) -> Result<()> {
        if self.grouplikes.is_empty() {
            return Err(HopfError::PresentationError("at least one grouplike generator is required".into()));
        }
        if self.grouplikes.len() > 2 || self.skews.len() > 2 {
            return Err(HopfError::PresentationError(
                "supported shapes have at most two grouplike and two skew generators".into(),
            ));
        }
        let ng = self.grouplikes.len();
        for g in &self.grouplikes {
            if g.order == 0 {
                return Err(HopfError::PresentationError(format!("generator {} has order 0", g.name)));
            }
        }
        for s in &self.skews {
            if s.nilpotency < 1 {
                return Err(HopfError::PresentationError(format!("skew generator {} has N = 0", s.name)));
            }
            let shapes_ok = s.left_grouplike.len() == ng
                && s.right_grouplike.len() == ng
                && s.power_value.iter().all(|t| t.exponents.len() == ng);
            if !shapes_ok {
                return Err(HopfError::PresentationError(format!(
                    "exponent vectors for {} must have length {ng}",
                    s.name
                )));
            }
        }
        for c in &self.commutations {
            self.group_position(&c.grouplike)?;
            self.skew_position(&c.skew)?;
        }
        for c in &self.skew_commutations {
            let (a, b) = (self.skew_position(&c.first)?, self.skew_position(&c.second)?);
            if a >= b {
                return Err(HopfError::PresentationError(
                    "skew commutation must list generators in declaration order".into(),
                ));
            }
        }
        if self.dimension() > 128 {
            return Err(HopfError::PresentationError(format!(
                "declared dimension {} is beyond the supported range",
                self.dimension()
            )));
        }
        Ok(())
    }

    fn compile(&self, field: &CycloField) -> Result<Rules> {
        let ng = self.grouplikes.len();
        let ns = self.skews.len();
        let mut comm = vec![vec![field.one(); ns]; ng];
        for c in &self.commutations {
            let v = c.scalar.value(field)?;
            comm[self.group_position(&c.grouplike)?][self.skew_position(&c.skew)?] = v;
        }
        let mut skew_comm = vec![vec![field.one(); ns]; ns];
        for c in &self.skew_commutations {
            let v = c.scalar.value(field)?;
            skew_comm[self.skew_position(&c.first)?][self.skew_position(&c.second)?] = v;
        }
        let power_values = self
            .skews
            .iter()
            .map(|s| {
                s.power_value
                    .iter()
                    .map(|t| {
                        let e: Vec<u32> = t
                            .exponents
                            .iter()
                            .zip(&self.grouplikes)
                            .map(|(e, g)| e % g.order)
                            .collect();
                        Ok((t.coeff.value(field)?, e))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Rules {
            field: field.clone(),
            group_orders: self.grouplikes.iter().map(|g| g.order).collect(),
            nilp: self.skews.iter().map(|s| s.nilpotency).collect(),
            comm,
            skew_comm,
            power_values,
            group_size: self.grouplikes.iter().map(|g| g.order as usize).product(),
        })
    }

    pub fn from_json(text: &str) -> Result<Presentation> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_toml(text: &str) -> Result<Presentation> {
        toml::from_str(text).map_err(|e| HopfError::Format(e.to_string()))
    }

    fn relation_labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        for g in &self.grouplikes {
            out.push(format!("{}^{} = 1", g.name, g.order));
        }
        for s in &self.skews {
            out.push(format!(
                "{}^{} = {}",
                s.name,
                s.nilpotency,
                group_terms_label(self, &s.power_value)
            ));
        }
        for c in &self.commutations {
            let sc = scalar_label(&c.scalar);
            let sc = if sc.is_empty() { String::new() } else { format!("{sc}*") };
            out.push(format!("{g}{x} = {sc}{x}{g}", g = c.grouplike, x = c.skew));
        }
        for c in &self.skew_commutations {
            let sc = scalar_label(&c.scalar);
            let sc = if sc.is_empty() { String::new() } else { format!("{sc}*") };
            out.push(format!("{a}{b} = {sc}{b}{a}", a = c.first, b = c.second));
        }
        out
    }
}

/// Builds structure constants from a presentation and verifies every Hopf axiom.
pub fn build_from_presentation(p: &Presentation) -> Result<HopfAlgebra> {
    p.validate()?;
    let natural = p.natural_conductor();
    let conductor = match p.conductor {
        Some(c) if c % natural != 0 => {
            return Err(HopfError::PresentationError(format!(
                "conductor {c} is not a multiple of the required {natural}"
            )))
        }
        Some(c) => c,
        None => natural,
    };
    let field = CycloField::new(conductor);
    let rules = p.compile(&field)?;
    let words = rules.words();
    let n = words.len();
    if n != p.dimension() {
        return Err(HopfError::PresentationError("basis size does not match the dimension".into()));
    }
    let labels: Vec<String> = words.iter().map(|w| word_label(p, w)).collect();

    let mut mul = vec![field.zero(); n * n * n];
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            for (w, c) in rules.multiply(a, b) {
                if w.s.iter().zip(&rules.nilp).any(|(e, n)| e >= n) {
                    return Err(HopfError::PresentationError(format!(
                        "product {}*{} left the declared basis",
                        labels[i], labels[j]
                    )));
                }
                mul[(i * n + j) * n + rules.index(&w)] = c;
            }
        }
    }
    let mul = Tensor3::from_dense(n, mul);
    let zero_s = vec![0u32; p.skews.len()];
    let unit_idx = rules.index(&Word {
        g: vec![0; p.grouplikes.len()],
        s: zero_s.clone(),
    });
    let unit = unit_vec(&field, n, unit_idx);
    let group_vec = |g: &[u32]| {
        unit_vec(
            &field,
            n,
            rules.index(&Word {
                g: g.to_vec(),
                s: zero_s.clone(),
            }),
        )
    };
    let gen_group = |k: usize| {
        let mut e = vec![0u32; p.grouplikes.len()];
        e[k] = 1;
        e
    };
    let skew_vec = |s: usize| {
        let mut e = zero_s.clone();
        e[s] = 1;
        unit_vec(
            &field,
            n,
            rules.index(&Word {
                g: vec![0; p.grouplikes.len()],
                s: e,
            }),
        )
    };

    // Temporary algebra (comultiplication not yet known) for products in H and H (x) H.
    let placeholder = HopfAlgebra::new(
        field.clone(),
        labels.clone(),
        mul.clone(),
        unit.clone(),
        Tensor3::from_dense(n, vec![field.zero(); n * n * n]),
        zero_vec(&field, n),
        LinearMap::identity(&field, n),
        Meta::default(),
    )?;
    let single = |a: &Vector, b: &Vector| crate::hopf::outer(a, b);
    let delta_gen_g: Vec<Sparse2> = (0..p.grouplikes.len())
        .map(|k| {
            let g = group_vec(&gen_group(k));
            single(&g, &g)
        })
        .collect();
    let delta_gen_x: Vec<Sparse2> = p
        .skews
        .iter()
        .enumerate()
        .map(|(s, sk)| {
            let x = skew_vec(s);
            let mut d = single(&x, &group_vec(&sk.right_grouplike));
            for (k, v) in single(&group_vec(&sk.left_grouplike), &x) {
                d.insert(k, v);
            }
            d
        })
        .collect();
    let one2 = single(&unit, &unit);
    let mut comul = vec![field.zero(); n * n * n];
    for w in &words {
        let mut acc = one2.clone();
        for (k, &e) in w.g.iter().enumerate() {
            for _ in 0..e {
                acc = placeholder.mul2(&acc, &delta_gen_g[k]);
            }
        }
        for (s, &e) in w.s.iter().enumerate() {
            for _ in 0..e {
                acc = placeholder.mul2(&acc, &delta_gen_x[s]);
            }
        }
        let k = rules.index(w);
        for ((i, j), v) in acc {
            comul[(k * n + i) * n + j] = v;
        }
    }
    let comul = Tensor3::from_dense(n, comul);
    let mut counit = zero_vec(&field, n);
    for w in &words {
        if w.s.iter().all(|&e| e == 0) {
            counit[rules.index(w)] = field.one();
        }
    }

    let inv_group = |g: &[u32]| -> Vec<u32> {
        g.iter()
            .zip(&p.grouplikes)
            .map(|(e, gen)| (gen.order - e % gen.order) % gen.order)
            .collect()
    };
    // S(x) = -δ^{-1} x γ^{-1}
    let s_gen_x: Vec<Vector> = p
        .skews
        .iter()
        .enumerate()
        .map(|(s, sk)| {
            let left = group_vec(&inv_group(&sk.left_grouplike));
            let right = group_vec(&inv_group(&sk.right_grouplike));
            let v = placeholder.product(&[left, skew_vec(s), right]);
            scale_vec(&field.int(-1), &v)
        })
        .collect();
    let mut s_images = Vec::with_capacity(n);
    for w in &words {
        // S(G x_1^p_1 ... x_r^p_r) = S(x_r)^p_r ... S(x_1)^p_1 G^{-1}
        let mut factors = Vec::new();
        for (s, &e) in w.s.iter().enumerate().rev() {
            for _ in 0..e {
                factors.push(s_gen_x[s].clone());
            }
        }
        factors.push(group_vec(&inv_group(&w.g)));
        s_images.push(placeholder.product(&factors));
    }
    let antipode = LinearMap::from_images(&s_images);

    let grouplikes: Vec<Vector> = (0..rules.group_size)
        .map(|gi| group_vec(&mixed_radix(gi, &rules.group_orders)))
        .collect();
    let gl_index = |g: &[u32]| rules.group_index(&g.iter().zip(&rules.group_orders).map(|(e, n)| e % n).collect::<Vec<_>>());
    let skew_primitives = p
        .skews
        .iter()
        .enumerate()
        .map(|(s, sk)| SkewPrimitive {
            label: sk.name.clone(),
            element: skew_vec(s),
            g: gl_index(&sk.right_grouplike),
            h: gl_index(&sk.left_grouplike),
        })
        .collect();

    let relations = presentation_relations(p, &rules, &placeholder, &group_vec, &gen_group, &skew_vec)?;
    let characters = presentation_characters(p, &rules, &words)?;

    let meta = Meta {
        family: p.family.clone(),
        params: p.params.clone(),
        pointed: true,
        grouplikes,
        characters,
        skew_primitives,
        relations,
    };
    let h = HopfAlgebra::new(field, labels, mul, unit, comul, counit, antipode, meta)?;
    let report = h.verify_axioms();
    if !report.all_passed() {
        let bad: Vec<String> = report
            .failed()
            .iter()
            .map(|c| format!("{} at {}", c.axiom, c.first_counterexample.clone().unwrap_or_default()))
            .collect();
        return Err(HopfError::InvalidPresentation(bad.join("; ")));
    }
    let meta_report = h.verify_metadata();
    if !meta_report.all_passed() {
        return Err(HopfError::InvalidPresentation(format!("metadata check failed: {:?}", meta_report.failed())));
    }
    Ok(h)
}

fn presentation_relations(
    p: &Presentation,
    rules: &Rules,
    h: &HopfAlgebra,
    group_vec: &dyn Fn(&[u32]) -> Vector,
    gen_group: &dyn Fn(usize) -> Vec<u32>,
    skew_vec: &dyn Fn(usize) -> Vector,
) -> Result<Vec<Relation>> {
    let field = &rules.field;
    let labels = p.relation_labels();
    let mut labels = labels.into_iter();
    let mut rels = Vec::new();
    let mut push = |terms: Vec<(CycloNum, Vec<Vector>)>| {
        let label = labels.next().expect("one label per relation");
        // sanity: relation must hold in the built algebra
        let mut acc = h.zero();
        for (c, fs) in &terms {
            crate::linalg::axpy(&mut acc, c, &h.product(fs));
        }
        if !crate::linalg::is_zero_vec(&acc) {
            return Err(HopfError::PresentationError(format!("relation {label} does not hold")));
        }
        rels.push(Relation {
            label,
            side: RelationSide::Algebra,
            terms,
        });
        Ok(())
    };
    for (k, g) in p.grouplikes.iter().enumerate() {
        let gv = group_vec(&gen_group(k));
        push(vec![(field.one(), vec![gv; g.order as usize]), (field.int(-1), vec![])])?;
    }
    for (s, sk) in p.skews.iter().enumerate() {
        let mut terms = vec![(field.one(), vec![skew_vec(s); sk.nilpotency as usize])];
        for t in &sk.power_value {
            terms.push((-t.coeff.value(field)?, vec![group_vec(&t.exponents)]));
        }
        push(terms)?;
    }
    for c in &p.commutations {
        let (k, s) = (p.group_position(&c.grouplike)?, p.skew_position(&c.skew)?);
        let (g, x) = (group_vec(&gen_group(k)), skew_vec(s));
        push(vec![
            (field.one(), vec![g.clone(), x.clone()]),
            (-c.scalar.value(field)?, vec![x, g]),
        ])?;
    }
    for c in &p.skew_commutations {
        let (a, b) = (skew_vec(p.skew_position(&c.first)?), skew_vec(p.skew_position(&c.second)?));
        push(vec![
            (field.one(), vec![a.clone(), b.clone()]),
            (-c.scalar.value(field)?, vec![b, a]),
        ])?;
    }
    Ok(rels)
}

/// Characters `χ` with `χ(x_s) = 0`: group characters killing every power value `c_s`.
/// Only produced when each skew generator has a grouplike with nontrivial commutation scalar,
/// which forces `χ(x_s) = 0` for every character.
fn presentation_characters(p: &Presentation, rules: &Rules, words: &[Word]) -> Result<Vec<Vector>> {
    let field = &rules.field;
    let forced = (0..p.skews.len()).all(|s| rules.comm.iter().any(|row| !row[s].is_one()));
    if !forced {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for ci in 0..rules.group_size {
        let choice = mixed_radix(ci, &rules.group_orders);
        let gen_vals: Vec<CycloNum> = choice
            .iter()
            .zip(&rules.group_orders)
            .map(|(&j, &n)| field.root_of_unity(n, j as i64))
            .collect::<Result<_>>()?;
        let group_value = |g: &[u32]| {
            g.iter()
                .zip(&gen_vals)
                .fold(field.one(), |acc, (&e, v)| &acc * &v.pow(e as i64).expect("root of unity"))
        };
        let kills_powers = rules.power_values.iter().all(|terms| {
            terms
                .iter()
                .fold(field.zero(), |acc, (c, g)| &acc + &(c * &group_value(g)))
                .is_zero()
        });
        if !kills_powers {
            continue;
        }
        let chi: Vector = words
            .iter()
            .map(|w| {
                if w.s.iter().all(|&e| e == 0) {
                    group_value(&w.g)
                } else {
                    field.zero()
                }
            })
            .collect();
        out.push(chi);
    }
    Ok(out)
}

/// The families of small pointed Hopf algebras known to the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    GroupAlgebraCyclic(u32),
    Sweedler,
    Taft(u32),
    Radford(u32),
    AC2,
    A1C4,
    A2C4,
    /// `ω = z_4^k`, `k` odd
    A3C4(u32),
    AC2xC2,
    A0,
    A1,
    B0,
    /// `ω = z_6^k`, `k` in {1, 5}
    B1(u32),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::GroupAlgebraCyclic(n) => write!(f, "GroupAlgebraCyclic({n})"),
            Family::Sweedler => write!(f, "Sweedler"),
            Family::Taft(n) => write!(f, "Taft({n})"),
            Family::Radford(n) => write!(f, "Radford({n})"),
            Family::AC2 => write!(f, "A_C2"),
            Family::A1C4 => write!(f, "A1_C4"),
            Family::A2C4 => write!(f, "A2_C4"),
            Family::A3C4(k) => write!(f, "A3_C4({k})"),
            Family::AC2xC2 => write!(f, "A_C2xC2"),
            Family::A0 => write!(f, "A0"),
            Family::A1 => write!(f, "A1"),
            Family::B0 => write!(f, "B0"),
            Family::B1(k) => write!(f, "B1({k})"),
        }
    }
}

impl FromStr for Family {
    type Err = HopfError;

    fn from_str(s: &str) -> Result<Family> {
        let s = s.trim();
        let (name, arg) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            Some(_) => return Err(HopfError::UnknownAlgebra(s.into())),
            None => (s, None),
        };
        let num = |default: Option<u32>| -> Result<u32> {
            match arg {
                Some(a) => a
                    .trim()
                    .parse()
                    .map_err(|_| HopfError::InvalidParameter(format!("bad parameter in {s:?}"))),
                None => default.ok_or_else(|| HopfError::InvalidParameter(format!("{name} needs a parameter"))),
            }
        };
        let fam = match name {
            "GroupAlgebraCyclic" | "kC" | "Cyclic" => Family::GroupAlgebraCyclic(num(None)?),
            "Sweedler" | "H4" => Family::Sweedler,
            "Taft" => Family::Taft(num(None)?),
            "Radford" => Family::Radford(num(None)?),
            "A_C2" => Family::AC2,
            "A1_C4" => Family::A1C4,
            "A2_C4" => Family::A2C4,
            "A3_C4" => Family::A3C4(num(Some(1))?),
            "A_C2xC2" => Family::AC2xC2,
            "A0" => Family::A0,
            "A1" => Family::A1,
            "B0" => Family::B0,
            "B1" => Family::B1(num(Some(1))?),
            _ => return Err(HopfError::UnknownAlgebra(s.into())),
        };
        fam.validate()?;
        Ok(fam)
    }
}

impl Family {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HopfError::InvalidParameter(m.into()));
        match *self {
            Family::GroupAlgebraCyclic(n) if n < 1 => bad("cyclic group order must be >= 1"),
            Family::Taft(n) | Family::Radford(n) if n < 2 => bad("n must be >= 2"),
            Family::A3C4(k) if k % 2 == 0 || k >= 4 => bad("A3_C4 needs a primitive 4th root z4^k, k in {1, 3}"),
            Family::B1(k) if k != 1 && k != 5 => bad("B1 needs a primitive 6th root z6^k, k in {1, 5}"),
            _ => Ok(()),
        }
    }

    /// Presentation with the exact relations of the family.
    pub fn presentation(&self) -> Result<Presentation> {
        self.validate()?;
        let g = |order: u32| vec![GroupGen { name: "g".into(), order }];
        let gx = |c: Scalar| Commutation {
            grouplike: "g".into(),
            skew: "x".into(),
            scalar: c,
        };
        let skew = |name: &str, n: u32, value: Vec<GroupTerm>, right: Vec<u32>, left: Vec<u32>| SkewGen {
            name: name.into(),
            nilpotency: n,
            power_value: value,
            right_grouplike: right,
            left_grouplike: left,
        };
        let term = |c: Scalar, e: Vec<u32>| GroupTerm { coeff: c, exponents: e };
        let mut params = BTreeMap::new();
        let p = match *self {
            Family::GroupAlgebraCyclic(n) => Presentation {
                family: self.to_string(),
                params,
                conductor: None,
                grouplikes: g(n),
                skews: vec![],
                commutations: vec![],
                skew_commutations: vec![],
            },
            Family::Sweedler | Family::Taft(_) => {
                let n = if let Family::Taft(n) = *self { n } else { 2 };
                params.insert("omega".into(), format!("z{n}"));
                Presentation {
                    family: self.to_string(),
                    params,
                    conductor: None,
                    grouplikes: g(n),
                    skews: vec![skew("x", n, vec![], vec![1], vec![0])],
                    commutations: vec![gx(Scalar::root(n, 1))],
                    skew_commutations: vec![],
                }
            }
            Family::Radford(n) => {
                params.insert("omega".into(), format!("z{n}"));
                Presentation {
                    family: self.to_string(),
                    params,
                    conductor: None,
                    grouplikes: g(n),
                    skews: vec![
                        skew("x", n, vec![], vec![1], vec![0]),
                        skew("y", n, vec![], vec![1], vec![0]),
                    ],
                    // gx = ω^{-1} xg, gy = ω yg, xy = ω yx
                    commutations: vec![
                        gx(Scalar::root(n, -1)),
                        Commutation {
                            grouplike: "g".into(),
                            skew: "y".into(),
                            scalar: Scalar::root(n, 1),
                        },
                    ],
                    skew_commutations: vec![SkewCommutation {
                        first: "x".into(),
                        second: "y".into(),
                        scalar: Scalar::root(n, 1),
                    }],
                }
            }
            Family::AC2 => Presentation {
                family: self.to_string(),
                params,
                conductor: None,
                grouplikes: g(2),
                skews: vec![
                    skew("x", 2, vec![], vec![1], vec![0]),
                    skew("y", 2, vec![], vec![1], vec![0]),
                ],
                commutations: vec![
                    gx(Scalar::MINUS_ONE),
                    Commutation {
                        grouplike: "g".into(),
                        skew: "y".into(),
                        scalar: Scalar::MINUS_ONE,
                    },
                ],
                skew_commutations: vec![SkewCommutation {
                    first: "x".into(),
                    second: "y".into(),
                    scalar: Scalar::MINUS_ONE,
                }],
            },
            Family::A1C4 | Family::A2C4 | Family::A3C4(_) => {
                let (value, c) = match *self {
                    Family::A1C4 => (vec![], Scalar::MINUS_ONE),
                    // x^2 = g^2 - 1
                    Family::A2C4 => (
                        vec![term(Scalar::ONE, vec![2]), term(Scalar::MINUS_ONE, vec![0])],
                        Scalar::MINUS_ONE,
                    ),
                    Family::A3C4(k) => {
                        params.insert("omega".into(), format!("z4^{k}"));
                        (vec![], Scalar::root(4, k as i64))
                    }
                    _ => unreachable!(),
                };
                let right = if matches!(self, Family::A3C4(_)) { 2 } else { 1 };
                Presentation {
                    family: self.to_string(),
                    params,
                    conductor: None,
                    grouplikes: g(4),
                    // x is (g^2, 1)-primitive for A3_C4 so that x^2 = 0 is a coideal condition
                    skews: vec![skew("x", 2, value, vec![right], vec![0])],
                    commutations: vec![gx(c)],
                    skew_commutations: vec![],
                }
            }
            Family::AC2xC2 => Presentation {
                family: self.to_string(),
                params,
                conductor: None,
                grouplikes: vec![
                    GroupGen { name: "g".into(), order: 2 },
                    GroupGen { name: "h".into(), order: 2 },
                ],
                skews: vec![skew("x", 2, vec![], vec![1, 0], vec![0, 0])],
                commutations: vec![
                    gx(Scalar::MINUS_ONE),
                    Commutation {
                        grouplike: "h".into(),
                        skew: "x".into(),
                        scalar: Scalar::MINUS_ONE,
                    },
                ],
                skew_commutations: vec![],
            },
            Family::A0 | Family::A1 | Family::B0 | Family::B1(_) => {
                let (value, c, right) = match *self {
                    Family::A0 => (vec![], Scalar::MINUS_ONE, 1),
                    // x^2 = 1 - g^2
                    Family::A1 => (
                        vec![term(Scalar::ONE, vec![0]), term(Scalar::MINUS_ONE, vec![2])],
                        Scalar::MINUS_ONE,
                        1,
                    ),
                    Family::B0 => (vec![], Scalar::MINUS_ONE, 3),
                    Family::B1(k) => {
                        params.insert("omega".into(), format!("z6^{k}"));
                        (vec![], Scalar::root(6, k as i64), 3)
                    }
                    _ => unreachable!(),
                };
                Presentation {
                    family: self.to_string(),
                    params,
                    conductor: None,
                    grouplikes: g(6),
                    skews: vec![skew("x", 2, value, vec![right], vec![0])],
                    commutations: vec![gx(c)],
                    skew_commutations: vec![],
                }
            }
        };
        Ok(p)
    }
}

pub fn build_named(family: Family) -> Result<HopfAlgebra> {
    build_from_presentation(&family.presentation()?)
}

/// Every catalog algebra named in the acceptance criteria, in a fixed order.
pub fn catalog_families() -> Vec<Family> {
    let mut v: Vec<Family> = (1..=6).map(Family::GroupAlgebraCyclic).collect();
    v.push(Family::Sweedler);
    v.extend((2..=6).map(Family::Taft));
    v.extend([Family::Radford(2), Family::Radford(3)]);
    v.extend([Family::AC2, Family::A1C4, Family::A2C4, Family::A3C4(1), Family::AC2xC2]);
    v.extend([Family::A0, Family::A1, Family::B0, Family::B1(1)]);
    v
}

fn word_radices(p: &Presentation) -> (Vec<u32>, Vec<u32>) {
    (
        p.grouplikes.iter().map(|g| g.order).collect(),
        p.skews.iter().map(|x| x.nilpotency).collect(),
    )
}

/// Basis vector of a generator of `p` inside `h = build_from_presentation(p)`.
pub fn generator_element(h: &HopfAlgebra, p: &Presentation, name: &str) -> Result<Vector> {
    let (orders, nilps) = word_radices(p);
    let group_size: usize = orders.iter().map(|&o| o as usize).product();
    let idx = if let Ok(t) = p.group_position(name) {
        let radix: usize = orders[..t].iter().map(|&o| o as usize).product();
        if orders[t] == 1 {
            0
        } else {
            radix
        }
    } else {
        let t = p.skew_position(name)?;
        group_size * nilps[..t].iter().map(|&o| o as usize).product::<usize>()
    };
    if idx >= h.dim() {
        return Err(HopfError::ShapeError("algebra does not match the presentation".into()));
    }
    Ok(h.basis(idx))
}

/// The linear map sending each basis word `g_1^a_1 .. x_1^p_1 ..` to the same product of the given
/// generator images. It is the algebra map with these images when they satisfy the relations,
/// which is not checked here.
pub fn map_from_generator_images(
    h: &HopfAlgebra,
    p: &Presentation,
    images: &BTreeMap<String, Vector>,
) -> Result<LinearMap> {
    let (orders, nilps) = word_radices(p);
    let group_size: usize = orders.iter().map(|&o| o as usize).product();
    if group_size * nilps.iter().map(|&o| o as usize).product::<usize>() != h.dim() {
        return Err(HopfError::ShapeError("algebra does not match the presentation".into()));
    }
    let names: Vec<&str> = p
        .grouplikes
        .iter()
        .map(|g| g.name.as_str())
        .chain(p.skews.iter().map(|x| x.name.as_str()))
        .collect();
    let gens: Vec<Vector> = names
        .iter()
        .map(|n| match images.get(*n) {
            Some(v) if v.len() == h.dim() => Ok(v.clone()),
            Some(_) => Err(HopfError::ShapeError(format!("image of {n} has the wrong length"))),
            None => generator_element(h, p, n),
        })
        .collect::<Result<_>>()?;
    let cols: Vec<Vector> = (0..h.dim())
        .map(|k| {
            let exps: Vec<u32> = mixed_radix(k % group_size, &orders)
                .into_iter()
                .chain(mixed_radix(k / group_size, &nilps))
                .collect();
            let mut acc = h.unit().clone();
            for (g, &e) in gens.iter().zip(&exps) {
                acc = h.mul_vec(&acc, &h.power(g, e as usize));
            }
            acc
        })
        .collect();
    Ok(LinearMap::from_images(&cols))
}

/// Basis of the `(g, h)`-primitive space `{v : Delta(v) = v (x) g + h (x) v}`.
pub fn primitive_space(h: &HopfAlgebra, g: &[CycloNum], hh: &[CycloNum]) -> Result<Vec<Vector>> {
    if !h.is_grouplike(g) {
        return Err(HopfError::NotGrouplike(h.format_element(g)));
    }
    if !h.is_grouplike(hh) {
        return Err(HopfError::NotGrouplike(h.format_element(hh)));
    }
    let n = h.dim();
    let field = h.field();
    // coefficient of e_i (x) e_j in Delta(e_k) - e_k (x) g - h (x) e_k, per k
    let mut rows: BTreeMap<(usize, usize), Vec<(usize, CycloNum)>> = BTreeMap::new();
    for k in 0..n {
        for (i, j, c) in h.comul_tensor().nonzero_bc(k) {
            rows.entry((i, j)).or_default().push((k, c.clone()));
        }
        for (j, gj) in g.iter().enumerate() {
            if !gj.is_zero() {
                rows.entry((k, j)).or_default().push((k, -gj));
            }
        }
        for (i, hi) in hh.iter().enumerate() {
            if !hi.is_zero() {
                rows.entry((i, k)).or_default().push((k, -hi));
            }
        }
    }
    let mut sys = LinearSystem::new(field, n);
    for row in rows.values() {
        sys.add_equation(row, &field.zero()).expect("homogeneous");
    }
    Ok(sys.solution().1)
}
