//! Exact arithmetic in the cyclotomic field `Q(z)`, `z` a primitive `M`-th root of unity.
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(M)-1)` of `Q[t]/Phi_M(t)` as a
//! vector of integer numerators over one positive common denominator. The representation is
//! canonical (trailing zero numerators trimmed, `gcd(content, den) = 1`), so equality and
//! hashing are plain structural comparisons.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HopfError, Result};

struct FieldData {
    conductor: u32,
    /// Non-leading coefficients of the monic polynomial `Phi_M`.
    phi_low: Vec<BigInt>,
}

/// Handle to the cyclotomic field of a fixed conductor. Cheap to clone.
#[derive(Clone)]
pub struct CycloField(Arc<FieldData>);

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.0.conductor == other.0.conductor
    }
}
impl Eq for CycloField {}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(z{})", self.0.conductor)
    }
}

fn field_cache() -> &'static Mutex<HashMap<u32, CycloField>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, CycloField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients (constant term first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    // t^n - 1 divided by Phi_d for every proper divisor d.
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = div_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

fn div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl CycloField {
    /// The field `Q(z_M)`; instances are shared per conductor.
    pub fn new(conductor: u32) -> CycloField {
        assert!(conductor >= 1, "conductor must be positive");
        let mut cache = field_cache().lock().unwrap_or_else(|e| e.into_inner());
        cache
            .entry(conductor)
            .or_insert_with(|| {
                let phi = cyclotomic_polynomial(conductor);
                let deg = phi.len() - 1;
                CycloField(Arc::new(FieldData {
                    conductor,
                    phi_low: phi[..deg].to_vec(),
                }))
            })
            .clone()
    }

    pub fn conductor(&self) -> u32 {
        self.0.conductor
    }

    /// Degree `phi(M)` of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.0.phi_low.len()
    }

    pub fn zero(&self) -> CycloNum {
        CycloNum {
            field: self.clone(),
            num: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn one(&self) -> CycloNum {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> CycloNum {
        self.rational(BigInt::from(v), BigInt::one())
    }

    pub fn rational(&self, num: BigInt, den: BigInt) -> CycloNum {
        assert!(!den.is_zero(), "zero denominator");
        let mut x = CycloNum {
            field: self.clone(),
            num: vec![num],
            den,
        };
        x.normalize();
        x
    }

    pub fn from_ratio(&self, q: &BigRational) -> CycloNum {
        self.rational(q.numer().clone(), q.denom().clone())
    }

    /// `z_M^e` for any integer exponent.
    pub fn zeta_pow(&self, e: i64) -> CycloNum {
        let m = self.conductor() as i64;
        let e = e.rem_euclid(m) as usize;
        let mut num = vec![BigInt::zero(); e + 1];
        num[e] = BigInt::one();
        let mut x = CycloNum {
            field: self.clone(),
            num,
            den: BigInt::one(),
        };
        x.reduce();
        x.normalize();
        x
    }

    /// `z_k^power` inside this field; requires `k | M`.
    pub fn root_of_unity(&self, order: u32, power: i64) -> Result<CycloNum> {
        if order == 0 {
            return Err(HopfError::InvalidParameter("root order must be positive".into()));
        }
        if !self.conductor().is_multiple_of(order) {
            return Err(HopfError::ConductorTooSmall {
                conductor: self.conductor(),
                needed: order,
            });
        }
        let step = (self.conductor() / order) as i64;
        Ok(self.zeta_pow(step * power.rem_euclid(order as i64)))
    }

    /// Element from rational coordinates in the power basis (any length; reduced mod `Phi_M`).
    pub fn from_coeffs(&self, coeffs: &[BigRational]) -> CycloNum {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut x = CycloNum {
            field: self.clone(),
            num,
            den,
        };
        x.reduce();
        x.normalize();
        x
    }
}

/// An exact element of `Q(z_M)`.
#[derive(Clone)]
pub struct CycloNum {
    field: CycloField,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloNum {
    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.num[0].is_one() && self.den.is_one()
    }

    /// Rational coordinates in the power basis, always of length `phi(M)`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.field.degree())
            .map(|k| match self.num.get(k) {
                Some(n) => BigRational::new(n.clone(), self.den.clone()),
                None => BigRational::zero(),
            })
            .collect()
    }

    /// The rational value when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self.num.len() {
            0 => Some(BigRational::zero()),
            1 => Some(BigRational::new(self.num[0].clone(), self.den.clone())),
            _ => None,
        }
    }

    fn reduce(&mut self) {
        let d = self.field.degree();
        if self.num.len() <= d {
            return;
        }
        let phi = &self.field.0.phi_low;
        for k in (d..self.num.len()).rev() {
            let c = std::mem::take(&mut self.num[k]);
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate() {
                if !pj.is_zero() {
                    self.num[k - d + j] -= &c * pj;
                }
            }
        }
        self.num.truncate(d);
    }

    fn normalize(&mut self) {
        while self.num.last().is_some_and(Zero::is_zero) {
            self.num.pop();
        }
        if self.num.is_empty() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for n in &mut self.num {
                *n = -std::mem::take(n);
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            self.den /= &g;
            for n in &mut self.num {
                *n /= &g;
            }
        }
    }

    fn check_field(&self, other: &CycloNum) -> Option<CycloField> {
        if self.field == other.field {
            None
        } else {
            Some(CycloField::new(lcm(self.conductor(), other.conductor())))
        }
    }

    /// Image under the embedding `Q(z_M) -> Q(z_N)`, `z_M -> z_N^(N/M)`; requires `M | N`.
    pub fn embed(&self, target: &CycloField) -> Result<CycloNum> {
        let (m, n) = (self.conductor(), target.conductor());
        if n % m != 0 {
            return Err(HopfError::ConductorTooSmall {
                conductor: n,
                needed: m,
            });
        }
        if m == n {
            return Ok(self.clone());
        }
        let step = (n / m) as usize;
        let mut num = vec![BigInt::zero(); step * self.num.len().saturating_sub(1) + 1];
        for (k, c) in self.num.iter().enumerate() {
            num[k * step] = c.clone();
        }
        let mut x = CycloNum {
            field: target.clone(),
            num,
            den: self.den.clone(),
        };
        x.reduce();
        x.normalize();
        Ok(x)
    }

    fn lift_pair(&self, other: &CycloNum) -> (CycloNum, CycloNum) {
        match self.check_field(other) {
            None => (self.clone(), other.clone()),
            Some(f) => (
                self.embed(&f).expect("lcm conductor"),
                other.embed(&f).expect("lcm conductor"),
            ),
        }
    }

    fn add_impl(&self, other: &CycloNum, negate: bool) -> CycloNum {
        if self.field != other.field {
            let (a, b) = self.lift_pair(other);
            return a.add_impl(&b, negate);
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let len = self.num.len().max(other.num.len());
        let mut num = Vec::with_capacity(len);
        if self.den == other.den {
            for k in 0..len {
                let a = self.num.get(k);
                let b = other.num.get(k);
                num.push(combine(a, b, None, None, negate));
            }
            let mut x = CycloNum {
                field: self.field.clone(),
                num,
                den: self.den.clone(),
            };
            x.normalize();
            x
        } else {
            for k in 0..len {
                num.push(combine(
                    self.num.get(k),
                    other.num.get(k),
                    Some(&other.den),
                    Some(&self.den),
                    negate,
                ));
            }
            let mut x = CycloNum {
                field: self.field.clone(),
                num,
                den: &self.den * &other.den,
            };
            x.normalize();
            x
        }
    }

    fn mul_impl(&self, other: &CycloNum) -> CycloNum {
        if self.field != other.field {
            let (a, b) = self.lift_pair(other);
            return a.mul_impl(&b);
        }
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        let mut num = vec![BigInt::zero(); self.num.len() + other.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    num[i + j] += a * b;
                }
            }
        }
        let mut x = CycloNum {
            field: self.field.clone(),
            num,
            den: &self.den * &other.den,
        };
        x.reduce();
        x.normalize();
        x
    }

    pub fn scale_int(&self, k: i64) -> CycloNum {
        let mut x = self.clone();
        for n in &mut x.num {
            *n *= k;
        }
        x.normalize();
        x
    }

    /// Multiplicative inverse, via the extended Euclidean algorithm in `Q[t]` modulo `Phi_M`.
    pub fn inv(&self) -> Result<CycloNum> {
        if self.is_zero() {
            return Err(HopfError::DivByZero);
        }
        // Fast path for monomials c*z^k.
        if let Some(k) = self.monomial_degree() {
            let c = BigRational::new(self.num[k].clone(), self.den.clone());
            let ci = c.recip();
            let zk = self.field.zeta_pow(-(k as i64));
            return Ok(&zk * &self.field.from_ratio(&ci));
        }
        let modulus: Vec<BigRational> = self
            .field
            .0
            .phi_low
            .iter()
            .cloned()
            .chain(std::iter::once(BigInt::one()))
            .map(BigRational::from_integer)
            .collect();
        let a: Vec<BigRational> = self
            .num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect();
        let s = qpoly::inverse_mod(&a, &modulus).ok_or(HopfError::DivByZero)?;
        Ok(self.field.from_coeffs(&s))
    }

    fn monomial_degree(&self) -> Option<usize> {
        let mut found = None;
        for (k, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some(k);
            }
        }
        found
    }

    pub fn try_div(&self, other: &CycloNum) -> Result<CycloNum> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<CycloNum> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Smallest `k <= bound` with `self^k = 1`.
    pub fn multiplicative_order(&self, bound: u32) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    /// Both square roots of a root of unity `self`, as roots of unity in `Q(z_N)`,
    /// `N = lcm(M, 2k)` where `k` is the order of `self`. Sorted by their exponent in `z_N`.
    pub fn sqrt_of_root_of_unity(&self, bound: u32) -> Result<Vec<CycloNum>> {
        let k = self
            .multiplicative_order(bound)
            .ok_or(HopfError::NotRootOfUnity)?;
        let target = CycloField::new(lcm(self.conductor(), 2 * k));
        let z = self.embed(&target)?;
        let mut roots = Vec::new();
        for j in 0..(2 * k) as i64 {
            let w = target.root_of_unity(2 * k, j)?;
            if &w * &w == z {
                roots.push(w);
            }
        }
        debug_assert_eq!(roots.len(), 2);
        Ok(roots)
    }

    /// Exponent `e` with `self = z_M^e`, when `self` is a power of `z_M`.
    pub fn zeta_log(&self) -> Option<u32> {
        let m = self.conductor();
        (0..m).find(|&e| self.field.zeta_pow(e as i64) == *self)
    }
}

fn combine(
    a: Option<&BigInt>,
    b: Option<&BigInt>,
    sa: Option<&BigInt>,
    sb: Option<&BigInt>,
    negate: bool,
) -> BigInt {
    let a = match (a, sa) {
        (Some(a), Some(s)) => a * s,
        (Some(a), None) => a.clone(),
        (None, _) => BigInt::zero(),
    };
    let b = match (b, sb) {
        (Some(b), Some(s)) => b * s,
        (Some(b), None) => b.clone(),
        (None, _) => BigInt::zero(),
    };
    if negate {
        a - b
    } else {
        a + b
    }
}

mod qpoly {
    //! Dense polynomials over `Q`, constant term first; only what inversion needs.
    use num_rational::BigRational;
    use num_traits::Zero;

    fn trim(p: &mut Vec<BigRational>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        while r.len() >= b.len() {
            let k = r.len() - 1 - db;
            let c = r.last().unwrap() / &lead;
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
            q[k] = c;
            r.pop();
            trim(&mut r);
        }
        (q, r)
    }

    fn sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = a.to_vec();
        if q.is_empty() || b.is_empty() {
            return out;
        }
        let len = q.len() + b.len() - 1;
        if out.len() < len {
            out.resize(len, BigRational::zero());
        }
        for (i, qi) in q.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                out[i + j] -= qi * bj;
            }
        }
        trim(&mut out);
        out
    }

    /// `s` with `s*a = 1 mod m`, or `None` when `gcd(a, m) != 1`.
    pub fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
        let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
        trim(&mut r1);
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) =
            (Vec::new(), vec![num_traits::One::one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s2 = sub_mul(&s0, &q, &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            return None;
        }
        let c = r0[0].clone();
        Some(s0.into_iter().map(|x| x / &c).collect())
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.field == other.field {
            self.num == other.num && self.den == other.den
        } else {
            let (a, b) = self.lift_pair(other);
            a.num == b.num && a.den == b.den
        }
    }
}
impl Eq for CycloNum {}

impl Hash for CycloNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor().hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                $body(self, rhs)
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                $body(&self, &rhs)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                $body(&self, rhs)
            }
        }
        impl $tr<CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &CycloNum, b: &CycloNum| a.add_impl(b, false));
binop!(Sub, sub, |a: &CycloNum, b: &CycloNum| a.add_impl(b, true));
binop!(Mul, mul, |a: &CycloNum, b: &CycloNum| a.mul_impl(b));

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        *self = self.add_impl(rhs, false);
    }
}
impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        *self = self.add_impl(rhs, true);
    }
}
impl MulAssign<&CycloNum> for CycloNum {
    fn mul_assign(&mut self, rhs: &CycloNum) {
        *self = self.mul_impl(rhs);
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        let mut x = self.clone();
        for n in &mut x.num {
            *n = -std::mem::take(n);
        }
        x
    }
}
impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, n) in self.num.iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            let q = BigRational::new(n.clone(), self.den.clone());
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => format!("z{}", self.conductor()),
                _ => format!("z{}^{}", self.conductor(), k),
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum({})", self)
    }
}

/// Exact integer written as a JSON number when it fits in `i64`, else as a decimal string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => JsonInt::Small(s),
            None => JsonInt::Big(v.to_string()),
        }
    }
}

impl JsonInt {
    fn to_bigint(&self) -> std::result::Result<BigInt, String> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycloNumRepr {
    conductor: u32,
    coeffs: Vec<(JsonInt, JsonInt)>,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs()
            .iter()
            .map(|q| (JsonInt::from(q.numer()), JsonInt::from(q.denom())))
            .collect();
        CycloNumRepr {
            conductor: self.conductor(),
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloNumRepr::deserialize(d)?;
        if repr.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let field = CycloField::new(repr.conductor);
        if repr.coeffs.len() != field.degree() {
            return Err(D::Error::custom(format!(
                "expected {} coefficients for conductor {}, found {}",
                field.degree(),
                repr.conductor,
                repr.coeffs.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(repr.coeffs.len());
        for (n, dn) in &repr.coeffs {
            let n = n.to_bigint().map_err(D::Error::custom)?;
            let dn = dn.to_bigint().map_err(D::Error::custom)?;
            if dn.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(BigRational::new(n, dn));
        }
        Ok(field.from_coeffs(&coeffs))
    }
}
