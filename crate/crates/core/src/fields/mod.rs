//! Exact arithmetic in GF(p^k) for odd p, and univariate polynomials over it.
//!
//! A [`Field`] is a cheap, clonable handle. Elements are stored as [`Fe`], the
//! integer encoding `a_0 + a_1 p + ... + a_{k-1} p^{k-1}` of the residue vector
//! `(a_0, ..., a_{k-1})`; for prime fields this is just the residue. All
//! arithmetic goes through the field handle.

mod element;
mod poly;

pub use element::{ArithOp, FieldElement};
pub use poly::{Poly, PolyError};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Largest cardinality accepted for any field. Keeps log tables small.
pub const MAX_FIELD_SIZE: u32 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic {0} is even; only odd characteristic is supported")]
    EvenCharacteristic(u32),
    #[error("field of size {0} exceeds the supported maximum {MAX_FIELD_SIZE}")]
    TooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus {0}")]
    BadModulus(String),
    #[error("no built-in modulus for GF({p}^{k}); supply one as \"{p}^{k}:c0,c1,...\"")]
    NoDefaultModulus { p: u32, k: u32 },
    #[error("cannot parse field spec {0:?}")]
    Parse(String),
    #[error("element encoding {value} out of range for field of size {q}")]
    OutOfRange { value: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    Mismatch(String, String),
}

/// Encoded field element. Only meaningful together with its [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct FieldData {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus over GF(p), lowest coefficient first, length k + 1.
    /// Empty for prime fields.
    modulus: Vec<u32>,
    /// exp[i] = g^i for a primitive element g, i in 0..q-1 (extensions only).
    exp: Vec<u32>,
    /// log[a] for a != 0 (extensions only).
    log: Vec<u32>,
}

/// Handle to GF(p^k).
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.q.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self)
    }
}

/// Text form: `p` for prime fields, `p^k:c0,c1,...,ck` for extensions.
impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            return write!(f, "{}", self.0.p);
        }
        write!(f, "{}^{}:", self.0.p, self.0.k)?;
        for (i, c) in self.0.modulus.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", c)?;
        }
        Ok(())
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Built-in moduli, lowest coefficient first.
fn default_modulus(p: u32, k: u32) -> Option<Vec<u32>> {
    match (p, k) {
        (3, 2) => Some(vec![1, 0, 1]),
        (5, 2) => Some(vec![2, 0, 1]),
        (3, 3) => Some(vec![1, 2, 0, 1]),
        (7, 2) => Some(vec![1, 0, 1]),
        _ => None,
    }
}

impl Field {
    /// The prime field GF(p), p an odd prime.
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p == 2 {
            return Err(FieldError::EvenCharacteristic(p));
        }
        if p > MAX_FIELD_SIZE {
            return Err(FieldError::TooLarge(p as u64));
        }
        Ok(Field(Arc::new(FieldData { p, k: 1, q: p, modulus: Vec::new(), exp: Vec::new(), log: Vec::new() })))
    }

    /// GF(p^k) using the built-in modulus (available for 9, 25, 27 and 49).
    pub fn gf(p: u32, k: u32) -> Result<Field, FieldError> {
        match k {
            0 => Err(FieldError::ZeroDegree),
            1 => Field::prime(p),
            _ => {
                let modulus = default_modulus(p, k).ok_or(FieldError::NoDefaultModulus { p, k })?;
                Field::extension(p, &modulus)
            }
        }
    }

    /// GF(p)[x]/(modulus). The modulus is given lowest coefficient first and
    /// must be monic and irreducible of degree at least 1.
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Field, FieldError> {
        let base = Field::prime(p)?;
        if modulus.len() < 2 {
            return Err(FieldError::ZeroDegree);
        }
        if modulus.len() == 2 {
            if modulus[1] != 1 || modulus[0] >= p {
                return Err(FieldError::BadModulus("must be monic with residues below p".into()));
            }
            return Ok(base);
        }
        let k = (modulus.len() - 1) as u32;
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_FIELD_SIZE as u64).ok_or_else(|| {
            FieldError::TooLarge((p as u64).saturating_pow(k))
        })? as u32;
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus(format!("coefficients must lie in [0, {p})")));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(FieldError::BadModulus("must be monic".into()));
        }
        let poly = Poly::new(&base, modulus.iter().map(|&c| Fe(c)).collect());
        if !poly.is_irreducible().unwrap_or(false) {
            return Err(FieldError::BadModulus(format!("{poly} is reducible over GF({p})")));
        }
        let mut data = FieldData { p, k, q, modulus: modulus.to_vec(), exp: Vec::new(), log: Vec::new() };
        build_log_tables(&mut data);
        Ok(Field(Arc::new(data)))
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.k
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, lowest first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.0.k == 1 {
            None
        } else {
            Some(&self.0.modulus)
        }
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    pub fn element(&self, value: u64) -> Result<Fe, FieldError> {
        if value >= self.0.q as u64 {
            return Err(FieldError::OutOfRange { value, q: self.0.q });
        }
        Ok(Fe(value as u32))
    }

    /// Image of an integer under Z -> GF(p) -> GF(q).
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Residue vector (a_0, ..., a_{k-1}) of an element.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut v = a.0;
        (0..self.0.k)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe, FieldError> {
        if coeffs.len() != self.0.k as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(FieldError::Parse(format!("{coeffs:?} is not a residue vector of length {}", self.0.k)));
        }
        Ok(Fe(coeffs.iter().rev().fold(0, |acc, &c| acc * self.0.p + c)))
    }

    /// All q elements in ascending encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.0.q).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let d = &*self.0;
        if d.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= d.p { s - d.p } else { s });
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        while x > 0 || y > 0 {
            let s = (x % d.p + y % d.p) % d.p;
            out += s * place;
            place *= d.p;
            x /= d.p;
            y /= d.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let d = &*self.0;
        if d.k == 1 {
            return Fe(if a.0 == 0 { 0 } else { d.p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x > 0 {
            let r = x % d.p;
            out += ((d.p - r) % d.p) * place;
            place *= d.p;
            x /= d.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        let d = &*self.0;
        if d.k == 1 {
            return Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + d.p - b.0 });
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let d = &*self.0;
        if d.k == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % d.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let e = (d.log[a.0 as usize] + d.log[b.0 as usize]) % (d.q - 1);
        Fe(d.exp[e as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let d = &*self.0;
        if d.k == 1 {
            // extended Euclid on (a, p)
            let (mut r0, mut r1) = (d.p as i64, a.0 as i64);
            let (mut t0, mut t1) = (0i64, 1i64);
            while r1 != 0 {
                let qt = r0 / r1;
                (r0, r1) = (r1, r0 - qt * r1);
                (t0, t1) = (t1, t0 - qt * t1);
            }
            return Ok(Fe(t0.rem_euclid(d.p as i64) as u32));
        }
        let e = (d.q - 1 - d.log[a.0 as usize]) % (d.q - 1);
        Ok(Fe(d.exp[e as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply; `pow(a, 0) = 1` for every `a`, including zero.
    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.is_zero() || self.pow(a, (self.0.q as u64 - 1) / 2) == Fe::ONE
    }
}

/// Multiplication of residue vectors modulo the (monic) modulus, used only to
/// build the log tables.
fn mul_by_poly(d: &FieldData, a: u32, b: u32) -> u32 {
    let (p, k) = (d.p as u64, d.k as usize);
    let digits = |mut v: u32| {
        let mut out = vec![0u64; k];
        for slot in out.iter_mut() {
            *slot = (v % d.p) as u64;
            v /= d.p;
        }
        out
    };
    let (x, y) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &xi) in x.iter().enumerate() {
        for (j, &yj) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + xi * yj) % p;
        }
    }
    for top in (k..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (i, &m) in d.modulus[..k].iter().enumerate() {
            let idx = top - k + i;
            prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
        }
        prod[top] = 0;
    }
    prod[..k].iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

fn build_log_tables(d: &mut FieldData) {
    let group = (d.q - 1) as u64;
    let factors = prime_factors(group);
    let pow_slow = |d: &FieldData, a: u32, mut e: u64| {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_by_poly(d, acc, base);
            }
            base = mul_by_poly(d, base, base);
            e >>= 1;
        }
        acc
    };
    let generator = (2..d.q)
        .find(|&g| factors.iter().all(|&r| pow_slow(d, g, group / r) != 1))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = Vec::with_capacity(group as usize);
    let mut log = vec![0u32; d.q as usize];
    let mut cur = 1u32;
    for i in 0..group as u32 {
        exp.push(cur);
        log[cur as usize] = i;
        cur = mul_by_poly(d, cur, generator);
    }
    d.exp = exp;
    d.log = log;
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || FieldError::Parse(s.to_string());
        let (head, modulus) = match s.split_once(':') {
            Some((h, m)) => (h, Some(m)),
            None => (s, None),
        };
        let (p, k) = match head.split_once('^') {
            Some((p, k)) => (p.trim().parse::<u32>().map_err(|_| bad())?, k.trim().parse::<u32>().map_err(|_| bad())?),
            None => (head.parse::<u32>().map_err(|_| bad())?, 1),
        };
        match modulus {
            None => Field::gf(p, k),
            Some(m) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                if coeffs.len() != k as usize + 1 {
                    return Err(FieldError::BadModulus(format!("expected {} coefficients, got {}", k + 1, coeffs.len())));
                }
                Field::extension(p, &coeffs)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> Field {
        Field::gf(3, 2).unwrap()
    }

    #[test]
    fn prime_field_examples() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.add(Fe(2), Fe(2)), Fe(1));
        assert_eq!(f.neg(Fe(1)), Fe(2));
        assert_eq!(f.inv(Fe(2)).unwrap(), Fe(2));
        assert_eq!(f.pow(Fe(2), 3), Fe(2));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.inv(Fe(3)).unwrap(), Fe(2));
        assert_eq!(f5.pow(Fe(2), 4), Fe(1));
        assert_eq!(f5.pow(Fe(0), 0), Fe(1));
    }

    #[test]
    fn gf9_examples() {
        let f = gf9();
        // x has encoding 3 (coefficients (0, 1)); 2x has encoding 6
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(x, Fe(3));
        assert_eq!(f.mul(x, x), Fe(2));
        assert_eq!(f.inv(x).unwrap(), Fe(6));
    }

    #[test]
    fn gf9_mul_matches_table_by_hand() {
        // oracle: multiply residue vectors (a0 + a1 x)(b0 + b1 x) with x^2 = -1
        let f = gf9();
        for a in f.elements() {
            for b in f.elements() {
                let (a0, a1) = (a.0 % 3, a.0 / 3);
                let (b0, b1) = (b.0 % 3, b.0 / 3);
                let c0 = (a0 * b0 + 2 * a1 * b1) % 3;
                let c1 = (a0 * b1 + a1 * b0) % 3;
                assert_eq!(f.mul(a, b), Fe(c0 + 3 * c1), "{a:?} * {b:?}");
            }
        }
    }

    #[test]
    fn enumerate_in_encoding_order() {
        let f = gf9();
        let all: Vec<_> = f.elements().collect();
        assert_eq!(all, (0..9).map(Fe).collect::<Vec<_>>());
        assert_eq!(Field::prime(3).unwrap().elements().collect::<Vec<_>>(), vec![Fe(0), Fe(1), Fe(2)]);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in [Field::prime(3).unwrap(), Field::prime(5).unwrap(), gf9()] {
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let f: Field = "3".parse().unwrap();
        assert_eq!(f.to_string(), "3");
        let g: Field = "3^2".parse().unwrap();
        assert_eq!(g.to_string(), "3^2:1,0,1");
        let h: Field = "3^2:2,2,1".parse().unwrap();
        assert_eq!(h.order(), 9);
        assert_ne!(g, h);
        assert_eq!("3^2:1,0,1".parse::<Field>().unwrap(), g);
        assert!(matches!("2".parse::<Field>(), Err(FieldError::EvenCharacteristic(2))));
        assert!(matches!("9".parse::<Field>(), Err(FieldError::NotPrime(9))));
        assert!(matches!("3^2:2,0,1".parse::<Field>(), Err(FieldError::BadModulus(_))));
        assert!(matches!("11^2".parse::<Field>(), Err(FieldError::NoDefaultModulus { .. })));
        assert!("11^2:1,0,1".parse::<Field>().is_ok());
        for spec in ["5^2", "3^3", "7^2"] {
            let f: Field = spec.parse().unwrap();
            assert_eq!(f.to_string().parse::<Field>().unwrap(), f);
        }
    }

    #[test]
    fn coeff_encoding_round_trips() {
        let f: Field = "3^3".parse().unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(gf9().inv(Fe::ZERO), Err(FieldError::DivisionByZero));
    }
}
