use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use super::{Fe, Field, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("polynomial {0} is constant")]
    Constant(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Univariate polynomial over a finite field, lowest coefficient first with no
/// trailing zeros. The zero polynomial has an empty coefficient vector and
/// degree `None`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

/// Renders as e.g. `x^3+2x^2+x+2`; coefficients are element encodings.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (i, c.0) {
                (0, v) => write!(f, "{v}")?,
                (1, 1) => f.write_str("x")?,
                (1, v) => write!(f, "{v}x")?,
                (d, 1) => write!(f, "x^{d}")?,
                (d, v) => write!(f, "{v}x^{d}")?,
            }
        }
        Ok(())
    }
}

/// Orders by degree, then by coefficients from the top down. For polynomials
/// of one degree this is the order of `sum c_i q^i`.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    /// Parses the comma-separated coefficient encodings, lowest first.
    pub fn parse(field: &Field, text: &str) -> Result<Poly, PolyError> {
        let coeffs = text
            .split(',')
            .map(|t| {
                let v: u64 = t.trim().parse().map_err(|_| FieldError::Parse(t.to_string()))?;
                field.element(v)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(field, coeffs))
    }

    /// Comma-separated coefficient encodings, lowest first.
    pub fn to_coeff_string(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs.iter().map(|c| c.0.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Field, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, Fe::ONE, 1)
    }

    pub fn monomial(field: &Field, c: Fe, degree: usize) -> Poly {
        let mut coeffs = vec![Fe::ZERO; degree + 1];
        coeffs[degree] = c;
        Poly::new(field, coeffs)
    }

    /// x - a
    pub fn linear(field: &Field, root: Fe) -> Poly {
        Poly::new(field, vec![field.neg(root), Fe::ONE])
    }

    /// Monic polynomial with the given roots (with multiplicity).
    pub fn from_roots(field: &Field, roots: &[Fe]) -> Poly {
        roots.iter().fold(Poly::one(field), |acc, &r| acc.mul(&Poly::linear(field, r)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert!(self.field == other.field);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        debug_assert!(self.field == other.field);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert!(self.field == other.field);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Returns `(quotient, remainder)` with `self = quotient * divisor + remainder`
    /// and `deg remainder < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let f = &self.field;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c;
            for (i, &g) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(c, g));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        Ok(self.divmod(divisor)?.1)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Monic least common multiple of two nonzero polynomials.
    pub fn lcm(&self, other: &Poly) -> Result<Poly, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let g = self.gcd(other)?;
        Ok(self.mul(other).divmod(&g)?.0.monic())
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, f.from_int(i as i64))).collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `p(x + shift)`.
    pub fn shift(&self, shift: Fe) -> Poly {
        let lin = Poly::new(&self.field, vec![shift, Fe::ONE]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(&self.field), |acc, &c| acc.mul(&lin).add(&Poly::constant(&self.field, c)))
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Result<Poly, PolyError> {
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(&self.field).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// x^(q^i) mod self for i = 0..=count, by repeated Frobenius.
    fn frobenius_orbit(&self, count: usize) -> Result<Vec<Poly>, PolyError> {
        let q = self.field.order() as u64;
        let mut out = Vec::with_capacity(count + 1);
        let mut cur = Poly::x(&self.field).rem(self)?;
        out.push(cur.clone());
        for _ in 0..count {
            cur = cur.pow_mod(q, self)?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Rabin's test: monic `f` of degree d is irreducible iff
    /// `x^(q^d) = x mod f` and `gcd(x^(q^(d/r)) - x, f) = 1` for each prime `r | d`.
    pub fn is_irreducible(&self) -> Result<bool, PolyError> {
        let d = match self.degree() {
            None | Some(0) => return Err(PolyError::Constant(self.to_string())),
            Some(d) => d,
        };
        if !self.is_monic() {
            return Err(PolyError::NotMonic(self.to_string()));
        }
        if d == 1 {
            return Ok(true);
        }
        let orbit = self.frobenius_orbit(d)?;
        let x = Poly::x(&self.field).rem(self)?;
        if orbit[d] != x {
            return Ok(false);
        }
        for r in (2..=d).filter(|&r| d % r == 0 && super::is_prime(r as u32)) {
            let h = orbit[d / r].sub(&x);
            if !self.gcd(&h)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.gcd(&self.derivative()).map(|g| g.is_one()).unwrap_or(false)
    }

    /// True iff `self | x^q - x`, i.e. it is a product of distinct linear
    /// factors over the field. Constants are treated as the empty product.
    pub fn splits_distinct_linear(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let m = self.monic();
                let q = self.field.order() as u64;
                match Poly::x(&self.field).pow_mod(q, &m) {
                    Ok(xq) => xq.sub(&Poly::x(&self.field)).rem(&m).map(|r| r.is_zero()).unwrap_or(false),
                    Err(_) => false,
                }
            }
        }
    }

    /// Monic irreducible cubic over GF(3) with nonzero x^2 coefficient: the
    /// companion matrices of exactly these admit no diagonalizable plus
    /// square-zero splitting.
    pub fn is_obstructed(&self) -> bool {
        self.field.order() == 3
            && self.degree() == Some(3)
            && self.is_monic()
            && !self.coeff(2).is_zero()
            && self.is_irreducible().unwrap_or(false)
    }

    /// Roots in the base field, ascending encoding order.
    pub fn roots(&self) -> Vec<Fe> {
        self.field.elements().filter(|&a| self.eval(a).is_zero()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f = f3();
        let a = Poly::from_ints(&f, &[1, 1]);
        let b = Poly::from_ints(&f, &[2, 1]);
        assert_eq!(a.mul(&b), Poly::from_ints(&f, &[2, 0, 1]));
        let x3 = Poly::from_ints(&f, &[0, 0, 0, 1]);
        let (q, r) = x3.divmod(&Poly::x(&f)).unwrap();
        assert_eq!(q, Poly::from_ints(&f, &[0, 0, 1]));
        assert!(r.is_zero());
        assert_eq!(a.add(&Poly::zero(&f)), a);
        assert_eq!(a.divmod(&Poly::zero(&f)), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn zero_degree_sentinel() {
        let f = f3();
        assert_eq!(Poly::zero(&f).degree(), None);
        assert_eq!(Poly::one(&f).degree(), Some(0));
        assert_eq!(Poly::from_ints(&f, &[1, 0, 3]).degree(), Some(0));
    }

    #[test]
    fn gcd_examples() {
        let f = f3();
        let a = Poly::from_ints(&f, &[-1, 0, 1]);
        let b = Poly::from_ints(&f, &[-1, 1]);
        assert_eq!(a.gcd(&b).unwrap(), Poly::from_ints(&f, &[2, 1]));
        let c = Poly::from_ints(&f, &[2, 2]);
        assert_eq!(c.gcd(&Poly::zero(&f)).unwrap(), c.monic());
        assert_eq!(Poly::zero(&f).gcd(&Poly::zero(&f)), Err(PolyError::BothZero));

        let f5 = Field::prime(5).unwrap();
        let g = Poly::from_ints(&f5, &[0, -1, 0, 1]);
        // x^3 - x = x (x - 1) (x + 1) is squarefree
        assert_eq!(g, Poly::from_roots(&f5, &[Fe(0), Fe(1), Fe(4)]));
        assert!(g.gcd(&g.derivative()).unwrap().is_one());
    }

    #[test]
    fn irreducibility_examples() {
        let f = f3();
        let p = Poly::from_ints(&f, &[-1, -1, -1, 1]);
        for a in f.elements() {
            assert!(!p.eval(a).is_zero());
        }
        assert!(p.is_irreducible().unwrap());
        assert!(!Poly::from_ints(&f, &[-1, 0, 1]).is_irreducible().unwrap());
        assert!(Poly::from_ints(&f, &[1, 0, 1]).is_irreducible().unwrap());
        assert!(matches!(Poly::from_ints(&f, &[1, 0, 2]).is_irreducible(), Err(PolyError::NotMonic(_))));
        assert!(matches!(Poly::one(&f).is_irreducible(), Err(PolyError::Constant(_))));
    }

    #[test]
    fn splitting_examples() {
        let f = f3();
        assert!(Poly::from_ints(&f, &[0, -1, 0, 1]).splits_distinct_linear());
        assert!(!Poly::from_ints(&f, &[0, 0, 1]).splits_distinct_linear());
        let f5 = Field::prime(5).unwrap();
        let g = Poly::from_ints(&f5, &[1, 0, 1]);
        assert_eq!(g.roots(), vec![Fe(2), Fe(3)]);
        assert!(g.splits_distinct_linear());
    }

    #[test]
    fn obstructed_examples() {
        let f = f3();
        assert!(Poly::from_ints(&f, &[-1, -1, -1, 1]).is_obstructed());
        let zero_trace = Poly::from_ints(&f, &[1, -1, 0, 1]);
        assert!(zero_trace.is_irreducible().unwrap());
        assert!(!zero_trace.is_obstructed());
        let f5 = Field::prime(5).unwrap();
        for c in 0..125i64 {
            let g = Poly::from_ints(&f5, &[c % 5, (c / 5) % 5, c / 25, 1]);
            assert!(!g.is_obstructed());
        }
    }

    /// Brute-force irreducibility: no monic factor of degree 1..=d/2.
    fn irreducible_by_trial(p: &Poly) -> bool {
        let f = p.field().clone();
        let q = f.order() as u64;
        let d = p.degree().unwrap();
        for deg in 1..=d / 2 {
            for code in 0..q.pow(deg as u32) {
                let mut c: Vec<Fe> = (0..deg).map(|i| Fe(((code / q.pow(i as u32)) % q) as u32)).collect();
                c.push(Fe::ONE);
                if Poly::new(&f, c).divides(p) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for field in [f3(), Field::prime(5).unwrap(), "3^2".parse().unwrap()] {
            let q = field.order() as u64;
            for d in 1..=4u32 {
                if q.pow(d) > 5000 {
                    continue;
                }
                for code in 0..q.pow(d) {
                    let mut c: Vec<Fe> = (0..d).map(|i| Fe(((code / q.pow(i)) % q) as u32)).collect();
                    c.push(Fe::ONE);
                    let p = Poly::new(&field, c);
                    assert_eq!(p.is_irreducible().unwrap(), irreducible_by_trial(&p), "{p} over {field}");
                }
            }
        }
    }

    #[test]
    fn obstructed_cubics_over_gf3() {
        let f = f3();
        let mut count = 0;
        for code in 0..27i64 {
            let p = Poly::from_ints(&f, &[code % 3, (code / 3) % 3, code / 9, 1]);
            if p.is_obstructed() {
                count += 1;
                assert!(p.is_irreducible().unwrap());
                assert!(!p.splits_distinct_linear());
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn shift_and_display() {
        let f = f3();
        let p = Poly::from_ints(&f, &[-1, -1, -1, 1]);
        assert_eq!(p.to_string(), "x^3+2x^2+2x+2");
        assert_eq!(p.to_coeff_string(), "2,2,2,1");
        assert_eq!(Poly::parse(&f, "2,2,2,1").unwrap(), p);
        for a in f.elements() {
            assert_eq!(p.shift(Fe(1)).eval(a), p.eval(f.add(a, Fe(1))));
        }
        assert_eq!(Poly::from_ints(&f, &[2, 1]).to_string(), "x+2");
    }

    fn arb_poly(field: Field, max_len: usize) -> impl Strategy<Value = Poly> {
        let q = field.order();
        prop::collection::vec(0..q, 0..max_len).prop_map(move |c| Poly::new(&field, c.into_iter().map(Fe).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn divmod_round_trip_gf3(a in arb_poly(f3(), 9), b in arb_poly(f3(), 6)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }

        #[test]
        fn divmod_round_trip_gf9(a in arb_poly("3^2".parse().unwrap(), 9), b in arb_poly("3^2".parse().unwrap(), 6)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }

        #[test]
        fn divmod_round_trip_gf7(a in arb_poly(Field::prime(7).unwrap(), 9), b in arb_poly(Field::prime(7).unwrap(), 6)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
        }
    }
}
