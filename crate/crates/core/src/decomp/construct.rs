//! Explicit square-zero `M` for a companion matrix `A = C(u)` of order at
//! least 5 such that `A + M` is annihilated by a squarefree split polynomial.
//!
//! Entries are written with 1-based indices `m_{ij}` to keep them comparable
//! with the displayed matrices. `M` here is the additive partner (`A + M`
//! diagonalizable); callers negate it to obtain `A = D + M`.

use crate::fields::{Fe, Field, Poly};
use crate::matrices::{CompanionSpec, Matrix};

use super::DecompError;

struct Entries<'a> {
    field: &'a Field,
    m: Matrix,
}

impl<'a> Entries<'a> {
    fn new(field: &'a Field, n: usize) -> Self {
        Entries { field, m: Matrix::zero(field, n) }
    }

    fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.m[(i - 1, j - 1)] = v;
    }

    fn neg(&self, a: Fe) -> Fe {
        self.field.neg(a)
    }
}

fn check_shape(spec: &CompanionSpec, odd: bool, min: usize, zero_trace: bool) -> Result<usize, DecompError> {
    let n = spec.order();
    if n < min {
        return Err(DecompError::TooSmall { n, min });
    }
    if (n % 2 == 1) != odd {
        return Err(DecompError::WrongParity { n });
    }
    if spec.top().is_zero() != zero_trace {
        return Err(if zero_trace { DecompError::NonzeroTrace } else { DecompError::ZeroTrace });
    }
    Ok(n)
}

fn x3_minus_cx(field: &Field, c: Fe) -> Poly {
    Poly::new(field, vec![Fe::ZERO, field.neg(c), Fe::ZERO, Fe::ONE])
}

/// Odd `n >= 5`, trace `t != 0`. Annihilator `x^3 - t^2 x`.
pub fn build_m_nzt_odd(field: &Field, spec: &CompanionSpec) -> Result<(Matrix, Poly), DecompError> {
    let n = check_shape(spec, true, 5, false)?;
    let u = &spec.u;
    let t = spec.top();
    let t2 = field.mul(t, t);
    let mut e = Entries::new(field, n);
    for k in (3..=n - 2).step_by(2) {
        e.set(k + 1, k, e.neg(Fe::ONE));
        e.set(k - 1, k, t2);
    }
    e.set(1, n, e.neg(u[0]));
    for k in (2..=n - 3).step_by(2) {
        e.set(k, n, field.sub(e.neg(u[k - 1]), field.mul(t, u[k])));
    }
    e.set(n - 1, n, e.neg(u[n - 2]));
    Ok((e.m, x3_minus_cx(field, t2)))
}

/// Even `n >= 6`, trace `t != 0`. Annihilator `x^3 - t^2 x`.
pub fn build_m_nzt_even(field: &Field, spec: &CompanionSpec) -> Result<(Matrix, Poly), DecompError> {
    let n = check_shape(spec, false, 6, false)?;
    let u = &spec.u;
    let t = spec.top();
    let t2 = field.mul(t, t);
    let mut e = Entries::new(field, n);
    for k in (2..=n - 2).step_by(2) {
        e.set(k + 1, k, e.neg(Fe::ONE));
        e.set(k - 1, k, t2);
    }
    for k in (1..=n - 3).step_by(2) {
        e.set(k, n, field.sub(e.neg(u[k - 1]), field.mul(t, u[k])));
    }
    e.set(n - 1, n, e.neg(u[n - 2]));
    Ok((e.m, x3_minus_cx(field, t2)))
}

/// Odd `n >= 5`, zero trace. Annihilator `x^3 - x`.
pub fn build_m_zt_odd(field: &Field, spec: &CompanionSpec) -> Result<(Matrix, Poly), DecompError> {
    let n = check_shape(spec, true, 5, true)?;
    let mut e = Entries::new(field, n);
    for k in (2..=n - 1).step_by(2) {
        e.set(k + 1, k, e.neg(Fe::ONE));
        e.set(k - 1, k, Fe::ONE);
    }
    Ok((e.m, x3_minus_cx(field, Fe::ONE)))
}

/// Smallest element in encoding order with `a != 0` and `a^2 != 1`.
pub fn choose_alpha(field: &Field) -> Result<Fe, DecompError> {
    if field.order() == 3 {
        return Err(DecompError::FieldIsF3);
    }
    Ok(field.elements().find(|&a| valid_alpha(field, a)).expect("q >= 5 has such an element"))
}

fn valid_alpha(field: &Field, a: Fe) -> bool {
    !a.is_zero() && field.mul(a, a) != Fe::ONE
}

/// Even `n >= 6`, zero trace, `q >= 5`. Annihilator `(x^2 - 1)(x^2 - alpha^2)`.
pub fn build_m_zt_even_q5(field: &Field, spec: &CompanionSpec, alpha: Fe) -> Result<(Matrix, Poly), DecompError> {
    if field.order() == 3 {
        return Err(DecompError::FieldIsF3);
    }
    if !valid_alpha(field, alpha) {
        return Err(DecompError::BadAlpha);
    }
    let n = check_shape(spec, false, 6, true)?;
    let u = &spec.u;
    let a2 = field.mul(alpha, alpha);
    let mut e = Entries::new(field, n);
    for k in (2..=n - 2).step_by(2) {
        e.set(k + 1, k, e.neg(Fe::ONE));
        e.set(k - 1, k, Fe::ONE);
    }
    for k in (1..=n - 3).step_by(2) {
        e.set(k, n, e.neg(u[k - 1]));
    }
    e.set(n - 1, n, field.sub(a2, u[n - 2]));
    let ann = Poly::from_ints(field, &[-1, 0, 1]).mul(&Poly::new(field, vec![field.neg(a2), Fe::ZERO, Fe::ONE]));
    Ok((e.m, ann))
}

/// Krylov basis of `e_1` under `A - I`: the columns `P` with
/// `P^{-1} (A - I) P = C(f(x + 1))`.
pub(super) fn shift_transform(field: &Field, spec: &CompanionSpec) -> (Matrix, CompanionSpec) {
    let n = spec.order();
    let b = Matrix::companion(field, spec).add_scalar(field.neg(Fe::ONE));
    let mut cols = Vec::with_capacity(n);
    let mut v = vec![Fe::ZERO; n];
    v[0] = Fe::ONE;
    for _ in 0..n {
        let next = b.mul_vec(&v);
        cols.push(std::mem::replace(&mut v, next));
    }
    let p = Matrix::from_columns(field, &cols).expect("square");
    let g = spec.poly(field).shift(Fe::ONE);
    (p, CompanionSpec::from_poly(&g).expect("monic"))
}

/// GF(3), even `n >= 6`, zero trace. Returns `(M, annihilator, shift)`.
///
/// For `3 ∤ n` the trace of `A - I` is `-n != 0`, so the nonzero-trace
/// construction applies to its companion form and is pulled back; the shift
/// is 1. For `n = 6k` the explicit pattern below is used and the shift is 0.
pub fn build_m_f3_even(field: &Field, spec: &CompanionSpec) -> Result<(Matrix, Poly, Fe), DecompError> {
    if field.order() != 3 {
        return Err(DecompError::NotF3);
    }
    let n = check_shape(spec, false, 6, true)?;
    let ann = x3_minus_cx(field, Fe::ONE);
    if n % 3 != 0 {
        let (p, g) = shift_transform(field, spec);
        let (mg, _) = build_m_nzt_even(field, &g)?;
        let p_inv = p.try_inverse().expect("e_1 is cyclic for a companion matrix");
        return Ok((&(&p * &mg) * &p_inv, ann, Fe::ONE));
    }
    let u = &spec.u;
    let mut e = Entries::new(field, n);
    let one = Fe::ONE;
    let minus_one = e.neg(one);
    for k in (2..=n - 4).step_by(2) {
        e.set(k + 1, k, minus_one);
        e.set(k - 1, k, one);
    }
    e.set(n - 1, n - 1, one);
    e.set(n - 2, n - 1, one);
    e.set(n - 1, n - 2, minus_one);
    e.set(n - 2, n - 2, minus_one);
    for k in (1..=n - 5).step_by(2) {
        e.set(k, n, e.neg(field.add(u[k - 1], u[k])));
    }
    // signs as in the displayed matrix; see the test below for the other reading
    e.set(n - 3, n, e.neg(u[n - 4]));
    e.set(n - 2, n, e.neg(u[n - 2]));
    e.set(n - 1, n, e.neg(u[n - 2]));
    Ok((e.m, ann, Fe::ZERO))
}
