//! Invariant factors and the rational canonical form, with an explicit
//! similarity transform.
//!
//! The decomposition is built from cyclic subspaces. Pick a vector `v` whose
//! local minimal polynomial equals the minimal polynomial `mu` of `A` (degree
//! `d`), and a functional `phi` with `phi(A^i v) = 0` for `i < d - 1` and
//! `phi(A^{d-1} v) = 1`. Then `{w : phi(A^i w) = 0, 0 <= i < d}` is an
//! `A`-invariant complement of the cyclic subspace of `v`, and we recurse on
//! the restriction of `A` to it. The Krylov vectors of each step, taken as
//! columns, give `P` with `P^{-1} A P = C(f_1) + ... + C(f_k)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::{Fe, Field, Poly};
use crate::matrices::{linalg, Matrix};
use crate::report::CheckReport;

/// Seed for the pseudo-random search of a maximal vector once the standard
/// basis vectors are exhausted.
const MAX_VECTOR_SEED: u64 = 0x005e_ed0f_c1c1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalForm {
    /// Invariant factors, smallest first: `f_1 | f_2 | ... | f_k`.
    pub factors: Vec<Poly>,
    /// Columns form the cyclic bases; `P^{-1} A P` is the block companion form.
    pub transform: Matrix,
}

impl RationalForm {
    pub fn order(&self) -> usize {
        self.transform.order()
    }

    /// `C(f_1) + ... + C(f_k)`.
    pub fn canonical_matrix(&self) -> Matrix {
        let field = self.transform.field();
        if self.factors.is_empty() {
            return Matrix::zero(field, 0);
        }
        let blocks: Vec<Matrix> =
            self.factors.iter().map(|f| Matrix::companion_of(f).expect("monic factor")).collect();
        Matrix::direct_sum(&blocks).expect("same field")
    }

    /// The largest invariant factor, which is the minimal polynomial.
    pub fn last_factor(&self) -> Option<&Poly> {
        self.factors.last()
    }
}

fn krylov(a: &Matrix, v: &[Fe], len: usize) -> Vec<Vec<Fe>> {
    let mut out = Vec::with_capacity(len);
    let mut cur = v.to_vec();
    for _ in 0..len {
        let next = a.mul_vec(&cur);
        out.push(std::mem::replace(&mut cur, next));
    }
    out
}

fn maximal_vector(a: &Matrix, target: usize, rng: &mut ChaCha8Rng) -> Vec<Fe> {
    let n = a.order();
    let field = a.field();
    for i in 0..n {
        let mut e = vec![Fe::ZERO; n];
        e[i] = Fe::ONE;
        if a.local_min_poly(&e).degree() == Some(target) {
            return e;
        }
    }
    loop {
        let v: Vec<Fe> = (0..n).map(|_| Fe(rng.gen_range(0..field.order()))).collect();
        if a.local_min_poly(&v).degree() == Some(target) {
            return v;
        }
    }
}

/// Returns `(factor, cyclic basis)` pairs, largest factor first.
fn cyclic_split(a: &Matrix, rng: &mut ChaCha8Rng) -> Vec<(Poly, Vec<Vec<Fe>>)> {
    let n = a.order();
    if n == 0 {
        return Vec::new();
    }
    let field = a.field().clone();
    let mu = a.min_poly();
    let d = mu.degree().expect("nonzero");
    let v = maximal_vector(a, d, rng);
    let k = krylov(a, &v, d);
    if d == n {
        return vec![(mu, k)];
    }

    // phi = row d-1 of the inverse of [K | completion]
    let mut cols = k.clone();
    for idx in linalg::complete_basis(&field, &k, n) {
        let mut e = vec![Fe::ZERO; n];
        e[idx] = Fe::ONE;
        cols.push(e);
    }
    let full = Matrix::from_columns(&field, &cols).expect("square");
    let inv = full.try_inverse().expect("Krylov vectors plus completion form a basis");
    let mut phi = inv.row(d - 1).to_vec();
    let at = a.transpose();
    let mut functionals = Vec::with_capacity(d);
    for _ in 0..d {
        let next = at.mul_vec(&phi);
        functionals.push(std::mem::replace(&mut phi, next));
    }
    let complement = linalg::kernel(&field, functionals, n);
    debug_assert_eq!(complement.len(), n - d);

    let images: Vec<Vec<Fe>> = complement.iter().map(|c| a.mul_vec(c)).collect();
    let coords = linalg::coordinates(&field, &complement, &images).expect("complement is invariant");
    let restricted = Matrix::from_columns(&field, &coords).expect("square");

    let mut out = vec![(mu, k)];
    for (f, basis) in cyclic_split(&restricted, rng) {
        let lifted = basis
            .iter()
            .map(|w| {
                let mut v = vec![Fe::ZERO; n];
                for (c, col) in w.iter().zip(&complement) {
                    linalg::axpy(&field, *c, col, &mut v);
                }
                v
            })
            .collect();
        out.push((f, lifted));
    }
    out
}

/// Invariant factors (smallest first) and the similarity transform.
/// Deterministic for a fixed input.
pub fn rational_form(a: &Matrix) -> RationalForm {
    let field: &Field = a.field();
    let mut rng = ChaCha8Rng::seed_from_u64(MAX_VECTOR_SEED);
    let mut parts = cyclic_split(a, &mut rng);
    parts.reverse();
    let mut factors = Vec::with_capacity(parts.len());
    let mut cols = Vec::with_capacity(a.order());
    for (f, basis) in parts {
        factors.push(f);
        cols.extend(basis);
    }
    let transform = if cols.is_empty() {
        Matrix::zero(field, 0)
    } else {
        Matrix::from_columns(field, &cols).expect("square")
    };
    RationalForm { factors, transform }
}

/// Checks the divisibility chain, the product against the characteristic
/// polynomial, and the conjugation identity.
pub fn verify_rational_form(a: &Matrix, r: &RationalForm) -> CheckReport {
    let mut report = CheckReport::new();
    let order_ok = r.order() == a.order()
        && r.factors.iter().map(|f| f.degree().unwrap_or(0)).sum::<usize>() == a.order()
        && r.transform.field() == a.field();
    report.push("order", order_ok);
    let monic = r.factors.iter().all(|f| f.is_monic() && f.degree().unwrap_or(0) >= 1);
    report.push("monic", monic);
    let chain = r.factors.windows(2).all(|w| w[0].divides(&w[1]));
    report.push("divisibility", chain);
    let product = r.factors.iter().fold(Poly::one(a.field()), |acc, f| acc.mul(f));
    report.push("product", product == a.char_poly());
    let conj = order_ok
        && monic
        && match a.conjugate(&r.transform) {
            Ok(c) => c == r.canonical_matrix(),
            Err(_) => false,
        };
    report.push("conjugation", conj);
    report
}

/// The smallest invariant factor `f_1`.
pub fn first_invariant_factor(a: &Matrix) -> Poly {
    rational_form(a).factors.into_iter().next().unwrap_or_else(|| Poly::one(a.field()))
}
