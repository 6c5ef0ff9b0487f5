//! Characteristic and minimal polynomials.

use crate::fields::{Fe, Poly};

use super::Matrix;

/// Reduces to upper Hessenberg form by elementary similarities, then runs the
/// recurrence on leading principal minors. Uses only field division, so it is
/// valid for every q (evaluation and interpolation would need q > n).
pub(super) fn char_poly(a: &Matrix) -> Poly {
    let f = a.field().clone();
    let n = a.order();
    let mut h: Vec<Vec<Fe>> = a.rows();

    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let t = f.inv(h[m][m - 1]).expect("nonzero pivot");
        for i in m + 1..n {
            let u = f.mul(h[i][m - 1], t);
            if u.is_zero() {
                continue;
            }
            // row_i -= u row_m, then col_m += u col_i keeps the similarity
            for j in 0..n {
                let v = f.mul(u, h[m][j]);
                h[i][j] = f.sub(h[i][j], v);
            }
            for row in h.iter_mut() {
                let v = f.mul(u, row[i]);
                row[m] = f.add(row[m], v);
            }
        }
    }

    // p[k] is the characteristic polynomial of the leading k x k block
    let mut p: Vec<Poly> = Vec::with_capacity(n + 1);
    p.push(Poly::one(&f));
    for m in 1..=n {
        let lin = Poly::new(&f, vec![f.neg(h[m - 1][m - 1]), Fe::ONE]);
        let mut next = lin.mul(&p[m - 1]);
        let mut t = Fe::ONE;
        for i in 1..m {
            t = f.mul(t, h[m - i][m - i - 1]);
            let c = f.mul(t, h[m - i - 1][m - 1]);
            if !c.is_zero() {
                next = next.sub(&p[m - i - 1].scale(c));
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

/// Minimal annihilator of `v` under `a`, by incremental elimination on the
/// Krylov sequence `v, A v, A^2 v, ...` while tracking each reduced vector as
/// a polynomial in `A` applied to `v`.
pub(super) fn local_min_poly(a: &Matrix, v: &[Fe]) -> Poly {
    let f = a.field().clone();
    let n = a.order();
    // (pivot column, reduced vector with 1 at the pivot, its polynomial)
    let mut basis: Vec<(usize, Vec<Fe>, Vec<Fe>)> = Vec::new();
    let mut krylov = v.to_vec();
    for j in 0..=n {
        let mut w = krylov.clone();
        let mut comb = vec![Fe::ZERO; j + 1];
        comb[j] = Fe::ONE;
        for (pc, pv, pcomb) in &basis {
            let c = w[*pc];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in w.iter_mut().zip(pv) {
                *x = f.sub(*x, f.mul(c, y));
            }
            for (x, &y) in comb.iter_mut().zip(pcomb) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        match w.iter().position(|e| !e.is_zero()) {
            None => return Poly::new(&f, comb),
            Some(pc) => {
                let inv = f.inv(w[pc]).expect("nonzero");
                for x in w.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                for x in comb.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                basis.push((pc, w, comb));
            }
        }
        krylov = a.mul_vec(&krylov);
    }
    unreachable!("n + 1 Krylov vectors in dimension n are dependent")
}

/// Least common multiple of the local minimal polynomials of the standard
/// basis vectors.
pub(super) fn min_poly(a: &Matrix) -> Poly {
    let f = a.field().clone();
    let n = a.order();
    let mut mu = Poly::one(&f);
    for i in 0..n {
        if mu.degree() == Some(n) {
            break;
        }
        let mut e = vec![Fe::ZERO; n];
        e[i] = Fe::ONE;
        let local = local_min_poly(a, &e);
        mu = mu.lcm(&local).expect("nonzero polynomials");
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;
    use crate::matrices::linalg;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Leibniz expansion of det(x Id - A) with polynomial entries.
    fn char_poly_leibniz(a: &Matrix) -> Poly {
        let f = a.field().clone();
        let n = a.order();
        let entry = |i: usize, j: usize| {
            let c = f.neg(a[(i, j)]);
            if i == j {
                Poly::new(&f, vec![c, Fe::ONE])
            } else {
                Poly::constant(&f, c)
            }
        };
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = Poly::zero(&f);
        fn heap(k: usize, perm: &mut Vec<usize>, sign: &mut bool, visit: &mut dyn FnMut(&[usize], bool)) {
            if k <= 1 {
                visit(perm, *sign);
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, sign, visit);
                if i + 1 < k {
                    if k.is_multiple_of(2) {
                        perm.swap(i, k - 1);
                    } else {
                        perm.swap(0, k - 1);
                    }
                    *sign = !*sign;
                }
            }
        }
        let mut sign = true;
        heap(n, &mut perm, &mut sign, &mut |p, s| {
            let term = (0..n).fold(Poly::one(&f), |acc, i| acc.mul(&entry(i, p[i])));
            total = if s { total.add(&term) } else { total.sub(&term) };
        });
        total
    }

    /// Smallest d with Id, A, ..., A^d linearly dependent, from flattened powers.
    fn min_poly_degree_by_rank(a: &Matrix) -> usize {
        let f = a.field();
        let mut rows = vec![];
        let mut power = Matrix::identity(f, a.order());
        loop {
            rows.push(power.data().to_vec());
            if linalg::rank(f, rows.clone()) < rows.len() {
                return rows.len() - 1;
            }
            power = &power * a;
        }
    }

    fn random_matrix(rng: &mut ChaCha8Rng, f: &Field, n: usize) -> Matrix {
        let q = f.order();
        Matrix::from_fn(f, n, |_, _| Fe(rng.gen_range(0..q)))
    }

    #[test]
    fn char_poly_examples() {
        let f = Field::prime(3).unwrap();
        assert_eq!(Matrix::identity(&f, 2).char_poly(), Poly::from_ints(&f, &[1, 1, 1]));
        assert_eq!(Matrix::diagonal(&f, &[Fe(1), Fe(2)]).char_poly(), Poly::from_ints(&f, &[2, 0, 1]));
        let p = Poly::from_ints(&f, &[1, 2, 0, 1, 1]);
        assert_eq!(Matrix::companion_of(&p).unwrap().char_poly(), p);
    }

    #[test]
    fn min_poly_examples() {
        let f = Field::prime(3).unwrap();
        assert_eq!(Matrix::identity(&f, 3).min_poly(), Poly::from_ints(&f, &[-1, 1]));
        let p = Poly::from_ints(&f, &[1, 2, 0, 1, 1]);
        assert_eq!(Matrix::companion_of(&p).unwrap().min_poly(), p);
        let d = Matrix::diagonal(&f, &[Fe(1), Fe(1), Fe(2)]);
        assert_eq!(d.min_poly(), Poly::from_roots(&f, &[Fe(1), Fe(2)]));
    }

    #[test]
    fn char_poly_matches_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for field in [Field::prime(3).unwrap(), Field::prime(7).unwrap(), "3^2".parse().unwrap()] {
            for n in 0..=5 {
                for _ in 0..20 {
                    let a = random_matrix(&mut rng, &field, n);
                    assert_eq!(a.char_poly(), char_poly_leibniz(&a), "{a:?}");
                }
            }
        }
    }

    #[test]
    fn random_polynomial_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [Field::prime(3).unwrap(), Field::prime(5).unwrap(), "3^2".parse().unwrap()] {
            for _ in 0..500 {
                let n = rng.gen_range(1..=6);
                // sparse-ish matrices hit derogatory cases more often
                let mut a = random_matrix(&mut rng, &field, n);
                if rng.gen_bool(0.5) {
                    for i in 0..n {
                        for j in 0..n {
                            if rng.gen_bool(0.6) {
                                a[(i, j)] = Fe::ZERO;
                            }
                        }
                    }
                }
                let chi = a.char_poly();
                let mu = a.min_poly();
                assert!(chi.is_monic() && mu.is_monic());
                assert_eq!(chi.degree(), Some(n));
                assert!(mu.divides(&chi));
                assert!(a.annihilated_by(&chi), "Cayley-Hamilton");
                assert!(a.annihilated_by(&mu));
                assert_eq!(mu.degree(), Some(min_poly_degree_by_rank(&a)));
            }
        }
    }

    #[test]
    fn companion_char_poly_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Field::prime(5).unwrap();
        for _ in 0..100 {
            let n = rng.gen_range(1..=9);
            let spec = crate::matrices::CompanionSpec::new((0..n).map(|_| Fe(rng.gen_range(0..5))).collect()).unwrap();
            let c = Matrix::companion(&f, &spec);
            assert_eq!(c.char_poly(), spec.poly(&f));
        }
    }
}
