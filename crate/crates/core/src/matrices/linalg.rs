//! Gaussian elimination on lists of row vectors.

use crate::fields::{Fe, Field};

use super::{Inversion, Matrix};

/// Reduces `rows` in place to reduced row echelon form (pivots equal to one,
/// zero rows dropped) and returns the pivot column of each remaining row.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Fe>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let c = row[col];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(c, p));
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &Field, mut rows: Vec<Vec<Fe>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    rref(field, &mut rows, ncols).len()
}

/// Basis of `{v : R v = 0}` for the row list `R`, one vector per free column.
pub fn kernel(field: &Field, mut rows: Vec<Vec<Fe>>, ncols: usize) -> Vec<Vec<Fe>> {
    let pivots = rref(field, &mut rows, ncols);
    let mut out = Vec::new();
    let mut pi = 0;
    for free in 0..ncols {
        if pi < pivots.len() && pivots[pi] == free {
            pi += 1;
            continue;
        }
        let mut v = vec![Fe::ZERO; ncols];
        v[free] = Fe::ONE;
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        out.push(v);
    }
    out
}

/// Gauss-Jordan on `[A | Id]`; a singular input yields a kernel vector.
pub fn invert(a: &Matrix) -> Inversion {
    let n = a.order();
    let field = a.field();
    let mut aug: Vec<Vec<Fe>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }));
            row
        })
        .collect();
    let pivots = rref(field, &mut aug, n);
    if pivots.len() < n {
        let v = kernel(field, a.rows(), n).into_iter().next().expect("rank deficiency gives a kernel vector");
        return Inversion::Singular(v);
    }
    let data = aug.into_iter().flat_map(|row| row[n..].to_vec()).collect();
    Inversion::Invertible(Matrix::from_vec(field, n, data).expect("square inverse"))
}

/// Coordinates of each `target` in terms of the linearly independent
/// `basis` vectors, or `None` if some target lies outside their span.
pub fn coordinates(field: &Field, basis: &[Vec<Fe>], targets: &[Vec<Fe>]) -> Option<Vec<Vec<Fe>>> {
    let m = basis.len();
    let n = basis.first().map_or(0, |b| b.len());
    // rows of [B | T] where B has the basis vectors as columns
    let mut rows: Vec<Vec<Fe>> = (0..n)
        .map(|i| basis.iter().map(|b| b[i]).chain(targets.iter().map(|t| t[i])).collect())
        .collect();
    let pivots = rref(field, &mut rows, m + targets.len());
    if pivots.len() > m || pivots.iter().any(|&p| p >= m) || pivots.len() < m {
        return None;
    }
    Some((0..targets.len()).map(|t| (0..m).map(|i| rows[i][m + t]).collect()).collect())
}

/// Indices of standard basis vectors that complete `vecs` (assumed
/// independent) to a basis of the whole space.
pub fn complete_basis(field: &Field, vecs: &[Vec<Fe>], n: usize) -> Vec<usize> {
    let mut rows = vecs.to_vec();
    let pivots = rref(field, &mut rows, n);
    (0..n).filter(|c| !pivots.contains(c)).collect()
}

pub fn dot(field: &Field, a: &[Fe], b: &[Fe]) -> Fe {
    a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

pub fn axpy(field: &Field, c: Fe, x: &[Fe], y: &mut [Fe]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = field.add(*yi, field.mul(c, xi));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = Field::prime(5).unwrap();
        let rows = vec![vec![Fe(1), Fe(2), Fe(3), Fe(4)], vec![Fe(0), Fe(1), Fe(2), Fe(3)]];
        let k = kernel(&f, rows.clone(), 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &rows {
                assert_eq!(dot(&f, r, v), Fe::ZERO);
            }
        }
    }

    #[test]
    fn coordinates_recover_combination() {
        let f = Field::prime(3).unwrap();
        let b = vec![vec![Fe(1), Fe(0), Fe(1)], vec![Fe(0), Fe(1), Fe(1)]];
        let t = vec![Fe(2), Fe(1), Fe(0)];
        assert_eq!(coordinates(&f, &b, &[t]).unwrap(), vec![vec![Fe(2), Fe(1)]]);
        assert!(coordinates(&f, &b, &[vec![Fe(1), Fe(0), Fe(0)]]).is_none());
    }
}
