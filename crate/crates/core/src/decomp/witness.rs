//! Bases in which `D = A + M'` of an explicit construction is visibly block
//! diagonal with diagonalizable 2 x 2 and 3 x 3 blocks.

use crate::fields::{Fe, Field};
use crate::matrices::{CompanionSpec, Matrix};

use super::construct::shift_transform;
use super::{CaseTag, DecompError, Recipe};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisWitness {
    /// Columns are the new basis vectors.
    pub transition: Matrix,
    /// Expected diagonal blocks of `transition^{-1} D transition`, in order.
    pub blocks: Vec<Matrix>,
}

impl BasisWitness {
    pub fn block_form(&self) -> Matrix {
        Matrix::direct_sum(&self.blocks).expect("at least one block")
    }

    pub fn holds_for(&self, d: &Matrix) -> bool {
        d.conjugate(&self.transition).is_ok_and(|c| c == self.block_form())
    }
}

/// Column vectors built from 1-based `(index, coefficient)` terms.
struct Cols<'a> {
    field: &'a Field,
    n: usize,
    cols: Vec<Vec<Fe>>,
}

impl<'a> Cols<'a> {
    /// Starts with `e_1, ..., e_k`.
    fn standard(field: &'a Field, n: usize, k: usize) -> Self {
        let cols = (0..k)
            .map(|i| {
                let mut v = vec![Fe::ZERO; n];
                v[i] = Fe::ONE;
                v
            })
            .collect();
        Cols { field, n, cols }
    }

    fn push(&mut self, terms: impl IntoIterator<Item = (usize, Fe)>) {
        let mut v = vec![Fe::ZERO; self.n];
        for (i, c) in terms {
            v[i - 1] = self.field.add(v[i - 1], c);
        }
        self.cols.push(v);
    }

    fn matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, &self.cols).expect("n columns")
    }
}

fn block2(field: &Field, rows: [[Fe; 2]; 2]) -> Matrix {
    Matrix::from_rows(field, &rows.map(|r| r.to_vec())).expect("2 x 2")
}

fn explicit(
    field: &Field,
    tag: CaseTag,
    spec: &CompanionSpec,
    alpha: Option<Fe>,
    printed_q5_reading: bool,
) -> Result<BasisWitness, DecompError> {
    let n = spec.order();
    let u = &spec.u;
    let (zero, one) = (Fe::ZERO, Fe::ONE);
    let minus_one = field.neg(one);
    let t = spec.top();
    let t2 = field.mul(t, t);
    let swap = block2(field, [[zero, one], [one, zero]]);
    let mut cols = Cols::standard(field, n, n - 2);
    let mut blocks = Vec::new();
    match tag {
        CaseTag::NztOdd => {
            let half = (n - 3) / 2;
            cols.push(std::iter::once((n - 1, t)).chain((1..=half).map(|i| (2 * i, u[2 * i]))));
            cols.push(std::iter::once((n, t)).chain((1..=half).map(|i| (2 * i + 1, u[2 * i]))));
            blocks.push(Matrix::from_rows(field, &[vec![zero, zero, zero], vec![one, zero, t2], vec![zero, one, zero]])?);
            blocks.extend((0..(n - 5) / 2).map(|_| block2(field, [[zero, t2], [one, zero]])));
            blocks.push(block2(field, [[zero, zero], [one, t]]));
        }
        CaseTag::NztEven => {
            let half = (n - 2) / 2;
            cols.push(std::iter::once((n - 1, t)).chain((1..=half).map(|i| (2 * i - 1, u[2 * i - 1]))));
            cols.push(std::iter::once((n, t)).chain((1..=half).map(|i| (2 * i, u[2 * i - 1]))));
            blocks.extend((0..half).map(|_| block2(field, [[zero, t2], [one, zero]])));
            blocks.push(block2(field, [[zero, zero], [one, t]]));
        }
        CaseTag::ZtOdd => {
            let mut cols = Cols::standard(field, n, n - 1);
            let half = (n - 1) / 2;
            cols.push(
                std::iter::once((n, one))
                    .chain((1..=half).map(|i| (2 * i, field.neg(u[2 * i - 2]))))
                    .chain((1..=half).map(|i| (2 * i - 1, field.neg(u[2 * i - 1])))),
            );
            blocks.extend((0..half).map(|_| swap.clone()));
            blocks.push(Matrix::zero(field, 1));
            return Ok(BasisWitness { transition: cols.matrix(), blocks });
        }
        CaseTag::ZtEvenQ5 => {
            let alpha = alpha.ok_or(DecompError::BadAlpha)?;
            let a2 = field.mul(alpha, alpha);
            let inv = field.inv(field.sub(a2, one)).map_err(|_| DecompError::BadAlpha)?;
            let half = (n - 2) / 2;
            let c = |i: usize| field.mul(u[2 * i - 1], inv);
            // D swaps e_{2i-1} and e_{2i}, so b_{n-1} carries the even indices
            // and b_n = D b_{n-1} the odd ones; the opposite assignment fails
            let (even, odd) = if printed_q5_reading { (1, 0) } else { (0, 1) };
            cols.push(std::iter::once((n - 1, one)).chain((1..=half).map(|i| (2 * i - even, c(i)))));
            cols.push(std::iter::once((n, one)).chain((1..=half).map(|i| (2 * i - odd, c(i)))));
            blocks.extend((0..half).map(|_| swap.clone()));
            blocks.push(block2(field, [[zero, a2], [one, zero]]));
        }
        CaseTag::F3SixK => {
            let half = (n - 4) / 2;
            let d = field.sub(u[n - 3], u[n - 2]);
            let two_inv = field.inv(field.from_int(2)).expect("odd characteristic");
            cols.push(
                std::iter::once((n - 1, one))
                    .chain((1..=half).map(|i| (2 * i, field.neg(u[2 * i - 1]))))
                    .chain([(n - 3, d), (n - 2, field.mul(field.add(d, one), two_inv))]),
            );
            cols.push(
                std::iter::once((n, one))
                    .chain((1..=half).flat_map(|i| [(2 * i, u[2 * i - 1]), (2 * i - 1, field.neg(u[2 * i - 1]))]))
                    .chain([(n - 3, field.neg(d))]),
            );
            blocks.extend((0..half).map(|_| swap.clone()));
            blocks.push(block2(field, [[zero, zero], [one, minus_one]]));
            blocks.push(block2(field, [[one, zero], [one, zero]]));
        }
        other => return Err(DecompError::NoWitness(other)),
    }
    Ok(BasisWitness { transition: cols.matrix(), blocks })
}

/// The new basis for an explicit recipe. For `F3EvenShift` it is the basis of
/// the nonzero-trace construction on `C(f(x + 1))`, carried back through the
/// Krylov transform of `A - I`; its blocks are shifted by the identity.
pub fn basis_witness(recipe: &Recipe) -> Result<BasisWitness, DecompError> {
    let field = &recipe.field;
    let spec = recipe.spec();
    match recipe.tag {
        CaseTag::F3EvenShift => {
            let (p, g) = shift_transform(field, &spec);
            let inner = explicit(field, CaseTag::NztEven, &g, None, false)?;
            Ok(BasisWitness {
                transition: &p * &inner.transition,
                blocks: inner.blocks.iter().map(|b| b.add_scalar(Fe::ONE)).collect(),
            })
        }
        tag => explicit(field, tag, &spec, recipe.alpha, false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{decompose_block, Outcome};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn recipe_for(field: &Field, u: Vec<Fe>) -> (Recipe, Matrix) {
        let spec = CompanionSpec::new(u).unwrap();
        match decompose_block(&spec.poly(field)).unwrap() {
            Outcome::Decomposed(dec) => (dec.recipes[0].clone(), dec.d),
            other => panic!("{}", other.kind()),
        }
    }

    fn check(field: &Field, u: &[i64], tag: CaseTag) -> BasisWitness {
        let (r, d) = recipe_for(field, u.iter().map(|&x| field.from_int(x)).collect());
        assert_eq!(r.tag, tag);
        let w = basis_witness(&r).unwrap();
        assert!(w.holds_for(&d), "{tag} {u:?}: {:?}", d.conjugate(&w.transition));
        w
    }

    #[test]
    fn smallest_orders() {
        let f3 = Field::prime(3).unwrap();
        let f5 = Field::prime(5).unwrap();
        let w = check(&f3, &[0, 0, 0, 0, 0], CaseTag::ZtOdd);
        assert_eq!(w.block_form(), Matrix::from_ints(&f3, &[&[0, 1, 0, 0, 0], &[1, 0, 0, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 0, 0]]));
        let w = check(&f5, &[1, 2, 3, 4, 2], CaseTag::NztOdd);
        assert_eq!(w.blocks.last().unwrap(), &Matrix::from_ints(&f5, &[&[0, 0], &[1, 2]]));
        check(&f5, &[1, 2, 3, 4, 0, 2], CaseTag::NztEven);
        check(&f5, &[1, 2, 3, 4, 1, 0], CaseTag::ZtEvenQ5);
        let w = check(&f3, &[1, 2, 0, 1, 2, 0], CaseTag::F3SixK);
        let x2_plus_x = crate::fields::Poly::from_ints(&f3, &[0, 1, 1]);
        let x2_minus_x = crate::fields::Poly::from_ints(&f3, &[0, -1, 1]);
        let x2_minus_1 = crate::fields::Poly::from_ints(&f3, &[-1, 0, 1]);
        assert!(w.blocks[0].annihilated_by(&x2_minus_1));
        assert!(w.blocks[1].annihilated_by(&x2_plus_x));
        assert!(w.blocks[2].annihilated_by(&x2_minus_x));
        check(&f3, &[1, 2, 0, 1, 2, 0, 1, 0], CaseTag::F3EvenShift);
    }

    #[test]
    fn random_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let fields: Vec<Field> = vec![Field::prime(3).unwrap(), Field::prime(5).unwrap(), Field::prime(7).unwrap(), "3^2".parse().unwrap()];
        for field in &fields {
            for n in 5..=12 {
                for zero_trace in [false, true] {
                    let q = field.order();
                    let mut u: Vec<Fe> = (0..n).map(|_| Fe(rng.gen_range(0..q))).collect();
                    u[n - 1] = if zero_trace { Fe::ZERO } else { Fe(rng.gen_range(1..q)) };
                    let (r, d) = recipe_for(field, u);
                    let w = basis_witness(&r).unwrap();
                    assert!(w.holds_for(&d), "{} n={n} over {field}", r.tag);
                }
            }
        }
    }

    #[test]
    fn printed_q5_index_reading_fails() {
        let f5 = Field::prime(5).unwrap();
        let (r, d) = recipe_for(&f5, [1, 2, 3, 4, 1, 0].map(Fe).to_vec());
        let printed = explicit(&f5, r.tag, &r.spec(), r.alpha, true).unwrap();
        assert!(!printed.holds_for(&d));
        assert!(basis_witness(&r).unwrap().holds_for(&d));
    }

    #[test]
    fn search_recipes_have_no_witness() {
        let f3 = Field::prime(3).unwrap();
        let (r, _) = recipe_for(&f3, vec![Fe(0), Fe(0)]);
        assert_eq!(basis_witness(&r), Err(DecompError::NoWitness(CaseTag::SmallOrderSearch)));
    }
}
