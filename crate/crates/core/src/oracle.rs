//! Ground truth by search: square-zero enumeration, decomposition search and
//! censuses over small matrix spaces.
//!
//! Every square-zero `M` of rank `r` factors as `M = B C` with `B` an `n x r`
//! basis of the image `W`, `C` of full rank `r` and `C B = 0`. Fixing `B` as
//! the reduced row echelon basis of `W` makes `C` unique, so the
//! rank-parameterized enumerator emits each matrix exactly once.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::canonical::rational_form;
use crate::fields::{Fe, Field, Poly};
use crate::matrices::{linalg, Matrix};

pub const DEFAULT_SEED: u64 = 0x5d_2024;
pub const DEFAULT_MAX_CANDIDATES: u64 = 1_000_000;
/// Largest `q^(n^2)` for which full matrix-space scans are attempted.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 26;
/// Randomized candidates are drawn in fixed-size chunks, each from its own
/// ChaCha stream, so results do not depend on the thread count.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("q^(n^2) = {q}^{nn} exceeds the exhaustive limit 2^26", nn = .n * .n)]
    Infeasible { n: usize, q: u32 },
    #[error("candidate budget must be at least 1")]
    ZeroBudget,
    #[error("census needs a complete enumeration; randomized mode is not allowed")]
    RandomizedCensus,
    #[error("square-zero counts disagree: exhaustive {exhaustive}, rank-parameterized {rank}")]
    Disagreement { exhaustive: u64, rank: u64 },
    #[error("unknown search mode {0:?}")]
    BadMode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    RankParameterized,
    Randomized,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::RankParameterized => "rank",
            SearchMode::Randomized => "random",
        })
    }
}

impl FromStr for SearchMode {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "rank" | "rank-parameterized" => Ok(SearchMode::RankParameterized),
            "random" | "randomized" => Ok(SearchMode::Randomized),
            _ => Err(OracleError::BadMode(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub mode: SearchMode,
    pub max_candidates: u64,
    pub seed: u64,
}

impl SearchBudget {
    pub fn new(mode: SearchMode, max_candidates: u64, seed: u64) -> Result<Self, OracleError> {
        if max_candidates == 0 {
            return Err(OracleError::ZeroBudget);
        }
        Ok(SearchBudget { mode, max_candidates, seed })
    }

    pub fn exhaustive() -> Self {
        SearchBudget { mode: SearchMode::Exhaustive, max_candidates: u64::MAX, seed: DEFAULT_SEED }
    }

    pub fn rank_parameterized() -> Self {
        SearchBudget { mode: SearchMode::RankParameterized, max_candidates: u64::MAX, seed: DEFAULT_SEED }
    }

    pub fn randomized(max_candidates: u64, seed: u64) -> Self {
        SearchBudget { mode: SearchMode::Randomized, max_candidates: max_candidates.max(1), seed }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { mode: SearchMode::RankParameterized, max_candidates: DEFAULT_MAX_CANDIDATES, seed: DEFAULT_SEED }
    }
}

/// `q^(n^2)`, or `None` on overflow.
pub fn matrix_space_size(q: u32, n: usize) -> Option<u64> {
    (q as u64).checked_pow(u32::try_from(n * n).ok()?)
}

fn check_feasible(field: &Field, n: usize) -> Result<u64, OracleError> {
    match matrix_space_size(field.order(), n) {
        Some(s) if s <= EXHAUSTIVE_LIMIT => Ok(s),
        _ => Err(OracleError::Infeasible { n, q: field.order() }),
    }
}

/// Matrix number `idx` in the scan order: entry `k` (row-major) is base-q
/// digit `k` of `idx`.
fn matrix_at(field: &Field, n: usize, mut idx: u64) -> Matrix {
    let q = field.order() as u64;
    let data = (0..n * n)
        .map(|_| {
            let d = idx % q;
            idx /= q;
            Fe(d as u32)
        })
        .collect();
    Matrix::from_vec(field, n, data).expect("n^2 entries")
}

/// All vectors of length `len`, as base-q digit strings.
fn all_vectors(q: u32, len: usize) -> impl Iterator<Item = Vec<Fe>> + Clone {
    let total = (q as u64).pow(len as u32);
    (0..total).map(move |mut idx| {
        (0..len)
            .map(|_| {
                let d = idx % q as u64;
                idx /= q as u64;
                Fe(d as u32)
            })
            .collect()
    })
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Every `r`-dimensional subspace of GF(q)^n, as its reduced row echelon basis.
fn subspaces(field: &Field, n: usize, r: usize) -> impl Iterator<Item = Vec<Vec<Fe>>> {
    let q = field.order();
    combinations(n, r).into_iter().flat_map(move |pivots| {
        let free: Vec<(usize, usize)> = (0..r)
            .flat_map(|i| ((pivots[i] + 1)..n).filter(|j| !pivots.contains(j)).map(move |j| (i, j)))
            .collect();
        all_vectors(q, free.len()).map(move |vals| {
            let mut rows = vec![vec![Fe::ZERO; n]; r];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = Fe::ONE;
            }
            for (&(i, j), v) in free.iter().zip(vals) {
                rows[i][j] = v;
            }
            rows
        })
    })
}

fn rank_parameterized(field: &Field, n: usize) -> impl Iterator<Item = Matrix> {
    let field = field.clone();
    (0..=n / 2).flat_map(move |r| {
        let field = field.clone();
        let f2 = field.clone();
        subspaces(&field, n, r).flat_map(move |w| {
            let field = f2.clone();
            let ann = linalg::kernel(&field, w.clone(), n);
            all_vectors(field.order(), r * (n - r)).filter_map(move |k| {
                let c: Vec<Vec<Fe>> = (0..r)
                    .map(|i| {
                        let mut row = vec![Fe::ZERO; n];
                        for (t, a) in ann.iter().enumerate() {
                            linalg::axpy(&field, k[i * (n - r) + t], a, &mut row);
                        }
                        row
                    })
                    .collect();
                if linalg::rank(&field, c.clone()) < r {
                    return None;
                }
                Some(Matrix::from_fn(&field, n, |i, j| {
                    (0..r).fold(Fe::ZERO, |acc, t| field.add(acc, field.mul(w[t][i], c[t][j])))
                }))
            })
        })
    })
}

fn random_square_zero(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    if n < 2 {
        return Matrix::zero(field, n);
    }
    let q = field.order();
    let r = rng.gen_range(1..=n / 2);
    let rand_vec = |rng: &mut ChaCha8Rng, len: usize| (0..len).map(|_| Fe(rng.gen_range(0..q))).collect::<Vec<_>>();
    let c: Vec<Vec<Fe>> = loop {
        let c: Vec<Vec<Fe>> = (0..r).map(|_| rand_vec(rng, n)).collect();
        if linalg::rank(field, c.clone()) == r {
            break c;
        }
    };
    let ker = linalg::kernel(field, c.clone(), n);
    let b: Vec<Vec<Fe>> = loop {
        let b: Vec<Vec<Fe>> = (0..r)
            .map(|_| {
                let coef = rand_vec(rng, ker.len());
                let mut col = vec![Fe::ZERO; n];
                for (a, k) in coef.iter().zip(&ker) {
                    linalg::axpy(field, *a, k, &mut col);
                }
                col
            })
            .collect();
        if linalg::rank(field, b.clone()) == r {
            break b;
        }
    };
    Matrix::from_fn(field, n, |i, j| (0..r).fold(Fe::ZERO, |acc, t| field.add(acc, field.mul(b[t][i], c[t][j]))))
}

fn random_chunk(field: &Field, n: usize, seed: u64, chunk: u64, len: u64) -> impl Iterator<Item = Matrix> {
    let field = field.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    (0..len).map(move |_| random_square_zero(&field, n, &mut rng))
}

/// `(chunk index, length)` pairs covering `total` candidates.
fn chunks(total: u64) -> Vec<(u64, u64)> {
    (0..total.div_ceil(CHUNK)).map(|c| (c, CHUNK.min(total - c * CHUNK))).collect()
}

/// Square-zero matrices of order `n`. Exhaustive and rank-parameterized
/// modes emit every such matrix exactly once (the budget cap does not apply);
/// randomized mode emits `max_candidates` seeded samples, possibly repeated.
pub fn enumerate_square_zero(
    field: &Field,
    n: usize,
    budget: &SearchBudget,
) -> Result<Box<dyn Iterator<Item = Matrix> + Send>, OracleError> {
    Ok(match budget.mode {
        SearchMode::Exhaustive => {
            let size = check_feasible(field, n)?;
            let field = field.clone();
            Box::new((0..size).map(move |i| matrix_at(&field, n, i)).filter(|m| m.is_square_zero()))
        }
        SearchMode::RankParameterized => Box::new(rank_parameterized(field, n)),
        SearchMode::Randomized => {
            let field = field.clone();
            let seed = budget.seed;
            Box::new(chunks(budget.max_candidates).into_iter().flat_map(move |(c, len)| random_chunk(&field, n, seed, c, len)))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// `A = d + m`, `m^2 = 0`, `d` diagonalizable.
    Found { d: Matrix, m: Matrix, candidates: u64 },
    /// `proof` is set only when a complete enumeration was exhausted.
    NotFound { proof: bool, candidates: u64 },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

/// Searches for square-zero `M` with `A - M` diagonalizable.
pub fn oracle_decompose(a: &Matrix, budget: &SearchBudget) -> Result<SearchOutcome, OracleError> {
    let field = a.field();
    let n = a.order();
    let hit = |m: &Matrix| (a - m).is_diagonalizable();
    if budget.mode != SearchMode::Randomized {
        let mut seen = 0u64;
        for m in enumerate_square_zero(field, n, budget)? {
            if seen == budget.max_candidates {
                return Ok(SearchOutcome::NotFound { proof: false, candidates: seen });
            }
            seen += 1;
            if hit(&m) {
                return Ok(SearchOutcome::Found { d: a - &m, m, candidates: seen });
            }
        }
        return Ok(SearchOutcome::NotFound { proof: true, candidates: seen });
    }

    // M = 0 first: the random generator never emits it
    if a.is_diagonalizable() {
        return Ok(SearchOutcome::Found { d: a.clone(), m: Matrix::zero(field, n), candidates: 1 });
    }
    let found = chunks(budget.max_candidates).into_par_iter().find_map_first(|(c, len)| {
        random_chunk(field, n, budget.seed, c, len).enumerate().find(|(_, m)| hit(m)).map(|(i, m)| (c * CHUNK + i as u64 + 2, m))
    });
    Ok(match found {
        Some((candidates, m)) => SearchOutcome::Found { d: a - &m, m, candidates },
        None => SearchOutcome::NotFound { proof: false, candidates: budget.max_candidates + 1 },
    })
}

/// Draws `budget.max_candidates` seeded random square-zero `M` and counts
/// those with `A + M` diagonalizable. Returns `(candidates, hits)`.
pub fn random_hits(a: &Matrix, budget: &SearchBudget) -> (u64, u64) {
    let field = a.field();
    let n = a.order();
    let hits = chunks(budget.max_candidates)
        .into_par_iter()
        .map(|(c, len)| random_chunk(field, n, budget.seed, c, len).filter(|m| (a + m).is_diagonalizable()).count() as u64)
        .sum();
    (budget.max_candidates, hits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub field: Field,
    pub n: usize,
    pub decomposable: u64,
    pub non_decomposable: u64,
    pub total: u64,
    /// Invariant factors of each non-decomposable similarity class, with the
    /// number of matrices in the class.
    pub classes: Vec<(Vec<Poly>, u64)>,
}

fn factor_list(fs: &[Poly]) -> String {
    fs.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
}

impl CensusReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "census n {} field {}\ntotal = {}\ndecomposable = {}\nnon_decomposable = {}\n",
            self.n, self.field, self.total, self.decomposable, self.non_decomposable
        );
        for (fs, count) in &self.classes {
            s += &format!("class [{}] = {count}\n", factor_list(fs));
        }
        s
    }

    pub fn to_kv(&self) -> String {
        let mut s = format!(
            "n={}\nfield={}\ntotal={}\ndecomposable={}\nnon_decomposable={}\nclasses={}\n",
            self.n,
            self.field,
            self.total,
            self.decomposable,
            self.non_decomposable,
            self.classes.len()
        );
        for (i, (fs, count)) in self.classes.iter().enumerate() {
            s += &format!("class.{i}.factors={}\nclass.{i}.count={count}\n", factor_list(fs));
        }
        s
    }
}

/// Classifies every matrix of order `n`. The square-zero list comes from the
/// budget's enumerator, which must be complete.
pub fn census(field: &Field, n: usize, budget: &SearchBudget) -> Result<CensusReport, OracleError> {
    if budget.mode == SearchMode::Randomized {
        return Err(OracleError::RandomizedCensus);
    }
    let total = check_feasible(field, n)?;
    let sqz: Vec<Matrix> = enumerate_square_zero(field, n, budget)?.collect();
    let classes: BTreeMap<Vec<Poly>, u64> = (0..total)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc, idx| {
            let a = matrix_at(field, n, idx);
            if !sqz.iter().any(|m| (&a - m).is_diagonalizable()) {
                *acc.entry(rational_form(&a).factors).or_insert(0) += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut x, y| {
            for (k, v) in y {
                *x.entry(k).or_insert(0) += v;
            }
            x
        });
    let non_decomposable = classes.values().sum();
    Ok(CensusReport {
        field: field.clone(),
        n,
        decomposable: total - non_decomposable,
        non_decomposable,
        total,
        classes: classes.into_iter().collect(),
    })
}

/// Number of square-zero matrices of order `n`. When a full scan is feasible
/// both enumerators are run and must agree.
pub fn count_square_zero(field: &Field, n: usize) -> Result<u64, OracleError> {
    let rank = rank_parameterized(field, n).count() as u64;
    if let Ok(size) = check_feasible(field, n) {
        let exhaustive = (0..size).into_par_iter().filter(|&i| matrix_at(field, n, i).is_square_zero()).count() as u64;
        if exhaustive != rank {
            return Err(OracleError::Disagreement { exhaustive, rank });
        }
    }
    Ok(rank)
}
