//! `A = D + M` with `D` diagonalizable (`D^q = D`) and `M^2 = 0`.
//!
//! `A` is split into companion blocks by its rational canonical form. Blocks
//! of order at least 5 use the explicit constructions in [`construct`];
//! smaller ones are found by oracle search. The constructions produce `M'`
//! with `A + M'` diagonalizable; the public convention is `D = A + M'` and
//! `M = -M'`.

pub mod construct;
mod witness;

use std::fmt;

use thiserror::Error;

use crate::canonical::rational_form;
use crate::fields::{Fe, Field, Poly};
use crate::matrices::{CompanionSpec, Matrix, MatrixError};
use crate::obstruction::{certify_impossible, ObstructionCertificate, ObstructionError};
use crate::oracle::{oracle_decompose, OracleError, SearchBudget, SearchOutcome};
use crate::report::CheckReport;

pub use construct::{
    build_m_f3_even, build_m_nzt_even, build_m_nzt_odd, build_m_zt_even_q5, build_m_zt_odd, choose_alpha,
};
pub use witness::{basis_witness, BasisWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("order {n} is below the minimum {min} for this construction")]
    TooSmall { n: usize, min: usize },
    #[error("order {n} has the wrong parity for this construction")]
    WrongParity { n: usize },
    #[error("construction needs nonzero trace")]
    ZeroTrace,
    #[error("construction needs zero trace")]
    NonzeroTrace,
    #[error("construction is not available over GF(3)")]
    FieldIsF3,
    #[error("construction is specific to GF(3)")]
    NotF3,
    #[error("alpha must satisfy alpha != 0 and alpha^2 != 1")]
    BadAlpha,
    #[error("block polynomial must be monic of degree at least 1")]
    NotMonic,
    #[error("no basis witness for {0} recipes")]
    NoWitness(CaseTag),
    #[error("decomposition failed verification: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Odd order, nonzero trace.
    NztOdd,
    /// Even order, nonzero trace.
    NztEven,
    /// Odd order, zero trace.
    ZtOdd,
    /// Even order, zero trace, q >= 5.
    ZtEvenQ5,
    /// GF(3), even order not divisible by 3, zero trace: via `A - I`.
    F3EvenShift,
    /// GF(3), order 6k, zero trace.
    F3SixK,
    /// Order at most 4: oracle search on the companion block.
    SmallOrderSearch,
    /// Oracle search on the whole canonical form.
    MatrixSearch,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::NztOdd => "NZT_ODD",
            CaseTag::NztEven => "NZT_EVEN",
            CaseTag::ZtOdd => "ZT_ODD",
            CaseTag::ZtEvenQ5 => "ZT_EVEN_Q5",
            CaseTag::F3EvenShift => "F3_EVEN_SHIFT",
            CaseTag::F3SixK => "F3_6K",
            CaseTag::SmallOrderSearch => "SMALL_ORDER_SEARCH",
            CaseTag::MatrixSearch => "MATRIX_SEARCH",
        })
    }
}

impl CaseTag {
    pub fn is_explicit(self) -> bool {
        !matches!(self, CaseTag::SmallOrderSearch | CaseTag::MatrixSearch)
    }
}

/// How one companion block was handled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recipe {
    pub tag: CaseTag,
    pub field: Field,
    pub n: usize,
    /// Last column of the companion block; empty for `MatrixSearch`.
    pub u: Vec<Fe>,
    /// Present exactly for `ZtEvenQ5`.
    pub alpha: Option<Fe>,
    /// Squarefree split polynomial annihilating the block of `D`.
    pub annihilator: Poly,
}

impl Recipe {
    pub fn spec(&self) -> CompanionSpec {
        CompanionSpec { u: self.u.clone() }
    }

    pub fn companion(&self) -> Matrix {
        Matrix::companion(&self.field, &self.spec())
    }

    /// Rebuilds `(D, M)` for the block from an explicit construction.
    pub fn realize(&self) -> Result<(Matrix, Matrix), DecompError> {
        let spec = self.spec();
        let f = &self.field;
        let mp = match self.tag {
            CaseTag::NztOdd => build_m_nzt_odd(f, &spec)?.0,
            CaseTag::NztEven => build_m_nzt_even(f, &spec)?.0,
            CaseTag::ZtOdd => build_m_zt_odd(f, &spec)?.0,
            CaseTag::ZtEvenQ5 => build_m_zt_even_q5(f, &spec, self.alpha.ok_or(DecompError::BadAlpha)?)?.0,
            CaseTag::F3EvenShift | CaseTag::F3SixK => build_m_f3_even(f, &spec)?.0,
            tag => return Err(DecompError::NoWitness(tag)),
        };
        Ok((&self.companion() + &mp, -&mp))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub d: Matrix,
    pub m: Matrix,
    /// Squarefree split polynomial with `annihilator(D) = 0`.
    pub annihilator: Poly,
    pub recipes: Vec<Recipe>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Decomposed(Decomposition),
    Impossible(ObstructionCertificate),
    Unknown(String),
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Decomposed(_) => "decomposed",
            Outcome::Impossible(_) => "impossible",
            Outcome::Unknown(_) => "unknown",
        }
    }

    pub fn decomposition(&self) -> Option<&Decomposition> {
        match self {
            Outcome::Decomposed(d) => Some(d),
            _ => None,
        }
    }
}

/// `A = D + M`, `M^2 = 0`, `D^q = D`, and the recorded annihilator is
/// squarefree, split and kills `D`.
pub fn verify_decomposition(a: &Matrix, dec: &Decomposition) -> CheckReport {
    let mut report = CheckReport::new();
    let compatible = [&dec.d, &dec.m]
        .iter()
        .all(|x| x.order() == a.order() && x.field() == a.field());
    report.push("sum", compatible && dec.d.try_add(&dec.m).is_ok_and(|s| s == *a));
    report.push("square_zero", compatible && dec.m.is_square_zero());
    report.push("q_potent", compatible && dec.d.is_diagonalizable());
    let ann = &dec.annihilator;
    report.push(
        "annihilator",
        compatible
            && ann.field() == a.field()
            && ann.is_squarefree()
            && ann.splits_distinct_linear()
            && dec.d.annihilated_by(ann),
    );
    report
}

fn checked(a: &Matrix, dec: Decomposition) -> Result<Decomposition, DecompError> {
    let report = verify_decomposition(a, &dec);
    if report.all_passed() {
        Ok(dec)
    } else {
        Err(DecompError::VerificationFailed(report.failures().collect::<Vec<_>>().join(", ")))
    }
}

/// Which explicit construction applies to a block of order at least 5.
fn explicit_case(field: &Field, spec: &CompanionSpec) -> CaseTag {
    let n = spec.order();
    match (spec.top().is_zero(), n % 2 == 1) {
        (false, true) => CaseTag::NztOdd,
        (false, false) => CaseTag::NztEven,
        (true, true) => CaseTag::ZtOdd,
        (true, false) if field.order() != 3 => CaseTag::ZtEvenQ5,
        (true, false) if n.is_multiple_of(3) => CaseTag::F3SixK,
        (true, false) => CaseTag::F3EvenShift,
    }
}

fn search_reason(budget: &SearchBudget, candidates: u64, proof: bool) -> String {
    if proof {
        format!("no decomposition exists: all {candidates} square-zero candidates fail")
    } else {
        format!("no decomposition found among {candidates} candidates (mode {}, seed {})", budget.mode, budget.seed)
    }
}

/// Decomposes the companion matrix of `f` with the default search budget.
pub fn decompose_block(f: &Poly) -> Result<Outcome, DecompError> {
    decompose_block_with(f, &SearchBudget::default())
}

pub fn decompose_block_with(f: &Poly, budget: &SearchBudget) -> Result<Outcome, DecompError> {
    if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
        return Err(DecompError::NotMonic);
    }
    let field = f.field();
    let a = Matrix::companion_of(f)?;
    if f.is_obstructed() {
        return Ok(Outcome::Impossible(certify_impossible(&a, budget)?));
    }
    let spec = CompanionSpec::from_poly(f)?;
    let n = spec.order();
    let recipe = |tag, alpha, annihilator| Recipe { tag, field: field.clone(), n, u: spec.u.clone(), alpha, annihilator };

    if n <= 4 {
        return Ok(match oracle_decompose(&a, budget)? {
            SearchOutcome::Found { d, m, .. } => {
                let annihilator = d.min_poly();
                let r = recipe(CaseTag::SmallOrderSearch, None, annihilator.clone());
                Outcome::Decomposed(checked(&a, Decomposition { d, m, annihilator, recipes: vec![r] })?)
            }
            SearchOutcome::NotFound { proof, candidates } => Outcome::Unknown(search_reason(budget, candidates, proof)),
        });
    }

    let tag = explicit_case(field, &spec);
    let alpha = (tag == CaseTag::ZtEvenQ5).then(|| choose_alpha(field)).transpose()?;
    let (mp, annihilator) = match tag {
        CaseTag::NztOdd => build_m_nzt_odd(field, &spec)?,
        CaseTag::NztEven => build_m_nzt_even(field, &spec)?,
        CaseTag::ZtOdd => build_m_zt_odd(field, &spec)?,
        CaseTag::ZtEvenQ5 => build_m_zt_even_q5(field, &spec, alpha.expect("set above"))?,
        _ => {
            let (m, ann, _) = build_m_f3_even(field, &spec)?;
            (m, ann)
        }
    };
    let dec = Decomposition {
        d: &a + &mp,
        m: -&mp,
        annihilator: annihilator.clone(),
        recipes: vec![recipe(tag, alpha, annihilator)],
    };
    Ok(Outcome::Decomposed(checked(&a, dec)?))
}

/// Decomposes `A` with the default search budget.
pub fn decompose(a: &Matrix) -> Result<Outcome, DecompError> {
    decompose_with(a, &SearchBudget::default())
}

/// Over GF(3), if the first invariant factor is an obstructed cubic: all
/// factors equal gives `Impossible`; otherwise the whole canonical form is
/// searched at random within the budget and `Unknown` is returned on failure.
/// Every other matrix is decomposed block by block and pulled back.
pub fn decompose_with(a: &Matrix, budget: &SearchBudget) -> Result<Outcome, DecompError> {
    let field = a.field();
    let n = a.order();
    if n == 0 {
        let z = Matrix::zero(field, 0);
        return Ok(Outcome::Decomposed(Decomposition { d: z.clone(), m: z, annihilator: Poly::x(field), recipes: vec![] }));
    }
    let rf = rational_form(a);
    let p = &rf.transform;
    let p_inv = p.try_inverse()?;
    let pull_back = |x: &Matrix| &(p * x) * &p_inv;

    if rf.factors[0].is_obstructed() {
        if rf.factors.iter().all(|f| *f == rf.factors[0]) {
            return Ok(Outcome::Impossible(certify_impossible(a, budget)?));
        }
        let canonical = rf.canonical_matrix();
        let sampling = SearchBudget::randomized(budget.max_candidates, budget.seed);
        return Ok(match oracle_decompose(&canonical, &sampling)? {
            SearchOutcome::Found { d, m, .. } => {
                let annihilator = d.min_poly();
                let r = Recipe { tag: CaseTag::MatrixSearch, field: field.clone(), n, u: vec![], alpha: None, annihilator: annihilator.clone() };
                Outcome::Decomposed(checked(a, Decomposition { d: pull_back(&d), m: pull_back(&m), annihilator, recipes: vec![r] })?)
            }
            SearchOutcome::NotFound { candidates, .. } => Outcome::Unknown(format!(
                "first invariant factor {} is obstructed but the factors differ; {}",
                rf.factors[0],
                search_reason(&sampling, candidates, false)
            )),
        });
    }

    let mut ds = Vec::with_capacity(rf.factors.len());
    let mut ms = Vec::with_capacity(rf.factors.len());
    let mut recipes = Vec::with_capacity(rf.factors.len());
    let mut annihilator = Poly::one(field);
    for f in &rf.factors {
        match decompose_block_with(f, budget)? {
            Outcome::Decomposed(dec) => {
                annihilator = annihilator.lcm(&dec.annihilator).expect("nonzero");
                ds.push(dec.d);
                ms.push(dec.m);
                recipes.extend(dec.recipes);
            }
            Outcome::Unknown(reason) => return Ok(Outcome::Unknown(format!("block {f}: {reason}"))),
            Outcome::Impossible(_) => unreachable!("an obstructed factor would be the first one"),
        }
    }
    let d = pull_back(&Matrix::direct_sum(&ds)?);
    let m = pull_back(&Matrix::direct_sum(&ms)?);
    Ok(Outcome::Decomposed(checked(a, Decomposition { d, m, annihilator, recipes })?))
}
