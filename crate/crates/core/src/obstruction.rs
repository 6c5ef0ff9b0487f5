//! Certificates for the GF(3) obstruction: a matrix whose invariant factors
//! are all one irreducible cubic with nonzero trace admits no square-zero `M`
//! with `A + M` diagonalizable.
//!
//! The non-existence argument runs under the assumption that such an `M`
//! exists, so its intermediate identities cannot be evaluated on concrete
//! matrices. What is checked here are its two premises, `A^3 = A^2 + A + Id`
//! and invertibility of `A^2 + Id`, after the affine change `A -> sA + tI`
//! that carries the cubic to `x^3 - x^2 - x - 1`. Search supplies the evidence:
//! exhaustive at order 3, seeded random sampling above.

use std::fmt;

use thiserror::Error;

use crate::canonical::rational_form;
use crate::fields::{Fe, Field, Poly};
use crate::matrices::Matrix;
use crate::oracle::{self, OracleError, SearchBudget, SearchMode, SearchOutcome, DEFAULT_MAX_CANDIDATES};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("obstruction is specific to GF(3), got GF({0})")]
    WrongField(u32),
    #[error("invariant factors are not all one obstructed cubic: [{0}]")]
    NotObstructed(String),
    #[error("A^3 = A^2 + A + Id does not hold")]
    CubicIdentityFails,
    #[error("premise check failed: {0}")]
    PremiseFailed(String),
    #[error("COUNTEREXAMPLE: {hits} of {candidates} square-zero candidates (seed {seed}) make A + M diagonalizable")]
    CounterexampleFound { seed: u64, candidates: u64, hits: u64 },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evidence {
    /// Every square-zero matrix of the order was tried.
    Exhaustive { candidates: u64 },
    Randomized { seed: u64, candidates: u64, hits: u64 },
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Exhaustive { .. } => f.write_str("exhaustive"),
            Evidence::Randomized { seed, candidates, hits } => {
                write!(f, "randomized seed={seed} candidates={candidates} hits={hits}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionCertificate {
    /// The common invariant factor of the input.
    pub polynomial: Poly,
    pub order: usize,
    /// `(s, t)` with `sA + tI` having invariant factor `x^3 - x^2 - x - 1`.
    pub normalization: (Fe, Fe),
    pub checks: CheckReport,
    pub evidence: Evidence,
}

impl fmt::Display for ObstructionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "polynomial = {}", self.polynomial)?;
        writeln!(f, "order = {}", self.order)?;
        writeln!(f, "normalization = {}A+{}I", self.normalization.0 .0, self.normalization.1 .0)?;
        write!(f, "{}", self.checks)?;
        if let Evidence::Exhaustive { candidates } = self.evidence {
            writeln!(f, "candidates = {candidates}")?;
        }
        writeln!(f, "evidence = {}", self.evidence)
    }
}

fn require_f3(field: &Field) -> Result<(), ObstructionError> {
    if field.order() == 3 {
        Ok(())
    } else {
        Err(ObstructionError::WrongField(field.order()))
    }
}

/// `x^3 - x^2 - x - 1` over GF(3).
pub fn base_cubic(field: &Field) -> Poly {
    Poly::from_ints(field, &[-1, -1, -1, 1])
}

/// Monic irreducible cubics over GF(3) with nonzero trace, sorted.
pub fn obstructed_cubics(field: &Field) -> Result<Vec<Poly>, ObstructionError> {
    require_f3(field)?;
    let mut out: Vec<Poly> = (0..27u32)
        .map(|i| Poly::new(field, vec![Fe(i % 3), Fe(i / 3 % 3), Fe(i / 9), Fe::ONE]))
        .filter(|p| p.is_obstructed())
        .collect();
    out.sort();
    Ok(out)
}

/// The common invariant factor when all factors equal one obstructed cubic.
pub fn common_obstructed_factor(a: &Matrix) -> Option<Poly> {
    if a.field().order() != 3 || a.order() == 0 {
        return None;
    }
    let fs = rational_form(a).factors;
    let p = fs[0].clone();
    (p.is_obstructed() && fs.iter().all(|f| *f == p)).then_some(p)
}

fn affine(a: &Matrix, s: Fe, t: Fe) -> Matrix {
    a.scalar_mul(s).add_scalar(t)
}

const FAMILY: [(u32, u32); 6] = [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)];

/// `A, A + I, A - I, 2A, 2A + I, 2A - I`, each with its common invariant factor.
pub fn obstructed_family(a: &Matrix) -> Result<Vec<(Matrix, Poly)>, ObstructionError> {
    require_f3(a.field())?;
    if common_obstructed_factor(a).is_none() {
        return Err(ObstructionError::NotObstructed(describe_factors(a)));
    }
    FAMILY
        .iter()
        .map(|&(s, t)| {
            let b = affine(a, Fe(s), Fe(t));
            let p = common_obstructed_factor(&b).ok_or_else(|| ObstructionError::NotObstructed(describe_factors(&b)))?;
            Ok((b, p))
        })
        .collect()
}

fn describe_factors(a: &Matrix) -> String {
    rational_form(a).factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
}

fn cubic_identity(a: &Matrix) -> bool {
    let a2 = a * a;
    &a2 * a == (&a2 + a).add_scalar(Fe::ONE)
}

/// Premises of the non-existence argument, plus a probe over caller-supplied
/// candidates: none may satisfy `M^2 = 0` and `(A + M)^3 = A + M`.
pub fn verify_identity_chain(a: &Matrix, samples: &[Matrix]) -> Result<CheckReport, ObstructionError> {
    require_f3(a.field())?;
    if !cubic_identity(a) {
        return Err(ObstructionError::CubicIdentityFails);
    }
    let mut report = CheckReport::new();
    report.push("cubic_identity", true);
    report.push("a2_plus_id_invertible", (a * a).add_scalar(Fe::ONE).try_inverse().is_ok());
    let counterexamples = samples.iter().filter(|m| m.is_square_zero() && (a + *m).is_diagonalizable()).count();
    if counterexamples > 0 {
        eprintln!("COUNTEREXAMPLE: {counterexamples} sampled square-zero matrices make A + M diagonalizable");
    }
    report.push("sample_probe", counterexamples == 0);
    Ok(report)
}

/// Certificate of non-decomposability. Order 3 is settled by trying every
/// square-zero matrix; larger orders get `max_candidates` seeded random
/// square-zero samples (the budget's own count in randomized mode, the
/// default otherwise).
pub fn certify_impossible(a: &Matrix, budget: &SearchBudget) -> Result<ObstructionCertificate, ObstructionError> {
    let field = a.field();
    require_f3(field)?;
    let p = common_obstructed_factor(a).ok_or_else(|| ObstructionError::NotObstructed(describe_factors(a)))?;
    let target = base_cubic(field);
    let (s, t, b) = FAMILY
        .iter()
        .map(|&(s, t)| (Fe(s), Fe(t), affine(a, Fe(s), Fe(t))))
        .find(|(_, _, b)| common_obstructed_factor(b).as_ref() == Some(&target))
        .expect("the affine family reaches every obstructed cubic");

    let mut checks = verify_identity_chain(&b, &[])?;
    checks.checks.retain(|c| c.name != "sample_probe");
    let family: Vec<Poly> = obstructed_family(&b)?.into_iter().map(|(_, f)| f).collect();
    let mut sorted = family.clone();
    sorted.sort();
    checks.push("family_membership", family.contains(&p) && sorted == obstructed_cubics(field)?);
    if let Some(name) = checks.failures().next() {
        return Err(ObstructionError::PremiseFailed(name.to_string()));
    }

    let evidence = if a.order() == 3 {
        match oracle::oracle_decompose(a, &SearchBudget::rank_parameterized())? {
            SearchOutcome::NotFound { proof: true, candidates } => Evidence::Exhaustive { candidates },
            SearchOutcome::NotFound { proof: false, .. } => unreachable!("complete enumeration"),
            SearchOutcome::Found { candidates, .. } => {
                return Err(ObstructionError::CounterexampleFound { seed: 0, candidates, hits: 1 })
            }
        }
    } else {
        let max = if budget.mode == SearchMode::Randomized { budget.max_candidates } else { DEFAULT_MAX_CANDIDATES };
        let sampling = SearchBudget::randomized(max, budget.seed);
        let (candidates, hits) = oracle::random_hits(a, &sampling);
        if hits > 0 {
            return Err(ObstructionError::CounterexampleFound { seed: budget.seed, candidates, hits });
        }
        Evidence::Randomized { seed: budget.seed, candidates, hits }
    };
    Ok(ObstructionCertificate { polynomial: p, order: a.order(), normalization: (s, t), checks, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn companion(p: &Poly) -> Matrix {
        Matrix::companion_of(p).unwrap()
    }

    #[test]
    fn six_cubics_and_zero_trace_ones_excluded() {
        let f = f3();
        let obs = obstructed_cubics(&f).unwrap();
        assert_eq!(obs.len(), 6);
        assert!(obs.contains(&base_cubic(&f)));
        let irreducible: Vec<Poly> = (0..27u32)
            .map(|i| Poly::new(&f, vec![Fe(i % 3), Fe(i / 3 % 3), Fe(i / 9), Fe::ONE]))
            .filter(|p| p.is_irreducible().unwrap())
            .collect();
        assert_eq!(irreducible.len(), 8);
        let zero_trace: Vec<&Poly> = irreducible.iter().filter(|p| p.coeff(2).is_zero()).collect();
        assert_eq!(zero_trace.len(), 2);
        assert!(zero_trace.iter().all(|p| !obs.contains(p)));
        assert!(obstructed_cubics(&Field::prime(5).unwrap()).is_err());
    }

    #[test]
    fn family_covers_all_six() {
        let f = f3();
        let a = companion(&base_cubic(&f));
        let fam = obstructed_family(&a).unwrap();
        assert_eq!(fam[0].1, base_cubic(&f));
        let mut polys: Vec<Poly> = fam.iter().map(|(m, p)| {
            assert_eq!(m.char_poly(), *p);
            p.clone()
        }).collect();
        polys.sort();
        assert_eq!(polys, obstructed_cubics(&f).unwrap());
        assert!(obstructed_family(&Matrix::identity(&f, 3)).is_err());
    }

    #[test]
    fn identity_chain_premises() {
        let f = f3();
        let a = companion(&base_cubic(&f));
        let rep = verify_identity_chain(&a, &[Matrix::zero(&f, 3)]).unwrap();
        assert!(rep.all_passed(), "{rep}");
        assert_eq!(verify_identity_chain(&Matrix::identity(&f, 3), &[]), Err(ObstructionError::CubicIdentityFails));
        // only the base cubic satisfies the identity
        let others = obstructed_cubics(&f).unwrap().into_iter().filter(|p| *p != base_cubic(&f));
        for p in others {
            let c = companion(&p);
            assert!(c.annihilated_by(&p));
            assert!(!cubic_identity(&c));
        }
    }

    #[test]
    fn order_three_certificates_are_exhaustive() {
        let f = f3();
        for p in obstructed_cubics(&f).unwrap() {
            let cert = certify_impossible(&companion(&p), &SearchBudget::default()).unwrap();
            assert_eq!(cert.evidence, Evidence::Exhaustive { candidates: 105 });
            assert!(cert.checks.all_passed());
            assert_eq!(cert.polynomial, p);
        }
        let text = certify_impossible(&companion(&base_cubic(&f)), &SearchBudget::default()).unwrap().to_string();
        assert!(text.ends_with("evidence = exhaustive\n"), "{text}");
    }

    #[test]
    fn certificate_rejects_other_inputs() {
        let f = f3();
        assert!(matches!(certify_impossible(&Matrix::identity(&f, 3), &SearchBudget::default()), Err(ObstructionError::NotObstructed(_))));
        assert!(matches!(certify_impossible(&Matrix::identity(&f, 4), &SearchBudget::default()), Err(ObstructionError::NotObstructed(_))));
        let g = Field::prime(5).unwrap();
        assert_eq!(certify_impossible(&Matrix::identity(&g, 3), &SearchBudget::default()), Err(ObstructionError::WrongField(5)));
    }

    #[test]
    fn order_six_randomized_summary() {
        let f = f3();
        let c = companion(&base_cubic(&f));
        let a = Matrix::direct_sum(&[c.clone(), c]).unwrap();
        let cert = certify_impossible(&a, &SearchBudget::randomized(20_000, 5)).unwrap();
        assert_eq!(cert.evidence, Evidence::Randomized { seed: 5, candidates: 20_000, hits: 0 });
        assert!(cert.to_string().ends_with("evidence = randomized seed=5 candidates=20000 hits=0\n"));
    }
}
