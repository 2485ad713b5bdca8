//! Presentation invariance at desk scale: concrete comparisons between two
//! networks presenting the same clearing problem, verified as operator
//! intertwining on sampled states and as a bijection of sections.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::clearing::{
    enumerate_sections, kleene_greatest, kleene_least, phi, InstitutionState, SolveError,
    SolveOptions,
};
use crate::lattice::{LatticeError, LatticeValue, PaymentSpace};
use crate::network::LiabilityNetwork;
use crate::value::{Backend, ExtReal, Scalar};

/// A per-vertex order isomorphism between corresponding payment spaces (or
/// onto the relevant sublattice of the target).
#[derive(Debug, Clone)]
pub enum ValueMap {
    Identity,
    /// Multiply every extended-real coordinate by a positive rational.
    Scale(BigRational),
}

impl ValueMap {
    fn apply_value(&self, v: &LatticeValue) -> Result<LatticeValue, InvarianceError> {
        match (self, v) {
            (ValueMap::Identity, v) => Ok(v.clone()),
            (ValueMap::Scale(alpha), LatticeValue::ExtReal(x)) => {
                let factor = ExtReal::Finite(Scalar::Rational(alpha.clone()));
                Ok(LatticeValue::ExtReal(match x {
                    ExtReal::Infinity => ExtReal::Infinity,
                    finite => finite.mul(&factor),
                }))
            }
            (ValueMap::Scale(_), _) => Err(InvarianceError::UnscalableValue),
        }
    }

    pub fn apply(&self, x: &InstitutionState) -> Result<InstitutionState, InvarianceError> {
        let mut out = BTreeMap::new();
        for (v, val) in &x.0 {
            out.insert(v.clone(), self.apply_value(val)?);
        }
        Ok(InstitutionState(out))
    }
}

/// What the comparison is expected to establish on sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedRelation {
    /// The value map carries source sections bijectively onto target
    /// sections.
    SectionBijection,
    /// The value map is an isomorphism onto the target's section set through
    /// an inclusion of spaces (bounded vs unbounded presentations).
    SectionInclusionIso,
}

/// A named comparison between two presentations of one clearing problem.
#[derive(Debug, Clone)]
pub struct ComparisonCase {
    pub name: String,
    pub source: LiabilityNetwork,
    pub target: LiabilityNetwork,
    pub map: ValueMap,
    pub relation: ExpectedRelation,
}

#[derive(Debug, Error)]
pub enum InvarianceError {
    #[error("source and target vertex sets differ")]
    VertexMismatch,
    #[error("scale map applied to a non-scalar value")]
    UnscalableValue,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone)]
pub struct IntertwiningReport {
    pub case: String,
    pub samples: usize,
    pub failures: Vec<String>,
}

impl IntertwiningReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct BijectionReport {
    pub case: String,
    /// `"enumerated"` for finite section sets, `"extremes"` for interval
    /// networks compared through least/greatest sections.
    pub mode: &'static str,
    pub source_sections: usize,
    pub target_sections: usize,
    pub failures: Vec<String>,
}

impl BijectionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_shape(case: &ComparisonCase) -> Result<(), InvarianceError> {
    if case.source.vertices != case.target.vertices {
        return Err(InvarianceError::VertexMismatch);
    }
    Ok(())
}

/// A pseudo-random state of the source network; intervals are sampled on a
/// 1000-point grid of the bounded range (or a bounded integer offset when the
/// top is infinite), finite tables uniformly.
fn sample_state(net: &LiabilityNetwork, rng: &mut ChaCha8Rng) -> InstitutionState {
    let mut out = BTreeMap::new();
    for v in &net.vertices {
        let value = match net.space(v) {
            PaymentSpace::Interval { lower, upper } => {
                let val = if upper.is_infinite() {
                    let k: i64 = rng.gen_range(0..=100);
                    lower.add(&ExtReal::from_int(k, Backend::Rational))
                } else {
                    let t: i64 = rng.gen_range(0..=1000);
                    let span = upper.abs_diff(lower);
                    lower.add(
                        &span
                            .mul(&ExtReal::from_int(t, Backend::Rational))
                            .div(&ExtReal::from_int(1000, Backend::Rational)),
                    )
                };
                LatticeValue::ExtReal(val)
            }
            space => {
                let elems = space.enumerate().expect("finite space enumerates");
                elems[rng.gen_range(0..elems.len())].clone()
            }
        };
        out.insert(v.clone(), value);
    }
    InstitutionState(out)
}

/// Checks `map(Φ_source(x)) = Φ_target(map(x))` on `samples` deterministic
/// pseudo-random states plus the source lattice extremes.
pub fn verify_operator_intertwining(
    case: &ComparisonCase,
    samples: usize,
    seed: u64,
) -> Result<IntertwiningReport, InvarianceError> {
    check_shape(case)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(samples + 2);
    if let Ok(bottom) = InstitutionState::bottom(&case.source) {
        states.push(("bottom".to_string(), bottom));
    }
    if let Ok(top) = InstitutionState::top(&case.source) {
        states.push(("top".to_string(), top));
    }
    for i in 0..samples {
        states.push((format!("sample {i}"), sample_state(&case.source, &mut rng)));
    }

    let mut report = IntertwiningReport {
        case: case.name.clone(),
        samples: states.len(),
        failures: Vec::new(),
    };
    for (label, x) in &states {
        let lhs = case.map.apply(&phi(&case.source, x))?;
        let rhs = phi(&case.target, &case.map.apply(x)?);
        if lhs != rhs {
            report.failures.push(format!(
                "{}: map(Phi(x)) != Phi'(map(x)) at {label}",
                case.name
            ));
        }
    }
    Ok(report)
}

/// Checks that the value map carries source sections onto target sections:
/// full enumerated sets for finite networks, least/greatest pairs for
/// interval networks (where enumeration is impossible; the gap beyond the
/// extremes is inherent to the interval setting).
pub fn verify_section_bijection(case: &ComparisonCase) -> Result<BijectionReport, InvarianceError> {
    check_shape(case)?;
    let enumerable = case
        .source
        .vertices
        .iter()
        .all(|v| case.source.space(v).is_finite_kind())
        && case
            .target
            .vertices
            .iter()
            .all(|v| case.target.space(v).is_finite_kind());

    let mut failures = Vec::new();
    if enumerable {
        let src = enumerate_sections(&case.source)?;
        let tgt = enumerate_sections(&case.target)?;
        let mut mapped: Vec<InstitutionState> = Vec::new();
        for s in &src {
            mapped.push(case.map.apply(&s.x)?);
        }
        for m in &mapped {
            if !tgt.iter().any(|t| t.x == *m) {
                failures.push(format!("{}: mapped section missing in target", case.name));
            }
        }
        if src.len() != tgt.len() {
            failures.push(format!(
                "{}: section counts differ ({} vs {})",
                case.name,
                src.len(),
                tgt.len()
            ));
        }
        // Injectivity: mapped sections pairwise distinct.
        for i in 0..mapped.len() {
            for j in i + 1..mapped.len() {
                if mapped[i] == mapped[j] {
                    failures.push(format!("{}: value map collapses two sections", case.name));
                }
            }
        }
        Ok(BijectionReport {
            case: case.name.clone(),
            mode: "enumerated",
            source_sections: src.len(),
            target_sections: tgt.len(),
            failures,
        })
    } else {
        let opts = SolveOptions::default();
        let (src_least, _) = kleene_least(&case.source, &opts)?;
        let (tgt_least, _) = kleene_least(&case.target, &opts)?;
        if case.map.apply(&src_least.x)? != tgt_least.x {
            failures.push(format!("{}: least sections disagree under the map", case.name));
        }
        let (src_greatest, _) = kleene_greatest(&case.source, &opts)?;
        let (tgt_greatest, _) = kleene_greatest(&case.target, &opts)?;
        if case.map.apply(&src_greatest.x)? != tgt_greatest.x {
            failures.push(format!(
                "{}: greatest sections disagree under the map",
                case.name
            ));
        }
        Ok(BijectionReport {
            case: case.name.clone(),
            mode: "extremes",
            source_sections: 2,
            target_sections: 2,
            failures,
        })
    }
}

/// The redenomination comparison for a scalar network.
pub fn redenomination_case(
    name: &str,
    net: &LiabilityNetwork,
    alpha: &BigRational,
) -> Result<ComparisonCase, crate::models::ModelError> {
    assert!(alpha.is_positive());
    Ok(ComparisonCase {
        name: name.to_string(),
        source: net.clone(),
        target: crate::models::redenominate(net, alpha)?,
        map: ValueMap::Scale(alpha.clone()),
        relation: ExpectedRelation::SectionBijection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{eisenberg_noe, eisenberg_noe_bounded, EisenbergNoeInstance};
    use num_bigint::BigInt;

    fn net_b() -> EisenbergNoeInstance {
        EisenbergNoeInstance::from_parts(
            &[("1", "5"), ("2", "0")],
            &[("1", "2", "10"), ("2", "1", "10")],
        )
        .unwrap()
    }

    #[test]
    fn redenomination_intertwines_and_transports_sections() {
        let net = eisenberg_noe(&net_b(), Backend::Rational).unwrap();
        let alpha = BigRational::from_integer(BigInt::from(2));
        let case = redenomination_case("net-b-alpha-2", &net, &alpha).unwrap();
        let rep = verify_operator_intertwining(&case, 100, 7).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
        let rep = verify_section_bijection(&case).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
    }

    #[test]
    fn bounded_unbounded_comparison() {
        let inst = net_b();
        let case = ComparisonCase {
            name: "net-b-bounded-unbounded".into(),
            source: eisenberg_noe_bounded(&inst, Backend::Rational).unwrap(),
            target: eisenberg_noe(&inst, Backend::Rational).unwrap(),
            map: ValueMap::Identity,
            relation: ExpectedRelation::SectionInclusionIso,
        };
        let rep = verify_operator_intertwining(&case, 100, 11).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
        let rep = verify_section_bijection(&case).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
    }

    #[test]
    fn deliberate_mismatch_is_caught() {
        let net = eisenberg_noe(&net_b(), Backend::Rational).unwrap();
        let two = BigRational::from_integer(BigInt::from(2));
        let three = BigRational::from_integer(BigInt::from(3));
        let mut case = redenomination_case("net-b-mismatch", &net, &three).unwrap();
        case.map = ValueMap::Scale(two);
        let rep = verify_operator_intertwining(&case, 20, 3).unwrap();
        assert!(!rep.ok());
        let rep = verify_section_bijection(&case).unwrap();
        assert!(!rep.ok());
    }
}
