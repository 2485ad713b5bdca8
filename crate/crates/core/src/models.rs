//! Model front-ends: Eisenberg–Noe instances (unbounded and bounded
//! presentations), finite lattice liability networks, and currency
//! redenomination.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::lattice::{FiniteLattice, LatticeValue, PaymentSpace};
use crate::network::{AggregatorFn, DistributorFn, Edge, EdgeId, LiabilityNetwork, VertexId};
use crate::value::{parse_ext_real, Backend, ExtReal, ParseValueError, Scalar};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0} -> {1}`")]
    DuplicateEdge(String, String),
    #[error("edge endpoint `{0}` is not a declared vertex")]
    UnknownVertex(String),
    #[error("edge `{0} -> {1}` has nonpositive liability")]
    NonpositiveLiability(String, String),
    #[error("self-liability `{0} -> {0}`")]
    SelfLoop(String),
    #[error("vertex `{0}`: element index {1} outside its lattice")]
    ElementOutOfRange(String, usize),
    #[error("edge `{0} -> {1}`: distributor table size does not match the source lattice")]
    TableArity(String, String),
    #[error("redenomination requires interval spaces and scalar maps")]
    NotScalable,
    #[error("redenomination factor must be positive")]
    NonpositiveFactor,
    #[error(transparent)]
    Parse(#[from] ParseValueError),
}

/// A raw Eisenberg–Noe instance: external assets per institution and
/// nominal liabilities between them, as decimal/fraction strings so the
/// arithmetic backend can be chosen at network construction.
#[derive(Debug, Clone)]
pub struct EisenbergNoeInstance {
    pub vertices: Vec<(String, String)>,
    pub edges: Vec<(String, String, String)>,
}

impl EisenbergNoeInstance {
    /// Builds an instance from `(id, external assets)` vertex pairs and
    /// `(from, to, liability)` edge triples, validating ids and literals.
    pub fn from_parts(
        vertices: &[(&str, &str)],
        edges: &[(&str, &str, &str)],
    ) -> Result<Self, ModelError> {
        let mut ids = BTreeSet::new();
        for (id, assets) in vertices {
            if !ids.insert(id.to_string()) {
                return Err(ModelError::DuplicateVertex(id.to_string()));
            }
            parse_ext_real(assets, Backend::Rational)?;
        }
        let mut pairs = BTreeSet::new();
        for (from, to, amount) in edges {
            if from == to {
                return Err(ModelError::SelfLoop(from.to_string()));
            }
            for end in [from, to] {
                if !ids.contains(*end) {
                    return Err(ModelError::UnknownVertex(end.to_string()));
                }
            }
            if !pairs.insert((from.to_string(), to.to_string())) {
                return Err(ModelError::DuplicateEdge(from.to_string(), to.to_string()));
            }
            let v = parse_ext_real(amount, Backend::Rational)?;
            if v.is_zero() || v.is_infinite() {
                return Err(ModelError::NonpositiveLiability(
                    from.to_string(),
                    to.to_string(),
                ));
            }
        }
        Ok(EisenbergNoeInstance {
            vertices: vertices
                .iter()
                .map(|(id, a)| (id.to_string(), a.to_string()))
                .collect(),
            edges: edges
                .iter()
                .map(|(f, t, a)| (f.to_string(), t.to_string(), a.to_string()))
                .collect(),
        })
    }
}

/// Shared skeleton of an Eisenberg–Noe network: sorted vertices and edges,
/// per-edge liabilities, per-vertex exogenous resources, and per-vertex
/// nominal out-totals ℓ̄.
struct EnParts {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    liability: BTreeMap<EdgeId, ExtReal>,
    exogenous: BTreeMap<VertexId, ExtReal>,
    nominal_out: BTreeMap<VertexId, ExtReal>,
}

fn en_parts(inst: &EisenbergNoeInstance, backend: Backend) -> Result<EnParts, ModelError> {
    let mut vertices: Vec<VertexId> = inst
        .vertices
        .iter()
        .map(|(id, _)| VertexId(id.clone()))
        .collect();
    vertices.sort();
    let mut exogenous = BTreeMap::new();
    for (id, assets) in &inst.vertices {
        exogenous.insert(VertexId(id.clone()), parse_ext_real(assets, backend)?);
    }
    let mut edges = Vec::new();
    let mut liability = BTreeMap::new();
    let mut nominal_out: BTreeMap<VertexId, ExtReal> = vertices
        .iter()
        .map(|v| (v.clone(), ExtReal::zero(backend)))
        .collect();
    for (from, to, amount) in &inst.edges {
        let id = EdgeId(format!("{from}->{to}"));
        let ell = parse_ext_real(amount, backend)?;
        let source = VertexId(from.clone());
        *nominal_out.get_mut(&source).unwrap() = nominal_out[&source].add(&ell);
        edges.push(Edge {
            id: id.clone(),
            source,
            target: VertexId(to.clone()),
        });
        liability.insert(id, ell);
    }
    edges.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(EnParts {
        vertices,
        edges,
        liability,
        exogenous,
        nominal_out,
    })
}

/// The unbounded Eisenberg–Noe presentation: payment spaces `[0, inf]`,
/// proportional distributors `min{x ℓ_e / ℓ̄_v, ℓ_e}`, and capped-sum
/// aggregators `min{ℓ̄_v, c_v + Σ p}`.
pub fn eisenberg_noe(
    inst: &EisenbergNoeInstance,
    backend: Backend,
) -> Result<LiabilityNetwork, ModelError> {
    let EnParts {
        vertices,
        edges,
        liability,
        exogenous,
        nominal_out,
    } = en_parts(inst, backend)?;
    let payment_space = vertices
        .iter()
        .map(|v| (v.clone(), PaymentSpace::unbounded(backend)))
        .collect();
    let distributor = edges
        .iter()
        .map(|e| {
            (
                e.id.clone(),
                DistributorFn::Proportional {
                    total: nominal_out[&e.source].clone(),
                    cap: liability[&e.id].clone(),
                },
            )
        })
        .collect();
    let aggregator = vertices
        .iter()
        .map(|v| {
            (
                v.clone(),
                AggregatorFn::SumCapped {
                    cap: nominal_out[v].clone(),
                },
            )
        })
        .collect();
    Ok(LiabilityNetwork {
        vertices,
        edges,
        payment_space,
        liability: liability
            .into_iter()
            .map(|(k, v)| (k, LatticeValue::ExtReal(v)))
            .collect(),
        exogenous: exogenous
            .into_iter()
            .map(|(k, v)| (k, LatticeValue::ExtReal(v)))
            .collect(),
        distributor,
        aggregator,
    })
}

/// The bounded Eisenberg–Noe presentation: payment spaces `[0, ℓ̄_v]` with
/// exogenous resources clipped to `min{c_v, ℓ̄_v}`. Same clearing sections as
/// the unbounded presentation, but with a finite top, so descending Kleene
/// iteration applies directly.
pub fn eisenberg_noe_bounded(
    inst: &EisenbergNoeInstance,
    backend: Backend,
) -> Result<LiabilityNetwork, ModelError> {
    let mut net = eisenberg_noe(inst, backend)?;
    let bars: BTreeMap<VertexId, ExtReal> = net
        .vertices
        .iter()
        .map(|v| {
            let bar = net
                .outgoing(v)
                .iter()
                .fold(ExtReal::zero(backend), |acc, e| {
                    acc.add(net.liability[&e.id].as_ext_real().unwrap())
                });
            (v.clone(), bar)
        })
        .collect();
    for v in &net.vertices {
        net.payment_space.insert(
            v.clone(),
            PaymentSpace::interval(ExtReal::zero(backend), bars[v].clone())
                .expect("nominal totals are nonnegative"),
        );
        let clipped = net.exogenous[v].as_ext_real().unwrap().min(&bars[v]);
        net.exogenous.insert(v.clone(), LatticeValue::ExtReal(clipped));
    }
    Ok(net)
}

/// Aggregator spec for a lattice liability network vertex.
#[derive(Debug, Clone)]
pub enum LLNAggregator {
    /// Join of the exogenous element and every incoming payment.
    Join,
    /// Explicit table from incoming tuples (ordered by edge id) to elements.
    Table(Vec<(Vec<usize>, usize)>),
}

#[derive(Debug, Clone)]
pub struct LLNVertex {
    pub id: String,
    pub lattice: FiniteLattice,
    /// Index of the exogenous element in the vertex lattice.
    pub exogenous: usize,
    pub aggregator: LLNAggregator,
}

#[derive(Debug, Clone)]
pub struct LLNEdge {
    pub from: String,
    pub to: String,
    /// Index of the liability bound in the source lattice.
    pub liability: usize,
    /// Output element per source element, in source enumeration order.
    pub distributor: Vec<usize>,
}

/// A lattice liability network: finite lattice payment spaces with tabulated
/// or join aggregators and tabulated distributors.
#[derive(Debug, Clone)]
pub struct LLNInstance {
    pub vertices: Vec<LLNVertex>,
    pub edges: Vec<LLNEdge>,
}

/// Builds the decorated network for a lattice liability instance.
pub fn lln(inst: &LLNInstance) -> Result<LiabilityNetwork, ModelError> {
    let mut seen = BTreeSet::new();
    for v in &inst.vertices {
        if !seen.insert(v.id.clone()) {
            return Err(ModelError::DuplicateVertex(v.id.clone()));
        }
        if v.exogenous >= v.lattice.len() {
            return Err(ModelError::ElementOutOfRange(v.id.clone(), v.exogenous));
        }
    }
    let mut vertices: Vec<VertexId> = inst
        .vertices
        .iter()
        .map(|v| VertexId(v.id.clone()))
        .collect();
    vertices.sort();
    let by_id: BTreeMap<&str, &LLNVertex> =
        inst.vertices.iter().map(|v| (v.id.as_str(), v)).collect();

    let mut edges = Vec::new();
    let mut liability = BTreeMap::new();
    let mut distributor = BTreeMap::new();
    let mut pairs = BTreeSet::new();
    for e in &inst.edges {
        let Some(src) = by_id.get(e.from.as_str()) else {
            return Err(ModelError::UnknownVertex(e.from.clone()));
        };
        if !by_id.contains_key(e.to.as_str()) {
            return Err(ModelError::UnknownVertex(e.to.clone()));
        }
        if !pairs.insert((e.from.clone(), e.to.clone())) {
            return Err(ModelError::DuplicateEdge(e.from.clone(), e.to.clone()));
        }
        if e.liability >= src.lattice.len() {
            return Err(ModelError::ElementOutOfRange(e.from.clone(), e.liability));
        }
        if e.distributor.len() != src.lattice.len() {
            return Err(ModelError::TableArity(e.from.clone(), e.to.clone()));
        }
        let id = EdgeId(format!("{}->{}", e.from, e.to));
        edges.push(Edge {
            id: id.clone(),
            source: VertexId(e.from.clone()),
            target: VertexId(e.to.clone()),
        });
        liability.insert(id.clone(), LatticeValue::FiniteElem(e.liability));
        distributor.insert(
            id,
            DistributorFn::Table(
                e.distributor
                    .iter()
                    .map(|&i| LatticeValue::FiniteElem(i))
                    .collect(),
            ),
        );
    }
    edges.sort_by(|a, b| a.id.cmp(&b.id));

    let mut payment_space = BTreeMap::new();
    let mut exogenous = BTreeMap::new();
    let mut aggregator = BTreeMap::new();
    for v in &inst.vertices {
        let vid = VertexId(v.id.clone());
        payment_space.insert(vid.clone(), PaymentSpace::finite(v.lattice.clone()));
        exogenous.insert(vid.clone(), LatticeValue::FiniteElem(v.exogenous));
        aggregator.insert(
            vid,
            match &v.aggregator {
                LLNAggregator::Join => AggregatorFn::JoinAll,
                LLNAggregator::Table(entries) => AggregatorFn::Table(
                    entries
                        .iter()
                        .map(|(input, out)| {
                            (
                                input.iter().map(|&i| LatticeValue::FiniteElem(i)).collect(),
                                LatticeValue::FiniteElem(*out),
                            )
                        })
                        .collect(),
                ),
            },
        );
    }
    Ok(LiabilityNetwork {
        vertices,
        edges,
        payment_space,
        liability,
        exogenous,
        distributor,
        aggregator,
    })
}

/// Rescales every monetary quantity by a positive rational factor `alpha`:
/// interval endpoints, liabilities, exogenous resources, distributor totals
/// and caps, and aggregator caps. Linear slopes are dimensionless and stay
/// fixed. Finite-table decorations carry no unit and cannot be rescaled.
pub fn redenominate(
    net: &LiabilityNetwork,
    alpha: &BigRational,
) -> Result<LiabilityNetwork, ModelError> {
    if !alpha.is_positive() {
        return Err(ModelError::NonpositiveFactor);
    }
    let factor = ExtReal::Finite(Scalar::Rational(alpha.clone()));
    let scale_ext = |v: &ExtReal| -> ExtReal {
        match v {
            ExtReal::Infinity => ExtReal::Infinity,
            finite => finite.mul(&factor),
        }
    };
    let scale = |v: &LatticeValue| -> Result<LatticeValue, ModelError> {
        match v {
            LatticeValue::ExtReal(x) => Ok(LatticeValue::ExtReal(scale_ext(x))),
            _ => Err(ModelError::NotScalable),
        }
    };

    let mut out = net.clone();
    for space in out.payment_space.values_mut() {
        match space {
            PaymentSpace::Interval { lower, upper } => {
                *lower = scale_ext(lower);
                *upper = scale_ext(upper);
            }
            _ => return Err(ModelError::NotScalable),
        }
    }
    for v in out.liability.values_mut() {
        *v = scale(v)?;
    }
    for v in out.exogenous.values_mut() {
        *v = scale(v)?;
    }
    for d in out.distributor.values_mut() {
        match d {
            DistributorFn::Proportional { total, cap } => {
                *total = scale_ext(total);
                *cap = scale_ext(cap);
            }
            DistributorFn::LinearCapped { cap, .. } => *cap = scale_ext(cap),
            DistributorFn::IdentityCapped { cap } => *cap = scale_ext(cap),
            DistributorFn::Table(_) => return Err(ModelError::NotScalable),
        }
    }
    for a in out.aggregator.values_mut() {
        match a {
            AggregatorFn::SumCapped { cap } => *cap = scale_ext(cap),
            AggregatorFn::Sum | AggregatorFn::JoinAll => {}
            AggregatorFn::Table(_) => return Err(ModelError::NotScalable),
        }
    }
    Ok(out)
}
