//! JSON file formats: full network files, solver reports, compact
//! Eisenberg–Noe instances, and invariance-verification manifests.
//!
//! Values serialize as decimal/fraction strings (never binary floats) so the
//! rational backend round-trips exactly, and vertices and edges are written
//! in id order so canonical output is byte-stable.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clearing::{ClearingSection, SolveReport};
use crate::invariance::{ComparisonCase, ExpectedRelation, ValueMap};
use crate::lattice::{FiniteLattice, LatticeError, LatticeValue, MetricSpec, PaymentSpace};
use crate::network::{
    validate_network, AggregatorFn, DistributorFn, Edge, EdgeId, LiabilityNetwork, VertexId,
};
use crate::value::{format_ext_real, parse_ext_real, Backend, ExtReal, ParseValueError, Scalar};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Parse(#[from] ParseValueError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("vertex `{0}`: unknown element `{1}`")]
    UnknownElement(String, String),
    #[error("edge `{0}` references undeclared vertex `{1}`")]
    UnknownVertex(String, String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unsupported payment space for serialization")]
    UnsupportedSpace,
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("unknown comparison map or relation `{0}`")]
    UnknownComparison(String),
    #[error("network fails validation:\n{0}")]
    Validation(String),
}

// ---------------------------------------------------------------------------
// Network files
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NetworkFile {
    pub version: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metric: Option<String>,
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VertexSpec {
    pub id: String,
    pub space: SpaceSpec,
    pub exogenous: String,
    pub aggregator: AggregatorSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum SpaceSpec {
    /// `[lower, upper]`; endpoints are value literals, `"inf"` allowed above.
    Interval([String; 2]),
    /// Element names plus covering pairs; leq is the reflexive-transitive
    /// closure computed at load time.
    Finite {
        elements: Vec<String>,
        covers: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum AggregatorSpec {
    Sum,
    SumCapped { cap: String },
    JoinAll,
    Table { entries: Vec<AggregatorEntry> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AggregatorEntry {
    pub input: Vec<String>,
    pub output: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeSpec {
    pub id: String,
    pub source: String,
    pub target: String,
    pub liability: String,
    pub distributor: DistributorSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum DistributorSpec {
    Proportional { total: String, cap: String },
    LinearCapped { slope: String, cap: String },
    IdentityCapped { cap: String },
    Table { outputs: Vec<String> },
}

pub fn parse_metric(s: &str) -> Result<MetricSpec, FormatError> {
    match s {
        "l1-abs" => Ok(MetricSpec::L1Abs),
        "l1-discrete" => Ok(MetricSpec::L1Discrete),
        other => Err(FormatError::UnknownMetric(other.to_string())),
    }
}

pub fn metric_name(m: MetricSpec) -> &'static str {
    match m {
        MetricSpec::L1Abs => "l1-abs",
        MetricSpec::L1Discrete => "l1-discrete",
    }
}

fn parse_value(
    space: &PaymentSpace,
    literal: &str,
    vertex: &str,
    backend: Backend,
) -> Result<LatticeValue, FormatError> {
    match space {
        PaymentSpace::FiniteTable(t) => t
            .index_of(literal)
            .map(LatticeValue::FiniteElem)
            .ok_or_else(|| FormatError::UnknownElement(vertex.to_string(), literal.to_string())),
        _ => Ok(LatticeValue::ExtReal(parse_ext_real(literal, backend)?)),
    }
}

/// Renders a value against its space: element names for finite tables,
/// decimal/fraction literals otherwise.
pub fn format_value(space: &PaymentSpace, v: &LatticeValue) -> Result<String, FormatError> {
    match (space, v) {
        (PaymentSpace::FiniteTable(t), LatticeValue::FiniteElem(i)) => {
            Ok(t.name(*i).to_string())
        }
        (_, LatticeValue::ExtReal(x)) => Ok(format_ext_real(x)),
        _ => Err(FormatError::UnsupportedSpace),
    }
}

fn build_space(spec: &SpaceSpec, backend: Backend) -> Result<PaymentSpace, FormatError> {
    match spec {
        SpaceSpec::Interval([lo, hi]) => {
            let lower = parse_ext_real(lo, backend)?;
            let upper = parse_ext_real(hi, backend)?;
            Ok(PaymentSpace::interval(lower, upper)?)
        }
        SpaceSpec::Finite { elements, covers } => {
            // Prefer the complete-lattice table; fall back to a bare poset
            // (usable only by the acyclic solver) when joins are missing.
            match FiniteLattice::from_covers(elements.clone(), covers) {
                Ok(t) => Ok(PaymentSpace::finite(t)),
                Err(_) => {
                    let t = poset_from_covers(elements.clone(), covers)?;
                    Ok(PaymentSpace::finite(t))
                }
            }
        }
    }
}

fn poset_from_covers(
    names: Vec<String>,
    covers: &[(usize, usize)],
) -> Result<FiniteLattice, FormatError> {
    let n = names.len();
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(lo, hi) in covers {
        if lo >= n || hi >= n {
            return Err(FormatError::Lattice(LatticeError::BadMatrix));
        }
        leq[lo][hi] = true;
    }
    // Warshall closure; see `FiniteLattice::from_covers` for the snapshot note.
    for k in 0..n {
        let row_k = leq[k].clone();
        for row in leq.iter_mut() {
            if row[k] {
                for (j, &below) in row_k.iter().enumerate() {
                    if below {
                        row[j] = true;
                    }
                }
            }
        }
    }
    Ok(FiniteLattice::poset(names, leq)?)
}

/// Builds and validates a network from its file form; validation failures
/// abort the load with the violation list.
pub fn file_to_network(
    file: &NetworkFile,
    backend: Backend,
) -> Result<LiabilityNetwork, FormatError> {
    if file.version != FORMAT_VERSION {
        return Err(FormatError::Version(file.version));
    }
    let mut vertices = Vec::new();
    let mut payment_space = BTreeMap::new();
    let mut exogenous = BTreeMap::new();
    let mut aggregator = BTreeMap::new();
    for v in &file.vertices {
        let vid = VertexId(v.id.clone());
        if payment_space.contains_key(&vid) {
            return Err(FormatError::DuplicateId(v.id.clone()));
        }
        let space = build_space(&v.space, backend)?;
        exogenous.insert(vid.clone(), parse_value(&space, &v.exogenous, &v.id, backend)?);
        aggregator.insert(
            vid.clone(),
            match &v.aggregator {
                AggregatorSpec::Sum => AggregatorFn::Sum,
                AggregatorSpec::JoinAll => AggregatorFn::JoinAll,
                AggregatorSpec::SumCapped { cap } => AggregatorFn::SumCapped {
                    cap: parse_ext_real(cap, backend)?,
                },
                AggregatorSpec::Table { entries } => {
                    let mut table = Vec::with_capacity(entries.len());
                    for entry in entries {
                        let mut input = Vec::with_capacity(entry.input.len());
                        for lit in &entry.input {
                            // Incoming payments live in debtor spaces, but for
                            // finite networks element names are resolved
                            // against this vertex's table by convention; the
                            // convention is checked by validate_network.
                            input.push(parse_value(&space, lit, &v.id, backend)?);
                        }
                        table.push((input, parse_value(&space, &entry.output, &v.id, backend)?));
                    }
                    AggregatorFn::Table(table)
                }
            },
        );
        payment_space.insert(vid.clone(), space);
        vertices.push(vid);
    }
    vertices.sort();

    let mut edges = Vec::new();
    let mut liability = BTreeMap::new();
    let mut distributor = BTreeMap::new();
    for e in &file.edges {
        let id = EdgeId(e.id.clone());
        if liability.contains_key(&id) {
            return Err(FormatError::DuplicateId(e.id.clone()));
        }
        let source = VertexId(e.source.clone());
        let target = VertexId(e.target.clone());
        for (end, name) in [(&source, &e.source), (&target, &e.target)] {
            if !payment_space.contains_key(end) {
                return Err(FormatError::UnknownVertex(e.id.clone(), name.clone()));
            }
        }
        let src_space = &payment_space[&source];
        liability.insert(
            id.clone(),
            parse_value(src_space, &e.liability, &e.source, backend)?,
        );
        distributor.insert(
            id.clone(),
            match &e.distributor {
                DistributorSpec::Proportional { total, cap } => DistributorFn::Proportional {
                    total: parse_ext_real(total, backend)?,
                    cap: parse_ext_real(cap, backend)?,
                },
                DistributorSpec::LinearCapped { slope, cap } => DistributorFn::LinearCapped {
                    slope: parse_ext_real(slope, backend)?,
                    cap: parse_ext_real(cap, backend)?,
                },
                DistributorSpec::IdentityCapped { cap } => DistributorFn::IdentityCapped {
                    cap: parse_ext_real(cap, backend)?,
                },
                DistributorSpec::Table { outputs } => {
                    let mut table = Vec::with_capacity(outputs.len());
                    for lit in outputs {
                        table.push(parse_value(src_space, lit, &e.source, backend)?);
                    }
                    DistributorFn::Table(table)
                }
            },
        );
        edges.push(Edge { id, source, target });
    }
    edges.sort_by(|a, b| a.id.cmp(&b.id));

    let net = LiabilityNetwork {
        vertices,
        edges,
        payment_space,
        liability,
        exogenous,
        distributor,
        aggregator,
    };
    let violations = validate_network(&net);
    if !violations.is_empty() {
        let joined = violations
            .iter()
            .map(|v| format!("  - {v}"))
            .collect::<Vec<_>>()
            .join("\n");
        return Err(FormatError::Validation(joined));
    }
    Ok(net)
}

/// Serializes a network back to its canonical file form (vertices and edges
/// in id order).
pub fn network_to_file(
    net: &LiabilityNetwork,
    metric: Option<MetricSpec>,
) -> Result<NetworkFile, FormatError> {
    let mut vertices = Vec::new();
    for v in &net.vertices {
        let space = net.space(v);
        let space_spec = match space {
            PaymentSpace::Interval { lower, upper } => SpaceSpec::Interval([
                format_ext_real(lower),
                format_ext_real(upper),
            ]),
            PaymentSpace::FiniteTable(t) => SpaceSpec::Finite {
                elements: t.names().to_vec(),
                covers: t.covers(),
            },
            _ => return Err(FormatError::UnsupportedSpace),
        };
        let aggregator = match &net.aggregator[v] {
            AggregatorFn::Sum => AggregatorSpec::Sum,
            AggregatorFn::JoinAll => AggregatorSpec::JoinAll,
            AggregatorFn::SumCapped { cap } => AggregatorSpec::SumCapped {
                cap: format_ext_real(cap),
            },
            AggregatorFn::Table(entries) => AggregatorSpec::Table {
                entries: entries
                    .iter()
                    .map(|(input, output)| {
                        Ok(AggregatorEntry {
                            input: input
                                .iter()
                                .map(|x| format_value(space, x))
                                .collect::<Result<_, _>>()?,
                            output: format_value(space, output)?,
                        })
                    })
                    .collect::<Result<_, FormatError>>()?,
            },
        };
        vertices.push(VertexSpec {
            id: v.0.clone(),
            space: space_spec,
            exogenous: format_value(space, &net.exogenous[v])?,
            aggregator,
        });
    }
    vertices.sort_by(|a, b| a.id.cmp(&b.id));

    let mut edges = Vec::new();
    for e in &net.edges {
        let src_space = net.space(&e.source);
        let distributor = match &net.distributor[&e.id] {
            DistributorFn::Proportional { total, cap } => DistributorSpec::Proportional {
                total: format_ext_real(total),
                cap: format_ext_real(cap),
            },
            DistributorFn::LinearCapped { slope, cap } => DistributorSpec::LinearCapped {
                slope: format_ext_real(slope),
                cap: format_ext_real(cap),
            },
            DistributorFn::IdentityCapped { cap } => DistributorSpec::IdentityCapped {
                cap: format_ext_real(cap),
            },
            DistributorFn::Table(outputs) => DistributorSpec::Table {
                outputs: outputs
                    .iter()
                    .map(|x| format_value(src_space, x))
                    .collect::<Result<_, _>>()?,
            },
        };
        edges.push(EdgeSpec {
            id: e.id.0.clone(),
            source: e.source.0.clone(),
            target: e.target.0.clone(),
            liability: format_value(src_space, &net.liability[&e.id])?,
            distributor,
        });
    }
    edges.sort_by(|a, b| a.id.cmp(&b.id));

    Ok(NetworkFile {
        version: FORMAT_VERSION,
        metric: metric.map(|m| metric_name(m).to_string()),
        vertices,
        edges,
    })
}

/// Canonical pretty-printed JSON with a trailing newline; parsing and
/// re-writing a canonical file is byte-identical.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String, FormatError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Parameters {
    pub backend: String,
    pub max_iter: usize,
    pub tol: f64,
    pub metric: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SectionRecord {
    pub x: BTreeMap<String, String>,
    pub p: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportFile {
    pub solver: String,
    pub parameters: Parameters,
    pub x: BTreeMap<String, String>,
    pub p: BTreeMap<String, String>,
    pub iterations: usize,
    pub converged: bool,
    pub extremality: String,
    pub divergence: bool,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub sections: Vec<SectionRecord>,
}

pub fn section_record(
    net: &LiabilityNetwork,
    section: &ClearingSection,
) -> Result<SectionRecord, FormatError> {
    let mut x = BTreeMap::new();
    for v in &net.vertices {
        x.insert(v.0.clone(), format_value(net.space(v), &section.x.0[v])?);
    }
    let mut p = BTreeMap::new();
    for e in &net.edges {
        p.insert(
            e.id.0.clone(),
            format_value(net.space(&e.source), &section.p.0[&e.id])?,
        );
    }
    Ok(SectionRecord { x, p })
}

pub fn solve_report_file(
    net: &LiabilityNetwork,
    section: &ClearingSection,
    report: &SolveReport,
    parameters: Parameters,
) -> Result<ReportFile, FormatError> {
    let record = section_record(net, section)?;
    Ok(ReportFile {
        solver: report.solver.clone(),
        parameters,
        x: record.x,
        p: record.p,
        iterations: report.iterations,
        converged: report.converged,
        extremality: report.extremality.as_str().to_string(),
        divergence: report.divergence,
        violations: Vec::new(),
        sections: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// Compact Eisenberg–Noe instances
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnFile {
    pub assets: BTreeMap<String, String>,
    pub liabilities: Vec<EnLiability>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnLiability {
    pub from: String,
    pub to: String,
    pub amount: String,
}

pub fn en_file_to_instance(
    file: &EnFile,
) -> Result<crate::models::EisenbergNoeInstance, crate::models::ModelError> {
    let vertices: Vec<(&str, &str)> = file
        .assets
        .iter()
        .map(|(k, v)| (k.as_str(), v.as_str()))
        .collect();
    let edges: Vec<(&str, &str, &str)> = file
        .liabilities
        .iter()
        .map(|l| (l.from.as_str(), l.to.as_str(), l.amount.as_str()))
        .collect();
    crate::models::EisenbergNoeInstance::from_parts(&vertices, &edges)
}

// ---------------------------------------------------------------------------
// Invariance manifests
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestFile {
    pub cases: Vec<CaseSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseSpec {
    pub name: String,
    pub source: NetworkFile,
    pub target: NetworkFile,
    /// `"identity"` or `{"scale": "<positive rational literal>"}`.
    pub map: MapSpec,
    /// `"bijection"` or `"inclusion-iso"`.
    pub relation: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSpec {
    Identity,
    Scale(String),
}

pub fn case_from_spec(spec: &CaseSpec, backend: Backend) -> Result<ComparisonCase, FormatError> {
    let map = match &spec.map {
        MapSpec::Identity => ValueMap::Identity,
        MapSpec::Scale(lit) => {
            let v = parse_ext_real(lit, Backend::Rational)?;
            let ExtReal::Finite(Scalar::Rational(alpha)) = v else {
                return Err(FormatError::UnknownComparison(lit.clone()));
            };
            if !alpha.is_positive() {
                return Err(FormatError::UnknownComparison(lit.clone()));
            }
            ValueMap::Scale(alpha)
        }
    };
    let relation = match spec.relation.as_str() {
        "bijection" => ExpectedRelation::SectionBijection,
        "inclusion-iso" => ExpectedRelation::SectionInclusionIso,
        other => return Err(FormatError::UnknownComparison(other.to_string())),
    };
    Ok(ComparisonCase {
        name: spec.name.clone(),
        source: file_to_network(&spec.source, backend)?,
        target: file_to_network(&spec.target, backend)?,
        map,
        relation,
    })
}

/// Scale literal back from a rational, for manifest construction.
pub fn scale_literal(alpha: &BigRational) -> String {
    format_ext_real(&ExtReal::Finite(Scalar::Rational(alpha.clone())))
}
