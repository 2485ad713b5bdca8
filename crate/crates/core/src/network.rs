//! The liability-network data model: decorated directed graphs with payment
//! spaces, liabilities, exogenous resources, distributors, and aggregators,
//! plus structural validation and the section checker.

use std::collections::BTreeMap;
use std::fmt;

use crate::lattice::{LatticeValue, PaymentSpace, PrincipalIdeal};
use crate::value::{Backend, ExtReal};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub String);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub String);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_string())
    }
}

impl From<&str> for EdgeId {
    fn from(s: &str) -> Self {
        EdgeId(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
}

/// Closed-form distributor specification, evaluated as a pure monotone map
/// from the source payment space into the principal ideal of the liability.
///
/// Closed forms (rather than opaque callbacks) let monotonicity and codomain
/// containment be audited structurally on interval spaces, where exhaustive
/// checking is impossible.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributorFn {
    /// Proportional payment `min{x * cap / total, cap}`; identically zero
    /// when `total` is zero.
    Proportional { total: ExtReal, cap: ExtReal },
    /// `min{slope * x, cap}` with nonnegative slope.
    LinearCapped { slope: ExtReal, cap: ExtReal },
    /// `min{x, cap}`.
    IdentityCapped { cap: ExtReal },
    /// Explicit finite map: output for each element of the source table, in
    /// element order.
    Table(Vec<LatticeValue>),
}

impl DistributorFn {
    pub fn eval(&self, x: &LatticeValue) -> LatticeValue {
        match self {
            DistributorFn::Proportional { total, cap } => {
                let x = expect_ext(x);
                if total.is_zero() {
                    return LatticeValue::ExtReal(zero_like(cap, x));
                }
                LatticeValue::ExtReal(x.mul(cap).div(total).min(cap))
            }
            DistributorFn::LinearCapped { slope, cap } => {
                let x = expect_ext(x);
                LatticeValue::ExtReal(slope.mul(x).min(cap))
            }
            DistributorFn::IdentityCapped { cap } => {
                LatticeValue::ExtReal(expect_ext(x).min(cap))
            }
            DistributorFn::Table(outputs) => {
                let i = x.as_finite().expect("table distributor on finite input");
                outputs[i].clone()
            }
        }
    }

    /// Structural Lipschitz constant, when the spec carries one.
    pub fn lipschitz(&self) -> Option<ExtReal> {
        match self {
            DistributorFn::Proportional { total, cap } => {
                if total.is_zero() {
                    Some(zero_like(cap, cap))
                } else {
                    Some(cap.div(total))
                }
            }
            DistributorFn::LinearCapped { slope, .. } => Some(slope.clone()),
            DistributorFn::IdentityCapped { cap } => Some(one_like(cap)),
            DistributorFn::Table(_) => None,
        }
    }
}

fn expect_ext(x: &LatticeValue) -> &ExtReal {
    x.as_ext_real().expect("scalar distributor on interval input")
}

fn zero_like(a: &ExtReal, b: &ExtReal) -> ExtReal {
    let backend = a.backend().or(b.backend()).unwrap_or(Backend::Rational);
    ExtReal::zero(backend)
}

/// Closed-form aggregator specification: a monotone map of the exogenous
/// resource and the tuple of incoming payments (ordered by edge id).
#[derive(Debug, Clone, PartialEq)]
pub enum AggregatorFn {
    /// `min{cap, r + Σ p}`.
    SumCapped { cap: ExtReal },
    /// `r + Σ p`, uncapped.
    Sum,
    /// Lattice join of the exogenous resource and every incoming payment,
    /// taken in the vertex's payment space.
    JoinAll,
    /// Explicit finite map from the incoming tuple to a vertex value, with
    /// the exogenous resource already curried in. Entries pair the incoming
    /// tuple (ordered by edge id) with the output.
    Table(Vec<(Vec<LatticeValue>, LatticeValue)>),
}

impl AggregatorFn {
    /// Evaluates the aggregator at exogenous resource `r` and incoming
    /// payments `incoming`; `space` is the vertex payment space (needed for
    /// joins).
    pub fn eval(
        &self,
        space: &PaymentSpace,
        r: &LatticeValue,
        incoming: &[LatticeValue],
    ) -> LatticeValue {
        match self {
            AggregatorFn::SumCapped { cap } => {
                let mut acc = expect_ext(r).clone();
                for p in incoming {
                    acc = acc.add(expect_ext(p));
                }
                LatticeValue::ExtReal(cap.min(&acc))
            }
            AggregatorFn::Sum => {
                let mut acc = expect_ext(r).clone();
                for p in incoming {
                    acc = acc.add(expect_ext(p));
                }
                LatticeValue::ExtReal(acc)
            }
            AggregatorFn::JoinAll => {
                let mut acc = r.clone();
                for p in incoming {
                    acc = space
                        .join(&acc, p)
                        .expect("join-all aggregator over mismatched spaces");
                }
                acc
            }
            AggregatorFn::Table(entries) => entries
                .iter()
                .find(|(input, _)| input.as_slice() == incoming)
                .map(|(_, out)| out.clone())
                .expect("aggregator table missing an incoming tuple"),
        }
    }

    /// Per-argument Lipschitz constant under the ℓ¹ metric, when available.
    pub fn lipschitz_per_arg(&self) -> Option<ExtReal> {
        match self {
            AggregatorFn::SumCapped { cap } => Some(one_like(cap)),
            AggregatorFn::Sum => Some(ExtReal::from_int(1, Backend::Rational)),
            AggregatorFn::JoinAll | AggregatorFn::Table(_) => None,
        }
    }
}

fn one_like(a: &ExtReal) -> ExtReal {
    ExtReal::from_int(1, a.backend().unwrap_or(Backend::Rational))
}

/// A decorated liability network over concrete payment spaces.
#[derive(Debug, Clone)]
pub struct LiabilityNetwork {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub payment_space: BTreeMap<VertexId, PaymentSpace>,
    pub liability: BTreeMap<EdgeId, LatticeValue>,
    pub exogenous: BTreeMap<VertexId, LatticeValue>,
    pub distributor: BTreeMap<EdgeId, DistributorFn>,
    pub aggregator: BTreeMap<VertexId, AggregatorFn>,
}

impl LiabilityNetwork {
    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| &e.id == id)
    }

    /// Incoming edges of `v`, ordered by edge id.
    pub fn incoming(&self, v: &VertexId) -> Vec<&Edge> {
        let mut edges: Vec<&Edge> = self.edges.iter().filter(|e| &e.target == v).collect();
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        edges
    }

    /// Outgoing edges of `v`, ordered by edge id.
    pub fn outgoing(&self, v: &VertexId) -> Vec<&Edge> {
        let mut edges: Vec<&Edge> = self.edges.iter().filter(|e| &e.source == v).collect();
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        edges
    }

    pub fn space(&self, v: &VertexId) -> &PaymentSpace {
        &self.payment_space[v]
    }

    /// The principal ideal bounding payments along `e`.
    pub fn edge_ideal(&self, e: &EdgeId) -> PrincipalIdeal {
        let edge = self.edge(e).expect("unknown edge id");
        self.payment_space[&edge.source]
            .principal_ideal(&self.liability[e])
            .expect("liability validated against source space")
    }

    /// True when any extended-real datum in the network uses the float
    /// backend.
    pub fn uses_float_backend(&self) -> bool {
        let is_float = |v: &LatticeValue| {
            matches!(
                v.as_ext_real().and_then(ExtReal::backend),
                Some(Backend::Float)
            )
        };
        self.liability.values().any(is_float) || self.exogenous.values().any(is_float)
    }
}

/// A single validation failure, naming the offending cell and the broken law.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    LiabilityOutsideSpace { edge: EdgeId },
    ExogenousOutsideSpace { vertex: VertexId },
    DistributorCodomain { edge: EdgeId, input: String },
    DistributorNotMonotone { edge: EdgeId },
    AggregatorNotMonotone { vertex: VertexId },
    AggregatorTableIncomplete { vertex: VertexId },
    DistributorTableArity { edge: EdgeId },
    MissingDecoration { cell: String },
    NegativeSlope { edge: EdgeId },
    CapMismatch { edge: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LiabilityOutsideSpace { edge } => {
                write!(f, "edge {edge}: liability lies outside the source payment space")
            }
            Violation::ExogenousOutsideSpace { vertex } => {
                write!(f, "vertex {vertex}: exogenous resource lies outside the payment space")
            }
            Violation::DistributorCodomain { edge, input } => write!(
                f,
                "edge {edge}: distributor output at {input} escapes the liability ideal"
            ),
            Violation::DistributorNotMonotone { edge } => {
                write!(f, "edge {edge}: distributor is not monotone")
            }
            Violation::AggregatorNotMonotone { vertex } => {
                write!(f, "vertex {vertex}: aggregator is not monotone")
            }
            Violation::AggregatorTableIncomplete { vertex } => {
                write!(f, "vertex {vertex}: aggregator table does not cover every incoming tuple")
            }
            Violation::DistributorTableArity { edge } => {
                write!(f, "edge {edge}: distributor table size does not match the source space")
            }
            Violation::MissingDecoration { cell } => {
                write!(f, "{cell}: missing decoration")
            }
            Violation::NegativeSlope { edge } => {
                write!(f, "edge {edge}: negative distributor slope")
            }
            Violation::CapMismatch { edge } => {
                write!(f, "edge {edge}: distributor cap differs from the liability")
            }
        }
    }
}

/// Checks every network invariant: decorations present, liabilities and
/// exogenous resources in their spaces, distributor outputs inside the
/// liability ideal, and monotonicity of distributors and aggregators
/// (exhaustive on finite spaces, structural on closed forms).
pub fn validate_network(net: &LiabilityNetwork) -> Vec<Violation> {
    let mut out = Vec::new();

    for v in &net.vertices {
        if !net.payment_space.contains_key(v) {
            out.push(Violation::MissingDecoration {
                cell: format!("vertex {v} payment space"),
            });
            continue;
        }
        let space = &net.payment_space[v];
        match net.exogenous.get(v) {
            None => out.push(Violation::MissingDecoration {
                cell: format!("vertex {v} exogenous resource"),
            }),
            Some(r) => {
                if !space.contains(r).unwrap_or(false) {
                    out.push(Violation::ExogenousOutsideSpace { vertex: v.clone() });
                }
            }
        }
        if !net.aggregator.contains_key(v) {
            out.push(Violation::MissingDecoration {
                cell: format!("vertex {v} aggregator"),
            });
        }
    }

    for edge in &net.edges {
        let Some(space) = net.payment_space.get(&edge.source) else {
            continue;
        };
        let Some(liab) = net.liability.get(&edge.id) else {
            out.push(Violation::MissingDecoration {
                cell: format!("edge {} liability", edge.id),
            });
            continue;
        };
        if !space.contains(liab).unwrap_or(false) {
            out.push(Violation::LiabilityOutsideSpace { edge: edge.id.clone() });
            continue;
        }
        let Some(dist) = net.distributor.get(&edge.id) else {
            out.push(Violation::MissingDecoration {
                cell: format!("edge {} distributor", edge.id),
            });
            continue;
        };
        check_distributor(edge, space, liab, dist, &mut out);
    }

    for v in &net.vertices {
        let (Some(space), Some(agg)) = (net.payment_space.get(v), net.aggregator.get(v)) else {
            continue;
        };
        check_aggregator(net, v, space, agg, &mut out);
    }

    out
}

fn check_distributor(
    edge: &Edge,
    space: &PaymentSpace,
    liab: &LatticeValue,
    dist: &DistributorFn,
    out: &mut Vec<Violation>,
) {
    match dist {
        DistributorFn::Proportional { cap, .. }
        | DistributorFn::LinearCapped { cap, .. }
        | DistributorFn::IdentityCapped { cap } => {
            // Structural audit: the closed forms are monotone by construction
            // (slopes are nonnegative by representation) and capped at `cap`;
            // containment in the liability ideal needs cap == liability.
            if LatticeValue::ExtReal(cap.clone()) != *liab {
                out.push(Violation::CapMismatch { edge: edge.id.clone() });
            }
        }
        DistributorFn::Table(outputs) => {
            let Ok(elems) = space.enumerate() else {
                out.push(Violation::DistributorTableArity { edge: edge.id.clone() });
                return;
            };
            if outputs.len() != elems.len() {
                out.push(Violation::DistributorTableArity { edge: edge.id.clone() });
                return;
            }
            let ideal = match space.principal_ideal(liab) {
                Ok(i) => i,
                Err(_) => return,
            };
            for (x, y) in elems.iter().zip(outputs) {
                if !ideal.contains(y).unwrap_or(false) {
                    out.push(Violation::DistributorCodomain {
                        edge: edge.id.clone(),
                        input: x.to_string(),
                    });
                }
            }
            // Exhaustive monotonicity check over the finite source space.
            let mut monotone = true;
            for (i, a) in elems.iter().enumerate() {
                for (j, b) in elems.iter().enumerate() {
                    if space.leq(a, b).unwrap_or(false)
                        && !space.leq(&outputs[i], &outputs[j]).unwrap_or(false)
                    {
                        monotone = false;
                    }
                }
            }
            if !monotone {
                out.push(Violation::DistributorNotMonotone { edge: edge.id.clone() });
            }
        }
    }
}

fn check_aggregator(
    net: &LiabilityNetwork,
    v: &VertexId,
    space: &PaymentSpace,
    agg: &AggregatorFn,
    out: &mut Vec<Violation>,
) {
    let AggregatorFn::Table(entries) = agg else {
        // SumCapped, Sum, and JoinAll are monotone in every argument by
        // construction.
        return;
    };
    // Domain: product of the incoming edges' liability ideals.
    let incoming = net.incoming(v);
    let mut factor_elems: Vec<Vec<LatticeValue>> = Vec::new();
    for e in &incoming {
        match net.edge_ideal(&e.id).as_space().enumerate() {
            Ok(elems) => factor_elems.push(elems),
            Err(_) => return, // interval-kind incoming space: table unusable, arity caught at eval
        }
    }
    let tuples = cartesian(&factor_elems);
    let mut outputs = Vec::with_capacity(tuples.len());
    for t in &tuples {
        match entries.iter().find(|(input, _)| input == t) {
            Some((_, y)) => outputs.push(y.clone()),
            None => {
                out.push(Violation::AggregatorTableIncomplete { vertex: v.clone() });
                return;
            }
        }
    }
    let mut monotone = true;
    for (i, a) in tuples.iter().enumerate() {
        for (j, b) in tuples.iter().enumerate() {
            if tuple_leq(net, &incoming, a, b)
                && !space.leq(&outputs[i], &outputs[j]).unwrap_or(false)
            {
                monotone = false;
            }
        }
    }
    if !monotone {
        out.push(Violation::AggregatorNotMonotone { vertex: v.clone() });
    }
}

fn tuple_leq(
    net: &LiabilityNetwork,
    incoming: &[&Edge],
    a: &[LatticeValue],
    b: &[LatticeValue],
) -> bool {
    incoming.iter().enumerate().all(|(k, e)| {
        net.space(&e.source).leq(&a[k], &b[k]).unwrap_or(false)
    })
}

pub(crate) fn cartesian(factors: &[Vec<LatticeValue>]) -> Vec<Vec<LatticeValue>> {
    let mut out = vec![Vec::new()];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for prefix in &out {
            for e in f {
                let mut t = prefix.clone();
                t.push(e.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// True iff the two clearing equations hold at every edge and vertex:
/// `p_e = d_e(x_{s(e)})` and `x_v = a_v((p_e)_{t(e)=v})`. Equality is exact
/// under the rational backend and tolerance-based under floats.
pub fn check_section(
    net: &LiabilityNetwork,
    x: &BTreeMap<VertexId, LatticeValue>,
    p: &BTreeMap<EdgeId, LatticeValue>,
) -> Result<bool, crate::lattice::LatticeError> {
    for v in &net.vertices {
        let xv = x
            .get(v)
            .ok_or_else(|| crate::lattice::LatticeError::NotInSpace(format!("missing x[{v}]")))?;
        if !net.space(v).contains(xv)? {
            return Err(crate::lattice::LatticeError::NotInSpace(format!(
                "x[{v}] = {xv}"
            )));
        }
    }
    for e in &net.edges {
        let pe = p.get(&e.id).ok_or_else(|| {
            crate::lattice::LatticeError::NotInSpace(format!("missing p[{}]", e.id))
        })?;
        if !net.edge_ideal(&e.id).contains(pe)? {
            return Err(crate::lattice::LatticeError::NotInSpace(format!(
                "p[{}] = {pe}",
                e.id
            )));
        }
    }
    for e in &net.edges {
        let expected = net.distributor[&e.id].eval(&x[&e.source]);
        if p[&e.id] != expected {
            return Ok(false);
        }
    }
    for v in &net.vertices {
        let incoming: Vec<LatticeValue> = net
            .incoming(v)
            .iter()
            .map(|e| p[&e.id].clone())
            .collect();
        let expected = net.aggregator[v].eval(net.space(v), &net.exogenous[v], &incoming);
        if x[v] != expected {
            return Ok(false);
        }
    }
    Ok(true)
}
