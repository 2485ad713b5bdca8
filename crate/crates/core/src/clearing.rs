//! The clearing operator `Φ = A ∘ D`, its edge-side dual `Φ̂ = D ∘ A`, the
//! four solvers (ascending/descending Kleene, acyclic propagation, metric
//! contraction), the exhaustive section oracle, and fixed-point transport
//! along the institution-edge duality.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::lattice::{distance, LatticeError, LatticeValue, MetricSpec, PaymentSpace};
use crate::network::{check_section, EdgeId, LiabilityNetwork, VertexId};
use crate::value::{Backend, ExtReal, Scalar};

/// An element of the institution-side product `P = ∏_v P_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct InstitutionState(pub BTreeMap<VertexId, LatticeValue>);

/// An element of the edge-side product `B = ∏_e ↓λ_e`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeState(pub BTreeMap<EdgeId, LatticeValue>);

/// Institution values and edge payments satisfying both clearing equations
/// (or the last iterate, when a report says the solver did not converge).
#[derive(Debug, Clone, PartialEq)]
pub struct ClearingSection {
    pub x: InstitutionState,
    pub p: EdgeState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremality {
    Least,
    Greatest,
    Unique,
    Unknown,
}

impl Extremality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Extremality::Least => "least",
            Extremality::Greatest => "greatest",
            Extremality::Unique => "unique",
            Extremality::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solver: String,
    pub iterations: usize,
    pub converged: bool,
    pub extremality: Extremality,
    /// Set when an ascending chain exhausted the iteration budget without
    /// stabilizing.
    pub divergence: bool,
    /// Final step distance, metric solvers and float-mode Kleene only.
    pub residual: Option<f64>,
    /// When divergence is flagged and every space has a top: whether the
    /// all-top-saturated state passes the section check.
    pub top_saturated_section: Option<bool>,
}

impl SolveReport {
    fn new(solver: &str) -> Self {
        SolveReport {
            solver: solver.to_string(),
            iterations: 0,
            converged: false,
            extremality: Extremality::Unknown,
            divergence: false,
            residual: None,
            top_saturated_section: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("graph contains a directed cycle: {}", .0.iter().map(|v| v.0.as_str()).collect::<Vec<_>>().join(" -> "))]
    CyclicGraph(Vec<VertexId>),
    #[error("descending iteration refused: unbounded top with an uncapped Sum aggregator")]
    UnboundedTop,
    #[error("enumeration requires finite-table payment spaces")]
    NotEnumerable,
    #[error("input state is not a fixed point")]
    NotAFixedPoint,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_iter: usize,
    /// Stopping tolerance, float backend only; the rational backend stops on
    /// exact stabilization.
    pub tol: f64,
    pub metric: MetricSpec,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iter: 10_000,
            tol: 1e-9,
            metric: MetricSpec::L1Abs,
        }
    }
}

/// Collective distribution `D(x)_e = d_e(x_{s(e)})`.
pub fn distribute(net: &LiabilityNetwork, x: &InstitutionState) -> EdgeState {
    let mut p = BTreeMap::new();
    for e in &net.edges {
        p.insert(e.id.clone(), net.distributor[&e.id].eval(&x.0[&e.source]));
    }
    EdgeState(p)
}

/// Collective aggregation `A(p)_v = a_v((p_e)_{t(e)=v})`; vertices with no
/// incoming edges get the aggregator at the empty tuple.
pub fn aggregate(net: &LiabilityNetwork, p: &EdgeState) -> InstitutionState {
    let mut x = BTreeMap::new();
    for v in &net.vertices {
        let incoming: Vec<LatticeValue> = net
            .incoming(v)
            .iter()
            .map(|e| p.0[&e.id].clone())
            .collect();
        x.insert(
            v.clone(),
            net.aggregator[v].eval(net.space(v), &net.exogenous[v], &incoming),
        );
    }
    InstitutionState(x)
}

/// The clearing operator `Φ = A ∘ D`.
pub fn phi(net: &LiabilityNetwork, x: &InstitutionState) -> InstitutionState {
    aggregate(net, &distribute(net, x))
}

/// The edge-side clearing operator `Φ̂ = D ∘ A`.
pub fn phi_dual(net: &LiabilityNetwork, p: &EdgeState) -> EdgeState {
    distribute(net, &aggregate(net, p))
}

impl InstitutionState {
    pub fn bottom(net: &LiabilityNetwork) -> Result<Self, LatticeError> {
        let mut x = BTreeMap::new();
        for v in &net.vertices {
            x.insert(v.clone(), net.space(v).bottom()?);
        }
        Ok(InstitutionState(x))
    }

    pub fn top(net: &LiabilityNetwork) -> Result<Self, LatticeError> {
        let mut x = BTreeMap::new();
        for v in &net.vertices {
            x.insert(v.clone(), net.space(v).top()?);
        }
        Ok(InstitutionState(x))
    }

    pub fn leq(&self, net: &LiabilityNetwork, other: &Self) -> Result<bool, LatticeError> {
        for v in &net.vertices {
            if !net.space(v).leq(&self.0[v], &other.0[v])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn l1_distance(
        &self,
        net: &LiabilityNetwork,
        metric: MetricSpec,
        other: &Self,
    ) -> Result<ExtReal, LatticeError> {
        let mut acc: Option<ExtReal> = None;
        for v in &net.vertices {
            let d = distance(metric, net.space(v), &self.0[v], &other.0[v])?;
            acc = Some(match acc {
                None => d,
                Some(s) => s.add(&d),
            });
        }
        Ok(acc.unwrap_or(ExtReal::from_int(0, Backend::Rational)))
    }
}

fn section_of(net: &LiabilityNetwork, x: InstitutionState) -> ClearingSection {
    let p = distribute(net, &x);
    ClearingSection { x, p }
}

fn exact_mode(net: &LiabilityNetwork) -> bool {
    !net.uses_float_backend()
}

enum Direction {
    Ascending,
    Descending,
}

fn kleene(
    net: &LiabilityNetwork,
    opts: &SolveOptions,
    dir: Direction,
) -> Result<(ClearingSection, SolveReport), SolveError> {
    let (solver, seed, stabilized_label) = match dir {
        Direction::Ascending => ("kleene-least", InstitutionState::bottom(net)?, Extremality::Least),
        Direction::Descending => {
            refuse_unbounded_top(net)?;
            ("kleene-greatest", InstitutionState::top(net)?, Extremality::Greatest)
        }
    };
    let mut report = SolveReport::new(solver);
    let exact = exact_mode(net);
    let mut current = seed;

    for _ in 0..opts.max_iter {
        let next = phi(net, &current);
        report.iterations += 1;
        if exact {
            if next == current {
                report.converged = true;
                report.extremality = stabilized_label;
                return Ok((section_of(net, current), report));
            }
        } else {
            let step = current.l1_distance(net, opts.metric, &next)?;
            report.residual = Some(step.to_f64());
            if step.to_f64() < opts.tol {
                report.converged = true;
                report.extremality = Extremality::Unknown;
                return Ok((section_of(net, next), report));
            }
        }
        current = next;
    }

    // Budget exhausted. Flag divergence when the chain is still strictly
    // moving in its direction, and probe the saturated state.
    let next = phi(net, &current);
    let strictly_moving = match dir {
        Direction::Ascending => current.leq(net, &next)? && next != current,
        Direction::Descending => next.leq(net, &current)? && next != current,
    };
    report.divergence = strictly_moving && matches!(dir, Direction::Ascending);
    if report.divergence {
        if let Ok(top) = InstitutionState::top(net) {
            let p = distribute(net, &top);
            report.top_saturated_section = check_section(net, &top.0, &p.0).ok();
        }
    }
    Ok((section_of(net, current), report))
}

fn refuse_unbounded_top(net: &LiabilityNetwork) -> Result<(), SolveError> {
    let unbounded = net.vertices.iter().any(|v| {
        matches!(
            net.space(v).top(),
            Ok(LatticeValue::ExtReal(ExtReal::Infinity))
        )
    });
    let uncapped = net
        .aggregator
        .values()
        .any(|a| matches!(a, crate::network::AggregatorFn::Sum));
    if unbounded && uncapped {
        return Err(SolveError::UnboundedTop);
    }
    Ok(())
}

/// Ascending Kleene iteration from the lattice bottom toward the least
/// clearing section.
pub fn kleene_least(
    net: &LiabilityNetwork,
    opts: &SolveOptions,
) -> Result<(ClearingSection, SolveReport), SolveError> {
    kleene(net, opts, Direction::Ascending)
}

/// Descending Kleene iteration from the lattice top toward the greatest
/// clearing section. Refuses unbounded tops combined with uncapped Sum
/// aggregators, where filtered-infimum preservation is not guaranteed.
pub fn kleene_greatest(
    net: &LiabilityNetwork,
    opts: &SolveOptions,
) -> Result<(ClearingSection, SolveReport), SolveError> {
    kleene(net, opts, Direction::Descending)
}

/// Longest directed path length (in edges) and a topological witness, or a
/// cycle.
fn longest_path(net: &LiabilityNetwork) -> Result<usize, SolveError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let idx: BTreeMap<&VertexId, usize> =
        net.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut marks = vec![Mark::White; net.vertices.len()];
    let mut depth = vec![0usize; net.vertices.len()];
    let mut stack_trace: Vec<usize> = Vec::new();

    fn visit(
        net: &LiabilityNetwork,
        idx: &BTreeMap<&VertexId, usize>,
        marks: &mut [Mark],
        depth: &mut [usize],
        trace: &mut Vec<usize>,
        u: usize,
    ) -> Result<usize, SolveError> {
        match marks[u] {
            Mark::Black => return Ok(depth[u]),
            Mark::Grey => {
                // Found a cycle; reconstruct it from the trace.
                let start = trace.iter().position(|&w| w == u).unwrap_or(0);
                let mut cycle: Vec<VertexId> = trace[start..]
                    .iter()
                    .map(|&w| net.vertices[w].clone())
                    .collect();
                cycle.push(net.vertices[u].clone());
                return Err(SolveError::CyclicGraph(cycle));
            }
            Mark::White => {}
        }
        marks[u] = Mark::Grey;
        trace.push(u);
        let mut best = 0usize;
        for e in net.outgoing(&net.vertices[u]) {
            let w = idx[&e.target];
            best = best.max(1 + visit(net, idx, marks, depth, trace, w)?);
        }
        trace.pop();
        marks[u] = Mark::Black;
        depth[u] = best;
        Ok(best)
    }

    let mut r = 0usize;
    for u in 0..net.vertices.len() {
        r = r.max(visit(net, &idx, &mut marks, &mut depth, &mut stack_trace, u)?);
    }
    Ok(r)
}

/// Clearing on acyclic graphs: applies `Φ` exactly `r + 1` times to a fixed
/// seed, where `r` is the longest directed path length. Works on any payment
/// spaces that support evaluation; no order or metric is needed beyond what
/// the seed requires. Bottom is the seed when every space has one, otherwise
/// the exogenous values.
pub fn acyclic_solve(
    net: &LiabilityNetwork,
) -> Result<(ClearingSection, SolveReport), SolveError> {
    let seed = InstitutionState::bottom(net).unwrap_or_else(|_| {
        InstitutionState(
            net.vertices
                .iter()
                .map(|v| (v.clone(), net.exogenous[v].clone()))
                .collect(),
        )
    });
    acyclic_solve_from(net, &seed)
}

/// [`acyclic_solve`] from an explicit seed; the result is seed-independent
/// because `Φ^{r+1}` is constant on acyclic networks.
pub fn acyclic_solve_from(
    net: &LiabilityNetwork,
    seed: &InstitutionState,
) -> Result<(ClearingSection, SolveReport), SolveError> {
    let r = longest_path(net)?;
    let mut report = SolveReport::new("acyclic");
    let mut current = seed.clone();
    for _ in 0..=r {
        current = phi(net, &current);
        report.iterations += 1;
    }
    report.converged = true;
    report.extremality = Extremality::Unique;
    Ok((section_of(net, current), report))
}

/// Structural ℓ¹ Lipschitz bound `max_w Σ_{s(e)=w} L_{t(e)} · k_e`, or `None`
/// when any distributor or aggregator spec lacks a constant.
pub fn lipschitz_bound(net: &LiabilityNetwork, metric: MetricSpec) -> Option<ExtReal> {
    if metric != MetricSpec::L1Abs {
        return None;
    }
    let mut best: Option<ExtReal> = Some(ExtReal::from_int(0, Backend::Rational));
    for w in &net.vertices {
        let mut sum = ExtReal::from_int(0, Backend::Rational);
        for e in net.outgoing(w) {
            let k = net.distributor[&e.id].lipschitz()?;
            let l = net.aggregator[&e.target].lipschitz_per_arg()?;
            sum = sum.add(&l.mul(&k));
        }
        best = Some(match best {
            None => sum,
            Some(b) => b.max(&sum),
        });
    }
    best
}

/// Picard iteration from `seed` under the metric. With a certified
/// contraction constant `k < 1` from [`lipschitz_bound`], floats stop when
/// the step is below `tol·(1−k)/k` (so the true error is below `tol`) and the
/// result is marked unique. The rational backend is tolerance-free: it stops
/// only on an exactly verified fixed point, found either by stabilization or
/// by Aitken extrapolation of the iterate sequence followed by an exact
/// `Φ(c) = c` check.
pub fn banach_solve(
    net: &LiabilityNetwork,
    metric: MetricSpec,
    opts: &SolveOptions,
    seed: &InstitutionState,
) -> Result<(ClearingSection, SolveReport), SolveError> {
    let mut report = SolveReport::new("banach");
    let k = lipschitz_bound(net, metric);
    let certified = matches!(&k, Some(k) if k.compare(&ExtReal::from_int(1, Backend::Rational)) == std::cmp::Ordering::Less);
    let exact = exact_mode(net);

    let first = phi(net, seed);
    if first == *seed {
        report.converged = true;
        report.iterations = 0;
        report.extremality = if certified {
            Extremality::Unique
        } else {
            Extremality::Unknown
        };
        report.residual = Some(0.0);
        return Ok((section_of(net, seed.clone()), report));
    }

    let threshold = if certified {
        let kf = k.as_ref().unwrap().to_f64();
        opts.tol * (1.0 - kf) / kf.max(f64::MIN_POSITIVE)
    } else {
        opts.tol
    };

    let mut history: Vec<InstitutionState> = vec![seed.clone(), first.clone()];
    let mut current = first;
    report.iterations = 1;

    for _ in 1..opts.max_iter {
        if exact {
            // Exact stabilization.
            if history.len() >= 2 && history[history.len() - 1] == history[history.len() - 2] {
                report.converged = true;
                report.extremality = if certified {
                    Extremality::Unique
                } else {
                    Extremality::Unknown
                };
                report.residual = Some(0.0);
                return Ok((section_of(net, current), report));
            }
            // Aitken candidates, verified exactly before acceptance.
            for stride in [1usize, 2] {
                if let Some(candidate) = aitken_candidate(net, &history, stride) {
                    let verified = phi(net, &candidate) == candidate;
                    report.iterations += 1;
                    if verified {
                        report.converged = true;
                        report.extremality = if certified {
                            Extremality::Unique
                        } else {
                            Extremality::Unknown
                        };
                        report.residual = Some(0.0);
                        return Ok((section_of(net, candidate), report));
                    }
                }
            }
        } else {
            let step = history[history.len() - 2]
                .l1_distance(net, metric, &current)?
                .to_f64();
            report.residual = Some(step);
            if step < threshold {
                report.converged = true;
                report.extremality = if certified {
                    Extremality::Unique
                } else {
                    Extremality::Unknown
                };
                return Ok((section_of(net, current), report));
            }
        }
        let next = phi(net, &current);
        report.iterations += 1;
        history.push(next.clone());
        if history.len() > 8 {
            history.remove(0);
        }
        current = next;
    }
    Ok((section_of(net, current), report))
}

/// Coordinatewise Aitken Δ² extrapolation over iterates spaced `stride`
/// apart; exact rationals only. Returns `None` when any second difference
/// vanishes or a coordinate is not a finite rational.
fn aitken_candidate(
    net: &LiabilityNetwork,
    history: &[InstitutionState],
    stride: usize,
) -> Option<InstitutionState> {
    if history.len() < 2 * stride + 1 {
        return None;
    }
    let n = history.len();
    let x0 = &history[n - 1 - 2 * stride];
    let x1 = &history[n - 1 - stride];
    let x2 = &history[n - 1];
    let mut out = BTreeMap::new();
    for v in &net.vertices {
        let a = rational_coord(&x0.0[v])?;
        let b = rational_coord(&x1.0[v])?;
        let c = rational_coord(&x2.0[v])?;
        let d1 = &b - &a;
        let d2 = &c - &b;
        let denom = &d2 - &d1;
        let value = if d1.is_zero() && d2.is_zero() {
            a
        } else if denom.is_zero() {
            return None;
        } else {
            &a - &d1 * &d1 / denom
        };
        if value < BigRational::from_integer(BigInt::from(0)) {
            return None;
        }
        out.insert(
            v.clone(),
            LatticeValue::ExtReal(ExtReal::Finite(Scalar::Rational(value))),
        );
    }
    Some(InstitutionState(out))
}

fn rational_coord(v: &LatticeValue) -> Option<BigRational> {
    match v {
        LatticeValue::ExtReal(ExtReal::Finite(Scalar::Rational(r))) => Some(r.clone()),
        _ => None,
    }
}

/// Exhaustive oracle: every fixed point of `Φ` over finite-table spaces,
/// paired with its edge payments, in enumeration order.
pub fn enumerate_sections(net: &LiabilityNetwork) -> Result<Vec<ClearingSection>, SolveError> {
    let mut factor_elems = Vec::with_capacity(net.vertices.len());
    for v in &net.vertices {
        match net.space(v) {
            PaymentSpace::Interval { .. } => return Err(SolveError::NotEnumerable),
            s => factor_elems.push(s.enumerate()?),
        }
    }
    let mut out = Vec::new();
    for combo in crate::network::cartesian(&factor_elems) {
        let x = InstitutionState(
            net.vertices
                .iter()
                .cloned()
                .zip(combo)
                .collect(),
        );
        if phi(net, &x) == x {
            out.push(section_of(net, x));
        }
    }
    Ok(out)
}

/// Transports a fixed point of `Φ` to the edge side: `D(x)` is a fixed point
/// of `Φ̂`. Errors when the input is not a fixed point.
pub fn transport_to_edges(
    net: &LiabilityNetwork,
    x: &InstitutionState,
) -> Result<EdgeState, SolveError> {
    if phi(net, x) != *x {
        return Err(SolveError::NotAFixedPoint);
    }
    Ok(distribute(net, x))
}

/// Transports a fixed point of `Φ̂` back to the institution side via `A`.
pub fn transport_to_institutions(
    net: &LiabilityNetwork,
    p: &EdgeState,
) -> Result<InstitutionState, SolveError> {
    if phi_dual(net, p) != *p {
        return Err(SolveError::NotAFixedPoint);
    }
    Ok(aggregate(net, p))
}
