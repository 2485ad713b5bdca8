//! The liability hypergraph and liability sheaf derived from a network.
//!
//! The hypergraph separates distribution from collection: every institution
//! gets one distribution hyperedge fanning out to its creditors' payment
//! vertices and one collection hyperedge gathering its debtors' payment
//! vertices. The sheaf decorates cells with stalks (payment spaces and
//! liability ideals) and incidences with restriction maps (identity,
//! distributors, projections, partial aggregators).

use std::collections::BTreeMap;

use crate::lattice::{LatticeValue, PaymentSpace};
use crate::network::{EdgeId, LiabilityNetwork, VertexId};

/// A cell of the liability hypergraph: an institution vertex, a payment
/// vertex, or one of the two hyperedges attached to an institution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cell {
    Institution(VertexId),
    Payment(EdgeId),
    Distribution(VertexId),
    Collection(VertexId),
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Institution(v) => write!(f, "{v}"),
            Cell::Payment(e) => write!(f, "{e}*"),
            Cell::Distribution(v) => write!(f, "h_{v}^dis"),
            Cell::Collection(v) => write!(f, "h_{v}^col"),
        }
    }
}

/// A hyperedge with its source and target vertex sets (targets ordered by
/// edge id for determinism).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub cell: Cell,
    pub sources: Vec<Cell>,
    pub targets: Vec<Cell>,
}

/// The derived hypergraph: institution vertices, one payment vertex per
/// edge, and one distribution plus one collection hyperedge per institution.
#[derive(Debug, Clone)]
pub struct LiabilityHypergraph {
    pub institution_vertices: Vec<VertexId>,
    pub payment_vertices: Vec<EdgeId>,
    pub hyperedges: Vec<Hyperedge>,
}

/// Builds the liability hypergraph of a validated network. Targets are
/// ordered by edge id.
pub fn build_hypergraph(net: &LiabilityNetwork) -> LiabilityHypergraph {
    let mut payment_vertices: Vec<EdgeId> = net.edges.iter().map(|e| e.id.clone()).collect();
    payment_vertices.sort();

    let mut hyperedges = Vec::with_capacity(2 * net.vertices.len());
    for v in &net.vertices {
        hyperedges.push(Hyperedge {
            cell: Cell::Distribution(v.clone()),
            sources: vec![Cell::Institution(v.clone())],
            targets: net
                .outgoing(v)
                .iter()
                .map(|e| Cell::Payment(e.id.clone()))
                .collect(),
        });
    }
    for v in &net.vertices {
        let mut targets: Vec<Cell> = net
            .incoming(v)
            .iter()
            .map(|e| Cell::Payment(e.id.clone()))
            .collect();
        targets.push(Cell::Institution(v.clone()));
        hyperedges.push(Hyperedge {
            cell: Cell::Collection(v.clone()),
            sources: Vec::new(),
            targets,
        });
    }

    LiabilityHypergraph {
        institution_vertices: net.vertices.clone(),
        payment_vertices,
        hyperedges,
    }
}

/// One arrow per incidence of a hyperedge with a vertex; no composites, no
/// duplicates. A cell incident as both source and target yields one arrow.
pub fn incidence_arrows(h: &LiabilityHypergraph) -> Vec<(Cell, Cell)> {
    let mut arrows = Vec::new();
    for he in &h.hyperedges {
        let mut seen: Vec<&Cell> = Vec::new();
        for c in he.sources.iter().chain(&he.targets) {
            if !seen.contains(&c) {
                seen.push(c);
                arrows.push((he.cell.clone(), c.clone()));
            }
        }
    }
    arrows
}

/// A restriction map of the liability sheaf, applied by dispatching back to
/// the network's decorations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Restriction {
    /// `h_v^dis -> v`.
    Identity,
    /// `h_v^dis -> e*`: the distributor `d_e`.
    Distributor(EdgeId),
    /// `h_v^col -> e*`: projection from the incoming-payment product.
    Projection(EdgeId),
    /// `h_v^col -> v`: the partial aggregator, the binary aggregator curried
    /// at the exogenous resource.
    PartialAggregator(VertexId),
}

/// Stalks and restriction maps over the incidence category.
#[derive(Debug, Clone)]
pub struct LiabilitySheaf {
    pub stalk: BTreeMap<Cell, PaymentSpace>,
    pub restriction: BTreeMap<(Cell, Cell), Restriction>,
}

impl LiabilitySheaf {
    /// Applies the restriction map along `arrow` to a stalk element.
    pub fn apply(
        &self,
        net: &LiabilityNetwork,
        arrow: &(Cell, Cell),
        value: &LatticeValue,
    ) -> LatticeValue {
        match self.restriction.get(arrow).expect("unknown incidence arrow") {
            Restriction::Identity => value.clone(),
            Restriction::Distributor(e) => net.distributor[e].eval(value),
            Restriction::Projection(e) => {
                let Cell::Collection(v) = &arrow.0 else {
                    panic!("projection from a non-collection cell");
                };
                let LatticeValue::Tuple(parts) = value else {
                    panic!("projection applied to a non-tuple");
                };
                let idx = net
                    .incoming(v)
                    .iter()
                    .position(|edge| &edge.id == e)
                    .expect("edge not incoming at collection cell");
                parts[idx].clone()
            }
            Restriction::PartialAggregator(v) => {
                let LatticeValue::Tuple(parts) = value else {
                    panic!("aggregation applied to a non-tuple");
                };
                net.aggregator[v].eval(net.space(v), &net.exogenous[v], parts)
            }
        }
    }
}

/// Builds the liability sheaf: stalks `P_v` at institutions, `↓λ_e` at
/// payment vertices, `P_v` at distribution hyperedges, and the product of
/// incoming ideals at collection hyperedges.
pub fn build_sheaf(net: &LiabilityNetwork) -> LiabilitySheaf {
    let hyper = build_hypergraph(net);
    let mut stalk = BTreeMap::new();
    let mut restriction = BTreeMap::new();

    for v in &hyper.institution_vertices {
        stalk.insert(Cell::Institution(v.clone()), net.space(v).clone());
        stalk.insert(Cell::Distribution(v.clone()), net.space(v).clone());
        let incoming_ideals: Vec<PaymentSpace> = net
            .incoming(v)
            .iter()
            .map(|e| net.edge_ideal(&e.id).as_space())
            .collect();
        stalk.insert(
            Cell::Collection(v.clone()),
            PaymentSpace::product(incoming_ideals),
        );
    }
    for e in &hyper.payment_vertices {
        stalk.insert(Cell::Payment(e.clone()), net.edge_ideal(e).as_space());
    }

    for he in &hyper.hyperedges {
        match &he.cell {
            Cell::Distribution(v) => {
                restriction.insert(
                    (he.cell.clone(), Cell::Institution(v.clone())),
                    Restriction::Identity,
                );
                for t in &he.targets {
                    if let Cell::Payment(e) = t {
                        restriction.insert(
                            (he.cell.clone(), t.clone()),
                            Restriction::Distributor(e.clone()),
                        );
                    }
                }
            }
            Cell::Collection(v) => {
                for t in &he.targets {
                    match t {
                        Cell::Payment(e) => {
                            restriction.insert(
                                (he.cell.clone(), t.clone()),
                                Restriction::Projection(e.clone()),
                            );
                        }
                        Cell::Institution(_) => {
                            restriction.insert(
                                (he.cell.clone(), t.clone()),
                                Restriction::PartialAggregator(v.clone()),
                            );
                        }
                        _ => {}
                    }
                }
            }
            _ => {}
        }
    }

    LiabilitySheaf { stalk, restriction }
}
