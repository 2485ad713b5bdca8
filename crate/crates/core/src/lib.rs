//! Clearing engine for decorated liability networks.
//!
//! A liability network is a directed graph of institutions and obligations
//! decorated with payment spaces, liability bounds, exogenous resources,
//! distributor maps, and aggregator maps. This crate builds the derived
//! liability hypergraph and sheaf, assembles the factored clearing operator
//! (collective distribution followed by collective aggregation), and computes
//! clearing sections by Kleene iteration, acyclic forward propagation,
//! contraction iteration, and exhaustive enumeration, with Eisenberg–Noe and
//! lattice-liability-network front-ends and a presentation-invariance
//! verifier.

pub mod clearing;
pub mod format;
pub mod hypergraph;
pub mod invariance;
pub mod lattice;
pub mod models;
pub mod network;
pub mod value;

pub use clearing::{
    acyclic_solve, acyclic_solve_from, aggregate, banach_solve, distribute, enumerate_sections,
    kleene_greatest, kleene_least, lipschitz_bound, phi, phi_dual, transport_to_edges,
    transport_to_institutions, ClearingSection, EdgeState, Extremality, InstitutionState,
    SolveError, SolveOptions, SolveReport,
};
pub use invariance::{
    redenomination_case, verify_operator_intertwining, verify_section_bijection, BijectionReport,
    ComparisonCase, ExpectedRelation, IntertwiningReport, InvarianceError, ValueMap,
};
pub use models::{
    eisenberg_noe, eisenberg_noe_bounded, lln, redenominate, EisenbergNoeInstance, LLNAggregator,
    LLNEdge, LLNInstance, LLNVertex, ModelError,
};
pub use hypergraph::{
    build_hypergraph, build_sheaf, incidence_arrows, Cell, Hyperedge, LiabilityHypergraph,
    LiabilitySheaf, Restriction,
};
pub use lattice::{
    distance, FiniteLattice, LatticeError, LatticeValue, MetricSpec, PaymentSpace, PrincipalIdeal,
};
pub use network::{
    check_section, validate_network, AggregatorFn, DistributorFn, Edge, EdgeId, LiabilityNetwork,
    VertexId, Violation,
};
pub use value::{Backend, ExtReal, Scalar};
