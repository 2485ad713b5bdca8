//! End-to-end acceptance suite. Each test prints a single `criterion N:
//! PASS` line on success (visible with `--nocapture`); a failing criterion
//! fails its test.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use clearnet_core::lattice::{FiniteLattice, LatticeValue, MetricSpec, PaymentSpace};
use clearnet_core::network::{
    check_section, validate_network, AggregatorFn, DistributorFn, Edge, EdgeId, LiabilityNetwork,
    VertexId,
};
use clearnet_core::value::{Backend, ExtReal};
use clearnet_core::{
    acyclic_solve, acyclic_solve_from, aggregate, banach_solve, distribute, eisenberg_noe,
    eisenberg_noe_bounded, enumerate_sections, kleene_greatest, kleene_least, lipschitz_bound,
    phi, phi_dual, redenomination_case, verify_operator_intertwining, verify_section_bijection,
    ComparisonCase, EdgeState, EisenbergNoeInstance, ExpectedRelation, Extremality,
    InstitutionState, SolveOptions, ValueMap,
};

fn ext(n: i64) -> LatticeValue {
    LatticeValue::ExtReal(ExtReal::from_int(n, Backend::Rational))
}

fn ratio(n: i64, d: i64) -> LatticeValue {
    LatticeValue::ExtReal(ExtReal::from_ratio(n, d, Backend::Rational))
}

fn en(vertices: &[(&str, &str)], edges: &[(&str, &str, &str)]) -> LiabilityNetwork {
    let inst = EisenbergNoeInstance::from_parts(vertices, edges).unwrap();
    eisenberg_noe(&inst, Backend::Rational).unwrap()
}

fn net_a() -> LiabilityNetwork {
    en(&[("1", "0"), ("2", "0")], &[("1", "2", "10"), ("2", "1", "10")])
}

fn net_b_inst() -> EisenbergNoeInstance {
    EisenbergNoeInstance::from_parts(
        &[("1", "5"), ("2", "0")],
        &[("1", "2", "10"), ("2", "1", "10")],
    )
    .unwrap()
}

fn x_of(state: &InstitutionState, id: &str) -> LatticeValue {
    state.0[&VertexId::from(id)].clone()
}

#[test]
fn criterion_01_net_a_extremal_sections() {
    let net = net_a();
    let opts = SolveOptions::default();
    let start = Instant::now();
    let (least, least_rep) = kleene_least(&net, &opts).unwrap();
    let (greatest, greatest_rep) = kleene_greatest(&net, &opts).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(x_of(&least.x, "1"), ext(0));
    assert_eq!(x_of(&least.x, "2"), ext(0));
    assert_eq!(x_of(&greatest.x, "1"), ext(10));
    assert_eq!(x_of(&greatest.x, "2"), ext(10));
    assert_eq!(least_rep.extremality, Extremality::Least);
    assert_eq!(greatest_rep.extremality, Extremality::Greatest);
    assert!(least_rep.converged && greatest_rep.converged);
    assert!(least_rep.iterations <= 5 && greatest_rep.iterations <= 5);
    assert!(
        elapsed.as_micros() < 1000,
        "took {elapsed:?}, budget 1 ms"
    );
    println!(
        "criterion 1: PASS - NET-A least (0,0) / greatest (10,10), {}+{} iterations, {elapsed:?}",
        least_rep.iterations, greatest_rep.iterations
    );
}

#[test]
fn criterion_02_net_b_five_step_ascent() {
    let net = eisenberg_noe(&net_b_inst(), Backend::Rational).unwrap();
    let opts = SolveOptions::default();
    let (least, rep) = kleene_least(&net, &opts).unwrap();
    assert_eq!(x_of(&least.x, "1"), ext(10));
    assert_eq!(x_of(&least.x, "2"), ext(10));
    assert_eq!(rep.iterations, 5, "ascent must take exactly 5 steps");
    // Replay the hand-derived chain (0,0)->(5,0)->(5,5)->(10,5)->(10,10).
    let expected = [(0, 0), (5, 0), (5, 5), (10, 5), (10, 10), (10, 10)];
    let mut state = InstitutionState::bottom(&net).unwrap();
    for (a, b) in expected {
        assert_eq!(x_of(&state, "1"), ext(a));
        assert_eq!(x_of(&state, "2"), ext(b));
        state = phi(&net, &state);
    }
    let (greatest, _) = kleene_greatest(&net, &opts).unwrap();
    assert_eq!(greatest.x, least.x);
    println!("criterion 2: PASS - NET-B unique section (10,10) reached in exactly 5 steps");
}

#[test]
fn criterion_03_net_c_acyclic_seed_independent() {
    let net = en(
        &[("1", "7"), ("2", "0"), ("3", "0")],
        &[("1", "2", "10"), ("2", "3", "5")],
    );
    let (section, rep) = acyclic_solve(&net).unwrap();
    assert_eq!(x_of(&section.x, "1"), ext(7));
    assert_eq!(x_of(&section.x, "2"), ext(5));
    assert_eq!(x_of(&section.x, "3"), ext(0));
    assert_eq!(section.p.0[&EdgeId::from("1->2")], ext(7));
    assert_eq!(section.p.0[&EdgeId::from("2->3")], ext(5));
    assert_eq!(rep.iterations, 3, "r+1 = 3 applications");

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10 {
        let seed = InstitutionState(
            net.vertices
                .iter()
                .map(|v| (v.clone(), ext(rng.gen_range(0..=30))))
                .collect(),
        );
        let (s, r) = acyclic_solve_from(&net, &seed).unwrap();
        assert_eq!(s.x, section.x, "result must not depend on the seed");
        assert_eq!(r.iterations, 3);
    }
    println!("criterion 3: PASS - NET-C x=(7,5,0), p=(7,5) in 3 applications, 10 seeds agree");
}

// ---------------------------------------------------------------------------
// Random finite-lattice family shared by criteria 4, 5, and 9
// ---------------------------------------------------------------------------

/// Random validated finite network: 1-3 vertices sharing a chain lattice of
/// 1-3 elements (uniform per network, so payments land in creditor spaces),
/// up to 3 edges with random monotone table distributors, and join-all or
/// random monotone table aggregators.
fn random_finite_network(rng: &mut ChaCha8Rng) -> LiabilityNetwork {
    let n = rng.gen_range(1..=3);
    let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let size = rng.gen_range(1..=3);
    let sizes: Vec<usize> = vec![size; n];

    let mut edges = Vec::new();
    let mut liability = BTreeMap::new();
    let mut distributor = BTreeMap::new();
    let edge_count = rng.gen_range(0..=3);
    for _ in 0..edge_count {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if s == t {
            continue;
        }
        let id = EdgeId(format!("{}->{}", ids[s], ids[t]));
        if liability.contains_key(&id) {
            continue;
        }
        let m = sizes[s];
        let ell = rng.gen_range(0..m);
        // Monotone map from the source chain into the ideal of ell.
        let mut outputs = Vec::with_capacity(m);
        let mut floor = 0usize;
        for _ in 0..m {
            floor = rng.gen_range(floor..=ell);
            outputs.push(LatticeValue::FiniteElem(floor));
        }
        edges.push(Edge {
            id: id.clone(),
            source: VertexId(ids[s].clone()),
            target: VertexId(ids[t].clone()),
        });
        liability.insert(id.clone(), LatticeValue::FiniteElem(ell));
        distributor.insert(id, DistributorFn::Table(outputs));
    }
    edges.sort_by(|a, b| a.id.cmp(&b.id));

    let mut vertices: Vec<VertexId> = ids.iter().map(|s| VertexId(s.clone())).collect();
    vertices.sort();
    let mut payment_space = BTreeMap::new();
    let mut exogenous = BTreeMap::new();
    let mut aggregator = BTreeMap::new();
    for (i, id) in ids.iter().enumerate() {
        let vid = VertexId(id.clone());
        payment_space.insert(vid.clone(), PaymentSpace::finite(FiniteLattice::chain(sizes[i])));
        let iota = rng.gen_range(0..sizes[i]);
        exogenous.insert(vid.clone(), LatticeValue::FiniteElem(iota));

        // Incoming ideal sizes, ordered by edge id as the aggregator expects.
        let mut incoming: Vec<&Edge> = edges.iter().filter(|e| e.target == vid).collect();
        incoming.sort_by(|a, b| a.id.cmp(&b.id));
        let agg = if rng.gen_bool(0.5) || incoming.len() > 2 {
            AggregatorFn::JoinAll
        } else {
            // Random monotone table over the product of incoming ideals,
            // built along lexicographic order (a linear extension of the
            // product order on chains).
            let bounds: Vec<usize> = incoming
                .iter()
                .map(|e| liability[&e.id].as_finite().unwrap())
                .collect();
            let mut tuples: Vec<Vec<usize>> = vec![vec![]];
            for b in &bounds {
                let mut next = Vec::new();
                for t in &tuples {
                    for v in 0..=*b {
                        let mut t = t.clone();
                        t.push(v);
                        next.push(t);
                    }
                }
                tuples = next;
            }
            let mut assigned: Vec<(Vec<usize>, usize)> = Vec::new();
            for t in tuples {
                let floor = assigned
                    .iter()
                    .filter(|(prev, _)| prev.iter().zip(&t).all(|(a, b)| a <= b))
                    .map(|&(_, out)| out)
                    .max()
                    .unwrap_or(iota)
                    .max(iota);
                let out = rng.gen_range(floor..sizes[i]);
                assigned.push((t, out));
            }
            AggregatorFn::Table(
                assigned
                    .into_iter()
                    .map(|(input, out)| {
                        (
                            input.into_iter().map(LatticeValue::FiniteElem).collect(),
                            LatticeValue::FiniteElem(out),
                        )
                    })
                    .collect(),
            )
        };
        aggregator.insert(vid, agg);
    }

    LiabilityNetwork {
        vertices,
        edges,
        payment_space,
        liability,
        exogenous,
        distributor,
        aggregator,
    }
}

fn finite_family(count: usize, seed: u64) -> Vec<LiabilityNetwork> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let net = random_finite_network(&mut rng);
        if validate_network(&net).is_empty() {
            out.push(net);
        }
    }
    out
}

#[test]
fn criterion_04_oracle_equivalence_on_random_family() {
    let start = Instant::now();
    let family = finite_family(200, 1);
    let opts = SolveOptions::default();
    for (i, net) in family.iter().enumerate() {
        let sections = enumerate_sections(net).unwrap();
        assert!(!sections.is_empty(), "network {i}: no sections (Thm: nonempty)");
        // Coordinatewise extremes of the enumerated fixed-point set.
        let mut least = sections[0].x.clone();
        let mut greatest = sections[0].x.clone();
        for s in &sections[1..] {
            for v in &net.vertices {
                let space = net.space(v);
                least
                    .0
                    .insert(v.clone(), space.meet(&least.0[v], &s.x.0[v]).unwrap());
                greatest
                    .0
                    .insert(v.clone(), space.join(&greatest.0[v], &s.x.0[v]).unwrap());
            }
        }
        // The extremes are themselves sections...
        assert!(sections.iter().any(|s| s.x == least), "network {i}: meet of sections escapes the set");
        assert!(sections.iter().any(|s| s.x == greatest), "network {i}: join of sections escapes the set");
        // ...and agree with the iterative solvers.
        let (kl, _) = kleene_least(net, &opts).unwrap();
        let (kg, _) = kleene_greatest(net, &opts).unwrap();
        assert_eq!(kl.x, least, "network {i}: kleene_least disagrees with the oracle");
        assert_eq!(kg.x, greatest, "network {i}: kleene_greatest disagrees with the oracle");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "family run took {elapsed:?}");
    println!(
        "criterion 4: PASS - 200 random finite networks, oracle extremes = kleene outputs, {elapsed:?}"
    );
}

fn edge_fixed_points(net: &LiabilityNetwork) -> Vec<EdgeState> {
    let mut factor: Vec<Vec<LatticeValue>> = Vec::new();
    for e in &net.edges {
        factor.push(net.edge_ideal(&e.id).as_space().enumerate().unwrap());
    }
    let mut states = vec![Vec::new()];
    for f in &factor {
        let mut next = Vec::new();
        for prefix in &states {
            for v in f {
                let mut t: Vec<LatticeValue> = prefix.clone();
                t.push(v.clone());
                next.push(t);
            }
        }
        states = next;
    }
    states
        .into_iter()
        .map(|vals| {
            EdgeState(
                net.edges
                    .iter()
                    .map(|e| e.id.clone())
                    .zip(vals)
                    .collect(),
            )
        })
        .filter(|p| phi_dual(net, p) == *p)
        .collect()
}

#[test]
fn criterion_05_edge_side_duality() {
    let family = finite_family(200, 1);
    for (i, net) in family.iter().enumerate() {
        let fix = enumerate_sections(net).unwrap();
        let fix_dual = edge_fixed_points(net);
        assert_eq!(
            fix.len(),
            fix_dual.len(),
            "network {i}: |Fix(Phi)| != |Fix(Phi-hat)|"
        );
        for s in &fix {
            let p = distribute(net, &s.x);
            assert!(fix_dual.contains(&p), "network {i}: D(x) not a dual fixed point");
            assert_eq!(aggregate(net, &p), s.x, "network {i}: A(D(x)) != x");
        }
        for p in &fix_dual {
            let x = aggregate(net, p);
            assert!(
                fix.iter().any(|s| s.x == x),
                "network {i}: A(p) not a fixed point"
            );
            assert_eq!(distribute(net, &x), *p, "network {i}: D(A(p)) != p");
        }
    }
    println!("criterion 5: PASS - |Fix| matches and D/A are mutually inverse on 200 networks");
}

/// NET-E: amplifying 2-cycle on [1, inf] with slope-2 distributors and
/// uncapped sums.
fn net_e() -> LiabilityNetwork {
    let vertices: Vec<VertexId> = vec!["1".into(), "2".into()];
    let edges = vec![
        Edge {
            id: "1->2".into(),
            source: "1".into(),
            target: "2".into(),
        },
        Edge {
            id: "2->1".into(),
            source: "2".into(),
            target: "1".into(),
        },
    ];
    let space = PaymentSpace::interval(
        ExtReal::from_int(1, Backend::Rational),
        ExtReal::Infinity,
    )
    .unwrap();
    LiabilityNetwork {
        payment_space: vertices.iter().map(|v| (v.clone(), space.clone())).collect(),
        liability: edges
            .iter()
            .map(|e| (e.id.clone(), LatticeValue::ExtReal(ExtReal::Infinity)))
            .collect(),
        exogenous: vertices.iter().map(|v| (v.clone(), ext(1))).collect(),
        distributor: edges
            .iter()
            .map(|e| {
                (
                    e.id.clone(),
                    DistributorFn::LinearCapped {
                        slope: ExtReal::from_int(2, Backend::Rational),
                        cap: ExtReal::Infinity,
                    },
                )
            })
            .collect(),
        aggregator: vertices
            .iter()
            .map(|v| (v.clone(), AggregatorFn::Sum))
            .collect(),
        vertices,
        edges,
    }
}

#[test]
fn criterion_06_amplifying_cycle_diverges() {
    let net = net_e();
    let opts = SolveOptions {
        max_iter: 64,
        ..SolveOptions::default()
    };
    let (_, rep) = kleene_least(&net, &opts).unwrap();
    assert!(!rep.converged);
    assert!(rep.divergence, "ascending chain must be flagged divergent");
    assert_eq!(
        rep.top_saturated_section,
        Some(true),
        "the all-infinity state must pass check_section"
    );
    // Independent confirmation through the checker itself.
    let top = InstitutionState::top(&net).unwrap();
    let p = distribute(&net, &top);
    assert!(check_section(&net, &top.0, &p.0).unwrap());
    println!("criterion 6: PASS - NET-E divergence flagged, all-infinity state is a section");
}

/// NET-F: attenuated 2-cycle on [0, inf] with slope-1/2 distributors,
/// uncapped sums, c=(1,0).
fn net_f() -> LiabilityNetwork {
    let mut net = net_e();
    for v in &net.vertices {
        net.payment_space
            .insert(v.clone(), PaymentSpace::unbounded(Backend::Rational));
    }
    for d in net.distributor.values_mut() {
        *d = DistributorFn::LinearCapped {
            slope: ExtReal::from_ratio(1, 2, Backend::Rational),
            cap: ExtReal::Infinity,
        };
    }
    net.exogenous.insert("1".into(), ext(1));
    net.exogenous.insert("2".into(), ext(0));
    net
}

#[test]
fn criterion_07_banach_contraction() {
    let net = net_f();
    let k = lipschitz_bound(&net, MetricSpec::L1Abs).unwrap();
    assert_eq!(k, ExtReal::from_ratio(1, 2, Backend::Rational));

    let seed = InstitutionState::bottom(&net).unwrap();
    let (section, rep) =
        banach_solve(&net, MetricSpec::L1Abs, &SolveOptions::default(), &seed).unwrap();
    assert!(rep.converged);
    assert_eq!(rep.extremality, Extremality::Unique);
    assert_eq!(x_of(&section.x, "1"), ratio(4, 3));
    assert_eq!(x_of(&section.x, "2"), ratio(2, 3));

    // Observed per-step contraction ratio stays within the certified bound.
    let half = ExtReal::from_ratio(1, 2, Backend::Rational);
    let mut prev = seed.clone();
    let mut curr = phi(&net, &prev);
    let mut d_prev = prev.l1_distance(&net, MetricSpec::L1Abs, &curr).unwrap();
    for _ in 0..20 {
        let next = phi(&net, &curr);
        let d_next = curr.l1_distance(&net, MetricSpec::L1Abs, &next).unwrap();
        if d_prev.is_zero() {
            break;
        }
        assert!(
            d_next.leq(&d_prev.mul(&half)),
            "contraction ratio exceeded 1/2"
        );
        prev = curr;
        curr = next;
        d_prev = prev.l1_distance(&net, MetricSpec::L1Abs, &curr).unwrap();
    }
    println!(
        "criterion 7: PASS - NET-F exact fixed point (4/3, 2/3) in {} iterations, k = 1/2",
        rep.iterations
    );
}

#[test]
fn criterion_08_invariance_cases() {
    let inst = net_b_inst();
    let net = eisenberg_noe(&inst, Backend::Rational).unwrap();
    let mut cases = vec![
        redenomination_case(
            "redenominate-2",
            &net,
            &BigRational::from_integer(BigInt::from(2)),
        )
        .unwrap(),
        redenomination_case(
            "redenominate-1-3",
            &net,
            &BigRational::new(BigInt::from(1), BigInt::from(3)),
        )
        .unwrap(),
        ComparisonCase {
            name: "bounded-unbounded".into(),
            source: eisenberg_noe_bounded(&inst, Backend::Rational).unwrap(),
            target: net.clone(),
            map: ValueMap::Identity,
            relation: ExpectedRelation::SectionInclusionIso,
        },
    ];
    for case in cases.drain(..) {
        let intertwining = verify_operator_intertwining(&case, 100, 17).unwrap();
        assert!(
            intertwining.ok(),
            "{}: {:?}",
            case.name,
            intertwining.failures
        );
        assert!(intertwining.samples >= 100);
        let bijection = verify_section_bijection(&case).unwrap();
        assert!(bijection.ok(), "{}: {:?}", case.name, bijection.failures);
    }
    println!(
        "criterion 8: PASS - redenomination (2, 1/3) and bounded/unbounded cases intertwine and transport sections"
    );
}

fn random_en_instance(rng: &mut ChaCha8Rng, n: usize) -> EisenbergNoeInstance {
    let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let vertices: Vec<(String, String)> = ids
        .iter()
        .map(|id| (id.clone(), rng.gen_range(0..=20).to_string()))
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(0.3) {
                edges.push((ids[i].clone(), ids[j].clone(), rng.gen_range(1..=15).to_string()));
            }
        }
    }
    let v: Vec<(&str, &str)> = vertices.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let e: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
        .collect();
    EisenbergNoeInstance::from_parts(&v, &e).unwrap()
}

#[test]
fn criterion_09_monotonicity_and_containment() {
    // Exhaustive monotonicity of Phi on the finite family.
    let family = finite_family(200, 1);
    for (i, net) in family.iter().enumerate() {
        let states: Vec<InstitutionState> = {
            let mut factor = Vec::new();
            for v in &net.vertices {
                factor.push(net.space(v).enumerate().unwrap());
            }
            let mut acc: Vec<Vec<LatticeValue>> = vec![Vec::new()];
            for f in &factor {
                let mut next = Vec::new();
                for prefix in &acc {
                    for e in f {
                        let mut t = prefix.clone();
                        t.push(e.clone());
                        next.push(t);
                    }
                }
                acc = next;
            }
            acc.into_iter()
                .map(|vals| {
                    InstitutionState(
                        net.vertices.iter().cloned().zip(vals).collect(),
                    )
                })
                .collect()
        };
        for a in &states {
            for b in &states {
                if a.leq(net, b).unwrap() {
                    assert!(
                        phi(net, a).leq(net, &phi(net, b)).unwrap(),
                        "network {i}: Phi not monotone"
                    );
                }
            }
        }
    }

    // Sampled monotonicity and containment on EN instances up to n=10.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut pairs = 0usize;
    while pairs < 1000 {
        let n = rng.gen_range(2..=10);
        let net = eisenberg_noe(&random_en_instance(&mut rng, n), Backend::Rational).unwrap();
        for _ in 0..10 {
            let x = InstitutionState(
                net.vertices
                    .iter()
                    .map(|v| (v.clone(), ext(rng.gen_range(0..=40))))
                    .collect(),
            );
            let y = InstitutionState(
                net.vertices
                    .iter()
                    .map(|v| {
                        let base = x.0[v].as_ext_real().unwrap().clone();
                        let bump = ExtReal::from_int(rng.gen_range(0..=10), Backend::Rational);
                        (v.clone(), LatticeValue::ExtReal(base.add(&bump)))
                    })
                    .collect(),
            );
            assert!(x.leq(&net, &y).unwrap());
            assert!(phi(&net, &x).leq(&net, &phi(&net, &y)).unwrap(), "EN Phi not monotone");
            // Containment: payments inside liability ideals, aggregates
            // inside [0, total liabilities].
            let p = distribute(&net, &x);
            for e in &net.edges {
                assert!(net.edge_ideal(&e.id).contains(&p.0[&e.id]).unwrap());
            }
            let fx = phi(&net, &x);
            for v in &net.vertices {
                let bar = net.outgoing(v).iter().fold(
                    ExtReal::from_int(0, Backend::Rational),
                    |acc, e| acc.add(net.liability[&e.id].as_ext_real().unwrap()),
                );
                assert!(fx.0[v].as_ext_real().unwrap().leq(&bar));
            }
            pairs += 1;
        }
    }
    println!(
        "criterion 9: PASS - monotonicity exhaustive on 200 finite networks, {pairs} EN sample pairs"
    );
}

fn run_cli(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_clearnet"))
        .args(args)
        .env_remove("CLEARNET_BACKEND")
        .output()
        .expect("spawning clearnet");
    (
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        out.status.code().unwrap_or(-1),
    )
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!(
        "{}/tests/golden/{name}",
        env!("CARGO_MANIFEST_DIR")
    ))
    .expect("reading golden file")
}

#[test]
fn criterion_10_cli_golden_files() {
    let cases: [(&str, &str, &[&str], &str); 5] = [
        ("solve", "net_a.json", &["--solver", "least"], "net_a_least.json"),
        ("solve", "net_a.json", &["--solver", "greatest"], "net_a_greatest.json"),
        ("solve", "net_b.json", &["--solver", "least"], "net_b_least.json"),
        ("solve", "net_c.json", &["--solver", "acyclic"], "net_c_acyclic.json"),
        ("enumerate", "net_d.json", &[], "net_d_enumerate.json"),
    ];
    for (cmd, input, extra, file) in cases {
        let path = data(input);
        let mut args = vec![cmd, path.as_str()];
        args.extend_from_slice(extra);
        let (stdout, code) = run_cli(&args);
        assert_eq!(code, 0, "{args:?} exited {code}");
        assert_eq!(stdout, golden(file), "{file} drifted");
    }
    println!("criterion 10: PASS - five golden reports reproduced byte-for-byte");
}
