//! Network generators shared by the clearing benchmarks.

use clearnet_core::value::Backend;
use clearnet_core::{eisenberg_noe, EisenbergNoeInstance, LiabilityNetwork};

/// An Eisenberg–Noe ring of `n` institutions: each owes 10 to the next, the
/// first holds 5 of external assets. Unique clearing section, reached after
/// an O(n) ascent.
pub fn en_ring(n: usize) -> LiabilityNetwork {
    let ids: Vec<String> = (0..n).map(|i| format!("v{i:04}")).collect();
    let assets: Vec<String> = (0..n)
        .map(|i| if i == 0 { "5".to_string() } else { "0".to_string() })
        .collect();
    let vertices: Vec<(&str, &str)> = ids
        .iter()
        .zip(&assets)
        .map(|(id, a)| (id.as_str(), a.as_str()))
        .collect();
    let edges: Vec<(String, String)> = (0..n)
        .map(|i| (ids[i].clone(), ids[(i + 1) % n].clone()))
        .collect();
    let edge_refs: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(f, t)| (f.as_str(), t.as_str(), "10"))
        .collect();
    let inst = EisenbergNoeInstance::from_parts(&vertices, &edge_refs).unwrap();
    eisenberg_noe(&inst, Backend::Rational).unwrap()
}

/// A random dense Eisenberg–Noe instance over `n` institutions with a fixed
/// edge pattern (i owes i+1 and i+2 modulo n).
pub fn en_band(n: usize) -> LiabilityNetwork {
    let ids: Vec<String> = (0..n).map(|i| format!("v{i:04}")).collect();
    let vertices: Vec<(&str, &str)> = ids.iter().map(|id| (id.as_str(), "3")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((ids[i].clone(), ids[(i + 1) % n].clone(), "7".to_string()));
        edges.push((ids[i].clone(), ids[(i + 2) % n].clone(), "4".to_string()));
    }
    let edge_refs: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(f, t, l)| (f.as_str(), t.as_str(), l.as_str()))
        .collect();
    let inst = EisenbergNoeInstance::from_parts(&vertices, &edge_refs).unwrap();
    eisenberg_noe(&inst, Backend::Rational).unwrap()
}
