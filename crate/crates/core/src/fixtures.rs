//! Witness hypermatrices and the smallest cospectral graph pair, embedded
//! at build time.

use sha2::{Digest, Sha256};

use crate::graph::{load_graph, Graph, GraphFormat};
use crate::hypermatrix::{parse_any, AnyHypermatrix, Hypermatrix};
use crate::scalar::Rational;

macro_rules! fixture {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../fixtures/", $name)))
    };
}

/// `(file name, contents)` for every shipped fixture, sorted by name.
pub const ALL: &[(&str, &str)] = &[
    fixture!("c4k1.edges"),
    fixture!("c4k1.g6"),
    fixture!("k14.edges"),
    fixture!("k14.g6"),
    fixture!("thm31_A0.hmx"),
    fixture!("thm31_A1.hmx"),
    fixture!("thm31_A2.hmx"),
    fixture!("thm31_A3.hmx"),
    fixture!("thm32_A0.hmx"),
    fixture!("thm32_A1.hmx"),
    fixture!("thm32_A2.hmx"),
    fixture!("thm32_A3.hmx"),
];

pub fn text(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// First-formulation witness of side `n + 1` (`n` in `0..4`).
pub fn first_witness(n: usize) -> Hypermatrix<Rational> {
    exact(&format!("thm31_A{n}.hmx"))
}

/// Second-formulation witness of side `n + 1` (`n` in `0..4`).
pub fn second_witness(n: usize) -> Hypermatrix<Rational> {
    exact(&format!("thm32_A{n}.hmx"))
}

fn exact(name: &str) -> Hypermatrix<Rational> {
    let text = text(name).unwrap_or_else(|| panic!("no fixture {name}"));
    match parse_any(text) {
        Ok(AnyHypermatrix::Exact(h)) => h,
        other => panic!("fixture {name} is not an exact hypermatrix: {other:?}"),
    }
}

/// The star `K₁,₄` with centre 0.
pub fn star_k14() -> Graph {
    edges("k14.edges")
}

/// The 4-cycle on `0..4` plus isolated vertex 4.
pub fn cycle_c4_k1() -> Graph {
    edges("c4k1.edges")
}

fn edges(name: &str) -> Graph {
    let text = text(name).unwrap_or_else(|| panic!("no fixture {name}"));
    load_graph(text, GraphFormat::Edgelist, true)
        .expect("fixture graphs parse")
        .graph
}

/// Hex SHA-256 over `name NUL contents NUL` for every fixture in order.
pub fn fixture_set_hash() -> String {
    let mut hasher = Sha256::new();
    for (name, body) in ALL {
        hasher.update(name.as_bytes());
        hasher.update([0]);
        hasher.update(body.as_bytes());
        hasher.update([0]);
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
