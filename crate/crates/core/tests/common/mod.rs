#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;

use elecflow::generate::{corpus, rng};
use elecflow::{Graph, ResistanceVector};

/// Graphs for the flow, cut and exact-oracle checks.
pub fn flow_corpus() -> Vec<Graph> {
    corpus(100, 4..=30, 75, 2.5, 20_240_601)
}

/// Graphs for the electrical checks: up to 60 vertices and 400 edges.
pub fn electrical_corpus(count: usize, seed: u64) -> Vec<Graph> {
    corpus(count, 3..=60, 400, 7.0, seed)
}

/// `w_e / u_e²` with `w_e` uniform in `[1, 10]`.
pub fn random_resistances(g: &Graph, r: &mut impl Rng) -> ResistanceVector {
    let values = (0..g.m())
        .map(|e| {
            let u = g.capacity(e);
            r.gen_range(1.0..10.0) / (u * u)
        })
        .collect();
    ResistanceVector::all_edges(values).unwrap()
}

pub fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    rng(seed)
}

/// Dense Laplacian built straight from the edge list.
pub fn laplacian_matrix(g: &Graph, r: &[f64]) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(g.n(), g.n());
    for (e, edge) in g.edges().iter().enumerate() {
        let c = 1.0 / r[e];
        let (u, v) = (edge.tail, edge.head);
        l[(u, u)] += c;
        l[(v, v)] += c;
        l[(u, v)] -= c;
        l[(v, u)] -= c;
    }
    l
}

/// `χᵀ L⁺ χ` with `χ = e_s - e_t`, from an SVD pseudoinverse.
pub fn pinv_reff(g: &Graph, r: &[f64]) -> f64 {
    let l = laplacian_matrix(g, r);
    let scale = l.amax();
    let pinv = l.pseudo_inverse(1e-10 * scale).unwrap();
    let (s, t) = (g.s(), g.t());
    pinv[(s, s)] + pinv[(t, t)] - pinv[(s, t)] - pinv[(t, s)]
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}
