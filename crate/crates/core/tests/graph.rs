use std::collections::HashSet;

use proptest::prelude::*;
use rainbow_core::rng::rng_from_seed;
use rainbow_core::{ColoredGraph, Edge};

fn e(u: usize, v: usize, color: u32) -> Edge {
    Edge { u, v, color }
}

/// Every cell within 3 standard errors of `draws / k`.
fn assert_uniform(counts: &[usize], draws: usize) {
    let k = counts.len() as f64;
    let p = 1.0 / k;
    let expected = draws as f64 * p;
    let se = (draws as f64 * p * (1.0 - p)).sqrt();
    for (i, &c) in counts.iter().enumerate() {
        let z = (c as f64 - expected) / se;
        assert!(z.abs() < 3.0, "cell {i}: count {c}, expected {expected:.0}, z = {z:.2}");
    }
}

#[test]
fn edge_draws_are_uniform() {
    let g = ColoredGraph::from_edges(4, 3, vec![e(0, 1, 1), e(1, 2, 2), e(2, 3, 3)]).unwrap();
    let mut rng = rng_from_seed(11);
    let draws = 30_000;
    let mut counts = [0usize; 3];
    for _ in 0..draws {
        counts[g.random_alive_edge(&mut rng).unwrap()] += 1;
    }
    assert_uniform(&counts, draws);
}

#[test]
fn edge_draws_stay_uniform_after_deletions() {
    let mut g = ColoredGraph::generate(30, 60, 10, 5).unwrap();
    g.delete_vertex(0);
    g.delete_vertex(7);
    g.delete_color_class(3);
    let alive: Vec<usize> = g.alive_edges().collect();
    let mut rng = rng_from_seed(12);
    let draws = 20_000 * alive.len() / 10;
    let mut counts = vec![0usize; g.edges().len()];
    for _ in 0..draws {
        counts[g.random_alive_edge(&mut rng).unwrap()] += 1;
    }
    let alive_counts: Vec<usize> = alive.iter().map(|&id| counts[id]).collect();
    assert_eq!(alive_counts.iter().sum::<usize>(), draws);
    assert_uniform(&alive_counts, draws);
}

#[test]
fn vertex_draws_are_uniform() {
    let g = ColoredGraph::from_edges(4, 1, vec![e(0, 1, 1)]).unwrap();
    let mut rng = rng_from_seed(13);
    let draws = 40_000;
    let mut counts = [0usize; 4];
    for _ in 0..draws {
        counts[g.random_alive_vertex(&mut rng).unwrap()] += 1;
    }
    assert_uniform(&counts, draws);
}

#[test]
fn neighbor_draws_are_uniform() {
    let star: Vec<Edge> = (1..=5).map(|v| e(0, v, v as u32)).collect();
    let g = ColoredGraph::from_edges(6, 5, star).unwrap();
    let mut rng = rng_from_seed(14);
    let draws = 50_000;
    let mut counts = [0usize; 5];
    for _ in 0..draws {
        counts[g.random_neighbor(0, &mut rng).unwrap() - 1] += 1;
    }
    assert_uniform(&counts, draws);
}

#[test]
fn generation_is_reproducible() {
    let dump = |seed| {
        let mut buf = Vec::new();
        ColoredGraph::generate(2000, 3000, 700, seed).unwrap().write_dump(&mut buf).unwrap();
        buf
    };
    assert_eq!(dump(42), dump(42));
    assert_ne!(dump(42), dump(43));
}

#[test]
fn dense_generation_has_distinct_pairs() {
    // Near-complete graphs take the complement path.
    let g = ColoredGraph::generate(40, 700, 5, 3).unwrap();
    let pairs: HashSet<_> = g.edges().iter().map(Edge::key).collect();
    assert_eq!(pairs.len(), 700);
    g.check_invariants().unwrap();
}

#[derive(Debug, Clone)]
enum Op {
    Vertex(usize),
    Color(u32),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![(0usize..40).prop_map(Op::Vertex), (1u32..=12).prop_map(Op::Color)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn invariants_survive_deletions(
        n in 2usize..40,
        density in 0.0f64..1.0,
        q in 1usize..12,
        seed in any::<u64>(),
        ops in prop::collection::vec(op(), 0..30),
    ) {
        let max_m = n * (n - 1) / 2;
        let m = ((max_m as f64) * density * 0.5) as usize;
        let mut g = ColoredGraph::generate(n, m, q, seed).unwrap();
        let pairs: HashSet<_> = g.edges().iter().map(Edge::key).collect();
        prop_assert_eq!(pairs.len(), m);
        prop_assert!(g.edges().iter().all(|e| e.u != e.v && (1..=q as u32).contains(&e.color)));
        let mut consumed = HashSet::new();
        for o in ops {
            match o {
                Op::Vertex(v) if v < n && g.is_vertex_alive(v) => {
                    g.delete_vertex(v);
                }
                Op::Color(c) if (c as usize) <= q => {
                    g.delete_color_class(c);
                    consumed.insert(c);
                }
                _ => {}
            }
            g.check_invariants().map_err(TestCaseError::fail)?;
            let degree_sum: usize = g.alive_vertices().map(|v| g.degree(v)).sum();
            prop_assert_eq!(degree_sum, 2 * g.alive_edge_count());
            prop_assert_eq!(g.q_remaining(), q - consumed.len());
            for id in g.alive_edges() {
                let ed = g.edge(id);
                prop_assert!(g.is_vertex_alive(ed.u) && g.is_vertex_alive(ed.v));
                prop_assert!(!consumed.contains(&ed.color));
            }
        }
    }

    #[test]
    fn dump_round_trips(n in 1usize..30, m in 0usize..40, q in 1usize..9, seed in any::<u64>()) {
        let m = m.min(n * (n - 1) / 2);
        let g = ColoredGraph::generate(n, m, q, seed).unwrap();
        let mut buf = Vec::new();
        g.write_dump(&mut buf).unwrap();
        let back = ColoredGraph::read_dump(buf.as_slice()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.q_total(), q);
    }
}
