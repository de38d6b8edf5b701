//! GREEDY and MODIFIED GREEDY rainbow matching.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::colored_graph::{ColoredGraph, Edge};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Modified,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Greedy, Algorithm::Modified];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Modified => "modified",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Algorithm::Greedy),
            "modified" => Ok(Algorithm::Modified),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// State of the remaining graph after `t` loop iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: usize,
    pub nu: usize,
    pub mu_edges: usize,
    pub q_remaining: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingResult {
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    pub q: usize,
    /// Seed of the engine stream, when the run was started from one.
    pub seed: Option<u64>,
    pub matching: Vec<Edge>,
    pub mu: usize,
    pub steps_total: usize,
    /// Steps that removed a single degree-0 vertex (MODIFIED GREEDY only).
    pub isolated_deletions: usize,
    pub sample_stride: usize,
    pub trajectory: Vec<TrajectoryPoint>,
}

impl MatchingResult {
    pub fn mu_over_n(&self) -> f64 {
        self.mu as f64 / self.n as f64
    }
}

/// `max(1, round(n / 1000))`.
pub fn default_stride(n: usize) -> usize {
    ((n as f64 / 1000.0).round() as usize).max(1)
}

struct Recorder {
    stride: usize,
    points: Vec<TrajectoryPoint>,
}

impl Recorder {
    fn new(stride: usize, g: &ColoredGraph) -> Self {
        let mut r = Recorder {
            stride: stride.max(1),
            points: Vec::new(),
        };
        r.push(0, g);
        r
    }

    fn push(&mut self, t: usize, g: &ColoredGraph) {
        self.points.push(TrajectoryPoint {
            t,
            nu: g.alive_vertex_count(),
            mu_edges: g.alive_edge_count(),
            q_remaining: g.q_remaining(),
        });
    }

    fn step(&mut self, t: usize, g: &ColoredGraph) {
        if t.is_multiple_of(self.stride) {
            self.push(t, g);
        }
    }

    fn finish(mut self, t: usize, g: &ColoredGraph) -> Vec<TrajectoryPoint> {
        if self.points.last().map(|p| p.t) != Some(t) {
            self.push(t, g);
        }
        self.points
    }
}

fn empty_result(algorithm: Algorithm, g: &ColoredGraph, stride: usize) -> MatchingResult {
    MatchingResult {
        algorithm,
        n: g.n_initial(),
        m: g.m_initial(),
        q: g.q_total(),
        seed: None,
        matching: Vec::new(),
        mu: 0,
        steps_total: 0,
        isolated_deletions: 0,
        sample_stride: stride.max(1),
        trajectory: Vec::new(),
    }
}

/// GREEDY: repeatedly match a uniform alive edge, delete its endpoints and
/// then the rest of its color class.
pub fn run_greedy<R: Rng + ?Sized>(
    g: &mut ColoredGraph,
    rng: &mut R,
    sample_stride: usize,
) -> MatchingResult {
    assert!(g.is_fresh(), "engines start from an undeleted graph");
    let mut result = empty_result(Algorithm::Greedy, g, sample_stride);
    let mut rec = Recorder::new(sample_stride, g);
    let mut t = 0;
    while let Some(id) = g.random_alive_edge(rng) {
        let e = g.edge(id);
        result.matching.push(e);
        g.delete_vertex(e.u);
        g.delete_vertex(e.v);
        g.delete_color_class(e.color);
        t += 1;
        rec.step(t, g);
    }
    result.mu = result.matching.len();
    result.steps_total = t;
    result.trajectory = rec.finish(t, g);
    result
}

/// MODIFIED GREEDY: draw a uniform alive vertex; drop it if isolated,
/// otherwise match it to a uniform neighbor and delete both endpoints and
/// the edge's color class.
pub fn run_modified_greedy<R: Rng + ?Sized>(
    g: &mut ColoredGraph,
    rng: &mut R,
    sample_stride: usize,
) -> MatchingResult {
    assert!(g.is_fresh(), "engines start from an undeleted graph");
    let mut result = empty_result(Algorithm::Modified, g, sample_stride);
    let mut rec = Recorder::new(sample_stride, g);
    let mut t = 0;
    while g.alive_edge_count() > 0 {
        let v = g
            .random_alive_vertex(rng)
            .expect("alive edges imply alive vertices");
        match g.random_incident_edge(v, rng) {
            None => {
                g.delete_vertex(v);
                result.isolated_deletions += 1;
            }
            Some(id) => {
                let e = g.edge(id);
                result.matching.push(e);
                g.delete_vertex(e.u);
                g.delete_vertex(e.v);
                g.delete_color_class(e.color);
            }
        }
        t += 1;
        rec.step(t, g);
    }
    result.mu = result.matching.len();
    result.steps_total = t;
    result.trajectory = rec.finish(t, g);
    result
}

pub fn run(algorithm: Algorithm, g: &mut ColoredGraph, seed: u64, sample_stride: usize) -> MatchingResult {
    let mut rng = rng_from_seed(seed);
    let mut r = match algorithm {
        Algorithm::Greedy => run_greedy(g, &mut rng, sample_stride),
        Algorithm::Modified => run_modified_greedy(g, &mut rng, sample_stride),
    };
    r.seed = Some(seed);
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotAMatching { vertex: usize },
    NotRainbow { color: u32 },
    NotInGraph { u: usize, v: usize },
    WrongColor { u: usize, v: usize, expected: u32, found: u32 },
    SizeMismatch { mu: usize, edges: usize },
    Accounting(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAMatching { vertex } => {
                write!(f, "not a matching: vertex {vertex} covered twice")
            }
            Violation::NotRainbow { color } => write!(f, "not rainbow: color {color} used twice"),
            Violation::NotInGraph { u, v } => write!(f, "edge ({u}, {v}) not in the original graph"),
            Violation::WrongColor { u, v, expected, found } => {
                write!(f, "edge ({u}, {v}) has color {expected} in the graph, {found} in the matching")
            }
            Violation::SizeMismatch { mu, edges } => {
                write!(f, "mu = {mu} but {edges} matching edges listed")
            }
            Violation::Accounting(msg) => write!(f, "step accounting broken: {msg}"),
        }
    }
}

impl std::error::Error for Violation {}

/// Re-checks a result against the graph it was computed on. Reports the
/// first violation found.
pub fn verify_result(g0: &ColoredGraph, r: &MatchingResult) -> Result<(), Violation> {
    if r.mu != r.matching.len() {
        return Err(Violation::SizeMismatch { mu: r.mu, edges: r.matching.len() });
    }
    let colors: HashMap<(usize, usize), u32> =
        g0.edges().iter().map(|e| (e.key(), e.color)).collect();
    let mut covered = HashSet::with_capacity(2 * r.mu);
    let mut used = HashSet::with_capacity(r.mu);
    for e in &r.matching {
        for x in [e.u, e.v] {
            if !covered.insert(x) {
                return Err(Violation::NotAMatching { vertex: x });
            }
        }
        if !used.insert(e.color) {
            return Err(Violation::NotRainbow { color: e.color });
        }
        match colors.get(&e.key()) {
            None => return Err(Violation::NotInGraph { u: e.u, v: e.v }),
            Some(&c) if c != e.color => {
                return Err(Violation::WrongColor { u: e.u, v: e.v, expected: c, found: e.color })
            }
            Some(_) => {}
        }
    }
    if r.algorithm == Algorithm::Modified && r.steps_total != r.isolated_deletions + r.mu {
        return Err(Violation::Accounting(format!(
            "steps {} != isolated {} + mu {}",
            r.steps_total, r.isolated_deletions, r.mu
        )));
    }
    Ok(())
}

/// CSV with header `t,nu,mu_edges,q_remaining`.
pub fn write_trajectory_csv<W: Write>(points: &[TrajectoryPoint], w: W) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    for p in points {
        out.serialize(p)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colored_graph::Color;

    fn e(u: usize, v: usize, color: Color) -> Edge {
        Edge { u, v, color }
    }

    fn graph(n: usize, q: usize, edges: Vec<Edge>) -> ColoredGraph {
        ColoredGraph::from_edges(n, q, edges).unwrap()
    }

    #[test]
    fn greedy_small_cases() {
        for seed in 0..20 {
            let mut g = ColoredGraph::generate(6, 0, 3, 0).unwrap();
            assert_eq!(run(Algorithm::Greedy, &mut g, seed, 1).mu, 0);

            let mut g = graph(3, 3, vec![e(0, 1, 1), e(1, 2, 2), e(0, 2, 3)]);
            assert_eq!(run(Algorithm::Greedy, &mut g, seed, 1).mu, 1);

            let mut g = graph(4, 2, vec![e(0, 1, 1), e(2, 3, 1)]);
            assert_eq!(run(Algorithm::Greedy, &mut g, seed, 1).mu, 1);
            let mut g = graph(4, 2, vec![e(0, 1, 1), e(2, 3, 2)]);
            assert_eq!(run(Algorithm::Greedy, &mut g, seed, 1).mu, 2);
        }
    }

    #[test]
    fn modified_small_cases() {
        for seed in 0..20 {
            let mut g = ColoredGraph::generate(5, 0, 1, 0).unwrap();
            let r = run(Algorithm::Modified, &mut g, seed, 1);
            assert_eq!((r.mu, r.steps_total), (0, 0));

            let mut g = graph(3, 1, vec![e(0, 1, 1)]);
            let r = run(Algorithm::Modified, &mut g, seed, 1);
            assert_eq!(r.mu, 1);
            assert_eq!(r.steps_total, r.isolated_deletions + 1);

            let star = (1..=5).map(|l| e(0, l, l as Color)).collect();
            let mut g = graph(6, 5, star);
            assert_eq!(run(Algorithm::Modified, &mut g, seed, 1).mu, 1);
        }
    }

    #[test]
    fn verify_detects_injected_faults() {
        let g0 = ColoredGraph::generate(200, 300, 100, 3).unwrap();
        let mut g = g0.clone();
        let r = run(Algorithm::Greedy, &mut g, 4, 10);
        verify_result(&g0, &r).unwrap();
        assert!(r.mu >= 2);

        let mut bad = r.clone();
        let first = bad.matching[0];
        let other = g0
            .edges()
            .iter()
            .find(|x| (x.u == first.u || x.v == first.u) && x.key() != first.key())
            .copied();
        if let Some(x) = other {
            bad.matching.push(x);
            bad.mu += 1;
            let msg = verify_result(&g0, &bad).unwrap_err().to_string();
            assert!(msg.starts_with("not a matching"), "{msg}");
        }

        let mut bad = r.clone();
        bad.matching[1].color = bad.matching[0].color;
        let msg = verify_result(&g0, &bad).unwrap_err().to_string();
        assert!(msg.starts_with("not rainbow"), "{msg}");

        let mut bad = r.clone();
        bad.matching.push(e(198, 199, 99));
        bad.mu += 1;
        assert!(verify_result(&g0, &bad).is_err());
    }

    #[test]
    fn trajectory_sampling() {
        let mut g = ColoredGraph::generate(2000, 2000, 1000, 8).unwrap();
        let r = run(Algorithm::Modified, &mut g, 1, 7);
        assert_eq!(r.trajectory[0].t, 0);
        assert_eq!(r.trajectory[0].nu, 2000);
        let last = r.trajectory.last().unwrap();
        assert_eq!(last.t, r.steps_total);
        assert_eq!(last.mu_edges, 0);
        assert!(r.trajectory.windows(2).all(|w| w[1].t > w[0].t));
        assert!(r.trajectory[1..r.trajectory.len() - 1].iter().all(|p| p.t % 7 == 0));
    }

    #[test]
    fn stride_default() {
        assert_eq!(default_stride(100), 1);
        assert_eq!(default_stride(100_000), 100);
        assert_eq!(default_stride(1_499), 1);
        assert_eq!(default_stride(2_500), 3);
    }

    #[test]
    fn trajectory_csv_header() {
        let pts = [TrajectoryPoint { t: 0, nu: 4, mu_edges: 3, q_remaining: 2 }];
        let mut buf = Vec::new();
        write_trajectory_csv(&pts, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,nu,mu_edges,q_remaining\n0,4,3,2\n");
    }

    #[test]
    fn deterministic_runs() {
        let g0 = ColoredGraph::generate(3000, 4500, 1500, 21).unwrap();
        for alg in Algorithm::ALL {
            let a = run(alg, &mut g0.clone(), 5, 3);
            let b = run(alg, &mut g0.clone(), 5, 3);
            assert_eq!(a, b);
        }
    }
}
