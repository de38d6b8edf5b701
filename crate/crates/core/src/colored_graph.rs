//! Randomly colored G(n, m) with the deletions the greedy engines need.
//!
//! Vertices are `0..n`, colors are `1..=q`. Alive vertices and alive edges
//! are kept in [`SparseSet`]s so uniform draws and removals are O(1); each
//! vertex keeps a swap-remove incidence list of its alive edges, and each
//! edge remembers its slot in both endpoint lists.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::rng_from_seed;
use crate::sparse_set::SparseSet;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Color = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub color: Color,
}

impl Edge {
    /// Endpoints as an ordered pair `(min, max)`.
    #[inline]
    pub fn key(&self) -> (VertexId, VertexId) {
        if self.u < self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }

    #[inline]
    fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("n must be at least 1")]
    NoVertices,
    #[error("m = {m} exceeds n(n-1)/2 = {max} for n = {n}")]
    TooManyEdges { n: usize, m: usize, max: usize },
    #[error("q must be at least 1 when the graph has edges")]
    NoColors,
    #[error("edge {index}: endpoints ({u}, {v}) invalid for n = {n}")]
    BadEndpoints { index: usize, u: usize, v: usize, n: usize },
    #[error("edge {index}: color {color} outside 1..={q}")]
    BadColor { index: usize, color: Color, q: usize },
    #[error("edge {index}: duplicate pair ({u}, {v})")]
    DuplicatePair { index: usize, u: usize, v: usize },
    #[error("dump parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[inline]
fn max_edges(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[inline]
fn pair_key(a: VertexId, b: VertexId) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    ((lo as u64) << 32) | hi as u64
}

#[derive(Debug, Clone)]
pub struct ColoredGraph {
    n_initial: usize,
    q_total: usize,
    edges: Vec<Edge>,
    alive_vertices: SparseSet,
    alive_edges: SparseSet,
    incidence: Vec<Vec<EdgeId>>,
    // slot of edge e in incidence[edges[e].u] and incidence[edges[e].v]
    incidence_slot: Vec<[usize; 2]>,
    color_classes: Vec<Vec<EdgeId>>,
    color_consumed: Vec<bool>,
    q_remaining: usize,
}

impl ColoredGraph {
    /// Samples `m` distinct pairs uniformly without replacement and colors
    /// each independently and uniformly from `1..=q`.
    pub fn generate(n: usize, m: usize, q: usize, seed: u64) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let max = max_edges(n);
        if m > max {
            return Err(GraphError::TooManyEdges { n, m, max });
        }
        if q == 0 && m > 0 {
            return Err(GraphError::NoColors);
        }
        let mut rng = rng_from_seed(seed);
        let pairs = if 2 * m <= max {
            sample_pairs(n, m, &mut rng)
        } else {
            // Dense request: reject into the complement instead.
            let excluded: HashSet<u64> = sample_pairs(n, max - m, &mut rng)
                .into_iter()
                .map(|(a, b)| pair_key(a, b))
                .collect();
            let mut pairs = Vec::with_capacity(m);
            for a in 0..n {
                for b in a + 1..n {
                    if !excluded.contains(&pair_key(a, b)) {
                        pairs.push((a, b));
                    }
                }
            }
            pairs.shuffle(&mut rng);
            pairs
        };
        let edges = pairs
            .into_iter()
            .map(|(u, v)| Edge {
                u,
                v,
                color: rng.gen_range(1..=q as Color),
            })
            .collect();
        Ok(Self::build(n, q, edges))
    }

    /// Builds a graph from an explicit edge list, validating simplicity and
    /// color range.
    pub fn from_edges(n: usize, q: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        if q == 0 && !edges.is_empty() {
            return Err(GraphError::NoColors);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for (index, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n || e.u == e.v {
                return Err(GraphError::BadEndpoints { index, u: e.u, v: e.v, n });
            }
            if e.color == 0 || e.color as usize > q {
                return Err(GraphError::BadColor { index, color: e.color, q });
            }
            if !seen.insert(pair_key(e.u, e.v)) {
                return Err(GraphError::DuplicatePair { index, u: e.u, v: e.v });
            }
        }
        Ok(Self::build(n, q, edges))
    }

    fn build(n: usize, q: usize, edges: Vec<Edge>) -> Self {
        let m = edges.len();
        let mut incidence: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
        let mut incidence_slot = Vec::with_capacity(m);
        let mut color_classes: Vec<Vec<EdgeId>> = vec![Vec::new(); q];
        for (id, e) in edges.iter().enumerate() {
            let su = incidence[e.u].len();
            incidence[e.u].push(id);
            let sv = incidence[e.v].len();
            incidence[e.v].push(id);
            incidence_slot.push([su, sv]);
            color_classes[e.color as usize - 1].push(id);
        }
        ColoredGraph {
            n_initial: n,
            q_total: q,
            edges,
            alive_vertices: SparseSet::full(n),
            alive_edges: SparseSet::full(m),
            incidence,
            incidence_slot,
            color_classes,
            color_consumed: vec![false; q],
            q_remaining: q,
        }
    }

    pub fn n_initial(&self) -> usize {
        self.n_initial
    }

    /// Number of edges the graph was built with.
    pub fn m_initial(&self) -> usize {
        self.edges.len()
    }

    pub fn q_total(&self) -> usize {
        self.q_total
    }

    /// ν: alive vertex count.
    pub fn alive_vertex_count(&self) -> usize {
        self.alive_vertices.len()
    }

    /// μ_edges: alive edge count.
    pub fn alive_edge_count(&self) -> usize {
        self.alive_edges.len()
    }

    /// Colors whose class has not been deleted yet.
    pub fn q_remaining(&self) -> usize {
        self.q_remaining
    }

    /// True until the first deletion of any kind.
    pub fn is_fresh(&self) -> bool {
        self.alive_vertices.len() == self.n_initial
            && self.alive_edges.len() == self.edges.len()
            && self.q_remaining == self.q_total
    }

    /// Every edge the graph was built with, alive or not, indexed by id.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn is_vertex_alive(&self, v: VertexId) -> bool {
        self.alive_vertices.contains(v)
    }

    pub fn is_edge_alive(&self, e: EdgeId) -> bool {
        self.alive_edges.contains(e)
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive_vertices.iter()
    }

    pub fn alive_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.alive_edges.iter()
    }

    /// Alive edges incident to `v`.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        assert!(self.is_vertex_alive(v), "degree of dead vertex {v}");
        self.incidence[v].len()
    }

    pub fn random_alive_edge<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<EdgeId> {
        self.alive_edges.sample(rng)
    }

    pub fn random_alive_vertex<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<VertexId> {
        self.alive_vertices.sample(rng)
    }

    /// Uniform alive edge at `v`. In a simple graph this is the same as a
    /// uniform neighbor.
    pub fn random_incident_edge<R: Rng + ?Sized>(
        &self,
        v: VertexId,
        rng: &mut R,
    ) -> Option<EdgeId> {
        assert!(self.is_vertex_alive(v), "neighbor draw at dead vertex {v}");
        let inc = &self.incidence[v];
        if inc.is_empty() {
            None
        } else {
            Some(inc[rng.gen_range(0..inc.len())])
        }
    }

    pub fn random_neighbor<R: Rng + ?Sized>(&self, v: VertexId, rng: &mut R) -> Option<VertexId> {
        self.random_incident_edge(v, rng)
            .map(|e| self.edges[e].other(v))
    }

    fn detach(&mut self, v: VertexId, e: EdgeId) {
        let side = usize::from(self.edges[e].u != v);
        let slot = self.incidence_slot[e][side];
        let list = &mut self.incidence[v];
        let last = list.pop().expect("edge present in incidence list");
        if last != e {
            list[slot] = last;
            let moved = self.edges[last];
            let moved_side = usize::from(moved.u != v);
            self.incidence_slot[last][moved_side] = slot;
        }
    }

    fn remove_edge(&mut self, e: EdgeId) {
        if !self.alive_edges.remove(e) {
            return;
        }
        let Edge { u, v, .. } = self.edges[e];
        self.detach(u, e);
        self.detach(v, e);
    }

    /// Removes `v` and its incident alive edges; returns how many edges went.
    pub fn delete_vertex(&mut self, v: VertexId) -> usize {
        assert!(self.alive_vertices.remove(v), "vertex {v} deleted twice");
        let mut removed = 0;
        while let Some(&e) = self.incidence[v].last() {
            self.remove_edge(e);
            removed += 1;
        }
        removed
    }

    /// Removes every alive edge of `color`; returns how many went.
    ///
    /// The first deletion of a class marks the color as used and decrements
    /// `q_remaining`. Later calls for the same color remove nothing.
    pub fn delete_color_class(&mut self, color: Color) -> usize {
        assert!(
            color >= 1 && color as usize <= self.q_total,
            "color {color} outside 1..={}",
            self.q_total
        );
        let idx = color as usize - 1;
        if !self.color_consumed[idx] {
            self.color_consumed[idx] = true;
            self.q_remaining -= 1;
        }
        let class = std::mem::take(&mut self.color_classes[idx]);
        let mut removed = 0;
        for e in class {
            if self.alive_edges.contains(e) {
                self.remove_edge(e);
                removed += 1;
            }
        }
        removed
    }

    /// Full structural check; returns the first broken invariant.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut degree_sum = 0;
        for v in self.alive_vertices.iter() {
            for (slot, &e) in self.incidence[v].iter().enumerate() {
                if !self.alive_edges.contains(e) {
                    return Err(format!("dead edge {e} in incidence list of {v}"));
                }
                let side = usize::from(self.edges[e].u != v);
                if self.incidence_slot[e][side] != slot {
                    return Err(format!("stale slot for edge {e} at {v}"));
                }
            }
            degree_sum += self.incidence[v].len();
        }
        for e in self.alive_edges.iter() {
            let Edge { u, v, color } = self.edges[e];
            if !self.is_vertex_alive(u) || !self.is_vertex_alive(v) {
                return Err(format!("alive edge {e} has a dead endpoint"));
            }
            if color == 0 || color as usize > self.q_total {
                return Err(format!("edge {e} has color {color}"));
            }
        }
        if degree_sum != 2 * self.alive_edges.len() {
            return Err(format!(
                "degree sum {degree_sum} != 2 * {}",
                self.alive_edges.len()
            ));
        }
        let mut seen = HashSet::with_capacity(self.edges.len());
        for e in &self.edges {
            if e.u == e.v {
                return Err(format!("self-loop at {}", e.u));
            }
            if !seen.insert(pair_key(e.u, e.v)) {
                return Err(format!("duplicate pair ({}, {})", e.u, e.v));
            }
        }
        Ok(())
    }

    /// Text dump of the edge list as built: `n m q`, then `u v color` per
    /// line, LF endings.
    pub fn write_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {} {}", self.n_initial, self.edges.len(), self.q_total)?;
        for e in &self.edges {
            writeln!(w, "{} {} {}", e.u, e.v, e.color)?;
        }
        w.flush()
    }

    pub fn read_dump<R: BufRead>(r: R) -> Result<Self, GraphError> {
        let mut lines = r.lines().enumerate();
        let parse_err = |line: usize, msg: &str| GraphError::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        let (_, header) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
        let header = header?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| parse_err(0, "header must be `n m q`"))?;
        let [n, m, q] = nums[..] else {
            return Err(parse_err(0, "header must be `n m q`"));
        };
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let [u, v, color] = f[..] else {
                return Err(parse_err(i, "edge line must be `u v color`"));
            };
            let bad = |_| parse_err(i, "non-numeric field");
            edges.push(Edge {
                u: u.parse().map_err(bad)?,
                v: v.parse().map_err(bad)?,
                color: color.parse().map_err(bad)?,
            });
        }
        if edges.len() != m {
            return Err(parse_err(0, &format!("header says {m} edges, found {}", edges.len())));
        }
        Self::from_edges(n, q, edges)
    }
}

fn sample_pairs<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<(VertexId, VertexId)> {
    let mut seen = HashSet::with_capacity(count);
    let mut pairs = Vec::with_capacity(count);
    while pairs.len() < count {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        if seen.insert(pair_key(a, b)) {
            pairs.push(if a < b { (a, b) } else { (b, a) });
        }
    }
    pairs
}
