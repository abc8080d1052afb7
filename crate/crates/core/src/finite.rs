//! Exact circular chromatic numbers of small graphs by `(k, d)`-coloring search.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scheme::Point;

/// Edge length tolerance for unit-distance embeddings.
pub const EMBEDDING_TOLERANCE: f64 = 1e-12;

/// Simple undirected graph, optionally embedded in the plane.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FiniteGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    coords: Option<Vec<Point>>,
    #[cfg_attr(feature = "serde", serde(skip))]
    adj: Vec<Vec<usize>>,
}

impl FiniteGraph {
    /// Builds a graph, normalizing each edge to `(min, max)`.
    ///
    /// Rejects loops, duplicate edges, out-of-range endpoints, a coordinate
    /// list of the wrong length, and embedded edges whose length is not 1.
    pub fn new(n: usize, edges: Vec<(usize, usize)>, coords: Option<Vec<Point>>) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {u}-{v} out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if norm.contains(&e) {
                return Err(Error::InvalidGraph(format!("duplicate edge {}-{}", e.0, e.1)));
            }
            norm.push(e);
        }
        if let Some(pts) = &coords {
            if pts.len() != n {
                return Err(Error::InvalidGraph(format!(
                    "{} coordinates for {n} vertices",
                    pts.len()
                )));
            }
            for &(u, v) in &norm {
                let len = pts[u].dist(pts[v]);
                if (len - 1.0).abs() > EMBEDDING_TOLERANCE {
                    return Err(Error::InvalidGraph(format!("edge {u}-{v} has length {len}")));
                }
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self {
            n,
            edges: norm,
            coords,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn coords(&self) -> Option<&[Point]> {
        self.coords.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, edges, None).expect("cycle needs at least 3 vertices")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::new(n, edges, None).expect("complete graph is simple")
    }

    /// The Moser spindle with a unit-distance embedding.
    ///
    /// Two rhombi made of equilateral triangles share the apex 0; the second
    /// is the first rotated until the far tips 3 and 6 are at distance 1.
    pub fn moser_spindle() -> Self {
        let half_sqrt3 = libm::sqrt(3.0) / 2.0;
        let rhombus = [
            Point::new(half_sqrt3, 0.5),
            Point::new(half_sqrt3, -0.5),
            Point::new(2.0 * half_sqrt3, 0.0),
        ];
        // chord of length 1 on the circle of radius sqrt(3)
        let angle = 2.0 * libm::asin(1.0 / (2.0 * libm::sqrt(3.0)));
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        let rotate = |p: Point| Point::new(c * p.x - s * p.y, s * p.x + c * p.y);
        let mut coords = vec![Point::new(0.0, 0.0)];
        coords.extend(rhombus);
        coords.extend(rhombus.map(rotate));
        let edges = vec![
            (0, 1),
            (0, 2),
            (1, 2),
            (1, 3),
            (2, 3),
            (0, 4),
            (0, 5),
            (4, 5),
            (4, 6),
            (5, 6),
            (3, 6),
        ];
        Self::new(7, edges, Some(coords)).expect("spindle embedding has unit edges")
    }
}

/// Integer colors in `[0, k)` with adjacent colors at circular distance at least `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KdColoring {
    pub k: u32,
    pub d: u32,
    pub colors: Vec<u32>,
}

#[inline]
fn circ_dist(a: u32, b: u32, k: u32) -> u32 {
    let diff = a.abs_diff(b);
    diff.min(k - diff)
}

impl KdColoring {
    /// Re-checks every edge constraint from scratch.
    pub fn is_valid_for(&self, g: &FiniteGraph) -> bool {
        self.colors.len() == g.n()
            && self.colors.iter().all(|&c| c < self.k)
            && g.edges()
                .iter()
                .all(|&(u, v)| circ_dist(self.colors[u], self.colors[v], self.k) >= self.d)
    }
}

/// Search order: degree descending, ties by index.
fn search_order(g: &FiniteGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (core::cmp::Reverse(g.degree(v)), v));
    order
}

/// Exhaustive backtracking for a `(k, d)`-coloring. The first vertex in the
/// search order is pinned to color 0, which loses nothing since rotating all
/// colors preserves every constraint.
pub fn has_kd_coloring(g: &FiniteGraph, k: u32, d: u32) -> Option<KdColoring> {
    if k == 0 || d == 0 {
        return None;
    }
    if g.n() == 0 {
        return Some(KdColoring {
            k,
            d,
            colors: Vec::new(),
        });
    }
    if !g.edges().is_empty() && k < 2 * d {
        return None;
    }
    let order = search_order(g);
    let mut colors: Vec<Option<u32>> = vec![None; g.n()];
    colors[order[0]] = Some(0);
    if extend(g, &order, 1, k, d, &mut colors) {
        Some(KdColoring {
            k,
            d,
            colors: colors.into_iter().map(|c| c.unwrap_or(0)).collect(),
        })
    } else {
        None
    }
}

fn extend(g: &FiniteGraph, order: &[usize], depth: usize, k: u32, d: u32, colors: &mut [Option<u32>]) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    for c in 0..k {
        let ok = g
            .neighbors(v)
            .iter()
            .all(|&u| colors[u].is_none_or(|cu| circ_dist(c, cu, k) >= d));
        if ok {
            colors[v] = Some(c);
            if extend(g, order, depth + 1, k, d, colors) {
                return true;
            }
        }
    }
    colors[v] = None;
    false
}

/// Smallest number of colors in a proper coloring.
pub fn chromatic_number(g: &FiniteGraph) -> u32 {
    if g.n() == 0 {
        return 0;
    }
    (1..=g.n() as u32)
        .find(|&c| has_kd_coloring(g, c, 1).is_some())
        .unwrap_or(g.n() as u32)
}

/// Exact circular chromatic number as a reduced fraction with a witness.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CircularChromatic {
    pub k: u32,
    pub d: u32,
    pub value: f64,
    pub witness: Vec<u32>,
}

impl CircularChromatic {
    /// Compares `k/d` against `num/den` exactly.
    pub fn cmp_fraction(&self, num: u32, den: u32) -> Ordering {
        (self.k as u64 * den as u64).cmp(&(num as u64 * self.d as u64))
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced fractions `k/d` with `2 <= 2d <= k <= max_k`, ascending by value.
pub fn candidate_fractions(max_k: u32) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = (2..=max_k)
        .flat_map(|k| (1..=k / 2).map(move |d| (k, d)))
        .filter(|&(k, d)| gcd(k, d) == 1)
        .collect();
    out.sort_by(|a, b| (a.0 as u64 * b.1 as u64).cmp(&(b.0 as u64 * a.1 as u64)));
    out
}

/// Tries fractions in increasing order and returns the first feasible one.
///
/// The search stops at `k <= n`, relying on the fact that the circular
/// chromatic number of a finite graph is attained by some `k/d` with `k`
/// at most the number of vertices.
pub fn circular_chromatic(g: &FiniteGraph) -> Result<CircularChromatic> {
    if g.n() == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    if g.edges().is_empty() {
        return Ok(CircularChromatic {
            k: 1,
            d: 1,
            value: 1.0,
            witness: vec![0; g.n()],
        });
    }
    for (k, d) in candidate_fractions(g.n() as u32) {
        if let Some(col) = has_kd_coloring(g, k, d) {
            return Ok(CircularChromatic {
                k,
                d,
                value: k as f64 / d as f64,
                witness: col.colors,
            });
        }
    }
    // unreachable for simple graphs: (n, 1) is always feasible
    Err(Error::InvalidGraph("no feasible fraction up to k = n".into()))
}
