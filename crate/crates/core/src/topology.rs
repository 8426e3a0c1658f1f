//! Spin-network graphs.
//!
//! A [`Topology`] is an immutable, canonically sorted weighted edge list plus a
//! CSR adjacency used by the Monte Carlo engines. Generators cover the
//! non-interacting register, square lattices, the Pegasus annealer graph and
//! connected patches sampled from a parent graph.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{fingerprint, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyKind {
    Individual,
    SquareLattice,
    Pegasus,
    PegasusPatch,
    Custom,
}

impl TopologyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TopologyKind::Individual => "individual",
            TopologyKind::SquareLattice => "square_lattice",
            TopologyKind::Pegasus => "pegasus",
            TopologyKind::PegasusPatch => "pegasus_patch",
            TopologyKind::Custom => "custom",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "individual" => TopologyKind::Individual,
            "square_lattice" => TopologyKind::SquareLattice,
            "pegasus" => TopologyKind::Pegasus,
            "pegasus_patch" => TopologyKind::PegasusPatch,
            "custom" => TopologyKind::Custom,
            other => return Err(Error::invalid(format!("unknown topology kind `{other}`"))),
        })
    }
}

/// Undirected coupler `i < j` with dimensionless weight `α_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(i: usize, j: usize, weight: f64) -> Self {
        Edge { i, j, weight }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Adjacency {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<f64>,
}

impl Adjacency {
    fn build(n: usize, edges: &[Edge]) -> Self {
        let mut degree = vec![0usize; n];
        for e in edges {
            degree[e.i] += 1;
            degree[e.j] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        // Edges are sorted by (i, j), so every neighbor list comes out sorted.
        for e in edges {
            neighbors[cursor[e.i]] = e.j as u32;
            weights[cursor[e.i]] = e.weight;
            cursor[e.i] += 1;
        }
        for e in edges {
            neighbors[cursor[e.j]] = e.i as u32;
            weights[cursor[e.j]] = e.weight;
            cursor[e.j] += 1;
        }
        for v in 0..n {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            let mut pairs: Vec<(u32, f64)> = neighbors[lo..hi]
                .iter()
                .copied()
                .zip(weights[lo..hi].iter().copied())
                .collect();
            pairs.sort_by_key(|p| p.0);
            for (k, (nb, w)) in pairs.into_iter().enumerate() {
                neighbors[lo + k] = nb;
                weights[lo + k] = w;
            }
        }
        Adjacency { offsets, neighbors, weights }
    }
}

/// Weighted spin network with `n` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    n: usize,
    edges: Vec<Edge>,
    kind: TopologyKind,
    seed: u64,
    parent_nodes: Option<Vec<usize>>,
    adjacency: Adjacency,
}

impl Topology {
    /// Validates and canonicalizes an edge list. Edges may be given in either
    /// orientation; they are stored as `i < j`, sorted.
    pub fn new(n: usize, edges: Vec<Edge>, kind: TopologyKind, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("topology needs at least one node"));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for e in edges {
            if e.i == e.j {
                return Err(Error::invalid(format!("self-loop on node {}", e.i)));
            }
            let (i, j) = if e.i < e.j { (e.i, e.j) } else { (e.j, e.i) };
            if j >= n {
                return Err(Error::invalid(format!("edge ({i}, {j}) references a node >= {n}")));
            }
            if !e.weight.is_finite() {
                return Err(Error::invalid(format!("edge ({i}, {j}) has non-finite weight")));
            }
            canon.push(Edge::new(i, j, e.weight));
        }
        canon.sort_by_key(|e| (e.i, e.j));
        if let Some(w) = canon.windows(2).find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j)) {
            return Err(Error::invalid(format!("duplicate edge ({}, {})", w[0].i, w[0].j)));
        }
        if kind == TopologyKind::Individual && !canon.is_empty() {
            return Err(Error::invalid("individual topology cannot have edges"));
        }
        let adjacency = Adjacency::build(n, &canon);
        Ok(Topology { n, edges: canon, kind, seed, parent_nodes: None, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// For extracted subgraphs: `parent_nodes()[k]` is the parent index of node `k`.
    pub fn parent_nodes(&self) -> Option<&[usize]> {
        self.parent_nodes.as_deref()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency.offsets[v + 1] - self.adjacency.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Neighbor indices of `v`, ascending.
    #[inline]
    pub fn neighbor_indices(&self, v: usize) -> &[u32] {
        let a = &self.adjacency;
        &a.neighbors[a.offsets[v]..a.offsets[v + 1]]
    }

    /// Coupler weights aligned with [`Topology::neighbor_indices`].
    #[inline]
    pub fn neighbor_weights(&self, v: usize) -> &[f64] {
        let a = &self.adjacency;
        &a.weights[a.offsets[v]..a.offsets[v + 1]]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.neighbor_indices(v)
            .iter()
            .zip(self.neighbor_weights(v))
            .map(|(&j, &w)| (j as usize, w))
    }

    /// Mean degree, `2|E| / n`.
    pub fn average_connectivity(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    /// Couplers per node, `|E| / n`. Annealer vendors quote this figure as
    /// "average connectivity".
    pub fn edges_per_node(&self) -> f64 {
        self.edges.len() as f64 / self.n as f64
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0).len() == self.n
    }

    fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(v) = queue.pop_front() {
            out.push(v);
            for &u in self.neighbor_indices(v) {
                let u = u as usize;
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        out
    }

    /// Subgraph induced by `nodes` (parent indices, any order, no repeats).
    /// Nodes are relabelled `0..k` in ascending parent order.
    pub fn induced_subgraph(&self, nodes: &[usize], kind: TopologyKind, seed: u64) -> Result<Topology> {
        let mut sorted = nodes.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("induced subgraph node list has repeats"));
        }
        if let Some(&bad) = sorted.iter().find(|&&v| v >= self.n) {
            return Err(Error::invalid(format!("node {bad} not in parent of size {}", self.n)));
        }
        let mut local = vec![usize::MAX; self.n];
        for (k, &v) in sorted.iter().enumerate() {
            local[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| local[e.i] != usize::MAX && local[e.j] != usize::MAX)
            .map(|e| Edge::new(local[e.i], local[e.j], e.weight))
            .collect();
        let mut sub = Topology::new(sorted.len(), edges, kind, seed)?;
        // Compose with any existing provenance map.
        sub.parent_nodes = Some(match &self.parent_nodes {
            Some(p) => sorted.iter().map(|&v| p[v]).collect(),
            None => sorted,
        });
        Ok(sub)
    }

    /// Short content hash of the canonical edge-list text.
    pub fn fingerprint(&self) -> String {
        fingerprint(self.to_edge_list().as_bytes())
    }

    /// Edge-list text: header `# nodes=N kind=K seed=S`, then `i j weight` lines.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# nodes={} kind={} seed={}\n", self.n, self.kind, self.seed);
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.i, e.j, e.weight));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Topology> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty edge list"))?;
        let header = header
            .strip_prefix('#')
            .ok_or_else(|| Error::parse(1, "missing `# nodes=N kind=K seed=S` header"))?;
        let (mut n, mut kind, mut seed) = (None, None, None);
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::parse(1, format!("malformed header field `{field}`")))?;
            match key {
                "nodes" => n = Some(value.parse::<usize>().map_err(|e| Error::parse(1, e.to_string()))?),
                "kind" => kind = Some(value.parse::<TopologyKind>().map_err(|e| Error::parse(1, e.to_string()))?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|e| Error::parse(1, e.to_string()))?),
                other => return Err(Error::parse(1, format!("unknown header field `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::parse(1, "header lacks nodes="))?;
        let kind = kind.ok_or_else(|| Error::parse(1, "header lacks kind="))?;
        let seed = seed.ok_or_else(|| Error::parse(1, "header lacks seed="))?;

        let mut edges = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = |what: &str| {
                parts
                    .next()
                    .ok_or_else(|| Error::parse(idx + 1, format!("missing {what}")))
            };
            let i = next("i")?.parse::<usize>().map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            let j = next("j")?.parse::<usize>().map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            let w = next("weight")?.parse::<f64>().map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            if parts.next().is_some() {
                return Err(Error::parse(idx + 1, "trailing fields"));
            }
            edges.push(Edge::new(i, j, w));
        }
        Topology::new(n, edges, kind, seed)
    }
}

/// Register of `n` independent qubits.
pub fn build_individual(n: usize) -> Result<Topology> {
    if n == 0 {
        return Err(Error::invalid("individual register needs n >= 1"));
    }
    Topology::new(n, Vec::new(), TopologyKind::Individual, 0)
}

/// `L × L` nearest-neighbour lattice, row-major node indices.
pub fn build_square_lattice(l: usize, periodic: bool) -> Result<Topology> {
    if l == 0 {
        return Err(Error::invalid("lattice side must be >= 1"));
    }
    if periodic && l < 3 {
        return Err(Error::invalid("periodic lattice needs L >= 3"));
    }
    let idx = |r: usize, c: usize| r * l + c;
    let mut edges = Vec::with_capacity(2 * l * l);
    for r in 0..l {
        for c in 0..l {
            if c + 1 < l {
                edges.push(Edge::new(idx(r, c), idx(r, c + 1), 1.0));
            } else if periodic {
                edges.push(Edge::new(idx(r, 0), idx(r, c), 1.0));
            }
            if r + 1 < l {
                edges.push(Edge::new(idx(r, c), idx(r + 1, c), 1.0));
            } else if periodic {
                edges.push(Edge::new(idx(0, c), idx(r, c), 1.0));
            }
        }
    }
    Topology::new(l * l, edges, TopologyKind::SquareLattice, 0)
}

// Standard Pegasus shift offsets for the vertical (index 0) and horizontal
// (index 1) qubit families.
const PEGASUS_OFFSETS: [[usize; 12]; 2] = [
    [2, 2, 2, 2, 10, 10, 10, 10, 6, 6, 6, 6],
    [6, 6, 6, 6, 2, 2, 2, 2, 10, 10, 10, 10],
];

/// Pegasus coordinate `(u, w, k, z)` of a linear node index in `P_m`.
pub fn pegasus_coordinates(m: usize, index: usize) -> (usize, usize, usize, usize) {
    let m1 = m - 1;
    let z = index % m1;
    let rest = index / m1;
    let k = rest % 12;
    let rest = rest / 12;
    let w = rest % m;
    let u = rest / m;
    (u, w, k, z)
}

fn pegasus_linear(m: usize, u: usize, w: usize, k: usize, z: usize) -> usize {
    let m1 = m - 1;
    ((u * m + w) * 12 + k) * m1 + z
}

/// Pegasus graph `P_m` in `(u, w, k, z)` coordinates.
///
/// The untrimmed graph has `24·m·(m−1)` qubits. The trimmed graph drops the
/// boundary qubits that have no internal coupler, leaving `8·(3m−1)·(m−1)`.
/// Node order follows the linear coordinate index, relabelled contiguously
/// after trimming.
pub fn build_pegasus(m: usize, trimmed: bool) -> Result<Topology> {
    if m < 2 {
        return Err(Error::invalid("Pegasus size m must be >= 2"));
    }
    let m1 = m - 1;
    let total = 24 * m * m1;
    let mut edges = Vec::new();
    let mut has_internal = vec![false; total];

    // External couplers: same line, consecutive z.
    for u in 0..2 {
        for w in 0..m {
            for k in 0..12 {
                for z in 0..m1.saturating_sub(1) {
                    edges.push(Edge::new(
                        pegasus_linear(m, u, w, k, z),
                        pegasus_linear(m, u, w, k, z + 1),
                        1.0,
                    ));
                }
            }
        }
    }
    // Odd couplers: paired k within a tile.
    for u in 0..2 {
        for w in 0..m {
            for k in (0..12).step_by(2) {
                for z in 0..m1 {
                    edges.push(Edge::new(
                        pegasus_linear(m, u, w, k, z),
                        pegasus_linear(m, u, w, k + 1, z),
                        1.0,
                    ));
                }
            }
        }
    }
    // Internal couplers between vertical (u=0) and horizontal (u=1) qubits.
    let [off0, off1] = PEGASUS_OFFSETS;
    for w in 0..m {
        for kk in 0..12 {
            let k_lo = if w == 0 { off1[kk] } else { 0 };
            let k_hi = if w < m1 { 12 } else { off1[kk] };
            for k in k_lo..k_hi {
                for z in 0..m1 {
                    let w2 = z + usize::from(kk < off0[k]);
                    let z2 = w - usize::from(k < off1[kk]);
                    let a = pegasus_linear(m, 0, w, k, z);
                    let b = pegasus_linear(m, 1, w2, kk, z2);
                    has_internal[a] = true;
                    has_internal[b] = true;
                    edges.push(Edge::new(a, b, 1.0));
                }
            }
        }
    }

    let full = Topology::new(total, edges, TopologyKind::Pegasus, 0)?;
    if !trimmed {
        return Ok(full);
    }
    let keep: Vec<usize> = (0..total).filter(|&v| has_internal[v]).collect();
    let mut sub = full.induced_subgraph(&keep, TopologyKind::Pegasus, 0)?;
    sub.parent_nodes = None;
    Ok(sub)
}

/// Removes `count` uniformly chosen nodes, e.g. to model inactive qubits.
pub fn delete_random_nodes(parent: &Topology, count: usize, seed: u64) -> Result<Topology> {
    if count >= parent.n {
        return Err(Error::invalid(format!(
            "cannot delete {count} of {} nodes",
            parent.n
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut order: Vec<usize> = (0..parent.n).collect();
    order.shuffle(&mut rng);
    let keep = &order[count..];
    parent.induced_subgraph(keep, parent.kind, seed)
}

/// Working-graph stand-in for a 5612-qubit Pegasus chip: trimmed `P_16` with
/// 28 seeded inactive qubits.
pub fn pegasus_working_graph(seed: u64) -> Result<Topology> {
    let full = build_pegasus(16, true)?;
    delete_random_nodes(&full, 28, seed)
}

/// Grows a patch breadth-first from `start`. Within a BFS layer the next node
/// is the one with the most links into the patch, ties going to the earliest
/// discovered. Stops at `target_n` nodes or when the component is exhausted.
fn grow_patch(parent: &Topology, start: usize, target_n: usize) -> Vec<usize> {
    let mut links = vec![0u32; parent.n];
    let mut order = vec![usize::MAX; parent.n];
    let mut layer = vec![0usize; parent.n];
    let mut selected_mask = vec![false; parent.n];
    let mut heap = BinaryHeap::from([(Reverse(0usize), 0u32, Reverse(0usize), start)]);
    order[start] = 0;
    let mut discovered = 1;
    let mut selected = Vec::with_capacity(target_n);
    while let Some((_, l, _, v)) = heap.pop() {
        if selected_mask[v] || l != links[v] {
            continue;
        }
        selected_mask[v] = true;
        selected.push(v);
        if selected.len() == target_n {
            break;
        }
        for &u in parent.neighbor_indices(v) {
            let u = u as usize;
            if selected_mask[u] {
                continue;
            }
            if order[u] == usize::MAX {
                order[u] = discovered;
                layer[u] = layer[v] + 1;
                discovered += 1;
            }
            links[u] += 1;
            heap.push((Reverse(layer[u]), links[u], Reverse(order[u]), u));
        }
    }
    selected
}

/// Connected patch of exactly `target_n` nodes grown from a seeded start
/// node; every parent edge between selected nodes is kept.
///
/// Growth is breadth-first; inside the last, partially filled layer it
/// prefers nodes that close the most couplers, which keeps patches compact.
/// Neighbours are discovered in ascending index order, so the patch is a pure
/// function of `(parent, target_n, seed)`.
pub fn sample_patch(parent: &Topology, target_n: usize, seed: u64) -> Result<Topology> {
    if target_n == 0 || target_n > parent.n {
        return Err(Error::invalid(format!(
            "patch size {target_n} must be in 1..={}",
            parent.n
        )));
    }
    if target_n == parent.n {
        if !parent.is_connected() {
            return Err(Error::Infeasible("parent graph is disconnected".into()));
        }
        let all: Vec<usize> = (0..parent.n).collect();
        return parent.induced_subgraph(&all, TopologyKind::PegasusPatch, seed);
    }

    let mut rng = rng_from_seed(seed);
    let mut starts: Vec<usize> = (0..parent.n).collect();
    starts.shuffle(&mut rng);
    let mut tried = vec![false; parent.n];
    for &start in &starts {
        if tried[start] {
            continue;
        }
        let selected = grow_patch(parent, start, target_n);
        if selected.len() == target_n {
            return parent.induced_subgraph(&selected, TopologyKind::PegasusPatch, seed);
        }
        // The whole component was too small; skip all of it.
        for v in selected {
            tried[v] = true;
        }
    }
    Err(Error::Infeasible(format!(
        "no connected component with {target_n} nodes"
    )))
}

/// Uniform-ish random `degree`-regular graph (incremental pairing with
/// restarts), unit weights.
pub fn build_random_regular(n: usize, degree: usize, seed: u64) -> Result<Topology> {
    if n == 0 || degree >= n || !(n * degree).is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "no simple {degree}-regular graph on {n} nodes"
        )));
    }
    let mut rng = rng_from_seed(seed);
    for _attempt in 0..1000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
        let mut present: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut stuck = false;
        while !stubs.is_empty() {
            let mut placed = false;
            for _ in 0..(50 * stubs.len()) {
                let a = rng.random_range(0..stubs.len());
                let b = rng.random_range(0..stubs.len());
                let (u, v) = (stubs[a], stubs[b]);
                let key = (u.min(v), u.max(v));
                if a == b || u == v || present.contains(&key) {
                    continue;
                }
                present.insert(key);
                let (hi, lo) = (a.max(b), a.min(b));
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                placed = true;
                break;
            }
            if !placed {
                stuck = true;
                break;
            }
        }
        if !stuck {
            let edges = present.into_iter().map(|(i, j)| Edge::new(i, j, 1.0)).collect();
            return Topology::new(n, edges, TopologyKind::Custom, seed);
        }
    }
    Err(Error::Infeasible(format!(
        "failed to pair stubs for a {degree}-regular graph on {n} nodes"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn individual_has_no_edges() {
        for n in [1, 324, 5612] {
            let t = build_individual(n).unwrap();
            assert_eq!(t.n(), n);
            assert!(t.edges().is_empty());
            assert_eq!(t.average_connectivity(), 0.0);
        }
        assert!(matches!(build_individual(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn square_lattice_counts() {
        let t = build_square_lattice(1, false).unwrap();
        assert_eq!((t.n(), t.edges().len()), (1, 0));
        let t = build_square_lattice(10, false).unwrap();
        assert_eq!((t.n(), t.edges().len()), (100, 180));
        assert!((t.average_connectivity() - 3.6).abs() < 1e-12);
        let t = build_square_lattice(18, false).unwrap();
        assert_eq!((t.n(), t.edges().len()), (324, 612));
        let t = build_square_lattice(5, true).unwrap();
        assert_eq!(t.edges().len(), 50);
        assert!((0..25).all(|v| t.degree(v) == 4));
        assert!(build_square_lattice(2, true).is_err());
        assert!(build_square_lattice(0, false).is_err());
    }

    #[test]
    fn open_lattice_degrees_and_interior() {
        let l = 7;
        let t = build_square_lattice(l, false).unwrap();
        for r in 0..l {
            for c in 0..l {
                let edge_r = r == 0 || r == l - 1;
                let edge_c = c == 0 || c == l - 1;
                let expect = 4 - usize::from(edge_r) - usize::from(edge_c);
                assert_eq!(t.degree(r * l + c), expect);
            }
        }
    }

    #[test]
    fn triangle_connectivity() {
        let t = Topology::new(
            3,
            vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(2, 0, 1.0)],
            TopologyKind::Custom,
            0,
        )
        .unwrap();
        assert_eq!(t.average_connectivity(), 2.0);
        assert_eq!(t.edges()[1], Edge::new(0, 2, 1.0));
    }

    #[test]
    fn rejects_bad_edges() {
        let dup = vec![Edge::new(0, 1, 1.0), Edge::new(1, 0, 1.0)];
        assert!(Topology::new(2, dup, TopologyKind::Custom, 0).is_err());
        assert!(Topology::new(2, vec![Edge::new(1, 1, 1.0)], TopologyKind::Custom, 0).is_err());
        assert!(Topology::new(2, vec![Edge::new(0, 2, 1.0)], TopologyKind::Custom, 0).is_err());
        assert!(Topology::new(2, vec![Edge::new(0, 1, 1.0)], TopologyKind::Individual, 0).is_err());
    }

    #[test]
    fn pegasus_small_sizes() {
        let p2 = build_pegasus(2, false).unwrap();
        assert_eq!(p2.n(), 48);
        let p2t = build_pegasus(2, true).unwrap();
        assert_eq!(p2t.n(), 8 * 5);
        assert!(build_pegasus(1, false).is_err());
        for m in 2..=6 {
            let full = build_pegasus(m, false).unwrap();
            let trim = build_pegasus(m, true).unwrap();
            assert_eq!(full.n(), 24 * m * (m - 1));
            assert_eq!(trim.n(), 8 * (3 * m - 1) * (m - 1));
            assert!(full.max_degree() <= 15);
            assert!(trim.max_degree() <= 15);
        }
    }

    #[test]
    fn pegasus_coordinates_round_trip() {
        let m = 5;
        for idx in 0..24 * m * (m - 1) {
            let (u, w, k, z) = pegasus_coordinates(m, idx);
            assert_eq!(pegasus_linear(m, u, w, k, z), idx);
        }
    }

    #[test]
    fn edge_list_parse_errors() {
        assert!(Topology::from_edge_list("").is_err());
        assert!(Topology::from_edge_list("nodes=2\n").is_err());
        assert!(Topology::from_edge_list("# nodes=2 kind=custom\n").is_err());
        assert!(Topology::from_edge_list("# nodes=2 kind=custom seed=0\n0 1\n").is_err());
        assert!(Topology::from_edge_list("# nodes=2 kind=nope seed=0\n").is_err());
        let t = Topology::from_edge_list("# nodes=2 kind=custom seed=3\n0 1 0.5\n").unwrap();
        assert_eq!(t.edges(), &[Edge::new(0, 1, 0.5)]);
        assert_eq!(t.seed(), 3);
    }

    #[test]
    fn patch_identity_and_errors() {
        let lat = build_square_lattice(6, false).unwrap();
        let same = sample_patch(&lat, 36, 9).unwrap();
        assert_eq!(same.edges(), lat.edges());
        assert!(sample_patch(&lat, 37, 9).is_err());

        // Two disconnected triangles: a 4-node patch is infeasible.
        let edges = vec![
            Edge::new(0, 1, 1.0),
            Edge::new(1, 2, 1.0),
            Edge::new(0, 2, 1.0),
            Edge::new(3, 4, 1.0),
            Edge::new(4, 5, 1.0),
            Edge::new(3, 5, 1.0),
        ];
        let two = Topology::new(6, edges, TopologyKind::Custom, 0).unwrap();
        assert!(matches!(sample_patch(&two, 4, 1), Err(Error::Infeasible(_))));
        assert_eq!(sample_patch(&two, 3, 1).unwrap().edges().len(), 3);
    }

    #[test]
    fn random_regular_is_regular() {
        let t = build_random_regular(64, 12, 5).unwrap();
        assert!((0..64).all(|v| t.degree(v) == 12));
        assert_eq!(t, build_random_regular(64, 12, 5).unwrap());
        assert!(build_random_regular(5, 3, 0).is_err());
    }
}
