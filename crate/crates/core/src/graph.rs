//! Undirected multigraphs, the two random-graph generators, and component labeling.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::degree::DegreeModel;
use crate::error::{FloodError, Result};

/// Resamples allowed when a sampled degree sequence has an odd sum.
pub const ODD_SUM_RETRY_CAP: usize = 1000;

/// Undirected multigraph. Self-loops and parallel edges are allowed.
///
/// Incidence is stored in CSR form. A self-loop occupies a single slot in its
/// endpoint's incidence list, so `degree(v)` counts it once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    slot_edge: Vec<usize>,
    slot_neighbor: Vec<usize>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(FloodError::InvalidGraphParams(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            degree[u] += 1;
            if u != v {
                degree[v] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let total = *offsets.last().unwrap();
        let mut cursor = offsets[..n].to_vec();
        let mut slot_edge = vec![0; total];
        let mut slot_neighbor = vec![0; total];
        for (id, &(u, v)) in edges.iter().enumerate() {
            slot_edge[cursor[u]] = id;
            slot_neighbor[cursor[u]] = v;
            cursor[u] += 1;
            if u != v {
                slot_edge[cursor[v]] = id;
                slot_neighbor[cursor[v]] = u;
                cursor[v] += 1;
            }
        }
        Ok(Graph {
            n,
            edges,
            offsets,
            slot_edge,
            slot_neighbor,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn self_loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// Length of the incidence list of `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edge identifiers incident to `v`.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.slot_edge[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Far endpoint of each incidence slot of `v` (`v` itself for a self-loop).
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.slot_neighbor[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Unweighted shortest-path distances from `source`; `u32::MAX` when unreachable.
    pub fn bfs_distances(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &w in self.neighbors(u) {
                if dist[w] == u32::MAX {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Writes `# n=<n>` followed by one `u v` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# n={}", self.n)?;
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(value) = rest.trim().strip_prefix("n=") {
                    n = Some(value.trim().parse::<usize>().map_err(|e| {
                        FloodError::InvalidGraphParams(format!("bad header on line {}: {e}", lineno + 1))
                    })?);
                }
                continue;
            }
            let mut parts = line.split_whitespace().map(str::parse::<usize>);
            match (parts.next(), parts.next(), parts.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => {
                    return Err(FloodError::InvalidGraphParams(format!(
                        "malformed edge on line {}: {line:?}",
                        lineno + 1
                    )))
                }
            }
        }
        let n = n.ok_or_else(|| FloodError::InvalidGraphParams("missing `# n=` header".into()))?;
        Graph::from_edges(n, edges)
    }
}

/// Simple random graph with each of the `n(n-1)/2` pairs present independently
/// with probability `z/(n-1)`. Uses geometric skipping, so expected time is `O(n + m)`.
pub fn generate_er<R: Rng + ?Sized>(n: usize, z: f64, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(FloodError::InvalidGraphParams(format!("need n >= 2, got {n}")));
    }
    if !(z > 0.0 && z <= (n - 1) as f64) {
        return Err(FloodError::InvalidGraphParams(format!(
            "mean degree must lie in (0, {}], got {z}",
            n - 1
        )));
    }
    let p = z / (n - 1) as f64;
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((v, w));
            }
        }
        return Graph::from_edges(n, edges);
    }
    // Batagelj & Brandes skipping over the lower triangle, row-major
    let log_q = (-p).ln_1p();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        w += 1 + ((-r).ln_1p() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((v, w as usize));
        }
    }
    Graph::from_edges(n, edges)
}

/// Configuration-model multigraph: i.i.d. degrees from `model`, resampled whole
/// until their sum is even, then a uniform perfect matching of the stubs.
pub fn generate_configuration<R: Rng + ?Sized>(n: usize, model: &DegreeModel, rng: &mut R) -> Result<Graph> {
    let degrees = sample_degree_sequence(n, model, rng)?;
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    stubs.shuffle(rng);
    let edges = stubs.chunks_exact(2).map(|pair| (pair[0], pair[1])).collect();
    Graph::from_edges(n, edges)
}

/// i.i.d. degree sequence with even sum.
pub fn sample_degree_sequence<R: Rng + ?Sized>(n: usize, model: &DegreeModel, rng: &mut R) -> Result<Vec<usize>> {
    if model.mean() <= 0.0 {
        return Err(FloodError::ZeroMeanDegree);
    }
    let dist = WeightedIndex::new(model.pmf()).map_err(|e| FloodError::InvalidModel(e.to_string()))?;
    for _ in 0..=ODD_SUM_RETRY_CAP {
        let degrees: Vec<usize> = (0..n).map(|_| dist.sample(rng)).collect();
        if degrees.iter().sum::<usize>() % 2 == 0 {
            return Ok(degrees);
        }
    }
    Err(FloodError::OddDegreeSum(ODD_SUM_RETRY_CAP))
}

/// Connected-component labeling of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    labels: Vec<usize>,
    sizes: Vec<usize>,
    largest: usize,
    largest_nodes: Vec<usize>,
}

impl ComponentLabeling {
    /// Component id of every node; ids are assigned in order of lowest member.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn size_of(&self, component: usize) -> usize {
        self.sizes[component]
    }

    pub fn largest_id(&self) -> usize {
        self.largest
    }

    /// Members of the largest component, ascending.
    pub fn largest_nodes(&self) -> &[usize] {
        &self.largest_nodes
    }

    pub fn largest_size(&self) -> usize {
        self.largest_nodes.len()
    }

    pub fn in_largest(&self, v: usize) -> bool {
        self.labels[v] == self.largest
    }
}

/// Labels components by BFS in node order. Ties for the largest component go to the lowest id.
pub fn largest_component(graph: &Graph) -> ComponentLabeling {
    let n = graph.node_count();
    let mut labels = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        labels[start] = id;
        queue.push_back(start);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &w in graph.neighbors(u) {
                if labels[w] == usize::MAX {
                    labels[w] = id;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    let largest = sizes
        .iter()
        .enumerate()
        .fold(0, |best, (id, &s)| if s > sizes[best] { id } else { best });
    let largest_nodes = if n == 0 {
        Vec::new()
    } else {
        (0..n).filter(|&v| labels[v] == largest).collect()
    };
    ComponentLabeling {
        labels,
        sizes,
        largest,
        largest_nodes,
    }
}
