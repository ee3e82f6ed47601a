//! Generalized Sierpinski gaskets `SG_{d,b}(n)`.
//!
//! Vertices carry integer barycentric coordinates `(x_0, ..., x_d)` with
//! `sum x_i = b^n`. Corner `k` of the stage-`n` gasket sits at `b^n e_k`; for
//! `d = 2` corner 0 is the leftmost vertex `o`, corner 1 the rightmost `i`
//! and corner 2 the topmost `j`.
//!
//! Stage `n + 1` is the union of stage-`n` copies translated by `b^n p` for
//! every offset `p` with non-negative entries summing to `b - 1`. Copies are
//! glued by identifying vertices with equal coordinates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Default cap on the number of edges `build_gasket` will materialize.
pub const MAX_BUILD_EDGES: u64 = 20_000_000;

/// Parameters of `SG_{d,b}(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GasketSpec {
    pub d: u32,
    pub b: u32,
    pub n: u32,
}

impl GasketSpec {
    pub fn new(d: u32, b: u32, n: u32) -> Result<Self> {
        let spec = Self { d, b, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidSpec(format!("dimension d = {} must be >= 2", self.d)));
        }
        if self.b < 2 {
            return Err(Error::InvalidSpec(format!("side length b = {} must be >= 2", self.b)));
        }
        if self.d >= 3 && self.b != 2 {
            return Err(Error::Unsupported(format!(
                "SG_{{{},{}}}: side length b > 2 is only supported for d = 2",
                self.d, self.b
            )));
        }
        Ok(())
    }

    /// Same `(d, b)` at another stage.
    pub fn at_stage(&self, n: u32) -> Self {
        Self { n, ..*self }
    }

    /// Number of stage-`n` copies making up stage `n + 1`: `C(b-1+d, d)`.
    pub fn pieces(&self) -> u64 {
        binomial(u64::from(self.b - 1 + self.d), u64::from(self.d))
    }

    pub fn corner_count(&self) -> usize {
        self.d as usize + 1
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form vertex count.
///
/// `b = 2`: `(d+1)/2 [(d+1)^n + 1]`.
/// `d = 2`: `[(b+4) P^n + 2(b+1)] / (b+2)` with `P = b(b+1)/2`.
pub fn count_vertices(spec: &GasketSpec) -> BigUint {
    let d = u64::from(spec.d);
    let b = u64::from(spec.b);
    let pn = BigUint::from(spec.pieces()).pow(spec.n);
    if spec.b == 2 {
        (BigUint::from(d + 1) * (pn + 1u32)) / 2u32
    } else {
        (BigUint::from(b + 4) * pn + 2 * (b + 1)) / (b + 2)
    }
}

/// Closed-form edge count: each stage-0 simplex contributes `C(d+1, 2)` edges
/// and distinct copies never share an edge.
pub fn count_edges(spec: &GasketSpec) -> BigUint {
    let d = u64::from(spec.d);
    BigUint::from(d * (d + 1) / 2) * BigUint::from(spec.pieces()).pow(spec.n)
}

/// Simple undirected graph with distinguished corner vertices.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub corners: Vec<usize>,
}

impl Graph {
    /// Normalizes and sorts `edges`; rejects loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, corners: Vec<usize>) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidSpec(format!("duplicate edge {:?}", w[0])));
            }
        }
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::InvalidSpec(format!("loop at vertex {u}")));
            }
            if v >= vertex_count {
                return Err(Error::InvalidSpec(format!(
                    "edge ({u}, {v}) references a vertex >= {vertex_count}"
                )));
            }
        }
        if let Some(&c) = corners.iter().find(|&&c| c >= vertex_count) {
            return Err(Error::InvalidSpec(format!("corner {c} out of range")));
        }
        Ok(Self {
            vertex_count,
            edges,
            corners,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }
}

/// A built gasket: the graph plus the lattice coordinates of every vertex.
#[derive(Clone, Debug)]
pub struct GasketGraph {
    pub spec: GasketSpec,
    /// Barycentric coordinates, sorted lexicographically; index = vertex id.
    pub coords: Vec<Vec<u64>>,
    pub graph: Graph,
}

impl GasketGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn corners(&self) -> &[usize] {
        &self.graph.corners
    }

    pub fn vertex_at(&self, coord: &[u64]) -> Option<usize> {
        self.coords.binary_search_by(|c| c.as_slice().cmp(coord)).ok()
    }
}

/// All offsets in `Z_{>=0}^{d+1}` whose entries sum to `total`, sorted.
pub(crate) fn compositions(parts: usize, total: u64) -> Vec<Vec<u64>> {
    fn rec(prefix: &mut Vec<u64>, parts: usize, left: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() + 1 == parts {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=left {
            prefix.push(x);
            rec(prefix, parts, left - x, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(parts), parts, total, &mut out);
    out.sort();
    out
}

/// Base points of the `P^n` stage-0 simplices of `SG_{d,b}(n)`.
fn simplex_bases(spec: &GasketSpec) -> Vec<Vec<u64>> {
    let dim = spec.d as usize + 1;
    let offsets = compositions(dim, u64::from(spec.b) - 1);
    let mut bases = vec![vec![0u64; dim]];
    let mut scale = 1u64;
    for _ in 0..spec.n {
        let mut next = Vec::with_capacity(bases.len() * offsets.len());
        for p in &offsets {
            for s in &bases {
                next.push(s.iter().zip(p).map(|(x, o)| x + o * scale).collect());
            }
        }
        bases = next;
        scale *= u64::from(spec.b);
    }
    bases
}

/// Builds `SG_{d,b}(n)` with vertices in lexicographic coordinate order and
/// sorted edges.
pub fn build_gasket(spec: GasketSpec) -> Result<GasketGraph> {
    build_gasket_capped(spec, MAX_BUILD_EDGES)
}

pub fn build_gasket_capped(spec: GasketSpec, max_edges: u64) -> Result<GasketGraph> {
    spec.validate()?;
    let expected_edges = count_edges(&spec);
    if expected_edges > BigUint::from(max_edges) {
        return Err(Error::TooLarge {
            what: "gasket edge count",
            actual: expected_edges.to_u128().unwrap_or(u128::MAX),
            limit: u128::from(max_edges),
        });
    }
    let dim = spec.d as usize + 1;
    let bases = simplex_bases(&spec);
    let corner_of = |base: &[u64], k: usize| {
        let mut c = base.to_vec();
        c[k] += 1;
        c
    };

    let mut coord_set = BTreeSet::new();
    for base in &bases {
        for k in 0..dim {
            coord_set.insert(corner_of(base, k));
        }
    }
    let coords: Vec<Vec<u64>> = coord_set.into_iter().collect();
    let index: BTreeMap<&[u64], usize> = coords
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_slice(), i))
        .collect();

    let mut edges = Vec::with_capacity(bases.len() * dim * (dim - 1) / 2);
    for base in &bases {
        let ids: Vec<usize> = (0..dim).map(|k| index[corner_of(base, k).as_slice()]).collect();
        for x in 0..dim {
            for y in x + 1..dim {
                edges.push((ids[x], ids[y]));
            }
        }
    }

    let side = u64::from(spec.b).pow(spec.n);
    let corners = (0..dim)
        .map(|k| {
            let mut c = vec![0u64; dim];
            c[k] = side;
            index[c.as_slice()]
        })
        .collect();

    let graph = Graph::new(coords.len(), edges, corners)?;
    Ok(GasketGraph { spec, coords, graph })
}

/// How the `P` stage-`n` pieces are glued into stage `n + 1`.
///
/// Junction ids are the vertex ids of `SG_{d,b}(1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingLayout {
    pub d: u32,
    pub b: u32,
    /// `slots[p][k]` = junction id of corner `k` of piece `p`.
    pub slots: Vec<Vec<usize>>,
    /// Junction ids of the composite's corners, in corner-label order.
    pub outer: Vec<usize>,
    pub junction_count: usize,
    /// Coordinates of each junction in the stage-1 lattice.
    pub junction_coords: Vec<Vec<u64>>,
}

impl GluingLayout {
    pub fn pieces(&self) -> usize {
        self.slots.len()
    }

    pub fn corner_count(&self) -> usize {
        self.d as usize + 1
    }
}

pub fn build_layout(d: u32, b: u32) -> Result<GluingLayout> {
    let spec = GasketSpec::new(d, b, 1)?;
    let stage1 = build_gasket(spec)?;
    let dim = d as usize + 1;
    let slots = compositions(dim, u64::from(b) - 1)
        .into_iter()
        .map(|p| {
            (0..dim)
                .map(|k| {
                    let mut c = p.clone();
                    c[k] += 1;
                    stage1.vertex_at(&c).expect("piece corner is a stage-1 vertex")
                })
                .collect()
        })
        .collect();
    Ok(GluingLayout {
        d,
        b,
        slots,
        outer: stage1.corners().to_vec(),
        junction_count: stage1.vertex_count(),
        junction_coords: stage1.coords,
    })
}

/// Writes the edge-list format:
///
/// ```text
/// # d b n V E
/// # corners c0 c1 ...
/// u v
/// ```
pub fn write_edge_list<W: Write>(g: &GasketGraph, mut out: W) -> Result<()> {
    let s = g.spec;
    writeln!(out, "# {} {} {} {} {}", s.d, s.b, s.n, g.vertex_count(), g.edge_count())?;
    let mut line = String::from("# corners");
    for c in g.corners() {
        write!(line, " {c}").expect("string write");
    }
    writeln!(out, "{line}")?;
    for &(u, v) in &g.graph.edges {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Edge list read back from text; `spec` is present when the header names one.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub spec: Option<GasketSpec>,
    pub graph: Graph,
}

/// Reads the format produced by [`write_edge_list`]. The header lines are
/// optional; without a `# d b n V E` line the vertex count is inferred from
/// the largest endpoint. A two-number header `# V E` is also accepted.
pub fn read_edge_list<R: BufRead>(input: R) -> Result<ParsedGraph> {
    let mut spec = None;
    let mut declared: Option<(usize, usize)> = None;
    let mut corners = Vec::new();
    let mut edges = Vec::new();
    let bad = |lineno: usize, msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));

    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut words = rest.split_whitespace().peekable();
            if words.peek() == Some(&"corners") {
                words.next();
                corners = words
                    .map(|w| w.parse().map_err(|_| bad(lineno, "bad corner id")))
                    .collect::<Result<_>>()?;
                continue;
            }
            let nums: std::result::Result<Vec<u64>, _> = words.map(str::parse::<u64>).collect();
            match nums.as_deref() {
                Ok(&[d, b, n, v, e]) => {
                    let to_u32 = |x: u64| u32::try_from(x).map_err(|_| bad(lineno, "header value too large"));
                    spec = Some(GasketSpec::new(to_u32(d)?, to_u32(b)?, to_u32(n)?)?);
                    declared = Some((v as usize, e as usize));
                }
                Ok(&[v, e]) => declared = Some((v as usize, e as usize)),
                _ => {} // free-form comment
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(u), Some(v), None) = (it.next(), it.next(), it.next()) else {
            return Err(bad(lineno, "expected `u v`"));
        };
        let u: usize = u.parse().map_err(|_| bad(lineno, "bad vertex id"))?;
        let v: usize = v.parse().map_err(|_| bad(lineno, "bad vertex id"))?;
        edges.push((u, v));
    }

    let inferred = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let vertex_count = match declared {
        Some((v, e)) => {
            if e != edges.len() {
                return Err(Error::Parse(format!("header declares {e} edges, found {}", edges.len())));
            }
            v
        }
        None => inferred,
    };
    let graph = Graph::new(vertex_count, edges, corners)?;
    Ok(ParsedGraph { spec, graph })
}

/// Degree histogram as `(degree, multiplicity)` pairs, ascending by degree.
pub fn degree_spectrum(graph: &Graph) -> Vec<(usize, usize)> {
    let mut hist = BTreeMap::new();
    for d in graph.degrees() {
        *hist.entry(d).or_insert(0usize) += 1;
    }
    hist.into_iter().collect()
}
