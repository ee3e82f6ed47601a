//! Ground-truth counts that do not depend on any recursion.
//!
//! Two independent routes to `N_AO(G)`:
//!
//! * exhaustive enumeration of all `2^e` orientations, and
//! * the chromatic polynomial, `N_AO(G) = (-1)^v P(G, -1)`, evaluated by
//!   deletion-contraction.
//!
//! The enumeration also records, for every acyclic orientation, which
//! corners reach which, giving the labeled boundary-state counts.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gasket::Graph;
use crate::states::{ClassTable, CornerPoset, MAX_CORNERS};

/// Exact non-negative count.
pub type BigCount = BigUint;

/// Default edge cap for exhaustive enumeration.
pub const DEFAULT_BRUTE_FORCE_EDGES: usize = 34;
/// Default edge cap for deletion-contraction. Intermediate values are bounded
/// by `2^e` in absolute value, so anything below 120 fits the `i128` kernel.
pub const DEFAULT_CHROMATIC_EDGES: usize = 64;

const MAX_MASK_VERTICES: usize = 64;

/// One direction bit per edge: bit `i` set means edge `i = (u, v)`, `u < v`,
/// is directed `u -> v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    words: Vec<u64>,
    len: usize,
}

impl Orientation {
    /// All edges directed from higher to lower index.
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_u64(bits: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 holds at most 64 edges");
        let mut o = Self::new(len);
        if len > 0 {
            o.words[0] = if len == 64 { bits } else { bits & ((1 << len) - 1) };
        }
        o
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut o = Self::new(len);
        for i in 0..len {
            o.set(i, f(i));
        }
        o
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, forward: bool) {
        assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if forward {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    /// Every edge flipped.
    pub fn reversed(&self) -> Self {
        Self::from_fn(self.len, |i| !self.get(i))
    }

    /// Directed arcs `(tail, head)` in edge order.
    pub fn arcs(&self, graph: &Graph) -> Vec<(usize, usize)> {
        assert_eq!(self.len, graph.edge_count(), "orientation length must equal e(G)");
        graph
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| if self.get(i) { (u, v) } else { (v, u) })
            .collect()
    }
}

/// `true` iff the oriented graph has no directed cycle (Kahn's algorithm).
///
/// Panics if the orientation length differs from the edge count.
pub fn is_acyclic(graph: &Graph, orientation: &Orientation) -> bool {
    let n = graph.vertex_count;
    let mut indeg = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for (t, h) in orientation.arcs(graph) {
        out[t].push(h);
        indeg[h] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    removed == n
}

/// Reachability relation among `graph.corners` under an acyclic orientation.
pub fn corner_reachability(graph: &Graph, orientation: &Orientation) -> Result<CornerPoset> {
    if orientation.len() != graph.edge_count() {
        return Err(Error::ContractViolation(format!(
            "orientation has {} bits, graph has {} edges",
            orientation.len(),
            graph.edge_count()
        )));
    }
    if !is_acyclic(graph, orientation) {
        return Err(Error::ContractViolation(
            "corner reachability requested for a cyclic orientation".into(),
        ));
    }
    let k = graph.corners.len();
    let mut out = vec![Vec::new(); graph.vertex_count];
    for (t, h) in orientation.arcs(graph) {
        out[t].push(h);
    }
    let mut pairs = Vec::new();
    for (ci, &c) in graph.corners.iter().enumerate() {
        let mut seen = vec![false; graph.vertex_count];
        let mut stack = vec![c];
        seen[c] = true;
        while let Some(u) = stack.pop() {
            for &w in &out[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        for (cj, &c2) in graph.corners.iter().enumerate() {
            if ci != cj && seen[c2] {
                pairs.push((ci, cj));
            }
        }
    }
    CornerPoset::from_pairs(k, &pairs)
}

// ---------------------------------------------------------------------------
// Exhaustive sweep
// ---------------------------------------------------------------------------

/// Precomputed data for sweeping every orientation of a graph.
struct Sweep {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Flattened `(triangle, position)` incidences per edge.
    tri_start: Vec<usize>,
    tri_inc: Vec<(u32, u8)>,
    triangles: usize,
}

// Pattern bit 0 = edge xy, 1 = yz, 2 = xz for a triangle x < y < z.
// x->y->z->x is 0b011, x->z->y->x is 0b100.
#[inline]
fn tri_cyclic(pattern: u8) -> bool {
    pattern == 0b011 || pattern == 0b100
}

impl Sweep {
    fn new(graph: &Graph, max_edges: usize) -> Result<Self> {
        let e = graph.edge_count();
        if e > max_edges {
            return Err(Error::TooLarge {
                what: "edge count for brute force",
                actual: e as u128,
                limit: max_edges as u128,
            });
        }
        if graph.vertex_count > MAX_MASK_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count for brute force",
                actual: graph.vertex_count as u128,
                limit: MAX_MASK_VERTICES as u128,
            });
        }
        let index: HashMap<(usize, usize), usize> =
            graph.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let adj = graph.neighbors();
        let mut per_edge: Vec<Vec<(u32, u8)>> = vec![Vec::new(); e];
        let mut triangles = 0u32;
        for &(x, y) in &graph.edges {
            for &z in &adj[y] {
                if z > y {
                    if let Some(&xz) = index.get(&(x, z)) {
                        per_edge[index[&(x, y)]].push((triangles, 0));
                        per_edge[index[&(y, z)]].push((triangles, 1));
                        per_edge[xz].push((triangles, 2));
                        triangles += 1;
                    }
                }
            }
        }
        let mut tri_start = Vec::with_capacity(e + 1);
        let mut tri_inc = Vec::new();
        for list in per_edge {
            tri_start.push(tri_inc.len());
            tri_inc.extend(list);
        }
        tri_start.push(tri_inc.len());
        Ok(Self {
            n: graph.vertex_count,
            edges: graph.edges.clone(),
            tri_start,
            tri_inc,
            triangles: triangles as usize,
        })
    }

    /// Visits the out-neighbor masks of every acyclic orientation.
    fn run<A, I, V>(&self, init: I, visit: V) -> Vec<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, &[u64; MAX_MASK_VERTICES]) + Sync,
    {
        let e = self.edges.len();
        let split = e.saturating_sub(20);
        let low = e - split;
        (0..1u64 << split)
            .into_par_iter()
            .map(|high| {
                let mut acc = init();
                self.run_chunk(high, low, &mut acc, &visit);
                acc
            })
            .collect()
    }

    fn run_chunk<A, V>(&self, high: u64, low: usize, acc: &mut A, visit: &V)
    where
        V: Fn(&mut A, &[u64; MAX_MASK_VERTICES]),
    {
        let full: u64 = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let mut out = [0u64; MAX_MASK_VERTICES];
        let mut pattern = vec![0u8; self.triangles];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let forward = i >= low && (high >> (i - low)) & 1 == 1;
            if forward {
                out[u] |= 1 << v;
            } else {
                out[v] |= 1 << u;
            }
            if forward {
                for &(t, pos) in &self.tri_inc[self.tri_start[i]..self.tri_start[i + 1]] {
                    pattern[t as usize] |= 1 << pos;
                }
            }
        }
        let mut cyclic_triangles = pattern.iter().filter(|&&p| tri_cyclic(p)).count();

        if cyclic_triangles == 0 && peel_acyclic(&out, self.n, full) {
            visit(acc, &out);
        }
        for step in 1u64..1 << low {
            let i = step.trailing_zeros() as usize;
            let (u, v) = self.edges[i];
            out[u] ^= 1 << v;
            out[v] ^= 1 << u;
            for &(t, pos) in &self.tri_inc[self.tri_start[i]..self.tri_start[i + 1]] {
                let p = &mut pattern[t as usize];
                let was = tri_cyclic(*p);
                *p ^= 1 << pos;
                let now = tri_cyclic(*p);
                cyclic_triangles = cyclic_triangles + usize::from(now) - usize::from(was);
            }
            if cyclic_triangles == 0 && peel_acyclic(&out, self.n, full) {
                visit(acc, &out);
            }
        }
    }
}

/// Repeatedly strips sinks; the digraph is acyclic iff everything goes.
#[inline]
fn peel_acyclic(out: &[u64; MAX_MASK_VERTICES], n: usize, full: u64) -> bool {
    debug_assert!(n <= MAX_MASK_VERTICES);
    let mut rem = full;
    loop {
        let mut removed = false;
        let mut r = rem;
        while r != 0 {
            let v = r.trailing_zeros() as usize;
            r &= r - 1;
            if out[v] & rem == 0 {
                rem &= !(1 << v);
                removed = true;
            }
        }
        if rem == 0 {
            return true;
        }
        if !removed {
            return false;
        }
    }
}

#[inline]
fn reach_mask(out: &[u64; MAX_MASK_VERTICES], start: usize) -> u64 {
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= out[v];
        }
        frontier = next & !seen;
        seen |= frontier;
    }
    seen
}

/// Slot mask of the corner relation; see [`CornerPoset`] for the layout.
#[inline]
fn corner_relation(out: &[u64; MAX_MASK_VERTICES], corners: &[usize]) -> u32 {
    let k = corners.len();
    let mut rel = 0u32;
    let mut slot = 0;
    for (ci, &c) in corners.iter().enumerate() {
        let reach = reach_mask(out, c);
        for (cj, &c2) in corners.iter().enumerate() {
            if ci == cj {
                continue;
            }
            if reach >> c2 & 1 == 1 {
                rel |= 1 << slot;
            }
            slot += 1;
        }
    }
    debug_assert_eq!(slot, k * (k - 1));
    rel
}

/// `N_AO(G)` by enumerating all `2^e` orientations (`e <= 34`).
pub fn count_bruteforce(graph: &Graph) -> Result<BigCount> {
    count_bruteforce_capped(graph, DEFAULT_BRUTE_FORCE_EDGES)
}

pub fn count_bruteforce_capped(graph: &Graph, max_edges: usize) -> Result<BigCount> {
    let sweep = Sweep::new(graph, max_edges)?;
    let parts = sweep.run(|| 0u64, |acc, _| *acc += 1);
    Ok(parts.into_iter().map(BigUint::from).sum())
}

/// Exact count of acyclic orientations per labeled corner poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledStateVector {
    pub k: usize,
    pub counts: BTreeMap<CornerPoset, BigCount>,
}

impl LabeledStateVector {
    pub fn total(&self) -> BigCount {
        self.counts.values().sum()
    }

    pub fn get(&self, poset: &CornerPoset) -> BigCount {
        self.counts.get(poset).cloned().unwrap_or_default()
    }

    /// Sum of labeled counts within each class.
    pub fn class_sums(&self, table: &ClassTable) -> Result<Vec<BigCount>> {
        let mut sums = vec![BigUint::zero(); table.len()];
        for (p, c) in &self.counts {
            sums[table.class_of(p)?] += c;
        }
        Ok(sums)
    }

    /// The common labeled count of each class. Fails if two members of one
    /// class carry different counts, which would mean the graph lacks the
    /// symmetry the class table assumes.
    pub fn class_values(&self, table: &ClassTable) -> Result<Vec<BigCount>> {
        let mut values = Vec::with_capacity(table.len());
        for class in table.classes() {
            let first = self.get(&class.representative);
            if let Some(m) = class.members.iter().find(|m| self.get(m) != first) {
                return Err(Error::ClassMismatch(format!(
                    "class {}: {} has {} but {} has {}",
                    class.name,
                    class.representative,
                    first,
                    m,
                    self.get(m)
                )));
            }
            values.push(first);
        }
        Ok(values)
    }

    /// `[{poset: [[u,v],...], count: "..."}, ...]`
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry<'a> {
            poset: &'a CornerPoset,
            count: String,
        }
        let entries: Vec<Entry> = self
            .counts
            .iter()
            .map(|(p, c)| Entry {
                poset: p,
                count: c.to_string(),
            })
            .collect();
        serde_json::to_value(entries).expect("serializable")
    }
}

/// Counts acyclic orientations per labeled corner poset by full enumeration.
/// Posets that never occur are present with count zero.
pub fn classify_orientations(graph: &Graph) -> Result<LabeledStateVector> {
    classify_orientations_capped(graph, DEFAULT_BRUTE_FORCE_EDGES)
}

pub fn classify_orientations_capped(graph: &Graph, max_edges: usize) -> Result<LabeledStateVector> {
    let k = graph.corners.len();
    if !(2..=MAX_CORNERS).contains(&k) {
        return Err(Error::InvalidSpec(format!("classification needs 2..={MAX_CORNERS} corners, got {k}")));
    }
    let sweep = Sweep::new(graph, max_edges)?;
    let corners = graph.corners.clone();
    let slots = 1usize << (k * (k - 1));
    let parts = sweep.run(
        || vec![0u64; slots],
        |acc, out| acc[corner_relation(out, &corners) as usize] += 1,
    );
    let mut totals = vec![BigUint::zero(); slots];
    for part in parts {
        for (t, c) in totals.iter_mut().zip(part) {
            if c > 0 {
                *t += c;
            }
        }
    }
    let mut counts = BTreeMap::new();
    for p in crate::states::enumerate_posets(k)? {
        counts.insert(p, std::mem::take(&mut totals[p.bits() as usize]));
    }
    if let Some(mask) = totals.iter().position(|c| !c.is_zero()) {
        return Err(Error::Internal(format!("sweep produced non-order corner relation {mask:#x}")));
    }
    Ok(LabeledStateVector { k, counts })
}

// ---------------------------------------------------------------------------
// Deletion-contraction
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct ChromaticOptions {
    pub max_edges: usize,
    /// Cache subgraph values keyed by their compacted adjacency.
    pub memoize: bool,
}

impl Default for ChromaticOptions {
    fn default() -> Self {
        Self {
            max_edges: DEFAULT_CHROMATIC_EDGES,
            memoize: false,
        }
    }
}

/// `(-1)^v P(G, -1)` by deletion-contraction.
pub fn count_chromatic(graph: &Graph) -> Result<BigCount> {
    count_chromatic_with(graph, &ChromaticOptions::default())
}

pub fn count_chromatic_with(graph: &Graph, opts: &ChromaticOptions) -> Result<BigCount> {
    let value = chromatic_at_minus_one(graph, opts)?;
    let signed = if graph.vertex_count % 2 == 1 { -value } else { value };
    if signed.is_negative() {
        return Err(Error::Internal(format!(
            "(-1)^v P(G,-1) came out negative ({signed}); deletion-contraction bug"
        )));
    }
    Ok(signed.to_biguint().expect("non-negative"))
}

/// `P(G, -1)` as a signed integer.
pub fn chromatic_at_minus_one(graph: &Graph, opts: &ChromaticOptions) -> Result<BigInt> {
    let e = graph.edge_count();
    let limit = opts.max_edges.min(119);
    if e > limit {
        return Err(Error::TooLarge {
            what: "edge count for deletion-contraction",
            actual: e as u128,
            limit: limit as u128,
        });
    }
    if graph.vertex_count > MAX_MASK_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count for deletion-contraction",
            actual: graph.vertex_count as u128,
            limit: MAX_MASK_VERTICES as u128,
        });
    }
    let mut adj = [0u64; MAX_MASK_VERTICES];
    for &(u, v) in &graph.edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let alive = if graph.vertex_count == 64 {
        u64::MAX
    } else {
        (1u64 << graph.vertex_count) - 1
    };
    let mut dc = DeletionContraction {
        memo: opts.memoize.then(HashMap::new),
    };
    Ok(BigInt::from(dc.eval(adj, alive)))
}

struct DeletionContraction {
    memo: Option<HashMap<Vec<u64>, i128>>,
}

fn falling_factorial_at_minus_one(m: u32) -> i128 {
    // q(q-1)...(q-m+1) at q = -1 is (-1)^m m!
    let f: i128 = (1..=i128::from(m)).product();
    if m % 2 == 1 {
        -f
    } else {
        f
    }
}

impl DeletionContraction {
    /// `P(G[alive], -1)` for the simple graph given by `adj` masks.
    fn eval(&mut self, mut adj: [u64; MAX_MASK_VERTICES], mut alive: u64) -> i128 {
        // Strip isolated vertices (factor q = -1) and leaves (factor q - 1 = -2).
        let mut factor: i128 = 1;
        loop {
            let mut changed = false;
            let mut r = alive;
            while r != 0 {
                let v = r.trailing_zeros() as usize;
                r &= r - 1;
                let nb = adj[v] & alive;
                match nb.count_ones() {
                    0 => {
                        factor = -factor;
                        alive &= !(1 << v);
                        changed = true;
                    }
                    1 => {
                        factor *= -2;
                        alive &= !(1 << v);
                        let w = nb.trailing_zeros() as usize;
                        adj[w] &= !(1 << v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        if alive == 0 {
            return factor;
        }

        // Components multiply.
        let first = alive.trailing_zeros() as usize;
        let mut comp = 1u64 << first;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v] & alive;
            }
            frontier = next & !comp;
            comp |= frontier;
        }
        if comp != alive {
            return factor * self.eval(adj, comp) * self.eval(adj, alive & !comp);
        }

        let m = alive.count_ones();
        let mut complete = true;
        let mut r = alive;
        while r != 0 {
            let v = r.trailing_zeros() as usize;
            r &= r - 1;
            if (adj[v] & alive).count_ones() != m - 1 {
                complete = false;
                break;
            }
        }
        if complete {
            return factor * falling_factorial_at_minus_one(m);
        }

        let key = self.memo.as_ref().map(|_| compact_key(&adj, alive));
        if let (Some(memo), Some(key)) = (&self.memo, &key) {
            if let Some(&v) = memo.get(key) {
                return factor * v;
            }
        }

        // Branch on an edge at a minimum-degree vertex.
        let mut u = first;
        let mut best = u32::MAX;
        let mut r = alive;
        while r != 0 {
            let v = r.trailing_zeros() as usize;
            r &= r - 1;
            let deg = (adj[v] & alive).count_ones();
            if deg < best {
                best = deg;
                u = v;
            }
        }
        let v = (adj[u] & alive).trailing_zeros() as usize;

        let mut deleted = adj;
        deleted[u] &= !(1 << v);
        deleted[v] &= !(1 << u);

        // Contract v into u; parallel edges collapse in the mask representation.
        let mut contracted = deleted;
        let moved = contracted[v] & alive;
        contracted[u] |= moved;
        let mut r = moved;
        while r != 0 {
            let w = r.trailing_zeros() as usize;
            r &= r - 1;
            contracted[w] = (contracted[w] & !(1 << v)) | (1 << u);
        }
        contracted[u] &= !(1 << u);
        let value = self.eval(deleted, alive) - self.eval(contracted, alive & !(1 << v));

        if let (Some(memo), Some(key)) = (&mut self.memo, key) {
            memo.insert(key, value);
        }
        factor * value
    }
}

/// Adjacency of `G[alive]` relabeled onto `0..|alive|`.
fn compact_key(adj: &[u64; MAX_MASK_VERTICES], alive: u64) -> Vec<u64> {
    let verts: Vec<usize> = (0..MAX_MASK_VERTICES).filter(|&v| alive >> v & 1 == 1).collect();
    verts
        .iter()
        .map(|&v| {
            let mut row = 0u64;
            for (j, &w) in verts.iter().enumerate() {
                if adj[v] >> w & 1 == 1 {
                    row |= 1 << j;
                }
            }
            row
        })
        .collect()
}

/// `N_AO` as a `u64` when it fits.
pub fn to_u64(count: &BigCount) -> Option<u64> {
    count.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gasket::{build_gasket, GasketSpec};
    use crate::states::standard_classes;

    fn gasket(d: u32, b: u32, n: u32) -> Graph {
        build_gasket(GasketSpec::new(d, b, n).unwrap()).unwrap().graph
    }

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0, 1, 2]).unwrap()
    }

    /// Independent reference: enumerate orientations with `is_acyclic`.
    fn naive_count(g: &Graph) -> u64 {
        let e = g.edge_count();
        (0..1u64 << e)
            .filter(|&bits| is_acyclic(g, &Orientation::from_u64(bits, e)))
            .count() as u64
    }

    #[test]
    fn triangle_orientations() {
        let g = triangle();
        // edges (0,1), (0,2), (1,2): 0->1, 1->2, 2->0 is a cycle
        let cyc = Orientation::from_fn(3, |i| [true, false, true][i]);
        assert!(!is_acyclic(&g, &cyc));
        let acyc = Orientation::from_fn(3, |i| [true, true, true][i]);
        assert!(is_acyclic(&g, &acyc));
    }

    #[test]
    fn directed_hexagon_in_stage_one_is_cyclic() {
        let gg = build_gasket(GasketSpec::new(2, 2, 1).unwrap()).unwrap();
        let id = |c: [u64; 3]| gg.vertex_at(&c).unwrap();
        let ring = [[2, 0, 0], [1, 1, 0], [0, 2, 0], [0, 1, 1], [0, 0, 2], [1, 0, 1]].map(id);
        let hexagon: Vec<(usize, usize)> = (0..6).map(|i| (ring[i], ring[(i + 1) % 6])).collect();
        let g = &gg.graph;
        for free in 0..8u32 {
            let mut k = 0;
            let o = Orientation::from_fn(g.edge_count(), |i| {
                let (u, v) = g.edges[i];
                if hexagon.contains(&(u, v)) {
                    true
                } else if hexagon.contains(&(v, u)) {
                    false
                } else {
                    k += 1;
                    free >> (k - 1) & 1 == 1
                }
            });
            assert!(!is_acyclic(g, &o));
        }
    }

    #[test]
    fn brute_force_small_gaskets() {
        assert_eq!(count_bruteforce(&gasket(2, 2, 0)).unwrap(), BigUint::from(6u32));
        assert_eq!(count_bruteforce(&gasket(2, 2, 1)).unwrap(), BigUint::from(162u32));
        assert_eq!(count_bruteforce(&gasket(3, 2, 0)).unwrap(), BigUint::from(24u32));
        assert_eq!(count_bruteforce(&gasket(2, 3, 1)).unwrap(), BigUint::from(19602u32));
    }

    #[test]
    fn brute_force_matches_naive_enumeration() {
        for g in [gasket(2, 2, 1), gasket(3, 2, 0), gasket(4, 2, 0)] {
            assert_eq!(count_bruteforce(&g).unwrap(), BigUint::from(naive_count(&g)));
        }
    }

    #[test]
    fn brute_force_cap() {
        let g = gasket(2, 2, 2);
        assert!(matches!(count_bruteforce_capped(&g, 20), Err(Error::TooLarge { .. })));
        assert!(matches!(classify_orientations_capped(&g, 20), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(count_chromatic(&gasket(2, 2, 0)).unwrap(), BigUint::from(6u32));
        let k2 = Graph::new(2, vec![(0, 1)], vec![]).unwrap();
        assert_eq!(count_chromatic(&k2).unwrap(), BigUint::from(2u32));
        assert_eq!(count_chromatic(&gasket(2, 3, 1)).unwrap(), BigUint::from(19602u32));
        assert_eq!(count_chromatic(&gasket(2, 2, 1)).unwrap(), BigUint::from(162u32));
        // complete graphs: (d+1)!
        for d in 2..=6 {
            let expected: u64 = (1..=u64::from(d) + 1).product();
            assert_eq!(count_chromatic(&gasket(d, 2, 0)).unwrap(), BigUint::from(expected));
        }
    }

    #[test]
    fn chromatic_of_disconnected_and_edgeless() {
        let empty = Graph::new(4, vec![], vec![]).unwrap();
        assert_eq!(count_chromatic(&empty).unwrap(), BigUint::from(1u32));
        // two disjoint triangles: 6 * 6
        let g = Graph::new(
            6,
            vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
            vec![],
        )
        .unwrap();
        assert_eq!(count_chromatic(&g).unwrap(), BigUint::from(36u32));
        // 4-cycle: 2^4 - 2
        let c4 = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)], vec![]).unwrap();
        assert_eq!(count_chromatic(&c4).unwrap(), BigUint::from(14u32));
    }

    #[test]
    fn chromatic_memo_agrees() {
        let g = gasket(3, 2, 1);
        let plain = count_chromatic(&g).unwrap();
        let memo = count_chromatic_with(
            &g,
            &ChromaticOptions {
                memoize: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(plain, memo);
    }

    #[test]
    fn chromatic_cap() {
        let g = gasket(2, 2, 2);
        let opts = ChromaticOptions {
            max_edges: 10,
            memoize: false,
        };
        assert!(matches!(count_chromatic_with(&g, &opts), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn stage_zero_orientations_are_chains() {
        let g = triangle();
        let mut seen = Vec::new();
        for bits in 0..8u64 {
            let o = Orientation::from_u64(bits, 3);
            if is_acyclic(&g, &o) {
                let p = corner_reachability(&g, &o).unwrap();
                assert_eq!(p.len(), 3, "acyclic triangle induces a total order");
                seen.push(p);
            }
        }
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn chain_from_explicit_orientation() {
        // corners o=0, i=1, j=2; orient i->j, j->o, i->o
        let g = triangle();
        let arcs = [(1, 2), (2, 0), (1, 0)];
        let o = Orientation::from_fn(3, |e| {
            let (u, v) = g.edges[e];
            arcs.contains(&(u, v))
        });
        let p = corner_reachability(&g, &o).unwrap();
        assert_eq!(p.pairs(), vec![(1, 0), (1, 2), (2, 0)]);
    }

    #[test]
    fn reachability_on_cyclic_orientation_is_an_error() {
        let g = triangle();
        let cyc = Orientation::from_fn(3, |i| [true, false, true][i]);
        assert!(matches!(corner_reachability(&g, &cyc), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn classify_stage_zero_and_one() {
        let t = standard_classes(3).unwrap();
        let s0 = classify_orientations(&gasket(2, 2, 0)).unwrap();
        assert_eq!(s0.class_values(t).unwrap(), vec![1u32, 0, 0, 0].into_iter().map(BigUint::from).collect::<Vec<_>>());

        let s1 = classify_orientations(&gasket(2, 2, 1)).unwrap();
        let v: Vec<u64> = s1.class_values(t).unwrap().iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(v, vec![5, 12, 6, 24]);
        assert_eq!(s1.get(&CornerPoset::empty(3).unwrap()), BigUint::from(24u32));
        assert_eq!(s1.total(), BigUint::from(162u32));

        let s23 = classify_orientations(&gasket(2, 3, 1)).unwrap();
        let v: Vec<u64> = s23.class_values(t).unwrap().iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(v, vec![140, 918, 966, 7458]);
    }

    #[test]
    fn classify_matches_per_orientation_reachability() {
        let g = gasket(2, 2, 1);
        let e = g.edge_count();
        let mut expected: BTreeMap<CornerPoset, u64> = BTreeMap::new();
        for bits in 0..1u64 << e {
            let o = Orientation::from_u64(bits, e);
            if is_acyclic(&g, &o) {
                *expected.entry(corner_reachability(&g, &o).unwrap()).or_default() += 1;
            }
        }
        let got = classify_orientations(&g).unwrap();
        for (p, c) in &got.counts {
            assert_eq!(c.to_u64().unwrap(), expected.get(p).copied().unwrap_or(0), "{p}");
        }
    }

    #[test]
    fn reversal_symmetry_of_classification() {
        for g in [gasket(2, 2, 1), gasket(3, 2, 1), gasket(2, 3, 1)] {
            let s = classify_orientations(&g).unwrap();
            for (p, c) in &s.counts {
                assert_eq!(&s.get(&p.reversed()), c);
            }
        }
    }

    #[test]
    fn labeled_state_json_shape() {
        let s = classify_orientations(&gasket(2, 2, 0)).unwrap();
        let json = s.to_json();
        let arr = json.as_array().unwrap();
        assert_eq!(arr.len(), 19);
        let chain = arr.iter().find(|e| e["poset"].as_array().unwrap().len() == 3).unwrap();
        assert_eq!(chain["count"], "1");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn random_graph() -> impl Strategy<Value = Graph> {
            (2usize..=8).prop_flat_map(|n| {
                let all: Vec<(usize, usize)> =
                    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
                let m = all.len();
                proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
                    let edges: Vec<_> = all
                        .iter()
                        .zip(&keep)
                        .filter(|(_, &k)| k)
                        .map(|(&e, _)| e)
                        .take(18)
                        .collect();
                    Graph::new(n, edges, vec![0, 1]).unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn brute_force_equals_chromatic(g in random_graph()) {
                let brute = count_bruteforce(&g).unwrap();
                prop_assert_eq!(&brute, &count_chromatic(&g).unwrap());
                prop_assert_eq!(brute.to_u64().unwrap(), naive_count(&g));
                let s = classify_orientations(&g).unwrap();
                prop_assert_eq!(s.total(), brute);
            }
        }
    }
}
