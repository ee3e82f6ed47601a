//! Synthesis of stage-composition recursions by gluing boundary states.
//!
//! Stage `n + 1` is `P` stage-`n` pieces glued at junction vertices. Each
//! piece contributes its corner poset; the composite's corner poset, or the
//! fact that the composite has a directed cycle, depends only on those
//! posets. Counting assignments by the multiset of piece classes yields one
//! polynomial per outer class.

mod compose;
mod frontier;
mod poly;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gasket::{build_layout, GasketSpec, Graph, GluingLayout};
use crate::oracle::classify_orientations;
use crate::states::{enumerate_posets, standard_classes, ClassTable, CornerPoset};

pub use compose::compose_states;
pub use frontier::{derive_recursion_dp, derive_recursion_dp_with, DEFAULT_MAX_FRONTIER_STATES};
pub use poly::Polynomial;
pub(crate) use poly::{MonomialIndex, PowerTable};

/// Bumped whenever the JSON layout or the derivation semantics change.
pub const FORMAT_VERSION: u32 = 1;

/// Junction ids must fit in a `u32` row mask.
pub(crate) const MAX_JUNCTIONS: usize = 32;

/// Largest piece count handled by direct enumeration.
pub const MAX_DIRECT_PIECES: usize = 6;

/// Integer polynomial map from stage-`n` class counts to stage-`n + 1` counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionSystem {
    pub d: u32,
    pub b: u32,
    pub pieces: usize,
    pub variables: Vec<String>,
    /// One polynomial per variable, same order.
    pub polys: Vec<Polynomial>,
}

impl RecursionSystem {
    pub fn spec(&self) -> Result<GasketSpec> {
        GasketSpec::new(self.d, self.b, 0)
    }

    /// Symmetry classes for this system's corner count.
    pub fn class_table(&self) -> Result<&'static ClassTable> {
        standard_classes(self.d as usize + 1)
    }

    /// Orbit sizes; `f = sum_i w_i x_i`.
    pub fn class_weights(&self) -> Result<Vec<u64>> {
        Ok(self.class_table()?.sizes())
    }

    pub fn poly(&self, name: &str) -> Option<&Polynomial> {
        self.variables.iter().position(|v| v == name).map(|i| &self.polys[i])
    }

    /// Checks shape, degree homogeneity and agreement with the class table.
    pub fn validate(&self) -> Result<()> {
        let table = self.class_table()?;
        if self.variables != table.names() {
            return Err(Error::ContractViolation(format!(
                "variables {:?} do not match classes {:?}",
                self.variables,
                table.names()
            )));
        }
        let expected_pieces = self.spec()?.pieces() as usize;
        if self.pieces != expected_pieces {
            return Err(Error::ContractViolation(format!(
                "{} pieces declared, SG_{{{},{}}} has {expected_pieces}",
                self.pieces, self.d, self.b
            )));
        }
        if self.polys.len() != self.variables.len() {
            return Err(Error::ContractViolation("one polynomial per variable required".into()));
        }
        for (name, p) in self.variables.iter().zip(&self.polys) {
            if p.nvars() != self.variables.len() {
                return Err(Error::ContractViolation(format!("poly {name} has wrong arity")));
            }
            if let Some((e, _)) = p.terms().find(|(e, _)| e.iter().sum::<u32>() as usize != self.pieces) {
                return Err(Error::ContractViolation(format!(
                    "poly {name} has term {e:?} of degree other than {}",
                    self.pieces
                )));
            }
        }
        Ok(())
    }

    /// Next-stage class counts.
    pub fn apply(&self, x: &[BigUint]) -> Result<Vec<BigUint>> {
        if x.len() != self.variables.len() {
            return Err(Error::ContractViolation(format!(
                "class vector has {} entries, system has {} variables",
                x.len(),
                self.variables.len()
            )));
        }
        let powers = PowerTable::new(x, self.pieces as u32);
        Ok(self.polys.par_iter().map(|p| p.evaluate_with(&powers)).collect())
    }

    /// `sum_i w_i x_i`
    pub fn total(&self, x: &[BigUint]) -> Result<BigUint> {
        let w = self.class_weights()?;
        Ok(x.iter().zip(w).map(|(xi, wi)| xi * wi).sum())
    }

    pub fn to_json(&self) -> Value {
        let polys: serde_json::Map<String, Value> = self
            .variables
            .iter()
            .zip(&self.polys)
            .map(|(name, p)| {
                let terms: Vec<Value> = p
                    .terms()
                    .rev()
                    .map(|(e, c)| json!({"exp": e, "coef": c.to_string()}))
                    .collect();
                (name.clone(), Value::Array(terms))
            })
            .collect();
        json!({
            "version": FORMAT_VERSION,
            "d": self.d,
            "b": self.b,
            "pieces": self.pieces,
            "variables": self.variables,
            "polys": polys,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("recursion system JSON: {m}"));
        let version = value["version"].as_u64().ok_or_else(|| bad("missing version"))?;
        if version != u64::from(FORMAT_VERSION) {
            return Err(bad(&format!("version {version}, expected {FORMAT_VERSION}")));
        }
        let field = |k: &str| value[k].as_u64().ok_or_else(|| bad(&format!("missing {k}")));
        let d = u32::try_from(field("d")?).map_err(|_| bad("d out of range"))?;
        let b = u32::try_from(field("b")?).map_err(|_| bad("b out of range"))?;
        let pieces = field("pieces")? as usize;
        let variables: Vec<String> = value["variables"]
            .as_array()
            .ok_or_else(|| bad("missing variables"))?
            .iter()
            .map(|v| v.as_str().map(str::to_owned).ok_or_else(|| bad("variable not a string")))
            .collect::<Result<_>>()?;
        let n = variables.len();
        let mut polys = Vec::with_capacity(n);
        for name in &variables {
            let terms = value["polys"][name]
                .as_array()
                .ok_or_else(|| bad(&format!("missing poly {name}")))?;
            let mut p = Polynomial::zero(n);
            for t in terms {
                let exp: Vec<u32> = t["exp"]
                    .as_array()
                    .ok_or_else(|| bad("term without exp"))?
                    .iter()
                    .map(|x| x.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| bad("bad exponent")))
                    .collect::<Result<_>>()?;
                if exp.len() != n {
                    return Err(bad("exponent vector length"));
                }
                let coef: BigUint = t["coef"]
                    .as_str()
                    .ok_or_else(|| bad("coef must be a decimal string"))?
                    .parse()
                    .map_err(|_| bad("coef is not a decimal integer"))?;
                p.add_term(exp, coef);
            }
            polys.push(p);
        }
        let system = Self {
            d,
            b,
            pieces,
            variables,
            polys,
        };
        system.validate()?;
        Ok(system)
    }

    /// Human-readable `x' = ...` lines.
    pub fn pretty(&self) -> String {
        self.variables
            .iter()
            .zip(&self.polys)
            .map(|(v, p)| format!("{v}' = {}\n", p.display(&self.variables)))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Gluing
// ---------------------------------------------------------------------------
//
// Why the junction digraph decides everything: every piece is internally
// acyclic, so a directed cycle in the composite must leave each piece it
// enters, and it can only enter or leave a piece at that piece's corners,
// which are junction vertices. Cutting the cycle at junctions splits it into
// segments that run inside one piece from one of its corners to another;
// such a segment exists exactly when the piece's poset contains that pair.
// So the composite has a directed cycle iff the digraph on junctions with an
// arc per within-piece pair has one. The same cutting argument applied to a
// path between two outer corners shows that composite corner reachability is
// the transitive closure of that digraph restricted to the outer corners.

/// Adds arc `u -> v` to a transitively closed relation given by row masks.
/// Returns `false`, leaving `reach` untouched, if the arc closes a cycle.
#[inline]
pub(crate) fn add_arc(reach: &mut [u32], u: usize, v: usize) -> bool {
    if reach[v] >> u & 1 == 1 {
        return false;
    }
    let add = reach[v] | 1 << v;
    let ubit = 1u32 << u;
    for (x, row) in reach.iter_mut().enumerate() {
        if x == u || *row & ubit != 0 {
            *row |= add;
        }
    }
    true
}

/// Slot mask of the relation among `outer` junctions.
#[inline]
pub(crate) fn outer_mask(reach: &[u32], outer: &[usize]) -> u32 {
    let mut rel = 0u32;
    let mut slot = 0;
    for (ci, &c) in outer.iter().enumerate() {
        for (cj, &c2) in outer.iter().enumerate() {
            if ci != cj {
                if reach[c] >> c2 & 1 == 1 {
                    rel |= 1 << slot;
                }
                slot += 1;
            }
        }
    }
    rel
}

/// Precomputed junction arcs for every (piece, labeled poset) pair.
pub(crate) struct GlueTables {
    pub(crate) layout: GluingLayout,
    pub(crate) labeled: Vec<CornerPoset>,
    pub(crate) labeled_class: Vec<usize>,
    pub(crate) table: &'static ClassTable,
    /// `arcs[piece][state]`
    pub(crate) arcs: Vec<Vec<Vec<(u8, u8)>>>,
    /// Slot mask to index into `labeled`.
    pub(crate) mask_to_labeled: Vec<u32>,
}

impl GlueTables {
    pub(crate) fn new(d: u32, b: u32) -> Result<Self> {
        let layout = build_layout(d, b)?;
        let k = layout.corner_count();
        if layout.junction_count > MAX_JUNCTIONS {
            return Err(Error::TooLarge {
                what: "junction count",
                actual: layout.junction_count as u128,
                limit: MAX_JUNCTIONS as u128,
            });
        }
        let table = standard_classes(k)?;
        let labeled = enumerate_posets(k)?;
        let labeled_class = labeled.iter().map(|p| table.class_of(p)).collect::<Result<_>>()?;
        let arcs = layout
            .slots
            .iter()
            .map(|slots| {
                labeled
                    .iter()
                    .map(|p| p.pairs().into_iter().map(|(u, v)| (slots[u] as u8, slots[v] as u8)).collect())
                    .collect()
            })
            .collect();
        let mut mask_to_labeled = vec![u32::MAX; 1 << (k * (k - 1))];
        for (i, p) in labeled.iter().enumerate() {
            mask_to_labeled[p.bits() as usize] = i as u32;
        }
        Ok(Self {

            layout,
            labeled,
            labeled_class,
            table,
            arcs,
            mask_to_labeled,
        })
    }

    pub(crate) fn pieces(&self) -> usize {
        self.layout.pieces()
    }
}

/// Composite corner poset of the pieces' boundary states, or `None` when
/// the junction digraph has a directed cycle.
pub fn glue(layout: &GluingLayout, assignment: &[CornerPoset]) -> Result<Option<CornerPoset>> {
    if assignment.len() != layout.pieces() {
        return Err(Error::ContractViolation(format!(
            "assignment has {} posets for {} pieces",
            assignment.len(),
            layout.pieces()
        )));
    }
    let k = layout.corner_count();
    if let Some(p) = assignment.iter().find(|p| p.k() != k) {
        return Err(Error::ContractViolation(format!("{p} is not a poset on {k} corners")));
    }
    if layout.junction_count > MAX_JUNCTIONS {
        return Err(Error::TooLarge {
            what: "junction count",
            actual: layout.junction_count as u128,
            limit: MAX_JUNCTIONS as u128,
        });
    }
    let mut reach = vec![0u32; layout.junction_count];
    for (slots, p) in layout.slots.iter().zip(assignment) {
        for (u, v) in p.pairs() {
            if !add_arc(&mut reach, slots[u], slots[v]) {
                return Ok(None);
            }
        }
    }
    Ok(Some(CornerPoset::from_bits(k, outer_mask(&reach, &layout.outer))?))
}

// ---------------------------------------------------------------------------
// Derivation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DerivationStats {
    /// Assignments whose composite is acyclic.
    pub accepted: u128,
    /// Search nodes (direct) or frontier states (DP) visited.
    pub work: u128,
    /// Largest frontier map seen by the DP; zero for direct enumeration.
    pub peak_states: usize,
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub system: RecursionSystem,
    pub stats: DerivationStats,
}

/// Derives the recursion for `SG_{d,b}`: direct enumeration when there are at
/// most six pieces, frontier DP otherwise (`d = 2` only).
pub fn derive_recursion(d: u32, b: u32) -> Result<RecursionSystem> {
    Ok(derive_recursion_with_stats(d, b)?.system)
}

pub fn derive_recursion_with_stats(d: u32, b: u32) -> Result<Derivation> {
    let spec = GasketSpec::new(d, b, 0)?;
    if spec.pieces() as usize <= MAX_DIRECT_PIECES {
        derive_direct(d, b)
    } else if d == 2 {
        derive_recursion_dp_with(d, b, DEFAULT_MAX_FRONTIER_STATES)
    } else {
        Err(Error::Unsupported(format!("no derivation strategy for SG_{{{d},{b}}}")))
    }
}

/// Enumerates every labeled assignment, splitting the work over the first
/// piece's state. Prefixes that already close a cycle are pruned.
pub fn derive_direct(d: u32, b: u32) -> Result<Derivation> {
    let t = GlueTables::new(d, b)?;
    let p = t.pieces();
    if p > MAX_DIRECT_PIECES && d == 2 {
        return Err(Error::TooLarge {
            what: "piece count for direct enumeration",
            actual: p as u128,
            limit: MAX_DIRECT_PIECES as u128,
        });
    }
    let idx = MonomialIndex::new(t.table.len(), p);
    let width = idx.level_len(p);
    let l = t.labeled.len();

    struct Acc {
        counts: Vec<u64>,
        accepted: u128,
        work: u128,
    }

    fn dfs(t: &GlueTables, idx: &MonomialIndex, piece: usize, reach: &[u32; MAX_JUNCTIONS], mono: u32, acc: &mut Acc) {
        let last = piece + 1 == t.pieces();
        for (s, arcs) in t.arcs[piece].iter().enumerate() {
            acc.work += 1;
            let mut r = *reach;
            if !arcs.iter().all(|&(u, v)| add_arc(&mut r, u as usize, v as usize)) {
                continue;
            }
            let m = idx.step(piece, mono, t.labeled_class[s]);
            if last {
                let outer = t.mask_to_labeled[outer_mask(&r, &t.layout.outer) as usize] as usize;
                acc.counts[outer * idx.level_len(t.pieces()) + m as usize] += 1;
                acc.accepted += 1;
            } else {
                dfs(t, idx, piece + 1, &r, m, acc);
            }
        }
    }

    let parts: Vec<Acc> = (0..l)
        .into_par_iter()
        .map(|s0| {
            let mut acc = Acc {
                counts: vec![0; l * width],
                accepted: 0,
                work: 1,
            };
            let mut reach = [0u32; MAX_JUNCTIONS];
            if t.arcs[0][s0].iter().all(|&(u, v)| add_arc(&mut reach, u as usize, v as usize)) {
                let mono = idx.step(0, 0, t.labeled_class[s0]);
                if p == 1 {
                    let outer = t.mask_to_labeled[outer_mask(&reach, &t.layout.outer) as usize] as usize;
                    acc.counts[outer * width + mono as usize] += 1;
                    acc.accepted += 1;
                } else {
                    dfs(&t, &idx, 1, &reach, mono, &mut acc);
                }
            }
            acc
        })
        .collect();

    let mut counts = vec![0u128; l * width];
    let mut stats = DerivationStats::default();
    for part in parts {
        for (c, x) in counts.iter_mut().zip(part.counts) {
            *c += u128::from(x);
        }
        stats.accepted += part.accepted;
        stats.work += part.work;
    }
    let system = assemble(&t, &idx, &counts)?;
    Ok(Derivation { system, stats })
}

/// Quotients labeled outer-state counts `counts[labeled * width + monomial]`
/// by class, checking that every member of a class got the same polynomial.
pub(crate) fn assemble(t: &GlueTables, idx: &MonomialIndex, counts: &[u128]) -> Result<RecursionSystem> {
    let p = t.pieces();
    let width = idx.level_len(p);
    let nvars = t.table.len();
    let row = |labeled: usize| &counts[labeled * width..(labeled + 1) * width];
    let labeled_index = |poset: &CornerPoset| t.mask_to_labeled[poset.bits() as usize] as usize;

    let mut polys = Vec::with_capacity(nvars);
    for class in t.table.classes() {
        let rep = row(labeled_index(&class.representative));
        for m in &class.members {
            if row(labeled_index(m)) != rep {
                let first = rep
                    .iter()
                    .zip(row(labeled_index(m)))
                    .position(|(x, y)| x != y)
                    .expect("rows differ");
                return Err(Error::ClassMismatch(format!(
                    "class {}: members {} and {} differ at monomial {:?}",
                    class.name,
                    class.representative,
                    m,
                    idx.exponents(p, first)
                )));
            }
        }
        let mut poly = Polynomial::zero(nvars);
        for (i, &c) in rep.iter().enumerate() {
            if c > 0 {
                poly.add_term(idx.exponents(p, i).to_vec(), BigUint::from(c));
            }
        }
        polys.push(poly);
    }
    let system = RecursionSystem {
        d: t.layout.d,
        b: t.layout.b,
        pieces: p,
        variables: t.table.names(),
        polys,
    };
    system.validate()?;
    Ok(system)
}

/// `true` iff `system` maps `stage_counts` to the oracle's class counts on
/// `next_graph`.
pub fn verify_recursion(system: &RecursionSystem, stage_counts: &[BigUint], next_graph: &Graph) -> Result<bool> {
    let predicted = system.apply(stage_counts)?;
    let observed = oracle_class_values(next_graph, system.class_table()?)?;
    Ok(predicted == observed)
}

/// Class counts of `graph` by exhaustive classification.
pub fn oracle_class_values(graph: &Graph, table: &ClassTable) -> Result<Vec<BigUint>> {
    classify_orientations(graph)?.class_values(table)
}

/// Term-by-term differences between two systems, for diagnostics.
pub fn diff_systems(lhs: &RecursionSystem, rhs: &RecursionSystem) -> Vec<String> {
    let mut out = Vec::new();
    if (lhs.d, lhs.b, lhs.pieces) != (rhs.d, rhs.b, rhs.pieces) || lhs.variables != rhs.variables {
        out.push(format!(
            "shape differs: ({},{},{},{:?}) vs ({},{},{},{:?})",
            lhs.d, lhs.b, lhs.pieces, lhs.variables, rhs.d, rhs.b, rhs.pieces, rhs.variables
        ));
        return out;
    }
    for ((name, p), q) in lhs.variables.iter().zip(&lhs.polys).zip(&rhs.polys) {
        let mut exps: BTreeMap<&Vec<u32>, ()> = BTreeMap::new();
        for (e, _) in p.terms().chain(q.terms()) {
            exps.insert(e, ());
        }
        for e in exps.keys() {
            let (x, y) = (p.coefficient(e), q.coefficient(e));
            if x != y {
                out.push(format!("{name}: {e:?} {x} vs {y}"));
            }
        }
    }
    out
}

/// The all-zero class vector except `x_0 = 1`: the stage-0 simplex.
pub fn initial_vector(nvars: usize) -> Vec<BigUint> {
    let mut v = vec![BigUint::zero(); nvars];
    v[0] = 1u32.into();
    v
}
