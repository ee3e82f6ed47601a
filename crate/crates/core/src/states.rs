//! Boundary states of a gasket piece.
//!
//! An acyclic orientation induces a reachability relation among the corner
//! vertices of the piece. That relation is a strict partial order, called a
//! [`CornerPoset`] here. Posets that differ by a relabeling of the corners or
//! by reversing every arrow are counted by the same class variable, and
//! [`ClassTable`] records that partition.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};

use crate::error::{Error, Result};

/// Largest supported number of corners.
pub const MAX_CORNERS: usize = 5;

/// Strict partial order on `k` labeled corners.
///
/// The pair `(u, v)` is present when corner `u` reaches corner `v` by a
/// directed path. Pairs are stored in a bitmask of `k(k-1)` slots, ordered
/// lexicographically by `(u, v)` with `u != v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CornerPoset {
    k: u8,
    rel: u32,
}

#[inline]
fn slot(k: usize, u: usize, v: usize) -> usize {
    debug_assert!(u != v && u < k && v < k);
    u * (k - 1) + if v < u { v } else { v - 1 }
}

fn check_k(k: usize) -> Result<()> {
    if !(2..=MAX_CORNERS).contains(&k) {
        return Err(Error::InvalidSpec(format!(
            "corner count {k} outside 2..={MAX_CORNERS}"
        )));
    }
    Ok(())
}

impl CornerPoset {
    /// The relation with no pairs.
    pub fn empty(k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(Self { k: k as u8, rel: 0 })
    }

    /// Wraps a raw slot bitmask, rejecting anything that is not a strict order.
    pub fn from_bits(k: usize, rel: u32) -> Result<Self> {
        check_k(k)?;
        let slots = k * (k - 1);
        if u64::from(rel) >> slots != 0 {
            return Err(Error::InvalidSpec(format!(
                "relation mask {rel:#x} has bits beyond {slots} slots"
            )));
        }
        let p = Self { k: k as u8, rel };
        if !p.is_strict_order() {
            return Err(Error::InvalidSpec(format!("{p:?} is not a strict partial order")));
        }
        Ok(p)
    }

    /// Builds the poset from an explicit pair list. The list must already be
    /// transitively closed; use [`CornerPoset::closure_of`] otherwise.
    pub fn from_pairs(k: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        check_k(k)?;
        let mut rel = 0u32;
        for &(u, v) in pairs {
            if u >= k || v >= k || u == v {
                return Err(Error::InvalidSpec(format!("bad pair ({u}, {v}) for k = {k}")));
            }
            rel |= 1 << slot(k, u, v);
        }
        Self::from_bits(k, rel)
    }

    /// Transitive closure of `pairs`; fails if the closure is not antisymmetric.
    pub fn closure_of(k: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        check_k(k)?;
        let mut rows = [0u64; MAX_CORNERS];
        for &(u, v) in pairs {
            if u >= k || v >= k || u == v {
                return Err(Error::InvalidSpec(format!("bad pair ({u}, {v}) for k = {k}")));
            }
            rows[u] |= 1 << v;
        }
        for w in 0..k {
            for u in 0..k {
                if rows[u] >> w & 1 == 1 {
                    rows[u] |= rows[w];
                }
            }
        }
        Self::from_rows(k, &rows[..k])
    }

    /// Builds the poset from reachability rows: bit `v` of `rows[u]` means `u`
    /// reaches `v`. Bits at positions `>= k` and the diagonal are rejected.
    pub fn from_rows(k: usize, rows: &[u64]) -> Result<Self> {
        check_k(k)?;
        if rows.len() != k {
            return Err(Error::InvalidSpec(format!("expected {k} rows, got {}", rows.len())));
        }
        let mut rel = 0u32;
        for (u, &row) in rows.iter().enumerate() {
            if row >> k != 0 || row >> u & 1 == 1 {
                return Err(Error::InvalidSpec(format!("row {u} = {row:#b} is not a valid relation row")));
            }
            for v in 0..k {
                if v != u && row >> v & 1 == 1 {
                    rel |= 1 << slot(k, u, v);
                }
            }
        }
        Self::from_bits(k, rel)
    }

    pub(crate) fn from_bits_unchecked(k: usize, rel: u32) -> Self {
        Self { k: k as u8, rel }
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn bits(&self) -> u32 {
        self.rel
    }

    /// Number of related pairs.
    pub fn len(&self) -> usize {
        self.rel.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.rel == 0
    }

    /// `u` reaches `v`.
    pub fn contains(&self, u: usize, v: usize) -> bool {
        let k = self.k();
        u != v && u < k && v < k && self.rel >> slot(k, u, v) & 1 == 1
    }

    /// `u` and `v` are comparable in either direction.
    pub fn related(&self, u: usize, v: usize) -> bool {
        self.contains(u, v) || self.contains(v, u)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let k = self.k();
        let mut out = Vec::with_capacity(self.len());
        for u in 0..k {
            for v in 0..k {
                if self.contains(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Reachability rows, `rows[u]` bit `v` set when `u` reaches `v`.
    pub fn rows(&self) -> [u64; MAX_CORNERS] {
        let mut rows = [0u64; MAX_CORNERS];
        for (u, v) in self.pairs() {
            rows[u] |= 1 << v;
        }
        rows
    }

    pub fn is_strict_order(&self) -> bool {
        let k = self.k();
        for u in 0..k {
            for v in 0..k {
                if !self.contains(u, v) {
                    continue;
                }
                if self.contains(v, u) {
                    return false;
                }
                for w in 0..k {
                    if self.contains(v, w) && !self.contains(u, w) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Image under the corner relabeling `u -> perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let k = self.k();
        debug_assert_eq!(perm.len(), k);
        let mut rel = 0u32;
        for (u, v) in self.pairs() {
            rel |= 1 << slot(k, perm[u], perm[v]);
        }
        Self { k: self.k, rel }
    }

    /// Every arrow reversed.
    pub fn reversed(&self) -> Self {
        let k = self.k();
        let mut rel = 0u32;
        for (u, v) in self.pairs() {
            rel |= 1 << slot(k, v, u);
        }
        Self { k: self.k, rel }
    }
}

impl fmt::Debug for CornerPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CornerPoset(k={}, {})", self.k, self)
    }
}

impl fmt::Display for CornerPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (u, v)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}>{v}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as its pair list, e.g. `[[1,2],[1,0],[2,0]]`.
impl Serialize for CornerPoset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs = self.pairs();
        let mut seq = serializer.serialize_seq(Some(pairs.len()))?;
        for (u, v) in pairs {
            seq.serialize_element(&[u, v])?;
        }
        seq.end()
    }
}

/// All strict partial orders on `k` labeled elements, sorted by slot mask.
pub fn enumerate_posets(k: usize) -> Result<Vec<CornerPoset>> {
    check_k(k)?;
    let slots = k * (k - 1);
    Ok((0..1u32 << slots)
        .map(|rel| CornerPoset::from_bits_unchecked(k, rel))
        .filter(CornerPoset::is_strict_order)
        .collect())
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

/// One orbit of labeled posets.
#[derive(Clone, Debug)]
pub struct PosetClass {
    pub id: usize,
    pub name: String,
    /// Member with the smallest slot mask.
    pub representative: CornerPoset,
    pub members: Vec<CornerPoset>,
}

impl PosetClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

impl Serialize for PosetClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PosetClass", 5)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("size", &self.size())?;
        st.serialize_field("representative", &self.representative)?;
        st.serialize_field("members", &self.members)?;
        st.end()
    }
}

/// Partition of all labeled posets on `k` corners into symmetry orbits.
///
/// Classes are ordered by decreasing number of related pairs, then by
/// representative mask, and named `a`, `b`, `c`, ... in that order. For
/// `k = 3` with reversal this yields the chain (`a`), the two-pair "V"
/// shape (`b`), the single pair (`c`) and the empty relation (`d`).
#[derive(Clone, Debug)]
pub struct ClassTable {
    k: usize,
    use_reversal: bool,
    classes: Vec<PosetClass>,
    /// Dense lookup from slot mask to class id; `u16::MAX` for non-orders.
    by_mask: Vec<u16>,
}

fn class_name(id: usize) -> String {
    if id < 26 {
        char::from(b'a' + id as u8).to_string()
    } else {
        format!("s{id}")
    }
}

impl ClassTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn uses_reversal(&self) -> bool {
        self.use_reversal
    }

    pub fn classes(&self) -> &[PosetClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.name.clone()).collect()
    }

    /// Orbit sizes, indexed by class id.
    pub fn sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.size() as u64).collect()
    }

    /// Total number of labeled posets.
    pub fn poset_count(&self) -> usize {
        self.classes.iter().map(PosetClass::size).sum()
    }

    pub fn class_of(&self, poset: &CornerPoset) -> Result<usize> {
        if poset.k() != self.k {
            return Err(Error::ContractViolation(format!(
                "poset on {} corners looked up in a table for {}",
                poset.k(),
                self.k
            )));
        }
        match self.by_mask.get(poset.bits() as usize) {
            Some(&id) if id != u16::MAX => Ok(id as usize),
            _ => Err(Error::ContractViolation(format!("{poset} is not in the class table"))),
        }
    }

    pub fn class_by_name(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }
}

impl Serialize for ClassTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ClassTable", 4)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("use_reversal", &self.use_reversal)?;
        st.serialize_field("poset_count", &self.poset_count())?;
        st.serialize_field("classes", &self.classes)?;
        st.end()
    }
}

/// Orbits of the labeled posets on `k` corners under all corner relabelings
/// and, when `use_reversal` is set, order reversal.
pub fn orbit_classes(k: usize, use_reversal: bool) -> Result<ClassTable> {
    let posets = enumerate_posets(k)?;
    let perms = permutations(k);

    let canonical = |p: &CornerPoset| -> u32 {
        let mut best = u32::MAX;
        for perm in &perms {
            let q = p.relabel(perm);
            best = best.min(q.bits());
            if use_reversal {
                best = best.min(q.reversed().bits());
            }
        }
        best
    };

    let mut orbits: HashMap<u32, Vec<CornerPoset>> = HashMap::new();
    for p in &posets {
        orbits.entry(canonical(p)).or_default().push(*p);
    }
    let mut reps: Vec<u32> = orbits.keys().copied().collect();
    reps.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));

    let mut by_mask = vec![u16::MAX; 1usize << (k * (k - 1))];
    let classes = reps
        .into_iter()
        .enumerate()
        .map(|(id, rep)| {
            let mut members = orbits.remove(&rep).expect("orbit present");
            members.sort();
            for m in &members {
                by_mask[m.bits() as usize] = id as u16;
            }
            PosetClass {
                id,
                name: class_name(id),
                representative: CornerPoset::from_bits_unchecked(k, rep),
                members,
            }
        })
        .collect();

    Ok(ClassTable {
        k,
        use_reversal,
        classes,
        by_mask,
    })
}

/// Id of the orbit containing `poset`.
pub fn class_of(table: &ClassTable, poset: &CornerPoset) -> Result<usize> {
    table.class_of(poset)
}

/// Shared relabeling-plus-reversal table for `k` corners, built on first use.
pub fn standard_classes(k: usize) -> Result<&'static ClassTable> {
    static TABLES: [OnceLock<ClassTable>; MAX_CORNERS + 1] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    check_k(k)?;
    if let Some(t) = TABLES[k].get() {
        return Ok(t);
    }
    let table = orbit_classes(k, true)?;
    Ok(TABLES[k].get_or_init(|| table))
}
