//! Frontier dynamic program for gasket layouts with many pieces.
//!
//! Pieces are added one at a time, top row first and left to right within a
//! row. The state is the transitive reachability relation among junctions
//! that are still exposed, and each state carries a vector of counts indexed
//! by the monomial of piece classes placed so far. A junction whose incident
//! pieces are all placed is projected out; the relation was already closed
//! through it, so no path information is lost.

use std::collections::HashMap;

use super::{add_arc, assemble, outer_mask, Derivation, DerivationStats, GlueTables, MonomialIndex, MAX_JUNCTIONS};
use crate::error::{Error, Result};

/// Default cap on the number of distinct frontier relations in one layer.
pub const DEFAULT_MAX_FRONTIER_STATES: usize = 2_000_000;

pub fn derive_recursion_dp(d: u32, b: u32) -> Result<super::RecursionSystem> {
    Ok(derive_recursion_dp_with(d, b, DEFAULT_MAX_FRONTIER_STATES)?.system)
}

pub fn derive_recursion_dp_with(d: u32, b: u32, max_states: usize) -> Result<Derivation> {
    if d != 2 || b > 6 {
        return Err(Error::Unsupported(format!(
            "frontier DP handles d = 2, b <= 6; got SG_{{{d},{b}}}"
        )));
    }
    let t = GlueTables::new(d, b)?;
    let p = t.pieces();
    let idx = MonomialIndex::new(t.table.len(), p);
    let layout = &t.layout;

    // Piece offset = coordinate of its corner 0 minus the unit vector e_0.
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by_key(|&q| {
        let c = &layout.junction_coords[layout.slots[q][0]];
        (std::cmp::Reverse(c[2]), c[1])
    });
    let mut last_use = vec![0usize; layout.junction_count];
    for (step, &q) in order.iter().enumerate() {
        for &j in &layout.slots[q] {
            last_use[j] = step;
        }
    }

    let mut active: Vec<usize> = Vec::new();
    let mut states: HashMap<Vec<u32>, Vec<u128>> = HashMap::new();
    states.insert(Vec::new(), vec![1]);
    let mut stats = DerivationStats::default();

    for (step, &q) in order.iter().enumerate() {
        let mut next_active = active.clone();
        for &j in &layout.slots[q] {
            if !next_active.contains(&j) {
                next_active.push(j);
            }
        }
        let closing: Vec<usize> = next_active
            .iter()
            .copied()
            .filter(|&j| last_use[j] == step && !layout.outer.contains(&j))
            .collect();
        next_active.retain(|j| !closing.contains(j));
        next_active.sort_unstable();
        let closed_mask = closing.iter().fold(0u32, |m, &j| m | 1 << j);

        let width = idx.level_len(step + 1);
        let mut next: HashMap<Vec<u32>, Vec<u128>> = HashMap::new();
        for (rows, counts) in &states {
            let mut base = [0u32; MAX_JUNCTIONS];
            for (&j, &r) in active.iter().zip(rows) {
                base[j] = r;
            }
            for (s, arcs) in t.arcs[q].iter().enumerate() {
                stats.work += 1;
                let mut r = base;
                if !arcs.iter().all(|&(u, v)| add_arc(&mut r, u as usize, v as usize)) {
                    continue;
                }
                let key: Vec<u32> = next_active.iter().map(|&j| r[j] & !closed_mask).collect();
                let class = t.labeled_class[s];
                let slot = next.entry(key).or_insert_with(|| vec![0; width]);
                for (m, &c) in counts.iter().enumerate() {
                    if c != 0 {
                        slot[idx.step(step, m as u32, class) as usize] += c;
                    }
                }
            }
        }
        if next.len() > max_states {
            return Err(Error::TooLarge {
                what: "frontier states",
                actual: next.len() as u128,
                limit: max_states as u128,
            });
        }
        stats.peak_states = stats.peak_states.max(next.len());
        states = next;
        active = next_active;
    }

    let width = idx.level_len(p);
    let mut counts = vec![0u128; t.labeled.len() * width];
    for (rows, vec) in &states {
        let mut r = [0u32; MAX_JUNCTIONS];
        for (&j, &row) in active.iter().zip(rows) {
            r[j] = row;
        }
        let outer = t.mask_to_labeled[outer_mask(&r, &layout.outer) as usize] as usize;
        for (m, &c) in vec.iter().enumerate() {
            counts[outer * width + m] += c;
            stats.accepted += c;
        }
    }
    let system = assemble(&t, &idx, &counts)?;
    Ok(Derivation { system, stats })
}
