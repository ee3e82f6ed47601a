//! Weighted gluing of labeled state vectors: stage `n` to stage `n + 1`
//! without going through a class-level recursion.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{add_arc, outer_mask, GlueTables, MAX_JUNCTIONS};
use crate::error::{Error, Result};
use crate::oracle::LabeledStateVector;

fn overflow() -> Error {
    Error::TooLarge {
        what: "composed count (u128 accumulator)",
        actual: u128::MAX,
        limit: u128::MAX,
    }
}

/// Labeled counts of `SG_{d,b}(n+1)` from those of `SG_{d,b}(n)`.
pub fn compose_states(d: u32, b: u32, piece: &LabeledStateVector) -> Result<LabeledStateVector> {
    let t = GlueTables::new(d, b)?;
    let k = t.layout.corner_count();
    if piece.k != k {
        return Err(Error::ContractViolation(format!(
            "state vector on {} corners for a gasket with {k}",
            piece.k
        )));
    }
    let mut states = Vec::new();
    for (poset, count) in &piece.counts {
        let idx = t.mask_to_labeled[poset.bits() as usize];
        if idx == u32::MAX {
            return Err(Error::ContractViolation(format!("{poset} is not a strict partial order")));
        }
        if count.bits() > 0 {
            states.push((idx as usize, count.to_u128().ok_or_else(overflow)?));
        }
    }
    let l = t.labeled.len();
    let p = t.pieces();

    fn dfs(
        t: &GlueTables,
        states: &[(usize, u128)],
        piece: usize,
        reach: &[u32; MAX_JUNCTIONS],
        weight: u128,
        acc: &mut [u128],
    ) -> Result<()> {
        for &(s, w) in states {
            let mut r = *reach;
            if !t.arcs[piece][s].iter().all(|&(u, v)| add_arc(&mut r, u as usize, v as usize)) {
                continue;
            }
            let w = weight.checked_mul(w).ok_or_else(overflow)?;
            if piece + 1 == t.pieces() {
                let outer = t.mask_to_labeled[outer_mask(&r, &t.layout.outer) as usize] as usize;
                acc[outer] = acc[outer].checked_add(w).ok_or_else(overflow)?;
            } else {
                dfs(t, states, piece + 1, &r, w, acc)?;
            }
        }
        Ok(())
    }

    let parts: Vec<Vec<u128>> = states
        .par_iter()
        .map(|&(s0, w0)| {
            let mut acc = vec![0u128; l];
            let mut reach = [0u32; MAX_JUNCTIONS];
            if t.arcs[0][s0].iter().all(|&(u, v)| add_arc(&mut reach, u as usize, v as usize)) {
                if p == 1 {
                    acc[t.mask_to_labeled[outer_mask(&reach, &t.layout.outer) as usize] as usize] = w0;
                } else {
                    dfs(&t, &states, 1, &reach, w0, &mut acc)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    let mut total = vec![BigUint::default(); l];
    for part in parts {
        for (x, v) in total.iter_mut().zip(part) {
            *x += v;
        }
    }
    let counts: BTreeMap<_, _> = t
        .labeled
        .iter()
        .zip(total)
        .filter(|(_, c)| c.bits() > 0)
        .map(|(p, c)| (*p, c))
        .collect();
    Ok(LabeledStateVector { k, counts })
}
