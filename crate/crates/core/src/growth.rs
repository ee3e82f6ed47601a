//! Asymptotic growth constants: two-sided bounds from exact stage counts,
//! the tail bound for `SG_{2,2}`, and closed forms at stage zero.
//!
//! With `v(n) ~ K * P^n` vertices, `ln f(n) <= P^(n-m) ln f(m)` and
//! `ln d(n) >= P^(n-m) ln d(m)` give
//! `c(m) ln d(m) < z < c(m) ln f(m)` where `c(m) = 1 / (K P^m)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::derive::RecursionSystem;
use crate::error::{Error, Result};
use crate::gasket::{binomial, build_gasket_capped, count_edges, GasketSpec, MAX_BUILD_EDGES};
use crate::oracle::{count_chromatic, DEFAULT_CHROMATIC_EDGES};
use crate::precision::{ln_big, pow10_neg, HighPrecision};
use crate::recur::{builtin_system, iterate, StageSequence};

/// Lower and upper bound on `z` from stage `m`.
#[derive(Clone, Debug)]
pub struct GrowthEstimate {
    pub d: u32,
    pub b: u32,
    pub m: u32,
    /// Absent while the empty-relation count is still zero.
    pub lower: Option<HighPrecision>,
    pub upper: HighPrecision,
    pub digits: u32,
}

impl GrowthEstimate {
    pub fn width(&self) -> Option<HighPrecision> {
        self.lower.as_ref().map(|l| self.upper.sub(l))
    }
}

/// `c(m)` as the rational `p / q`.
pub fn normalization(d: u32, b: u32, m: u32) -> Result<(BigInt, BigInt)> {
    let spec = GasketSpec::new(d, b, 0)?;
    if b == 2 {
        Ok((BigInt::from(2u32), BigInt::from(d + 1).pow(m + 1)))
    } else {
        let p = BigInt::from(spec.pieces());
        Ok((BigInt::from(b + 2), BigInt::from(b + 4) * p.pow(m)))
    }
}

/// `c(m) ln count`
pub fn upper_from_count(d: u32, b: u32, m: u32, count: &BigUint, digits: u32) -> Result<HighPrecision> {
    let (p, q) = normalization(d, b, m)?;
    ln_big(count, digits)?.mul_ratio(&p, &q)
}

/// Bounds from stage `m` of a computed sequence.
pub fn bounds(seq: &StageSequence, m: u32, digits: u32) -> Result<GrowthEstimate> {
    let (d, b) = (seq.d(), seq.b());
    let (p, q) = normalization(d, b, m)?;
    let upper = ln_big(seq.f(m)?, digits)?.mul_ratio(&p, &q)?;
    let empty = seq.d_class(m)?;
    let lower = if empty.is_zero() {
        None
    } else {
        Some(ln_big(empty, digits)?.mul_ratio(&p, &q)?)
    };
    Ok(GrowthEstimate {
        d,
        b,
        m,
        lower,
        upper,
        digits,
    })
}

/// Upper bound on `upper(m) - z` for `SG_{2,2}`:
/// `(3 ln f - ln(f^3 - 2 s^3)) / 3^(m+1)` with `s = 3a + 2b + c` at stage `m`.
pub fn gap_bound(seq: &StageSequence, m: u32, digits: u32) -> Result<HighPrecision> {
    if (seq.d(), seq.b()) != (2, 2) {
        return Err(Error::Unsupported("the tail bound is specific to SG_{2,2}".into()));
    }
    let x = &seq.stage(m)?.values;
    let f = seq.f(m)?;
    let s = BigUint::from(3u32) * &x[0] + BigUint::from(2u32) * &x[1] + &x[2];
    let f3 = f.pow(3);
    let s3x2 = s.pow(3) * 2u32;
    if s3x2 >= f3 {
        return Err(Error::Internal(format!("2 s^3 >= f^3 at stage {m}")));
    }
    let numerator = ln_big(&f3, digits)?.sub(&ln_big(&(f3 - s3x2), digits)?);
    numerator.mul_ratio(&BigInt::one(), &BigInt::from(3u32).pow(m + 1))
}

/// The tightest two-sided bound available from stage `m`: the sandwich
/// bounds, with the lower end raised to `upper(m) - gap_bound(m)` for `SG_{2,2}`.
pub fn certified_bracket(seq: &StageSequence, m: u32, digits: u32) -> Result<(HighPrecision, HighPrecision)> {
    let est = bounds(seq, m, digits)?;
    let mut lower = est.lower.unwrap_or_else(|| HighPrecision::zero(digits));
    if (seq.d(), seq.b()) == (2, 2) {
        let tail = est.upper.sub(&gap_bound(seq, m, digits)?);
        lower = lower.max(tail);
    }
    Ok((lower, est.upper))
}

/// `(2 / (d+1)) ln (d+1)!`
pub fn stage0_upper(d: u32, digits: u32) -> Result<HighPrecision> {
    GasketSpec::new(d, 2, 0)?;
    let fact: BigUint = (1..=d + 1).map(BigUint::from).product();
    upper_from_count(d, 2, 0, &fact, digits)
}

/// `((b+2) / (b+4)) ln 6`
pub fn stage0_upper_2b(b: u32, digits: u32) -> Result<HighPrecision> {
    upper_from_count(2, b, 0, &BigUint::from(6u32), digits)
}

/// `ln C(b+d-1, d) / ln b`
pub fn hausdorff_dimension(d: u32, b: u32, digits: u32) -> Result<HighPrecision> {
    if d < 2 || b < 2 {
        return Err(Error::InvalidSpec(format!("need d >= 2 and b >= 2, got d={d}, b={b}")));
    }
    let copies = binomial(u64::from(b + d - 1), u64::from(d));
    ln_big(&BigUint::from(copies), digits)?.div(&ln_big(&BigUint::from(b), digits)?)
}

/// Where a stage count came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountSource {
    Recursion,
    Chromatic,
}

/// `c(m) ln N_AO(SG_{d,b}(m))`, taking the count from a built-in recursion
/// when one exists and otherwise from the chromatic oracle within its default cap.
pub fn upper_from_oracle(spec: GasketSpec, digits: u32) -> Result<(HighPrecision, CountSource)> {
    let (count, source) = stage_count(spec)?;
    Ok((upper_from_count(spec.d, spec.b, spec.n, &count, digits)?, source))
}

/// Exact `N_AO(SG_{d,b}(n))` by the cheapest available route.
pub fn stage_count(spec: GasketSpec) -> Result<(BigUint, CountSource)> {
    spec.validate()?;
    if let Ok(system) = builtin_system(spec.d, spec.b) {
        let seq = iterate(&system, spec.n)?;
        return Ok((seq.f(spec.n)?.clone(), CountSource::Recursion));
    }
    let edges = count_edges(&spec);
    if edges > BigUint::from(DEFAULT_CHROMATIC_EDGES) {
        return Err(Error::TooLarge {
            what: "edge count for an oracle count",
            actual: u128::try_from(edges).unwrap_or(u128::MAX),
            limit: DEFAULT_CHROMATIC_EDGES as u128,
        });
    }
    let graph = build_gasket_capped(spec, MAX_BUILD_EDGES)?.graph;
    Ok((count_chromatic(&graph)?, CountSource::Chromatic))
}

/// One row of a growth table.
#[derive(Clone, Debug)]
pub struct GrowthRow {
    pub m: u32,
    pub upper: HighPrecision,
    pub lower: Option<HighPrecision>,
    /// `z / upper(m)`
    pub ratio: HighPrecision,
}

/// A limit value certified by coinciding bounds.
#[derive(Clone, Debug)]
pub struct Converged {
    pub d: u32,
    pub b: u32,
    /// Stage whose bounds first agreed to the requested accuracy.
    pub m: u32,
    pub lower: HighPrecision,
    pub upper: HighPrecision,
    /// Decimals that the two bounds share.
    pub digits: u32,
}

impl Converged {
    /// The limit, rounded to the certified digits.
    pub fn z(&self) -> String {
        self.upper.to_fixed(self.digits)
    }
}

/// Iterates `system` until `upper(m) - lower(m) < 10^-(digits - 5)`.
pub fn converge(system: &RecursionSystem, digits: u32, m_max: u32) -> Result<(Converged, StageSequence)> {
    let certified = digits.saturating_sub(5);
    let mut seq = iterate(system, 0)?;
    for m in 0..=m_max {
        seq.extend_to(m)?;
        let est = bounds(&seq, m, digits)?;
        if let Some(width) = est.width() {
            if width < pow10_neg(certified, digits) {
                let lower = est.lower.expect("width implies lower");
                return Ok((
                    Converged {
                        d: system.d,
                        b: system.b,
                        m,
                        lower,
                        upper: est.upper,
                        digits: certified,
                    },
                    seq,
                ));
            }
        }
    }
    Err(Error::OutOfRange(format!(
        "bounds did not agree to {certified} digits by stage {m_max}"
    )))
}

/// Rows `m = 0..=m_max` with the ratio to `z`.
pub fn growth_table(seq: &StageSequence, m_max: u32, z: &HighPrecision, digits: u32) -> Result<Vec<GrowthRow>> {
    (0..=m_max)
        .map(|m| {
            let est = bounds(seq, m, digits)?;
            let ratio = z.div(&est.upper)?;
            Ok(GrowthRow {
                m,
                upper: est.upper,
                lower: est.lower,
                ratio,
            })
        })
        .collect()
}

/// `(d, D, z(0))` for `d` in the range; closed-form stage-zero bounds.
pub fn table_stage0_by_dimension(ds: impl IntoIterator<Item = u32>, digits: u32) -> Result<Vec<(u32, HighPrecision, HighPrecision)>> {
    ds.into_iter()
        .map(|d| Ok((d, hausdorff_dimension(d, 2, digits)?, stage0_upper(d, digits)?)))
        .collect()
}

/// `(b, D, z(0))` for `b` in the range, `d = 2`.
pub fn table_stage0_by_side(bs: impl IntoIterator<Item = u32>, digits: u32) -> Result<Vec<(u32, HighPrecision, HighPrecision)>> {
    bs.into_iter()
        .map(|b| Ok((b, hausdorff_dimension(2, b, digits)?, stage0_upper_2b(b, digits)?)))
        .collect()
}

/// Limits of `D` and `z(0)` as `b` grows without bound: `2` and `ln 6`.
pub fn stage0_side_limit(digits: u32) -> Result<(HighPrecision, HighPrecision)> {
    Ok((
        HighPrecision::from_integer(2, digits),
        ln_big(&BigUint::from(6u32), digits)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::reference;
    use std::cmp::Ordering;

    fn seq22(n: u32) -> StageSequence {
        iterate(&builtin_system(2, 2).unwrap(), n).unwrap()
    }

    fn seq23(n: u32) -> StageSequence {
        iterate(&builtin_system(2, 3).unwrap(), n).unwrap()
    }

    #[test]
    fn normalization_constants() {
        assert_eq!(normalization(2, 2, 0).unwrap(), (BigInt::from(2), BigInt::from(3)));
        // (b+2)/(b+4) / P^m agrees with 2/3^(m+1) at b = 2
        let (p, q) = normalization(2, 2, 4).unwrap();
        assert_eq!(p * BigInt::from(6 * 81), q * BigInt::from(4));
        assert_eq!(normalization(2, 3, 2).unwrap(), (BigInt::from(5), BigInt::from(7 * 36)));
        assert_eq!(normalization(3, 2, 1).unwrap(), (BigInt::from(2), BigInt::from(16)));
        assert!(normalization(3, 3, 1).is_err());
    }

    #[test]
    fn stage_one_upper_bound() {
        let v = ln_big(&BigUint::from(162u32), 30).unwrap().mul_ratio(&BigInt::from(2), &BigInt::from(9)).unwrap();
        assert!(v.agrees_with("1.130576963384974", 16).unwrap());
        let est = bounds(&seq22(1), 1, 30).unwrap();
        assert_eq!(est.upper, v);
        assert!(bounds(&seq22(0), 0, 30).unwrap().lower.is_none());
        assert!(bounds(&seq22(1), 2, 30).is_err());
    }

    #[test]
    fn upper_bounds_sg22_match_reference() {
        let r = &reference().sg22_bounds;
        let seq = seq22(5);
        for (m, expected) in r.upper.iter().enumerate() {
            let est = bounds(&seq, m as u32, 40).unwrap();
            assert!(est.upper.agrees_with(expected, 15).unwrap(), "m={m}: {}", est.upper);
        }
    }

    #[test]
    fn upper_bounds_sg23_match_reference() {
        let r = &reference().sg23_bounds;
        let seq = seq23(3);
        for (m, expected) in r.upper.iter().enumerate() {
            let est = bounds(&seq, m as u32, 40).unwrap();
            assert!(est.upper.agrees_with(expected, 15).unwrap(), "m={m}: {}", est.upper);
        }
    }

    #[test]
    fn bounds_are_monotone_and_ordered() {
        for seq in [seq22(7), seq23(4)] {
            let ests: Vec<_> = (0..=seq.n_max()).map(|m| bounds(&seq, m, 60).unwrap()).collect();
            for w in ests.windows(2) {
                assert!(w[1].upper < w[0].upper);
                if let (Some(a), Some(b)) = (&w[0].lower, &w[1].lower) {
                    assert!(b > a);
                }
            }
            for e in &ests {
                if let Some(l) = &e.lower {
                    assert!(l < &e.upper);
                    assert!(l.is_positive());
                }
            }
        }
    }

    #[test]
    fn bound_width_shrinks_to_zero() {
        // Observed widths: 7.2e-11 at m = 5, 1.1e-19 at m = 6, 6.7e-37 at m = 7.
        let seq = seq22(8);
        let widths: Vec<HighPrecision> = (1..=8).map(|m| bounds(&seq, m, 90).unwrap().width().unwrap()).collect();
        for w in widths.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert_eq!(widths[4].cmp_pow10(-10), Ordering::Less);
        assert_eq!(widths[4].cmp_pow10(-11), Ordering::Greater);
        assert_eq!(widths[6].cmp_pow10(-30), Ordering::Less);
        assert_eq!(widths[7].cmp_pow10(-70), Ordering::Less);
    }

    #[test]
    fn gap_bound_values() {
        let seq = seq22(8);
        // stage 0: -(1/3) ln(3/4)
        let g0 = gap_bound(&seq, 0, 30).unwrap();
        let expected = ln_big(&BigUint::from(4u32), 30)
            .unwrap()
            .sub(&ln_big(&BigUint::from(3u32), 30).unwrap())
            .mul_ratio(&BigInt::one(), &BigInt::from(3))
            .unwrap();
        assert!(g0.sub(&expected).cmp_pow10(-30) == Ordering::Less);
        let g3 = gap_bound(&seq, 3, 30).unwrap();
        assert_eq!(g3.cmp_pow10(-7), Ordering::Less);
        assert_eq!(g3.cmp_pow10(-9), Ordering::Greater);
        assert!(gap_bound(&seq23(1), 0, 30).is_err());
    }

    #[test]
    fn certified_bracket_sg22() {
        let seq = seq22(5);
        let (lo, up) = certified_bracket(&seq, 5, 60).unwrap();
        assert_eq!(up.sub(&lo).cmp_pow10(-27), Ordering::Less);
        assert!(lo > bounds(&seq, 5, 60).unwrap().lower.unwrap());
        let (lo1, up1) = certified_bracket(&seq, 1, 60).unwrap();
        assert!(lo1 > bounds(&seq, 1, 60).unwrap().lower.unwrap() && lo1 < up1);
        let (lo23, up23) = certified_bracket(&seq23(3), 3, 60).unwrap();
        let est = bounds(&seq23(3), 3, 60).unwrap();
        assert_eq!((Some(lo23), up23), (est.lower, est.upper));
    }

    #[test]
    fn gap_bound_is_sound() {
        let (conv, seq) = converge(&builtin_system(2, 2).unwrap(), 60, 12).unwrap();
        for m in 0..conv.m {
            let upper = bounds(&seq, m, 70).unwrap().upper;
            let excess = upper.sub(&conv.upper);
            assert!(gap_bound(&seq, m, 70).unwrap() >= excess, "m={m}");
        }
    }

    #[test]
    fn converged_limits() {
        let (c22, _) = converge(&builtin_system(2, 2).unwrap(), 50, 12).unwrap();
        assert_eq!(c22.m, 8);
        assert!(c22.z().starts_with("1.127299070536616"));
        assert!(c22.upper.sub(&c22.lower).cmp_pow10(-45) == Ordering::Less);
        let (c23, _) = converge(&builtin_system(2, 3).unwrap(), 30, 8).unwrap();
        assert!(c23.z().starts_with("1.176059211520985"));
        assert!(converge(&builtin_system(2, 2).unwrap(), 50, 3).is_err());
    }

    #[test]
    fn ratio_column_sg22() {
        let r = &reference().sg22_bounds;
        let (conv, seq) = converge(&builtin_system(2, 2).unwrap(), 40, 12).unwrap();
        let rows = growth_table(&seq, 5, &conv.upper, 40).unwrap();
        for (row, expected) in rows.iter().zip(&r.ratio) {
            assert!(row.ratio.agrees_with(expected, 15).unwrap(), "m={}: {}", row.m, row.ratio);
        }
    }

    #[test]
    fn closed_form_tables() {
        let r = reference();
        for (d, expected) in r.simplex_stage0.d.iter().zip(&r.simplex_stage0.upper0) {
            assert!(stage0_upper(*d, 30).unwrap().agrees_with(expected, 15).unwrap(), "d={d}");
        }
        for (d, expected) in r.simplex_stage0.d.iter().zip(&r.simplex_stage0.dimension) {
            let sig = expected.replace('.', "").len().max(7) as u32;
            assert!(hausdorff_dimension(*d, 2, 30).unwrap().agrees_with(expected, sig).unwrap(), "d={d}");
        }
        for (b, expected) in r.side_stage0.b.iter().zip(&r.side_stage0.upper0) {
            assert!(stage0_upper_2b(*b, 30).unwrap().agrees_with(expected, 15).unwrap(), "b={b}");
        }
        for (b, expected) in r.side_stage0.b.iter().zip(&r.side_stage0.dimension) {
            assert!(hausdorff_dimension(2, *b, 30).unwrap().agrees_with(expected, 8).unwrap(), "b={b}");
        }
        let (dim, z) = stage0_side_limit(30).unwrap();
        assert!(z.agrees_with(&r.side_stage0.limit_upper0, 16).unwrap());
        assert!(dim.agrees_with(&r.side_stage0.limit_dimension, 8).unwrap());
    }

    #[test]
    fn spec_examples() {
        assert!(stage0_upper(5, 30).unwrap().agrees_with("2.193083737336700", 16).unwrap());
        assert!(stage0_upper(10, 30).unwrap().agrees_with("3.182237790158888", 16).unwrap());
        assert!(stage0_upper_2b(7, 30).unwrap().agrees_with("1.465985020277499", 16).unwrap());
        assert!(hausdorff_dimension(2, 2, 20).unwrap().agrees_with("1.5849625", 8).unwrap());
        assert!(hausdorff_dimension(2, 10, 20).unwrap().agrees_with("1.7403626", 8).unwrap());
        assert!(hausdorff_dimension(3, 2, 20).unwrap().agrees_with("2", 15).unwrap());
        assert!(stage0_upper_2b(4, 30).unwrap().agrees_with("1.343819601921041", 16).unwrap());
    }

    #[test]
    fn oracle_backed_upper_bounds() {
        let (z, src) = upper_from_oracle(GasketSpec::new(2, 2, 1).unwrap(), 30).unwrap();
        assert_eq!(src, CountSource::Recursion);
        assert!(z.agrees_with("1.130576963384974", 16).unwrap());
        let (z, src) = upper_from_oracle(GasketSpec::new(3, 2, 0).unwrap(), 30).unwrap();
        assert_eq!(src, CountSource::Chromatic);
        assert!(z.agrees_with("1.589026915173972", 16).unwrap());
        let (z, src) = upper_from_oracle(GasketSpec::new(4, 2, 0).unwrap(), 30).unwrap();
        assert_eq!(src, CountSource::Chromatic);
        assert!(z.agrees_with("1.914996697112818", 16).unwrap());
        assert!(matches!(
            upper_from_oracle(GasketSpec::new(3, 2, 3).unwrap(), 30),
            Err(Error::TooLarge { .. })
        ));
    }
}
