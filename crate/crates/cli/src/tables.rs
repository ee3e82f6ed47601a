//! Reproduction of the reference value tables.

use anyhow::{bail, Result};
use clap::ValueEnum;
use num_bigint::BigUint;
use sgao_core::growth::{
    converge, growth_table, hausdorff_dimension, stage0_side_limit, stage0_upper, stage0_upper_2b, stage_count,
    upper_from_count,
};
use sgao_core::precision::HighPrecision;
use sgao_core::reference::{reference, StageCounts};
use sgao_core::{builtin_system, iterate, GasketSpec};

use crate::report::{Cell, Report};
use crate::systems::Systems;

/// Working precision for table entries.
const DIGITS: u32 = 50;
/// Printed significant digits for reals.
const SHOWN: u32 = 16;
/// Compared significant digits for reals.
const COMPARED: u32 = 15;
const DIMENSION_DIGITS: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    Ii,
    #[value(name = "III")]
    Iii,
    #[value(name = "IV")]
    Iv,
    #[value(name = "V")]
    V,
    #[value(name = "VI")]
    Vi,
}

pub fn build(which: Which, systems: &Systems) -> Result<Report> {
    match which {
        Which::I => stage_table("Orientation classes of SG_{2,2}(n)", &reference().sg22_counts),
        Which::Ii => stage_table("Orientation classes of SG_{2,3}(n)", &reference().sg23_counts),
        Which::Iii => {
            let r = &reference().sg22_bounds;
            growth_columns("Upper bounds for SG_{2,2} and SG_{3,2}", (2, 2), &r.upper, &r.ratio, &r.z, (3, 2), &r.companion, systems)
        }
        Which::Iv => simplex_stage0(),
        Which::V => {
            let r = &reference().sg23_bounds;
            growth_columns("Upper bounds for SG_{2,3} and SG_{2,4}", (2, 3), &r.upper, &r.ratio, &r.z, (2, 4), &r.companion, systems)
        }
        Which::Vi => side_stage0(),
    }
}

fn real_cell(value: &HighPrecision, expected: &str, sig: u32) -> Result<Cell> {
    Ok(Cell::checked(value.to_significant(SHOWN.max(sig)), value.agrees_with(expected, sig)?, expected))
}

fn stage_table(title: &str, expected: &StageCounts) -> Result<Report> {
    let system = builtin_system(expected.d, expected.b)?;
    let n_max = expected.stages() as u32 - 1;
    let seq = iterate(&system, n_max)?;
    let mut report = Report::new(title, &["n", "f", "a", "b", "c", "d"]);
    for n in 0..=n_max {
        let i = n as usize;
        let mut row = vec![Cell::plain(n.to_string())];
        let f = seq.f(n)?.to_string();
        row.push(Cell::checked(f.clone(), f == expected.f[i], &expected.f[i]));
        for (col, value) in expected.classes().iter().zip(&seq.stage(n)?.values) {
            let v = value.to_string();
            row.push(Cell::checked(v.clone(), v == col[i], &col[i]));
        }
        report.push(row);
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn growth_columns(
    title: &str,
    (d, b): (u32, u32),
    upper: &[String],
    ratio: &[String],
    z_expected: &str,
    (d2, b2): (u32, u32),
    upper2: &[String],
    systems: &Systems,
) -> Result<Report> {
    let system = builtin_system(d, b)?;
    let (conv, mut seq) = converge(&system, DIGITS, 12)?;
    let m_max = upper.len().max(upper2.len()) as u32 - 1;
    seq.extend_to(m_max)?;
    let rows = growth_table(&seq, upper.len() as u32 - 1, &conv.upper, DIGITS)?;
    let name2 = format!("upper SG_{{{d2},{b2}}}");
    let mut report = Report::new(
        format!("{title} (z = {} from m = {})", conv.upper.to_significant(SHOWN), conv.m),
        &["m", "upper", "ratio", &name2],
    );
    let second = second_column(d2, b2, upper2.len() as u32 - 1, systems)?;
    for m in 0..=m_max as usize {
        let mut row = vec![Cell::plain(m.to_string())];
        match rows.get(m) {
            Some(r) => {
                row.push(real_cell(&r.upper, &upper[m], COMPARED)?);
                row.push(real_cell(&r.ratio, &ratio[m], COMPARED)?);
            }
            None => row.extend([Cell::plain(""), Cell::plain("")]),
        }
        row.push(match (second.get(m), upper2.get(m)) {
            (Some(Some(v)), Some(e)) => real_cell(v, e, COMPARED)?,
            (Some(None), Some(_)) => Cell::skipped(format!("SG_{{{d2},{b2}}}({m}) needs the derived recursion")),
            _ => Cell::plain(""),
        });
        report.push(row);
    }
    if !conv.upper.agrees_with(z_expected, COMPARED)? {
        bail!("limit {} disagrees with {z_expected}", conv.upper);
    }
    Ok(report)
}

/// Upper bounds `m = 0..=m_max` for a gasket without a built-in recursion;
/// `None` where the count is out of reach.
fn second_column(d: u32, b: u32, m_max: u32, systems: &Systems) -> Result<Vec<Option<HighPrecision>>> {
    let seq = match systems.resolve_cheap(d, b)? {
        Some(system) => Some(iterate(&system, m_max)?),
        None => None,
    };
    (0..=m_max)
        .map(|m| {
            let count: Option<BigUint> = match &seq {
                Some(seq) => Some(seq.f(m)?.clone()),
                None => match stage_count(GasketSpec::new(d, b, m)?) {
                    Ok((c, _)) => Some(c),
                    Err(sgao_core::Error::TooLarge { .. }) => None,
                    Err(e) => return Err(e.into()),
                },
            };
            count.map(|c| Ok(upper_from_count(d, b, m, &c, DIGITS)?)).transpose()
        })
        .collect()
}

fn simplex_stage0() -> Result<Report> {
    let r = &reference().simplex_stage0;
    let mut report = Report::new("Stage-zero bounds for SG_d", &["d", "D", "upper(0)"]);
    for ((d, dim), up) in r.d.iter().zip(&r.dimension).zip(&r.upper0) {
        let dv = hausdorff_dimension(*d, 2, DIGITS)?;
        report.push(vec![
            Cell::plain(d.to_string()),
            Cell::checked(dv.to_significant(DIMENSION_DIGITS), dv.agrees_with(dim, DIMENSION_DIGITS)?, dim),
            real_cell(&stage0_upper(*d, DIGITS)?, up, COMPARED)?,
        ]);
    }
    Ok(report)
}

fn side_stage0() -> Result<Report> {
    let r = &reference().side_stage0;
    let mut report = Report::new("Stage-zero bounds for SG_{2,b}", &["b", "D", "upper(0)"]);
    for ((b, dim), up) in r.b.iter().zip(&r.dimension).zip(&r.upper0) {
        let dv = hausdorff_dimension(2, *b, DIGITS)?;
        report.push(vec![
            Cell::plain(b.to_string()),
            Cell::checked(dv.to_significant(DIMENSION_DIGITS), dv.agrees_with(dim, DIMENSION_DIGITS)?, dim),
            real_cell(&stage0_upper_2b(*b, DIGITS)?, up, COMPARED)?,
        ]);
    }
    let (dim, z) = stage0_side_limit(DIGITS)?;
    report.push(vec![
        Cell::plain("inf"),
        Cell::checked(dim.to_significant(DIMENSION_DIGITS), dim.agrees_with(&r.limit_dimension, DIMENSION_DIGITS)?, &r.limit_dimension),
        real_cell(&z, &r.limit_upper0, COMPARED)?,
    ]);
    Ok(report)
}
