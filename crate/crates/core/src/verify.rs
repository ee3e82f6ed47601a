//! The invariant suite behind `sgao verify`.

use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;

use crate::cache::SystemCache;
use crate::derive::{derive_recursion, diff_systems, RecursionSystem};
use crate::error::Result;
use crate::gasket::{build_gasket, GasketSpec};
use crate::growth::{bounds, converge, gap_bound};
use crate::oracle::{classify_orientations, count_bruteforce, count_chromatic};
use crate::recur::{builtin_system, f_formulas_agree, iterate, ratio_contracts, sandwich_holds};
use crate::states::standard_classes;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail(String),
    Skip(String),
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub seconds: f64,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            CheckStatus::Pass => write!(f, "PASS  {} ({:.2}s)", self.name, self.seconds),
            CheckStatus::Fail(why) => write!(f, "FAIL  {}: {why}", self.name),
            CheckStatus::Skip(why) => write!(f, "SKIP  {}: {why}", self.name),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| matches!(c.status, CheckStatus::Fail(_))).count()
    }

    pub fn skipped(&self) -> usize {
        self.checks.iter().filter(|c| matches!(c.status, CheckStatus::Skip(_))).count()
    }

    pub fn passed(&self) -> usize {
        self.checks.len() - self.failed() - self.skipped()
    }

    pub fn success(&self, allow_skip: bool) -> bool {
        self.failed() == 0 && (allow_skip || self.skipped() == 0)
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Adds the `2^27` sweep on `SG_2(2)` and the `2^24` sweep on `SG_3(1)`.
    pub thorough: bool,
    /// Replaces the built-in systems that are compared and iterated.
    pub builtin_override: Vec<RecursionSystem>,
    pub cache: Option<SystemCache>,
}

impl VerifyOptions {
    fn builtin(&self, d: u32, b: u32) -> Result<RecursionSystem> {
        match self.builtin_override.iter().find(|s| s.d == d && s.b == b) {
            Some(s) => Ok(s.clone()),
            None => builtin_system(d, b),
        }
    }

    fn derived(&self, d: u32, b: u32) -> Result<RecursionSystem> {
        match &self.cache {
            Some(cache) => Ok(cache.get_or_derive(d, b, || derive_recursion(d, b))?.0),
            None => derive_recursion(d, b),
        }
    }
}

fn run(checks: &mut Vec<CheckResult>, name: impl Into<String>, f: impl FnOnce() -> Result<CheckStatus>) {
    let start = Instant::now();
    let status = f().unwrap_or_else(|e| CheckStatus::Fail(e.to_string()));
    checks.push(CheckResult {
        name: name.into(),
        status,
        seconds: start.elapsed().as_secs_f64(),
    });
}

fn expect(ok: bool, why: impl FnOnce() -> String) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail(why())
    }
}

/// Runs every check and collects the outcome; individual failures do not stop the run.
pub fn run_suite(opts: &VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();

    for (d, b) in [(2, 2), (2, 3)] {
        run(&mut checks, format!("derived SG_{{{d},{b}}} recursion equals built-in"), || {
            let diff = diff_systems(&opts.derived(d, b)?, &opts.builtin(d, b)?);
            Ok(expect(diff.is_empty(), || format!("{} differing entries, first: {}", diff.len(), diff[0])))
        });
    }

    let mut oracle_cases = vec![(2, 2, 0), (2, 2, 1), (2, 3, 1), (3, 2, 0), (4, 2, 0)];
    if opts.thorough {
        oracle_cases.extend([(2, 2, 2), (3, 2, 1)]);
    }
    for (d, b, n) in oracle_cases {
        run(&mut checks, format!("oracles agree on SG_{{{d},{b}}}({n})"), || {
            let graph = build_gasket(GasketSpec::new(d, b, n)?)?.graph;
            let brute = count_bruteforce(&graph)?;
            let chrom = count_chromatic(&graph)?;
            let mut values = vec![("brute force", brute.clone()), ("chromatic", chrom)];
            if let Ok(system) = opts.builtin(d, b) {
                values.push(("recursion", iterate(&system, n)?.f(n)?.clone()));
            }
            Ok(expect(values.iter().all(|(_, v)| v == &brute), || format!("{values:?}")))
        });
    }

    for (d, b, n) in [(2, 2, 1), (2, 3, 1), (3, 2, 0)] {
        run(&mut checks, format!("classification of SG_{{{d},{b}}}({n})"), || {
            let graph = build_gasket(GasketSpec::new(d, b, n)?)?.graph;
            let labeled = classify_orientations(&graph)?;
            let total = count_chromatic(&graph)?;
            if labeled.total() != total {
                return Ok(CheckStatus::Fail(format!("class sum {} != {total}", labeled.total())));
            }
            let symmetric = labeled.counts.iter().all(|(p, c)| labeled.get(&p.reversed()) == *c);
            if !symmetric {
                return Ok(CheckStatus::Fail("reversal changes a labeled count".into()));
            }
            let table = standard_classes(d as usize + 1)?;
            labeled.class_values(table)?;
            Ok(CheckStatus::Pass)
        });
    }

    run(&mut checks, "recursion matches classified oracle at stage 1", || {
        let system = opts.builtin(2, 2)?;
        let graph = build_gasket(GasketSpec::new(2, 2, 1)?)?.graph;
        let seq = iterate(&system, 0)?;
        Ok(expect(
            crate::derive::verify_recursion(&system, &seq.stage(0)?.values, &graph)?,
            || "stage-1 class vector differs".into(),
        ))
    });

    run(&mut checks, "ratio contraction 3/8, 14/15, 5/6", || {
        let seq = iterate(&opts.builtin(2, 2)?, 8)?;
        let ok = ratio_contracts(&seq, 0, 1, 3, 8, 1)?
            && ratio_contracts(&seq, 1, 2, 14, 15, 1)?
            && ratio_contracts(&seq, 2, 3, 5, 6, 2)?;
        Ok(expect(ok, || "a ratio failed to contract".into()))
    });

    for (d, b, n) in [(2, 2, 7), (2, 3, 4)] {
        run(&mut checks, format!("sandwich bounds SG_{{{d},{b}}} up to {n}"), || {
            let seq = iterate(&opts.builtin(d, b)?, n)?;
            Ok(expect(sandwich_holds(&seq)?, || "sandwich inequality violated".into()))
        });
        run(&mut checks, format!("difference formula SG_{{{d},{b}}} up to {n}"), || {
            let seq = iterate(&opts.builtin(d, b)?, n)?;
            Ok(expect(f_formulas_agree(&seq)?, || "f differs from class total".into()))
        });
    }

    run(&mut checks, "growth bounds bracket the converged limit", || {
        for (d, b) in [(2, 2), (2, 3)] {
            let (conv, seq) = converge(&opts.builtin(d, b)?, 50, 12)?;
            for m in 1..conv.m {
                let est = bounds(&seq, m, 50)?;
                let lower = est.lower.expect("d(m) > 0 for m >= 1");
                if !(lower <= conv.upper && conv.lower <= est.upper) {
                    return Ok(CheckStatus::Fail(format!("SG_{{{d},{b}}} stage {m}")));
                }
            }
        }
        Ok(CheckStatus::Pass)
    });

    run(&mut checks, "tail bound covers upper(m) - z", || {
        let (conv, seq) = converge(&opts.builtin(2, 2)?, 50, 12)?;
        for m in 0..conv.m {
            let excess = bounds(&seq, m, 50)?.upper.sub(&conv.upper);
            if gap_bound(&seq, m, 50)? < excess {
                return Ok(CheckStatus::Fail(format!("stage {m}")));
            }
        }
        Ok(CheckStatus::Pass)
    });

    VerifyReport { checks }
}

/// Perturbs one coefficient; used to exercise failure reporting.
pub fn corrupt(system: &RecursionSystem) -> RecursionSystem {
    let mut bad = system.clone();
    let exp = bad.polys[0].terms().next().map(|(e, _)| e.clone()).expect("non-empty polynomial");
    bad.polys[0].add_term(exp, BigUint::from(1u32));
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = run_suite(&VerifyOptions::default());
        for c in &report.checks {
            assert_eq!(c.status, CheckStatus::Pass, "{c}");
        }
        assert!(report.success(false));
    }

    #[test]
    fn corrupted_builtin_fails() {
        let opts = VerifyOptions {
            builtin_override: vec![corrupt(&builtin_system(2, 2).unwrap())],
            ..Default::default()
        };
        let report = run_suite(&opts);
        let derived = &report.checks[0];
        assert!(derived.name.contains("{2,2}"));
        assert!(matches!(derived.status, CheckStatus::Fail(_)), "{derived}");
        assert!(!report.success(true));
    }
}
