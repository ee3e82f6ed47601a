//! Acceptance criteria, one PASS/FAIL/SKIP line each.
//!
//! Criterion 9 is a stretch goal and runs only with `SGAO_STRETCH=1`
//! (about five minutes on one core, dominated by the `SG_3(2)` composition).

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use sgao_core::derive::{compose_states, derive_recursion, derive_recursion_dp, diff_systems};
use sgao_core::gasket::{build_gasket, count_edges, GasketSpec};
use sgao_core::growth::{
    bounds, certified_bracket, converge, gap_bound, growth_table, hausdorff_dimension, stage0_side_limit,
    stage0_upper, stage0_upper_2b, upper_from_count,
};
use sgao_core::oracle::{
    classify_orientations, count_bruteforce, count_chromatic, LabeledStateVector, DEFAULT_BRUTE_FORCE_EDGES,
};
use sgao_core::precision::HighPrecision;
use sgao_core::recur::{ratio_contracts, sandwich_holds};
use sgao_core::reference::{reference, StageCounts};
use sgao_core::states::MAX_CORNERS;
use sgao_core::{builtin_system, iterate, Graph};

const DIGITS: u32 = 60;
const SIG: u32 = 15;

enum Outcome {
    Pass,
    Fail(Vec<String>),
    Skip(String),
}

#[derive(Default)]
struct Checks(Vec<String>);

impl Checks {
    fn ensure(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn real(&mut self, label: &str, value: &HighPrecision, expected: &str, sig: u32) {
        let ok = value.agrees_with(expected, sig).unwrap_or(false);
        self.ensure(ok, || format!("{label}: got {}, expected {expected}", value.to_significant(sig + 2)));
    }

    fn within(&mut self, label: &str, elapsed: Duration, limit: Duration) {
        self.ensure(elapsed < limit, || format!("{label} took {elapsed:?}, limit {limit:?}"));
    }

    fn done(self) -> Outcome {
        if self.0.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Fail(self.0)
        }
    }
}

fn graph(d: u32, b: u32, n: u32) -> Graph {
    build_gasket(GasketSpec::new(d, b, n).unwrap()).unwrap().graph
}

fn memo<T>(cell: &'static OnceLock<T>, f: impl FnOnce() -> T) -> &'static T {
    cell.get_or_init(f)
}

fn brute_sg3_1() -> &'static BigUint {
    static C: OnceLock<BigUint> = OnceLock::new();
    memo(&C, || count_bruteforce(&graph(3, 2, 1)).unwrap())
}

fn brute_sg24_1() -> &'static BigUint {
    static C: OnceLock<BigUint> = OnceLock::new();
    memo(&C, || count_bruteforce(&graph(2, 4, 1)).unwrap())
}

fn stage_table(t: &StageCounts, checks: &mut Checks) {
    let start = Instant::now();
    let n_max = t.stages() as u32 - 1;
    let seq = iterate(&builtin_system(t.d, t.b).unwrap(), n_max).unwrap();
    let elapsed = start.elapsed();
    for n in 0..=n_max {
        let i = n as usize;
        let f = seq.f(n).unwrap().to_string();
        checks.ensure(f == t.f[i], || format!("f({n}) = {f}, expected {}", t.f[i]));
        for (name, (col, v)) in ["a", "b", "c", "d"].iter().zip(t.classes().iter().zip(&seq.stage(n).unwrap().values)) {
            let v = v.to_string();
            checks.ensure(v == col[i], || format!("{name}({n}) = {v}, expected {}", col[i]));
        }
    }
    checks.within("evaluation", elapsed, Duration::from_secs(1));
}

fn criterion_1() -> Outcome {
    let mut c = Checks::default();
    stage_table(&reference().sg22_counts, &mut c);
    c.done()
}

fn criterion_2() -> Outcome {
    let mut c = Checks::default();
    stage_table(&reference().sg23_counts, &mut c);
    c.done()
}

fn criterion_3() -> Outcome {
    let mut c = Checks::default();
    let start = Instant::now();
    for (d, b) in [(2, 2), (2, 3)] {
        let derived = derive_recursion(d, b).unwrap();
        let diff = diff_systems(&derived, &builtin_system(d, b).unwrap());
        c.ensure(diff.is_empty(), || format!("SG_{{{d},{b}}}: {} differences, first {}", diff.len(), diff[0]));
    }
    c.within("derivation", start.elapsed(), Duration::from_secs(600));
    c.done()
}

fn criterion_4() -> Outcome {
    let mut c = Checks::default();
    let cases: [(u32, u32, u32, u64); 3] = [(2, 2, 1, 162), (2, 2, 2, 4_069_278), (2, 3, 1, 19_602)];
    for (d, b, n, expected) in cases {
        let g = graph(d, b, n);
        let brute = count_bruteforce(&g).unwrap();
        let chrom = count_chromatic(&g).unwrap();
        let rec = iterate(&builtin_system(d, b).unwrap(), n).unwrap().f(n).unwrap().clone();
        let e = BigUint::from(expected);
        c.ensure(brute == e && chrom == e && rec == e, || {
            format!("SG_{{{d},{b}}}({n}): brute {brute}, chromatic {chrom}, recursion {rec}, expected {e}")
        });
    }
    // SG_3 has no built-in class recursion; its stage-1 value comes from
    // gluing the stage-0 states.
    let brute = brute_sg3_1();
    let chrom = count_chromatic(&graph(3, 2, 1)).unwrap();
    let composed = compose_states(3, 2, &classify_orientations(&graph(3, 2, 0)).unwrap()).unwrap().total();
    c.ensure(brute == &chrom && chrom == composed, || {
        format!("SG_3(1): brute {brute}, chromatic {chrom}, composition {composed}")
    });
    c.done()
}

fn criterion_5() -> Outcome {
    let mut c = Checks::default();
    let r = reference();

    let (conv22, seq22) = converge(&builtin_system(2, 2).unwrap(), DIGITS, 12).unwrap();
    let (lo, up) = certified_bracket(&seq22, 5, DIGITS).unwrap();
    c.ensure(lo <= conv22.lower && conv22.upper <= up, || "m = 5 bounds do not bracket the limit".into());
    c.real("SG_{2,2} lower bound at m = 5", &lo, &r.sg22_bounds.z, SIG);
    c.real("SG_{2,2} upper bound at m = 5", &up, &r.sg22_bounds.z, SIG);

    let (conv23, seq23) = converge(&builtin_system(2, 3).unwrap(), DIGITS, 12).unwrap();
    let (lo23, up23) = certified_bracket(&seq23, 3, DIGITS).unwrap();
    c.ensure(lo23 <= conv23.lower && conv23.upper <= up23, || "SG_{2,3} m = 3 bounds do not bracket".into());
    c.real("SG_{2,3} upper bound at m = 3", &up23, &r.sg23_bounds.z, SIG);

    let rows = growth_table(&seq22, 5, &conv22.upper, DIGITS).unwrap();
    for (m, row) in rows.iter().enumerate() {
        c.real(&format!("upper SG_{{2,2}}({m})"), &row.upper, &r.sg22_bounds.upper[m], SIG);
        c.real(&format!("ratio SG_{{2,2}}({m})"), &row.ratio, &r.sg22_bounds.ratio[m], SIG);
    }
    let rows = growth_table(&seq23, 3, &conv23.upper, DIGITS).unwrap();
    for (m, row) in rows.iter().enumerate() {
        c.real(&format!("upper SG_{{2,3}}({m})"), &row.upper, &r.sg23_bounds.upper[m], SIG);
        c.real(&format!("ratio SG_{{2,3}}({m})"), &row.ratio, &r.sg23_bounds.ratio[m], SIG);
    }
    c.done()
}

fn criterion_6() -> Outcome {
    let mut c = Checks::default();
    let start = Instant::now();
    let r = reference();
    for ((d, dim), up) in r.simplex_stage0.d.iter().zip(&r.simplex_stage0.dimension).zip(&r.simplex_stage0.upper0) {
        c.real(&format!("D(SG_{d})"), &hausdorff_dimension(*d, 2, DIGITS).unwrap(), dim, 8);
        c.real(&format!("upper SG_{d}(0)"), &stage0_upper(*d, DIGITS).unwrap(), up, SIG);
    }
    for ((b, dim), up) in r.side_stage0.b.iter().zip(&r.side_stage0.dimension).zip(&r.side_stage0.upper0) {
        c.real(&format!("D(SG_{{2,{b}}})"), &hausdorff_dimension(2, *b, DIGITS).unwrap(), dim, 8);
        c.real(&format!("upper SG_{{2,{b}}}(0)"), &stage0_upper_2b(*b, DIGITS).unwrap(), up, SIG);
    }
    let (dim, z) = stage0_side_limit(DIGITS).unwrap();
    c.real("limit D", &dim, &r.side_stage0.limit_dimension, 8);
    c.real("limit upper(0)", &z, &r.side_stage0.limit_upper0, SIG);
    c.within("closed forms", start.elapsed(), Duration::from_secs(1));
    c.done()
}

fn criterion_7() -> Outcome {
    let mut c = Checks::default();
    let r = reference();
    let sg3 = upper_from_count(3, 2, 1, brute_sg3_1(), DIGITS).unwrap();
    c.real("upper SG_3(1)", &sg3, &r.sg22_bounds.companion[1], SIG);
    let sg24 = upper_from_count(2, 4, 1, brute_sg24_1(), DIGITS).unwrap();
    c.real("upper SG_{2,4}(1)", &sg24, &r.sg23_bounds.companion[1], SIG);
    c.done()
}

/// Gaskets small enough for exhaustive classification.
fn classifiable() -> Vec<GasketSpec> {
    let mut out = Vec::new();
    for d in 2..MAX_CORNERS as u32 {
        for b in 2..=6 {
            for n in 0..=3 {
                if n == 0 && b > 2 {
                    continue;
                }
                let Ok(spec) = GasketSpec::new(d, b, n) else { continue };
                if count_edges(&spec) <= BigUint::from(DEFAULT_BRUTE_FORCE_EDGES) {
                    out.push(spec);
                }
            }
        }
    }
    out
}

fn reversal_symmetric(v: &LabeledStateVector) -> bool {
    v.counts.iter().all(|(p, c)| &v.get(&p.reversed()) == c)
}

fn criterion_8() -> Outcome {
    let mut c = Checks::default();
    let seq22 = iterate(&builtin_system(2, 2).unwrap(), 8).unwrap();
    for (i, j, p, q, from) in [(0, 1, 3, 8, 1), (1, 2, 14, 15, 1), (2, 3, 5, 6, 2)] {
        c.ensure(ratio_contracts(&seq22, i, j, p, q, from).unwrap(), || {
            format!("ratio x{i}/x{j} does not contract by {p}/{q}")
        });
    }
    let seq23 = iterate(&builtin_system(2, 3).unwrap(), 4).unwrap();
    c.ensure(sandwich_holds(&seq22).unwrap(), || "sandwich fails for SG_{2,2}".into());
    c.ensure(sandwich_holds(&seq23).unwrap(), || "sandwich fails for SG_{2,3}".into());

    let (conv, seq) = converge(&builtin_system(2, 2).unwrap(), DIGITS, 12).unwrap();
    for m in 0..conv.m {
        let excess = bounds(&seq, m, DIGITS).unwrap().upper.sub(&conv.upper);
        c.ensure(gap_bound(&seq, m, DIGITS).unwrap() >= excess, || format!("tail bound unsound at m = {m}"));
    }

    let specs = classifiable();
    c.ensure(specs.len() >= 8, || format!("only {} classifiable gaskets", specs.len()));
    for spec in specs {
        let g = build_gasket(spec).unwrap().graph;
        let labeled = classify_orientations(&g).unwrap();
        let total = match (spec.d, spec.b, spec.n) {
            (3, 2, 1) => brute_sg3_1().clone(),
            (2, 4, 1) => brute_sg24_1().clone(),
            _ => count_chromatic(&g).unwrap(),
        };
        let name = format!("SG_{{{},{}}}({})", spec.d, spec.b, spec.n);
        c.ensure(labeled.total() == total, || format!("{name}: class sum {} != {total}", labeled.total()));
        c.ensure(reversal_symmetric(&labeled), || format!("{name}: reversal symmetry fails"));
    }
    c.done()
}

fn criterion_9() -> Outcome {
    if std::env::var_os("SGAO_STRETCH").is_none_or(|v| v.is_empty() || v == "0") {
        return Outcome::Skip("stretch goal; set SGAO_STRETCH=1 (about 8 min on one core)".into());
    }
    let mut c = Checks::default();
    let r = reference();
    let sg24 = derive_recursion_dp(2, 4).unwrap();
    let f2 = iterate(&sg24, 2).unwrap().f(2).unwrap().clone();
    c.real("upper SG_{2,4}(2)", &upper_from_count(2, 4, 2, &f2, DIGITS).unwrap(), &r.sg23_bounds.companion[2], SIG);
    let stage1 = classify_orientations(&graph(3, 2, 1)).unwrap();
    let stage2 = compose_states(3, 2, &stage1).unwrap();
    c.real("upper SG_3(2)", &upper_from_count(3, 2, 2, &stage2.total(), DIGITS).unwrap(), &r.sg22_bounds.companion[2], SIG);
    c.done()
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("SG_{2,2} stage counts and classes exact", criterion_1),
        ("SG_{2,3} stage counts and classes exact", criterion_2),
        ("derived recursions equal the built-in ones", criterion_3),
        ("brute force, chromatic and recursion counts agree", criterion_4),
        ("growth constants and upper-bound tables", criterion_5),
        ("closed-form stage-zero tables", criterion_6),
        ("brute-force upper bounds for SG_3(1) and SG_{2,4}(1)", criterion_7),
        ("property suite", criterion_8),
        ("stretch: SG_{2,4}(2) and SG_3(2) upper bounds", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Outcome::Fail(vec![msg])
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Outcome::Pass => println!("PASS  criterion {id}: {name} ({secs:.2}s)"),
            Outcome::Skip(why) => println!("SKIP  criterion {id}: {name}: {why}"),
            Outcome::Fail(why) => {
                failed += 1;
                println!("FAIL  criterion {id}: {name} ({secs:.2}s)");
                for w in why {
                    println!("        {w}");
                }
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
