//! Exact stage-by-stage evaluation of recursion systems.

mod builtin;

use std::io::Write;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::derive::{initial_vector, Polynomial, RecursionSystem};
use crate::error::{Error, Result};

pub use builtin::builtin_system;

/// Class counts of one stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassVector {
    pub n: u32,
    #[serde(serialize_with = "serialize_decimal_vec")]
    pub values: Vec<BigUint>,
}

fn serialize_decimal_vec<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl ClassVector {
    pub fn get(&self, i: usize) -> &BigUint {
        &self.values[i]
    }
}

/// Class vectors and totals for stages `0..=n_max`.
#[derive(Clone, Debug)]
pub struct StageSequence {
    pub system: RecursionSystem,
    pub stages: Vec<ClassVector>,
    /// `f(n) = sum_i w_i x_i(n)`
    pub f: Vec<BigUint>,
}

impl StageSequence {
    pub fn d(&self) -> u32 {
        self.system.d
    }

    pub fn b(&self) -> u32 {
        self.system.b
    }

    pub fn n_max(&self) -> u32 {
        self.stages.len() as u32 - 1
    }

    pub fn stage(&self, n: u32) -> Result<&ClassVector> {
        self.stages
            .get(n as usize)
            .ok_or_else(|| Error::OutOfRange(format!("stage {n} not computed (have 0..={})", self.n_max())))
    }

    pub fn f(&self, n: u32) -> Result<&BigUint> {
        self.stage(n)?;
        Ok(&self.f[n as usize])
    }

    /// Count of the last class (the empty relation).
    pub fn d_class(&self, n: u32) -> Result<&BigUint> {
        Ok(self.stage(n)?.values.last().expect("at least one class"))
    }

    /// Computes further stages in place.
    pub fn extend_to(&mut self, n_max: u32) -> Result<()> {
        while self.n_max() < n_max {
            let next = self.system.apply(&self.stages.last().expect("stage 0").values)?;
            let f = self.system.total(&next)?;
            let n = self.n_max() + 1;
            self.stages.push(ClassVector { n, values: next });
            self.f.push(f);
        }
        Ok(())
    }

    /// `n,f,<variables...>` rows with exact decimals.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "n,f")?;
        for v in &self.system.variables {
            write!(out, ",{v}")?;
        }
        writeln!(out)?;
        for (s, f) in self.stages.iter().zip(&self.f) {
            write!(out, "{},{f}", s.n)?;
            for x in &s.values {
                write!(out, ",{x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Iterates `system` from the stage-0 simplex, where only the chain class
/// is populated, through stage `n_max`.
pub fn iterate(system: &RecursionSystem, n_max: u32) -> Result<StageSequence> {
    system.validate()?;
    let x0 = initial_vector(system.variables.len());
    let f0 = system.total(&x0)?;
    let mut seq = StageSequence {
        system: system.clone(),
        stages: vec![ClassVector { n: 0, values: x0 }],
        f: vec![f0],
    };
    seq.extend_to(n_max)?;
    Ok(seq)
}

/// `f(n)` from stage `n - 1` by the closed difference formula:
/// `f^3 - 2 s^3` for `(2, 2)` and `f^6 - 2 s^3 Q` for `(2, 3)`, where
/// `s = 3a + 2b + c` and `Q` is a fixed cubic.
pub fn f_direct(seq: &StageSequence, n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::OutOfRange("the difference formula needs a previous stage".into()));
    }
    let prev = seq.stage(n - 1)?;
    let f_prev = &seq.f[n as usize - 1];
    let x = &prev.values;
    let s = BigUint::from(3u32) * &x[0] + BigUint::from(2u32) * &x[1] + &x[2];
    let s3 = s.pow(3);
    let two = BigUint::from(2u32);
    match (seq.d(), seq.b()) {
        (2, 2) => Ok(f_prev.pow(3) - two * s3),
        (2, 3) => {
            let q = builtin::cofactor_23().evaluate(x);
            Ok(f_prev.pow(6) - two * s3 * q)
        }
        (d, b) => Err(Error::Unsupported(format!("no difference formula for SG_{{{d},{b}}}"))),
    }
}

/// The polynomial `Q` in the `(2, 3)` difference formula.
pub fn cofactor_23() -> Polynomial {
    builtin::cofactor_23()
}

/// `x_i(n+1) / x_j(n+1) < (p/q) * x_i(n) / x_j(n)`, checked by
/// cross-multiplication for every `n` in `from..n_max`.
pub fn ratio_contracts(seq: &StageSequence, i: usize, j: usize, p: u32, q: u32, from: u32) -> Result<bool> {
    for n in from..seq.n_max() {
        let cur = &seq.stage(n)?.values;
        let next = &seq.stage(n + 1)?.values;
        if cur[j].is_zero() || next[j].is_zero() {
            return Err(Error::OutOfRange(format!("ratio undefined at stage {n}")));
        }
        // q * xi' * xj < p * xi * xj'
        let lhs = BigUint::from(q) * &next[i] * &cur[j];
        let rhs = BigUint::from(p) * &cur[i] * &next[j];
        if lhs >= rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x^(P^k)` by repeated `P`-th powers.
fn tower(x: &BigUint, p: u32, k: u32) -> BigUint {
    let mut v = x.clone();
    for _ in 0..k {
        v = v.pow(p);
    }
    v
}

/// `d(m)^(P^(n-m)) < f(n) < f(m)^(P^(n-m))` for all `m < n <= n_max`.
pub fn sandwich_holds(seq: &StageSequence) -> Result<bool> {
    let p = seq.system.pieces as u32;
    for n in 1..=seq.n_max() {
        let f_n = seq.f(n)?;
        for m in 0..n {
            let lower = tower(seq.d_class(m)?, p, n - m);
            let upper = tower(seq.f(m)?, p, n - m);
            if !(&lower < f_n && f_n < &upper) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `true` when every computed `f(n)`, `n >= 1`, equals the difference formula.
pub fn f_formulas_agree(seq: &StageSequence) -> Result<bool> {
    for n in 1..=seq.n_max() {
        if &f_direct(seq, n)? != seq.f(n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::derive::{derive_recursion, diff_systems};
    use crate::gasket::{build_gasket, GasketSpec};
    use crate::oracle::count_chromatic;

    fn dec(v: &[&str]) -> Vec<BigUint> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn builtin_terms() {
        let s = builtin_system(2, 2).unwrap();
        assert_eq!(s.poly("b").unwrap().coefficient(&[2, 1, 0, 0]), BigUint::from(35u32));
        let d = s.poly("d").unwrap();
        assert_eq!(d.coefficient(&[0, 0, 0, 3]), BigUint::one());
        assert!(d.coefficient(&[0, 0, 0, 0]).is_zero());
        let s23 = builtin_system(2, 3).unwrap();
        assert_eq!(s23.poly("d").unwrap().coefficient(&[0, 0, 0, 6]), BigUint::one());
        assert_eq!(s23.poly("a").unwrap().coefficient(&[5, 0, 0, 1]), BigUint::from(45u32));
        assert!(builtin_system(2, 4).is_err());
        assert!(builtin_system(3, 2).is_err());
    }

    #[test]
    fn builtin_monomial_counts() {
        let count = |b| builtin_system(2, b).unwrap().polys.iter().map(Polynomial::len).collect::<Vec<_>>();
        assert_eq!(count(2), vec![6, 9, 16, 20]);
        assert_eq!(count(3), vec![36, 48, 74, 84]);
    }

    #[test]
    fn stage_values_sg22() {
        let seq = iterate(&builtin_system(2, 2).unwrap(), 3).unwrap();
        let f: Vec<String> = seq.f.iter().map(|x| x.to_string()).collect();
        assert_eq!(f, ["6", "162", "4069278", "67294670068124357202"]);
        assert_eq!(seq.stage(1).unwrap().values, dec(&["5", "12", "6", "24"]));
        assert_eq!(seq.stage(2).unwrap().values, dec(&["7705", "75648", "179424", "2492616"]));
        assert!(seq.stage(4).is_err());
    }

    #[test]
    fn stage_values_sg23() {
        let seq = iterate(&builtin_system(2, 3).unwrap(), 2).unwrap();
        assert_eq!(seq.f[1], BigUint::from(19602u32));
        assert_eq!(seq.f[2].to_string(), "55220940611523034547131584");
        assert_eq!(seq.stage(1).unwrap().values, dec(&["140", "918", "966", "7458"]));
        assert_eq!(seq.d_class(2).unwrap().to_string(), "53353791891866457036989376");
    }

    #[test]
    fn difference_formulas() {
        let seq = iterate(&builtin_system(2, 2).unwrap(), 6).unwrap();
        assert_eq!(f_direct(&seq, 1).unwrap(), BigUint::from(162u32));
        assert_eq!(f_direct(&seq, 2).unwrap(), BigUint::from(4069278u32));
        assert!(f_formulas_agree(&seq).unwrap());
        let seq23 = iterate(&builtin_system(2, 3).unwrap(), 4).unwrap();
        assert_eq!(f_direct(&seq23, 1).unwrap(), BigUint::from(19602u32));
        assert!(f_formulas_agree(&seq23).unwrap());
        assert!(f_direct(&seq, 0).is_err());
    }

    #[test]
    fn ratio_contraction() {
        let seq = iterate(&builtin_system(2, 2).unwrap(), 8).unwrap();
        assert!(ratio_contracts(&seq, 0, 1, 3, 8, 1).unwrap());
        assert!(ratio_contracts(&seq, 1, 2, 14, 15, 1).unwrap());
        assert!(ratio_contracts(&seq, 2, 3, 5, 6, 2).unwrap());
        // a tighter factor than the real one must fail
        assert!(!ratio_contracts(&seq, 0, 1, 1, 100, 1).unwrap());
    }

    #[test]
    fn sandwich() {
        assert!(sandwich_holds(&iterate(&builtin_system(2, 2).unwrap(), 7).unwrap()).unwrap());
        assert!(sandwich_holds(&iterate(&builtin_system(2, 3).unwrap(), 4).unwrap()).unwrap());
    }

    #[test]
    fn derived_23_equals_builtin() {
        let derived = derive_recursion(2, 3).unwrap();
        let builtin = builtin_system(2, 3).unwrap();
        assert_eq!(diff_systems(&derived, &builtin), Vec::<String>::new());
    }

    #[test]
    fn recursion_matches_chromatic_oracle() {
        let seq = iterate(&builtin_system(2, 2).unwrap(), 3).unwrap();
        for n in 0..=2 {
            let g = build_gasket(GasketSpec::new(2, 2, n).unwrap()).unwrap().graph;
            assert_eq!(&count_chromatic(&g).unwrap(), seq.f(n).unwrap());
        }
        let seq23 = iterate(&builtin_system(2, 3).unwrap(), 1).unwrap();
        let g = build_gasket(GasketSpec::new(2, 3, 1).unwrap()).unwrap().graph;
        assert_eq!(&count_chromatic(&g).unwrap(), seq23.f(1).unwrap());
    }

    #[test]
    fn csv_layout() {
        let seq = iterate(&builtin_system(2, 2).unwrap(), 1).unwrap();
        let mut buf = Vec::new();
        seq.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,f,a,b,c,d\n0,6,1,0,0,0\n1,162,5,12,6,24\n");
    }
}
