//! Multivariate polynomials with non-negative integer coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Sum of `coef * x_0^e_0 * ... * x_{n-1}^e_{n-1}` with `coef > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigUint>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], BigUint::one());
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(exp, BigUint::one());
        p
    }

    /// `sum_i w_i x_i`
    pub fn linear(weights: &[u64]) -> Self {
        let n = weights.len();
        let mut p = Self::zero(n);
        for (i, &w) in weights.iter().enumerate() {
            let mut exp = vec![0; n];
            exp[i] = 1;
            p.add_term(exp, BigUint::from(w));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exp: Vec<u32>, coef: BigUint) {
        assert_eq!(exp.len(), self.nvars, "exponent vector length");
        if coef.is_zero() {
            return;
        }
        *self.terms.entry(exp).or_default() += coef;
    }

    pub fn coefficient(&self, exp: &[u32]) -> BigUint {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &BigUint)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common total degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Sum of all coefficients, i.e. the value at the all-ones point.
    pub fn coefficient_sum(&self) -> BigUint {
        self.terms.values().sum()
    }

    pub fn scale(&self, k: &BigUint) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * k);
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at `x`, reusing one power table per variable.
    pub fn evaluate(&self, x: &[BigUint]) -> BigUint {
        assert_eq!(x.len(), self.nvars, "point dimension");
        let powers = PowerTable::new(x, self.max_exponent());
        self.evaluate_with(&powers)
    }

    pub(crate) fn evaluate_with(&self, powers: &PowerTable) -> BigUint {
        let mut total = BigUint::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term *= powers.get(i, k);
                }
            }
            total += term;
        }
        total
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0)
    }

    /// Parses text such as `5a^3+8a^2b+ac^2` over single-letter variables.
    pub fn parse(text: &str, vars: &[&str]) -> Result<Self> {
        let index: HashMap<char, usize> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut ch = v.chars();
                match (ch.next(), ch.next()) {
                    (Some(c), None) if c.is_ascii_alphabetic() => Ok((c, i)),
                    _ => Err(Error::Parse(format!("variable name {v:?} is not a single letter"))),
                }
            })
            .collect::<Result<_>>()?;
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Self::zero(vars.len());
        if cleaned.is_empty() || cleaned == "0" {
            return Ok(p);
        }
        for term in cleaned.split('+') {
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            let bytes: Vec<char> = term.chars().collect();
            let mut pos = 0;
            let digits = |pos: &mut usize| -> Option<String> {
                let start = *pos;
                while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                (*pos > start).then(|| bytes[start..*pos].iter().collect())
            };
            let coef = match digits(&mut pos) {
                Some(s) => s.parse::<BigUint>().map_err(|e| Error::Parse(e.to_string()))?,
                None => BigUint::one(),
            };
            let mut exp = vec![0u32; vars.len()];
            while pos < bytes.len() {
                let c = bytes[pos];
                let &i = index
                    .get(&c)
                    .ok_or_else(|| Error::Parse(format!("unknown symbol {c:?} in term {term:?}")))?;
                pos += 1;
                let mut k = 1;
                if pos < bytes.len() && bytes[pos] == '^' {
                    pos += 1;
                    k = digits(&mut pos)
                        .ok_or_else(|| Error::Parse(format!("missing exponent in {term:?}")))?
                        .parse()
                        .map_err(|e: std::num::ParseIntError| Error::Parse(e.to_string()))?;
                }
                exp[i] += k;
            }
            p.add_term(exp, coef);
        }
        Ok(p)
    }

    /// Formats with the given variable names, highest lexicographic term first.
    pub fn display<'a>(&'a self, vars: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, vars }
    }
}

struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    vars: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str("+")?;
            }
            let constant = e.iter().all(|&k| k == 0);
            if !c.is_one() || constant {
                write!(f, "{c}")?;
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "{}", self.vars[i])?,
                    _ => write!(f, "{}^{k}", self.vars[i])?,
                }
            }
        }
        Ok(())
    }
}

/// `x_i^k` for every variable and `0 <= k <= max`.
pub(crate) struct PowerTable {
    table: Vec<Vec<BigUint>>,
}

impl PowerTable {
    pub(crate) fn new(x: &[BigUint], max: u32) -> Self {
        let table = x
            .iter()
            .map(|xi| {
                let mut row = Vec::with_capacity(max as usize + 1);
                row.push(BigUint::one());
                for k in 1..=max as usize {
                    let next = &row[k - 1] * xi;
                    row.push(next);
                }
                row
            })
            .collect();
        Self { table }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, k: u32) -> &BigUint {
        &self.table[i][k as usize]
    }
}

/// Dense numbering of the monomials of each degree `0..=max_degree`, with a
/// transition table for multiplying by one variable.
pub(crate) struct MonomialIndex {
    nvars: usize,
    levels: Vec<Vec<Vec<u32>>>,
    /// `next[t][i * nvars + v]` = index in level `t + 1` of monomial `i` of level `t` times `x_v`.
    next: Vec<Vec<u32>>,
}

impl MonomialIndex {
    pub(crate) fn new(nvars: usize, max_degree: usize) -> Self {
        let mut levels: Vec<Vec<Vec<u32>>> = vec![vec![vec![0; nvars]]];
        let mut next = Vec::new();
        for _ in 0..max_degree {
            let cur = levels.last().expect("level 0 exists");
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut upper: Vec<Vec<u32>> = Vec::new();
            let mut trans = Vec::with_capacity(cur.len() * nvars);
            for e in cur {
                for v in 0..nvars {
                    let mut f = e.clone();
                    f[v] += 1;
                    let id = *ids.entry(f.clone()).or_insert_with(|| {
                        upper.push(f);
                        (upper.len() - 1) as u32
                    });
                    trans.push(id);
                }
            }
            levels.push(upper);
            next.push(trans);
        }
        Self { nvars, levels, next }
    }

    pub(crate) fn level_len(&self, t: usize) -> usize {
        self.levels[t].len()
    }

    pub(crate) fn exponents(&self, t: usize, i: usize) -> &[u32] {
        &self.levels[t][i]
    }

    #[inline]
    pub(crate) fn step(&self, t: usize, i: u32, v: usize) -> u32 {
        self.next[t][i as usize * self.nvars + v]
    }
}
