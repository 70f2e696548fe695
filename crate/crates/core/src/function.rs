//! Boolean functions as truth tables, and the named families used throughout.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_ARITY: usize = 24;

/// A Boolean function `{0,1}^n -> {0,1}` stored as a bit-packed truth table.
///
/// Assignment `(x_1, ..., x_n)` has index `sum x_i 2^(i-1)`, so `x_1` is the
/// least significant bit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: usize,
    words: Vec<u64>,
}

impl BooleanFunction {
    pub fn from_fn(arity: usize, f: impl Fn(u32) -> bool) -> Result<Self> {
        check_arity(arity, 1)?;
        let len = 1usize << arity;
        let mut words = vec![0u64; len.div_ceil(64)];
        for idx in 0..len {
            if f(idx as u32) {
                words[idx / 64] |= 1 << (idx % 64);
            }
        }
        Ok(BooleanFunction { arity, words })
    }

    pub fn from_bools(table: &[bool]) -> Result<Self> {
        let len = table.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::Format(format!(
                "truth table length {len} is not 2^n with n >= 1"
            )));
        }
        Self::from_fn(len.trailing_zeros() as usize, |i| table[i as usize])
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_fn(arity, |_| value)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of assignments, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.arity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn eval(&self, index: u32) -> bool {
        let i = index as usize;
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn eval_bits(&self, bits: &[bool]) -> Result<bool> {
        if bits.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                actual: bits.len(),
            });
        }
        Ok(self.eval(crate::arith::bits_to_index(bits)))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.count_ones();
        ones == 0 || ones == self.len()
    }

    pub fn positives(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len() as u32).filter(move |&i| self.eval(i))
    }

    /// The level set when the function depends only on input weight.
    pub fn symmetric_levels(&self) -> Option<Vec<usize>> {
        let n = self.arity;
        let mut level: Vec<Option<bool>> = vec![None; n + 1];
        for idx in 0..self.len() as u32 {
            let w = idx.count_ones() as usize;
            let v = self.eval(idx);
            match level[w] {
                None => level[w] = Some(v),
                Some(prev) if prev != v => return None,
                _ => {}
            }
        }
        Some(
            level
                .iter()
                .enumerate()
                .filter(|(_, v)| **v == Some(true))
                .map(|(w, _)| w)
                .collect(),
        )
    }

    /// Truth table as hex, most significant digit first; bit `i` of the
    /// number is `f(i)`.
    pub fn to_hex(&self) -> String {
        let digits = self.len().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4)
                    .filter(|b| {
                        let idx = d * 4 + b;
                        idx < self.len() && self.eval(idx as u32)
                    })
                    .fold(0u32, |acc, b| acc | (1 << b));
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(arity: usize, hex: &str) -> Result<Self> {
        check_arity(arity, 1)?;
        let len = 1usize << arity;
        let bad = |why: &str| Error::MalformedSpec(hex.to_string(), why.to_string());
        let hex = hex.trim();
        if hex.is_empty() {
            return Err(bad("empty table"));
        }
        if hex.len() > len.div_ceil(4) {
            return Err(bad("too many hex digits for the arity"));
        }
        let mut words = vec![0u64; len.div_ceil(64)];
        for (d, ch) in hex.chars().rev().enumerate() {
            let nibble = ch.to_digit(16).ok_or_else(|| bad("not a hex digit"))?;
            for b in 0..4 {
                if (nibble >> b) & 1 == 1 {
                    let idx = d * 4 + b;
                    if idx >= len {
                        return Err(bad("table has bits beyond 2^n"));
                    }
                    words[idx / 64] |= 1 << (idx % 64);
                }
            }
        }
        Ok(BooleanFunction { arity, words })
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "table:{}:{}", self.arity, self.to_hex())
    }
}

fn check_arity(arity: usize, min: usize) -> Result<()> {
    if arity < min || arity > MAX_ARITY {
        return Err(Error::ArityOutOfRange(arity, min, MAX_ARITY));
    }
    Ok(())
}

/// A symmetric function: `f(a) = 1` iff `|a|` is one of `levels`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricSpec {
    arity: usize,
    levels: Vec<usize>,
}

impl SymmetricSpec {
    pub fn new(arity: usize, levels: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_arity(arity, 1)?;
        let mut levels: Vec<usize> = levels.into_iter().collect();
        if let Some(&level) = levels.iter().find(|&&l| l > arity) {
            return Err(Error::LevelOutOfRange { level, arity });
        }
        levels.sort_unstable();
        levels.dedup();
        Ok(SymmetricSpec { arity, levels })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn contains(&self, weight: usize) -> bool {
        self.levels.binary_search(&weight).is_ok()
    }

    pub fn function(&self) -> BooleanFunction {
        BooleanFunction::from_fn(self.arity, |i| self.contains(i.count_ones() as usize))
            .expect("arity checked at construction")
    }

    pub fn parity(arity: usize) -> Result<Self> {
        Self::new(arity, (1..=arity).step_by(2))
    }

    pub fn majority(arity: usize) -> Result<Self> {
        Self::new(arity, arity.div_ceil(2)..=arity)
    }
}

/// A linear threshold function: `f(x) = 1` iff `w . x >= t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdSpec {
    weights: Vec<i64>,
    threshold: i64,
}

impl ThresholdSpec {
    pub fn new(weights: Vec<i64>, threshold: i64) -> Result<Self> {
        check_arity(weights.len(), 1)?;
        Ok(ThresholdSpec { weights, threshold })
    }

    /// Scales rational weights and threshold by the lcm of their denominators.
    pub fn from_rationals(
        weights: &[crate::arith::Rational],
        threshold: &crate::arith::Rational,
    ) -> Result<Self> {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let lcm = weights
            .iter()
            .chain(std::iter::once(threshold))
            .fold(num_bigint::BigInt::from(1), |acc, q| acc.lcm(q.denom()));
        let scale = |q: &crate::arith::Rational| {
            (q * crate::arith::Rational::from_integer(lcm.clone()))
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Format("threshold weight too large".into()))
        };
        let w = weights.iter().map(scale).collect::<Result<Vec<_>>>()?;
        Self::new(w, scale(threshold)?)
    }

    pub fn majority(arity: usize) -> Result<Self> {
        Self::new(vec![1; arity], arity.div_ceil(2) as i64)
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn value(&self, index: u32) -> bool {
        let s: i64 = self
            .weights
            .iter()
            .enumerate()
            .filter(|(i, _)| (index >> i) & 1 == 1)
            .map(|(_, w)| w)
            .sum();
        s >= self.threshold
    }

    pub fn function(&self) -> BooleanFunction {
        BooleanFunction::from_fn(self.arity(), |i| self.value(i)).expect("arity checked")
    }
}

/// A parsed function spec in the `family:args` mini-language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionSpec {
    Parity(usize),
    Majority(usize),
    Threshold(ThresholdSpec),
    /// Inner product mod 2 on `2n` variables `(x_1..x_n, y_1..y_n)`.
    InnerProduct(usize),
    Symmetric(SymmetricSpec),
    Table(BooleanFunction),
}

impl FunctionSpec {
    pub fn function(&self) -> BooleanFunction {
        match self {
            FunctionSpec::Parity(n) => SymmetricSpec::parity(*n).unwrap().function(),
            FunctionSpec::Majority(n) => SymmetricSpec::majority(*n).unwrap().function(),
            FunctionSpec::Threshold(t) => t.function(),
            FunctionSpec::InnerProduct(n) => {
                let n = *n;
                let mask = (1u32 << n) - 1;
                BooleanFunction::from_fn(2 * n, |i| ((i & mask) & (i >> n)).count_ones() % 2 == 1)
                    .unwrap()
            }
            FunctionSpec::Symmetric(s) => s.function(),
            FunctionSpec::Table(f) => f.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            FunctionSpec::Parity(n) | FunctionSpec::Majority(n) => *n,
            FunctionSpec::InnerProduct(n) => 2 * n,
            FunctionSpec::Threshold(t) => t.arity(),
            FunctionSpec::Symmetric(s) => s.arity(),
            FunctionSpec::Table(f) => f.arity(),
        }
    }

    /// The symmetric level set, for families that are symmetric by
    /// definition or whose table happens to be.
    pub fn symmetric_spec(&self) -> Option<SymmetricSpec> {
        match self {
            FunctionSpec::Parity(n) => SymmetricSpec::parity(*n).ok(),
            FunctionSpec::Majority(n) => SymmetricSpec::majority(*n).ok(),
            FunctionSpec::Symmetric(s) => Some(s.clone()),
            other => {
                let f = other.function();
                f.symmetric_levels()
                    .and_then(|l| SymmetricSpec::new(f.arity(), l).ok())
            }
        }
    }

    pub fn threshold_spec(&self) -> Option<ThresholdSpec> {
        match self {
            FunctionSpec::Threshold(t) => Some(t.clone()),
            FunctionSpec::Majority(n) => ThresholdSpec::majority(*n).ok(),
            _ => None,
        }
    }

    /// Family name used for term-count lower bounds.
    pub fn family(&self) -> &'static str {
        match self {
            FunctionSpec::Parity(_) => "parity",
            FunctionSpec::Majority(_) => "maj",
            FunctionSpec::Threshold(_) => "th",
            FunctionSpec::InnerProduct(_) => "ip",
            FunctionSpec::Symmetric(_) => "sym",
            FunctionSpec::Table(_) => "table",
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let bad = |why: &str| Error::MalformedSpec(spec.to_string(), why.to_string());
        let parts: Vec<&str> = spec.trim().split(':').collect();
        let arity = |s: &str| -> Result<usize> {
            s.trim()
                .parse::<usize>()
                .map_err(|_| bad("arity is not a nonnegative integer"))
        };
        let int_list = |s: &str| -> Result<Vec<i64>> {
            s.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| bad("expected an integer list"))
                })
                .collect()
        };
        match parts.as_slice() {
            ["parity", n] => {
                let n = arity(n)?;
                check_arity(n, 1)?;
                Ok(FunctionSpec::Parity(n))
            }
            ["maj", n] => {
                let n = arity(n)?;
                check_arity(n, 1)?;
                Ok(FunctionSpec::Majority(n))
            }
            ["ip", n] => {
                let n = arity(n)?;
                if n == 0 || 2 * n > MAX_ARITY {
                    return Err(Error::ArityOutOfRange(2 * n, 2, MAX_ARITY));
                }
                Ok(FunctionSpec::InnerProduct(n))
            }
            ["th", n, t] | ["th", n, t, ""] => {
                let n = arity(n)?;
                check_arity(n, 1)?;
                let t = t
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| bad("threshold is not an integer"))?;
                Ok(FunctionSpec::Threshold(ThresholdSpec::new(vec![1; n], t)?))
            }
            ["th", n, t, w] => {
                let n = arity(n)?;
                check_arity(n, 1)?;
                let t = t
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| bad("threshold is not an integer"))?;
                let w = int_list(w)?;
                if w.len() != n {
                    return Err(bad("number of weights differs from the arity"));
                }
                Ok(FunctionSpec::Threshold(ThresholdSpec::new(w, t)?))
            }
            ["sym", n] | ["sym", n, ""] => {
                let n = arity(n)?;
                Ok(FunctionSpec::Symmetric(SymmetricSpec::new(n, [])?))
            }
            ["sym", n, levels] => {
                let n = arity(n)?;
                let levels = int_list(levels)?;
                if levels.iter().any(|&l| l < 0) {
                    return Err(bad("negative level"));
                }
                Ok(FunctionSpec::Symmetric(SymmetricSpec::new(
                    n,
                    levels.into_iter().map(|l| l as usize),
                )?))
            }
            ["table", n, hex] => {
                let n = arity(n)?;
                Ok(FunctionSpec::Table(BooleanFunction::from_hex(n, hex)?))
            }
            _ => Err(bad("unknown family or wrong number of fields")),
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Parity(n) => write!(f, "parity:{n}"),
            FunctionSpec::Majority(n) => write!(f, "maj:{n}"),
            FunctionSpec::InnerProduct(n) => write!(f, "ip:{n}"),
            FunctionSpec::Threshold(t) => {
                let w: Vec<String> = t.weights.iter().map(|w| w.to_string()).collect();
                write!(f, "th:{}:{}:{}", t.arity(), t.threshold, w.join(","))
            }
            FunctionSpec::Symmetric(s) => {
                let l: Vec<String> = s.levels.iter().map(|l| l.to_string()).collect();
                write!(f, "sym:{}:{}", s.arity, l.join(","))
            }
            FunctionSpec::Table(t) => write!(f, "{t:?}"),
        }
    }
}

/// Parses a function spec and returns its truth table.
pub fn parse_function(spec: &str) -> Result<BooleanFunction> {
    Ok(spec.parse::<FunctionSpec>()?.function())
}
