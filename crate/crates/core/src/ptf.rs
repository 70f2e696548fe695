//! Compilation of NN representations into sign-polynomials over `{1,2}^n`.
//!
//! With `x~_i = 2^(x_i)` a monomial `2^c prod x~_i^(e_i)` equals
//! `2^(c + sum e_i x_i)`, so every term is a signed power of two and the
//! polynomial can be evaluated exactly with big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{int, Rational};
use crate::error::{Error, Result};
use crate::function::{BooleanFunction, FunctionSpec};
use crate::representation::{is_nn_representation, NNRepresentation};

/// `sign * 2^coeff_exp * prod x~_i^(exponents[i])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialTerm {
    pub sign: i8,
    #[serde(rename = "c")]
    pub coeff_exp: u64,
    #[serde(rename = "e")]
    pub exponents: Vec<u64>,
}

impl MonomialTerm {
    /// Exponent of two at a Boolean input.
    pub fn exponent_at(&self, x: u32) -> u64 {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(i, _)| (x >> i) & 1 == 1)
            .fold(self.coeff_exp, |acc, (_, e)| acc + e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPolynomial {
    pub n: usize,
    pub terms: Vec<MonomialTerm>,
}

impl SignPolynomial {
    pub fn new(n: usize, terms: Vec<MonomialTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Format(
                "a sign polynomial needs at least one term".into(),
            ));
        }
        for t in &terms {
            if t.exponents.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: t.exponents.len(),
                });
            }
            if t.sign != 1 && t.sign != -1 {
                return Err(Error::Format(format!(
                    "term sign {} is not +1 or -1",
                    t.sign
                )));
            }
        }
        Ok(SignPolynomial { n, terms })
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: SignPolynomial =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        SignPolynomial::new(p.n, p.terms)
    }

    pub fn max_exponent(&self) -> u64 {
        let all_ones = (1u32 << self.n) - 1;
        self.terms
            .iter()
            .map(|t| t.exponent_at(all_ones))
            .max()
            .unwrap_or(0)
    }
}

/// Integer parameters of the compilation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompilerParams {
    /// Offset making every coefficient of `B (1 + sum x_i) - sqdist(x, a)` nonnegative.
    #[serde(rename = "B")]
    pub b: u64,
    /// Least common multiple of the coefficient denominators.
    #[serde(rename = "M")]
    pub m: u64,
    /// `ceil(log2(p + q)) * M`, with `ceil(log2 1)` taken as 1.
    #[serde(rename = "A")]
    pub a: u64,
}

impl CompilerParams {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

fn ceil_log2_at_least_one(m: usize) -> u64 {
    if m <= 2 {
        1
    } else {
        (usize::BITS - (m - 1).leading_zeros()) as u64
    }
}

fn to_u64(q: &BigInt, what: &str) -> Result<u64> {
    q.to_u64()
        .ok_or_else(|| Error::CompileInvariant(format!("{what} {q} does not fit in 64 bits")))
}

/// Compiles a verifying NN representation into a `{1,2}`-sign-representation
/// with one term per prototype: positives first with sign `+1`, then
/// negatives with sign `-1`, each in representation order.
pub fn compile_ptf(
    f: &BooleanFunction,
    rep: &NNRepresentation,
) -> Result<(SignPolynomial, CompilerParams)> {
    if !is_nn_representation(f, rep) {
        return Err(Error::RepresentationInvalid);
    }
    let n = rep.dim();
    // sqdist(x, a) = |a|^2 + sum_i (1 - 2 a_i) x_i on Boolean x
    let forms: Vec<(Rational, Vec<Rational>)> = rep
        .prototypes()
        .map(|(p, _)| {
            let c = p.norm_sq();
            let w = p.coords().iter().map(|a| int(1) - a * int(2)).collect();
            (c, w)
        })
        .collect();
    let largest = forms
        .iter()
        .flat_map(|(c, w)| std::iter::once(c).chain(w))
        .max()
        .expect("nonempty representation");
    let b = largest.ceil().to_integer().max(BigInt::one());
    let b_q = Rational::from_integer(b.clone());
    let nonneg: Vec<Vec<Rational>> = forms
        .iter()
        .map(|(c, w)| {
            std::iter::once(&b_q - c)
                .chain(w.iter().map(|wi| &b_q - wi))
                .collect()
        })
        .collect();
    let m = nonneg
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let a = BigInt::from(ceil_log2_at_least_one(rep.size())) * &m;
    let a_q = Rational::from_integer(a.clone());

    let mut terms = Vec::with_capacity(rep.size());
    for ((_, label), coeffs) in rep.prototypes().zip(&nonneg) {
        let mut exps = Vec::with_capacity(n + 1);
        for q in coeffs {
            let scaled = &a_q * q;
            if !scaled.is_integer() || scaled.is_negative() {
                return Err(Error::CompileInvariant(format!(
                    "exponent {scaled} is not a nonnegative integer"
                )));
            }
            exps.push(to_u64(&scaled.to_integer(), "exponent")?);
        }
        terms.push(MonomialTerm {
            sign: if label.is_positive() { 1 } else { -1 },
            coeff_exp: exps[0],
            exponents: exps[1..].to_vec(),
        });
    }
    let params = CompilerParams {
        b: to_u64(&b, "B")?,
        m: to_u64(&m, "M")?,
        a: to_u64(&a, "A")?,
    };
    let bound = params
        .a
        .checked_mul(params.b)
        .and_then(|ab| ab.checked_mul(n as u64 + 1))
        .ok_or_else(|| Error::CompileInvariant("A*B*(n+1) overflows".into()))?;
    let poly = SignPolynomial::new(n, terms)?;
    if poly.max_exponent() > bound {
        return Err(Error::CompileInvariant(format!(
            "exponent {} exceeds A*B*(n+1) = {bound}",
            poly.max_exponent()
        )));
    }
    Ok((poly, params))
}

/// Exact value of the polynomial at the `{1,2}` image of a Boolean input.
pub fn eval_value(poly: &SignPolynomial, x: u32) -> BigInt {
    poly.terms.iter().fold(BigInt::zero(), |acc, t| {
        let v = BigInt::one() << t.exponent_at(x);
        if t.sign > 0 {
            acc + v
        } else {
            acc - v
        }
    })
}

/// Sign of the polynomial at `x~ = 2^x`.
pub fn eval_sign(poly: &SignPolynomial, x: &[bool]) -> Result<std::cmp::Ordering> {
    if x.len() != poly.n {
        return Err(Error::DimensionMismatch {
            expected: poly.n,
            actual: x.len(),
        });
    }
    Ok(eval_sign_index(poly, crate::arith::bits_to_index(x)))
}

pub fn eval_sign_index(poly: &SignPolynomial, x: u32) -> std::cmp::Ordering {
    eval_value(poly, x).cmp(&BigInt::zero())
}

/// True iff `p(x~) >= 0` exactly on the inputs where `f` is 1.
pub fn verify_ptf(f: &BooleanFunction, poly: &SignPolynomial) -> bool {
    f.arity() == poly.n
        && (0..f.len() as u32)
            .into_par_iter()
            .all(|x| eval_sign_index(poly, x).is_ge() == f.eval(x))
}

/// Checks the stronger property the compiler guarantees: at every input the
/// largest term on the correct side exceeds the sum of all terms on the
/// other side.
pub fn margin_holds(f: &BooleanFunction, poly: &SignPolynomial) -> bool {
    f.arity() == poly.n
        && (0..f.len() as u32).into_par_iter().all(|x| {
            let want = if f.eval(x) { 1 } else { -1 };
            let largest = poly
                .terms
                .iter()
                .filter(|t| t.sign == want)
                .map(|t| t.exponent_at(x))
                .max();
            let Some(largest) = largest else {
                return false;
            };
            let others = poly
                .terms
                .iter()
                .filter(|t| t.sign != want)
                .fold(BigInt::zero(), |acc, t| {
                    acc + (BigInt::one() << t.exponent_at(x))
                });
            (BigInt::one() << largest) > others
        })
}

/// Upper bound on `|p(x~)|` implied by the exponent bound, in bits.
pub fn value_bits_bound(poly: &SignPolynomial, params: &CompilerParams) -> u64 {
    let m = poly.term_count() as u64;
    let log_m = 64 - m.leading_zeros() as u64;
    params.a * params.b * (poly.n as u64 + 1) + log_m + 1
}

/// Term count against the known lower bound for the function's family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermCountReport {
    pub family: String,
    pub terms: usize,
    /// `n + 1` for parity on `n` variables, `ceil(2^(n/2))` for inner
    /// product on `2n` variables; absent for other families.
    pub lower_bound: Option<u64>,
    pub meets_bound: bool,
}

/// Smallest integer `m` with `m >= 2^(n/2)`.
pub fn ceil_pow2_half(n: u32) -> u64 {
    let target = 1u128 << n;
    let mut m = (1u64 << (n / 2)) as u128;
    while m * m < target {
        m += 1;
    }
    m as u64
}

pub fn term_count_report(family: &str, poly: &SignPolynomial) -> Result<TermCountReport> {
    let spec: Option<FunctionSpec> = family.parse().ok();
    let lower_bound = match spec {
        Some(FunctionSpec::Parity(n)) => Some(n as u64 + 1),
        Some(FunctionSpec::InnerProduct(n)) => Some(ceil_pow2_half(n as u32)),
        _ => None,
    };
    let terms = poly.term_count();
    Ok(TermCountReport {
        family: family.to_string(),
        terms,
        lower_bound,
        meets_bound: lower_bound.is_none_or(|b| terms as u64 >= b),
    })
}
