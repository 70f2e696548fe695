//! Nearest-neighbor and k-nearest-neighbor representations and their exact
//! verification.
//!
//! A representation is a pair of disjoint prototype sets `(P, N)`. A Boolean
//! point is classified positive when its nearest positive prototype is
//! strictly closer than its nearest negative one. Equal distances are ties
//! and are reported, never broken.

use std::collections::HashSet;
use std::fmt;
use std::ops::AddAssign;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{bits_to_index, int, sqdist, Rational, RationalPoint};
use crate::error::{Error, Result};
use crate::function::BooleanFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn from_bool(value: bool) -> Self {
        if value {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        })
    }
}

/// A pair of disjoint prototype sets in `Q^n`.
#[derive(Clone, PartialEq, Eq)]
pub struct NNRepresentation {
    dim: usize,
    positives: Vec<RationalPoint>,
    negatives: Vec<RationalPoint>,
}

impl NNRepresentation {
    /// Checks dimensions, duplicates within a side and disjointness of the sides.
    pub fn new(
        dim: usize,
        positives: Vec<RationalPoint>,
        negatives: Vec<RationalPoint>,
    ) -> Result<Self> {
        let mut seen_pos = HashSet::new();
        for p in &positives {
            check_dim(dim, p)?;
            if !seen_pos.insert(p) {
                return Err(Error::DuplicatePrototype(p.to_string()));
            }
        }
        let mut seen_neg = HashSet::new();
        for q in &negatives {
            check_dim(dim, q)?;
            if !seen_neg.insert(q) {
                return Err(Error::DuplicatePrototype(q.to_string()));
            }
            if seen_pos.contains(q) {
                return Err(Error::OverlappingPrototype(q.to_string()));
            }
        }
        Ok(NNRepresentation {
            dim,
            positives,
            negatives,
        })
    }

    /// Builds a representation whose prototypes are Boolean points given by
    /// assignment index.
    pub fn from_boolean(dim: usize, positives: &[u32], negatives: &[u32]) -> Result<Self> {
        let embed = |ix: &[u32]| {
            ix.iter()
                .map(|&i| RationalPoint::from_index(i, dim))
                .collect()
        };
        Self::new(dim, embed(positives), embed(negatives))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positives(&self) -> &[RationalPoint] {
        &self.positives
    }

    pub fn negatives(&self) -> &[RationalPoint] {
        &self.negatives
    }

    /// `|P| + |N|`.
    pub fn size(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    /// All prototypes, positives first, each with its label.
    pub fn prototypes(&self) -> impl Iterator<Item = (&RationalPoint, Label)> {
        self.positives
            .iter()
            .map(|p| (p, Label::Positive))
            .chain(self.negatives.iter().map(|q| (q, Label::Negative)))
    }

    pub fn is_boolean(&self) -> bool {
        self.prototypes()
            .all(|(p, _)| p.as_boolean_index().is_some())
    }

    /// Applies a coordinate permutation: new coordinate `i` is old coordinate `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let apply = |pts: &[RationalPoint]| {
            pts.iter()
                .map(|p| RationalPoint::new(perm.iter().map(|&j| p[j].clone()).collect()))
                .collect()
        };
        Self::new(self.dim, apply(&self.positives), apply(&self.negatives))
    }

    /// Translates every prototype by `shift`.
    pub fn translate(&self, shift: &RationalPoint) -> Result<Self> {
        check_dim(self.dim, shift)?;
        let apply = |pts: &[RationalPoint]| {
            pts.iter()
                .map(|p| {
                    RationalPoint::new(
                        p.coords()
                            .iter()
                            .zip(shift.coords())
                            .map(|(a, b)| a + b)
                            .collect(),
                    )
                })
                .collect()
        };
        Self::new(self.dim, apply(&self.positives), apply(&self.negatives))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RepresentationFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RepresentationFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        file.try_into()
    }
}

impl fmt::Debug for NNRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NNRepresentation")
            .field("n", &self.dim)
            .field("P", &self.positives)
            .field("N", &self.negatives)
            .finish()
    }
}

fn check_dim(dim: usize, p: &RationalPoint) -> Result<()> {
    if p.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: p.dim(),
        });
    }
    Ok(())
}

/// On-disk representation format.
#[derive(Serialize, Deserialize)]
struct RepresentationFile {
    n: usize,
    positives: Vec<Vec<String>>,
    negatives: Vec<Vec<String>>,
}

impl From<&NNRepresentation> for RepresentationFile {
    fn from(rep: &NNRepresentation) -> Self {
        RepresentationFile {
            n: rep.dim,
            positives: rep
                .positives
                .iter()
                .map(RationalPoint::to_strings)
                .collect(),
            negatives: rep
                .negatives
                .iter()
                .map(RationalPoint::to_strings)
                .collect(),
        }
    }
}

impl TryFrom<RepresentationFile> for NNRepresentation {
    type Error = Error;

    fn try_from(file: RepresentationFile) -> Result<Self> {
        let parse = |pts: &[Vec<String>]| {
            pts.iter()
                .map(|p| RationalPoint::parse(p))
                .collect::<Result<Vec<_>>>()
        };
        NNRepresentation::new(file.n, parse(&file.positives)?, parse(&file.negatives)?)
    }
}

/// What the classifier produced at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Label(Label),
    /// Nearest positive and nearest negative prototypes are equidistant.
    Tie,
    /// The k-th and (k+1)-th smallest distances coincide.
    NotWellDefined,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Label(l) => l.fmt(f),
            Outcome::Tie => f.write_str("tie"),
            Outcome::NotWellDefined => f.write_str("not-well-defined"),
        }
    }
}

impl Outcome {
    fn into_result(self) -> Result<Label> {
        match self {
            Outcome::Label(l) => Ok(l),
            Outcome::Tie => Err(Error::Tie),
            Outcome::NotWellDefined => Err(Error::NotWellDefined),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Assignment index of the point.
    pub point: u32,
    pub expected: Label,
    pub observed: Outcome,
}

/// Result of an exhaustive check over `{0,1}^n`.
///
/// `counterexamples` lists every point whose outcome differs from the
/// function (including ties); `tie_points` lists the subset that tied or
/// was not well defined. Both are sorted by point index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub counterexamples: Vec<Counterexample>,
    pub tie_points: Vec<u32>,
}

impl VerificationReport {
    fn from_outcomes(f: &BooleanFunction, outcomes: Vec<(u32, Outcome)>) -> Self {
        let mut counterexamples = Vec::new();
        let mut tie_points = Vec::new();
        for (point, observed) in outcomes {
            let expected = Label::from_bool(f.eval(point));
            if observed != Outcome::Label(expected) {
                if !matches!(observed, Outcome::Label(_)) {
                    tie_points.push(point);
                }
                counterexamples.push(Counterexample {
                    point,
                    expected,
                    observed,
                });
            }
        }
        VerificationReport {
            ok: counterexamples.is_empty() && tie_points.is_empty(),
            counterexamples,
            tie_points,
        }
    }
}

fn boolean_point(rep: &NNRepresentation, a: &[bool]) -> Result<RationalPoint> {
    if a.len() != rep.dim {
        return Err(Error::DimensionMismatch {
            expected: rep.dim,
            actual: a.len(),
        });
    }
    Ok(RationalPoint::from_bits(a))
}

/// Nearest-neighbor classification of one Boolean point, by direct
/// evaluation of squared distances.
pub fn classify_nn(rep: &NNRepresentation, a: &[bool]) -> Result<Label> {
    if rep.size() == 0 {
        return Err(Error::EmptyRepresentation);
    }
    let x = boolean_point(rep, a)?;
    let nearest = |pts: &[RationalPoint]| -> Result<Option<Rational>> {
        let mut best: Option<Rational> = None;
        for p in pts {
            let d = sqdist(&x, p)?;
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
        Ok(best)
    };
    let dp = nearest(&rep.positives)?;
    let dn = nearest(&rep.negatives)?;
    nn_outcome(dp.as_ref(), dn.as_ref()).into_result()
}

fn nn_outcome<T: Ord>(dp: Option<&T>, dn: Option<&T>) -> Outcome {
    match (dp, dn) {
        (Some(_), None) => Outcome::Label(Label::Positive),
        (None, Some(_)) => Outcome::Label(Label::Negative),
        (Some(p), Some(n)) => match p.cmp(n) {
            std::cmp::Ordering::Less => Outcome::Label(Label::Positive),
            std::cmp::Ordering::Greater => Outcome::Label(Label::Negative),
            std::cmp::Ordering::Equal => Outcome::Tie,
        },
        (None, None) => unreachable!("empty representation"),
    }
}

/// k-NN classification of one Boolean point, by direct evaluation of squared
/// distances and a full sort.
pub fn classify_knn(rep: &NNRepresentation, a: &[bool], k: usize) -> Result<Label> {
    check_k(rep, k)?;
    let x = boolean_point(rep, a)?;
    let mut dists = rep
        .prototypes()
        .map(|(p, l)| Ok((sqdist(&x, p)?, l)))
        .collect::<Result<Vec<_>>>()?;
    knn_outcome(&mut dists, k).into_result()
}

pub(crate) fn check_k(rep: &NNRepresentation, k: usize) -> Result<()> {
    if rep.size() == 0 {
        return Err(Error::EmptyRepresentation);
    }
    if k == 0 {
        return Err(Error::KZero);
    }
    if k > rep.size() {
        return Err(Error::KTooLarge {
            k,
            size: rep.size(),
        });
    }
    Ok(())
}

/// Positive iff at least `k/2` of the `k` nearest are positive (even `k`
/// with an exact split is positive).
pub(crate) fn majority_label(positives: usize, k: usize) -> Label {
    Label::from_bool(2 * positives >= k)
}

/// For `k = 1` this is the nearest-neighbor rule: several equidistant
/// nearest prototypes are fine as long as they share a label. For `k >= 2`
/// the k nearest must be separated from the rest, `D_(k) < D_(k+1)`.
fn knn_outcome<T: Ord>(dists: &mut [(T, Label)], k: usize) -> Outcome {
    if k == 1 {
        let nearest = |label: Label| {
            dists
                .iter()
                .filter(|(_, l)| *l == label)
                .map(|(d, _)| d)
                .min()
        };
        return nn_outcome(nearest(Label::Positive), nearest(Label::Negative));
    }
    dists.sort_by(|a, b| a.0.cmp(&b.0));
    if k < dists.len() && dists[k - 1].0 == dists[k].0 {
        return Outcome::NotWellDefined;
    }
    let pos = dists[..k].iter().filter(|(_, l)| l.is_positive()).count();
    Outcome::Label(majority_label(pos, k))
}

/// Squared distances from Boolean points to every prototype as integer
/// linear forms: `D * sqdist(x, a) = c_a + sum_{i : x_i = 1} w_{a,i}` with a
/// common positive scale `D`. Comparisons of the integer values are exact.
pub(crate) struct DistanceForms<T> {
    constants: Vec<T>,
    /// `coefs[j][i]` for prototype `j`, coordinate `i`.
    coefs: Vec<Vec<T>>,
    labels: Vec<Label>,
}

impl<T> DistanceForms<T>
where
    T: Ord + Clone + Send + Sync + for<'a> AddAssign<&'a T>,
{
    pub(crate) fn row(&self, x: u32, out: &mut Vec<T>) {
        out.clear();
        for (c, w) in self.constants.iter().zip(&self.coefs) {
            let mut d = c.clone();
            let mut bits = x;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                d += &w[i];
                bits &= bits - 1;
            }
            out.push(d);
        }
    }

    pub(crate) fn nn(&self, x: u32, buf: &mut Vec<T>) -> Outcome {
        self.row(x, buf);
        let mut dp: Option<&T> = None;
        let mut dn: Option<&T> = None;
        for (d, l) in buf.iter().zip(&self.labels) {
            let slot = if l.is_positive() { &mut dp } else { &mut dn };
            if slot.is_none_or(|b| d < b) {
                *slot = Some(d);
            }
        }
        nn_outcome(dp, dn)
    }

    pub(crate) fn knn(&self, x: u32, k: usize, buf: &mut Vec<T>) -> Outcome {
        self.row(x, buf);
        let mut pairs: Vec<(T, Label)> = buf.drain(..).zip(self.labels.iter().copied()).collect();
        knn_outcome(&mut pairs, k)
    }

    fn outcomes(&self, n: usize, k: Option<usize>) -> Vec<(u32, Outcome)> {
        (0..1u32 << n)
            .into_par_iter()
            .map_init(Vec::new, |buf, x| {
                let o = match k {
                    None => self.nn(x, buf),
                    Some(k) => self.knn(x, k, buf),
                };
                (x, o)
            })
            .collect()
    }

    fn all_correct(&self, f: &BooleanFunction, k: Option<usize>) -> bool {
        let mut buf = Vec::with_capacity(self.labels.len());
        (0..f.len() as u32).all(|x| {
            let o = match k {
                None => self.nn(x, &mut buf),
                Some(k) => self.knn(x, k, &mut buf),
            };
            o == Outcome::Label(Label::from_bool(f.eval(x)))
        })
    }
}

pub(crate) enum Forms {
    Small(DistanceForms<i64>),
    Big(DistanceForms<BigInt>),
}

impl Forms {
    pub(crate) fn new(rep: &NNRepresentation) -> Self {
        // sqdist(x, a) = |a|^2 + sum_i (1 - 2 a_i) x_i on Boolean x
        let mut rational_forms = Vec::with_capacity(rep.size());
        let mut labels = Vec::with_capacity(rep.size());
        let mut scale = BigInt::one();
        for (p, l) in rep.prototypes() {
            let c = p.norm_sq();
            let w: Vec<Rational> = p.coords().iter().map(|a| int(1) - a * int(2)).collect();
            scale = w
                .iter()
                .fold(scale.lcm(c.denom()), |acc, q| acc.lcm(q.denom()));
            rational_forms.push((c, w));
            labels.push(l);
        }
        let scale = Rational::from_integer(scale);
        let to_int = |q: &Rational| (q * &scale).to_integer();
        let constants: Vec<BigInt> = rational_forms.iter().map(|(c, _)| to_int(c)).collect();
        let coefs: Vec<Vec<BigInt>> = rational_forms
            .iter()
            .map(|(_, w)| w.iter().map(to_int).collect())
            .collect();
        let limit = BigInt::from(1i64 << 62);
        let fits = constants
            .iter()
            .zip(&coefs)
            .all(|(c, w)| w.iter().fold(c.abs(), |acc, x| acc + x.abs()) < limit);
        if fits {
            let small = |v: &BigInt| v.to_i64().expect("bounded");
            Forms::Small(DistanceForms {
                constants: constants.iter().map(small).collect(),
                coefs: coefs
                    .iter()
                    .map(|w| w.iter().map(small).collect())
                    .collect(),
                labels,
            })
        } else {
            Forms::Big(DistanceForms {
                constants,
                coefs,
                labels,
            })
        }
    }

    fn outcomes(&self, n: usize, k: Option<usize>) -> Vec<(u32, Outcome)> {
        match self {
            Forms::Small(d) => d.outcomes(n, k),
            Forms::Big(d) => d.outcomes(n, k),
        }
    }

    fn all_correct(&self, f: &BooleanFunction, k: Option<usize>) -> bool {
        match self {
            Forms::Small(d) => d.all_correct(f, k),
            Forms::Big(d) => d.all_correct(f, k),
        }
    }
}

fn check_arity(f: &BooleanFunction, rep: &NNRepresentation) -> Result<()> {
    if f.arity() != rep.dim {
        return Err(Error::DimensionMismatch {
            expected: f.arity(),
            actual: rep.dim,
        });
    }
    Ok(())
}

/// Classifies every point of `{0,1}^n` and reports all disagreements with `f`.
pub fn verify_nn(f: &BooleanFunction, rep: &NNRepresentation) -> Result<VerificationReport> {
    check_arity(f, rep)?;
    if rep.size() == 0 {
        return Err(Error::EmptyRepresentation);
    }
    let outcomes = Forms::new(rep).outcomes(rep.dim, None);
    Ok(VerificationReport::from_outcomes(f, outcomes))
}

/// k-NN counterpart of [`verify_nn`]; points where the k nearest prototypes
/// are not well defined are recorded as tie points.
pub fn verify_knn(
    f: &BooleanFunction,
    rep: &NNRepresentation,
    k: usize,
) -> Result<VerificationReport> {
    check_arity(f, rep)?;
    check_k(rep, k)?;
    let outcomes = Forms::new(rep).outcomes(rep.dim, Some(k));
    Ok(VerificationReport::from_outcomes(f, outcomes))
}

/// Early-abort check: true iff `rep` is an NN representation of `f`.
pub fn is_nn_representation(f: &BooleanFunction, rep: &NNRepresentation) -> bool {
    f.arity() == rep.dim && rep.size() > 0 && Forms::new(rep).all_correct(f, None)
}

/// Early-abort check for k-NN.
pub fn is_knn_representation(f: &BooleanFunction, rep: &NNRepresentation, k: usize) -> bool {
    f.arity() == rep.dim && check_k(rep, k).is_ok() && Forms::new(rep).all_correct(f, Some(k))
}

/// Classifies a point given by its bits with either rule; `k = 1` is plain NN.
pub fn classify(rep: &NNRepresentation, a: &[bool], k: usize) -> Result<Label> {
    if k == 1 {
        classify_nn(rep, a)
    } else {
        classify_knn(rep, a, k)
    }
}

pub fn point_index(a: &[bool]) -> u32 {
    bits_to_index(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{index_to_bits, rat};
    use crate::function::parse_function;

    fn diag(n: usize, l: i64) -> RationalPoint {
        RationalPoint::new(vec![rat(l, n as i64); n])
    }

    /// Symmetric parity_3 representation written out by hand.
    fn parity3_rep() -> NNRepresentation {
        NNRepresentation::new(
            3,
            vec![diag(3, 1), diag(3, 3)],
            vec![diag(3, 0), diag(3, 2)],
        )
        .unwrap()
    }

    #[test]
    fn classify_nn_examples() {
        let rep = parity3_rep();
        assert_eq!(
            classify_nn(&rep, &[true, true, false]).unwrap(),
            Label::Negative
        );
        let tie = NNRepresentation::from_boolean(2, &[0b11], &[0b00]).unwrap();
        assert_eq!(classify_nn(&tie, &[true, false]), Err(Error::Tie));
        let only =
            NNRepresentation::new(4, vec![RationalPoint::new(vec![rat(1, 2); 4])], vec![]).unwrap();
        for x in 0..16 {
            assert_eq!(
                classify_nn(&only, &index_to_bits(x, 4)).unwrap(),
                Label::Positive
            );
        }
        let empty = NNRepresentation::new(2, vec![], vec![]).unwrap();
        assert_eq!(
            classify_nn(&empty, &[true, true]),
            Err(Error::EmptyRepresentation)
        );
        assert!(matches!(
            classify_nn(&rep, &[true]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn verify_nn_examples() {
        let parity3 = parse_function("parity:3").unwrap();
        assert!(verify_nn(&parity3, &parity3_rep()).unwrap().ok);
        let maj3 = parse_function("maj:3").unwrap();
        let rep = NNRepresentation::from_boolean(3, &[0b111], &[0]).unwrap();
        assert!(verify_nn(&maj3, &rep).unwrap().ok);

        let parity2 = parse_function("parity:2").unwrap();
        let rep = NNRepresentation::from_boolean(2, &[0b11], &[0]).unwrap();
        let report = verify_nn(&parity2, &rep).unwrap();
        assert!(!report.ok);
        // (1,0) has index 1 and is a tie; so is (0,1).
        assert_eq!(report.tie_points, vec![0b01, 0b10]);
        // 11 is misclassified; 00 is correct.
        assert_eq!(report.counterexamples.len(), 3);
        assert_eq!(report.counterexamples[1].observed, Outcome::Tie);
        assert!(verify_nn(&parity3, &rep).is_err());
    }

    #[test]
    fn classify_knn_examples() {
        let rep = parity3_rep();
        let a = [true, true, false];
        assert_eq!(
            classify_knn(&rep, &a, 1).unwrap(),
            classify_nn(&rep, &a).unwrap()
        );
        // distances {2/3, 1, 1, 2}: D_3 = 1 < D_4 = 2, two of three positive.
        assert_eq!(classify_knn(&rep, &a, 3).unwrap(), Label::Positive);
        // D_2 = D_3 = 1
        assert_eq!(classify_knn(&rep, &a, 2), Err(Error::NotWellDefined));
        // k = m: global majority 2 of 4 -> positive
        assert_eq!(classify_knn(&rep, &a, 4).unwrap(), Label::Positive);
        assert_eq!(
            classify_knn(&rep, &a, 5),
            Err(Error::KTooLarge { k: 5, size: 4 })
        );
        assert_eq!(classify_knn(&rep, &a, 0), Err(Error::KZero));
    }

    #[test]
    fn k1_allows_same_label_equidistant_neighbors() {
        // 1111 is at distance 1 from all three positives
        let rep = NNRepresentation::from_boolean(4, &[0b1110, 0b1101, 0b1011], &[0]).unwrap();
        let a = [true; 4];
        assert_eq!(classify_knn(&rep, &a, 1).unwrap(), Label::Positive);
        assert_eq!(classify_nn(&rep, &a).unwrap(), Label::Positive);
        // D_2 = D_3 = 1 is still rejected for k = 2
        assert_eq!(classify_knn(&rep, &a, 2), Err(Error::NotWellDefined));
        let tie = NNRepresentation::from_boolean(2, &[0b11], &[0]).unwrap();
        assert_eq!(classify_knn(&tie, &[true, false], 1), Err(Error::Tie));
    }

    #[test]
    fn verify_knn_examples() {
        let parity3 = parse_function("parity:3").unwrap();
        let rep = parity3_rep();
        assert_eq!(
            verify_knn(&parity3, &rep, 1).unwrap(),
            verify_nn(&parity3, &rep).unwrap()
        );
        let r3 = verify_knn(&parity3, &rep, 3).unwrap();
        assert!(!r3.ok);
        assert!(r3.counterexamples.iter().any(|c| c.point == 0b011));
        assert!(matches!(
            verify_knn(&parity3, &rep, 9),
            Err(Error::KTooLarge { .. })
        ));
    }

    #[test]
    fn forms_agree_with_direct_distances() {
        let rep = NNRepresentation::new(
            3,
            vec![RationalPoint::new(vec![rat(7, 4), rat(-1, 3), rat(5, 6)])],
            vec![RationalPoint::new(vec![rat(1, 9), rat(2, 1), rat(-3, 7)])],
        )
        .unwrap();
        let Forms::Small(forms) = Forms::new(&rep) else {
            panic!("expected small forms")
        };
        let mut row = Vec::new();
        for x in 0..8u32 {
            forms.row(x, &mut row);
            let xp = RationalPoint::from_index(x, 3);
            let d: Vec<Rational> = rep
                .prototypes()
                .map(|(p, _)| sqdist(&xp, p).unwrap())
                .collect();
            assert_eq!(d[0].cmp(&d[1]), row[0].cmp(&row[1]));
        }
    }

    #[test]
    fn huge_coordinates_use_big_forms() {
        let huge = Rational::new(BigInt::from(10).pow(30u32), BigInt::from(3));
        let rep = NNRepresentation::new(
            2,
            vec![RationalPoint::new(vec![rat(1, 2) + &huge, int(0)])],
            vec![RationalPoint::new(vec![rat(1, 2) - huge, int(0)])],
        )
        .unwrap();
        assert!(matches!(Forms::new(&rep), Forms::Big(_)));
        let f = parse_function("table:2:a").unwrap(); // f = x_1
        assert!(verify_nn(&f, &rep).unwrap().ok);
    }

    #[test]
    fn invalid_representations() {
        let p = RationalPoint::from_index(1, 2);
        assert!(matches!(
            NNRepresentation::new(2, vec![p.clone(), p.clone()], vec![]),
            Err(Error::DuplicatePrototype(_))
        ));
        assert!(matches!(
            NNRepresentation::new(
                2,
                vec![p.clone()],
                vec![RationalPoint::new(vec![rat(2, 2), rat(0, 5)])]
            ),
            Err(Error::OverlappingPrototype(_))
        ));
        assert!(matches!(
            NNRepresentation::new(3, vec![p], vec![]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn json_roundtrip_and_noncanonical_input() {
        let rep = parity3_rep();
        let text = rep.to_json();
        assert_eq!(
            text,
            r#"{"n":3,"positives":[["1/3","1/3","1/3"],["1","1","1"]],"negatives":[["0","0","0"],["2/3","2/3","2/3"]]}"#
        );
        assert_eq!(NNRepresentation::from_json(&text).unwrap(), rep);
        let loose = r#"{ "n": 1, "positives": [["6/4"]], "negatives": [["-2/4"]] }"#;
        let parsed = NNRepresentation::from_json(loose).unwrap();
        assert_eq!(
            parsed.to_json(),
            r#"{"n":1,"positives":[["3/2"]],"negatives":[["-1/2"]]}"#
        );
        assert!(
            NNRepresentation::from_json(r#"{"n":1,"positives":[["x"]],"negatives":[]}"#).is_err()
        );
    }

    #[test]
    fn early_abort_matches_report() {
        let parity2 = parse_function("parity:2").unwrap();
        let bad = NNRepresentation::from_boolean(2, &[0b11], &[0]).unwrap();
        assert!(!is_nn_representation(&parity2, &bad));
        let good = NNRepresentation::from_boolean(2, &[1, 2], &[0, 3]).unwrap();
        assert!(is_nn_representation(&parity2, &good));
        assert!(is_knn_representation(&parity2, &good, 1));
        assert!(!is_knn_representation(&parity2, &good, 5));
    }
}
