//! Explicit prototype constructions.

use std::collections::HashMap;

use num_traits::Zero;

use crate::arith::{int, rat, Rational, RationalPoint};
use crate::covering::{cover_hypercube, BallCovering, MAX_COVERING_ARITY};
use crate::error::{Error, Result};
use crate::function::{BooleanFunction, SymmetricSpec, ThresholdSpec};
use crate::representation::{is_nn_representation, Label, NNRepresentation};

pub const MAX_PARITY_BNN_ARITY: usize = 16;

fn diagonal(n: usize, level: usize) -> RationalPoint {
    RationalPoint::new(vec![rat(level as i64, n as i64); n])
}

/// `n + 1` prototypes `(l/n, ..., l/n)` on the main diagonal, labeled by
/// whether weight `l` is accepted.
pub fn build_symmetric(spec: &SymmetricSpec) -> NNRepresentation {
    let n = spec.arity();
    let (pos, neg): (Vec<usize>, Vec<usize>) = (0..=n).partition(|&l| spec.contains(l));
    NNRepresentation::new(
        n,
        pos.into_iter().map(|l| diagonal(n, l)).collect(),
        neg.into_iter().map(|l| diagonal(n, l)).collect(),
    )
    .expect("diagonal points are distinct")
}

/// Two prototypes `c + w` and `c - w` placed symmetrically about the
/// hyperplane `w . x = t - 1/2`, where `c` is the foot of the perpendicular
/// from the origin. On Boolean `x`,
/// `sqdist(x, c - w) - sqdist(x, c + w) = 4 (w . x - t + 1/2)`.
pub fn build_threshold(spec: &ThresholdSpec) -> NNRepresentation {
    let n = spec.arity();
    let norm_sq: i64 = spec.weights().iter().map(|w| w * w).sum();
    if norm_sq == 0 {
        // constant: 0 >= t decides everything
        let p = RationalPoint::new(vec![int(0); n]);
        let (pos, neg) = if 0 >= spec.threshold() {
            (vec![p], vec![])
        } else {
            (vec![], vec![p])
        };
        return NNRepresentation::new(n, pos, neg).expect("single prototype");
    }
    let offset = int(spec.threshold()) - rat(1, 2);
    let scale = offset / int(norm_sq);
    let shifted = |sign: i64| {
        RationalPoint::new(
            spec.weights()
                .iter()
                .map(|&w| &scale * int(w) + int(sign * w))
                .collect(),
        )
    };
    NNRepresentation::new(n, vec![shifted(1)], vec![shifted(-1)])
        .expect("w != 0 makes the prototypes distinct")
}

/// Boolean prototypes for majority (`|x| >= n/2`): the all-ones and
/// all-zeros vectors for odd `n`; for even `n` the all-zeros vector against
/// the `n/2 + 1` weight-`(n-1)` points with their zero in coordinates
/// `1..=n/2+1`.
pub fn build_majority_bnn(n: usize) -> Result<NNRepresentation> {
    if n == 0 || n > crate::function::MAX_ARITY {
        return Err(Error::ArityOutOfRange(n, 1, crate::function::MAX_ARITY));
    }
    let ones = (1u32 << n) - 1;
    if n % 2 == 1 {
        NNRepresentation::from_boolean(n, &[ones], &[0])
    } else {
        let pos: Vec<u32> = (0..n / 2 + 1).map(|i| ones & !(1 << i)).collect();
        NNRepresentation::from_boolean(n, &pos, &[0])
    }
}

/// Every point of the cube as a prototype, labeled by parity.
pub fn build_parity_bnn(n: usize) -> Result<NNRepresentation> {
    if n == 0 || n > MAX_PARITY_BNN_ARITY {
        return Err(Error::ArityOutOfRange(n, 1, MAX_PARITY_BNN_ARITY));
    }
    let (pos, neg): (Vec<u32>, Vec<u32>) = (0..1u32 << n).partition(|x| x.count_ones() % 2 == 1);
    NNRepresentation::from_boolean(n, &pos, &neg)
}

/// Every point of the cube as a prototype, labeled by `f`. Valid for any `f`.
pub fn build_full_bnn(f: &BooleanFunction) -> Result<NNRepresentation> {
    if f.arity() > MAX_PARITY_BNN_ARITY {
        return Err(Error::ArityOutOfRange(f.arity(), 1, MAX_PARITY_BNN_ARITY));
    }
    let (pos, neg): (Vec<u32>, Vec<u32>) = (0..f.len() as u32).partition(|&x| f.eval(x));
    NNRepresentation::from_boolean(f.arity(), &pos, &neg)
}

/// Coordinate-wise mean of Boolean points given by index.
pub fn centroid_of_indices(points: &[u32], n: usize) -> Result<RationalPoint> {
    if points.is_empty() {
        return Err(Error::EmptyPointList);
    }
    let len = points.len() as i64;
    Ok(RationalPoint::new(
        (0..n)
            .map(|i| {
                let ones = points.iter().filter(|&&p| (p >> i) & 1 == 1).count() as i64;
                rat(ones, len)
            })
            .collect(),
    ))
}

/// Coordinate-wise mean.
pub fn centroid(points: &[Vec<bool>]) -> Result<RationalPoint> {
    let first = points.first().ok_or(Error::EmptyPointList)?;
    let n = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: p.len(),
        });
    }
    let idx: Vec<u32> = points
        .iter()
        .map(|p| crate::arith::bits_to_index(p))
        .collect();
    centroid_of_indices(&idx, n)
}

/// One side of a cell: the non-center points with a given label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSide {
    pub center: u32,
    pub label: Label,
    pub points: Vec<u32>,
}

/// Splits every cell of `cover` by the value of `f`, excluding the center.
pub fn cell_sides(f: &BooleanFunction, cover: &BallCovering) -> Vec<CellSide> {
    let mut sides = Vec::with_capacity(2 * cover.len());
    for (&c, cell) in cover.centers().iter().zip(cover.cells()) {
        for label in [Label::Positive, Label::Negative] {
            let points: Vec<u32> = cell
                .iter()
                .copied()
                .filter(|&x| x != c && Label::from_bool(f.eval(x)) == label)
                .collect();
            sides.push(CellSide {
                center: c,
                label,
                points,
            });
        }
    }
    sides
}

/// Per cell: a centroid for each side with at least three points, the
/// points themselves otherwise, and the center labeled by `f`. The result is
/// always re-verified.
pub fn build_covering(f: &BooleanFunction) -> Result<NNRepresentation> {
    let cover = cover_hypercube(f.arity())?;
    build_covering_with(f, &cover)
}

pub fn build_covering_with(f: &BooleanFunction, cover: &BallCovering) -> Result<NNRepresentation> {
    let n = f.arity();
    if n > MAX_COVERING_ARITY {
        return Err(Error::ArityOutOfRange(n, 1, MAX_COVERING_ARITY));
    }
    if cover.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: cover.dim(),
        });
    }
    let mut labels: HashMap<RationalPoint, Label> = HashMap::new();
    let mut order: Vec<RationalPoint> = Vec::new();
    let mut add = |p: RationalPoint, label: Label| -> Result<()> {
        match labels.get(&p) {
            Some(&l) if l != label => Err(Error::Construction(format!(
                "prototype {p} produced with both labels"
            ))),
            Some(_) => Ok(()),
            None => {
                labels.insert(p.clone(), label);
                order.push(p);
                Ok(())
            }
        }
    };
    for (&c, cell) in cover.centers().iter().zip(cover.cells()) {
        for label in [Label::Positive, Label::Negative] {
            let side: Vec<u32> = cell
                .iter()
                .copied()
                .filter(|&x| x != c && Label::from_bool(f.eval(x)) == label)
                .collect();
            if side.len() >= 3 {
                add(centroid_of_indices(&side, n)?, label)?;
            } else {
                for x in side {
                    add(RationalPoint::from_index(x, n), label)?;
                }
            }
        }
        if cell.contains(&c) {
            add(RationalPoint::from_index(c, n), Label::from_bool(f.eval(c)))?;
        }
    }
    let (pos, neg): (Vec<RationalPoint>, Vec<RationalPoint>) =
        order.into_iter().partition(|p| labels[p].is_positive());
    let rep = NNRepresentation::new(n, pos, neg)?;
    if !is_nn_representation(f, &rep) {
        return Err(Error::Construction(
            "covering prototypes do not represent the function".into(),
        ));
    }
    Ok(rep)
}

/// Checks the centroid inequalities for one side of a cell with at least
/// three points: every point of the side is at squared distance `< 1` from
/// the centroid, and every other Boolean point except the center is at
/// squared distance `>= 1`.
pub fn centroid_separates(side: &[u32], center: u32, n: usize) -> Result<bool> {
    let c = centroid_of_indices(side, n)?;
    let one = int(1);
    for x in 0..1u32 << n {
        let d = crate::arith::sqdist(&c, &RationalPoint::from_index(x, n))?;
        let inside = side.contains(&x);
        if inside && d >= one {
            return Ok(false);
        }
        if !inside && x != center && d < one {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when the representation has exactly one prototype and it sits at the origin.
pub fn is_origin_singleton(rep: &NNRepresentation) -> bool {
    rep.size() == 1
        && rep
            .prototypes()
            .all(|(p, _)| p.coords().iter().all(Rational::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::parse_function;
    use crate::representation::{classify_nn, verify_nn};

    fn pt(c: &[(i64, i64)]) -> RationalPoint {
        RationalPoint::new(c.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    #[test]
    fn symmetric_parity3() {
        let rep = build_symmetric(&SymmetricSpec::parity(3).unwrap());
        assert_eq!(rep.positives(), &[pt(&[(1, 3); 3]), pt(&[(1, 1); 3])]);
        assert_eq!(rep.negatives(), &[pt(&[(0, 1); 3]), pt(&[(2, 3); 3])]);
        assert!(
            verify_nn(&parse_function("parity:3").unwrap(), &rep)
                .unwrap()
                .ok
        );
    }

    #[test]
    fn symmetric_constant_and_majority() {
        let all = build_symmetric(&SymmetricSpec::new(4, 0..=4).unwrap());
        assert_eq!(all.positives().len(), 5);
        assert!(all.negatives().is_empty());
        let maj = build_symmetric(&SymmetricSpec::new(3, [2, 3]).unwrap());
        assert_eq!(maj.positives(), &[pt(&[(2, 3); 3]), pt(&[(1, 1); 3])]);
        assert_eq!(maj.negatives(), &[pt(&[(0, 1); 3]), pt(&[(1, 3); 3])]);
    }

    #[test]
    fn symmetric_all_small() {
        for n in 1..=6 {
            for mask in 0u32..1 << (n + 1) {
                let spec = SymmetricSpec::new(n, (0..=n).filter(|l| (mask >> l) & 1 == 1)).unwrap();
                let rep = build_symmetric(&spec);
                assert_eq!(rep.size(), n + 1);
                assert!(verify_nn(&spec.function(), &rep).unwrap().ok);
            }
        }
    }

    #[test]
    fn threshold_and2() {
        let spec = ThresholdSpec::new(vec![1, 1], 2).unwrap();
        let rep = build_threshold(&spec);
        assert_eq!(rep.positives(), &[pt(&[(7, 4), (7, 4)])]);
        assert_eq!(rep.negatives(), &[pt(&[(-1, 4), (-1, 4)])]);
        let x = RationalPoint::from_index(3, 2);
        assert_eq!(
            crate::arith::sqdist(&x, &rep.positives()[0]).unwrap(),
            rat(9, 8)
        );
        assert_eq!(
            crate::arith::sqdist(&x, &rep.negatives()[0]).unwrap(),
            rat(25, 8)
        );
        assert_eq!(classify_nn(&rep, &[true, true]).unwrap(), Label::Positive);
        assert!(verify_nn(&spec.function(), &rep).unwrap().ok);
    }

    #[test]
    fn threshold_dictator_and_majority() {
        let rep = build_threshold(&ThresholdSpec::new(vec![1], 1).unwrap());
        assert_eq!(rep.positives(), &[pt(&[(3, 2)])]);
        assert_eq!(rep.negatives(), &[pt(&[(-1, 2)])]);
        let maj = ThresholdSpec::majority(3).unwrap();
        let rep = build_threshold(&maj);
        assert_eq!(rep.size(), 2);
        assert!(verify_nn(&maj.function(), &rep).unwrap().ok);
    }

    #[test]
    fn threshold_zero_weights() {
        let t = ThresholdSpec::new(vec![0, 0, 0], 0).unwrap();
        let rep = build_threshold(&t);
        assert!(is_origin_singleton(&rep));
        assert_eq!(rep.positives().len(), 1);
        assert!(verify_nn(&t.function(), &rep).unwrap().ok);
        let t = ThresholdSpec::new(vec![0, 0], 1).unwrap();
        let rep = build_threshold(&t);
        assert_eq!(rep.negatives().len(), 1);
        assert!(verify_nn(&t.function(), &rep).unwrap().ok);
    }

    #[test]
    fn majority_bnn() {
        let rep = build_majority_bnn(3).unwrap();
        assert_eq!(rep, NNRepresentation::from_boolean(3, &[7], &[0]).unwrap());
        let rep4 = build_majority_bnn(4).unwrap();
        // zeros at coordinates 1, 2, 3: 0111, 1011, 1101 (x_1 first)
        assert_eq!(
            rep4,
            NNRepresentation::from_boolean(4, &[0b1110, 0b1101, 0b1011], &[0]).unwrap()
        );
        assert_eq!(
            classify_nn(&rep4, &[false, false, true, true]).unwrap(),
            Label::Positive
        );
        assert_eq!(
            classify_nn(&rep4, &[true, false, false, false]).unwrap(),
            Label::Negative
        );
        for n in 1..=10 {
            let rep = build_majority_bnn(n).unwrap();
            let expected = if n % 2 == 1 { 2 } else { n / 2 + 2 };
            assert_eq!(rep.size(), expected);
            assert!(rep.is_boolean());
            let f = SymmetricSpec::majority(n).unwrap().function();
            assert!(verify_nn(&f, &rep).unwrap().ok, "n = {n}");
        }
    }

    #[test]
    fn parity_bnn() {
        assert_eq!(
            build_parity_bnn(1).unwrap(),
            NNRepresentation::from_boolean(1, &[1], &[0]).unwrap()
        );
        assert_eq!(build_parity_bnn(2).unwrap().size(), 4);
        let rep = build_parity_bnn(3).unwrap();
        assert_eq!(rep.size(), 8);
        assert!(
            verify_nn(&parse_function("parity:3").unwrap(), &rep)
                .unwrap()
                .ok
        );
        assert!(build_parity_bnn(17).is_err());
    }

    #[test]
    fn centroid_examples() {
        let b = |s: &str| s.chars().map(|c| c == '1').collect::<Vec<bool>>();
        assert_eq!(
            centroid(&[b("100"), b("010"), b("001")]).unwrap(),
            pt(&[(1, 3); 3])
        );
        assert_eq!(
            centroid(&[b("101")]).unwrap(),
            RationalPoint::from_bits(&b("101"))
        );
        assert_eq!(
            centroid(&[b("011"), b("101"), b("110")]).unwrap(),
            pt(&[(2, 3); 3])
        );
        assert_eq!(centroid(&[]), Err(Error::EmptyPointList));
        assert!(matches!(
            centroid(&[b("01"), b("1")]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn covering_parity3_matches_symmetric() {
        let f = parse_function("parity:3").unwrap();
        let rep = build_covering(&f).unwrap();
        let sym = build_symmetric(&SymmetricSpec::parity(3).unwrap());
        let sorted = |r: &NNRepresentation| {
            let mut p = r.positives().to_vec();
            let mut n = r.negatives().to_vec();
            p.sort();
            n.sort();
            (p, n)
        };
        assert_eq!(sorted(&rep), sorted(&sym));
    }

    #[test]
    fn covering_constant_and_singleton() {
        let zero = BooleanFunction::constant(3, false).unwrap();
        let rep = build_covering(&zero).unwrap();
        assert!(rep.positives().is_empty());
        let single = BooleanFunction::from_fn(3, |x| x == 0b010).unwrap();
        let rep = build_covering(&single).unwrap();
        assert_eq!(rep.positives(), &[RationalPoint::from_index(0b010, 3)]);
    }

    #[test]
    fn covering_detects_bad_partition_dimension() {
        let f = parse_function("parity:3").unwrap();
        let cover = cover_hypercube(4).unwrap();
        assert!(build_covering_with(&f, &cover).is_err());
        assert!(build_covering(&parse_function("parity:13").unwrap()).is_err());
    }

    #[test]
    fn centroid_inequalities_on_spheres() {
        // every subset of size >= 3 of the unit sphere around 0, n = 5
        let n = 5;
        let units: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        for mask in 0u32..1 << n {
            if mask.count_ones() >= 3 {
                let side: Vec<u32> = units.iter().copied().filter(|u| mask & u != 0).collect();
                assert!(centroid_separates(&side, 0, n).unwrap());
            }
        }
        // a two-point side does not satisfy the outside inequality in general
        assert!(!centroid_separates(&[1, 2], 0, 3).unwrap());
    }
}
