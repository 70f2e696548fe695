//! Linear decision trees, k-NN classification with counted distance
//! comparisons, and monochromatic rectangles of the inner-product matrix.

use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational, sqdist, Rational, RationalPoint};
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::representation::{check_k, majority_label, Label, NNRepresentation};

/// A binary tree of linear tests `w . x <= t` with Boolean leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearDecisionTree {
    Leaf(bool),
    Test {
        weights: Vec<Rational>,
        threshold: Rational,
        /// Taken when `w . x <= t`.
        le: Box<LinearDecisionTree>,
        /// Taken when `w . x > t`.
        gt: Box<LinearDecisionTree>,
    },
}

impl LinearDecisionTree {
    pub fn test(
        weights: Vec<Rational>,
        threshold: Rational,
        le: LinearDecisionTree,
        gt: LinearDecisionTree,
    ) -> Self {
        LinearDecisionTree::Test {
            weights,
            threshold,
            le: Box::new(le),
            gt: Box::new(gt),
        }
    }

    /// Checks that every test has `n` weights.
    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self {
            LinearDecisionTree::Leaf(_) => Ok(()),
            LinearDecisionTree::Test {
                weights, le, gt, ..
            } => {
                if weights.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        actual: weights.len(),
                    });
                }
                le.check_dim(n)?;
                gt.check_dim(n)
            }
        }
    }

    fn eval_index(&self, x: u32) -> bool {
        let mut node = self;
        loop {
            match node {
                LinearDecisionTree::Leaf(b) => return *b,
                LinearDecisionTree::Test {
                    weights,
                    threshold,
                    le,
                    gt,
                } => {
                    let s: Rational = weights
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| (x >> i) & 1 == 1)
                        .map(|(_, w)| w)
                        .sum();
                    node = if s <= *threshold { le } else { gt };
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&NodeFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let node: NodeFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        node.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct TestFile {
    w: Vec<String>,
    t: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NodeFile {
    Leaf {
        leaf: u8,
    },
    Test {
        test: TestFile,
        le: Box<NodeFile>,
        gt: Box<NodeFile>,
    },
}

impl From<&LinearDecisionTree> for NodeFile {
    fn from(t: &LinearDecisionTree) -> Self {
        match t {
            LinearDecisionTree::Leaf(b) => NodeFile::Leaf { leaf: *b as u8 },
            LinearDecisionTree::Test {
                weights,
                threshold,
                le,
                gt,
            } => NodeFile::Test {
                test: TestFile {
                    w: weights.iter().map(format_rational).collect(),
                    t: format_rational(threshold),
                },
                le: Box::new(le.as_ref().into()),
                gt: Box::new(gt.as_ref().into()),
            },
        }
    }
}

impl TryFrom<NodeFile> for LinearDecisionTree {
    type Error = Error;

    fn try_from(node: NodeFile) -> Result<Self> {
        match node {
            NodeFile::Leaf { leaf: 0 } => Ok(LinearDecisionTree::Leaf(false)),
            NodeFile::Leaf { leaf: 1 } => Ok(LinearDecisionTree::Leaf(true)),
            NodeFile::Leaf { leaf } => {
                Err(Error::Format(format!("leaf value {leaf} is not 0 or 1")))
            }
            NodeFile::Test { test, le, gt } => Ok(LinearDecisionTree::test(
                test.w
                    .iter()
                    .map(|w| parse_rational(w))
                    .collect::<Result<_>>()?,
                parse_rational(&test.t)?,
                (*le).try_into()?,
                (*gt).try_into()?,
            )),
        }
    }
}

/// Leaf reached from the root by following test outcomes.
pub fn ldt_eval(tree: &LinearDecisionTree, x: &[bool]) -> Result<bool> {
    tree.check_dim(x.len())?;
    Ok(tree.eval_index(crate::arith::bits_to_index(x)))
}

/// Length of the longest root-to-leaf path.
pub fn ldt_depth(tree: &LinearDecisionTree) -> usize {
    match tree {
        LinearDecisionTree::Leaf(_) => 0,
        LinearDecisionTree::Test { le, gt, .. } => 1 + ldt_depth(le).max(ldt_depth(gt)),
    }
}

/// Every input where the tree and `f` disagree, in index order.
pub fn ldt_disagreements(tree: &LinearDecisionTree, f: &BooleanFunction) -> Result<Vec<u32>> {
    tree.check_dim(f.arity())?;
    Ok((0..f.len() as u32)
        .filter(|&x| tree.eval_index(x) != f.eval(x))
        .collect())
}

/// Exhaustive equivalence check.
pub fn ldt_check(tree: &LinearDecisionTree, f: &BooleanFunction) -> Result<bool> {
    Ok(ldt_disagreements(tree, f)?.is_empty())
}

/// Depth-one tree for a representation with one positive and one negative
/// prototype: the test is the perpendicular bisector of the two, oriented
/// so that the positive side is `>`. Single-prototype representations give
/// a leaf.
pub fn bisector_tree(rep: &NNRepresentation) -> Result<LinearDecisionTree> {
    match (rep.positives(), rep.negatives()) {
        ([_], []) => Ok(LinearDecisionTree::Leaf(true)),
        ([], [_]) => Ok(LinearDecisionTree::Leaf(false)),
        ([p], [q]) => {
            // |x - p|^2 < |x - q|^2  <=>  2 (p - q) . x > |p|^2 - |q|^2
            let two = Rational::from_integer(2.into());
            let weights = p
                .coords()
                .iter()
                .zip(q.coords())
                .map(|(a, b)| (a - b) * &two)
                .collect();
            let threshold = p.norm_sq() - q.norm_sq();
            Ok(LinearDecisionTree::test(
                weights,
                threshold,
                LinearDecisionTree::Leaf(false),
                LinearDecisionTree::Leaf(true),
            ))
        }
        _ => Err(Error::NotApplicable {
            method: "bisector".into(),
            reason: format!("needs at most one prototype per label, got {}", rep.size()),
        }),
    }
}

/// Upper bound on distance comparisons made by [`knn_classify_counted`]:
/// `m (1 + ceil(log2(k + 1))) + k ceil(log2 m)`.
pub fn comparison_bound(m: usize, k: usize) -> usize {
    m * (1 + ceil_log2(k + 1)) + k * ceil_log2(m)
}

fn ceil_log2(v: usize) -> usize {
    if v <= 1 {
        0
    } else {
        (usize::BITS - (v - 1).leading_zeros()) as usize
    }
}

struct Counter<'a> {
    dists: &'a [Rational],
    comparisons: usize,
}

impl Counter<'_> {
    fn cmp(&mut self, i: usize, j: usize) -> std::cmp::Ordering {
        self.comparisons += 1;
        self.dists[i].cmp(&self.dists[j])
    }

    /// Inserts `j` into the sorted buffer after any equal elements.
    fn insert(&mut self, buf: &mut Vec<usize>, j: usize) {
        let (mut lo, mut hi) = (0, buf.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.cmp(buf[mid], j).is_le() {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        buf.insert(lo, j);
    }
}

/// k-NN classification that counts pairwise squared-distance comparisons,
/// each of which is one linear test on the input.
///
/// `k = 1` keeps a running minimum per label. Larger `k` scans the
/// prototypes once, maintaining the `k + 1` nearest in a sorted buffer with
/// binary insertion. `k = m` needs no comparisons.
pub fn knn_classify_counted(
    rep: &NNRepresentation,
    a: &[bool],
    k: usize,
) -> Result<(Label, usize)> {
    check_k(rep, k)?;
    if a.len() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            actual: a.len(),
        });
    }
    let x = RationalPoint::from_bits(a);
    let (dists, labels): (Vec<Rational>, Vec<Label>) = rep
        .prototypes()
        .map(|(p, l)| Ok((sqdist(&x, p)?, l)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let m = dists.len();
    if k == m {
        let pos = labels.iter().filter(|l| l.is_positive()).count();
        return Ok((majority_label(pos, k), 0));
    }
    let mut c = Counter {
        dists: &dists,
        comparisons: 0,
    };
    if k == 1 {
        let mut best: [Option<usize>; 2] = [None, None];
        for (j, l) in labels.iter().enumerate() {
            let slot = &mut best[l.is_positive() as usize];
            match *slot {
                Some(b) if c.cmp(j, b).is_ge() => {}
                _ => *slot = Some(j),
            }
        }
        let label = match best {
            [None, Some(_)] => Label::Positive,
            [Some(_), None] => Label::Negative,
            [Some(n), Some(p)] => match c.cmp(p, n) {
                std::cmp::Ordering::Less => Label::Positive,
                std::cmp::Ordering::Greater => Label::Negative,
                std::cmp::Ordering::Equal => return Err(Error::Tie),
            },
            [None, None] => unreachable!(),
        };
        return Ok((label, c.comparisons));
    }
    let mut buf: Vec<usize> = Vec::with_capacity(k + 2);
    for j in 0..m {
        if buf.len() == k + 1 {
            if c.cmp(j, buf[k]).is_ge() {
                continue;
            }
            buf.pop();
        }
        c.insert(&mut buf, j);
    }
    if c.cmp(buf[k - 1], buf[k]).is_eq() {
        return Err(Error::NotWellDefined);
    }
    let pos = buf[..k]
        .iter()
        .filter(|&&j| labels[j].is_positive())
        .count();
    Ok((majority_label(pos, k), c.comparisons))
}

pub const MAX_RECTANGLE_N: usize = 3;

/// A monochromatic combinatorial rectangle `rows x cols` of a
/// communication matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rectangle {
    pub area: usize,
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
    pub value: bool,
}

/// Inner product mod 2 of two `n`-bit vectors.
pub fn inner_product(x: u32, y: u32) -> bool {
    (x & y).count_ones() % 2 == 1
}

/// Largest monochromatic rectangle of the `2^n x 2^n` inner-product matrix
/// (rows `x`, columns `y`, both in assignment-index order).
///
/// Every nonempty row set is enumerated; for each row set and value the
/// largest compatible column set is the set of columns constant on those
/// rows, so this covers all row/column set pairs.
pub fn max_mono_rectangle(n: usize) -> Result<Rectangle> {
    if n == 0 || n > MAX_RECTANGLE_N {
        return Err(Error::ArityOutOfRange(n, 1, MAX_RECTANGLE_N));
    }
    let size = 1usize << n;
    let mut best = Rectangle {
        area: 0,
        rows: vec![],
        cols: vec![],
        value: false,
    };
    for row_set in 1u64..1 << size {
        let rows: Vec<u32> = (0..size as u32)
            .filter(|r| (row_set >> r) & 1 == 1)
            .collect();
        for value in [false, true] {
            let cols: Vec<u32> = (0..size as u32)
                .filter(|&y| rows.iter().all(|&x| inner_product(x, y) == value))
                .collect();
            let area = rows.len() * cols.len();
            if area > best.area {
                best = Rectangle {
                    area,
                    rows: rows.clone(),
                    cols,
                    value,
                };
            }
        }
    }
    Ok(best)
}
