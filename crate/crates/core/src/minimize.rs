//! Exhaustive minimum-size searches over finite candidate prototype sets.
//!
//! Candidate sets are enumerated by size, then lexicographically by
//! candidate index, so the first set that verifies is minimal and the
//! witness is deterministic.

use std::time::Instant;

use serde::Serialize;

use crate::arith::{rat, sqdist, RationalPoint};
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::representation::{is_knn_representation, majority_label, Label, NNRepresentation};

/// Largest arity searched without an explicit size cutoff.
pub const MAX_EXACT_ARITY: usize = 4;
/// Largest arity searched with a cutoff.
pub const MAX_CUTOFF_ARITY: usize = 5;
/// Candidate sets are tracked as 64-bit masks over their members.
pub const MAX_SET_SIZE: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// Minimum size, when the search finished.
    pub optimum: Option<usize>,
    /// Smallest verifying representation, present iff `optimum` is.
    pub witness: Option<NNRepresentation>,
    /// Number of labeled candidate sets tested.
    pub explored: u64,
    /// Largest size for which every candidate was refuted.
    pub exhausted_up_to: usize,
    /// Set when the deadline stopped the search.
    pub timed_out: bool,
    /// Number of candidate points the sets were drawn from.
    pub universe: usize,
}

impl SearchResult {
    /// Every candidate set, of every size, was refuted.
    pub fn is_infeasible(&self) -> bool {
        self.optimum.is_none() && self.exhausted_up_to >= self.universe
    }
}

/// Summary record emitted next to a witness file.
#[derive(Clone, Debug, Serialize)]
pub struct SearchSummary {
    pub optimum: Option<usize>,
    pub explored: u64,
    pub exhausted_up_to: usize,
    pub timed_out: bool,
    pub wall_time_ms: u128,
}

impl SearchResult {
    pub fn summary(&self, wall_time_ms: u128) -> SearchSummary {
        SearchSummary {
            optimum: self.optimum,
            explored: self.explored,
            exhausted_up_to: self.exhausted_up_to,
            timed_out: self.timed_out,
            wall_time_ms,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchLimits {
    pub max_size: Option<usize>,
    pub deadline: Option<Instant>,
}

impl SearchLimits {
    pub fn max_size(max_size: usize) -> Self {
        SearchLimits {
            max_size: Some(max_size),
            deadline: None,
        }
    }
}

/// Candidate points plus, for every Boolean input, the rank of each
/// candidate's squared distance within that input's row. Comparing ranks is
/// equivalent to comparing exact distances.
struct Universe {
    n: usize,
    points: Vec<RationalPoint>,
    /// `ranks[x * len + j]`
    ranks: Vec<u32>,
}

impl Universe {
    fn boolean(n: usize) -> Self {
        let len = 1usize << n;
        let points = (0..len as u32)
            .map(|i| RationalPoint::from_index(i, n))
            .collect();
        let mut ranks = Vec::with_capacity(len * len);
        for x in 0..len as u32 {
            ranks.extend((0..len as u32).map(|j| (x ^ j).count_ones()));
        }
        Universe { n, points, ranks }
    }

    fn grid(n: usize, grid: &[RationalPoint]) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let mut points: Vec<RationalPoint> = Vec::new();
        for p in grid {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: p.dim(),
                });
            }
            if !points.contains(p) {
                points.push(p.clone());
            }
        }
        let len = points.len();
        let mut ranks = Vec::with_capacity(len << n);
        for x in 0..1u32 << n {
            let xp = RationalPoint::from_index(x, n);
            let d: Vec<_> = points
                .iter()
                .map(|p| sqdist(&xp, p))
                .collect::<Result<_>>()?;
            let mut sorted = d.clone();
            sorted.sort();
            sorted.dedup();
            ranks.extend(d.iter().map(|v| sorted.binary_search(v).unwrap() as u32));
        }
        Ok(Universe { n, points, ranks })
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    fn row(&self, x: u32) -> &[u32] {
        let len = self.len();
        &self.ranks[x as usize * len..(x as usize + 1) * len]
    }
}

/// Neighborhood of one input within one candidate set, as a mask over the
/// set's members: for `k = 1` the members attaining the minimum distance,
/// for larger `k` the `k` nearest members.
#[derive(Clone, Copy)]
struct Neighborhood {
    mask: u64,
    positive: bool,
}

enum Labels<'a> {
    /// Candidate `j` must carry `forced[j]`.
    Forced(&'a [bool]),
    Free,
}

struct Search<'a> {
    f: &'a BooleanFunction,
    universe: &'a Universe,
    labels: Labels<'a>,
    k: usize,
}

impl Search<'_> {
    /// Fills `out` with one neighborhood per input, or returns false when
    /// some input's k nearest are not well defined (labels cannot help).
    fn neighborhoods(&self, chosen: &[usize], out: &mut Vec<Neighborhood>) -> bool {
        out.clear();
        let s = chosen.len();
        let mut scratch: Vec<(u32, usize)> = Vec::with_capacity(s);
        for x in 0..self.f.len() as u32 {
            let row = self.universe.row(x);
            let mask = if self.k == 1 {
                let best = chosen.iter().map(|&j| row[j]).min().unwrap();
                chosen
                    .iter()
                    .enumerate()
                    .filter(|(_, &j)| row[j] == best)
                    .fold(0u64, |m, (pos, _)| m | (1 << pos))
            } else {
                scratch.clear();
                scratch.extend(chosen.iter().enumerate().map(|(pos, &j)| (row[j], pos)));
                scratch.sort_unstable();
                if self.k < s && scratch[self.k - 1].0 == scratch[self.k].0 {
                    return false;
                }
                scratch[..self.k]
                    .iter()
                    .fold(0u64, |m, &(_, pos)| m | (1 << pos))
            };
            out.push(Neighborhood {
                mask,
                positive: self.f.eval(x),
            });
        }
        true
    }

    fn accepts(&self, hood: &[Neighborhood], positives: u64) -> bool {
        hood.iter().all(|h| {
            if self.k == 1 {
                let inside = h.mask & positives;
                if h.positive {
                    inside == h.mask
                } else {
                    inside == 0
                }
            } else {
                let pos = (h.mask & positives).count_ones() as usize;
                majority_label(pos, self.k).is_positive() == h.positive
            }
        })
    }

    fn run(&self, min_size: usize, limits: SearchLimits) -> Result<SearchResult> {
        let u = self.universe.len();
        let max_size = limits.max_size.unwrap_or(u).min(u);
        if max_size > MAX_SET_SIZE {
            return Err(Error::SearchLimit(format!(
                "candidate sets larger than {MAX_SET_SIZE} are not supported"
            )));
        }
        let mut result = SearchResult {
            optimum: None,
            witness: None,
            explored: 0,
            exhausted_up_to: min_size.saturating_sub(1),
            timed_out: false,
            universe: u,
        };
        let mut hood = Vec::with_capacity(self.f.len());
        let mut ticks = 0u64;
        for size in min_size.max(1)..=max_size {
            let mut chosen: Vec<usize> = (0..size).collect();
            loop {
                ticks += 1;
                if ticks % 1024 == 1 && limits.deadline.is_some_and(|d| Instant::now() >= d) {
                    result.timed_out = true;
                    return Ok(result);
                }
                let label_sets: u64 = match self.labels {
                    Labels::Forced(_) => 1,
                    Labels::Free => 1u64.checked_shl(size as u32).unwrap_or(0),
                };
                if self.neighborhoods(&chosen, &mut hood) {
                    let try_labels = |positives: u64, explored: &mut u64| {
                        *explored += 1;
                        self.accepts(&hood, positives)
                    };
                    let hit = match self.labels {
                        Labels::Forced(forced) => {
                            let positives = chosen
                                .iter()
                                .enumerate()
                                .filter(|(_, &j)| forced[j])
                                .fold(0u64, |m, (pos, _)| m | (1 << pos));
                            try_labels(positives, &mut result.explored).then_some(positives)
                        }
                        Labels::Free => (0..label_sets)
                            .find(|&positives| try_labels(positives, &mut result.explored)),
                    };
                    if let Some(positives) = hit {
                        let rep = self.materialize(&chosen, positives)?;
                        result.optimum = Some(size);
                        result.witness = Some(rep);
                        return Ok(result);
                    }
                } else {
                    result.explored += label_sets;
                }
                if !next_combination(&mut chosen, u) {
                    break;
                }
            }
            result.exhausted_up_to = size;
        }
        Ok(result)
    }

    fn materialize(&self, chosen: &[usize], positives: u64) -> Result<NNRepresentation> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, &j) in chosen.iter().enumerate() {
            let p = self.universe.points[j].clone();
            if (positives >> i) & 1 == 1 {
                pos.push(p);
            } else {
                neg.push(p);
            }
        }
        NNRepresentation::new(self.universe.n, pos, neg)
    }
}

/// Advances to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn check_search_arity(f: &BooleanFunction, limits: &SearchLimits) -> Result<()> {
    let n = f.arity();
    if n > MAX_CUTOFF_ARITY || (n > MAX_EXACT_ARITY && limits.max_size.is_none()) {
        return Err(Error::ArityTooLarge {
            arity: n,
            max: MAX_EXACT_ARITY,
        });
    }
    Ok(())
}

/// Minimum number of Boolean prototypes in an NN representation of `f`.
///
/// Prototype labels are forced: a Boolean prototype at distance zero from
/// itself must carry `f`'s value there.
pub fn exact_bnn(f: &BooleanFunction) -> Result<SearchResult> {
    exact_bnn_with(f, SearchLimits::default())
}

pub fn exact_bnn_with(f: &BooleanFunction, limits: SearchLimits) -> Result<SearchResult> {
    check_search_arity(f, &limits)?;
    let universe = Universe::boolean(f.arity());
    let forced: Vec<bool> = (0..f.len() as u32).map(|x| f.eval(x)).collect();
    let search = Search {
        f,
        universe: &universe,
        labels: Labels::Forced(&forced),
        k: 1,
    };
    search.run(1, limits)
}

/// Smallest Boolean-prototype k-NN representation with freely chosen
/// labels, trying sizes `k..=max_size`.
pub fn exact_knn_bnn(f: &BooleanFunction, k: usize, max_size: usize) -> Result<SearchResult> {
    exact_knn_bnn_with(f, k, SearchLimits::max_size(max_size))
}

pub fn exact_knn_bnn_with(
    f: &BooleanFunction,
    k: usize,
    limits: SearchLimits,
) -> Result<SearchResult> {
    if k == 0 {
        return Err(Error::KZero);
    }
    if f.arity() > MAX_EXACT_ARITY {
        return Err(Error::ArityTooLarge {
            arity: f.arity(),
            max: MAX_EXACT_ARITY,
        });
    }
    let universe = Universe::boolean(f.arity());
    let search = Search {
        f,
        universe: &universe,
        labels: Labels::Free,
        k,
    };
    search.run(k, limits)
}

/// Boolean points followed by the diagonal points `(l/n, ..., l/n)` that
/// are not Boolean.
pub fn default_grid(n: usize) -> Vec<RationalPoint> {
    let mut grid: Vec<RationalPoint> = (0..1u32 << n)
        .map(|x| RationalPoint::from_index(x, n))
        .collect();
    grid.extend((1..n).map(|l| RationalPoint::new(vec![rat(l as i64, n as i64); n])));
    grid
}

/// Upper bound on the real-prototype NN complexity by exhaustive search over
/// labeled subsets of a finite grid.
pub fn grid_nn_upper(
    f: &BooleanFunction,
    grid: &[RationalPoint],
    max_size: usize,
) -> Result<SearchResult> {
    grid_nn_upper_with(f, grid, SearchLimits::max_size(max_size))
}

pub fn grid_nn_upper_with(
    f: &BooleanFunction,
    grid: &[RationalPoint],
    limits: SearchLimits,
) -> Result<SearchResult> {
    let universe = Universe::grid(f.arity(), grid)?;
    let search = Search {
        f,
        universe: &universe,
        labels: Labels::Free,
        k: 1,
    };
    search.run(1, limits)
}

/// Number of labeled candidate sets of each size below `size`: forced labels
/// give `C(u, s)`, free labels `C(u, s) 2^s`.
pub fn candidates_below(universe: usize, size: usize, free_labels: bool, from: usize) -> u128 {
    (from.max(1)..size)
        .map(|s| binomial(universe, s) << if free_labels { s } else { 0 })
        .sum()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Re-checks a search witness with the full verifier.
pub fn witness_verifies(f: &BooleanFunction, result: &SearchResult, k: usize) -> bool {
    result
        .witness
        .as_ref()
        .is_some_and(|w| is_knn_representation(f, w, k))
}

/// Labels a Boolean prototype must carry in any verifying BNN representation.
pub fn forced_label(f: &BooleanFunction, prototype: u32) -> Label {
    Label::from_bool(f.eval(prototype))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_threshold;
    use crate::function::{parse_function, ThresholdSpec};
    use crate::representation::verify_nn;

    fn f(spec: &str) -> BooleanFunction {
        parse_function(spec).unwrap()
    }

    #[test]
    fn combinations_in_lexicographic_order() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(binomial(16, 4), 1820);
        assert_eq!(candidates_below(4, 3, true, 1), 4 * 2 + 6 * 4);
    }

    #[test]
    fn bnn_small_values() {
        let r = exact_bnn(&f("parity:2")).unwrap();
        assert_eq!(r.optimum, Some(4));
        let r = exact_bnn(&f("maj:3")).unwrap();
        assert_eq!(r.optimum, Some(2));
        let r = exact_bnn(&f("table:2:8")).unwrap();
        assert_eq!(r.optimum, Some(3));
        assert_eq!(
            r.witness.unwrap(),
            NNRepresentation::from_boolean(2, &[3], &[1, 2]).unwrap()
        );
        // all 1- and 2-subsets of the 4 points were refuted first
        assert!(r.explored as u128 >= candidates_below(4, 3, false, 1));
        assert_eq!(r.exhausted_up_to, 2);
    }

    #[test]
    fn bnn_constants_and_nonconstant_lower_bound() {
        let one = BooleanFunction::constant(2, true).unwrap();
        assert_eq!(exact_bnn(&one).unwrap().optimum, Some(1));
        for t in 0u32..16 {
            let g = BooleanFunction::from_fn(2, |x| (t >> x) & 1 == 1).unwrap();
            let r = exact_bnn(&g).unwrap();
            let opt = r.optimum.unwrap();
            if g.is_constant() {
                assert_eq!(opt, 1);
            } else {
                assert!(opt >= 2);
            }
            assert!(verify_nn(&g, r.witness.as_ref().unwrap()).unwrap().ok);
        }
    }

    #[test]
    fn bnn_arity_limits() {
        assert_eq!(
            exact_bnn(&f("parity:5")),
            Err(Error::ArityTooLarge { arity: 5, max: 4 })
        );
        let r = exact_bnn_with(&f("maj:5"), SearchLimits::max_size(3)).unwrap();
        assert_eq!(r.optimum, Some(2));
        let r = exact_bnn_with(&f("parity:5"), SearchLimits::max_size(2)).unwrap();
        assert_eq!(r.optimum, None);
        assert_eq!(r.exhausted_up_to, 2);
        assert!(exact_bnn_with(&f("parity:6"), SearchLimits::max_size(2)).is_err());
    }

    #[test]
    fn deadline_stops_search() {
        let limits = SearchLimits {
            max_size: Some(10),
            deadline: Some(Instant::now()),
        };
        let r = exact_bnn_with(&f("parity:5"), limits).unwrap();
        assert!(r.timed_out);
        assert_eq!(r.optimum, None);
    }

    #[test]
    fn knn_search() {
        // k = 1 reduces to the forced-label search
        for spec in ["parity:2", "maj:3", "table:2:8", "table:2:e"] {
            let g = f(spec);
            let a = exact_bnn(&g).unwrap();
            let b = exact_knn_bnn(&g, 1, 16).unwrap();
            assert_eq!(a.optimum, b.optimum, "{spec}");
            assert_eq!(a.witness, b.witness, "{spec}");
        }
        let one = BooleanFunction::constant(2, true).unwrap();
        assert_eq!(exact_knn_bnn(&one, 1, 1).unwrap().optimum, Some(1));
        assert_eq!(exact_knn_bnn(&one, 0, 1), Err(Error::KZero));
    }

    #[test]
    fn knn_parity2_k3() {
        // the forced labeling of all four points fails for k = 3
        let g = f("parity:2");
        let all = NNRepresentation::from_boolean(2, &[1, 2], &[0, 3]).unwrap();
        assert!(!is_knn_representation(&g, &all, 3));
        let r = exact_knn_bnn(&g, 3, 8).unwrap();
        if let Some(w) = &r.witness {
            assert!(is_knn_representation(&g, w, 3));
        } else {
            assert!(r.is_infeasible());
        }
    }

    #[test]
    fn grid_bounds() {
        let r = grid_nn_upper(&f("parity:3"), &default_grid(3), 8).unwrap();
        assert_eq!(r.optimum, Some(4));
        assert_eq!(r.exhausted_up_to, 3);
        let r = grid_nn_upper(&f("maj:3"), &default_grid(3), 8).unwrap();
        assert_eq!(r.optimum, Some(2));
        let boolean: Vec<_> = (0..4).map(|x| RationalPoint::from_index(x, 2)).collect();
        let r = grid_nn_upper(&f("table:2:8"), &boolean, 4).unwrap();
        assert_eq!(r.optimum, Some(3));
        assert_eq!(grid_nn_upper(&f("maj:3"), &[], 2), Err(Error::EmptyGrid));
    }

    #[test]
    fn grid_with_threshold_prototypes_beats_boolean() {
        let and2 = f("table:2:8");
        let mut grid = default_grid(2);
        let rep = build_threshold(&ThresholdSpec::new(vec![1, 1], 2).unwrap());
        grid.extend(rep.prototypes().map(|(p, _)| p.clone()));
        let r = grid_nn_upper(&and2, &grid, 4).unwrap();
        assert_eq!(r.optimum, Some(2));
        assert!(verify_nn(&and2, r.witness.as_ref().unwrap()).unwrap().ok);
    }

    #[test]
    fn default_grid_contents() {
        let g = default_grid(3);
        assert_eq!(g.len(), 10);
        assert!(g.contains(&RationalPoint::new(vec![rat(1, 3); 3])));
    }
}
