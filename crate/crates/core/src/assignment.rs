//! Maximum-weight selections of index tuples that are injective in every
//! coordinate.
//!
//! For two coordinates this is rectangular maximum-weight matching, solved by
//! the Hungarian method. For three or more it is the axial multi-index
//! assignment problem (NP-hard), solved exactly by branch and bound behind a
//! search-size gate, or approximately by greedy construction plus 2-swap
//! local search.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Leaf-count limit for the exact axial solver.
pub const EXACT_LEAF_LIMIT: f64 = 1e7;

/// Dense m-way array of nonnegative weights, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTensor<T: Real> {
    shape: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> WeightTensor<T> {
    /// Values in `[−1e-12, 0)` are clamped to zero; anything more negative is rejected.
    pub fn new(shape: Vec<usize>, mut values: Vec<T>) -> Result<Self> {
        if shape.len() < 2 || shape.contains(&0) {
            return Err(Error::Shape(format!(
                "weight tensor needs arity >= 2 and nonempty axes, got {shape:?}"
            )));
        }
        let count: usize = shape.iter().product();
        if values.len() != count {
            return Err(Error::Shape(format!(
                "{} values for shape {shape:?} ({count} expected)",
                values.len()
            )));
        }
        let clamp = T::detect_slack();
        for v in &mut values {
            if !v.is_finite() || *v < -clamp {
                return Err(Error::NegativeWeight(v.as_f64()));
            }
            if *v < T::zero() {
                *v = T::zero();
            }
        }
        Ok(Self { shape, values })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged weight matrix".into()));
        }
        Self::new(vec![rows.len(), cols], rows.concat())
    }

    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Number of tuples in a complete assignment, `min_i s_i`.
    pub fn assignment_size(&self) -> usize {
        *self.shape.iter().min().expect("arity >= 2")
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        idx.iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &s)| acc * s + i)
    }

    pub fn get(&self, idx: &[usize]) -> T {
        self.values[self.flat_index(idx)]
    }

    fn unflatten(&self, mut flat: usize, out: &mut [usize]) {
        for k in (0..self.shape.len()).rev() {
            out[k] = flat % self.shape[k];
            flat /= self.shape[k];
        }
    }

    /// Relabels every axis: entry `idx` of the result is entry `(perms[k][idx_k])_k` of `self`.
    pub fn relabel(&self, perms: &[Vec<usize>]) -> Self {
        assert_eq!(perms.len(), self.arity());
        let mut idx = vec![0; self.arity()];
        let mut src = vec![0; self.arity()];
        let values = (0..self.values.len())
            .map(|flat| {
                self.unflatten(flat, &mut idx);
                for (k, &i) in idx.iter().enumerate() {
                    src[k] = perms[k][i];
                }
                self.get(&src)
            })
            .collect();
        Self {
            shape: self.shape.clone(),
            values,
        }
    }
}

/// Selected tuples, sorted lexicographically, with the sum of their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment<T: Real> {
    rows: Vec<Vec<usize>>,
    value: T,
}

impl<T: Real> Assignment<T> {
    fn from_rows(w: &WeightTensor<T>, mut rows: Vec<Vec<usize>>) -> Self {
        rows.sort();
        let value = rows.iter().fold(T::zero(), |acc, r| acc + w.get(r));
        Self { rows, value }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn value(&self) -> T {
        self.value
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// True when every coordinate's selected indices are pairwise distinct and in range.
    pub fn is_injective(&self, shape: &[usize]) -> bool {
        (0..shape.len()).all(|k| {
            let mut seen = vec![false; shape[k]];
            self.rows.iter().all(|r| {
                r.len() == shape.len()
                    && r[k] < shape[k]
                    && !std::mem::replace(&mut seen[r[k]], true)
            })
        })
    }
}

/// Minimum-cost assignment of all `n` rows into `m ≥ n` columns
/// (potentials and shortest augmenting paths). Returns the column of each row.
fn hungarian_min<T: Real>(cost: impl Fn(usize, usize) -> T, n: usize, m: usize) -> Vec<usize> {
    debug_assert!(n <= m);
    let inf = T::infinity();
    // 1-based, column 0 is the virtual source
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] = u[p[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0; n];
    for j in 1..=m {
        if p[j] != 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    row_to_col
}

/// Optimal value of a full matching of the smaller side of the submatrix
/// restricted to the given rows and columns.
fn best_matching_value<T: Real>(w: &WeightTensor<T>, rows: &[usize], cols: &[usize]) -> T {
    if rows.is_empty() || cols.is_empty() {
        return T::zero();
    }
    let s2 = w.shape[1];
    let at = |r: usize, c: usize| w.values[r * s2 + c];
    if rows.len() <= cols.len() {
        let pick = hungarian_min(|i, j| -at(rows[i], cols[j]), rows.len(), cols.len());
        pick.iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, &j)| acc + at(rows[i], cols[j]))
    } else {
        let pick = hungarian_min(|i, j| -at(rows[j], cols[i]), cols.len(), rows.len());
        pick.iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, &j)| acc + at(rows[j], cols[i]))
    }
}

/// Rectangular maximum-weight matching of cardinality `min(s₁, s₂)`.
///
/// Among optimal matchings the lexicographically smallest sorted pair list
/// is returned: pairs are fixed greedily in lexicographic order whenever an
/// optimal completion still exists.
pub fn max_weight_matching<T: Real>(w: &WeightTensor<T>) -> Result<Assignment<T>> {
    if w.arity() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "matching needs a 2-way weight tensor, got arity {}",
            w.arity()
        )));
    }
    let (s1, s2) = (w.shape[0], w.shape[1]);
    let d = s1.min(s2);
    let all_rows: Vec<usize> = (0..s1).collect();
    let all_cols: Vec<usize> = (0..s2).collect();
    let optimum = best_matching_value(w, &all_rows, &all_cols);
    let tol = T::epsilon() * T::lit(1024.0) * optimum.abs().max(T::one());

    let mut row_used = vec![false; s1];
    let mut col_used = vec![false; s2];
    let mut fixed: Vec<Vec<usize>> = Vec::with_capacity(d);
    let mut fixed_sum = T::zero();
    'outer: for i in 0..s1 {
        for j in 0..s2 {
            if fixed.len() == d {
                break 'outer;
            }
            if row_used[i] || col_used[j] {
                continue;
            }
            let rows: Vec<usize> = (0..s1).filter(|&r| !row_used[r] && r != i).collect();
            let cols: Vec<usize> = (0..s2).filter(|&c| !col_used[c] && c != j).collect();
            let total = fixed_sum + w.values[i * s2 + j] + best_matching_value(w, &rows, &cols);
            if total >= optimum - tol {
                row_used[i] = true;
                col_used[j] = true;
                fixed_sum = fixed_sum + w.values[i * s2 + j];
                fixed.push(vec![i, j]);
            }
        }
    }
    debug_assert_eq!(fixed.len(), d);
    Ok(Assignment::from_rows(w, fixed))
}

fn falling_factorial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64)
}

/// The coordinate of smallest extent (first on ties); its order is fixed by symmetry.
fn pivot_axis(shape: &[usize]) -> usize {
    let d = *shape.iter().min().expect("nonempty shape");
    shape.iter().position(|&s| s == d).expect("minimum exists")
}

/// Number of leaves the exact solver would visit: injections of the pivot
/// order into every other coordinate.
pub fn exact_search_size(shape: &[usize]) -> f64 {
    let pivot = pivot_axis(shape);
    let d = shape[pivot];
    shape
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != pivot)
        .map(|(_, &s)| falling_factorial(s, d))
        .product()
}

struct Search<'a, T: Real> {
    w: &'a WeightTensor<T>,
    pivot: usize,
    d: usize,
    /// Upper bound on what pivot slots `j..d` can still add.
    suffix_bound: Vec<T>,
    used: Vec<Vec<bool>>,
    current: Vec<Vec<usize>>,
    best: T,
    best_rows: Vec<Vec<usize>>,
}

impl<T: Real> Search<'_, T> {
    fn slot(&mut self, j: usize, acc: T) {
        if j == self.d {
            if acc > self.best {
                self.best = acc;
                self.best_rows = self.current.clone();
            }
            return;
        }
        if acc + self.suffix_bound[j] <= self.best {
            return;
        }
        let mut tuple = vec![0; self.w.arity()];
        tuple[self.pivot] = j;
        self.axis(j, 0, &mut tuple, acc);
    }

    fn axis(&mut self, j: usize, k: usize, tuple: &mut Vec<usize>, acc: T) {
        if k == self.w.arity() {
            let v = self.w.get(tuple);
            self.current.push(tuple.clone());
            self.slot(j + 1, acc + v);
            self.current.pop();
            return;
        }
        if k == self.pivot {
            return self.axis(j, k + 1, tuple, acc);
        }
        for i in 0..self.w.shape[k] {
            if self.used[k][i] {
                continue;
            }
            self.used[k][i] = true;
            tuple[k] = i;
            self.axis(j, k + 1, tuple, acc);
            self.used[k][i] = false;
        }
    }
}

/// Exact axial assignment by depth-first branch and bound.
///
/// The pivot coordinate (smallest extent) is fixed to `0..d`; the running best
/// is the lower bound and the sum of per-slot maxima the upper bound. The
/// first optimum in lexicographic search order is returned. Two-axis tensors
/// go to the matching solver instead.
pub fn max_axial_assignment_exact<T: Real>(w: &WeightTensor<T>) -> Result<Assignment<T>> {
    if w.arity() == 2 {
        return max_weight_matching(w);
    }
    let nodes = exact_search_size(&w.shape);
    if nodes > EXACT_LEAF_LIMIT {
        return Err(Error::SearchSpaceTooLarge {
            nodes,
            limit: EXACT_LEAF_LIMIT,
        });
    }
    let pivot = pivot_axis(&w.shape);
    let d = w.shape[pivot];
    let mut slot_max = vec![T::zero(); d];
    let mut idx = vec![0; w.arity()];
    for (flat, &v) in w.values.iter().enumerate() {
        w.unflatten(flat, &mut idx);
        let j = idx[pivot];
        slot_max[j] = slot_max[j].max(v);
    }
    let mut suffix_bound = vec![T::zero(); d + 1];
    for j in (0..d).rev() {
        suffix_bound[j] = suffix_bound[j + 1] + slot_max[j];
    }
    let mut search = Search {
        w,
        pivot,
        d,
        suffix_bound,
        used: w.shape.iter().map(|&s| vec![false; s]).collect(),
        current: Vec::with_capacity(d),
        best: -T::one(),
        best_rows: Vec::new(),
    };
    search.slot(0, T::zero());
    Ok(Assignment::from_rows(w, search.best_rows))
}

/// Greedy construction: walk `order` (flat indices) and keep every tuple whose
/// indices are all unused, until `d` tuples are taken.
fn greedy<T: Real>(w: &WeightTensor<T>, order: &[usize]) -> Vec<Vec<usize>> {
    let d = w.assignment_size();
    let mut used: Vec<Vec<bool>> = w.shape.iter().map(|&s| vec![false; s]).collect();
    let mut rows = Vec::with_capacity(d);
    let mut idx = vec![0; w.arity()];
    for &flat in order {
        w.unflatten(flat, &mut idx);
        if idx.iter().enumerate().all(|(k, &i)| !used[k][i]) {
            for (k, &i) in idx.iter().enumerate() {
                used[k][i] = true;
            }
            rows.push(idx.clone());
            if rows.len() == d {
                break;
            }
        }
    }
    rows
}

/// Greedy over pivot slots in the given order, each slot taking its heaviest
/// tuple whose other indices are unused.
fn greedy_by_slot<T: Real>(
    w: &WeightTensor<T>,
    by_weight: &[usize],
    pivot: usize,
    slots: &[usize],
) -> Vec<Vec<usize>> {
    let mut used: Vec<Vec<bool>> = w.shape.iter().map(|&s| vec![false; s]).collect();
    let mut rows = Vec::with_capacity(slots.len());
    let mut idx = vec![0; w.arity()];
    for &j in slots {
        for &flat in by_weight {
            w.unflatten(flat, &mut idx);
            if idx[pivot] == j && idx.iter().enumerate().all(|(k, &i)| !used[k][i]) {
                for (k, &i) in idx.iter().enumerate() {
                    used[k][i] = true;
                }
                rows.push(idx.clone());
                break;
            }
        }
    }
    rows
}

/// First-improvement local search over per-coordinate 2-swaps between
/// selected tuples and swaps of a selected index with an unused one.
fn local_search<T: Real>(w: &WeightTensor<T>, rows: &mut [Vec<usize>]) {
    let scale = rows
        .iter()
        .fold(T::zero(), |acc, r| acc + w.get(r))
        .max(T::one());
    let eps = T::epsilon() * T::lit(16.0) * scale;
    loop {
        let mut improved = false;
        for k in 0..w.arity() {
            for a in 0..rows.len() {
                for b in (a + 1)..rows.len() {
                    let before = w.get(&rows[a]) + w.get(&rows[b]);
                    let (ia, ib) = (rows[a][k], rows[b][k]);
                    rows[a][k] = ib;
                    rows[b][k] = ia;
                    let after = w.get(&rows[a]) + w.get(&rows[b]);
                    if after > before + eps {
                        improved = true;
                    } else {
                        rows[a][k] = ia;
                        rows[b][k] = ib;
                    }
                }
            }
            if w.shape[k] > rows.len() {
                let mut in_use = vec![false; w.shape[k]];
                for r in rows.iter() {
                    in_use[r[k]] = true;
                }
                for r in rows.iter_mut() {
                    for free in 0..w.shape[k] {
                        if in_use[free] {
                            continue;
                        }
                        let before = w.get(r);
                        let old = r[k];
                        r[k] = free;
                        if w.get(r) > before + eps {
                            in_use[old] = false;
                            in_use[free] = true;
                            improved = true;
                        } else {
                            r[k] = old;
                        }
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}

/// Heuristic axial assignment: a valid assignment whose value is a lower
/// bound on the optimum.
///
/// Restart 0 is the global greedy; later restarts fill pivot slots in a
/// seeded shuffled order. Every start is polished by 2-swap local search and
/// the best result wins (lexicographically smallest rows on equal value).
pub fn max_axial_assignment_heuristic<T: Real>(
    w: &WeightTensor<T>,
    restarts: usize,
    seed: u64,
) -> Result<Assignment<T>> {
    if restarts == 0 {
        return Err(Error::ParameterOutOfRange("restarts must be >= 1".into()));
    }
    let mut by_weight: Vec<usize> = (0..w.values.len()).collect();
    by_weight.sort_by(|&x, &y| {
        w.values[y]
            .partial_cmp(&w.values[x])
            .expect("finite weights")
            .then(x.cmp(&y))
    });
    let pivot = pivot_axis(&w.shape);
    let mut slots: Vec<usize> = (0..w.shape[pivot]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Assignment<T>> = None;
    for r in 0..restarts {
        let mut rows = if r == 0 {
            greedy(w, &by_weight)
        } else {
            slots.shuffle(&mut rng);
            greedy_by_slot(w, &by_weight, pivot, &slots)
        };
        local_search(w, &mut rows);
        let cand = Assignment::from_rows(w, rows);
        best = match best {
            Some(b) if b.value > cand.value || (b.value == cand.value && b.rows <= cand.rows) => {
                Some(b)
            }
            _ => Some(cand),
        };
    }
    Ok(best.expect("restarts >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> WeightTensor<f64> {
        WeightTensor::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_weights() {
        let a = max_weight_matching(&mat(&[&[1., 0.], &[0., 1.]])).unwrap();
        assert_eq!(a.value(), 2.0);
        assert_eq!(a.rows(), &[vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let a = max_weight_matching(&mat(&[&[1., 2.], &[3., 4.]])).unwrap();
        assert_eq!(a.value(), 5.0);
        assert_eq!(a.rows(), &[vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn single_row_picks_max() {
        let a = max_weight_matching(&mat(&[&[1., 5., 2.]])).unwrap();
        assert_eq!(a.value(), 5.0);
        assert_eq!(a.rows(), &[vec![0, 1]]);
        let b = max_weight_matching(&mat(&[&[1.], &[5.], &[2.]])).unwrap();
        assert_eq!(b.rows(), &[vec![1, 0]]);
    }

    #[test]
    fn matching_rejects_higher_arity() {
        let w = WeightTensor::new(vec![2, 2, 2], vec![0.0; 8]).unwrap();
        assert!(max_weight_matching(&w).is_err());
    }

    #[test]
    fn weight_clamping() {
        let w = WeightTensor::new(vec![1, 2], vec![-1e-13, 1.0]).unwrap();
        assert_eq!(w.values()[0], 0.0);
        assert_eq!(
            WeightTensor::new(vec![1, 2], vec![-1e-9, 1.0]),
            Err(Error::NegativeWeight(-1e-9))
        );
        assert!(WeightTensor::new(vec![2, 2], vec![0.0; 3]).is_err());
    }

    #[test]
    fn uniform_three_way() {
        let w = WeightTensor::new(vec![3, 3, 3], vec![0.5f64; 27]).unwrap();
        let a = max_axial_assignment_exact(&w).unwrap();
        assert!((a.value() - 1.5).abs() < 1e-15);
        assert_eq!(a.rows(), &[vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]]);
        assert!(a.is_injective(w.shape()));
    }

    #[test]
    fn permutation_tensor() {
        let mut v = vec![0.0; 64];
        for i in 0..4 {
            v[i * 16 + i * 4 + i] = 1.0;
        }
        let w = WeightTensor::new(vec![4, 4, 4], v).unwrap();
        assert_eq!(max_axial_assignment_exact(&w).unwrap().value(), 4.0);
        assert_eq!(
            max_axial_assignment_heuristic(&w, 1, 0).unwrap().value(),
            4.0
        );
    }

    #[test]
    fn exact_gate() {
        let w = WeightTensor::new(vec![9, 9, 9], vec![0.0; 729]).unwrap();
        match max_axial_assignment_exact(&w) {
            Err(Error::SearchSpaceTooLarge { nodes, .. }) => {
                assert_eq!(nodes, 362880.0 * 362880.0)
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(exact_search_size(&[4, 4, 4]), 576.0);
        assert_eq!(exact_search_size(&[4, 9]), 3024.0);
    }

    #[test]
    fn heuristic_requires_a_restart() {
        let w = mat(&[&[1.0]]);
        assert!(max_axial_assignment_heuristic(&w, 0, 0).is_err());
    }
}
