//! Sparse exact linear algebra over the rationals.
//!
//! Equations are added row by row and kept in reduced row echelon form.
//! Pivots are taken at the smallest column index, so when a system is
//! underdetermined the particular solution returned by [`Echelon::solve`]
//! is supported on the earliest columns and every free column is zero.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_traits::{One, Zero};

use crate::poly::Rat;

pub type SparseRow = BTreeMap<usize, Rat>;

#[derive(Debug, Clone, Default)]
pub struct Echelon {
    ncols: usize,
    /// pivot column -> (row, rhs)
    pivots: BTreeMap<usize, (SparseRow, Rat)>,
    inconsistent: bool,
}

fn axpy(row: &mut SparseRow, k: &Rat, other: &SparseRow) {
    for (c, v) in other {
        let e = row.entry(*c).or_insert_with(Rat::zero);
        *e += k * v;
        if e.is_zero() {
            row.remove(c);
        }
    }
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            ..Default::default()
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Adds the equation `row · x = rhs`. Returns whether the rank grew.
    pub fn push(&mut self, mut row: SparseRow, mut rhs: Rat) -> bool {
        row.retain(|_, v| !v.is_zero());
        // reduce against existing pivots
        let cols: Vec<usize> = row.keys().copied().collect();
        for c in cols {
            if let Some(v) = row.get(&c).cloned() {
                if let Some((prow, prhs)) = self.pivots.get(&c) {
                    let k = -v;
                    axpy(&mut row, &k, prow);
                    rhs += &k * prhs;
                }
            }
        }
        let Some((&pc, pv)) = row.iter().next() else {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return false;
        };
        let inv = Rat::one() / pv;
        for v in row.values_mut() {
            *v *= &inv;
        }
        rhs *= &inv;
        for (prow, prhs) in self.pivots.values_mut() {
            if let Some(v) = prow.get(&pc).cloned() {
                let k = -v;
                axpy(prow, &k, &row);
                *prhs += &k * &rhs;
            }
        }
        self.pivots.insert(pc, (row, rhs));
        true
    }

    /// Particular solution with all free variables zero.
    pub fn solve(&self) -> Option<Vec<Rat>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![Rat::zero(); self.ncols];
        for (c, (_, rhs)) in &self.pivots {
            x[*c] = rhs.clone();
        }
        Some(x)
    }

    /// Basis of the null space of the homogeneous system.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.ncols];
            v[f] = Rat::one();
            for (c, (row, _)) in &self.pivots {
                if let Some(k) = row.get(&f) {
                    v[*c] = -k.clone();
                }
            }
            out.push(v);
        }
        out
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }
}

/// Interns arbitrary keys as dense row indices.
#[derive(Debug, Clone)]
pub struct KeyIndex<K: Hash + Eq + Clone> {
    map: HashMap<K, usize>,
}

impl<K: Hash + Eq + Clone> Default for KeyIndex<K> {
    fn default() -> Self {
        KeyIndex {
            map: HashMap::new(),
        }
    }
}

impl<K: Hash + Eq + Clone> KeyIndex<K> {
    pub fn index(&mut self, k: &K) -> usize {
        let n = self.map.len();
        *self.map.entry(k.clone()).or_insert(n)
    }

    pub fn get(&self, k: &K) -> Option<usize> {
        self.map.get(k).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Solves `Σ x_j columns[j] = target` where vectors are sparse maps keyed by `K`.
pub fn solve_columns<K: Hash + Eq + Clone + Ord>(
    columns: &[BTreeMap<K, Rat>],
    target: &BTreeMap<K, Rat>,
) -> (Option<Vec<Rat>>, usize) {
    let mut rows: BTreeMap<K, SparseRow> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (k, v) in col {
            if !v.is_zero() {
                rows.entry(k.clone()).or_default().insert(j, v.clone());
            }
        }
    }
    let mut ech = Echelon::new(columns.len());
    for (k, row) in &rows {
        let rhs = target.get(k).cloned().unwrap_or_else(Rat::zero);
        ech.push(row.clone(), rhs);
    }
    for (k, v) in target {
        if !rows.contains_key(k) && !v.is_zero() {
            return (None, ech.nullity());
        }
    }
    (ech.solve(), ech.nullity())
}

/// Rank of a family of sparse vectors.
pub fn rank_of<K: Hash + Eq + Clone + Ord>(vectors: &[BTreeMap<K, Rat>]) -> usize {
    let mut idx = KeyIndex::default();
    let mut ech = Echelon::new(0);
    let mut rows = Vec::new();
    for v in vectors {
        let row: SparseRow = v.iter().map(|(k, x)| (idx.index(k), x.clone())).collect();
        rows.push(row);
    }
    ech.ncols = idx.len();
    for r in rows {
        ech.push(r, Rat::zero());
    }
    ech.rank()
}

/// Kernel basis of the map sending the j-th unit vector to `columns[j]`.
pub fn kernel_of<K: Hash + Eq + Clone + Ord>(columns: &[BTreeMap<K, Rat>]) -> Vec<Vec<Rat>> {
    let mut rows: BTreeMap<K, SparseRow> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (k, v) in col {
            if !v.is_zero() {
                rows.entry(k.clone()).or_default().insert(j, v.clone());
            }
        }
    }
    let mut ech = Echelon::new(columns.len());
    for row in rows.into_values() {
        ech.push(row, Rat::zero());
    }
    ech.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn col(v: &[(u32, i64)]) -> BTreeMap<u32, Rat> {
        v.iter().map(|(k, x)| (*k, rat(*x))).collect()
    }

    #[test]
    fn solves_and_prefers_early_columns() {
        // x0 + x1 = 2 ; columns 0 and 1 identical
        let cols = vec![col(&[(0, 1)]), col(&[(0, 1)])];
        let (sol, nullity) = solve_columns(&cols, &col(&[(0, 2)]));
        assert_eq!(sol.unwrap(), vec![rat(2), rat(0)]);
        assert_eq!(nullity, 1);
    }

    #[test]
    fn detects_inconsistency() {
        let cols = vec![col(&[(0, 1), (1, 1)])];
        let (sol, _) = solve_columns(&cols, &col(&[(0, 1)]));
        assert!(sol.is_none());
        let (sol, _) = solve_columns(&cols, &col(&[(7, 1)]));
        assert!(sol.is_none());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let cols = vec![
            col(&[(0, 1), (1, 2)]),
            col(&[(0, 2), (1, 4)]),
            col(&[(1, 1)]),
        ];
        let ker = kernel_of(&cols);
        assert_eq!(ker.len(), 1);
        for v in &ker {
            for row in 0..2u32 {
                let mut s = Rat::zero();
                for (j, c) in cols.iter().enumerate() {
                    if let Some(x) = c.get(&row) {
                        s += x * &v[j];
                    }
                }
                assert!(s.is_zero());
            }
        }
        assert_eq!(rank_of(&cols), 2);
    }
}
