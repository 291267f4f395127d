use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{exp_add, total_degree, Exp, Poly, Rat};

use super::leibniz_splits;

/// Scalar polydifferential operator `A^⊗k → A`:
/// `(a_1, …, a_k) ↦ Σ f · ∂^{E_1}a_1 ⋯ ∂^{E_k}a_k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingOp {
    nvars: usize,
    arity: usize,
    terms: BTreeMap<Vec<Exp>, Poly>,
}

/// A single-argument scalar operator.
pub type ScalarDiffOp = RingOp;

impl RingOp {
    pub fn zero(nvars: usize, arity: usize) -> Self {
        RingOp {
            nvars,
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// `(a, b) ↦ ab`.
    pub fn mult(nvars: usize) -> Self {
        let mut r = Self::zero(nvars, 2);
        r.add_term(vec![vec![0; nvars]; 2], Poly::one(nvars));
        r
    }

    /// `a ↦ f·a`.
    pub fn multiply_by(f: &Poly) -> Self {
        let n = f.nvars();
        let mut r = Self::zero(n, 1);
        r.add_term(vec![vec![0; n]], f.clone());
        r
    }

    /// `a ↦ ∂^d a`.
    pub fn partial(nvars: usize, d: Exp) -> Self {
        let mut r = Self::zero(nvars, 1);
        r.add_term(vec![d], Poly::one(nvars));
        r
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Exp>, &Poly)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, ds: Vec<Exp>, f: Poly) {
        assert_eq!(ds.len(), self.arity);
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&ds) {
            Some(g) => {
                *g += &f;
                if g.is_zero() {
                    self.terms.remove(&ds);
                }
            }
            None => {
                self.terms.insert(ds, f);
            }
        }
    }

    pub fn add(&self, o: &RingOp) -> RingOp {
        let mut r = self.clone();
        for (ds, f) in &o.terms {
            r.add_term(ds.clone(), f.clone());
        }
        r
    }

    pub fn sub(&self, o: &RingOp) -> RingOp {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> RingOp {
        let mut r = Self::zero(self.nvars, self.arity);
        if c.is_zero() {
            return r;
        }
        for (ds, f) in &self.terms {
            r.terms.insert(ds.clone(), f.scale(c));
        }
        r
    }

    /// Maximal total differential order of any term.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .map(|ds| ds.iter().map(|d| total_degree(d)).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn apply(&self, args: &[Poly]) -> Result<Poly> {
        if args.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: args.len(),
            });
        }
        let mut acc = Poly::zero(self.nvars);
        for (ds, f) in &self.terms {
            let mut prod = f.clone();
            for (d, a) in ds.iter().zip(args) {
                if prod.is_zero() {
                    break;
                }
                prod = &prod * &a.diff_multi(d);
            }
            acc += &prod;
        }
        Ok(acc)
    }

    /// `self(a_1, …, inner(a_j, …, a_{j+m−1}), …)`, slot `j` zero-based.
    pub fn insert(&self, j: usize, inner: &RingOp) -> RingOp {
        assert!(j < self.arity);
        let m = inner.arity;
        let mut r = Self::zero(self.nvars, self.arity + m - 1);
        for (ds, f) in &self.terms {
            for (bs, k) in leibniz_splits(&ds[j], m + 1) {
                for (es, g) in &inner.terms {
                    let coef = &(f * &g.diff_multi(&bs[0])).scale(&k);
                    if coef.is_zero() {
                        continue;
                    }
                    let mut nd: Vec<Exp> = ds[..j].to_vec();
                    for i in 0..m {
                        nd.push(exp_add(&es[i], &bs[i + 1]));
                    }
                    nd.extend_from_slice(&ds[j + 1..]);
                    r.add_term(nd, coef.clone());
                }
            }
        }
        r
    }

    /// `(a_0, …, a_k) ↦ a_0 · self(a_1, …, a_k)`.
    pub fn left_mult(&self) -> RingOp {
        let mut r = Self::zero(self.nvars, self.arity + 1);
        for (ds, f) in &self.terms {
            let mut nd = vec![vec![0; self.nvars]];
            nd.extend(ds.iter().cloned());
            r.add_term(nd, f.clone());
        }
        r
    }

    /// `(a_1, …, a_{k+1}) ↦ self(a_1, …, a_k) · a_{k+1}`.
    pub fn right_mult(&self) -> RingOp {
        let mut r = Self::zero(self.nvars, self.arity + 1);
        for (ds, f) in &self.terms {
            let mut nd = ds.clone();
            nd.push(vec![0; self.nvars]);
            r.add_term(nd, f.clone());
        }
        r
    }

    /// Hochschild differential of a scalar cochain.
    pub fn d_hoch(&self) -> RingOp {
        let k = self.arity;
        let mult = RingOp::mult(self.nvars);
        let mut r = self.left_mult();
        for i in 0..k {
            let t = self.insert(i, &mult);
            r = if i % 2 == 0 { r.sub(&t) } else { r.add(&t) };
        }
        let last = self.right_mult();
        if (k + 1).is_multiple_of(2) {
            r.add(&last)
        } else {
            r.sub(&last)
        }
    }

    /// `self(a_{σ(1)}, …, a_{σ(k)})`.
    pub fn permute(&self, sigma: &[usize]) -> RingOp {
        assert_eq!(sigma.len(), self.arity);
        let mut r = Self::zero(self.nvars, self.arity);
        for (ds, f) in &self.terms {
            let mut nd = vec![Vec::new(); self.arity];
            for (i, d) in ds.iter().enumerate() {
                nd[sigma[i]] = d.clone();
            }
            r.add_term(nd, f.clone());
        }
        r
    }

    /// Fixes argument `j` to `f`.
    pub fn fix_arg(&self, j: usize, f: &Poly) -> RingOp {
        let mut r = Self::zero(self.nvars, self.arity - 1);
        for (ds, g) in &self.terms {
            let c = g * &f.diff_multi(&ds[j]);
            let mut nd = ds.clone();
            nd.remove(j);
            r.add_term(nd, c);
        }
        r
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(ds, f)| {
                let mut s = f.fmt_with(names);
                for (i, d) in ds.iter().enumerate() {
                    if d.iter().any(|&x| x > 0) {
                        s.push_str(&format!(" | d(a{})={}", i + 1, fmt_exp(d)));
                    }
                }
                s
            })
            .collect();
        parts.join("; ")
    }
}

pub(crate) fn fmt_exp(d: &[u32]) -> String {
    let v: Vec<String> = d.iter().map(|x| x.to_string()).collect();
    format!("({})", v.join(","))
}

impl std::fmt::Debug for RingOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, unit_exp};

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn multiplication_is_a_cocycle() {
        assert!(RingOp::mult(2).d_hoch().is_zero());
    }

    #[test]
    fn d_squared_vanishes_on_a_bidifferential_operator() {
        let mut b = RingOp::zero(2, 2);
        b.add_term(vec![unit_exp(2, 0), unit_exp(2, 1)], x(0).pow(2));
        b.add_term(vec![vec![2, 0], vec![0, 0]], x(1));
        assert!(b.d_hoch().d_hoch().is_zero());
    }

    #[test]
    fn insertion_matches_nested_evaluation() {
        let mut outer = RingOp::zero(2, 2);
        outer.add_term(vec![vec![1, 1], vec![0, 0]], x(0));
        let mut inner = RingOp::zero(2, 2);
        inner.add_term(vec![unit_exp(2, 0), vec![0, 0]], x(1));
        let comp = outer.insert(0, &inner);
        let a = &x(0).pow(3) + &x(1);
        let b = &x(0) * &x(1).pow(2);
        let c = &x(1).pow(2) + &Poly::constant(2, rat(2));
        let nested = outer
            .apply(&[inner.apply(&[a.clone(), b.clone()]).unwrap(), c.clone()])
            .unwrap();
        assert_eq!(comp.apply(&[a, b, c]).unwrap(), nested);
    }
}
