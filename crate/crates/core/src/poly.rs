//! Exact multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors. The derived
//! ordering on `Vec<u32>` is lexicographic with the first declared variable
//! largest, which is the global monomial order used by [`crate::ideal`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type Exp = Vec<u32>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rat::from_integer(acc)
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rat::from_integer(acc)
}

/// Falling factorial `n (n-1) ... (n-k+1)`, the coefficient of `d^k x^n`.
pub fn falling(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
    }
    Rat::from_integer(acc)
}

pub fn exp_add(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a - b` when `b` divides `a` componentwise.
pub fn exp_sub(a: &[u32], b: &[u32]) -> Option<Exp> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

pub fn exp_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn exp_lcm(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Unit exponent vector `e_i`.
pub fn unit_exp(nvars: usize, i: usize) -> Exp {
    let mut e = vec![0; nvars];
    e[i] = 1;
    e
}

/// All exponent vectors of total degree `<= max` supported on `support`,
/// in a deterministic order (by degree, then lexicographically descending).
pub fn exps_up_to(nvars: usize, support: &[usize], max: u32) -> Vec<Exp> {
    let mut out = Vec::new();
    for d in 0..=max {
        let mut level = Vec::new();
        fill_exps(support, 0, d, &mut vec![0; nvars], &mut level);
        out.extend(level);
    }
    out
}

fn fill_exps(support: &[usize], pos: usize, remaining: u32, cur: &mut Exp, out: &mut Vec<Exp>) {
    if pos == support.len() {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let v = support[pos];
    for k in (0..=remaining).rev() {
        cur[v] = k;
        fill_exps(support, pos + 1, remaining - k, cur, out);
    }
    cur[v] = 0;
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exp, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, unit_exp(nvars, i), Rat::one())
    }

    pub fn monomial(nvars: usize, exp: Exp, c: Rat) -> Self {
        assert_eq!(exp.len(), nvars, "exponent length must equal nvars");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Exp, Rat)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, e: Exp, c: Rat) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// Leading term under lex order.
    pub fn leading(&self) -> Option<(&Exp, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul_term(&self, e: &[u32], c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(x, k)| (exp_add(x, e), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative in variable `i`.
    pub fn diff(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * rat(e[i] as i64));
            }
        }
        out
    }

    /// `∂^d` for a multi-index `d`.
    pub fn diff_multi(&self, d: &[u32]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if let Some(f) = exp_sub(e, d) {
                let mut k = c.clone();
                for (n, j) in e.iter().zip(d) {
                    if *j > 0 {
                        k *= falling(*n, *j);
                    }
                }
                out.add_term(f, k);
            }
        }
        out
    }

    /// Sets the listed variables to zero.
    pub fn restrict_zero(&self, vars: &[usize]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|&v| e[v] == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e) {
                for _ in 0..*k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes polynomials for every variable.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        let n = subs.first().map(|p| p.nvars).unwrap_or(self.nvars);
        let mut acc = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (s, k) in subs.iter().zip(e) {
                if *k > 0 {
                    t = &t * &s.pow(*k);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Largest variable index appearing with a nonzero exponent.
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| {
                    let name = names
                        .get(i)
                        .cloned()
                        .unwrap_or_else(|| format!("x{}", i + 1));
                    if *k == 1 {
                        name
                    } else {
                        format!("{}^{}", name, k)
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&fmt_rat(&a));
            } else if a.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", fmt_rat(&a), mono.join("*")));
            }
        }
        out
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(exp_add(e1, e2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(3, i)
    }

    #[test]
    fn leibniz_for_second_derivative() {
        let a = &(&x(0) * &x(0)) * &x(1) + x(2);
        let b = &x(0) + &(&x(1) * &x(1));
        let lhs = (&a * &b).diff_multi(&[2, 0, 0]);
        let rhs = &(&a.diff_multi(&[2, 0, 0]) * &b)
            + &(&(&a.diff(0) * &b.diff(0)).scale(&rat(2)) + &(&a * &b.diff_multi(&[2, 0, 0])));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = &x(0) - &x(0);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn lex_leading_term_prefers_first_variable() {
        let p = &x(1).pow(5) + &x(0);
        assert_eq!(p.leading().unwrap().0, &vec![1, 0, 0]);
    }

    #[test]
    fn exps_up_to_counts() {
        assert_eq!(exps_up_to(3, &[0, 1, 2], 2).len(), 10);
        assert_eq!(exps_up_to(4, &[2, 3], 2).len(), 6);
    }

    #[test]
    fn display_is_readable() {
        let names = vec!["q".to_string(), "p".to_string(), "r".to_string()];
        let p = &x(0).scale(&ratio(-7, 2)) + &Poly::constant(3, rat(3));
        assert_eq!(p.fmt_with(&names), "-7/2*q + 3");
    }
}
