//! Curved L∞-algebras: higher Jacobi relations, Maurer–Cartan elements over
//! `k[ε]/ε^{r+1}`, twisting, the interval model `A ⊗ k[t, dt]` and gauge
//! equivalence.
//!
//! Brackets are unshifted: `ℓ_n` is graded antisymmetric of degree `2 − n`.
//! Relations are checked on the suspension, where `L_n(sx_1, …, sx_n) =
//! (−1)^{Σ_i (n−i)|x_i| + n(n−1)/2} s ℓ_n(x_1, …, x_n)` is graded symmetric
//! of degree 1 and `Q² = 0` reads
//! `Σ_{i=0}^{n} Σ_{unshuffles σ} ε(σ) L_{n−i+1}(L_i(sx_σ…), sx_σ…) = 0`.
//! For `n ≤ 2` this gives `ℓ_1ℓ_0 = 0`, `ℓ_1² = ℓ_2(ℓ_0, ·)`, the Leibniz
//! rule and Jacobi, and the Maurer–Cartan equation is `Σ 1/k! ℓ_k(b,…,b) = 0`.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::diffop::{Cochain, SeriesCochain};
use crate::error::{Error, Result};
use crate::hochschild::CurvedDgla;
use crate::linalg::{Echelon, SparseRow};
use crate::parse::parse_poly_at;
use crate::poly::{factorial, fmt_rat, Rat};

/// An L∞-algebra given by evaluation of its brackets.
pub trait LInftyAlgebra {
    type Elem: Clone + Debug + PartialEq;

    /// Brackets of higher arity vanish.
    fn max_arity(&self) -> usize;
    /// Degree of a nonzero homogeneous element.
    fn degree(&self, x: &Self::Elem) -> Option<i32>;
    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn scale(&self, x: &Self::Elem, c: &Rat) -> Self::Elem;
    /// `ℓ_n(args)` with `n = args.len()`.
    fn bracket(&self, args: &[Self::Elem]) -> Result<Self::Elem>;
}

/// `(−1)^{Σ_i (n−i)|x_i| + n(n−1)/2}` as a parity.
pub fn decalage_odd(degrees: &[i32]) -> bool {
    let n = degrees.len() as i64;
    let mut s: i64 = n * (n - 1) / 2;
    for (i, d) in degrees.iter().enumerate() {
        s += (n - 1 - i as i64) * (*d as i64);
    }
    s.rem_euclid(2) == 1
}

/// Koszul parity of reordering suspended elements (degrees `|x| − 1`)
/// into the order `sigma`.
pub fn koszul_odd(degrees: &[i32], sigma: &[usize]) -> bool {
    let mut odd = false;
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            if sigma[a] > sigma[b] {
                let (p, q) = (degrees[sigma[a]] - 1, degrees[sigma[b]] - 1);
                if (p * q).rem_euclid(2) == 1 {
                    odd = !odd;
                }
            }
        }
    }
    odd
}

/// `(i, n−i)`-unshuffles of `0..n`, first `i` entries increasing, the rest increasing.
pub fn unshuffles(n: usize, i: usize) -> Vec<Vec<usize>> {
    fn choose(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            let mut s = cur.clone();
            s.extend((0..n).filter(|x| !cur.contains(x)));
            out.push(s);
            return;
        }
        for x in start..n {
            cur.push(x);
            choose(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    choose(0, n, i, &mut Vec::new(), &mut out);
    out
}

/// The arity-`n` component of `Q²` on homogeneous arguments, unshifted.
pub fn jacobi_residual<L: LInftyAlgebra>(l: &L, xs: &[L::Elem]) -> Result<L::Elem> {
    let n = xs.len();
    let mut acc = l.zero();
    let mut degs = Vec::with_capacity(n);
    for x in xs {
        match l.degree(x) {
            Some(d) => degs.push(d),
            None => return Ok(acc),
        }
    }
    for i in 0..=n {
        let j = n - i + 1;
        if i > l.max_arity() || j > l.max_arity() {
            continue;
        }
        for sigma in unshuffles(n, i) {
            let inner: Vec<L::Elem> = sigma[..i].iter().map(|&s| xs[s].clone()).collect();
            let z = l.bracket(&inner)?;
            if l.is_zero(&z) {
                continue;
            }
            let inner_degs: Vec<i32> = sigma[..i].iter().map(|&s| degs[s]).collect();
            let zdeg = inner_degs.iter().sum::<i32>() + 2 - i as i32;
            let mut outer = vec![z];
            let mut outer_degs = vec![zdeg];
            for &s in &sigma[i..] {
                outer.push(xs[s].clone());
                outer_degs.push(degs[s]);
            }
            let v = l.bracket(&outer)?;
            if l.is_zero(&v) {
                continue;
            }
            let odd =
                koszul_odd(&degs, &sigma) ^ decalage_odd(&inner_degs) ^ decalage_odd(&outer_degs);
            acc = l.add(&acc, &if odd { l.scale(&v, &-Rat::one()) } else { v });
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport<E> {
    pub holds: bool,
    /// Indices into the test elements and the nonzero relation.
    pub witness: Option<(Vec<usize>, E)>,
}

/// Checks the higher Jacobi relations on all multisets of the test
/// elements of size `≤ up_to`.
pub fn jacobi_check<L: LInftyAlgebra>(
    l: &L,
    tests: &[L::Elem],
    up_to: usize,
) -> Result<JacobiReport<L::Elem>> {
    for n in 0..=up_to {
        for word in multisets(tests.len(), n) {
            let xs: Vec<L::Elem> = word.iter().map(|&i| tests[i].clone()).collect();
            let r = jacobi_residual(l, &xs)?;
            if !l.is_zero(&r) {
                return Ok(JacobiReport {
                    holds: false,
                    witness: Some((word, r)),
                });
            }
        }
    }
    Ok(JacobiReport {
        holds: true,
        witness: None,
    })
}

/// Nondecreasing words of length `n` over `0..m`.
pub fn multisets(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in start..m {
            cur.push(x);
            go(x, m, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, n, &mut Vec::new(), &mut out);
    out
}

/// First adjacent transposition of homogeneous test elements, arity `2..=up_to`,
/// where `ℓ(…x,y…) ≠ −(−1)^{|x||y|} ℓ(…y,x…)`.
pub fn antisymmetry_check<L: LInftyAlgebra>(
    l: &L,
    tests: &[L::Elem],
    up_to: usize,
) -> Result<Option<Vec<usize>>> {
    for n in 2..=up_to.min(l.max_arity()) {
        for word in words(tests.len(), n) {
            let xs: Vec<L::Elem> = word.iter().map(|&i| tests[i].clone()).collect();
            let v = l.bracket(&xs)?;
            for p in 0..n - 1 {
                let (Some(dx), Some(dy)) = (l.degree(&xs[p]), l.degree(&xs[p + 1])) else {
                    continue;
                };
                let mut ys = xs.clone();
                ys.swap(p, p + 1);
                let w = l.bracket(&ys)?;
                let w = if (dx * dy).rem_euclid(2) == 0 {
                    w
                } else {
                    l.scale(&w, &-Rat::one())
                };
                if !l.is_zero(&l.add(&v, &w)) {
                    return Ok(Some(word));
                }
            }
        }
    }
    Ok(None)
}

fn words(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..m).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

/// `Σ_k 1/k! ℓ_k(x, …, x)`.
pub fn mc_residual<L: LInftyAlgebra>(l: &L, x: &L::Elem) -> Result<L::Elem> {
    let mut acc = l.zero();
    for k in 0..=l.max_arity() {
        let v = l.bracket(&vec![x.clone(); k])?;
        acc = l.add(&acc, &l.scale(&v, &(Rat::one() / factorial(k as u32))));
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct McReport<E> {
    pub holds: bool,
    pub residual: E,
}

pub fn mc_check<L: LInftyAlgebra>(l: &L, x: &L::Elem) -> Result<McReport<L::Elem>> {
    let residual = mc_residual(l, x)?;
    Ok(McReport {
        holds: l.is_zero(&residual),
        residual,
    })
}

/// Brackets `ℓ_k^b = Σ_j 1/j! ℓ_{k+j}(b, …, b, ·)`. For `b` not
/// Maurer–Cartan the result is curved with `ℓ_0^b` the MC residual.
pub struct TwistedView<'a, L: LInftyAlgebra> {
    base: &'a L,
    b: L::Elem,
}

impl<'a, L: LInftyAlgebra> TwistedView<'a, L> {
    pub fn new(base: &'a L, b: L::Elem) -> Self {
        TwistedView { base, b }
    }

    /// Requires `b` to be Maurer–Cartan.
    pub fn checked(base: &'a L, b: L::Elem) -> Result<Self> {
        let rep = mc_check(base, &b)?;
        if !rep.holds {
            return Err(Error::Precondition(
                "twisting element is not Maurer-Cartan".into(),
            ));
        }
        Ok(TwistedView { base, b })
    }

    pub fn element(&self) -> &L::Elem {
        &self.b
    }
}

impl<'a, L: LInftyAlgebra> LInftyAlgebra for TwistedView<'a, L> {
    type Elem = L::Elem;

    fn max_arity(&self) -> usize {
        self.base.max_arity()
    }
    fn degree(&self, x: &L::Elem) -> Option<i32> {
        self.base.degree(x)
    }
    fn zero(&self) -> L::Elem {
        self.base.zero()
    }
    fn is_zero(&self, x: &L::Elem) -> bool {
        self.base.is_zero(x)
    }
    fn add(&self, x: &L::Elem, y: &L::Elem) -> L::Elem {
        self.base.add(x, y)
    }
    fn scale(&self, x: &L::Elem, c: &Rat) -> L::Elem {
        self.base.scale(x, c)
    }
    fn bracket(&self, args: &[L::Elem]) -> Result<L::Elem> {
        let k = args.len();
        let mut acc = self.base.zero();
        for j in 0..=self.base.max_arity().saturating_sub(k) {
            let mut full = vec![self.b.clone(); j];
            full.extend_from_slice(args);
            let v = self.base.bracket(&full)?;
            acc = self.base.add(
                &acc,
                &self.base.scale(&v, &(Rat::one() / factorial(j as u32))),
            );
        }
        Ok(acc)
    }
}

/// Finite graded basis with labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    labels: Vec<String>,
    degrees: Vec<i32>,
}

impl GradedSpace {
    pub fn new(basis: &[(&str, i32)]) -> Result<Self> {
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        for (l, d) in basis {
            if labels.iter().any(|x: &String| x == l) {
                return Err(Error::Precondition(format!("duplicate basis label {}", l)));
            }
            labels.push(l.to_string());
            degrees.push(*d);
        }
        Ok(GradedSpace { labels, degrees })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `[d_min, d_max]`.
    pub fn window(&self) -> Option<(i32, i32)> {
        Some((*self.degrees.iter().min()?, *self.degrees.iter().max()?))
    }

    pub fn basis_of_degree(&self, d: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }
}

/// A vector with coefficients in `k[ε]/ε^{r+1}`: `coeffs[p][i]` is the
/// coefficient of `ε^p e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArtinVec {
    coeffs: Vec<Vec<Rat>>,
}

impl ArtinVec {
    pub fn zero(dim: usize, order: usize) -> Self {
        ArtinVec {
            coeffs: vec![vec![Rat::zero(); dim]; order + 1],
        }
    }

    /// `c ε^p e_i`.
    pub fn monomial(dim: usize, order: usize, power: usize, i: usize, c: Rat) -> Self {
        let mut v = Self::zero(dim, order);
        if power <= order {
            v.coeffs[power][i] = c;
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, p: usize, i: usize) -> &Rat {
        &self.coeffs[p][i]
    }

    pub fn set(&mut self, p: usize, i: usize, c: Rat) {
        self.coeffs[p][i] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|r| r.iter().all(|c| c.is_zero()))
    }

    /// Nonzero `(power, index, coefficient)` triples.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.coeffs.iter().enumerate().flat_map(|(p, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(i, c)| (p, i, c))
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (p, i, c) in o.terms() {
            r.coeffs[p][i] += c;
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        ArtinVec {
            coeffs: self
                .coeffs
                .iter()
                .map(|r| r.iter().map(|x| x * c).collect())
                .collect(),
        }
    }

    /// `ε^p · self`, truncated.
    pub fn shift(&self, p: usize) -> Self {
        let mut r = Self::zero(self.dim(), self.order());
        for (q, i, c) in self.terms() {
            if p + q <= self.order() {
                r.coeffs[p + q][i] = c.clone();
            }
        }
        r
    }

    /// Lowest power of `ε` present.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .position(|r| r.iter().any(|c| !c.is_zero()))
    }

    /// Per-power residual rows.
    pub fn by_power(&self) -> &[Vec<Rat>] {
        &self.coeffs
    }

    pub fn fmt_with(&self, space: &GradedSpace) -> String {
        let mut parts = Vec::new();
        for (p, i, c) in self.terms() {
            let e = match p {
                0 => String::new(),
                1 => "eps*".into(),
                _ => format!("eps^{}*", p),
            };
            parts.push(format!("{}*{}{}", fmt_rat(c), e, space.label(i)));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Structure constants on a finite graded space over `k[ε]/ε^{r+1}`.
/// Tables are keyed by nondecreasing basis words.
#[derive(Clone, Debug, PartialEq)]
pub struct LInfty {
    space: GradedSpace,
    order: usize,
    max_arity: usize,
    tables: Vec<BTreeMap<Vec<usize>, ArtinVec>>,
}

impl LInfty {
    pub fn new(space: GradedSpace, order: usize, max_arity: usize) -> Self {
        LInfty {
            space,
            order,
            max_arity,
            tables: vec![BTreeMap::new(); max_arity + 1],
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vector(&self) -> ArtinVec {
        ArtinVec::zero(self.space.dim(), self.order)
    }

    /// `c ε^p e_i`.
    pub fn element(&self, power: usize, i: usize, c: Rat) -> ArtinVec {
        ArtinVec::monomial(self.space.dim(), self.order, power, i, c)
    }

    /// Basis over `k` at `ε^0`.
    pub fn basis(&self) -> Vec<ArtinVec> {
        (0..self.space.dim())
            .map(|i| self.element(0, i, Rat::one()))
            .collect()
    }

    /// Sorts a word, returning `None` when antisymmetry forces zero.
    fn normalize(&self, word: &[usize]) -> Option<(Vec<usize>, bool)> {
        let mut w = word.to_vec();
        let mut odd = false;
        for a in 0..w.len() {
            for b in 0..w.len() - 1 - a {
                if w[b] > w[b + 1] {
                    let (p, q) = (self.space.degree(w[b]), self.space.degree(w[b + 1]));
                    // ℓ(…x,y…) = −(−1)^{|x||y|} ℓ(…y,x…)
                    odd ^= (p * q).rem_euclid(2) == 0;
                    w.swap(b, b + 1);
                }
            }
        }
        for a in 1..w.len() {
            if w[a] == w[a - 1] && self.space.degree(w[a]).rem_euclid(2) == 0 {
                return None;
            }
        }
        Some((w, odd))
    }

    /// Sets `ℓ_n(e_{w_1}, …, e_{w_n})`, in any word order.
    pub fn set_bracket(&mut self, word: &[usize], value: ArtinVec) -> Result<()> {
        let n = word.len();
        if n > self.max_arity {
            return Err(Error::Precondition(format!(
                "bracket arity {} exceeds {}",
                n, self.max_arity
            )));
        }
        if word.iter().any(|&i| i >= self.space.dim())
            || value.dim() != self.space.dim()
            || value.order() != self.order
        {
            return Err(Error::Incompatible(
                "bracket value does not fit the space".into(),
            ));
        }
        let want = word.iter().map(|&i| self.space.degree(i)).sum::<i32>() + 2 - n as i32;
        if let Some((_, i, _)) = value
            .terms()
            .find(|(_, i, _)| self.space.degree(*i) != want)
        {
            return Err(Error::Precondition(format!(
                "l{} value has a component {} of degree {}, expected {}",
                n,
                self.space.label(i),
                self.space.degree(i),
                want
            )));
        }
        match self.normalize(word) {
            None => {
                if value.is_zero() {
                    Ok(())
                } else {
                    Err(Error::Precondition(
                        "bracket must vanish by antisymmetry".into(),
                    ))
                }
            }
            Some((w, odd)) => {
                let v = if odd {
                    value.scale(&-Rat::one())
                } else {
                    value
                };
                if v.is_zero() {
                    self.tables[n].remove(&w);
                } else {
                    self.tables[n].insert(w, v);
                }
                Ok(())
            }
        }
    }

    /// `ℓ_n` on basis vectors.
    pub fn bracket_basis(&self, word: &[usize]) -> ArtinVec {
        if word.len() > self.max_arity {
            return self.vector();
        }
        match self.normalize(word) {
            None => self.vector(),
            Some((w, odd)) => match self.tables[word.len()].get(&w) {
                None => self.vector(),
                Some(v) if odd => v.scale(&-Rat::one()),
                Some(v) => v.clone(),
            },
        }
    }

    /// Nonzero table entries, arity by arity.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &ArtinVec)> {
        self.tables.iter().flat_map(|t| t.iter())
    }

    /// Cohomology of `ℓ_1` in the given degree, as a dimension over the
    /// rationals counting each power of `ε` separately. Requires `ℓ_0 = 0`.
    pub fn cohomology(&self, degree: i32) -> Result<usize> {
        if !self.bracket(&[])?.is_zero() {
            return Err(Error::Precondition("cohomology needs l0 = 0".into()));
        }
        let cols = |d: i32| -> Vec<ArtinVec> {
            let mut out = Vec::new();
            for p in 0..=self.order {
                for i in self.space.basis_of_degree(d) {
                    out.push(self.element(p, i, Rat::one()));
                }
            }
            out
        };
        let coords = |v: &ArtinVec| -> SparseRow {
            v.terms()
                .map(|(p, i, c)| (p * self.space.dim() + i, c.clone()))
                .collect()
        };
        let rank_of_images = |src: &[ArtinVec]| -> Result<usize> {
            let mut ech = Echelon::new(self.space.dim() * (self.order + 1));
            for x in src {
                ech.push(coords(&self.bracket(std::slice::from_ref(x))?), Rat::zero());
            }
            Ok(ech.rank())
        };
        let here = cols(degree);
        let kernel = here.len() - rank_of_images(&here)?;
        let image = rank_of_images(&cols(degree - 1))?;
        Ok(kernel - image)
    }

    /// Parses `basis:`, `order:`, `arity:` and `l{n}: (words) -> combination` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut space: Option<GradedSpace> = None;
        let mut order = 0usize;
        let mut arity = 3usize;
        let mut brackets: Vec<(usize, usize, Vec<String>, String, usize)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |col: usize, msg: &str| Error::Parse {
                line: line_no,
                col,
                msg: msg.into(),
            };
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| perr(1, "expected `key: value`"))?;
            let key = key.trim();
            let col0 = raw.find(':').map(|c| c + 2).unwrap_or(1);
            match key {
                "basis" => {
                    let mut b = Vec::new();
                    for item in rest
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                    {
                        let (l, d) = item
                            .split_once('=')
                            .or_else(|| item.split_once('@'))
                            .ok_or_else(|| perr(col0, "basis entries look like `label=degree`"))?;
                        let d: i32 = d.trim().parse().map_err(|_| perr(col0, "bad degree"))?;
                        b.push((l.trim().to_string(), d));
                    }
                    let refs: Vec<(&str, i32)> = b.iter().map(|(l, d)| (l.as_str(), *d)).collect();
                    space = Some(GradedSpace::new(&refs).map_err(|e| perr(col0, &e.to_string()))?);
                }
                "order" => order = rest.trim().parse().map_err(|_| perr(col0, "bad order"))?,
                "arity" => arity = rest.trim().parse().map_err(|_| perr(col0, "bad arity"))?,
                k if k.starts_with('l') => {
                    let n: usize = k[1..]
                        .parse()
                        .map_err(|_| perr(1, "bracket keys look like l0, l1, ..."))?;
                    let (lhs, rhs) = rest
                        .split_once("->")
                        .ok_or_else(|| perr(col0, "expected `->`"))?;
                    let lhs = lhs.trim();
                    let inner = lhs
                        .strip_prefix('(')
                        .and_then(|s| s.strip_suffix(')'))
                        .ok_or_else(|| perr(col0, "arguments must be parenthesized"))?;
                    let args: Vec<String> = inner
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect();
                    if args.len() != n {
                        return Err(perr(col0, &format!("l{} takes {} arguments", n, n)));
                    }
                    let rcol = raw.find("->").map(|c| c + 3).unwrap_or(1);
                    brackets.push((line_no, n, args, rhs.trim().to_string(), rcol));
                }
                _ => return Err(perr(1, &format!("unknown key `{}`", key))),
            }
        }
        let space = space.ok_or_else(|| Error::Parse {
            line: 1,
            col: 1,
            msg: "missing basis".into(),
        })?;
        let max = brackets.iter().map(|b| b.1).max().unwrap_or(0).max(arity);
        let mut l = LInfty::new(space.clone(), order, max);
        let mut vars: Vec<String> = space.labels().to_vec();
        vars.push("eps".into());
        for (line, _, args, rhs, col) in brackets {
            let word: Vec<usize> = args
                .iter()
                .map(|a| {
                    space.index(a).ok_or_else(|| Error::Parse {
                        line,
                        col: 1,
                        msg: format!("undeclared basis element `{}`", a),
                    })
                })
                .collect::<Result<_>>()?;
            let poly = parse_poly_at(&rhs, &vars, line, col)?;
            let mut v = l.vector();
            let d = space.dim();
            for (e, c) in poly.terms() {
                let lin: Vec<usize> = (0..d).filter(|&i| e[i] > 0).collect();
                if lin.len() != 1 || e[lin[0]] != 1 {
                    return Err(Error::Parse {
                        line,
                        col,
                        msg: "value must be linear in the basis".into(),
                    });
                }
                let p = e[d] as usize;
                if p <= order {
                    v.coeffs[p][lin[0]] += c;
                }
            }
            l.set_bracket(&word, v).map_err(|e| Error::Parse {
                line,
                col,
                msg: e.to_string(),
            })?;
        }
        Ok(l)
    }

    /// Re-parseable text.
    pub fn fmt(&self) -> String {
        let mut out = String::new();
        let b: Vec<String> = (0..self.space.dim())
            .map(|i| format!("{}={}", self.space.label(i), self.space.degree(i)))
            .collect();
        out.push_str(&format!(
            "basis: {}\norder: {}\narity: {}\n",
            b.join(", "),
            self.order,
            self.max_arity
        ));
        for (n, t) in self.tables.iter().enumerate() {
            for (w, v) in t {
                let args: Vec<&str> = w.iter().map(|&i| self.space.label(i)).collect();
                out.push_str(&format!(
                    "l{}: ({}) -> {}\n",
                    n,
                    args.join(", "),
                    v.fmt_with(&self.space)
                ));
            }
        }
        out
    }
}

impl LInftyAlgebra for LInfty {
    type Elem = ArtinVec;

    fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn degree(&self, x: &ArtinVec) -> Option<i32> {
        let mut d = None;
        for (_, i, _) in x.terms() {
            let di = self.space.degree(i);
            match d {
                None => d = Some(di),
                Some(e) if e != di => return None,
                _ => {}
            }
        }
        d
    }

    fn zero(&self) -> ArtinVec {
        self.vector()
    }

    fn is_zero(&self, x: &ArtinVec) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &ArtinVec, y: &ArtinVec) -> ArtinVec {
        x.add(y)
    }

    fn scale(&self, x: &ArtinVec, c: &Rat) -> ArtinVec {
        x.scale(c)
    }

    fn bracket(&self, args: &[ArtinVec]) -> Result<ArtinVec> {
        let n = args.len();
        let mut acc = self.vector();
        if n > self.max_arity {
            return Ok(acc);
        }
        let terms: Vec<Vec<(usize, usize, Rat)>> = args
            .iter()
            .map(|a| a.terms().map(|(p, i, c)| (p, i, c.clone())).collect())
            .collect();
        let mut idx = vec![0usize; n];
        if terms.iter().any(|t| t.is_empty()) {
            return Ok(acc);
        }
        loop {
            let mut power = 0;
            let mut coef = Rat::one();
            let mut word = Vec::with_capacity(n);
            for (a, &k) in idx.iter().enumerate() {
                let (p, i, c) = &terms[a][k];
                power += p;
                coef *= c;
                word.push(*i);
            }
            if power <= self.order {
                let v = self.bracket_basis(&word);
                if !v.is_zero() {
                    acc = acc.add(&v.shift(power).scale(&coef));
                }
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return Ok(acc);
                }
                idx[pos] += 1;
                if idx[pos] < terms[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Materializes `ℓ^b` as structure constants; `b` must be Maurer–Cartan.
pub fn twist_linf(l: &LInfty, b: &ArtinVec) -> Result<LInfty> {
    let view = TwistedView::checked(l, b.clone())?;
    materialize(l, &view)
}

/// `ℓ^c` for an arbitrary degree-1 element `c`; curved with `ℓ_0^c` the
/// Maurer–Cartan residual of `c`.
pub fn deform_by(l: &LInfty, c: &ArtinVec) -> Result<LInfty> {
    if l.degree(c).is_some_and(|d| d != 1) {
        return Err(Error::Precondition(
            "deforming element must have degree 1".into(),
        ));
    }
    let view = TwistedView::new(l, c.clone());
    materialize(l, &view)
}

fn materialize(l: &LInfty, view: &TwistedView<'_, LInfty>) -> Result<LInfty> {
    let mut out = LInfty::new(l.space.clone(), l.order, l.max_arity);
    let basis = l.basis();
    for n in 0..=l.max_arity {
        for word in multisets(l.space.dim(), n) {
            if l.normalize(&word).is_none() {
                continue;
            }
            let args: Vec<ArtinVec> = word.iter().map(|&i| basis[i].clone()).collect();
            let v = view.bracket(&args)?;
            out.set_bracket(&word, v)?;
        }
    }
    Ok(out)
}

/// `a(t) + dt·b(t)`, with `a[m]`, `b[m]` the coefficients of `t^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalElement<E> {
    pub a: Vec<E>,
    pub b: Vec<E>,
}

/// `A ⊗ k[t, dt]` with `deg dt = 1`, `dt` written on the left:
/// `ℓ̃_1(a(t) + dt b(t)) = ℓ_1 a(t) + dt (da/dt − ℓ_1 b(t))` and
/// `ℓ̃_k(…, dt b_j, …) = (−1)^{|a_1|+⋯+|a_{j−1}|+k} dt ℓ_k(…, b_j, …)`.
pub struct IntervalModel<'a, L: LInftyAlgebra> {
    base: &'a L,
}

impl<'a, L: LInftyAlgebra> IntervalModel<'a, L> {
    pub fn new(base: &'a L) -> Self {
        IntervalModel { base }
    }

    pub fn constant(&self, x: &L::Elem) -> IntervalElement<L::Elem> {
        IntervalElement {
            a: vec![x.clone()],
            b: vec![],
        }
    }

    /// `t^m x` or `t^m dt x`.
    pub fn monomial(&self, x: &L::Elem, m: usize, dt: bool) -> IntervalElement<L::Elem> {
        let mut v = vec![self.base.zero(); m + 1];
        v[m] = x.clone();
        if dt {
            IntervalElement { a: vec![], b: v }
        } else {
            IntervalElement { a: v, b: vec![] }
        }
    }

    /// `a(t_0)`.
    pub fn eval_at(&self, x: &IntervalElement<L::Elem>, t0: &Rat) -> L::Elem {
        let mut acc = self.base.zero();
        let mut pw = Rat::one();
        for c in &x.a {
            acc = self.base.add(&acc, &self.base.scale(c, &pw));
            pw *= t0;
        }
        acc
    }

    fn push(&self, v: &mut Vec<L::Elem>, m: usize, x: &L::Elem) {
        while v.len() <= m {
            v.push(self.base.zero());
        }
        v[m] = self.base.add(&v[m], x);
    }
}

impl<'a, L: LInftyAlgebra> LInftyAlgebra for IntervalModel<'a, L> {
    type Elem = IntervalElement<L::Elem>;

    fn max_arity(&self) -> usize {
        self.base.max_arity()
    }

    fn degree(&self, x: &Self::Elem) -> Option<i32> {
        let mut d: Option<i32> = None;
        let parts = x.a.iter().map(|e| (e, 0)).chain(x.b.iter().map(|e| (e, 1)));
        for (e, shift) in parts {
            if self.base.is_zero(e) {
                continue;
            }
            let de = self.base.degree(e)? + shift;
            match d {
                None => d = Some(de),
                Some(o) if o != de => return None,
                _ => {}
            }
        }
        d
    }

    fn zero(&self) -> Self::Elem {
        IntervalElement {
            a: vec![],
            b: vec![],
        }
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        x.a.iter().chain(&x.b).all(|e| self.base.is_zero(e))
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let mut r = x.clone();
        for (m, e) in y.a.iter().enumerate() {
            self.push(&mut r.a, m, e);
        }
        for (m, e) in y.b.iter().enumerate() {
            self.push(&mut r.b, m, e);
        }
        r
    }

    fn scale(&self, x: &Self::Elem, c: &Rat) -> Self::Elem {
        IntervalElement {
            a: x.a.iter().map(|e| self.base.scale(e, c)).collect(),
            b: x.b.iter().map(|e| self.base.scale(e, c)).collect(),
        }
    }

    fn bracket(&self, args: &[Self::Elem]) -> Result<Self::Elem> {
        let k = args.len();
        let mut out = self.zero();
        // monomials of each argument: (t-power, has dt, element)
        let monos: Vec<Vec<(usize, bool, &L::Elem)>> = args
            .iter()
            .map(|x| {
                x.a.iter()
                    .enumerate()
                    .map(|(m, e)| (m, false, e))
                    .chain(x.b.iter().enumerate().map(|(m, e)| (m, true, e)))
                    .filter(|(_, _, e)| !self.base.is_zero(e))
                    .collect()
            })
            .collect();
        if monos.iter().any(|m| m.is_empty()) {
            return Ok(out);
        }
        let mut idx = vec![0usize; k];
        loop {
            let pick: Vec<&(usize, bool, &L::Elem)> =
                idx.iter().enumerate().map(|(a, &i)| &monos[a][i]).collect();
            let ndt = pick.iter().filter(|p| p.1).count();
            if ndt <= 1 {
                let elems: Vec<L::Elem> = pick.iter().map(|p| p.2.clone()).collect();
                let v = self.base.bracket(&elems)?;
                if !self.base.is_zero(&v) {
                    let m: usize = pick.iter().map(|p| p.0).sum();
                    match pick.iter().position(|p| p.1) {
                        None => self.push(&mut out.a, m, &v),
                        Some(j) => {
                            let mut s = k as i32;
                            for p in &pick[..j] {
                                s += self.base.degree(p.2).unwrap_or(0);
                            }
                            let v = if s.rem_euclid(2) == 1 {
                                self.base.scale(&v, &-Rat::one())
                            } else {
                                v
                            };
                            self.push(&mut out.b, m, &v);
                        }
                    }
                }
            }
            let mut pos = 0;
            loop {
                if pos == k {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < monos[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        if k == 1 {
            for (m, e) in args[0].a.iter().enumerate().skip(1) {
                let d = self.base.scale(e, &Rat::from_integer((m as i64).into()));
                self.push(&mut out.b, m - 1, &d);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeReport {
    pub path_is_mc: bool,
    pub starts_at_b0: bool,
    pub ends_at_b1: bool,
}

impl GaugeReport {
    pub fn holds(&self) -> bool {
        self.path_is_mc && self.starts_at_b0 && self.ends_at_b1
    }
}

/// Verifies a supplied path: Maurer–Cartan in the interval model with the
/// given endpoints.
pub fn gauge_equivalent<L: LInftyAlgebra>(
    l: &L,
    b0: &L::Elem,
    b1: &L::Elem,
    path: &IntervalElement<L::Elem>,
) -> Result<GaugeReport> {
    let model = IntervalModel::new(l);
    let path_is_mc = mc_check(&model, path)?.holds;
    let at = |t: Rat| {
        let v = model.eval_at(path, &t);
        l.add(
            &v,
            &l.scale(if t.is_zero() { b0 } else { b1 }, &-Rat::one()),
        )
    };
    Ok(GaugeReport {
        path_is_mc,
        starts_at_b0: l.is_zero(&at(Rat::zero())),
        ends_at_b1: l.is_zero(&at(Rat::one())),
    })
}

/// For `ℓ_n = 0` when `n ≥ 3`: the path `a(t) + dt·b` with constant `b`
/// solving `da/dt = ℓ_1 b − ℓ_2(b, a)`, `a(0) = a0`. Needs `b` nilpotent
/// under `ℓ_2(b, ·)` within `max_steps` powers of `t`.
pub fn gauge_path<L: LInftyAlgebra>(
    l: &L,
    a0: &L::Elem,
    b: &L::Elem,
    max_steps: usize,
) -> Result<IntervalElement<L::Elem>> {
    if l.max_arity() > 2 {
        return Err(Error::Precondition(
            "gauge paths are built for brackets of arity at most 2".into(),
        ));
    }
    let mut a = vec![a0.clone()];
    for n in 0..max_steps {
        let mut next = l.scale(&l.bracket(&[b.clone(), a[n].clone()])?, &-Rat::one());
        if n == 0 {
            next = l.add(&next, &l.bracket(std::slice::from_ref(b))?);
        }
        let next = l.scale(
            &next,
            &(Rat::one() / Rat::from_integer(((n + 1) as i64).into())),
        );
        if l.is_zero(&next) {
            return Ok(IntervalElement {
                a,
                b: vec![b.clone()],
            });
        }
        a.push(next);
    }
    Err(Error::ResourceLimit {
        what: "gauge path t-degree",
        limit: max_steps,
    })
}

/// The curved Hochschild algebra of a star product as an L∞-algebra.
pub struct HochschildAlgebra<'a> {
    dgla: &'a CurvedDgla,
}

impl<'a> HochschildAlgebra<'a> {
    pub fn new(dgla: &'a CurvedDgla) -> Self {
        HochschildAlgebra { dgla }
    }
}

impl<'a> LInftyAlgebra for HochschildAlgebra<'a> {
    type Elem = SeriesCochain;

    fn max_arity(&self) -> usize {
        2
    }

    fn degree(&self, x: &SeriesCochain) -> Option<i32> {
        if x.is_zero() {
            None
        } else {
            Some(x.arity() as i32)
        }
    }

    fn zero(&self) -> SeriesCochain {
        self.dgla.zero(0)
    }

    fn is_zero(&self, x: &SeriesCochain) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &SeriesCochain, y: &SeriesCochain) -> SeriesCochain {
        if x.is_zero() {
            y.clone()
        } else if y.is_zero() {
            x.clone()
        } else {
            x.add(y)
        }
    }

    fn scale(&self, x: &SeriesCochain, c: &Rat) -> SeriesCochain {
        x.scale(c)
    }

    fn bracket(&self, args: &[SeriesCochain]) -> Result<SeriesCochain> {
        match args {
            [] => Ok(self.dgla.l0()),
            [a] => self.dgla.l1(a),
            [a, b] => self.dgla.l2(a, b),
            _ => Ok(self.zero()),
        }
    }
}

/// `log(id + X) = X − X²/2 + …` for a series of arity-0 cochains with zero
/// constant term, composition as product.
pub fn log_series(x: &SeriesCochain) -> Result<SeriesCochain> {
    if x.arity() != 0 || !x.coeff(0).is_zero() {
        return Err(Error::Precondition(
            "log needs an arity-0 series without constant term".into(),
        ));
    }
    let amb = x.coeff(0).ambient().clone();
    let compose = |p: &SeriesCochain, q: &SeriesCochain| -> Result<SeriesCochain> {
        p.convolve(
            q,
            || Cochain::zero(&amb, 0),
            |a, b| a.compose_at(b),
            |a, b| a.add(b),
        )
    };
    let mut acc = x.clone();
    let mut pw = x.clone();
    for k in 2..=x.order() {
        pw = compose(&pw, x)?;
        let c = Rat::new(if k % 2 == 0 { -1 } else { 1 }.into(), (k as i64).into());
        acc = acc.add(&pw.scale(&c));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    /// `x` (0), `y`, `z` (1), `w` (2): `[x,y] = αy`, `[x,z] = −αz`, `[y,z] = w`,
    /// `d x = −eα y + cα z`, `d y = c w`, `d z = e w`.
    pub(crate) fn small_dgla(alpha: Rat, c: Rat, e: Rat, order: usize) -> LInfty {
        let s = GradedSpace::new(&[("x", 0), ("y", 1), ("z", 1), ("w", 2)]).unwrap();
        let mut l = LInfty::new(s, order, 2);
        let el = |l: &LInfty, i: usize, c: Rat| l.element(0, i, c);
        let v = el(&l, 1, alpha.clone());
        l.set_bracket(&[0, 1], v).unwrap();
        let v = el(&l, 2, -alpha.clone());
        l.set_bracket(&[0, 2], v).unwrap();
        let v = el(&l, 3, Rat::one());
        l.set_bracket(&[1, 2], v).unwrap();
        let v = el(&l, 1, -&e * &alpha).add(&el(&l, 2, &c * &alpha));
        l.set_bracket(&[0], v).unwrap();
        let v = el(&l, 3, c);
        l.set_bracket(&[1], v).unwrap();
        let v = el(&l, 3, e);
        l.set_bracket(&[2], v).unwrap();
        l
    }

    #[test]
    fn sign_engine_basics() {
        assert!(!decalage_odd(&[]));
        assert!(!decalage_odd(&[5]));
        // n = 2: (−1)^{|x| + 1}
        assert!(decalage_odd(&[0, 3]));
        assert!(!decalage_odd(&[1, 0]));
        assert_eq!(unshuffles(3, 1).len(), 3);
        assert_eq!(unshuffles(4, 2).len(), 6);
        // two odd suspended elements (even unshifted) anticommute
        assert!(koszul_odd(&[0, 0], &[1, 0]));
        assert!(!koszul_odd(&[1, 0], &[1, 0]));
    }

    #[test]
    fn abelian_differential_passes() {
        let s = GradedSpace::new(&[("u", 0), ("v", 1)]).unwrap();
        let mut l = LInfty::new(s, 0, 1);
        let v = l.element(0, 1, rat(3));
        l.set_bracket(&[0], v).unwrap();
        assert!(jacobi_check(&l, &l.basis(), 3).unwrap().holds);
    }

    #[test]
    fn small_dgla_is_a_dgla() {
        let l = small_dgla(rat(2), rat(3), ratio(-1, 2), 0);
        let rep = jacobi_check(&l, &l.basis(), 3).unwrap();
        assert!(rep.holds, "{:?}", rep.witness);
    }

    #[test]
    fn broken_jacobi_is_reported() {
        let mut l = small_dgla(rat(1), rat(0), rat(0), 0);
        // break the derivation property of [x, ·] on w
        let v = l.element(0, 3, rat(1));
        l.set_bracket(&[0, 3], v).unwrap();
        let rep = jacobi_check(&l, &l.basis(), 3).unwrap();
        assert!(!rep.holds);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn dgla_mc_is_db_plus_half_bracket() {
        let l = small_dgla(rat(1), rat(1), rat(1), 2);
        let b = l.element(1, 1, rat(2)).add(&l.element(1, 2, rat(1)));
        let want = l.bracket(std::slice::from_ref(&b)).unwrap().add(
            &l.bracket(&[b.clone(), b.clone()])
                .unwrap()
                .scale(&ratio(1, 2)),
        );
        assert_eq!(mc_residual(&l, &b).unwrap(), want);
        assert!(mc_check(&l, &l.vector()).unwrap().holds);
    }

    #[test]
    fn deformation_is_curved_and_twist_kills_curvature() {
        let l = small_dgla(rat(2), rat(1), rat(3), 2);
        let c = l.element(1, 1, rat(1)).add(&l.element(2, 2, ratio(1, 3)));
        let curved = deform_by(&l, &c).unwrap();
        let l0 = curved.bracket(&[]).unwrap();
        assert!(!l0.is_zero());
        assert_eq!(l0, mc_residual(&l, &c).unwrap());
        assert!(jacobi_check(&curved, &curved.basis(), 3).unwrap().holds);
        // −c is Maurer–Cartan in the curved algebra and twisting by it undoes the curvature
        let minus_c = c.scale(&-Rat::one());
        let flat = twist_linf(&curved, &minus_c).unwrap();
        assert!(flat.bracket(&[]).unwrap().is_zero());
        assert!(jacobi_check(&flat, &flat.basis(), 3).unwrap().holds);
        assert!(twist_linf(&curved, &l.vector()).is_err());
    }

    #[test]
    fn curved_toy_mc_cancels_the_curvature_at_order_two() {
        // ℓ_0 = ε² w on the degree-1 line spanned by y with d y = w
        let s = GradedSpace::new(&[("y", 1), ("w", 2)]).unwrap();
        let mut l = LInfty::new(s, 2, 2);
        let v = l.element(2, 1, rat(1));
        l.set_bracket(&[], v).unwrap();
        let v = l.element(0, 1, rat(1));
        l.set_bracket(&[0], v).unwrap();
        assert!(jacobi_check(&l, &l.basis(), 3).unwrap().holds);
        // b = β ε² y: residual ε²(1 + β) w
        let b = l.element(2, 0, rat(-1));
        assert!(mc_check(&l, &b).unwrap().holds);
        assert!(!mc_check(&l, &l.element(2, 0, rat(1))).unwrap().holds);
    }

    #[test]
    fn interval_model_of_a_curved_dgla() {
        let l = small_dgla(rat(1), rat(2), rat(-1), 1);
        let c = l.element(1, 1, rat(1)).add(&l.element(1, 2, rat(2)));
        let curved = deform_by(&l, &c).unwrap();
        let model = IntervalModel::new(&curved);
        let mut tests = Vec::new();
        for x in curved.basis() {
            for m in 0..2 {
                tests.push(model.monomial(&x, m, false));
                tests.push(model.monomial(&x, m, true));
            }
        }
        let rep = jacobi_check(&model, &tests, 3).unwrap();
        assert!(rep.holds, "{:?}", rep.witness.map(|w| w.0));
        assert_eq!(antisymmetry_check(&model, &tests, 2).unwrap(), None);
        // constants bracket as in the base
        let y = model.constant(&curved.basis()[1]);
        let z = model.constant(&curved.basis()[2]);
        assert_eq!(
            model.bracket(&[y, z]).unwrap().a[0],
            curved.bracket_basis(&[1, 2])
        );
        // ℓ̃_1(dt·b) = −dt·ℓ_1(b)
        let bx = model.monomial(&curved.basis()[0], 0, true);
        let v = model.bracket(&[bx]).unwrap();
        assert_eq!(v.b[0], curved.bracket_basis(&[0]).scale(&-Rat::one()));
    }

    #[test]
    fn gauge_paths_are_mc_and_evaluate_to_mc() {
        let l = small_dgla(rat(1), rat(1), rat(2), 2);
        let c = l.element(1, 1, rat(1));
        let curved = deform_by(&l, &c).unwrap();
        let a0 = c.scale(&-Rat::one());
        assert!(mc_check(&curved, &a0).unwrap().holds);
        let b = curved
            .element(1, 0, rat(1))
            .add(&curved.element(2, 0, ratio(1, 2)));
        let path = gauge_path(&curved, &a0, &b, 8).unwrap();
        let model = IntervalModel::new(&curved);
        assert!(mc_check(&model, &path).unwrap().holds);
        for t in [Rat::zero(), ratio(1, 2), Rat::one(), ratio(-7, 3)] {
            assert!(mc_check(&curved, &model.eval_at(&path, &t)).unwrap().holds);
        }
        let b1 = model.eval_at(&path, &Rat::one());
        assert!(gauge_equivalent(&curved, &a0, &b1, &path).unwrap().holds());
        let constant = model.constant(&a0);
        assert!(gauge_equivalent(&curved, &a0, &a0, &constant)
            .unwrap()
            .holds());
        let rep = gauge_equivalent(&curved, &a0, &a0, &path).unwrap();
        assert!(rep.path_is_mc && rep.starts_at_b0);
    }

    #[test]
    fn twisted_cohomology_is_gauge_invariant() {
        let l = small_dgla(rat(1), rat(1), rat(2), 2);
        let b = l.element(1, 0, rat(1));
        let zero = l.vector();
        let path = gauge_path(&l, &zero, &b, 8).unwrap();
        let b1 = IntervalModel::new(&l).eval_at(&path, &Rat::one());
        let t0 = twist_linf(&l, &zero).unwrap();
        let t1 = twist_linf(&l, &b1).unwrap();
        for d in 0..=2 {
            assert_eq!(t0.cohomology(d).unwrap(), t1.cohomology(d).unwrap());
        }
    }

    #[test]
    fn parse_round_trip() {
        let text = "basis: x=0, y=1, z=1, w=2\norder: 1\nl1: (x) -> 2*y - eps*z\nl2: (y, z) -> w\n";
        let l = LInfty::parse(text).unwrap();
        assert_eq!(l.bracket_basis(&[2, 1]), l.element(0, 3, rat(1)));
        let again = LInfty::parse(&l.fmt()).unwrap();
        assert_eq!(again, l);
        let err = LInfty::parse("basis: x=0\nl1: (q) -> x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    fn moyal_plane() -> CurvedDgla {
        use crate::diffop::Ambient;
        use crate::poisson::Bivector;
        use crate::poly::Poly;
        let mut p = Bivector::zero(2);
        p.set(0, 1, Poly::one(2)).unwrap();
        let star = crate::quantize::moyal(&p).unwrap().as_vec();
        CurvedDgla::new(&Ambient::new(2, &[1], 1), &star, 2).unwrap()
    }

    #[test]
    fn hochschild_relations_through_the_trait() {
        use rand::SeedableRng;
        let h = moyal_plane();
        let alg = HochschildAlgebra::new(&h);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let tests: Vec<SeriesCochain> = (0..3)
            .map(|i| h.monomial(i % 2, &Cochain::random(h.ambient(), i, 2, 1, 2, &mut rng)))
            .collect();
        let rep = jacobi_check(&alg, &tests, 3).unwrap();
        assert!(rep.holds, "{:?}", rep.witness.map(|w| w.0));
        assert_eq!(antisymmetry_check(&alg, &tests, 2).unwrap(), None);
    }

    #[test]
    fn hochschild_gauge_path_from_a_logarithm() {
        use rand::SeedableRng;
        let h = CurvedDgla::flat(&crate::diffop::Ambient::new(2, &[1], 1), 2);
        let alg = HochschildAlgebra::new(&h);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut x = h.zero(0);
        x.set(1, Cochain::random(h.ambient(), 0, 1, 1, 2, &mut rng));
        x.set(2, Cochain::random(h.ambient(), 0, 1, 1, 2, &mut rng));
        let b = log_series(&x).unwrap().scale(&-Rat::one());
        let a0 = h.zero(1);
        let path = gauge_path(&alg, &a0, &b, 6).unwrap();
        let model = IntervalModel::new(&alg);
        assert!(mc_check(&model, &path).unwrap().holds);
        let a1 = model.eval_at(&path, &Rat::one());
        assert!(mc_check(&alg, &a1).unwrap().holds);
        assert!(gauge_equivalent(&alg, &a0, &a1, &path).unwrap().holds());
    }
}
