use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{exp_add, exps_up_to, total_degree, Exp, Poly, Rat};

use super::leibniz_splits;
use super::ringop::{fmt_exp, RingOp};

/// The setting shared by all cochains of one complex: `A = k[x_1..x_n]`,
/// `I` generated by `ideal_vars`, `E = (A/I)^rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ambient {
    pub nvars: usize,
    pub ideal_vars: Vec<usize>,
    pub rank: usize,
}

impl Ambient {
    pub fn new(nvars: usize, ideal_vars: &[usize], rank: usize) -> Self {
        let mut v = ideal_vars.to_vec();
        v.sort_unstable();
        v.dedup();
        Ambient {
            nvars,
            ideal_vars: v,
            rank,
        }
    }

    /// Coordinates of `Y`.
    pub fn y_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|i| !self.ideal_vars.contains(i))
            .collect()
    }

    pub fn is_ideal_var(&self, i: usize) -> bool {
        self.ideal_vars.contains(&i)
    }

    pub fn restrict(&self, p: &Poly) -> Poly {
        p.restrict_zero(&self.ideal_vars)
    }

    pub fn zero_exp(&self) -> Exp {
        vec![0; self.nvars]
    }

    /// Reduces a vector of polynomials to a module element.
    pub fn element(&self, e: &[Poly]) -> Result<Vec<Poly>> {
        if e.len() != self.rank {
            return Err(Error::Incompatible(format!(
                "module element of length {} for rank {}",
                e.len(),
                self.rank
            )));
        }
        Ok(e.iter().map(|p| self.restrict(p)).collect())
    }

    /// The `i`-th standard basis vector.
    pub fn basis(&self, i: usize) -> Vec<Poly> {
        (0..self.rank)
            .map(|j| {
                if i == j {
                    Poly::one(self.nvars)
                } else {
                    Poly::zero(self.nvars)
                }
            })
            .collect()
    }
}

/// Differentiation pattern of one term: `∂^{D_1}` … on the ring slots and
/// `∂^{D_e}` on the module slot. `module` only involves `Y` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CochainKey {
    pub ring: Vec<Exp>,
    pub module: Exp,
}

/// Module cochain `A^⊗k ⊗ E → E`:
/// `(a_1, …, a_k, e) ↦ Σ M · (∂^{D_1}a_1)|_Y ⋯ (∂^{D_k}a_k)|_Y · ∂^{D_e}e`
/// with `M` an `r × r` matrix over `O_Y`. Distinct keys are independent as
/// operators, so the stored map is a normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain {
    amb: Ambient,
    arity: usize,
    terms: BTreeMap<CochainKey, PolyMatrix>,
}

impl Cochain {
    pub fn zero(amb: &Ambient, arity: usize) -> Self {
        Cochain {
            amb: amb.clone(),
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// `e ↦ e`.
    pub fn identity(amb: &Ambient) -> Self {
        Self::endomorphism(amb, &PolyMatrix::identity(amb.rank, amb.nvars))
    }

    /// The order-0 arity-0 cochain `e ↦ M e`.
    pub fn endomorphism(amb: &Ambient, m: &PolyMatrix) -> Self {
        let mut c = Self::zero(amb, 0);
        c.add_term(
            CochainKey {
                ring: vec![],
                module: amb.zero_exp(),
            },
            m.clone(),
        );
        c
    }

    /// `(a, e) ↦ a|_Y e`.
    pub fn action(amb: &Ambient) -> Self {
        let mut c = Self::zero(amb, 1);
        c.add_term(
            CochainKey {
                ring: vec![amb.zero_exp()],
                module: amb.zero_exp(),
            },
            PolyMatrix::identity(amb.rank, amb.nvars),
        );
        c
    }

    /// `(a_1, …, a_k, e) ↦ β(a_1, …, a_k)|_Y · e`.
    pub fn from_ring_op(amb: &Ambient, op: &RingOp) -> Self {
        let mut c = Self::zero(amb, op.arity());
        for (ds, f) in op.terms() {
            c.add_term(
                CochainKey {
                    ring: ds.clone(),
                    module: amb.zero_exp(),
                },
                PolyMatrix::scalar(amb.rank, f),
            );
        }
        c
    }

    /// `e ↦ Σ M ∂^{D} e` from `(D, M)` pairs.
    pub fn module_operator(amb: &Ambient, parts: &[(Exp, PolyMatrix)]) -> Self {
        let mut c = Self::zero(amb, 0);
        for (d, m) in parts {
            c.add_term(
                CochainKey {
                    ring: vec![],
                    module: d.clone(),
                },
                m.clone(),
            );
        }
        c
    }

    pub fn ambient(&self) -> &Ambient {
        &self.amb
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CochainKey, &PolyMatrix)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &CochainKey) -> Option<&PolyMatrix> {
        self.terms.get(key)
    }

    /// Adds a term, restricting coefficients to `Y`. Module derivatives along
    /// ideal coordinates annihilate `E` and are dropped.
    pub fn add_term(&mut self, key: CochainKey, m: PolyMatrix) {
        assert_eq!(key.ring.len(), self.arity, "ring slot count");
        assert_eq!(m.size(), self.amb.rank, "matrix size");
        if self.amb.ideal_vars.iter().any(|&v| key.module[v] > 0) {
            return;
        }
        let m = m.restrict_zero(&self.amb.ideal_vars);
        if m.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(cur) => {
                *cur = &*cur + &m;
                if cur.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, m);
            }
        }
    }

    fn check_compatible(&self, o: &Cochain) -> Result<()> {
        if self.amb != o.amb {
            return Err(Error::Incompatible(
                "cochains over different ambients".into(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Cochain) -> Result<Cochain> {
        self.check_compatible(o)?;
        if self.arity != o.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: o.arity,
            });
        }
        let mut r = self.clone();
        for (k, m) in &o.terms {
            r.add_term(k.clone(), m.clone());
        }
        Ok(r)
    }

    /// Sum; panics on mismatched shapes, which is a programming error.
    pub fn add(&self, o: &Cochain) -> Cochain {
        self.try_add(o).expect("cochain shapes")
    }

    pub fn sub(&self, o: &Cochain) -> Cochain {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Cochain {
        let mut r = Self::zero(&self.amb, self.arity);
        if c.is_zero() {
            return r;
        }
        for (k, m) in &self.terms {
            r.terms.insert(k.clone(), m.scale(c));
        }
        r
    }

    /// Left multiplication of every coefficient by a matrix.
    pub fn left_mul_matrix(&self, a: &PolyMatrix) -> Cochain {
        let mut r = Self::zero(&self.amb, self.arity);
        for (k, m) in &self.terms {
            r.add_term(k.clone(), a * m);
        }
        r
    }

    /// Total differential order (ring slots plus module slot) of the highest term.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.ring.iter().map(|d| total_degree(d)).sum::<u32>() + total_degree(&k.module))
            .max()
            .unwrap_or(0)
    }

    /// Maximal coefficient degree.
    pub fn coeff_degree(&self) -> u32 {
        self.terms
            .values()
            .flat_map(|m| m.entries().iter().filter_map(|p| p.total_degree()))
            .max()
            .unwrap_or(0)
    }

    /// Order of the module slot only.
    pub fn module_order(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| total_degree(&k.module))
            .max()
            .unwrap_or(0)
    }

    pub fn apply(&self, args: &[Poly], e: &[Poly]) -> Result<Vec<Poly>> {
        if args.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: args.len(),
            });
        }
        let e = self.amb.element(e)?;
        let n = self.amb.nvars;
        let mut out = vec![Poly::zero(n); self.amb.rank];
        for (k, m) in &self.terms {
            let mut prod = Poly::one(n);
            for (d, a) in k.ring.iter().zip(args) {
                prod = &prod * &self.amb.restrict(&a.diff_multi(d));
                if prod.is_zero() {
                    break;
                }
            }
            if prod.is_zero() {
                continue;
            }
            let de: Vec<Poly> = e.iter().map(|x| x.diff_multi(&k.module)).collect();
            for (o, v) in out.iter_mut().zip(m.mul_vec(&de)) {
                *o += &(&v * &prod);
            }
        }
        Ok(out.iter().map(|p| self.amb.restrict(p)).collect())
    }

    /// `c1(a_1, …, a_k, c2(a_{k+1}, …, a_{k+l}, e))`.
    pub fn compose_at(&self, c2: &Cochain) -> Result<Cochain> {
        self.check_compatible(c2)?;
        let k = self.arity;
        let l = c2.arity;
        let mut r = Self::zero(&self.amb, k + l);
        for (k1, m1) in &self.terms {
            let splits = leibniz_splits(&k1.module, l + 2);
            for (k2, m2) in &c2.terms {
                for (bs, coef) in &splits {
                    let dm2 = m2.diff_multi(&bs[0]);
                    if dm2.is_zero() {
                        continue;
                    }
                    let mut ring = k1.ring.clone();
                    for j in 0..l {
                        ring.push(exp_add(&k2.ring[j], &bs[j + 1]));
                    }
                    let module = exp_add(&k2.module, &bs[l + 1]);
                    r.add_term(CochainKey { ring, module }, (m1 * &dm2).scale(coef));
                }
            }
        }
        Ok(r)
    }

    /// Substitutes a scalar operator into ring slot `j` (zero-based):
    /// `c(a_1, …, op(a_j, …, a_{j+m−1}), …, e)`.
    pub fn insert_ring(&self, j: usize, op: &RingOp) -> Result<Cochain> {
        if j >= self.arity {
            return Err(Error::Arity {
                expected: j + 1,
                got: self.arity,
            });
        }
        if op.nvars() != self.amb.nvars {
            return Err(Error::Incompatible(
                "ring operator in a different ring".into(),
            ));
        }
        let m = op.arity();
        let mut r = Self::zero(&self.amb, self.arity + m - 1);
        for (key, mat) in &self.terms {
            let splits = leibniz_splits(&key.ring[j], m + 1);
            for (es, f) in op.terms() {
                for (bs, coef) in &splits {
                    let g = self.amb.restrict(&f.diff_multi(&bs[0]));
                    if g.is_zero() {
                        continue;
                    }
                    let mut ring: Vec<Exp> = key.ring[..j].to_vec();
                    for i in 0..m {
                        ring.push(exp_add(&es[i], &bs[i + 1]));
                    }
                    ring.extend_from_slice(&key.ring[j + 1..]);
                    r.add_term(
                        CochainKey {
                            ring,
                            module: key.module.clone(),
                        },
                        mat.mul_poly(&g).scale(coef),
                    );
                }
            }
        }
        Ok(r)
    }

    /// `c(…, x·a_j, …)` for a polynomial `x`.
    pub fn contract(&self, j: usize, x: &Poly) -> Result<Cochain> {
        self.insert_ring(j, &RingOp::multiply_by(x))
    }

    /// Fixes ring slot `j` to the polynomial `f`.
    pub fn fix_arg(&self, j: usize, f: &Poly) -> Result<Cochain> {
        if j >= self.arity {
            return Err(Error::Arity {
                expected: j + 1,
                got: self.arity,
            });
        }
        let mut r = Self::zero(&self.amb, self.arity - 1);
        for (key, m) in &self.terms {
            let g = self.amb.restrict(&f.diff_multi(&key.ring[j]));
            if g.is_zero() {
                continue;
            }
            let mut ring = key.ring.clone();
            ring.remove(j);
            r.add_term(
                CochainKey {
                    ring,
                    module: key.module.clone(),
                },
                m.mul_poly(&g),
            );
        }
        Ok(r)
    }

    /// `c(a_{σ(1)}, …, a_{σ(k)}, e)`.
    pub fn permute(&self, sigma: &[usize]) -> Cochain {
        assert_eq!(sigma.len(), self.arity);
        let mut r = Self::zero(&self.amb, self.arity);
        for (key, m) in &self.terms {
            let mut ring = vec![Vec::new(); self.arity];
            for (i, d) in key.ring.iter().enumerate() {
                ring[sigma[i]] = d.clone();
            }
            r.add_term(
                CochainKey {
                    ring,
                    module: key.module.clone(),
                },
                m.clone(),
            );
        }
        r
    }

    /// Random cochain with at most `nterms` terms, total order `≤ order`,
    /// coefficient degree `≤ degree` and small integer coefficients.
    pub fn random<R: Rng>(
        amb: &Ambient,
        arity: usize,
        order: u32,
        degree: u32,
        nterms: usize,
        rng: &mut R,
    ) -> Cochain {
        let n = amb.nvars;
        let all: Vec<usize> = (0..n).collect();
        let y = amb.y_vars();
        let ring_exps = exps_up_to(n, &all, order);
        let mod_exps = exps_up_to(n, &y, order);
        let coef_exps = exps_up_to(n, &y, degree);
        let mut c = Self::zero(amb, arity);
        for _ in 0..nterms {
            let mut budget = order;
            let mut ring = Vec::with_capacity(arity);
            for _ in 0..arity {
                let cands: Vec<&Exp> = ring_exps
                    .iter()
                    .filter(|e| total_degree(e) <= budget)
                    .collect();
                let d = cands[rng.gen_range(0..cands.len())].clone();
                budget -= total_degree(&d);
                ring.push(d);
            }
            let cands: Vec<&Exp> = mod_exps
                .iter()
                .filter(|e| total_degree(e) <= budget)
                .collect();
            let module = cands[rng.gen_range(0..cands.len())].clone();
            let mut m = PolyMatrix::zero(amb.rank, n);
            for i in 0..amb.rank {
                for j in 0..amb.rank {
                    let mut p = Poly::zero(n);
                    for _ in 0..2 {
                        let e = coef_exps[rng.gen_range(0..coef_exps.len())].clone();
                        let k: i64 = rng.gen_range(-3..=3);
                        p.add_term(e, Rat::from_integer(k.into()));
                    }
                    m.set(i, j, p);
                }
            }
            c.add_term(CochainKey { ring, module }, m);
        }
        c
    }

    /// For an arity-0 cochain without derivatives, its matrix.
    pub fn as_matrix(&self) -> Option<PolyMatrix> {
        if self.arity != 0 {
            return None;
        }
        let zero = self.amb.zero_exp();
        let mut out = PolyMatrix::zero(self.amb.rank, self.amb.nvars);
        for (k, m) in &self.terms {
            if k.module != zero {
                return None;
            }
            out = m.clone();
        }
        Some(out)
    }

    /// Smallest monomial inputs on which a nonzero cochain is nonzero:
    /// ring arguments are monomials, `e` is a monomial on `Y` times a basis
    /// vector. Degrees up to the cochain's order suffice.
    pub fn witness(&self) -> Option<(Vec<Poly>, Vec<Poly>, Vec<Poly>)> {
        if self.is_zero() {
            return None;
        }
        let n = self.amb.nvars;
        let all: Vec<usize> = (0..n).collect();
        let y = self.amb.y_vars();
        let ord = self.order();
        let ring_monos: Vec<Poly> = exps_up_to(n, &all, ord)
            .into_iter()
            .map(|e| Poly::monomial(n, e, Rat::one()))
            .collect();
        let mod_monos: Vec<Poly> = exps_up_to(n, &y, ord)
            .into_iter()
            .map(|e| Poly::monomial(n, e, Rat::one()))
            .collect();
        let mut idx = vec![0usize; self.arity];
        loop {
            let args: Vec<Poly> = idx.iter().map(|&i| ring_monos[i].clone()).collect();
            for m in &mod_monos {
                for b in 0..self.amb.rank {
                    let e: Vec<Poly> = self.amb.basis(b).iter().map(|x| x * m).collect();
                    let v = self.apply(&args, &e).expect("shapes");
                    if v.iter().any(|p| !p.is_zero()) {
                        return Some((args, e, v));
                    }
                }
            }
            // odometer over ring argument choices
            let mut pos = 0;
            loop {
                if pos == self.arity {
                    return None;
                }
                idx[pos] += 1;
                if idx[pos] < ring_monos.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, m)| {
                let mut s = if self.amb.rank == 1 {
                    m.get(0, 0).fmt_with(names)
                } else {
                    m.fmt_with(names)
                };
                for (i, d) in k.ring.iter().enumerate() {
                    if d.iter().any(|&x| x > 0) {
                        s.push_str(&format!(" | d(a{})={}", i + 1, fmt_exp(d)));
                    }
                }
                if k.module.iter().any(|&x| x > 0) {
                    s.push_str(&format!(" | d(e)={}", fmt_exp(&k.module)));
                }
                s
            })
            .collect();
        parts.join("; ")
    }
}

impl std::fmt::Debug for Cochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cochain[{}]({})", self.arity, self.fmt_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, unit_exp};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn amb() -> Ambient {
        // k[q, p], I = (p)
        Ambient::new(2, &[1], 1)
    }

    fn q() -> Poly {
        Poly::var(2, 0)
    }

    fn p() -> Poly {
        Poly::var(2, 1)
    }

    #[test]
    fn zero_cochain_applies_to_zero() {
        let z = Cochain::zero(&amb(), 1);
        assert_eq!(z.apply(&[q()], &[q()]).unwrap(), vec![Poly::zero(2)]);
    }

    #[test]
    fn factor_of_ideal_variable_is_killed() {
        let mut c = Cochain::zero(&amb(), 1);
        c.add_term(
            CochainKey {
                ring: vec![unit_exp(2, 1)],
                module: unit_exp(2, 0),
            },
            PolyMatrix::identity(1, 2),
        );
        // ∂_p p^2 = 2p, which restricts to 0
        let v = c.apply(&[p().pow(2)], &[q()]).unwrap();
        assert!(v[0].is_zero());
    }

    #[test]
    fn arity_and_rank_errors() {
        let c = Cochain::action(&amb());
        assert!(matches!(c.apply(&[], &[q()]), Err(Error::Arity { .. })));
        assert!(matches!(
            c.apply(&[q()], &[q(), q()]),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn composition_agrees_with_nested_application() {
        let a = Ambient::new(3, &[2], 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let c1 = Cochain::random(&a, 1, 2, 1, 3, &mut rng);
            let c2 = Cochain::random(&a, 1, 2, 1, 3, &mut rng);
            let comp = c1.compose_at(&c2).unwrap();
            let x = |i| Poly::var(3, i);
            let a1 = &x(0).pow(2) * &x(2);
            let a2 = &(&x(1) * &x(2)) + &x(0).pow(3);
            let e = vec![&x(0) * &x(1), x(1).pow(2)];
            let inner = c2.apply(std::slice::from_ref(&a2), &e).unwrap();
            let nested = c1.apply(std::slice::from_ref(&a1), &inner).unwrap();
            assert_eq!(comp.apply(&[a1, a2], &e).unwrap(), nested);
        }
    }

    #[test]
    fn insertion_of_multiplication() {
        let a = amb();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = Cochain::random(&a, 1, 3, 2, 4, &mut rng);
        let ins = c.insert_ring(0, &RingOp::mult(2)).unwrap();
        let (f, g) = (&q() * &p(), &q().pow(2) + &p().pow(2));
        let lhs = ins.apply(&[f.clone(), g.clone()], &[q()]).unwrap();
        let rhs = c.apply(&[&f * &g], &[q()]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn fix_arg_and_permute() {
        let a = amb();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = Cochain::random(&a, 2, 3, 1, 4, &mut rng);
        let f = &q().pow(2) + &(&q() * &p());
        let g = p().pow(2);
        let e = vec![&q() + &Poly::constant(2, rat(1))];
        let fixed = c.fix_arg(0, &f).unwrap();
        assert_eq!(
            fixed.apply(std::slice::from_ref(&g), &e).unwrap(),
            c.apply(&[f.clone(), g.clone()], &e).unwrap()
        );
        let sw = c.permute(&[1, 0]);
        assert_eq!(
            sw.apply(&[g.clone(), f.clone()], &e).unwrap(),
            c.apply(&[f, g], &e).unwrap()
        );
    }
}
