//! (λ,μ)-connections along the conormal directions, their curvature, and the
//! normal complex `∧*N ⊗ End(E)` with its differential.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::diffop::{Ambient, Cochain, RingOp};
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poisson::CoisotropicData;
use crate::poly::{exps_up_to, unit_exp, Poly, Rat};

/// A connection `γ: N^∨ ⊗ E → E` with declared symbols `(λ, μ)`.
///
/// `op` is an arity-1 cochain; only its values on `I ⊗ E` matter. The
/// generator operators are `Γ_g(e) = op(x_g, e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    pub lambda: Rat,
    pub mu: Rat,
    op: Cochain,
}

impl Connection {
    pub fn from_cochain(lambda: Rat, mu: Rat, op: Cochain) -> Result<Self> {
        if op.arity() != 1 {
            return Err(Error::Arity {
                expected: 1,
                got: op.arity(),
            });
        }
        Ok(Connection { lambda, mu, op })
    }

    /// The canonical operator with the given generator values:
    /// `op(a, e) = Σ_g (∂_g a)|_Y Γ_g(e) + λ p(x_g)(∂_g a)|_Y e`,
    /// which satisfies `op(x_g h, e) = h Γ_g(e) + λ p(x_g)(h) e`.
    pub fn from_generators(
        data: &CoisotropicData,
        lambda: Rat,
        mu: Rat,
        gammas: &[Cochain],
    ) -> Result<Self> {
        if gammas.len() != data.num_generators() {
            return Err(Error::Incompatible(format!(
                "{} generator operators for {} generators",
                gammas.len(),
                data.num_generators()
            )));
        }
        let amb = gammas
            .first()
            .map(|g| g.ambient().clone())
            .unwrap_or_else(|| data.ambient(1));
        let n = data.nvars();
        let mut op = Cochain::zero(&amb, 1);
        for ((&g, gamma), anchor) in data.generators.iter().zip(gammas).zip(&data.anchor) {
            if gamma.arity() != 0 || gamma.ambient() != &amb {
                return Err(Error::Incompatible(
                    "generator operators must share one module".into(),
                ));
            }
            let dg = RingOp::partial(n, unit_exp(n, g));
            op = op.add(&Cochain::from_ring_op(&amb, &dg).compose_at(gamma)?);
            if !lambda.is_zero() {
                let sym = anchor.insert(0, &dg).scale(&lambda);
                op = op.add(&Cochain::from_ring_op(&amb, &sym));
            }
        }
        Ok(Connection { lambda, mu, op })
    }

    /// All `Γ_g = 0`.
    pub fn zero(data: &CoisotropicData, rank: usize, lambda: Rat, mu: Rat) -> Result<Self> {
        let amb = data.ambient(rank);
        let gammas = vec![Cochain::zero(&amb, 0); data.num_generators()];
        Self::from_generators(data, lambda, mu, &gammas)
    }

    pub fn op(&self) -> &Cochain {
        &self.op
    }

    pub fn ambient(&self) -> &Ambient {
        self.op.ambient()
    }

    pub fn rank(&self) -> usize {
        self.ambient().rank
    }

    /// Same operator, different declared symbols.
    pub fn redeclare(&self, lambda: Rat, mu: Rat) -> Self {
        Connection {
            lambda,
            mu,
            op: self.op.clone(),
        }
    }

    /// `Γ_g`, indexed by position among the generators.
    pub fn gamma(&self, data: &CoisotropicData, g: usize) -> Result<Cochain> {
        let x = Poly::var(data.nvars(), data.generators[g]);
        self.op.fix_arg(0, &x)
    }

    pub fn gammas(&self, data: &CoisotropicData) -> Result<Vec<Cochain>> {
        (0..data.num_generators())
            .map(|g| self.gamma(data, g))
            .collect()
    }

    /// The canonical operator with this connection's `Γ_g` and declared `λ`.
    pub fn lifted(&self, data: &CoisotropicData) -> Result<Self> {
        Self::from_generators(
            data,
            self.lambda.clone(),
            self.mu.clone(),
            &self.gammas(data)?,
        )
    }

    /// `γ(Σ c_g x̄_g, ·)` with `O_Y` coefficients `c_g`.
    pub fn eval_class(&self, data: &CoisotropicData, class: &[Poly]) -> Result<Cochain> {
        self.lifted(data)?.op.fix_arg(0, &data.lift(class))
    }

    /// `Γ_g = μ p(x_g) + A_g`; returns the order-0 parts `A_g`.
    pub fn potentials(&self, data: &CoisotropicData) -> Result<Vec<PolyMatrix>> {
        let amb = self.ambient().clone();
        let mut out = Vec::new();
        for (g, anchor) in data.anchor.iter().enumerate() {
            let sym = module_vector_field(&amb, anchor).scale(&self.mu);
            let rest = self.gamma(data, g)?.sub(&sym);
            out.push(rest.as_matrix().ok_or_else(|| {
                Error::Precondition(format!(
                    "generator {} operator does not have scalar module symbol",
                    g + 1
                ))
            })?);
        }
        Ok(out)
    }

    /// `Γ_g + ζ(x_g)` for a degree-1 normal cochain `ζ`.
    pub fn shift(&self, data: &CoisotropicData, zeta: &NormalCochain) -> Result<Self> {
        if zeta.degree() != 1 {
            return Err(Error::Precondition(
                "shift needs a degree-1 normal cochain".into(),
            ));
        }
        let amb = self.ambient().clone();
        let gammas: Vec<Cochain> = self
            .gammas(data)?
            .into_iter()
            .enumerate()
            .map(|(g, c)| c.add(&Cochain::endomorphism(&amb, &zeta.get(&[g]))))
            .collect();
        Self::from_generators(data, self.lambda.clone(), self.mu.clone(), &gammas)
    }

    pub fn fmt_with(
        &self,
        data: &CoisotropicData,
        names: &[String],
    ) -> Result<Vec<(String, String)>> {
        let mut out = Vec::new();
        for (g, c) in self.gammas(data)?.iter().enumerate() {
            let name = names
                .get(data.generators[g])
                .cloned()
                .unwrap_or_else(|| format!("x{}", data.generators[g] + 1));
            out.push((name, c.fmt_with(names)));
        }
        Ok(out)
    }
}

/// A scalar vector field acting entrywise on `E`, as an arity-0 cochain.
pub fn module_vector_field(amb: &Ambient, v: &RingOp) -> Cochain {
    let parts: Vec<_> = v
        .terms()
        .map(|(ds, f)| {
            (
                ds[0].clone(),
                PolyMatrix::scalar(amb.rank, &amb.restrict(f)),
            )
        })
        .collect();
    Cochain::module_operator(amb, &parts)
}

/// Commutator of two arity-0 operators.
pub fn op_commutator(a: &Cochain, b: &Cochain) -> Result<Cochain> {
    Ok(a.compose_at(b)?.sub(&b.compose_at(a)?))
}

fn order0(c: &Cochain, what: &str) -> Result<PolyMatrix> {
    c.as_matrix()
        .ok_or_else(|| Error::Precondition(format!("{} is not of order 0", what)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolLaw {
    /// `γ(a x, e) − a γ(x, e) = λ p(x)(a) e`
    Lambda,
    /// `γ(x, a e) − a γ(x, e) = μ p(x)(a) e`
    Mu,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolWitness {
    pub law: SymbolLaw,
    pub generator: usize,
    pub a: Poly,
    pub e: Vec<Poly>,
    pub defect: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolReport {
    pub holds: bool,
    pub witness: Option<SymbolWitness>,
}

/// The two symbol laws, as operator identities. On failure, the first
/// monomial test pair on which a law fails.
pub fn check_symbols(gamma: &Connection, data: &CoisotropicData) -> Result<SymbolReport> {
    let amb = gamma.ambient().clone();
    let act = Cochain::action(&amb);
    for (g, anchor) in data.anchor.iter().enumerate() {
        let x = Poly::var(data.nvars(), data.generators[g]);
        let omega = gamma.op.contract(0, &x)?;
        let big_gamma = omega.fix_arg(0, &Poly::one(data.nvars()))?;
        let sym = Cochain::from_ring_op(&amb, anchor);
        let a_gamma = act.compose_at(&big_gamma)?;
        let lam = omega.sub(&a_gamma).sub(&sym.scale(&gamma.lambda));
        let mu = big_gamma
            .compose_at(&act)?
            .sub(&a_gamma)
            .sub(&sym.scale(&gamma.mu));
        for (law, defect) in [(SymbolLaw::Lambda, lam), (SymbolLaw::Mu, mu)] {
            if let Some((args, e, v)) = defect.witness() {
                return Ok(SymbolReport {
                    holds: false,
                    witness: Some(SymbolWitness {
                        law,
                        generator: g,
                        a: args[0].clone(),
                        e,
                        defect: v,
                    }),
                });
            }
        }
    }
    Ok(SymbolReport {
        holds: true,
        witness: None,
    })
}

/// Leibniz connection on `E ⊗ F` (Kronecker order, `E` outer) with
/// symbols `(λ + λ′, μ)`.
pub fn tensor_connection(
    ge: &Connection,
    gf: &Connection,
    data: &CoisotropicData,
) -> Result<Connection> {
    if ge.mu != gf.mu {
        return Err(Error::Incompatible(format!(
            "module symbols differ: {} and {}",
            ge.mu, gf.mu
        )));
    }
    let (r, s) = (ge.rank(), gf.rank());
    let amb = data.ambient(r * s);
    let n = data.nvars();
    let ae = ge.potentials(data)?;
    let af = gf.potentials(data)?;
    let mut gammas = Vec::new();
    for (g, anchor) in data.anchor.iter().enumerate() {
        let m = &ae[g].kron(&PolyMatrix::identity(s, n)) + &PolyMatrix::identity(r, n).kron(&af[g]);
        let d = module_vector_field(&amb, anchor).scale(&ge.mu);
        gammas.push(d.add(&Cochain::endomorphism(&amb, &m)));
    }
    Connection::from_generators(data, &ge.lambda + &gf.lambda, ge.mu.clone(), &gammas)
}

/// Connection on the dual of a line bundle, from
/// `p(x)⟨l, l^∨⟩ = ⟨γ(x,l), l^∨⟩ + ⟨l, γ^∨(x,l^∨)⟩`: `Γ^∨_g = μ p(x_g) − A_g`.
pub fn dual_connection(gl: &Connection, data: &CoisotropicData) -> Result<Connection> {
    if gl.rank() != 1 {
        return Err(Error::Precondition(format!(
            "dual needs rank 1, got {}",
            gl.rank()
        )));
    }
    let amb = gl.ambient().clone();
    let a = gl.potentials(data)?;
    let gammas: Vec<Cochain> = data
        .anchor
        .iter()
        .zip(&a)
        .map(|(anchor, ag)| {
            module_vector_field(&amb, anchor)
                .scale(&gl.mu)
                .sub(&Cochain::endomorphism(&amb, ag))
        })
        .collect();
    Connection::from_generators(data, -gl.lambda.clone(), gl.mu.clone(), &gammas)
}

/// `c(x_i, x_j) = [Γ_i, Γ_j] − γ({x_i, x_j}_P, ·)` as a degree-2 normal cochain.
pub fn curvature(gamma: &Connection, data: &CoisotropicData) -> Result<NormalCochain> {
    let gs = gamma.gammas(data)?;
    let k = data.num_generators();
    let mut c = NormalCochain::zero(gamma.ambient(), k, 2);
    for i in 0..k {
        for j in i + 1..k {
            let comm = op_commutator(&gs[i], &gs[j])?;
            let br = gamma.eval_class(data, &data.bracket[i][j])?;
            let m = order0(&comm.sub(&br), "curvature")?;
            c.set(vec![i, j], m);
        }
    }
    Ok(c)
}

/// Antisymmetric `O_Y`-multilinear forms on conormal generators with values
/// in `End(E)`, stored on strictly increasing generator tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalCochain {
    rank: usize,
    nvars: usize,
    ngens: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, PolyMatrix>,
}

/// Sign that sorts `t`, or `None` on a repeated index.
fn sort_sign(t: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = t.to_vec();
    let mut neg = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                neg = !neg;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, neg))
}

/// Strictly increasing tuples of length `k` from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl NormalCochain {
    pub fn zero(amb: &Ambient, ngens: usize, degree: usize) -> Self {
        NormalCochain {
            rank: amb.rank,
            nvars: amb.nvars,
            ngens,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// A degree-0 cochain, i.e. an endomorphism.
    pub fn endomorphism(amb: &Ambient, ngens: usize, m: PolyMatrix) -> Self {
        let mut c = Self::zero(amb, ngens, 0);
        c.set(vec![], m);
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_generators(&self) -> usize {
        self.ngens
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &PolyMatrix)> {
        self.comps.iter()
    }

    /// Sets the value on an increasing tuple.
    pub fn set(&mut self, tuple: Vec<usize>, m: PolyMatrix) {
        assert_eq!(tuple.len(), self.degree);
        assert!(tuple.windows(2).all(|w| w[0] < w[1]), "increasing tuple");
        if m.is_zero() {
            self.comps.remove(&tuple);
        } else {
            self.comps.insert(tuple, m);
        }
    }

    /// Value on any tuple, by antisymmetry.
    pub fn get(&self, tuple: &[usize]) -> PolyMatrix {
        let zero = PolyMatrix::zero(self.rank, self.nvars);
        match sort_sign(tuple) {
            None => zero,
            Some((t, neg)) => match self.comps.get(&t) {
                None => zero,
                Some(m) if neg => -m,
                Some(m) => m.clone(),
            },
        }
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.rank != o.rank || self.ngens != o.ngens || self.degree != o.degree {
            return Err(Error::Incompatible(
                "normal cochains of different shape".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let mut r = self.clone();
        for (t, m) in &o.comps {
            let v = &r.get(t) + m;
            r.set(t.clone(), v);
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut r = self.clone();
        r.comps = self
            .comps
            .iter()
            .map(|(t, m)| (t.clone(), m.scale(c)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        r
    }

    /// `(α ∧ β)(x_1..x_{p+q}) = Σ_shuffles sgn · α(x_S) β(x_{S^c})`, with
    /// matrix products in the value.
    pub fn wedge(&self, o: &Self) -> Result<Self> {
        if self.rank != o.rank || self.ngens != o.ngens {
            return Err(Error::Incompatible(
                "normal cochains of different shape".into(),
            ));
        }
        let (p, q) = (self.degree, o.degree);
        let mut r = NormalCochain {
            degree: p + q,
            comps: BTreeMap::new(),
            ..self.clone()
        };
        for t in increasing_tuples(self.ngens, p + q) {
            let mut acc = PolyMatrix::zero(self.rank, self.nvars);
            for s in increasing_tuples(p + q, p) {
                let inv: usize = s.iter().enumerate().map(|(k, &pos)| pos - k).sum();
                let left: Vec<usize> = s.iter().map(|&i| t[i]).collect();
                let right: Vec<usize> = (0..p + q)
                    .filter(|i| !s.contains(i))
                    .map(|i| t[i])
                    .collect();
                let term = &self.get(&left) * &o.get(&right);
                acc = if inv.is_multiple_of(2) {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            r.set(t, acc);
        }
        Ok(r)
    }

    /// Graded commutator `α ∧ β − (−1)^{pq} β ∧ α`.
    pub fn bracket(&self, o: &Self) -> Result<Self> {
        let ab = self.wedge(o)?;
        let ba = o.wedge(self)?;
        if (self.degree * o.degree).is_multiple_of(2) {
            ab.sub(&ba)
        } else {
            ab.add(&ba)
        }
    }

    /// Basis with monomial entries of degree `≤ max_degree` on `Y`.
    pub fn basis(amb: &Ambient, ngens: usize, degree: usize, max_degree: u32) -> Vec<Self> {
        let y = amb.y_vars();
        let mut out = Vec::new();
        for t in increasing_tuples(ngens, degree) {
            for e in exps_up_to(amb.nvars, &y, max_degree) {
                for i in 0..amb.rank {
                    for j in 0..amb.rank {
                        let mut m = PolyMatrix::zero(amb.rank, amb.nvars);
                        m.set(i, j, Poly::monomial(amb.nvars, e.clone(), Rat::one()));
                        let mut c = Self::zero(amb, ngens, degree);
                        c.set(t.clone(), m);
                        out.push(c);
                    }
                }
            }
        }
        out
    }
}

/// `[Γ, M]` for an order-0 `M`, which is again of order 0.
fn bracket_with_matrix(g: &Cochain, m: &PolyMatrix) -> Result<PolyMatrix> {
    let amb = g.ambient().clone();
    order0(
        &op_commutator(g, &Cochain::endomorphism(&amb, m))?,
        "[γ, ω]",
    )
}

/// `d ω(x_0..x_n) = Σ_j (−1)^j [γ(x_j,·), ω(…x̂_j…)]
///                + Σ_{i<j} (−1)^{i+j} ω({x_i,x_j}_P, …x̂_i…x̂_j…)`.
pub fn normal_differential(
    omega: &NormalCochain,
    gamma: &Connection,
    data: &CoisotropicData,
) -> Result<NormalCochain> {
    let gs = gamma.gammas(data)?;
    let k = data.num_generators();
    let n = omega.degree;
    let mut out = NormalCochain {
        degree: n + 1,
        comps: BTreeMap::new(),
        ..omega.clone()
    };
    for t in increasing_tuples(k, n + 1) {
        let mut acc = PolyMatrix::zero(omega.rank, omega.nvars);
        for j in 0..=n {
            let rest: Vec<usize> = t
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, &x)| x)
                .collect();
            let v = omega.get(&rest);
            if v.is_zero() {
                continue;
            }
            let b = bracket_with_matrix(&gs[t[j]], &v)?;
            acc = if j % 2 == 0 { &acc + &b } else { &acc - &b };
        }
        for i in 0..=n {
            for j in i + 1..=n {
                let rest: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|(l, _)| *l != i && *l != j)
                    .map(|(_, &x)| x)
                    .collect();
                let coeffs = &data.bracket[t[i]][t[j]];
                let mut v = PolyMatrix::zero(omega.rank, omega.nvars);
                for (g, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut tup = vec![g];
                    tup.extend_from_slice(&rest);
                    v = &v + &omega.get(&tup).mul_poly(c).restrict_zero(&data.generators);
                }
                acc = if (i + j) % 2 == 0 {
                    &acc + &v
                } else {
                    &acc - &v
                };
            }
        }
        out.set(t, acc.restrict_zero(&data.generators));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct McNormalReport {
    /// `d ζ + [ζ, ζ] = 0`.
    pub holds: bool,
    pub residual: NormalCochain,
    /// `c(γ + ζ) = c(γ) + dζ + [ζ, ζ]`.
    pub shift_identity: bool,
}

/// `[ζ, ζ](x, y) = ζ(x)ζ(y) − ζ(y)ζ(x)` for degree-1 `ζ`.
pub fn self_bracket(zeta: &NormalCochain) -> Result<NormalCochain> {
    zeta.wedge(zeta)
}

pub fn mc_normal_check(
    zeta: &NormalCochain,
    gamma: &Connection,
    data: &CoisotropicData,
) -> Result<McNormalReport> {
    let d = normal_differential(zeta, gamma, data)?;
    let residual = d.add(&self_bracket(zeta)?)?;
    let shifted = curvature(&gamma.shift(data, zeta)?, data)?;
    let predicted = curvature(gamma, data)?.add(&residual)?;
    Ok(McNormalReport {
        holds: residual.is_zero(),
        shift_identity: shifted == predicted,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplittingReport {
    pub degenerate: bool,
    /// `γ` is a (½,1)-connection.
    pub splits: bool,
    /// `c(γ) = 0`.
    pub flat: bool,
    pub symbol_witness: Option<SymbolWitness>,
}

pub fn atiyah_splitting_check(
    gamma: &Connection,
    data: &CoisotropicData,
) -> Result<SplittingReport> {
    if data.num_generators() == 0 || data.anchor_rank() < data.num_generators() {
        return Ok(SplittingReport {
            degenerate: true,
            splits: false,
            flat: false,
            symbol_witness: None,
        });
    }
    let half = Rat::new(1.into(), 2.into());
    let rep = check_symbols(&gamma.redeclare(half, Rat::one()), data)?;
    let flat = rep.holds && curvature(gamma, data)?.is_zero();
    Ok(SplittingReport {
        degenerate: false,
        splits: rep.holds,
        flat,
        symbol_witness: rep.witness,
    })
}

/// Whether `[c(γ), ω] = 0` for every basis cochain of the given degrees.
pub fn weakly_obstructed(
    gamma: &Connection,
    data: &CoisotropicData,
    degrees: &[usize],
    max_degree: u32,
) -> Result<bool> {
    let c = curvature(gamma, data)?;
    for &d in degrees {
        for w in NormalCochain::basis(gamma.ambient(), data.num_generators(), d, max_degree) {
            if !c.bracket(&w)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::Ideal;
    use crate::poisson::{anchor, Bivector};
    use crate::poly::{rat, ratio};

    fn lagrangian() -> CoisotropicData {
        let mut b = Bivector::zero(2);
        b.set(0, 1, Poly::one(2)).unwrap();
        anchor(&b, &Ideal::coordinate(2, &[1])).unwrap()
    }

    fn rank2_example(m: &PolyMatrix) -> (CoisotropicData, Connection) {
        let mut b = Bivector::zero(4);
        b.set(0, 2, Poly::one(4)).unwrap();
        b.set(1, 3, Poly::one(4)).unwrap();
        let data = anchor(&b, &Ideal::coordinate(4, &[0, 1])).unwrap();
        let amb = data.ambient(m.size());
        let id = PolyMatrix::identity(m.size(), 4);
        let g1 = Cochain::module_operator(&amb, &[(vec![0, 0, 1, 0], id.clone())]);
        let g2 = Cochain::module_operator(
            &amb,
            &[
                (vec![0, 0, 0, 1], id),
                (vec![0; 4], m.mul_poly(&Poly::var(4, 2))),
            ],
        );
        let c = Connection::from_generators(&data, ratio(1, 2), rat(1), &[g1, g2]).unwrap();
        (data, c)
    }

    fn lagrangian_connection(data: &CoisotropicData, shift: i64) -> Connection {
        let amb = data.ambient(1);
        let g = Cochain::module_operator(
            &amb,
            &[
                (
                    vec![1, 0],
                    PolyMatrix::scalar(1, &Poly::constant(2, rat(-1))),
                ),
                (
                    vec![0, 0],
                    PolyMatrix::scalar(1, &Poly::var(2, 0).scale(&rat(shift))),
                ),
            ],
        );
        Connection::from_generators(data, ratio(1, 2), rat(1), &[g]).unwrap()
    }

    #[test]
    fn zero_connection_has_zero_symbols() {
        let data = lagrangian();
        let c = Connection::zero(&data, 1, rat(0), rat(0)).unwrap();
        assert!(check_symbols(&c, &data).unwrap().holds);
    }

    #[test]
    fn lagrangian_symbols_and_wrong_declaration() {
        let data = lagrangian();
        let c = lagrangian_connection(&data, 0);
        assert!(check_symbols(&c, &data).unwrap().holds);
        let bad = check_symbols(&c.redeclare(rat(0), rat(1)), &data).unwrap();
        let w = bad.witness.unwrap();
        assert_eq!(w.law, SymbolLaw::Lambda);
        assert_eq!(w.a, Poly::var(2, 0));
        assert_eq!(w.e, vec![Poly::one(2)]);
    }

    #[test]
    fn rank_two_curvature_is_m() {
        let m = PolyMatrix::from_rats(4, &[vec![rat(0), rat(1)], vec![rat(2), rat(0)]]);
        let (data, c) = rank2_example(&m);
        assert!(check_symbols(&c, &data).unwrap().holds);
        let curv = curvature(&c, &data).unwrap();
        assert_eq!(curv.get(&[0, 1]), m);
        assert_eq!(curv.get(&[1, 0]), -&m);
    }

    #[test]
    fn bianchi_and_d_squared() {
        let m = PolyMatrix::from_rats(4, &[vec![rat(1), rat(1)], vec![rat(0), rat(3)]]);
        let (data, c) = rank2_example(&m);
        let curv = curvature(&c, &data).unwrap();
        assert!(normal_differential(&curv, &c, &data).unwrap().is_zero());
        for deg in 0..=1 {
            for w in NormalCochain::basis(c.ambient(), 2, deg, 1) {
                let dd =
                    normal_differential(&normal_differential(&w, &c, &data).unwrap(), &c, &data)
                        .unwrap();
                assert_eq!(dd, curv.bracket(&w).unwrap());
            }
        }
    }

    #[test]
    fn flattening_shift() {
        let m = PolyMatrix::from_rats(4, &[vec![rat(0), rat(1)], vec![rat(0), rat(0)]]);
        let (data, c) = rank2_example(&m);
        let mut zeta = NormalCochain::zero(c.ambient(), 2, 1);
        zeta.set(vec![1], -&m.mul_poly(&Poly::var(4, 2)));
        let rep = mc_normal_check(&zeta, &c, &data).unwrap();
        assert!(rep.shift_identity);
        assert!(curvature(&c.shift(&data, &zeta).unwrap(), &data)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn dual_of_lagrangian_line() {
        let data = lagrangian();
        let c = lagrangian_connection(&data, 1);
        let d = dual_connection(&c, &data).unwrap();
        assert_eq!(d.lambda, ratio(-1, 2));
        let g = d.gamma(&data, 0).unwrap();
        let want = Cochain::module_operator(
            d.ambient(),
            &[
                (
                    vec![1, 0],
                    PolyMatrix::scalar(1, &Poly::constant(2, rat(-1))),
                ),
                (vec![0, 0], PolyMatrix::scalar(1, &-&Poly::var(2, 0))),
            ],
        );
        assert_eq!(g, want);
        assert!(check_symbols(&d, &data).unwrap().holds);
    }

    #[test]
    fn tensor_of_half_and_minus_half() {
        let data = lagrangian();
        let c = lagrangian_connection(&data, 1);
        let d = dual_connection(&c, &data).unwrap();
        let t = tensor_connection(&c, &d, &data).unwrap();
        assert_eq!(t.lambda, rat(0));
        assert!(check_symbols(&t, &data).unwrap().holds);
        // potentials cancel: Γ = p(x̄)
        assert_eq!(t.potentials(&data).unwrap()[0], PolyMatrix::zero(1, 2));
    }

    #[test]
    fn splitting_reports() {
        let data = lagrangian();
        let r = atiyah_splitting_check(&lagrangian_connection(&data, 0), &data).unwrap();
        assert!(!r.degenerate && r.splits && r.flat);
        let m = PolyMatrix::from_rats(4, &[vec![rat(0), rat(1)], vec![rat(0), rat(0)]]);
        let (d2, c2) = rank2_example(&m);
        let r2 = atiyah_splitting_check(&c2, &d2).unwrap();
        assert!(!r2.degenerate && r2.splits && !r2.flat);
        let z = anchor(&Bivector::zero(2), &Ideal::coordinate(2, &[1])).unwrap();
        let zc = Connection::zero(&z, 1, rat(0), rat(0)).unwrap();
        assert!(atiyah_splitting_check(&zc, &z).unwrap().degenerate);
    }
}
