//! Star products and the order-by-order construction of module deformations.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::connection::{
    check_symbols, curvature, dual_connection, module_vector_field, normal_differential,
    tensor_connection, Connection, NormalCochain, SymbolReport,
};
use crate::diffop::{Ambient, Cochain, RingOp, SeriesCochain};
use crate::error::{Error, Result};
use crate::hochschild::{
    antisym_vanishing_on_ideal, capped_basis, cochain_coordinates, d_hoch, star_residual,
    CochainCoord, CurvedDgla,
};
use crate::ideal::Ideal;
use crate::linalg::solve_columns;
use crate::linfty::{gauge_path, log_series, HochschildAlgebra, IntervalElement};
use crate::matrix::PolyMatrix;
use crate::poisson::{anchor, coisotropy_check, Bivector, CoisotropicData};
use crate::poly::{exp_add, ratio, unit_exp, Poly, Rat};

/// `a ⋆ b = ab + ε α_1(a,b) + ε² α_2(a,b)`, with no first-order gluing term.
#[derive(Clone, Debug, PartialEq)]
pub struct StarProduct {
    alpha1: RingOp,
    alpha2: RingOp,
}

impl StarProduct {
    /// Rejects a pair that is not associative modulo `ε³`.
    pub fn new(alpha1: RingOp, alpha2: RingOp) -> Result<Self> {
        if alpha1.arity() != 2 || alpha2.arity() != 2 {
            return Err(Error::Arity {
                expected: 2,
                got: alpha1.arity().max(alpha2.arity()),
            });
        }
        let rep = star_assoc_check(&alpha1, &alpha2);
        if let (Some(n), Some(r)) = (rep.order, rep.residual) {
            return Err(Error::Precondition(format!(
                "star product not associative at order {}: residual {:?}",
                n, r
            )));
        }
        Ok(StarProduct { alpha1, alpha2 })
    }

    pub fn zero(nvars: usize) -> Self {
        StarProduct {
            alpha1: RingOp::zero(nvars, 2),
            alpha2: RingOp::zero(nvars, 2),
        }
    }

    pub fn nvars(&self) -> usize {
        self.alpha1.nvars()
    }

    pub fn alpha1(&self) -> &RingOp {
        &self.alpha1
    }

    pub fn alpha2(&self) -> &RingOp {
        &self.alpha2
    }

    pub fn as_vec(&self) -> Vec<RingOp> {
        vec![self.alpha1.clone(), self.alpha2.clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.alpha1.is_zero() && self.alpha2.is_zero()
    }

    pub fn is_symmetric2(&self) -> bool {
        self.obstruction2().form.is_zero()
    }

    /// `𝒜_2(a,b) = α_2(a,b) − α_2(b,a)`.
    pub fn obstruction2(&self) -> Obstruction2 {
        Obstruction2 {
            form: self.alpha2.sub(&self.alpha2.permute(&[1, 0])),
        }
    }

    /// `α_n(a,b)` for `n = 1, 2`.
    pub fn apply(&self, n: usize, a: &Poly, b: &Poly) -> Result<Poly> {
        match n {
            1 => self.alpha1.apply(&[a.clone(), b.clone()]),
            2 => self.alpha2.apply(&[a.clone(), b.clone()]),
            _ => Ok(Poly::zero(self.nvars())),
        }
    }
}

/// Moyal product of a constant bivector, to second order.
pub fn moyal(p: &Bivector) -> Result<StarProduct> {
    if !p.is_constant() {
        return Err(Error::Precondition(
            "Moyal product needs a constant bivector".into(),
        ));
    }
    let n = p.nvars();
    let mut a1 = RingOp::zero(n, 2);
    let mut a2 = RingOp::zero(n, 2);
    for i in 0..n {
        for j in 0..n {
            let pij = p.get(i, j);
            if pij.is_zero() {
                continue;
            }
            a1.add_term(
                vec![unit_exp(n, i), unit_exp(n, j)],
                pij.scale(&ratio(1, 2)),
            );
            for k in 0..n {
                for l in 0..n {
                    let pkl = p.get(k, l);
                    if pkl.is_zero() {
                        continue;
                    }
                    let ds = vec![
                        exp_add(&unit_exp(n, i), &unit_exp(n, k)),
                        exp_add(&unit_exp(n, j), &unit_exp(n, l)),
                    ];
                    a2.add_term(ds, (pij * pkl).scale(&ratio(1, 8)));
                }
            }
        }
    }
    StarProduct::new(a1, a2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssocReport {
    pub holds: bool,
    /// First order with a nonzero residual.
    pub order: Option<usize>,
    pub residual: Option<RingOp>,
}

/// Associativity of `ab + εα_1 + ε²α_2` modulo `ε³`.
pub fn star_assoc_check(alpha1: &RingOp, alpha2: &RingOp) -> AssocReport {
    for (n, r) in star_residual(&[alpha1.clone(), alpha2.clone()])
        .into_iter()
        .enumerate()
    {
        if !r.is_zero() {
            return AssocReport {
                holds: false,
                order: Some(n + 1),
                residual: Some(r),
            };
        }
    }
    AssocReport {
        holds: true,
        order: None,
        residual: None,
    }
}

/// The antisymmetrized second-order term of a star product.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction2 {
    pub form: RingOp,
}

impl Obstruction2 {
    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    /// `𝒜_2(x_i, x_j)|_Y` on generator pairs.
    pub fn on_generators(&self, data: &CoisotropicData) -> Result<Vec<Vec<Poly>>> {
        let n = data.nvars();
        let k = data.num_generators();
        let mut out = vec![vec![Poly::zero(n); k]; k];
        for i in 0..k {
            for j in 0..k {
                let xi = Poly::var(n, data.generators[i]);
                let xj = Poly::var(n, data.generators[j]);
                out[i][j] = self.form.apply(&[xi, xj])?.restrict_zero(&data.generators);
            }
        }
        Ok(out)
    }
}

/// Bounds for the differential-operator ansatz: total order and
/// coefficient degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HkrCaps {
    pub order: u32,
    pub degree: u32,
}

impl Default for HkrCaps {
    fn default() -> Self {
        HkrCaps {
            order: 4,
            degree: 6,
        }
    }
}

impl HkrCaps {
    pub fn new(order: u32, degree: u32) -> Self {
        HkrCaps { order, degree }
    }

    /// Escalation schedule: both bounds grow together until each hits its cap.
    pub fn stages(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for s in 0..=self.order.max(self.degree) {
            let st = (s.min(self.order), s.min(self.degree));
            if out.last() != Some(&st) {
                out.push(st);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HkrCondition {
    /// The defect is not a Hochschild cocycle.
    NotCocycle,
    /// `R(x_g a, e) ≠ 0` for the given generator.
    NotVanishingOnIdeal { generator: usize },
    /// The restriction to `I ⊗ I ⊗ E` is not symmetric on this pair.
    NotSymmetricOnIdeal { pair: (usize, usize) },
}

#[derive(Clone, Debug, PartialEq)]
pub struct HkrWitness {
    pub condition: HkrCondition,
    pub residual: Cochain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HkrSolution {
    pub solution: Cochain,
    /// Caps of the stage where the solution was found.
    pub caps: (u32, u32),
    /// Dimension of the solution space within those caps.
    pub freedom: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HkrOutcome {
    Solved(HkrSolution),
    Failed(HkrWitness),
}

/// Checks the solvability conditions for `d x = target`.
pub fn hkr_conditions(target: &Cochain) -> Result<Option<HkrWitness>> {
    let amb = target.ambient();
    let dt = d_hoch(target)?;
    if !dt.is_zero() {
        return Ok(Some(HkrWitness {
            condition: HkrCondition::NotCocycle,
            residual: dt,
        }));
    }
    match target.arity() {
        1 => {
            for (g, &v) in amb.ideal_vars.iter().enumerate() {
                let r = target.contract(0, &Poly::var(amb.nvars, v))?;
                if !r.is_zero() {
                    return Ok(Some(HkrWitness {
                        condition: HkrCondition::NotVanishingOnIdeal { generator: g },
                        residual: r,
                    }));
                }
            }
        }
        2 => {
            if let Some((a, b)) = antisym_vanishing_on_ideal(target)? {
                let (xa, xb) = (
                    Poly::var(amb.nvars, amb.ideal_vars[a]),
                    Poly::var(amb.nvars, amb.ideal_vars[b]),
                );
                let r = target.contract(0, &xa)?.contract(1, &xb)?;
                let s = target.contract(0, &xb)?.contract(1, &xa)?.permute(&[1, 0]);
                return Ok(Some(HkrWitness {
                    condition: HkrCondition::NotSymmetricOnIdeal { pair: (a, b) },
                    residual: r.sub(&s),
                }));
            }
        }
        k => {
            return Err(Error::Arity {
                expected: 2,
                got: k,
            })
        }
    }
    Ok(None)
}

/// Solves `d_hoch x = target` for `x` of one lower arity. The target must
/// have arity 1 or 2. Among solutions within the first sufficient stage,
/// returns the one of least order, then least coefficient degree.
pub fn hkr_solve(target: &Cochain, caps: HkrCaps) -> Result<HkrOutcome> {
    if let Some(w) = hkr_conditions(target)? {
        return Ok(HkrOutcome::Failed(w));
    }
    let arity = target.arity() - 1;
    match ansatz_solve(target.ambient(), arity, target, caps, &[])? {
        Some(s) => Ok(HkrOutcome::Solved(HkrSolution {
            solution: s.solution,
            caps: s.caps,
            freedom: s.freedom,
        })),
        None => Err(Error::CapExhausted {
            order: caps.order,
            degree: caps.degree,
        }),
    }
}

struct Ansatz {
    solution: Cochain,
    extra: Vec<Rat>,
    caps: (u32, u32),
    freedom: usize,
}

type Column = BTreeMap<CochainCoord, Rat>;

/// `d x + Σ c_i extra_i = target` over an escalating capped ansatz for `x`.
fn ansatz_solve(
    amb: &Ambient,
    arity: usize,
    target: &Cochain,
    caps: HkrCaps,
    extra: &[Cochain],
) -> Result<Option<Ansatz>> {
    let tcoords = cochain_coordinates(target);
    let extra_cols: Vec<Column> = extra.iter().map(cochain_coordinates).collect();
    let mut cache: HashMap<CochainCoord, Column> = HashMap::new();
    for (o, deg) in caps.stages() {
        let mut basis: Vec<((u32, u32, CochainCoord), Cochain)> = capped_basis(amb, arity, o, deg)
            .into_iter()
            .map(|c| {
                let coord = cochain_coordinates(&c)
                    .into_keys()
                    .next()
                    .expect("basis element");
                ((c.order(), c.coeff_degree(), coord), c)
            })
            .collect();
        basis.sort_by(|a, b| a.0.cmp(&b.0));
        let mut cols = Vec::with_capacity(basis.len() + extra.len());
        for ((_, _, coord), c) in &basis {
            if !cache.contains_key(coord) {
                cache.insert(coord.clone(), cochain_coordinates(&d_hoch(c)?));
            }
            cols.push(cache[coord].clone());
        }
        cols.extend(extra_cols.iter().cloned());
        let (sol, nullity) = solve_columns(&cols, &tcoords);
        if let Some(x) = sol {
            let mut solution = Cochain::zero(amb, arity);
            for ((_, c), v) in basis.iter().zip(&x) {
                if !v.is_zero() {
                    solution = solution.add(&c.scale(v));
                }
            }
            return Ok(Some(Ansatz {
                solution,
                extra: x[basis.len()..].to_vec(),
                caps: (o, deg),
                freedom: nullity,
            }));
        }
    }
    Ok(None)
}

/// Corrections `α_1, …, α_r` to the action of `O_X` on a free `O_Y`-module,
/// together with the connection read off from `α_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleDeformation {
    data: CoisotropicData,
    alphas: Vec<Cochain>,
    gamma: Connection,
}

impl ModuleDeformation {
    /// `γ(x, e) = α_1(x, e)` with declared symbols `(½, 1)`.
    pub fn new(data: &CoisotropicData, alphas: Vec<Cochain>) -> Result<Self> {
        let Some(a1) = alphas.first() else {
            return Err(Error::Precondition(
                "a deformation needs at least one order".into(),
            ));
        };
        if let Some(a) = alphas.iter().find(|a| a.arity() != 1) {
            return Err(Error::Arity {
                expected: 1,
                got: a.arity(),
            });
        }
        let gamma = Connection::from_cochain(ratio(1, 2), Rat::one(), a1.clone())?;
        Ok(ModuleDeformation {
            data: data.clone(),
            alphas,
            gamma,
        })
    }

    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    pub fn data(&self) -> &CoisotropicData {
        &self.data
    }

    pub fn ambient(&self) -> &Ambient {
        self.alphas[0].ambient()
    }

    /// `α_n`, one-based.
    pub fn alpha(&self, n: usize) -> &Cochain {
        &self.alphas[n - 1]
    }

    pub fn alphas(&self) -> &[Cochain] {
        &self.alphas
    }

    pub fn gamma(&self) -> &Connection {
        &self.gamma
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        Self::new(&self.data, self.alphas[..order.min(self.order())].to_vec())
    }

    /// `Σ ε^n α_n` with zero constant term.
    pub fn as_series(&self) -> SeriesCochain {
        let amb = self.ambient().clone();
        let mut s = SeriesCochain::zero_cochains(&amb, 1, self.order());
        for (i, a) in self.alphas.iter().enumerate() {
            s.set(i + 1, a.clone());
        }
        s
    }

    /// Maurer–Cartan residual in the curved Hochschild algebra of the star product.
    pub fn mc_residual(&self, star: &StarProduct) -> Result<SeriesCochain> {
        let h = CurvedDgla::new(self.ambient(), &star.as_vec(), self.order())?;
        h.mc_residual(&self.as_series())
    }

    /// Order-`n` component of `a ⋆ e`; order 0 is the plain action.
    pub fn act(&self, n: usize, a: &Poly, e: &[Poly]) -> Result<Vec<Poly>> {
        if n == 0 {
            return Cochain::action(self.ambient()).apply(std::slice::from_ref(a), e);
        }
        self.alpha(n).apply(std::slice::from_ref(a), e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FirstOrder {
    Solved {
        deformation: ModuleDeformation,
        /// Solution-space dimension within the caps used.
        freedom: usize,
        caps: (u32, u32),
        /// Symbols of the derived connection against `(½, 1)`.
        symbols: SymbolReport,
    },
    /// `{x_a, x_b}` is not in the ideal.
    NotCoisotropic {
        pair: (usize, usize),
        bracket: Poly,
    },
    Failed(HkrWitness),
}

/// First-order deformation of the free module of the given rank over
/// `Y = V(ideal)`. With `target`, the normal part is shifted so that the
/// derived connection has the same generator operators.
pub fn solve_first_order(
    star: &StarProduct,
    p: &Bivector,
    ideal: &Ideal,
    rank: usize,
    target: Option<&Connection>,
    caps: HkrCaps,
) -> Result<FirstOrder> {
    let rep = coisotropy_check(p, ideal)?;
    if let Some((a, b, nf)) = rep.witness {
        return Ok(FirstOrder::NotCoisotropic {
            pair: (a, b),
            bracket: nf,
        });
    }
    let data = anchor(p, ideal)?;
    let amb = data.ambient(rank);
    let g = Cochain::from_ring_op(&amb, star.alpha1());
    let sol = match hkr_solve(&g, caps)? {
        HkrOutcome::Solved(s) => s,
        HkrOutcome::Failed(w) => return Ok(FirstOrder::Failed(w)),
    };
    let mut alpha1 = sol.solution;
    if let Some(t) = target {
        alpha1 = shift_to(&alpha1, t, &data)?;
    }
    let deformation = ModuleDeformation::new(&data, vec![alpha1])?;
    let symbols = check_symbols(deformation.gamma(), &data)?;
    Ok(FirstOrder::Solved {
        deformation,
        freedom: sol.freedom,
        caps: sol.caps,
        symbols,
    })
}

/// Adds `Σ_g ∂_g a · ζ_g(e)` so that `α(x_g, ·)` becomes the target's `Γ_g`.
fn shift_to(alpha1: &Cochain, target: &Connection, data: &CoisotropicData) -> Result<Cochain> {
    let amb = alpha1.ambient().clone();
    if target.ambient() != &amb {
        return Err(Error::Incompatible(
            "target connection lives on a different module".into(),
        ));
    }
    let n = data.nvars();
    let current =
        Connection::from_cochain(target.lambda.clone(), target.mu.clone(), alpha1.clone())?;
    let mut out = alpha1.clone();
    for (g, (t, c)) in target
        .gammas(data)?
        .iter()
        .zip(current.gammas(data)?)
        .enumerate()
    {
        let zeta = t.sub(&c).as_matrix().ok_or_else(|| {
            Error::Incompatible(format!(
                "target differs from the solution by a differential operator at generator {}",
                g + 1
            ))
        })?;
        let dg = RingOp::partial(n, unit_exp(n, data.generators[g]));
        out = out.add(
            &Cochain::from_ring_op(&amb, &dg).compose_at(&Cochain::endomorphism(&amb, &zeta))?,
        );
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum SecondOrder {
    Solved {
        deformation: ModuleDeformation,
        freedom: usize,
        caps: (u32, u32),
        /// `c(∇)` for `∇` on `E ⊗ L^∨`, when a line bundle was supplied.
        nabla_curvature: Option<NormalCochain>,
    },
    /// `c(γ)(x_i, x_j) − 𝒜_2(x_i, x_j)·id ≠ 0` on `pair`.
    Obstructed {
        pair: (usize, usize),
        obstruction: PolyMatrix,
        curvature: NormalCochain,
        nabla_curvature: Option<NormalCochain>,
    },
    Failed(HkrWitness),
}

/// Extends a first-order deformation to second order, or returns the
/// curvature obstruction.
pub fn solve_second_order(
    d1: &ModuleDeformation,
    star: &StarProduct,
    line: Option<&Connection>,
    caps: HkrCaps,
) -> Result<SecondOrder> {
    let data = d1.data().clone();
    let amb = d1.ambient().clone();
    let gamma = d1.gamma();
    let c = curvature(gamma, &data)?;
    let nabla_curvature = match line {
        Some(l) => {
            let nabla = tensor_connection(gamma, &dual_connection(l, &data)?, &data)?;
            Some(curvature(&nabla, &data)?)
        }
        None => None,
    };
    let a2 = star.obstruction2().on_generators(&data)?;
    let k = data.num_generators();
    for i in 0..k {
        for j in i + 1..k {
            let want = PolyMatrix::scalar(amb.rank, &a2[i][j]);
            let diff = &c.get(&[i, j]) - &want;
            if !diff.is_zero() {
                return Ok(SecondOrder::Obstructed {
                    pair: (i, j),
                    obstruction: diff,
                    curvature: c,
                    nabla_curvature,
                });
            }
        }
    }
    let a1 = d1.alpha(1);
    let g2 = Cochain::from_ring_op(&amb, star.alpha2())
        .add(&a1.insert_ring(0, star.alpha1())?)
        .sub(&a1.compose_at(a1)?);
    let sol = match hkr_solve(&g2, caps)? {
        HkrOutcome::Solved(s) => s,
        HkrOutcome::Failed(w) => return Ok(SecondOrder::Failed(w)),
    };
    let deformation = ModuleDeformation::new(&data, vec![a1.clone(), sol.solution])?;
    Ok(SecondOrder::Solved {
        deformation,
        freedom: sol.freedom,
        caps: sol.caps,
        nabla_curvature,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extension {
    /// `η` with `η(ae) − aη(e) = α_1(a, φ_1 e) − φ_1(α_1(a, e))`.
    Extends {
        eta: Cochain,
        freedom: usize,
        caps: (u32, u32),
    },
    /// `d_N φ_1` does not vanish on this generator.
    Obstructed { generator: usize, value: PolyMatrix },
}

/// Extends `id + εφ_1` to a second-order automorphism of the deformation.
pub fn extend_automorphism(
    d: &ModuleDeformation,
    phi1: &Cochain,
    caps: HkrCaps,
) -> Result<Extension> {
    let m = phi1
        .as_matrix()
        .filter(|_| phi1.arity() == 0)
        .ok_or_else(|| Error::Precondition("automorphism correction must be O_Y-linear".into()))?;
    let data = d.data();
    let w = NormalCochain::endomorphism(d.ambient(), data.num_generators(), m);
    let dn = normal_differential(&w, d.gamma(), data)?;
    for g in 0..data.num_generators() {
        let v = dn.get(&[g]);
        if !v.is_zero() {
            return Ok(Extension::Obstructed {
                generator: g,
                value: v,
            });
        }
    }
    let a1 = d.alpha(1);
    let r = a1.compose_at(phi1)?.sub(&phi1.compose_at(a1)?);
    match hkr_solve(&r.neg(), caps)? {
        HkrOutcome::Solved(s) => Ok(Extension::Extends {
            eta: s.solution,
            freedom: s.freedom,
            caps: s.caps,
        }),
        HkrOutcome::Failed(w) => Err(Error::Precondition(format!(
            "automorphism defect fails the solvability conditions: {:?}",
            w.condition
        ))),
    }
}

/// `a ⋆′ e` defined by `Φ(a ⋆ e) = a ⋆′ Φ(e)` with `Φ = id + Σ ε^n φ_n`.
pub fn conjugate(d: &ModuleDeformation, phis: &[Cochain]) -> Result<ModuleDeformation> {
    check_gauge_shape(d, phis)?;
    let mut out: Vec<Cochain> = Vec::new();
    for n in 1..=d.order() {
        let mut a = d.alpha(n).sub(&d_hoch(&phis[n - 1])?);
        for j in 1..n {
            let k = n - j;
            a = a.add(&phis[j - 1].compose_at(d.alpha(k))?);
            a = a.sub(&out[j - 1].compose_at(&phis[k - 1])?);
        }
        out.push(a);
    }
    ModuleDeformation::new(d.data(), out)
}

fn check_gauge_shape(d: &ModuleDeformation, phis: &[Cochain]) -> Result<()> {
    if phis.len() != d.order() {
        return Err(Error::OrderMismatch(format!(
            "{} gauge terms for a deformation of order {}",
            phis.len(),
            d.order()
        )));
    }
    if let Some(p) = phis.iter().find(|p| p.arity() != 0) {
        return Err(Error::Arity {
            expected: 0,
            got: p.arity(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeReport {
    pub holds: bool,
    pub failing_order: Option<usize>,
    pub residual: Option<Cochain>,
}

/// Residual of `φ_n(ae) + α_n(a,e) + Σ φ_j(α_k(a,e)) = aφ_n(e) + α′_n(a,e) + Σ α′_j(a, φ_k(e))`,
/// sums over `j, k ≥ 1` with `j + k = n`.
pub fn gauge_check_module(
    d: &ModuleDeformation,
    d2: &ModuleDeformation,
    phis: &[Cochain],
) -> Result<GaugeReport> {
    if d.order() != d2.order() {
        return Err(Error::OrderMismatch(format!(
            "orders {} and {}",
            d.order(),
            d2.order()
        )));
    }
    check_gauge_shape(d, phis)?;
    for n in 1..=d.order() {
        let mut r = d.alpha(n).sub(d2.alpha(n)).sub(&d_hoch(&phis[n - 1])?);
        for j in 1..n {
            let k = n - j;
            r = r.add(&phis[j - 1].compose_at(d.alpha(k))?);
            r = r.sub(&d2.alpha(j).compose_at(&phis[k - 1])?);
        }
        if !r.is_zero() {
            return Ok(GaugeReport {
                holds: false,
                failing_order: Some(n),
                residual: Some(r),
            });
        }
    }
    Ok(GaugeReport {
        holds: true,
        failing_order: None,
        residual: None,
    })
}

/// Finds `φ_1, φ_2` (order ≤ 2 deformations) with `d2 = conjugate(d, φ)`
/// inside the caps, if there are any.
pub fn gauge_solve(
    d: &ModuleDeformation,
    d2: &ModuleDeformation,
    caps: HkrCaps,
) -> Result<Option<Vec<Cochain>>> {
    if d.order() != d2.order() {
        return Err(Error::OrderMismatch(format!(
            "orders {} and {}",
            d.order(),
            d2.order()
        )));
    }
    if d.order() > 2 {
        return Err(Error::Precondition(
            "gauge search is implemented through order 2".into(),
        ));
    }
    let amb = d.ambient().clone();
    let t1 = d.alpha(1).sub(d2.alpha(1));
    let Some(p1) = ansatz_solve(&amb, 0, &t1, caps, &[])? else {
        return Ok(None);
    };
    if d.order() == 1 {
        return Ok(Some(vec![p1.solution]));
    }
    // φ_1 is fixed up to O_Y-linear m; the order-2 equation is linear in (φ_2, m)
    let kernel = capped_basis(&amb, 0, 0, caps.degree);
    let (a1, b1) = (d.alpha(1), d2.alpha(1));
    let extra: Vec<Cochain> = kernel
        .iter()
        .map(|m| Ok(b1.compose_at(m)?.sub(&m.compose_at(a1)?)))
        .collect::<Result<_>>()?;
    let t2 = d
        .alpha(2)
        .sub(d2.alpha(2))
        .add(&p1.solution.compose_at(a1)?)
        .sub(&b1.compose_at(&p1.solution)?);
    let Some(p2) = ansatz_solve(&amb, 0, &t2, caps, &extra)? else {
        return Ok(None);
    };
    let mut phi1 = p1.solution;
    for (m, c) in kernel.iter().zip(&p2.extra) {
        if !c.is_zero() {
            phi1 = phi1.add(&m.scale(c));
        }
    }
    Ok(Some(vec![phi1, p2.solution]))
}

/// `d` and `conjugate(d, φ)` as Maurer–Cartan elements of the curved
/// Hochschild algebra, joined by the interval-model path with constant
/// `dt`-part `−log Φ`.
#[derive(Clone, Debug)]
pub struct GaugeEncoding {
    pub dgla: CurvedDgla,
    pub start: SeriesCochain,
    pub end: SeriesCochain,
    pub path: IntervalElement<SeriesCochain>,
}

pub fn encode_gauge(
    d: &ModuleDeformation,
    phis: &[Cochain],
    star: &StarProduct,
) -> Result<GaugeEncoding> {
    let amb = d.ambient().clone();
    let order = d.order();
    let dgla = CurvedDgla::new(&amb, &star.as_vec(), order)?;
    let mut x = SeriesCochain::zero_cochains(&amb, 0, order);
    for (i, phi) in phis.iter().enumerate().take(order) {
        x.set(i + 1, phi.clone());
    }
    let b = log_series(&x)?.scale(&-Rat::one());
    let start = d.as_series();
    let end = conjugate(d, phis)?.as_series();
    let path = gauge_path(&HochschildAlgebra::new(&dgla), &start, &b, order + 2)?;
    Ok(GaugeEncoding {
        dgla,
        start,
        end,
        path,
    })
}

/// Rank-1 module `O_Y` with `Γ_g = p(x_g)`, symbols `(½, 1)`.
pub fn trivial_line(data: &CoisotropicData) -> Result<Connection> {
    let amb = data.ambient(1);
    let gammas: Vec<Cochain> = data
        .anchor
        .iter()
        .map(|a| module_vector_field(&amb, a))
        .collect();
    Connection::from_generators(data, ratio(1, 2), Rat::one(), &gammas)
}

/// Checks that `m` is a flat `(0, 1)`-connection.
pub fn check_flat_01(m: &Connection, data: &CoisotropicData) -> Result<()> {
    if !m.lambda.is_zero() || !m.mu.is_one() {
        return Err(Error::Precondition(format!(
            "expected a (0,1)-connection, got ({},{})",
            m.lambda, m.mu
        )));
    }
    let rep = check_symbols(m, data)?;
    if let Some(w) = rep.witness {
        return Err(Error::Precondition(format!(
            "symbol check fails at generator {}",
            w.generator + 1
        )));
    }
    let c = curvature(m, data)?;
    if let Some((t, _)) = c.components().find(|(_, v)| !v.is_zero()) {
        return Err(Error::Precondition(format!(
            "not flat on generators ({},{})",
            t[0] + 1,
            t[1] + 1
        )));
    }
    Ok(())
}

/// `M ⊗ L` for a flat `(0,1)`-connection `M`.
pub fn quant(m: &Connection, line: &Connection, data: &CoisotropicData) -> Result<Connection> {
    check_flat_01(m, data)?;
    tensor_connection(m, line, data)
}

/// `M ⊗ L^∨`.
pub fn dequant(m: &Connection, line: &Connection, data: &CoisotropicData) -> Result<Connection> {
    tensor_connection(m, &dual_connection(line, data)?, data)
}

/// `E_1 ⊗ E_2 ⊗ L^∨`.
pub fn boxtimes(
    e1: &Connection,
    e2: &Connection,
    line: &Connection,
    data: &CoisotropicData,
) -> Result<Connection> {
    let t = tensor_connection(e1, e2, data)?;
    tensor_connection(&t, &dual_connection(line, data)?, data)
}

/// Permutation matrix taking `E ⊗ F` to `F ⊗ E` in Kronecker order.
pub fn kron_swap(r: usize, s: usize, nvars: usize) -> PolyMatrix {
    let mut m = PolyMatrix::zero(r * s, nvars);
    for i in 0..r {
        for j in 0..s {
            m.set(j * r + i, i * s + j, Poly::one(nvars));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn lagrangian() -> (Bivector, Ideal) {
        let mut b = Bivector::zero(2);
        b.set(0, 1, Poly::one(2)).unwrap();
        (b, Ideal::coordinate(2, &[1]))
    }

    fn mono(n: usize, e: &[u32]) -> Poly {
        Poly::monomial(n, e.to_vec(), Rat::one())
    }

    #[test]
    fn moyal_on_the_plane() {
        let (b, _) = lagrangian();
        let s = moyal(&b).unwrap();
        let q = Poly::var(2, 0);
        let p = Poly::var(2, 1);
        assert_eq!(s.apply(1, &q, &p).unwrap(), Poly::constant(2, ratio(1, 2)));
        assert!(s.is_symmetric2());
        assert!(moyal(&Bivector::zero(3)).unwrap().is_zero());
    }

    #[test]
    fn moyal_associativity_on_monomials() {
        let (b, _) = lagrangian();
        let s = moyal(&b).unwrap();
        let monos: Vec<Poly> = crate::poly::exps_up_to(2, &[0, 1], 3)
            .into_iter()
            .map(|e| mono(2, &e))
            .collect();
        let a1 = |x: &Poly, y: &Poly| s.apply(1, x, y).unwrap();
        let a2 = |x: &Poly, y: &Poly| s.apply(2, x, y).unwrap();
        for a in &monos {
            for bb in &monos {
                for c in monos.iter().take(4) {
                    let lhs = &(&(a * &a2(bb, c)) - &a2(&(a * bb), c))
                        + &(&a2(a, &(bb * c)) - &(&a2(a, bb) * c));
                    let rhs = &a1(&a1(a, bb), c) - &a1(a, &a1(bb, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn corrupted_second_order_term_is_rejected() {
        let (b, _) = lagrangian();
        let s = moyal(&b).unwrap();
        let mut bad = s.alpha2().clone();
        bad.add_term(vec![vec![1, 0], vec![0, 0]], Poly::var(2, 1));
        let rep = star_assoc_check(s.alpha1(), &bad);
        assert_eq!(rep.order, Some(2));
        assert!(StarProduct::new(s.alpha1().clone(), bad).is_err());
    }

    #[test]
    fn hkr_recovers_a_derivation() {
        // on k[x] with E = A: R(a,e) = (∂a) e is solved by β = ∂
        let amb = Ambient::new(1, &[], 1);
        let mut r = Cochain::zero(&amb, 1);
        r.add_term(
            crate::diffop::CochainKey {
                ring: vec![vec![1]],
                module: vec![0],
            },
            PolyMatrix::identity(1, 1),
        );
        // β(ae) − aβ(e) = R means d β = −R
        let HkrOutcome::Solved(s) = hkr_solve(&r.neg(), HkrCaps::default()).unwrap() else {
            panic!("unsolved");
        };
        let beta = s.solution;
        let a = mono(1, &[3]);
        let e = vec![mono(1, &[2])];
        let lhs =
            &beta.apply(&[], &[&a * &e[0]]).unwrap()[0] - &(&a * &beta.apply(&[], &e).unwrap()[0]);
        assert_eq!(lhs, &a.diff(0) * &e[0]);
        assert_eq!(s.caps, (1, 1));
        assert_eq!(s.freedom, 2);
    }

    #[test]
    fn hkr_zero_target() {
        let amb = Ambient::new(2, &[1], 1);
        let HkrOutcome::Solved(s) = hkr_solve(&Cochain::zero(&amb, 2), HkrCaps::default()).unwrap()
        else {
            panic!();
        };
        assert!(s.solution.is_zero());
    }

    #[test]
    fn hkr_reports_condition_failures() {
        let amb = Ambient::new(2, &[1], 1);
        // R(a,e) = (∂_y a) e is a cocycle but R(y, e) = e
        let mut r = Cochain::zero(&amb, 1);
        r.add_term(
            crate::diffop::CochainKey {
                ring: vec![vec![0, 1]],
                module: vec![0, 0],
            },
            PolyMatrix::identity(1, 2),
        );
        let HkrOutcome::Failed(w) = hkr_solve(&r, HkrCaps::default()).unwrap() else {
            panic!("expected a condition failure");
        };
        assert_eq!(
            w.condition,
            HkrCondition::NotVanishingOnIdeal { generator: 0 }
        );
        let mut nc = Cochain::zero(&amb, 1);
        nc.add_term(
            crate::diffop::CochainKey {
                ring: vec![vec![2, 0]],
                module: vec![0, 0],
            },
            PolyMatrix::identity(1, 2),
        );
        let HkrOutcome::Failed(w) = hkr_solve(&nc, HkrCaps::default()).unwrap() else {
            panic!();
        };
        assert_eq!(w.condition, HkrCondition::NotCocycle);
    }

    #[test]
    fn first_order_lagrangian() {
        let (b, i) = lagrangian();
        let s = moyal(&b).unwrap();
        let FirstOrder::Solved {
            deformation,
            symbols,
            ..
        } = solve_first_order(&s, &b, &i, 1, None, HkrCaps::default()).unwrap()
        else {
            panic!();
        };
        assert!(symbols.holds);
        assert!(deformation.mc_residual(&s).unwrap().is_zero());
        // Γ_p = −∂_q plus an order-zero term
        let data = deformation.data().clone();
        let pot = deformation.gamma().potentials(&data).unwrap();
        assert_eq!(pot.len(), 1);
    }

    #[test]
    fn zero_star_gives_zero_first_order() {
        let (b, i) = lagrangian();
        let FirstOrder::Solved { deformation, .. } =
            solve_first_order(&StarProduct::zero(2), &b, &i, 1, None, HkrCaps::default()).unwrap()
        else {
            panic!();
        };
        assert!(deformation.alpha(1).is_zero());
    }

    #[test]
    fn non_coisotropic_first_order() {
        let mut b = Bivector::zero(3);
        b.set(0, 1, Poly::one(3)).unwrap();
        let s = moyal(&b).unwrap();
        let out = solve_first_order(
            &s,
            &b,
            &Ideal::coordinate(3, &[0, 1]),
            1,
            None,
            HkrCaps::default(),
        )
        .unwrap();
        assert_eq!(
            out,
            FirstOrder::NotCoisotropic {
                pair: (0, 1),
                bracket: Poly::one(3)
            }
        );
    }

    #[test]
    fn second_order_lagrangian_and_gauge() {
        let (b, i) = lagrangian();
        let s = moyal(&b).unwrap();
        let FirstOrder::Solved {
            deformation: d1, ..
        } = solve_first_order(&s, &b, &i, 1, None, HkrCaps::default()).unwrap()
        else {
            panic!();
        };
        let SecondOrder::Solved {
            deformation: d2, ..
        } = solve_second_order(&d1, &s, None, HkrCaps::default()).unwrap()
        else {
            panic!();
        };
        assert!(d2.mc_residual(&s).unwrap().is_zero());
        let amb = d2.ambient().clone();
        let phi1 = Cochain::module_operator(
            &amb,
            &[(vec![1, 0], PolyMatrix::scalar(1, &Poly::var(2, 0)))],
        );
        let phi2 = Cochain::endomorphism(&amb, &PolyMatrix::scalar(1, &Poly::var(2, 0).pow(2)));
        let phis = vec![phi1, phi2];
        let d3 = conjugate(&d2, &phis).unwrap();
        assert!(d3.mc_residual(&s).unwrap().is_zero());
        assert!(gauge_check_module(&d2, &d3, &phis).unwrap().holds);
        let enc = encode_gauge(&d2, &phis, &s).unwrap();
        let alg = crate::linfty::HochschildAlgebra::new(&enc.dgla);
        let rep = crate::linfty::gauge_equivalent(&alg, &enc.start, &enc.end, &enc.path).unwrap();
        assert!(rep.holds(), "{:?}", rep);
        let found = gauge_solve(&d2, &d3, HkrCaps::default())
            .unwrap()
            .expect("gauge");
        assert!(gauge_check_module(&d2, &d3, &found).unwrap().holds);
        let mut wrong = d3.alphas().to_vec();
        wrong[1] = wrong[1].add(&Cochain::action(&amb));
        let d4 = ModuleDeformation::new(d3.data(), wrong).unwrap();
        assert_eq!(
            gauge_check_module(&d2, &d4, &phis).unwrap().failing_order,
            Some(2)
        );
    }

    #[test]
    fn automorphism_extension() {
        let (b, i) = lagrangian();
        let s = moyal(&b).unwrap();
        let FirstOrder::Solved {
            deformation: d1, ..
        } = solve_first_order(&s, &b, &i, 1, None, HkrCaps::default()).unwrap()
        else {
            panic!();
        };
        let amb = d1.ambient().clone();
        let id = Cochain::identity(&amb);
        assert!(matches!(
            extend_automorphism(&d1, &id, HkrCaps::default()).unwrap(),
            Extension::Extends { .. }
        ));
        let q = Cochain::endomorphism(&amb, &PolyMatrix::scalar(1, &Poly::var(2, 0)));
        match extend_automorphism(&d1, &q, HkrCaps::default()).unwrap() {
            Extension::Obstructed { generator, value } => {
                assert_eq!(generator, 0);
                assert_eq!(value, PolyMatrix::scalar(1, &Poly::constant(2, rat(-1))));
            }
            other => panic!("{:?}", other),
        }
    }

    fn rank2(m: &PolyMatrix) -> (Bivector, Ideal, StarProduct, Connection) {
        let mut b = Bivector::zero(4);
        b.set(0, 2, Poly::one(4)).unwrap();
        b.set(1, 3, Poly::one(4)).unwrap();
        let ideal = Ideal::coordinate(4, &[0, 1]);
        let data = anchor(&b, &ideal).unwrap();
        let amb = data.ambient(2);
        let g1 = Cochain::module_operator(&amb, &[(vec![0, 0, 1, 0], PolyMatrix::identity(2, 4))]);
        let g2 = Cochain::module_operator(&amb, &[(vec![0, 0, 0, 1], PolyMatrix::identity(2, 4))])
            .add(&Cochain::endomorphism(&amb, &m.mul_poly(&Poly::var(4, 2))));
        let gamma = Connection::from_generators(&data, ratio(1, 2), Rat::one(), &[g1, g2]).unwrap();
        (b.clone(), ideal, moyal(&b).unwrap(), gamma)
    }

    #[test]
    fn rank_two_obstruction_is_the_curvature() {
        let m = PolyMatrix::from_rats(4, &[vec![rat(0), rat(1)], vec![rat(2), rat(0)]]);
        for (mm, obstructed) in [(m.clone(), true), (PolyMatrix::zero(2, 4), false)] {
            let (b, i, s, gamma) = rank2(&mm);
            let FirstOrder::Solved {
                deformation: d1,
                symbols,
                ..
            } = solve_first_order(&s, &b, &i, 2, Some(&gamma), HkrCaps::default()).unwrap()
            else {
                panic!();
            };
            assert!(symbols.holds);
            assert_eq!(
                d1.gamma().gammas(d1.data()).unwrap(),
                gamma.gammas(d1.data()).unwrap()
            );
            match solve_second_order(&d1, &s, None, HkrCaps::default()).unwrap() {
                SecondOrder::Obstructed {
                    pair, obstruction, ..
                } => {
                    assert!(obstructed);
                    assert_eq!(pair, (0, 1));
                    assert_eq!(obstruction, mm);
                }
                SecondOrder::Solved { deformation, .. } => {
                    assert!(!obstructed);
                    assert!(deformation.mc_residual(&s).unwrap().is_zero());
                }
                SecondOrder::Failed(w) => panic!("{:?}", w.condition),
            }
        }
    }

    #[test]
    fn swap_matrix_is_an_involution() {
        let s = kron_swap(2, 3, 1);
        let t = kron_swap(3, 2, 1);
        assert_eq!(&s * &t, PolyMatrix::identity(6, 1));
    }
}
