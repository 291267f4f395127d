//! Poisson bivectors, coisotropy, the anchor and the conormal bracket.

use num_traits::Zero;

use crate::diffop::{Ambient, RingOp, ScalarDiffOp};
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::linalg::rank_of;
use crate::poly::{rat, Exp, Poly, Rat};

/// Antisymmetric array `P^{ij}` with `{a,b} = Σ P^{ij} ∂_i a ∂_j b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivector {
    n: usize,
    entries: Vec<Poly>,
}

impl Bivector {
    pub fn zero(n: usize) -> Self {
        Bivector {
            n,
            entries: vec![Poly::zero(n); n * n],
        }
    }

    /// Builds from a full array, checking antisymmetry.
    pub fn new(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let n = rows.len();
        let mut b = Self::zero(n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Precondition("bivector array must be square".into()));
            }
            for (j, p) in row.into_iter().enumerate() {
                b.entries[i * n + j] = p;
            }
        }
        for i in 0..n {
            if !b.get(i, i).is_zero() {
                return Err(Error::Precondition(format!(
                    "P[{}][{}] must vanish",
                    i + 1,
                    i + 1
                )));
            }
            for j in 0..i {
                if b.get(i, j) != &-b.get(j, i) {
                    return Err(Error::Precondition(format!(
                        "P[{}][{}] is not -P[{}][{}]",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(b)
    }

    /// Sets `P^{ij} = p` and `P^{ji} = −p`.
    pub fn set(&mut self, i: usize, j: usize, p: Poly) -> Result<()> {
        if i == j {
            if p.is_zero() {
                return Ok(());
            }
            return Err(Error::Precondition(format!(
                "P[{}][{}] must vanish",
                i + 1,
                i + 1
            )));
        }
        let n = self.n;
        self.entries[j * n + i] = -&p;
        self.entries[i * n + j] = p;
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.n + j]
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|p| p.is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn bracket(&self, a: &Poly, b: &Poly) -> Poly {
        let da: Vec<Poly> = (0..self.n).map(|i| a.diff(i)).collect();
        let db: Vec<Poly> = (0..self.n).map(|j| b.diff(j)).collect();
        let mut acc = Poly::zero(self.n);
        for i in 0..self.n {
            if da[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                let p = self.get(i, j);
                if !p.is_zero() && !db[j].is_zero() {
                    acc += &(&(p * &da[i]) * &db[j]);
                }
            }
        }
        acc
    }

    /// `{a,b}` as a bidifferential operator.
    pub fn as_ring_op(&self) -> RingOp {
        let mut op = RingOp::zero(self.n, 2);
        for i in 0..self.n {
            for j in 0..self.n {
                let p = self.get(i, j);
                if !p.is_zero() {
                    op.add_term(vec![unit(self.n, i), unit(self.n, j)], p.clone());
                }
            }
        }
        op
    }
}

fn unit(n: usize, i: usize) -> Exp {
    crate::poly::unit_exp(n, i)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport {
    pub holds: bool,
    /// Failing coordinate triple and its cyclic sum.
    pub witness: Option<((usize, usize, usize), Poly)>,
}

/// Jacobi identity of `{a,b} = P(da,db)` on coordinate triples, which is
/// equivalent to the vanishing of the Schouten bracket `[P,P]`.
pub fn schouten_jacobi(p: &Bivector) -> JacobiReport {
    let n = p.n;
    let x = |i| Poly::var(n, i);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = &(&p.bracket(&x(i), &p.bracket(&x(j), &x(k)))
                    + &p.bracket(&x(j), &p.bracket(&x(k), &x(i))))
                    + &p.bracket(&x(k), &p.bracket(&x(i), &x(j)));
                if !s.is_zero() {
                    return JacobiReport {
                        holds: false,
                        witness: Some(((i, j, k), s)),
                    };
                }
            }
        }
    }
    JacobiReport {
        holds: true,
        witness: None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoisotropyReport {
    pub holds: bool,
    /// Generator indices and the nonzero normal form of their bracket.
    pub witness: Option<(usize, usize, Poly)>,
}

/// `{I, I} ⊆ I`, tested on generator pairs.
pub fn coisotropy_check(p: &Bivector, ideal: &Ideal) -> Result<CoisotropyReport> {
    let gens = ideal.generators();
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            let nf = ideal.normal_form(&p.bracket(&gens[a], &gens[b]))?;
            if !nf.is_zero() {
                return Ok(CoisotropyReport {
                    holds: false,
                    witness: Some((a, b, nf)),
                });
            }
        }
    }
    Ok(CoisotropyReport {
        holds: true,
        witness: None,
    })
}

/// Poisson data along a coordinate-aligned coisotropic `Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoisotropicData {
    pub bivector: Bivector,
    /// Ideal generators, as variable indices.
    pub generators: Vec<usize>,
    /// `p(x̄_g) = P(dx_g, ·)|_Y` for each generator.
    pub anchor: Vec<ScalarDiffOp>,
    /// `{x̄_i, x̄_j}` as `O_Y`-coefficients on the generators.
    pub bracket: Vec<Vec<Vec<Poly>>>,
}

impl CoisotropicData {
    pub fn nvars(&self) -> usize {
        self.bivector.nvars()
    }

    pub fn ambient(&self, rank: usize) -> Ambient {
        Ambient::new(self.nvars(), &self.generators, rank)
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn y_vars(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|i| !self.generators.contains(i))
            .collect()
    }

    fn restrict(&self, p: &Poly) -> Poly {
        p.restrict_zero(&self.generators)
    }

    /// Class of `f ∈ I` in `I/I²` as coefficients on the generators.
    pub fn conormal_class(&self, f: &Poly) -> Result<Vec<Poly>> {
        if !self.restrict(f).is_zero() {
            return Err(Error::Precondition(
                "representative is not in the ideal".into(),
            ));
        }
        Ok(self
            .generators
            .iter()
            .map(|&g| self.restrict(&f.diff(g)))
            .collect())
    }

    /// `Σ c_g x_g`, the canonical lift of a conormal class.
    pub fn lift(&self, class: &[Poly]) -> Poly {
        let n = self.nvars();
        let mut acc = Poly::zero(n);
        for (c, &g) in class.iter().zip(&self.generators) {
            acc += &(c * &Poly::var(n, g));
        }
        acc
    }

    /// `{x, y}_P` for conormal classes given by coefficients.
    pub fn conormal_bracket(&self, x: &[Poly], y: &[Poly]) -> Result<Vec<Poly>> {
        let b = self.bivector.bracket(&self.lift(x), &self.lift(y));
        self.conormal_class(&b)
    }

    /// `p(x)` for a conormal class, `O_Y`-linearly.
    pub fn anchor_of(&self, class: &[Poly]) -> ScalarDiffOp {
        let n = self.nvars();
        let mut op = RingOp::zero(n, 1);
        for (c, a) in class.iter().zip(&self.anchor) {
            for (ds, f) in a.terms() {
                op.add_term(ds.clone(), self.restrict(&(c * f)));
            }
        }
        op
    }

    /// Raw anchor array: rows are generators, columns are `Y` coordinates,
    /// entry `P^{gy}|_Y`. The adjoint `p*` is the transpose.
    pub fn anchor_matrix(&self) -> Vec<Vec<Poly>> {
        let y = self.y_vars();
        self.generators
            .iter()
            .map(|&g| {
                y.iter()
                    .map(|&j| self.restrict(self.bivector.get(g, j)))
                    .collect()
            })
            .collect()
    }

    /// Generic rank of the anchor array, computed by evaluation at a few
    /// fixed rational points.
    pub fn anchor_rank(&self) -> usize {
        let m = self.anchor_matrix();
        let n = self.nvars();
        let points: Vec<Vec<Rat>> = (0..4)
            .map(|s| {
                (0..n)
                    .map(|i| rat(((i as i64 + 2) * (s + 3) * 7919) % 97 + 1))
                    .collect()
            })
            .collect();
        points
            .iter()
            .map(|pt| {
                let rows: Vec<std::collections::BTreeMap<usize, Rat>> = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .map(|(j, p)| (j, p.eval(pt)))
                            .filter(|(_, v)| !v.is_zero())
                            .collect()
                    })
                    .collect();
                rank_of(&rows)
            })
            .max()
            .unwrap_or(0)
    }

    /// Jacobi identity of the conormal bracket on generator triples,
    /// modulo `I²`. Returns the first failing triple.
    pub fn conormal_jacobi(&self) -> Result<Option<(usize, usize, usize)>> {
        let k = self.num_generators();
        let n = self.nvars();
        let e = |i: usize| -> Vec<Poly> {
            (0..k)
                .map(|j| if i == j { Poly::one(n) } else { Poly::zero(n) })
                .collect()
        };
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    let t1 = self.conormal_bracket(&e(i), &self.conormal_bracket(&e(j), &e(l))?)?;
                    let t2 = self.conormal_bracket(&e(j), &self.conormal_bracket(&e(l), &e(i))?)?;
                    let t3 = self.conormal_bracket(&e(l), &self.conormal_bracket(&e(i), &e(j))?)?;
                    let ok = (0..k).all(|g| (&(&t1[g] + &t2[g]) + &t3[g]).is_zero());
                    if !ok {
                        return Ok(Some((i, j, l)));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Anchor and conormal bracket for a coordinate-aligned coisotropic ideal.
pub fn anchor(p: &Bivector, ideal: &Ideal) -> Result<CoisotropicData> {
    let gens = ideal
        .coordinate_vars()
        .ok_or_else(|| Error::Precondition("anchor needs a coordinate-aligned ideal".into()))?
        .to_vec();
    let rep = coisotropy_check(p, ideal)?;
    if let Some((a, b, nf)) = rep.witness {
        return Err(Error::Precondition(format!(
            "not coisotropic: bracket of generators {} and {} is {}",
            a + 1,
            b + 1,
            nf
        )));
    }
    let n = p.nvars();
    let anchor = gens
        .iter()
        .map(|&g| {
            let mut op = RingOp::zero(n, 1);
            for j in 0..n {
                let c = p.get(g, j).restrict_zero(&gens);
                op.add_term(vec![unit(n, j)], c);
            }
            op
        })
        .collect();
    let mut data = CoisotropicData {
        bivector: p.clone(),
        generators: gens.clone(),
        anchor,
        bracket: vec![],
    };
    let k = gens.len();
    let mut table = vec![vec![Vec::new(); k]; k];
    for i in 0..k {
        for j in 0..k {
            let b = p.get(gens[i], gens[j]).clone();
            table[i][j] = data.conormal_class(&b)?;
        }
    }
    data.bracket = table;
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::BuchbergerLimits;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn darboux(n: usize, pairs: &[(usize, usize)]) -> Bivector {
        let mut b = Bivector::zero(n);
        for &(i, j) in pairs {
            b.set(i, j, Poly::one(n)).unwrap();
        }
        b
    }

    #[test]
    fn constant_bivector_is_poisson() {
        assert!(schouten_jacobi(&darboux(2, &[(0, 1)])).holds);
    }

    #[test]
    fn so3_is_poisson() {
        let mut b = Bivector::zero(3);
        b.set(0, 1, x(3, 2)).unwrap();
        b.set(0, 2, -&x(3, 1)).unwrap();
        b.set(1, 2, x(3, 0)).unwrap();
        assert!(schouten_jacobi(&b).holds);
    }

    #[test]
    fn non_poisson_reports_triple() {
        // {x1,x2} = x1, {x1,x3} = x3^2: cyclic sum = {x1,{x2,x3}} + {x2,{x3,x1}} + {x3,{x1,x2}}
        // = 0 + {x2, -x3^2} + {x3, x1} = 0 + 0 - x3^2 ≠ 0
        let mut b = Bivector::zero(3);
        b.set(0, 1, x(3, 0)).unwrap();
        b.set(0, 2, x(3, 2).pow(2)).unwrap();
        let r = schouten_jacobi(&b);
        assert!(!r.holds);
        let (t, s) = r.witness.unwrap();
        assert_eq!(t, (0, 1, 2));
        assert_eq!(s, -&x(3, 2).pow(2));
    }

    #[test]
    fn diagonal_is_rejected() {
        let mut b = Bivector::zero(2);
        assert!(b.set(0, 0, x(2, 0)).is_err());
    }

    #[test]
    fn coisotropy_examples() {
        let lag = darboux(2, &[(0, 1)]);
        assert!(
            coisotropy_check(&lag, &Ideal::coordinate(2, &[1]))
                .unwrap()
                .holds
        );
        let bad = darboux(4, &[(0, 1)]);
        let r = coisotropy_check(&bad, &Ideal::coordinate(4, &[0, 1])).unwrap();
        assert_eq!(r.witness, Some((0, 1, Poly::one(4))));
        let good = darboux(4, &[(0, 2)]);
        assert!(
            coisotropy_check(&good, &Ideal::coordinate(4, &[0, 1]))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn coisotropy_for_general_ideal() {
        // {x, y} = 1 on k[x,y,z], I = (y - z^2) is a hypersurface: always coisotropic
        let b = darboux(3, &[(0, 1)]);
        let g = &x(3, 1) - &x(3, 2).pow(2);
        let i = Ideal::new(3, vec![g], BuchbergerLimits::default()).unwrap();
        assert!(coisotropy_check(&b, &i).unwrap().holds);
    }

    #[test]
    fn anchor_examples() {
        let lag = darboux(2, &[(0, 1)]);
        let d = anchor(&lag, &Ideal::coordinate(2, &[1])).unwrap();
        // p(p̄)(a) = P^{pq} ∂_q a = −∂_q a
        assert_eq!(d.anchor[0], RingOp::partial(2, vec![1, 0]).scale(&rat(-1)));
        let r4 = darboux(4, &[(0, 2)]);
        let d4 = anchor(&r4, &Ideal::coordinate(4, &[0, 1])).unwrap();
        assert_eq!(d4.anchor[0], RingOp::partial(4, vec![0, 0, 1, 0]));
        assert!(d4.anchor[1].is_zero());
        assert!(d4.bracket[0][1].iter().all(|c| c.is_zero()));
        let z = anchor(&Bivector::zero(2), &Ideal::coordinate(2, &[1])).unwrap();
        assert!(z.anchor.iter().all(|a| a.is_zero()));
        assert_eq!(z.anchor_rank(), 0);
        assert_eq!(d.anchor_rank(), 1);
    }

    #[test]
    fn so3_conormal_bracket_on_the_axis() {
        // (x1, x2) fails since {x1, x2} = x3; the hypersurface x3 = 0 is coisotropic
        let mut b = Bivector::zero(3);
        b.set(0, 1, x(3, 2)).unwrap();
        b.set(0, 2, -&x(3, 1)).unwrap();
        b.set(1, 2, x(3, 0)).unwrap();
        assert!(
            !coisotropy_check(&b, &Ideal::coordinate(3, &[0, 1]))
                .unwrap()
                .holds
        );
        let d = anchor(&b, &Ideal::coordinate(3, &[2])).unwrap();
        assert_eq!(d.conormal_jacobi().unwrap(), None);
        // p(x̄3)(a) = P^{31}∂_1 a + P^{32}∂_2 a = x2 ∂_1 a − x1 ∂_2 a
        let mut want = RingOp::zero(3, 1);
        want.add_term(vec![vec![1, 0, 0]], x(3, 1));
        want.add_term(vec![vec![0, 1, 0]], -&x(3, 0));
        assert_eq!(d.anchor[0], want);
    }

    #[test]
    fn conormal_jacobi_on_rank_three() {
        // linear P on k[x1..x6] with {x1,x2} = x3 and I = (x1,x2,x3)
        let mut b = Bivector::zero(6);
        b.set(0, 1, x(6, 2)).unwrap();
        b.set(0, 3, Poly::one(6)).unwrap();
        let d = anchor(&b, &Ideal::coordinate(6, &[0, 1, 2])).unwrap();
        assert_eq!(
            d.bracket[0][1],
            vec![Poly::zero(6), Poly::zero(6), Poly::one(6)]
        );
        assert_eq!(d.conormal_jacobi().unwrap(), None);
    }
}
