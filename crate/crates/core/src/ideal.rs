//! Polynomial ideals: Buchberger's algorithm, normal forms, membership.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{exp_divides, exp_lcm, exp_sub, Poly, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Lexicographic, first declared variable largest.
    Lex,
}

/// Bounds for a Buchberger run.
#[derive(Debug, Clone, Copy)]
pub struct BuchbergerLimits {
    pub max_steps: usize,
    pub max_degree: u32,
}

impl Default for BuchbergerLimits {
    fn default() -> Self {
        BuchbergerLimits {
            max_steps: 10_000,
            max_degree: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    generators: Vec<Poly>,
    groebner: Vec<Poly>,
    order: MonomialOrder,
    /// Variable indices when the ideal is generated by a subset of the variables.
    aligned: Option<Vec<usize>>,
}

impl Ideal {
    /// The ideal generated by the listed variables. No Gröbner run is needed.
    pub fn coordinate(nvars: usize, vars: &[usize]) -> Self {
        let mut v: Vec<usize> = vars.to_vec();
        v.sort_unstable();
        v.dedup();
        let gens: Vec<Poly> = v.iter().map(|&i| Poly::var(nvars, i)).collect();
        Ideal {
            nvars,
            groebner: gens.clone(),
            generators: gens,
            order: MonomialOrder::Lex,
            aligned: Some(v),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::coordinate(nvars, &[])
    }

    /// Builds an ideal, recognising coordinate-aligned generator lists.
    pub fn new(nvars: usize, gens: Vec<Poly>, limits: BuchbergerLimits) -> Result<Self> {
        if let Some(vars) = as_coordinate_vars(&gens) {
            return Ok(Self::coordinate(nvars, &vars));
        }
        buchberger(nvars, gens, limits)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn groebner(&self) -> &[Poly] {
        &self.groebner
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn coordinate_vars(&self) -> Option<&[usize]> {
        self.aligned.as_deref()
    }

    pub fn is_coordinate_aligned(&self) -> bool {
        self.aligned.is_some()
    }

    /// Remainder of `p` on division by the reduced Gröbner basis.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        self.normal_form_ordered(p, MonomialOrder::Lex)
    }

    pub fn normal_form_ordered(&self, p: &Poly, order: MonomialOrder) -> Result<Poly> {
        if order != self.order {
            return Err(Error::OrderMismatch(format!(
                "basis cached under {:?}, requested {:?}",
                self.order, order
            )));
        }
        if p.nvars() != self.nvars {
            return Err(Error::Incompatible(format!(
                "polynomial in {} variables, ideal in {}",
                p.nvars(),
                self.nvars
            )));
        }
        if let Some(vars) = &self.aligned {
            return Ok(p.restrict_zero(vars));
        }
        Ok(reduce(p, &self.groebner))
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }
}

fn as_coordinate_vars(gens: &[Poly]) -> Option<Vec<usize>> {
    let mut vars = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if g.num_terms() != 1 {
            return None;
        }
        let (e, _) = g.leading()?;
        if e.iter().sum::<u32>() != 1 {
            return None;
        }
        vars.push(e.iter().position(|&k| k == 1)?);
    }
    Some(vars)
}

/// Full reduction of `p` by `basis` (every term, not just the leading one).
pub fn reduce(p: &Poly, basis: &[Poly]) -> Poly {
    let n = p.nvars();
    let mut rem = Poly::zero(n);
    let mut cur = p.clone();
    while let Some((e, c)) = cur.leading().map(|(e, c)| (e.clone(), c.clone())) {
        let mut divided = false;
        for g in basis {
            let (ge, gc) = g.leading().expect("basis elements are nonzero");
            if exp_divides(ge, &e) {
                let shift = exp_sub(&e, ge).expect("divides");
                let k = &c / gc;
                cur -= &g.mul_term(&shift, &k);
                divided = true;
                break;
            }
        }
        if !divided {
            rem.add_term(e.clone(), c.clone());
            cur.add_term(e, -c);
        }
    }
    rem
}

fn monic(p: &Poly) -> Poly {
    match p.leading() {
        Some((_, c)) => {
            let inv = Rat::one() / c;
            p.scale(&inv)
        }
        None => p.clone(),
    }
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let (fe, fc) = f.leading().expect("nonzero");
    let (ge, gc) = g.leading().expect("nonzero");
    let l = exp_lcm(fe, ge);
    let a = f.mul_term(&exp_sub(&l, fe).unwrap(), &(Rat::one() / fc));
    let b = g.mul_term(&exp_sub(&l, ge).unwrap(), &(Rat::one() / gc));
    &a - &b
}

/// Reduced Gröbner basis under lex order.
pub fn buchberger(nvars: usize, gens: Vec<Poly>, limits: BuchbergerLimits) -> Result<Ideal> {
    let mut basis: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).map(monic).collect();
    if basis.is_empty() {
        return Ok(Ideal::zero(nvars));
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    let mut steps = 0usize;
    while let Some(&(i, j)) = pairs.iter().next() {
        pairs.remove(&(i, j));
        let (ei, ej) = (basis[i].leading().unwrap().0, basis[j].leading().unwrap().0);
        // coprime leading monomials: S-polynomial reduces to zero
        if ei.iter().zip(ej).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        steps += 1;
        if steps > limits.max_steps {
            return Err(Error::ResourceLimit {
                what: "buchberger steps",
                limit: limits.max_steps,
            });
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        if r.total_degree().unwrap_or(0) > limits.max_degree {
            return Err(Error::ResourceLimit {
                what: "buchberger degree",
                limit: limits.max_degree as usize,
            });
        }
        let k = basis.len();
        basis.push(monic(&r));
        for i in 0..k {
            pairs.insert((i, k));
        }
    }
    let reduced = autoreduce(basis);
    Ok(Ideal {
        nvars,
        generators: gens,
        groebner: reduced,
        order: MonomialOrder::Lex,
        aligned: None,
    })
}

fn autoreduce(basis: Vec<Poly>) -> Vec<Poly> {
    // drop elements whose leading monomial is divisible by another's
    let mut kept: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let ge = g.leading().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let he = h.leading().unwrap().0;
            j != i && exp_divides(he, ge) && (he != ge || j < i)
        });
        if !redundant {
            kept.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<Poly> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = monic(&reduce(&kept[i], &others));
        debug_assert!(!r.is_zero());
        out.push(r);
    }
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

/// Every S-polynomial of `basis` reduces to zero.
pub fn is_groebner(basis: &[Poly]) -> bool {
    for j in 0..basis.len() {
        for i in 0..j {
            if !reduce(&s_poly(&basis[i], &basis[j]), basis).is_zero() {
                return false;
            }
        }
    }
    true
}

impl Ideal {
    pub fn is_unit(&self) -> bool {
        self.groebner
            .iter()
            .any(|g| g.is_constant() && !g.constant_term().is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn v(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn single_monomial_generator_is_its_own_basis() {
        let i = buchberger(2, vec![v(2, 1)], BuchbergerLimits::default()).unwrap();
        assert_eq!(i.groebner(), &[v(2, 1)]);
    }

    #[test]
    fn linear_elimination() {
        let i = buchberger(
            2,
            vec![&v(2, 0) + &v(2, 1), v(2, 1)],
            BuchbergerLimits::default(),
        )
        .unwrap();
        let mut g = i.groebner().to_vec();
        g.sort();
        let mut want = vec![v(2, 0), v(2, 1)];
        want.sort();
        assert_eq!(g, want);
    }

    #[test]
    fn coordinate_normal_form_substitutes_zero() {
        let i = Ideal::coordinate(2, &[1]);
        let p = &(&v(2, 1) * &v(2, 0)) + &v(2, 1).pow(2);
        assert!(i.normal_form(&p).unwrap().is_zero());
        let q = &v(2, 0).pow(2) + &v(2, 1);
        assert_eq!(i.normal_form(&q).unwrap(), v(2, 0).pow(2));
        assert!(i.contains(&(&v(2, 0) * &v(2, 1))).unwrap());
        assert!(!i.contains(&v(2, 0)).unwrap());
    }

    #[test]
    fn step_cap_is_reported() {
        let x = v(2, 0);
        let y = v(2, 1);
        let gens = vec![&x.pow(2) - &y, &(&x * &y) - &Poly::one(2)];
        let e = buchberger(
            2,
            gens,
            BuchbergerLimits {
                max_steps: 0,
                max_degree: 10,
            },
        );
        assert!(matches!(e, Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn generator_is_member() {
        let x = v(2, 0);
        let y = v(2, 1);
        let g = &x.pow(2) - &y;
        let i = Ideal::new(2, vec![g.clone(), y.pow(2)], BuchbergerLimits::default()).unwrap();
        assert!(i.contains(&g).unwrap());
        assert!(i.contains(&x.pow(4)).unwrap());
        assert!(!i.contains(&x.pow(3)).unwrap());
        assert!(!i.contains(&Poly::constant(2, rat(1))).unwrap());
    }
}
