//! Quotient rings `A/I` and free modules over them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::poly::Poly;

/// An element of `A/I`, stored by its normal form.
#[derive(Debug, Clone)]
pub struct QuotientPoly {
    rep: Poly,
    ideal: Arc<Ideal>,
}

impl QuotientPoly {
    pub fn new(p: &Poly, ideal: Arc<Ideal>) -> Result<Self> {
        let rep = ideal.normal_form(p)?;
        Ok(QuotientPoly { rep, ideal })
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn ideal(&self) -> &Arc<Ideal> {
        &self.ideal
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ideal, &other.ideal) || *self.ideal == *other.ideal {
            Ok(())
        } else {
            Err(Error::Incompatible(
                "quotient elements over different ideals".into(),
            ))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(QuotientPoly {
            rep: &self.rep + &other.rep,
            ideal: self.ideal.clone(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        QuotientPoly::new(&(&self.rep * &other.rep), self.ideal.clone())
    }
}

impl PartialEq for QuotientPoly {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep && *self.ideal == *other.ideal
    }
}

/// The free module `(A/I)^rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeModule {
    rank: usize,
    base: Arc<Ideal>,
}

impl FreeModule {
    pub fn new(rank: usize, base: Arc<Ideal>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Precondition("module rank must be positive".into()));
        }
        Ok(FreeModule { rank, base })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base(&self) -> &Arc<Ideal> {
        &self.base
    }

    /// Reduces a vector of polynomials into a module element.
    pub fn element(&self, entries: &[Poly]) -> Result<Vec<QuotientPoly>> {
        if entries.len() != self.rank {
            return Err(Error::Incompatible(format!(
                "vector of length {} in a rank {} module",
                entries.len(),
                self.rank
            )));
        }
        entries
            .iter()
            .map(|p| QuotientPoly::new(p, self.base.clone()))
            .collect()
    }

    /// `a · e`, reduced.
    pub fn act(&self, a: &Poly, e: &[QuotientPoly]) -> Result<Vec<QuotientPoly>> {
        let a = QuotientPoly::new(a, self.base.clone())?;
        e.iter().map(|x| a.mul(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reps_are_normal_forms() {
        let i = Arc::new(Ideal::coordinate(2, &[1]));
        let q = QuotientPoly::new(&(&Poly::var(2, 0) + &Poly::var(2, 1)), i.clone()).unwrap();
        assert_eq!(q.rep(), &Poly::var(2, 0));
        let m = FreeModule::new(2, i).unwrap();
        let e = m.element(&[Poly::var(2, 1), Poly::one(2)]).unwrap();
        assert!(e[0].is_zero());
        let ae = m.act(&Poly::var(2, 1), &e).unwrap();
        assert!(ae.iter().all(|x| x.is_zero()));
    }
}
