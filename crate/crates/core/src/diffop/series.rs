use crate::error::Result;
use crate::poly::Rat;

use super::cochain::{Ambient, Cochain};

/// Truncated power series `Σ_{i=0}^{r} ε^i c_i`, modulus `ε^{r+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: Clone> Series<T> {
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs the ε^0 coefficient");
        Series { coeffs }
    }

    /// Truncation order `r`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &T {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn set(&mut self, i: usize, v: T) {
        self.coeffs[i] = v;
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Series<U> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Clone>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Series<U>> {
        Ok(Series {
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn zip_with(&self, o: &Series<T>, f: impl Fn(&T, &T) -> T) -> Series<T> {
        assert_eq!(self.order(), o.order(), "series orders");
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// `Σ_{i+j=n} f(a_i, b_j)` for every `n ≤ r`, summed with `add`.
    pub fn convolve<U: Clone>(
        &self,
        o: &Series<U>,
        zero: impl Fn() -> T,
        f: impl Fn(&T, &U) -> Result<T>,
        add: impl Fn(&T, &T) -> T,
    ) -> Result<Series<T>> {
        let r = self.order().min(o.order());
        let mut out = Vec::with_capacity(r + 1);
        for n in 0..=r {
            let mut acc = zero();
            for i in 0..=n {
                acc = add(&acc, &f(&self.coeffs[i], &o.coeffs[n - i])?);
            }
            out.push(acc);
        }
        Ok(Series { coeffs: out })
    }
}

/// Series of cochains sharing arity and ambient.
pub type SeriesCochain = Series<Cochain>;

impl Series<Cochain> {
    pub fn zero_cochains(amb: &Ambient, arity: usize, order: usize) -> Self {
        Series {
            coeffs: vec![Cochain::zero(amb, arity); order + 1],
        }
    }

    pub fn arity(&self) -> usize {
        self.coeffs[0].arity()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.map(|a| a.scale(c))
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolution_truncates() {
        let a = Series::from_coeffs(vec![1i64, 2, 3]);
        let b = Series::from_coeffs(vec![1i64, 1, 1]);
        let c = a
            .convolve(&b, || 0, |x, y| Ok(x * y), |x, y| x + y)
            .unwrap();
        assert_eq!(c.coeffs(), &[1, 3, 6]);
    }
}
