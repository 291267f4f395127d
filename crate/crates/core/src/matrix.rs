//! Square matrices of polynomials.

use std::fmt;

use crate::poly::{Poly, Rat};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyMatrix {
    n: usize,
    nvars: usize,
    /// row-major
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(n: usize, nvars: usize) -> Self {
        PolyMatrix {
            n,
            nvars,
            entries: vec![Poly::zero(nvars); n * n],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        Self::scalar(n, &Poly::one(nvars))
    }

    /// `p · I`.
    pub fn scalar(n: usize, p: &Poly) -> Self {
        let mut m = Self::zero(n, p.nvars());
        for i in 0..n {
            m.entries[i * n + i] = p.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let n = rows.len();
        assert!(
            n > 0 && rows.iter().all(|r| r.len() == n),
            "square matrix expected"
        );
        let nvars = rows[0][0].nvars();
        PolyMatrix {
            n,
            nvars,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Rational constant matrix.
    pub fn from_rats(nvars: usize, rows: &[Vec<Rat>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| Poly::constant(nvars, c.clone())).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    /// Whether every entry is a constant.
    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|p| p.is_constant())
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        PolyMatrix {
            n: self.n,
            nvars: self.nvars,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        self.map(|q| q * p)
    }

    pub fn diff_multi(&self, d: &[u32]) -> Self {
        self.map(|p| p.diff_multi(d))
    }

    pub fn restrict_zero(&self, vars: &[usize]) -> Self {
        self.map(|p| p.restrict_zero(vars))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.n, self.nvars);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        (0..self.n)
            .map(|i| {
                let mut acc = Poly::zero(self.nvars);
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc += &(a * vj);
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product `self ⊗ other` (first factor is the outer index).
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.n, other.n);
        let mut m = Self::zero(a * b, self.nvars);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        m.set(i * b + k, j * b + l, x * other.get(k, l));
                    }
                }
            }
        }
        m
    }

    /// Constant-matrix trace, used for reporting only.
    pub fn trace(&self) -> Poly {
        let mut acc = Poly::zero(self.nvars);
        for i in 0..self.n {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = (0..self.n)
                    .map(|j| self.get(i, j).fmt_with(names))
                    .collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl std::ops::Add for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, o.n);
        PolyMatrix {
            n: self.n,
            nvars: self.nvars,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, o.n);
        PolyMatrix {
            n: self.n,
            nvars: self.nvars,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        self.map(|p| -p)
    }
}

impl std::ops::Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut m = PolyMatrix::zero(n, self.nvars);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let cur = &m.entries[i * n + j] + &(a * b);
                        m.entries[i * n + j] = cur;
                    }
                }
            }
        }
        m
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{}", i)).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

/// Commutator `ab − ba`.
pub fn commutator(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    &(a * b) - &(b * a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn kron_of_identities_is_identity() {
        let a = PolyMatrix::identity(2, 1);
        let b = PolyMatrix::identity(3, 1);
        assert_eq!(a.kron(&b), PolyMatrix::identity(6, 1));
    }

    #[test]
    fn commutator_of_nilpotents() {
        let e = PolyMatrix::from_rats(1, &[vec![rat(0), rat(1)], vec![rat(0), rat(0)]]);
        let f = e.transpose();
        let h = commutator(&e, &f);
        assert_eq!(
            h,
            PolyMatrix::from_rats(1, &[vec![rat(1), rat(0)], vec![rat(0), rat(-1)]])
        );
    }
}
