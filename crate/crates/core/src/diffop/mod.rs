//! Polydifferential operators.
//!
//! [`RingOp`] is a scalar operator `A^⊗k → A`; [`Cochain`] is a module-valued
//! operator `A^⊗k ⊗ E → E` with `E = (A/I)^r` and `I` coordinate-aligned.

mod cochain;
mod ringop;
mod series;

pub use cochain::{Ambient, Cochain, CochainKey};
pub use ringop::{RingOp, ScalarDiffOp};
pub use series::{Series, SeriesCochain};

use num_traits::One;

use crate::poly::{factorial, Exp, Rat};

/// All ways of writing `d = b_0 + … + b_{parts-1}` as a sum of multi-indices,
/// each paired with its multinomial coefficient `d! / (b_0! ⋯ b_{parts-1}!)`.
pub fn leibniz_splits(d: &[u32], parts: usize) -> Vec<(Vec<Exp>, Rat)> {
    let n = d.len();
    let mut out: Vec<(Vec<Exp>, Rat)> = vec![(vec![vec![0; n]; parts], Rat::one())];
    for (v, &m) in d.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let comps = compositions(m, parts);
        let mut next = Vec::with_capacity(out.len() * comps.len());
        for (bs, c) in &out {
            for comp in &comps {
                let mut bs2 = bs.clone();
                let mut k = c * factorial(m);
                for (p, &x) in comp.iter().enumerate() {
                    bs2[p][v] = x;
                    k /= factorial(x);
                }
                next.push((bs2, k));
            }
        }
        out = next;
    }
    out
}

fn compositions(m: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in compositions(m - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn splits_of_second_derivative_into_two() {
        let s = leibniz_splits(&[2], 2);
        let coefs: Vec<Rat> = s.iter().map(|(_, c)| c.clone()).collect();
        assert_eq!(coefs, vec![rat(1), rat(2), rat(1)]);
    }

    #[test]
    fn split_count_is_product_of_compositions() {
        // (2,1) into 3 parts: C(4,2) * C(3,2) = 6 * 3
        assert_eq!(leibniz_splits(&[2, 1], 3).len(), 18);
    }
}
