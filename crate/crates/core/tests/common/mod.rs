//! Independent oracles shared by the integration targets.
#![allow(dead_code)]

use std::collections::BTreeMap;

use dqmod::diffop::{Ambient, Cochain};
use dqmod::hochschild::capped_basis;
use dqmod::linalg::solve_columns;
use dqmod::poly::{exps_up_to, ratio, Poly, Rat};

/// A truncated series `f_0 + ε f_1 + ε² f_2` of polynomials in `(q, p)`.
pub type Ser = [Poly; 3];

fn zero_ser() -> Ser {
    [Poly::zero(2), Poly::zero(2), Poly::zero(2)]
}

/// Moyal product on `k[q,p]`, `{q,p} = 1`, written out by hand:
/// `α_1 = ½(∂_q f ∂_p g − ∂_p f ∂_q g)`,
/// `α_2 = ⅛(∂_q² f ∂_p² g − 2 ∂_q∂_p f ∂_q∂_p g + ∂_p² f ∂_q² g)`.
pub fn moyal_terms(f: &Poly, g: &Poly) -> Ser {
    let d = |h: &Poly, a: u32, b: u32| h.diff_multi(&[a, b]);
    let a1 = (&(&d(f, 1, 0) * &d(g, 0, 1)) - &(&d(f, 0, 1) * &d(g, 1, 0))).scale(&ratio(1, 2));
    let a2 = &(&(&d(f, 2, 0) * &d(g, 0, 2)) - &(&d(f, 1, 1) * &d(g, 1, 1)).scale(&ratio(2, 1)))
        + &(&d(f, 0, 2) * &d(g, 2, 0));
    [f * g, a1, a2.scale(&ratio(1, 8))]
}

/// Normal form modulo the left ideal generated by `p`: writes
/// `f = f(q,0) + h·p` and uses `h·p = h⋆p − (ε/2) ∂_q h`.
pub fn left_ideal_reduce(s: &Ser) -> Ser {
    let mut work = s.clone();
    let mut out = zero_ser();
    for n in 0..3 {
        let f = work[n].clone();
        out[n] = f.restrict_zero(&[1]);
        let mut h = Poly::zero(2);
        for (e, c) in f.terms() {
            if e[1] > 0 {
                h.add_term(vec![e[0], e[1] - 1], c.clone());
            }
        }
        if n < 2 {
            work[n + 1] = &work[n + 1] - &h.diff(0).scale(&ratio(1, 2));
        }
    }
    out
}

/// Components of `a ⋆ e` in `k[q,p]/(k[q,p] ⋆ p)`, represented in `k[q]`.
pub fn oracle_action(a: &Poly, e: &Poly) -> Ser {
    left_ideal_reduce(&moyal_terms(a, e))
}

pub fn mono(e: &[u32]) -> Poly {
    Poly::monomial(2, e.to_vec(), Rat::from_integer(1.into()))
}

/// Fits the arity-1 cochain whose values on `a = q^i p^j` (`i+j ≤ 5`) and
/// `e = q^k` (`k ≤ 4`) are `oracle_action(a, e)[n]`.
pub fn fit_oracle(amb: &Ambient, n: usize, order: u32, degree: u32) -> Option<Cochain> {
    let avals: Vec<Poly> = exps_up_to(2, &[0, 1], 5)
        .into_iter()
        .map(|e| mono(&e))
        .collect();
    let evals: Vec<Poly> = (0..=4).map(|k| mono(&[k, 0])).collect();
    let key = |t: usize, e: &Vec<u32>| (t, e.clone());
    let mut target = BTreeMap::new();
    let mut pairs = Vec::new();
    for a in &avals {
        for e in &evals {
            pairs.push((a.clone(), e.clone()));
        }
    }
    for (t, (a, e)) in pairs.iter().enumerate() {
        for (x, c) in oracle_action(a, e)[n].terms() {
            target.insert(key(t, x), c.clone());
        }
    }
    let basis = capped_basis(amb, 1, order, degree);
    let cols: Vec<BTreeMap<(usize, Vec<u32>), Rat>> = basis
        .iter()
        .map(|b| {
            let mut col = BTreeMap::new();
            for (t, (a, e)) in pairs.iter().enumerate() {
                let v = b
                    .apply(std::slice::from_ref(a), std::slice::from_ref(e))
                    .unwrap();
                for (x, c) in v[0].terms() {
                    col.insert(key(t, x), c.clone());
                }
            }
            col
        })
        .collect();
    let (sol, _) = solve_columns(&cols, &target);
    let sol = sol?;
    let mut c = Cochain::zero(amb, 1);
    for (b, v) in basis.iter().zip(&sol) {
        if *v != Rat::from_integer(0.into()) {
            c = c.add(&b.scale(v));
        }
    }
    Some(c)
}
