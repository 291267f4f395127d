mod common;

use common::{fit_oracle, mono, oracle_action};
use dqmod::ideal::Ideal;
use dqmod::poisson::Bivector;
use dqmod::poly::{exps_up_to, Poly};
use dqmod::quantize::{
    conjugate, gauge_check_module, gauge_solve, moyal, solve_first_order, solve_second_order,
    FirstOrder, HkrCaps, ModuleDeformation, SecondOrder, StarProduct,
};

fn setup() -> (Bivector, Ideal, StarProduct) {
    let mut b = Bivector::zero(2);
    b.set(0, 1, Poly::one(2)).unwrap();
    let s = moyal(&b).unwrap();
    (b, Ideal::coordinate(2, &[1]), s)
}

fn solved() -> ModuleDeformation {
    let (b, i, s) = setup();
    let FirstOrder::Solved { deformation, .. } =
        solve_first_order(&s, &b, &i, 1, None, HkrCaps::default()).unwrap()
    else {
        panic!("first order");
    };
    let SecondOrder::Solved { deformation, .. } =
        solve_second_order(&deformation, &s, None, HkrCaps::default()).unwrap()
    else {
        panic!("second order");
    };
    deformation
}

fn oracle(d: &ModuleDeformation) -> ModuleDeformation {
    let amb = d.ambient().clone();
    let a1 = fit_oracle(&amb, 1, 4, 2).expect("oracle α1 fits");
    let a2 = fit_oracle(&amb, 2, 4, 2).expect("oracle α2 fits");
    ModuleDeformation::new(d.data(), vec![a1, a2]).unwrap()
}

#[test]
fn oracle_is_a_module_structure() {
    let (_, _, s) = setup();
    let d = solved();
    let o = oracle(&d);
    assert!(o.mc_residual(&s).unwrap().is_zero());
    // the fitted cochains reproduce the reduction beyond the fitting range
    for ea in exps_up_to(2, &[0, 1], 6) {
        for k in 0..=5 {
            let (a, e) = (mono(&ea), mono(&[k, 0]));
            let want = oracle_action(&a, &e);
            for n in 1..=2 {
                assert_eq!(o.act(n, &a, std::slice::from_ref(&e)).unwrap()[0], want[n]);
            }
        }
    }
}

#[test]
fn solver_output_is_gauge_equivalent_to_the_oracle() {
    let (_, _, s) = setup();
    let d = solved();
    assert!(d.mc_residual(&s).unwrap().is_zero());
    let o = oracle(&d);
    let phis = gauge_solve(&d, &o, HkrCaps::default())
        .unwrap()
        .expect("gauge exists");
    assert!(gauge_check_module(&d, &o, &phis).unwrap().holds);
    let moved = conjugate(&d, &phis).unwrap();
    for ea in exps_up_to(2, &[0, 1], 4) {
        for k in 0..=4 {
            let (a, e) = (mono(&ea), mono(&[k, 0]));
            let want = oracle_action(&a, &e);
            for n in 1..=2 {
                assert_eq!(
                    moved.act(n, &a, std::slice::from_ref(&e)).unwrap()[0],
                    want[n]
                );
            }
        }
    }
}

#[test]
fn first_order_connection_is_minus_d_q() {
    let d = solved();
    let o = oracle(&d);
    let g = o.gamma().gamma(o.data(), 0).unwrap();
    let e = mono(&[3, 0]);
    assert_eq!(
        g.apply(&[], std::slice::from_ref(&e)).unwrap()[0],
        e.diff(0).scale(&dqmod::poly::rat(-1))
    );
}
