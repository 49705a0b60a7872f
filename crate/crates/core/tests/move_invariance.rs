use ccs_core::ccs::{builtin, random_walk, BUILTIN_NAMES};
use ccs_core::group::{make_cyclic, make_quaternion8, make_symmetric};
use ccs_core::tqft::{invariant_matrix, matrices_equal};

#[test]
fn random_walks_keep_the_matrix() {
    for g in [make_cyclic(3).unwrap(), make_symmetric(3).unwrap()] {
        for name in BUILTIN_NAMES {
            let m = builtin(name).unwrap();
            let z = invariant_matrix(&g, &m);
            for seed in 0..3 {
                for step in random_walk(&m, seed, 25).unwrap() {
                    assert!(
                        matrices_equal(&invariant_matrix(&g, &step.complex), &z).unwrap(),
                        "{name} over {} seed {seed} after {}",
                        g.name(),
                        step.description
                    );
                }
            }
        }
    }
}

#[test]
fn pants_walk_over_q8() {
    let g = make_quaternion8();
    let m = builtin("pants").unwrap();
    let z = invariant_matrix(&g, &m);
    let trace = random_walk(&m, 5, 50).unwrap();
    let last = invariant_matrix(&g, &trace.last().unwrap().complex);
    assert!(matrices_equal(&last, &z).unwrap());
}
