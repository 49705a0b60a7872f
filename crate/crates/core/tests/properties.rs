use ccs_core::ccs::{
    builtin, dump_surface, glue, is_isomorphic, parse_surface, random_walk, reflect, reverse_edge,
    rotate, rotate_face_word, shrink_disk_tail, CellComplex, BUILTIN_NAMES,
};
use ccs_core::colouring::{
    colouring_bound, count_colourings_bruteforce_with_budget, BoundaryColouring, Counter,
};
use ccs_core::group::{make_cyclic, make_dihedral, make_quaternion8, make_symmetric, Group};
use ccs_core::tqft::{
    compose, decode_tuple, encode_tuple, invariant_matrix, matrices_equal, values_equal,
    InvariantValue,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn group(k: usize) -> Group {
    match k % 5 {
        0 => make_cyclic(2).unwrap(),
        1 => make_cyclic(3).unwrap(),
        2 => make_symmetric(3).unwrap(),
        3 => make_dihedral(4).unwrap(),
        _ => make_quaternion8(),
    }
}

fn walked(name: usize, seed: u64, steps: usize) -> CellComplex {
    let m = builtin(BUILTIN_NAMES[name % BUILTIN_NAMES.len()]).unwrap();
    random_walk(&m, seed, steps).unwrap().pop().map_or(m, |s| s.complex)
}

fn all_colourings(g: &Group, m: &CellComplex) -> Vec<BoundaryColouring> {
    let (n, k) = (m.in_count(), m.out_count());
    (0..g.order().pow((n + k) as u32))
        .map(|idx| {
            let mut t = decode_tuple(idx, n + k, g.order());
            let out = t.split_off(n);
            BoundaryColouring::new(t, out)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_equals_oracle(name in 0usize..10, seed in any::<u64>(), steps in 0usize..6, gk in 0usize..5) {
        let g = group(gk);
        let m = walked(name, seed, steps);
        prop_assume!(m.interior_edge_count() <= 4);
        let counter = Counter::new(&g, &m);
        for bc in all_colourings(&g, &m) {
            let slow = count_colourings_bruteforce_with_budget(&g, &m, &bc, u64::MAX).unwrap().count;
            prop_assert_eq!(counter.count(&bc).unwrap(), slow);
        }
    }

    #[test]
    fn counts_are_bounded(name in 0usize..10, seed in any::<u64>(), steps in 0usize..12, gk in 0usize..3) {
        let g = group(gk);
        let m = walked(name, seed, steps);
        let z = invariant_matrix(&g, &m);
        let bound = colouring_bound(&g, &m);
        prop_assert!(z.entries().iter().all(|x| *x <= bound));
    }

    #[test]
    fn edge_orientation_is_immaterial(name in 0usize..10, seed in any::<u64>(), steps in 0usize..10, pick in any::<usize>()) {
        let g = make_symmetric(3).unwrap();
        let m = walked(name, seed, steps);
        let interior: Vec<_> = m.edges().filter(|e| e.is_interior()).map(|e| e.id).collect();
        prop_assume!(!interior.is_empty());
        let flipped = reverse_edge(&m, interior[pick % interior.len()]).unwrap();
        prop_assert_eq!(invariant_matrix(&g, &flipped), invariant_matrix(&g, &m));
    }

    #[test]
    fn face_word_start_is_immaterial(name in 0usize..10, seed in any::<u64>(), steps in 0usize..10, pick in any::<usize>(), shift in any::<usize>()) {
        let g = make_symmetric(3).unwrap();
        let m = walked(name, seed, steps);
        let faces: Vec<_> = m.faces().map(|f| (f.id, f.word.len())).collect();
        let (f, len) = faces[pick % faces.len()];
        let rotated = rotate_face_word(&m, f, shift % len).unwrap();
        prop_assert_eq!(invariant_matrix(&g, &rotated), invariant_matrix(&g, &m));
    }

    #[test]
    fn shrinking_tails_keeps_the_value(name in 0usize..10, seed in any::<u64>(), steps in 0usize..15) {
        let g = make_symmetric(3).unwrap();
        let m = walked(name, seed, steps);
        if let Some(s) = shrink_disk_tail(&m) {
            prop_assert_eq!(s.validate(), Ok(()));
            prop_assert!(matrices_equal(&invariant_matrix(&g, &s), &invariant_matrix(&g, &m)).unwrap());
        }
    }

    #[test]
    fn walks_keep_structure(name in 0usize..10, seed in any::<u64>(), steps in 0usize..30) {
        let m = builtin(BUILTIN_NAMES[name]).unwrap();
        for step in random_walk(&m, seed, steps).unwrap() {
            let c = &step.complex;
            prop_assert_eq!(c.validate(), Ok(()));
            prop_assert_eq!((c.in_count(), c.out_count(), c.genus()), (m.in_count(), m.out_count(), m.genus()));
        }
    }

    #[test]
    fn surface_files_round_trip(name in 0usize..10, seed in any::<u64>(), steps in 0usize..20) {
        let m = walked(name, seed, steps);
        let back = parse_surface(&dump_surface(&m)).unwrap();
        prop_assert!(is_isomorphic(&back, &m));
    }

    #[test]
    fn reflect_and_rotate_are_involutions(name in 0usize..10, seed in any::<u64>(), steps in 0usize..12) {
        let m = walked(name, seed, steps);
        prop_assert!(is_isomorphic(&reflect(&reflect(&m)), &m));
        prop_assert!(is_isomorphic(&rotate(&rotate(&m)), &m));
        prop_assert_eq!(reflect(&m).validate(), Ok(()));
        prop_assert_eq!(rotate(&m).validate(), Ok(()));
    }

    #[test]
    fn gluing_moved_pieces_composes(a in 0usize..7, b in 0usize..7, sa in any::<u64>(), sb in any::<u64>(), steps in 0usize..6) {
        const PIECES: [&str; 7] = ["disk_in", "disk_out", "cylinder", "pants", "pants_reflected", "punctured_torus_a", "punctured_torus_b"];
        let g = make_symmetric(3).unwrap();
        let ma = random_walk(&builtin(PIECES[a]).unwrap(), sa, steps).unwrap().pop().map_or(builtin(PIECES[a]).unwrap(), |s| s.complex);
        let mb = random_walk(&builtin(PIECES[b]).unwrap(), sb, steps).unwrap().pop().map_or(builtin(PIECES[b]).unwrap(), |s| s.complex);
        prop_assume!(ma.out_count() == mb.in_count() && ma.out_count() > 0);
        let glued = glue(&ma, &mb).unwrap();
        prop_assert_eq!(glued.internal_vertex_count(), ma.internal_vertex_count() + mb.internal_vertex_count() + ma.out_count());
        let rhs = compose(&invariant_matrix(&g, &mb), &invariant_matrix(&g, &ma)).unwrap();
        prop_assert_eq!(invariant_matrix(&g, &glued), rhs);
    }

    #[test]
    fn tuple_codes_round_trip(order in 1usize..9, digits in proptest::collection::vec(0usize..64, 0..4)) {
        let t: Vec<usize> = digits.iter().map(|d| d % order).collect();
        prop_assert_eq!(decode_tuple(encode_tuple(&t, order), t.len(), order), t);
    }

    #[test]
    fn scaling_by_the_group_order_keeps_the_value(order in 1usize..9, count in 0u64..1000, he in 0u32..10, k in 0u32..4) {
        let a = InvariantValue::new(order, BigUint::from(count), he);
        let b = InvariantValue::new(order, BigUint::from(count) * BigUint::from(order).pow(k), he + 2 * k);
        prop_assert!(values_equal(&a, &b).unwrap());
    }
}
