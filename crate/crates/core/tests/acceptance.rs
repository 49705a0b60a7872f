//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Every comparison is exact (integer or rational equality). Time limits
//! are wall-clock seconds for the whole criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use ccs_core::ccs::{
    builtin, glue, random_walk, reflect, rotate, rotate_face_word, shrink_disk_tail,
    shrink_disk_tail_at, CellComplex, BUILTIN_NAMES,
};
use ccs_core::colouring::{
    count_colourings_bruteforce_with_budget, BoundaryColouring, Counter,
};
use ccs_core::dcp::{c_func, conj_class_count_via_c, d_func, p_func, run_all, CheckStatus};
use ccs_core::group::{
    default_suite, make_cyclic, make_dihedral, make_quaternion8, make_symmetric, Group,
};
use ccs_core::tqft::{
    compose, decode_tuple, fixes_vector, invariant_matrix, is_idempotent, matrices_equal,
    reflect_matrix, rotate_matrix, values_equal, InvariantValue, TqftMatrix,
};
use num_bigint::BigUint;
use num_rational::Ratio;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn small_groups() -> Vec<Group> {
    vec![make_cyclic(2).unwrap(), make_cyclic(3).unwrap(), make_symmetric(3).unwrap()]
}

fn b(name: &str) -> CellComplex {
    builtin(name).unwrap()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn closed_forms() -> Check {
    for g in default_suite() {
        let n = g.order() as u64;
        let gn = g.name().to_string();
        for sphere in ["sphere_a", "sphere_b"] {
            let z = invariant_matrix(&g, &b(sphere));
            let want = InvariantValue::new(g.order(), big(1), 2);
            ensure(values_equal(&z.value(0, 0), &want).unwrap(), || {
                format!("{sphere} over {gn}: {:?}", z.value(0, 0))
            })?;
        }
        let disk_in = invariant_matrix(&g, &b("disk_in"));
        let disk_out = invariant_matrix(&g, &b("disk_out"));
        for a in g.elements() {
            let want = big(n * d_func(&g, a));
            ensure(*disk_in.entry(&[], &[a]) == want && *disk_out.entry(&[a], &[]) == want, || {
                format!("disk over {gn} at {a}")
            })?;
        }
        let cyl = invariant_matrix(&g, &b("cylinder"));
        for x in g.elements() {
            for y in g.elements() {
                ensure(*cyl.entry(&[y], &[x]) == big(c_func(&g, x, y)), || {
                    format!("cylinder over {gn} at ({x},{y})")
                })?;
            }
        }
        let torus = invariant_matrix(&g, &b("torus"));
        let commuting = g
            .elements()
            .flat_map(|x| g.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| g.mul(x, y) == g.mul(y, x))
            .count() as u64;
        // (1/|G|)·#commuting has count #commuting and he 2
        let want = InvariantValue::new(g.order(), big(commuting), 2);
        ensure(values_equal(&torus.value(0, 0), &want).unwrap(), || format!("torus over {gn}"))?;
        let pants = invariant_matrix(&g, &b("pants"));
        for x in g.elements() {
            for i in g.elements() {
                for h in g.elements() {
                    ensure(*pants.entry(&[i, h], &[x]) == big(p_func(&g, x, i, h)), || {
                        format!("pants over {gn} at ({x};{i},{h})")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn move_invariance() -> Check {
    for g in [make_cyclic(3).unwrap(), make_symmetric(3).unwrap()] {
        for name in BUILTIN_NAMES {
            let m = b(name);
            let z = invariant_matrix(&g, &m);
            for seed in 0..100u64 {
                let trace = random_walk(&m, seed, 50).map_err(|e| format!("{name}: {e}"))?;
                ensure(trace.len() == 50, || format!("{name} seed {seed}: walk stopped early"))?;
                let last = invariant_matrix(&g, &trace[49].complex);
                ensure(matrices_equal(&last, &z).unwrap(), || {
                    format!("{name} over {} seed {seed}", g.name())
                })?;
            }
        }
    }
    Ok(())
}

const GLUEABLE: [&str; 7] = [
    "disk_in",
    "disk_out",
    "cylinder",
    "pants",
    "pants_reflected",
    "punctured_torus_a",
    "punctured_torus_b",
];

fn functoriality() -> Check {
    for g in small_groups() {
        for x in GLUEABLE {
            for y in GLUEABLE {
                let (mx, my) = (b(x), b(y));
                if mx.out_count() != my.in_count() || mx.out_count() == 0 {
                    continue;
                }
                let glued = glue(&mx, &my).map_err(|e| e.to_string())?;
                let lhs = invariant_matrix(&g, &glued);
                let rhs = compose(&invariant_matrix(&g, &my), &invariant_matrix(&g, &mx))
                    .map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("{x} then {y} over {}", g.name()))?;
            }
        }
    }
    Ok(())
}

fn cylinder_idempotency() -> Check {
    for g in default_suite() {
        let z = invariant_matrix(&g, &b("cylinder"));
        ensure(is_idempotent(&z).unwrap(), || format!("not idempotent over {}", g.name()))?;
        for class in g.conjugacy_classes().classes {
            let v: Vec<BigUint> = g.elements().map(|x| big(class.contains(&x) as u64)).collect();
            ensure(fixes_vector(&z, &v).unwrap(), || {
                format!("class {class:?} not fixed over {}", g.name())
            })?;
        }
    }
    Ok(())
}

fn identity_suite() -> Check {
    for g in default_suite() {
        for o in run_all(&g) {
            ensure(o.status == CheckStatus::Ok, || {
                format!("{} over {}: {:?}", o.name, g.name(), o.status)
            })?;
        }
    }
    let expected = [
        (make_symmetric(3).unwrap(), 3),
        (make_dihedral(4).unwrap(), 5),
        (make_quaternion8(), 5),
    ];
    for (g, classes) in expected {
        ensure(g.conjugacy_classes().count() == classes, || format!("{} partition", g.name()))?;
        ensure(conj_class_count_via_c(&g) == Some(classes), || format!("{} via C", g.name()))?;
    }
    let fraction = |g: &Group| Ratio::new(g.commuting_pairs(), (g.order() * g.order()) as u64);
    ensure(fraction(&make_symmetric(3).unwrap()) == Ratio::new(1, 2), || "S3 fraction".into())?;
    ensure(fraction(&make_quaternion8()) == Ratio::new(5, 8), || "Q8 fraction".into())?;
    Ok(())
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

fn oracle_equivalence() -> Check {
    let mut cases: Vec<CellComplex> = BUILTIN_NAMES.iter().map(|n| b(n)).collect();
    for name in BUILTIN_NAMES {
        for seed in 0..10u64 {
            for step in random_walk(&b(name), seed, 6).map_err(|e| e.to_string())? {
                if step.complex.interior_edge_count() <= 4 {
                    cases.push(step.complex);
                }
            }
        }
    }
    let groups: Vec<Group> = default_suite().into_iter().filter(|g| g.order() <= 8).collect();
    for g in &groups {
        for m in &cases {
            let counter = Counter::new(g, m);
            for bc in all_colourings(g, m) {
                let fast = counter.count(&bc).map_err(|e| e.to_string())?;
                let slow = count_colourings_bruteforce_with_budget(g, m, &bc, u64::MAX)
                    .map_err(|e| e.to_string())?
                    .count;
                ensure(fast == slow, || {
                    format!("{} over {} at {bc:?}: {fast} vs {slow}", m.name(), g.name())
                })?;
            }
        }
    }
    Ok(())
}

fn symmetry_operations() -> Check {
    for g in small_groups() {
        for name in BUILTIN_NAMES {
            let m = b(name);
            let z = invariant_matrix(&g, &m);
            ensure(invariant_matrix(&g, &reflect(&m)) == reflect_matrix(&z), || {
                format!("reflect {name} over {}", g.name())
            })?;
            ensure(invariant_matrix(&g, &rotate(&m)) == rotate_matrix(&z, &g).unwrap(), || {
                format!("rotate {name} over {}", g.name())
            })?;
            for f in m.faces() {
                for s in 0..f.word.len() {
                    let r = rotate_face_word(&m, f.id, s).map_err(|e| e.to_string())?;
                    ensure(invariant_matrix(&g, &r) == z, || {
                        format!("face start {s} in {name} over {}", g.name())
                    })?;
                }
            }
            let mut shrunk = Vec::new();
            for e in m.edges() {
                if let Ok(s) = shrink_disk_tail_at(&m, e.id) {
                    shrunk.push(s);
                }
            }
            for seed in 0..5 {
                if let Some(step) = random_walk(&m, seed, 8).map_err(|e| e.to_string())?.pop() {
                    let before = invariant_matrix(&g, &step.complex);
                    if let Some(s) = shrink_disk_tail(&step.complex) {
                        ensure(matrices_equal(&invariant_matrix(&g, &s), &before).unwrap(), || {
                            format!("shrink after walk on {name} seed {seed}")
                        })?;
                    }
                }
            }
            for s in shrunk {
                ensure(matrices_equal(&invariant_matrix(&g, &s), &z).unwrap(), || {
                    format!("shrink {name} over {}", g.name())
                })?;
            }
        }
    }
    // the disks and the two-disc sphere must actually offer a tail; sphere_a is
    // a single bigon with nothing to shrink
    for name in ["disk_in", "disk_out", "sphere_b"] {
        ensure(shrink_disk_tail(&b(name)).is_some(), || format!("no tail found on {name}"))?;
    }
    Ok(())
}

fn torus_decomposition() -> Check {
    for (g, value) in small_groups().into_iter().zip([2u64, 3, 3]) {
        let z = |n: &str| invariant_matrix(&g, &b(n));
        let chain: TqftMatrix = compose(
            &z("disk_in"),
            &compose(&z("pants_reflected"), &compose(&z("pants"), &z("disk_out")).unwrap())
                .unwrap(),
        )
        .unwrap();
        let torus = z("torus");
        ensure(matrices_equal(&chain, &torus).unwrap(), || format!("chain vs torus over {}", g.name()))?;
        let literal = InvariantValue::new(g.order(), big(value), 0);
        ensure(values_equal(&chain.value(0, 0), &literal).unwrap(), || {
            format!("chain over {} is {:?}, expected {value}", g.name(), chain.value(0, 0))
        })?;
    }
    Ok(())
}

fn performance_floor() -> Check {
    for g in [make_quaternion8(), make_dihedral(4).unwrap()] {
        let start = Instant::now();
        let z = invariant_matrix(&g, &b("pants"));
        let t = start.elapsed().as_secs_f64();
        ensure(z.rows() * z.cols() == 512, || "pants shape".into())?;
        ensure(t < 1.0, || format!("pants over {} took {t:.3} s", g.name()))?;
    }
    let s3 = make_symmetric(3).unwrap();
    let start = Instant::now();
    let outcomes = run_all(&s3);
    let t = start.elapsed().as_secs_f64();
    ensure(outcomes.iter().all(|o| o.status.is_ok()), || "S3 suite failed".into())?;
    ensure(t < 30.0, || format!("S3 identity suite took {t:.3} s"))
}

// name, time limit in seconds (infinite when none), body
type Criterion = (&'static str, f64, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 closed-form invariants", 10.0, closed_forms),
        ("2 move invariance", 60.0, move_invariance),
        ("3 gluing functoriality", 120.0, functoriality),
        ("4 cylinder idempotency and class eigenvectors", f64::INFINITY, cylinder_idempotency),
        ("5 identity suite", 120.0, identity_suite),
        ("6 oracle equivalence", f64::INFINITY, oracle_equivalence),
        ("7 symmetry operations", f64::INFINITY, symmetry_operations),
        ("8 torus decomposition", 5.0, torus_decomposition),
        ("9 performance floor", f64::INFINITY, performance_floor),
    ];
    let mut failures = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        let result = match result {
            Ok(()) if secs > limit => Err(format!("took {secs:.2} s, limit {limit} s")),
            other => other,
        };
        let limit_text = if limit.is_finite() { format!(", limit {limit} s") } else { String::new() };
        match result {
            Ok(()) => println!("PASS criterion {name} ({secs:.2} s{limit_text})"),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {name} ({secs:.2} s{limit_text}): {why}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
