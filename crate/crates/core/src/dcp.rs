//! The functions D, C and P and the identities relating them.
//!
//! * `D(a) = 1` if `a` is the identity, else `0`.
//! * `C(a, b) = #{k : a = k b k⁻¹}`.
//! * `P(a, b, c) = #{(j1, j2) : a = j2 b j2⁻¹ j1 c j1⁻¹}`.
//!
//! Each `check_*` function decides one identity exhaustively over a group
//! and reports the first failing argument tuple.

use std::fmt;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use crate::ccs::builtin;
use crate::colouring::{BoundaryColouring, Counter};
use crate::group::Group;
use crate::tqft::invariant_matrix;

/// Largest order for which the dense P table is built.
pub const P_TABLE_CAP: usize = 32;

/// Largest order for the `|G|⁵` pants move check.
pub const PANTS_MOVE_1_CAP: usize = 8;

pub fn d_func(g: &Group, a: usize) -> u64 {
    (a == g.identity()) as u64
}

pub fn c_func(g: &Group, a: usize, b: usize) -> u64 {
    g.elements().filter(|&k| g.conjugate(k, b) == a).count() as u64
}

pub fn p_func(g: &Group, a: usize, b: usize, c: usize) -> u64 {
    let mut count = 0;
    for j2 in g.elements() {
        let left = g.conjugate(j2, b);
        for j1 in g.elements() {
            count += (g.mul(left, g.conjugate(j1, c)) == a) as u64;
        }
    }
    count
}

/// Dense table of `C`.
#[derive(Clone, Debug)]
pub struct CTable {
    order: usize,
    data: Vec<u64>,
}

impl CTable {
    pub fn build(g: &Group) -> CTable {
        let n = g.order();
        let mut data = vec![0; n * n];
        for k in g.elements() {
            for b in g.elements() {
                data[g.conjugate(k, b) * n + b] += 1;
            }
        }
        CTable { order: n, data }
    }

    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.data[a * self.order + b]
    }
}

/// Dense table of `P`, filled by running over all `(j1, j2, b, c)`.
#[derive(Clone, Debug)]
pub struct PTable {
    order: usize,
    data: Vec<u64>,
}

impl PTable {
    pub fn build(g: &Group) -> PTable {
        let n = g.order();
        let mut data = vec![0; n * n * n];
        for b in g.elements() {
            for j2 in g.elements() {
                let left = g.conjugate(j2, b);
                for c in g.elements() {
                    for j1 in g.elements() {
                        let a = g.mul(left, g.conjugate(j1, c));
                        data[(a * n + b) * n + c] += 1;
                    }
                }
            }
        }
        PTable { order: n, data }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> u64 {
        self.data[(a * self.order + b) * self.order + c]
    }
}

/// A failing instance: the arguments and the two sides as computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub args: Vec<(&'static str, usize)>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}: lhs={} rhs={}", args.join(" "), self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Ok,
    Fail(Counterexample),
    Skipped(String),
}

impl CheckStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, CheckStatus::Ok)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, CheckStatus::Fail(_))
    }
}

fn fail(args: Vec<(&'static str, usize)>, lhs: impl ToString, rhs: impl ToString) -> CheckStatus {
    CheckStatus::Fail(Counterexample { args, lhs: lhs.to_string(), rhs: rhs.to_string() })
}

fn p_table(g: &Group) -> Result<PTable, CheckStatus> {
    if g.order() > P_TABLE_CAP {
        return Err(CheckStatus::Skipped(format!("|G| = {} exceeds {P_TABLE_CAP}", g.order())));
    }
    Ok(PTable::build(g))
}

/// `Σ_h C(g,h) C(h,i) = |G| C(g,i)`.
pub fn check_cyl_identity(g: &Group) -> CheckStatus {
    let c = CTable::build(g);
    let n = g.order() as u64;
    for a in g.elements() {
        for i in g.elements() {
            let lhs: u64 = g.elements().map(|h| c.get(a, h) * c.get(h, i)).sum();
            let rhs = n * c.get(a, i);
            if lhs != rhs {
                return fail(vec![("g", a), ("i", i)], lhs, rhs);
            }
        }
    }
    CheckStatus::Ok
}

/// `Σ_h C(g,h) = |G|`.
pub fn check_sum_c(g: &Group) -> CheckStatus {
    let c = CTable::build(g);
    for a in g.elements() {
        let lhs: u64 = g.elements().map(|h| c.get(a, h)).sum();
        if lhs != g.order() as u64 {
            return fail(vec![("g", a)], lhs, g.order());
        }
    }
    CheckStatus::Ok
}

/// `|G| / C(a,a)`; `None` if the division is not exact.
pub fn class_size_via_c(g: &Group, a: usize) -> Option<usize> {
    let c = c_func(g, a, a) as usize;
    (c > 0 && g.order().is_multiple_of(c)).then(|| g.order() / c)
}

/// `Σ C(g,h)² / |G|²`; `None` if the division is not exact.
pub fn conj_class_count_via_c(g: &Group) -> Option<usize> {
    let c = CTable::build(g);
    let total: u64 = c.data.iter().map(|x| x * x).sum();
    let sq = (g.order() * g.order()) as u64;
    total.is_multiple_of(sq).then(|| (total / sq) as usize)
}

/// Class sizes from `C` against direct enumeration of each orbit.
pub fn check_class_sizes(g: &Group) -> CheckStatus {
    for a in g.elements() {
        let mut orbit: Vec<usize> = g.elements().map(|k| g.conjugate(k, a)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        match class_size_via_c(g, a) {
            Some(s) if s == orbit.len() => {}
            other => {
                let lhs = other.map_or("not an integer".to_string(), |s| s.to_string());
                return fail(vec![("a", a)], lhs, orbit.len());
            }
        }
    }
    CheckStatus::Ok
}

/// Class count from `Σ C²` against the partition into classes.
pub fn check_class_count(g: &Group) -> CheckStatus {
    let direct = g.conjugacy_classes().count();
    match conj_class_count_via_c(g) {
        Some(k) if k == direct => CheckStatus::Ok,
        other => fail(vec![], other.map_or("not an integer".into(), |k| k.to_string()), direct),
    }
}

/// `Σ_{g,h,k,l} D(g) P(g,h,k) P(l,h,k) D(l) = |G|³ · #{(j,k) : jk = kj}`.
pub fn check_torus_identity(g: &Group) -> CheckStatus {
    if g.order() > P_TABLE_CAP {
        return CheckStatus::Skipped(format!("|G| = {} exceeds {P_TABLE_CAP}", g.order()));
    }
    let e = g.identity();
    // only g = l = 1 survive the D factors
    let lhs: u128 = g
        .elements()
        .flat_map(|h| g.elements().map(move |k| (h, k)))
        .map(|(h, k)| {
            let p = p_func(g, e, h, k) as u128;
            p * p
        })
        .sum();
    let rhs = (g.order() as u128).pow(3) * g.commuting_pairs() as u128;
    if lhs != rhs {
        return fail(vec![], lhs, rhs);
    }
    CheckStatus::Ok
}

/// `#commuting / |G| = Σ C(g,h)² / |G|²` as exact rationals.
pub fn check_two_cylinder_torus(g: &Group) -> CheckStatus {
    let c = CTable::build(g);
    let n = g.order() as u64;
    let lhs = Ratio::new(g.commuting_pairs(), n);
    let rhs = Ratio::new(c.data.iter().map(|x| x * x).sum::<u64>(), n * n);
    if lhs != rhs {
        return fail(vec![], lhs, rhs);
    }
    CheckStatus::Ok
}

/// `|G| C(a,b) = P(a,b,1)` and `|G| C(a,b) = Σ_h P(a,b,h) D(h)`.
pub fn check_c_from_p(g: &Group) -> CheckStatus {
    let p = match p_table(g) {
        Ok(p) => p,
        Err(status) => return status,
    };
    let c = CTable::build(g);
    let n = g.order() as u64;
    for a in g.elements() {
        for b in g.elements() {
            let want = n * c.get(a, b);
            let direct = p.get(a, b, g.identity());
            if direct != want {
                return fail(vec![("a", a), ("b", b)], want, direct);
            }
            let summed: u64 = g.elements().map(|h| p.get(a, b, h) * d_func(g, h)).sum();
            if summed != want {
                return fail(vec![("a", a), ("b", b)], want, summed);
            }
        }
    }
    CheckStatus::Ok
}

/// `Σ_g P(g,i,h) P(g,l,m) = Σ_g P(g,l⁻¹,i) P(g,m,h⁻¹)` for all `(i,h,l,m)`.
pub fn check_pants_move_1(g: &Group) -> CheckStatus {
    if g.order() > PANTS_MOVE_1_CAP {
        return CheckStatus::Skipped(format!(
            "|G| = {} exceeds {PANTS_MOVE_1_CAP}",
            g.order()
        ));
    }
    let p = PTable::build(g);
    for i in g.elements() {
        for h in g.elements() {
            for l in g.elements() {
                for m in g.elements() {
                    let lhs: u64 = g.elements().map(|x| p.get(x, i, h) * p.get(x, l, m)).sum();
                    let rhs: u64 = g
                        .elements()
                        .map(|x| p.get(x, g.inv(l), i) * p.get(x, m, g.inv(h)))
                        .sum();
                    if lhs != rhs {
                        return fail(vec![("i", i), ("h", h), ("l", l), ("m", m)], lhs, rhs);
                    }
                }
            }
        }
    }
    CheckStatus::Ok
}

/// `Σ_g P(g,h,g) = Σ_g P(g,g,h)`, each side also checked against the
/// colouring counts of the two punctured-torus complexes.
pub fn check_pants_move_2(g: &Group) -> CheckStatus {
    let p = match p_table(g) {
        Ok(p) => p,
        Err(status) => return status,
    };
    let ta = builtin("punctured_torus_a").expect("builtin");
    let tb = builtin("punctured_torus_b").expect("builtin");
    let (ca, cb) = (Counter::new(g, &ta), Counter::new(g, &tb));
    for h in g.elements() {
        let lhs: u64 = g.elements().map(|x| p.get(x, h, x)).sum();
        let rhs: u64 = g.elements().map(|x| p.get(x, x, h)).sum();
        if lhs != rhs {
            return fail(vec![("h", h)], lhs, rhs);
        }
        let bc = BoundaryColouring::new(vec![], vec![h]);
        let count_b = cb.count(&bc).expect("arity");
        if count_b != lhs.into() {
            return fail(vec![("h", h)], lhs, format!("punctured_torus_b count {count_b}"));
        }
        let count_a = ca.count(&bc).expect("arity");
        if count_a != rhs.into() {
            return fail(vec![("h", h)], rhs, format!("punctured_torus_a count {count_a}"));
        }
    }
    CheckStatus::Ok
}

/// `D(a⁻¹) = D(a)`, `C(h⁻¹,g⁻¹) = C(h,g) = C(g,h)`, `P(g⁻¹,h⁻¹,i⁻¹) = P(g,i,h)`.
pub fn check_symmetries(g: &Group) -> CheckStatus {
    for a in g.elements() {
        if d_func(g, g.inv(a)) != d_func(g, a) {
            return fail(vec![("a", a)], d_func(g, g.inv(a)), d_func(g, a));
        }
    }
    let c = CTable::build(g);
    for a in g.elements() {
        for b in g.elements() {
            let (x, y, z) = (c.get(g.inv(a), g.inv(b)), c.get(a, b), c.get(b, a));
            if x != y || y != z {
                return fail(vec![("h", a), ("g", b)], format!("{x} / {y}"), z);
            }
        }
    }
    let p = match p_table(g) {
        Ok(p) => p,
        Err(status) => return status,
    };
    for a in g.elements() {
        for i in g.elements() {
            for h in g.elements() {
                let lhs = p.get(g.inv(a), g.inv(h), g.inv(i));
                let rhs = p.get(a, i, h);
                if lhs != rhs {
                    return fail(vec![("g", a), ("i", i), ("h", h)], lhs, rhs);
                }
            }
        }
    }
    CheckStatus::Ok
}

/// Number of classes equals the commuting fraction times `|G|`.
pub fn check_commuting_fraction_prop(g: &Group) -> CheckStatus {
    let classes = g.conjugacy_classes().count() as u64;
    let scaled = g.commuting_fraction() * Ratio::from_integer(g.order() as u64);
    if Ratio::from_integer(classes) != scaled {
        return fail(vec![], classes, scaled);
    }
    CheckStatus::Ok
}

/// Disk, cylinder and pants matrices equal `|G| D`, `C` and `P`.
pub fn check_cross_representation(g: &Group) -> CheckStatus {
    let p = match p_table(g) {
        Ok(p) => p,
        Err(status) => return status,
    };
    let n = g.order() as u64;
    let disk = invariant_matrix(g, &builtin("disk_in").expect("builtin"));
    for a in g.elements() {
        if *disk.entry(&[], &[a]) != (n * d_func(g, a)).into() {
            return fail(vec![("g", a)], disk.entry(&[], &[a]), n * d_func(g, a));
        }
    }
    let cyl = invariant_matrix(g, &builtin("cylinder").expect("builtin"));
    let c = CTable::build(g);
    for a in g.elements() {
        for b in g.elements() {
            if *cyl.entry(&[b], &[a]) != c.get(a, b).into() {
                return fail(vec![("g", a), ("h", b)], cyl.entry(&[b], &[a]), c.get(a, b));
            }
        }
    }
    let pants = invariant_matrix(g, &builtin("pants").expect("builtin"));
    for a in g.elements() {
        for i in g.elements() {
            for h in g.elements() {
                if *pants.entry(&[i, h], &[a]) != p.get(a, i, h).into() {
                    return fail(
                        vec![("g", a), ("i", i), ("h", h)],
                        pants.entry(&[i, h], &[a]),
                        p.get(a, i, h),
                    );
                }
            }
        }
    }
    CheckStatus::Ok
}

/// One named check and how long it took.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: CheckStatus,
    pub elapsed: Duration,
}

type CheckFn = fn(&Group) -> CheckStatus;

pub const CHECKS: [(&str, CheckFn); 12] = [
    ("cyl_identity", check_cyl_identity),
    ("sum_c", check_sum_c),
    ("class_sizes", check_class_sizes),
    ("class_count", check_class_count),
    ("torus_identity", check_torus_identity),
    ("two_cylinder_torus", check_two_cylinder_torus),
    ("c_from_p", check_c_from_p),
    ("pants_move_1", check_pants_move_1),
    ("pants_move_2", check_pants_move_2),
    ("symmetries", check_symmetries),
    ("commuting_fraction", check_commuting_fraction_prop),
    ("cross_representation", check_cross_representation),
];

/// Runs every check in [`CHECKS`] order.
pub fn run_all(g: &Group) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, check)| {
            let start = Instant::now();
            let status = check(g);
            CheckOutcome { name, status, elapsed: start.elapsed() }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{default_suite, make_cyclic, make_dihedral, make_quaternion8, make_symmetric};

    fn transpositions(g: &Group) -> Vec<usize> {
        g.elements()
            .filter(|&a| a != g.identity() && g.mul(a, a) == g.identity())
            .collect()
    }

    #[test]
    fn d_examples() {
        let z2 = make_cyclic(2).unwrap();
        assert_eq!(d_func(&z2, z2.identity()), 1);
        assert_eq!(d_func(&z2, 1 - z2.identity()), 0);
    }

    #[test]
    fn c_examples() {
        let z5 = make_cyclic(5).unwrap();
        for a in z5.elements() {
            for b in z5.elements() {
                assert_eq!(c_func(&z5, a, b), if a == b { 5 } else { 0 });
            }
        }
        let s3 = make_symmetric(3).unwrap();
        let t = transpositions(&s3);
        assert_eq!(t.len(), 3);
        assert_eq!(c_func(&s3, t[0], t[1]), 2);
        for a in s3.elements() {
            assert_eq!(c_func(&s3, a, a) as usize, s3.centralizer_order(a));
        }
    }

    #[test]
    fn p_examples() {
        let s3 = make_symmetric(3).unwrap();
        let e = s3.identity();
        assert_eq!(p_func(&s3, e, e, e), 36);
        let table = PTable::build(&s3);
        for a in s3.elements() {
            for b in s3.elements() {
                assert_eq!(p_func(&s3, a, b, e), 6 * c_func(&s3, a, b));
                for c in s3.elements() {
                    assert_eq!(table.get(a, b, c), p_func(&s3, a, b, c));
                }
            }
        }
    }

    #[test]
    fn class_size_examples() {
        let s3 = make_symmetric(3).unwrap();
        assert_eq!(class_size_via_c(&s3, s3.identity()), Some(1));
        assert_eq!(class_size_via_c(&s3, transpositions(&s3)[0]), Some(3));
        let q8 = make_quaternion8();
        let minus_one = (0..8).find(|&x| q8.label(x) == "-1").unwrap();
        assert_eq!(class_size_via_c(&q8, minus_one), Some(1));
    }

    #[test]
    fn class_count_examples() {
        for n in 1..=6 {
            assert_eq!(conj_class_count_via_c(&make_cyclic(n).unwrap()), Some(n));
        }
        assert_eq!(conj_class_count_via_c(&make_symmetric(3).unwrap()), Some(3));
        assert_eq!(conj_class_count_via_c(&make_dihedral(4).unwrap()), Some(5));
        assert_eq!(conj_class_count_via_c(&make_quaternion8()), Some(5));
    }

    #[test]
    fn every_check_passes_on_the_default_suite() {
        for g in default_suite() {
            for outcome in run_all(&g) {
                assert_eq!(outcome.status, CheckStatus::Ok, "{} on {}", outcome.name, g.name());
            }
        }
    }

    #[test]
    fn caps_skip_large_groups() {
        let s4 = make_symmetric(4).unwrap();
        assert!(matches!(check_pants_move_1(&s4), CheckStatus::Skipped(_)));
        assert_eq!(check_pants_move_2(&s4), CheckStatus::Ok);
    }

    #[test]
    fn broken_table_is_caught() {
        // S3 with two products swapped is no longer a group; the identities
        // that depend on associativity notice.
        let s3 = make_symmetric(3).unwrap();
        let mut rows: Vec<Vec<usize>> =
            s3.elements().map(|a| s3.elements().map(|b| s3.mul(a, b)).collect()).collect();
        let (x, y) = (1, 2);
        let (p, q) = (rows[x][y], rows[y][x]);
        rows[x][y] = q;
        rows[y][x] = p;
        let inv = s3.elements().map(|a| s3.inv(a)).collect();
        let labels = s3.elements().map(|a| s3.label(a).to_string()).collect();
        let broken = Group::from_raw_parts("broken", 6, rows.concat(), s3.identity(), inv, labels);
        let outcomes = run_all(&broken);
        assert!(outcomes.iter().any(|o| o.status.is_fail()));
        let CheckStatus::Fail(cx) = outcomes.iter().find(|o| o.status.is_fail()).unwrap().status.clone()
        else {
            unreachable!()
        };
        assert!(cx.lhs != cx.rhs);
        assert!(!cx.to_string().is_empty());
    }
}
