//! Counting flat G-colourings of a complex with fixed boundary colours.
//!
//! A colouring assigns a group element to every edge; it is flat when each
//! face word multiplies out to the identity, reading forward occurrences as
//! `g` and backward ones as `g⁻¹`. Boundary edges take the colours of the
//! [`BoundaryColouring`]; interior edges range over the whole group.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::ccs::{CellComplex, Circle, Direction, EdgeId, EdgeKind, Side, VertexId, VertexKind};
use crate::group::Group;

/// Default number of assignments the brute-force oracle may try.
pub const DEFAULT_BRUTEFORCE_BUDGET: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BRUTEFORCE_BUDGET`].
pub const BUDGET_ENV: &str = "CCS_BRUTEFORCE_BUDGET";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColouringError {
    #[error("boundary colouring has {got_in} in and {got_out} out colours, complex has {want_in} and {want_out}")]
    Arity { want_in: usize, want_out: usize, got_in: usize, got_out: usize },
    #[error("element index {index} out of range for a group of order {order}")]
    Element { index: usize, order: usize },
    #[error("no colour assigned to edge `{0}`")]
    MissingEdge(String),
    #[error("brute force needs {needed} assignments, budget is {budget}")]
    Budget { needed: String, budget: u64 },
}

/// Colours of the in circles and out circles, each left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BoundaryColouring {
    pub in_elems: Vec<usize>,
    pub out_elems: Vec<usize>,
}

impl BoundaryColouring {
    pub fn new(in_elems: Vec<usize>, out_elems: Vec<usize>) -> BoundaryColouring {
        BoundaryColouring { in_elems, out_elems }
    }

    /// Checks lengths against `m` and indices against `g`.
    pub fn check(&self, g: &Group, m: &CellComplex) -> Result<(), ColouringError> {
        if self.in_elems.len() != m.in_count() || self.out_elems.len() != m.out_count() {
            return Err(ColouringError::Arity {
                want_in: m.in_count(),
                want_out: m.out_count(),
                got_in: self.in_elems.len(),
                got_out: self.out_elems.len(),
            });
        }
        match self.in_elems.iter().chain(&self.out_elems).find(|&&x| x >= g.order()) {
            Some(&index) => Err(ColouringError::Element { index, order: g.order() }),
            None => Ok(()),
        }
    }

    fn colour_of(&self, c: Circle) -> usize {
        match c.side {
            Side::In => self.in_elems[c.pos],
            Side::Out => self.out_elems[c.pos],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub count: BigUint,
}

fn face_product(g: &Group, word: impl Iterator<Item = (usize, Direction)>) -> usize {
    word.fold(g.identity(), |acc, (x, dir)| match dir {
        Direction::Forward => g.mul(acc, x),
        Direction::Backward => g.mul(acc, g.inv(x)),
    })
}

/// True iff every face multiplies out to the identity under `assignment`.
pub fn flat_check(
    g: &Group,
    m: &CellComplex,
    assignment: &BTreeMap<EdgeId, usize>,
) -> Result<bool, ColouringError> {
    for e in m.edges() {
        match assignment.get(&e.id) {
            None => return Err(ColouringError::MissingEdge(e.label.clone())),
            Some(&index) if index >= g.order() => {
                return Err(ColouringError::Element { index, order: g.order() })
            }
            Some(_) => {}
        }
    }
    Ok(m.faces().all(|f| {
        face_product(g, f.word.iter().map(|o| (assignment[&o.edge], o.dir))) == g.identity()
    }))
}

/// The oracle budget: `CCS_BRUTEFORCE_BUDGET` if set and numeric, else the default.
pub fn bruteforce_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BRUTEFORCE_BUDGET)
}

pub fn count_colourings_bruteforce(
    g: &Group,
    m: &CellComplex,
    bc: &BoundaryColouring,
) -> Result<CountResult, ColouringError> {
    count_colourings_bruteforce_with_budget(g, m, bc, bruteforce_budget())
}

/// Tries all `|G|^k` colourings of the `k` interior edges.
pub fn count_colourings_bruteforce_with_budget(
    g: &Group,
    m: &CellComplex,
    bc: &BoundaryColouring,
    budget: u64,
) -> Result<CountResult, ColouringError> {
    bc.check(g, m)?;
    let interior: Vec<EdgeId> = m.edges().filter(|e| e.is_interior()).map(|e| e.id).collect();
    let needed = BigUint::from(g.order()).pow(interior.len() as u32);
    if needed > BigUint::from(budget) {
        return Err(ColouringError::Budget { needed: needed.to_string(), budget });
    }
    let mut slot: HashMap<EdgeId, usize> = HashMap::new();
    let mut values = vec![0usize; interior.len()];
    for (k, &e) in interior.iter().enumerate() {
        slot.insert(e, k);
    }
    let mut fixed: HashMap<EdgeId, usize> = HashMap::new();
    for e in m.edges() {
        if let EdgeKind::Boundary(c) = e.kind {
            fixed.insert(e.id, bc.colour_of(c));
        }
    }
    let faces: Vec<_> = m.faces().map(|f| f.word.clone()).collect();
    let mut count: u64 = 0;
    loop {
        let colour = |e: &EdgeId| match slot.get(e) {
            Some(&k) => values[k],
            None => fixed[e],
        };
        let flat = faces.iter().all(|w| {
            face_product(g, w.iter().map(|o| (colour(&o.edge), o.dir))) == g.identity()
        });
        count += flat as u64;
        // odometer step
        let mut k = 0;
        while k < values.len() {
            values[k] += 1;
            if values[k] < g.order() {
                break;
            }
            values[k] = 0;
            k += 1;
        }
        if k == values.len() {
            break;
        }
    }
    Ok(CountResult { count: BigUint::from(count) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Term {
    Var(u32),
    /// Index into the boundary colours, in circles first.
    Boundary(u32),
    Identity,
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    term: Term,
    dir: Direction,
}

const UNSET: u32 = u32::MAX;

/// A complex prepared for repeated counting over one group.
///
/// Interior edges on a spanning forest rooted at the boundary anchors are
/// gauge-fixed to the identity, each contributing a factor `|G|`. The rest
/// are found by depth-first search: a face with a single unknown occurrence
/// determines it by division, a face with none is checked, and branching
/// happens on the face with the fewest unknowns.
#[derive(Clone, Debug)]
pub struct Counter<'g> {
    group: &'g Group,
    n_in: usize,
    n_out: usize,
    faces: Vec<Vec<Slot>>,
    /// For each variable, the faces it occurs in with multiplicity.
    var_faces: Vec<Vec<(u32, u32)>>,
    /// Exponent of `|G|` from gauge-fixed and unconstrained edges.
    free_exponent: u32,
}

struct State<'a> {
    boundary: &'a [usize],
    values: Vec<u32>,
    unknown: Vec<u32>,
    trail: Vec<u32>,
    queue: VecDeque<u32>,
}

impl<'g> Counter<'g> {
    pub fn new(group: &'g Group, m: &CellComplex) -> Counter<'g> {
        let n_in = m.in_count();
        let tree = gauge_tree(m);
        let mut var_of: HashMap<EdgeId, u32> = HashMap::new();
        let mut free_exponent = tree.len() as u32;
        for e in m.edges().filter(|e| e.is_interior() && !tree.contains(&e.id)) {
            var_of.insert(e.id, var_of.len() as u32);
        }
        let mut var_faces: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new(); var_of.len()];
        let faces: Vec<Vec<Slot>> = m
            .faces()
            .enumerate()
            .map(|(fi, f)| {
                f.word
                    .iter()
                    .map(|o| {
                        let e = m.edge(o.edge).expect("face refers to a known edge");
                        let term = match e.kind {
                            EdgeKind::Boundary(c) => Term::Boundary(match c.side {
                                Side::In => c.pos as u32,
                                Side::Out => (n_in + c.pos) as u32,
                            }),
                            EdgeKind::Interior => match var_of.get(&e.id) {
                                Some(&v) => {
                                    *var_faces[v as usize].entry(fi as u32).or_default() += 1;
                                    Term::Var(v)
                                }
                                None => Term::Identity,
                            },
                        };
                        Slot { term, dir: o.dir }
                    })
                    .collect()
            })
            .collect();
        // variables occurring in no face are free
        let mut renumber = vec![UNSET; var_faces.len()];
        let mut kept = Vec::new();
        for (v, fs) in var_faces.into_iter().enumerate() {
            if fs.is_empty() {
                free_exponent += 1;
            } else {
                renumber[v] = kept.len() as u32;
                kept.push(fs.into_iter().collect());
            }
        }
        let faces = faces
            .into_iter()
            .map(|w| {
                w.into_iter()
                    .map(|s| match s.term {
                        Term::Var(v) => Slot { term: Term::Var(renumber[v as usize]), ..s },
                        _ => s,
                    })
                    .collect()
            })
            .collect();
        Counter {
            group,
            n_in,
            n_out: m.out_count(),
            faces,
            var_faces: kept,
            free_exponent,
        }
    }

    pub fn group(&self) -> &Group {
        self.group
    }

    /// Number of edges left to search after gauge fixing.
    pub fn search_variables(&self) -> usize {
        self.var_faces.len()
    }

    pub fn count(&self, bc: &BoundaryColouring) -> Result<BigUint, ColouringError> {
        if bc.in_elems.len() != self.n_in || bc.out_elems.len() != self.n_out {
            return Err(ColouringError::Arity {
                want_in: self.n_in,
                want_out: self.n_out,
                got_in: bc.in_elems.len(),
                got_out: bc.out_elems.len(),
            });
        }
        let boundary: Vec<usize> = bc.in_elems.iter().chain(&bc.out_elems).copied().collect();
        if let Some(&index) = boundary.iter().find(|&&x| x >= self.group.order()) {
            return Err(ColouringError::Element { index, order: self.group.order() });
        }
        Ok(self.count_raw(&boundary))
    }

    /// Count for boundary colours given in circles first; lengths unchecked.
    pub(crate) fn count_raw(&self, boundary: &[usize]) -> BigUint {
        let mut st = State {
            boundary,
            values: vec![UNSET; self.var_faces.len()],
            unknown: self
                .faces
                .iter()
                .map(|w| w.iter().filter(|s| matches!(s.term, Term::Var(_))).count() as u32)
                .collect(),
            trail: Vec::new(),
            queue: (0..self.faces.len() as u32).collect(),
        };
        let leaves = if self.propagate(&mut st) { self.search(&mut st) } else { 0 };
        BigUint::from(leaves) * BigUint::from(self.group.order()).pow(self.free_exponent)
    }

    fn value(&self, st: &State<'_>, t: Term) -> Option<usize> {
        match t {
            Term::Var(v) => {
                let x = st.values[v as usize];
                (x != UNSET).then_some(x as usize)
            }
            Term::Boundary(b) => Some(st.boundary[b as usize]),
            Term::Identity => Some(self.group.identity()),
        }
    }

    fn set(&self, st: &mut State<'_>, v: u32, x: usize) {
        st.values[v as usize] = x as u32;
        st.trail.push(v);
        for &(f, mult) in &self.var_faces[v as usize] {
            st.unknown[f as usize] -= mult;
            if st.unknown[f as usize] <= 1 {
                st.queue.push_back(f);
            }
        }
    }

    fn undo(&self, st: &mut State<'_>, mark: usize) {
        while st.trail.len() > mark {
            let v = st.trail.pop().unwrap();
            st.values[v as usize] = UNSET;
            for &(f, mult) in &self.var_faces[v as usize] {
                st.unknown[f as usize] += mult;
            }
        }
        st.queue.clear();
    }

    /// Settles queued faces; false on a contradiction.
    fn propagate(&self, st: &mut State<'_>) -> bool {
        let g = self.group;
        while let Some(f) = st.queue.pop_front() {
            let word = &self.faces[f as usize];
            match st.unknown[f as usize] {
                0 => {
                    let p = face_product(
                        g,
                        word.iter().map(|s| (self.value(st, s.term).unwrap(), s.dir)),
                    );
                    if p != g.identity() {
                        return false;
                    }
                }
                1 => {
                    let k = word
                        .iter()
                        .position(|s| self.value(st, s.term).is_none())
                        .expect("one unknown occurrence");
                    let len = word.len();
                    // rest = w[k+1] … w[k-1]; flatness says rest · x^± = 1
                    let rest = face_product(
                        g,
                        (1..len).map(|d| {
                            let s = word[(k + d) % len];
                            (self.value(st, s.term).unwrap(), s.dir)
                        }),
                    );
                    let x = match word[k].dir {
                        Direction::Forward => g.inv(rest),
                        Direction::Backward => rest,
                    };
                    let Term::Var(v) = word[k].term else { unreachable!() };
                    self.set(st, v, x);
                }
                _ => {}
            }
        }
        true
    }

    fn search(&self, st: &mut State<'_>) -> u64 {
        let branch = (0..self.faces.len())
            .filter(|&f| st.unknown[f] > 0)
            .min_by_key(|&f| st.unknown[f]);
        let Some(f) = branch else {
            return 1;
        };
        let v = self.faces[f]
            .iter()
            .find_map(|s| match s.term {
                Term::Var(v) if st.values[v as usize] == UNSET => Some(v),
                _ => None,
            })
            .expect("face with unknowns");
        let mark = st.trail.len();
        let mut total = 0;
        for x in self.group.elements() {
            self.set(st, v, x);
            if self.propagate(st) {
                total += self.search(st);
            }
            self.undo(st, mark);
        }
        total
    }
}

/// Interior non-loop edges of a spanning forest grown from the boundary
/// anchors, each pointing at an internal vertex reached for the first time.
fn gauge_tree(m: &CellComplex) -> Vec<EdgeId> {
    let mut adjacent: HashMap<VertexId, Vec<(EdgeId, VertexId)>> = HashMap::new();
    for e in m.edges().filter(|e| e.is_interior() && !e.is_loop()) {
        adjacent.entry(e.src).or_default().push((e.id, e.dst));
        adjacent.entry(e.dst).or_default().push((e.id, e.src));
    }
    let mut pinned: Vec<VertexId> = m
        .vertices()
        .filter(|v| matches!(v.kind, VertexKind::External(_)))
        .map(|v| v.id)
        .collect();
    for e in m.edges().filter(|e| !e.is_interior()) {
        pinned.push(e.src);
        pinned.push(e.dst);
    }
    let mut reached: HashMap<VertexId, ()> = HashMap::new();
    let mut tree = Vec::new();
    let mut grow = |roots: Vec<VertexId>, reached: &mut HashMap<VertexId, ()>| {
        let mut queue: VecDeque<VertexId> = VecDeque::new();
        for r in roots {
            if reached.insert(r, ()).is_none() {
                queue.push_back(r);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &(e, w) in adjacent.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
                if reached.insert(w, ()).is_none() {
                    tree.push(e);
                    queue.push_back(w);
                }
            }
        }
    };
    grow(pinned, &mut reached);
    let rest: Vec<VertexId> = m.vertices().map(|v| v.id).collect();
    for v in rest {
        if !reached.contains_key(&v) {
            grow(vec![v], &mut reached);
        }
    }
    tree
}

/// Exact number of flat colourings with the given boundary colours.
pub fn count_colourings(
    g: &Group,
    m: &CellComplex,
    bc: &BoundaryColouring,
) -> Result<CountResult, ColouringError> {
    bc.check(g, m)?;
    Counter::new(g, m).count(bc).map(|count| CountResult { count })
}

/// `|G|^k` for `k` interior edges: the trivial upper bound on any count.
pub fn colouring_bound(g: &Group, m: &CellComplex) -> BigUint {
    let mut b = BigUint::one();
    for _ in 0..m.interior_edge_count() {
        b *= g.order();
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccs::{builtin, BUILTIN_NAMES};
    use crate::group::{make_cyclic, make_symmetric};

    fn all_colourings(g: &Group, m: &CellComplex) -> Vec<BoundaryColouring> {
        let (n, k) = (m.in_count(), m.out_count());
        let total = g.order().pow((n + k) as u32);
        (0..total)
            .map(|mut idx| {
                let mut digits = vec![0; n + k];
                for d in digits.iter_mut().rev() {
                    *d = idx % g.order();
                    idx /= g.order();
                }
                let out = digits.split_off(n);
                BoundaryColouring::new(digits, out)
            })
            .collect()
    }

    #[test]
    fn identity_assignment_is_flat() {
        let g = make_symmetric(3).unwrap();
        for name in BUILTIN_NAMES {
            let m = builtin(name).unwrap();
            let a: BTreeMap<EdgeId, usize> = m.edges().map(|e| (e.id, g.identity())).collect();
            assert_eq!(flat_check(&g, &m, &a), Ok(true), "{name}");
        }
    }

    #[test]
    fn torus_noncommuting_pair_is_not_flat() {
        let g = make_symmetric(3).unwrap();
        let t = builtin("torus").unwrap();
        let (a, b) = (t.edge_by_label("a").unwrap().id, t.edge_by_label("b").unwrap().id);
        let (x, y) = g
            .elements()
            .flat_map(|x| g.elements().map(move |y| (x, y)))
            .find(|&(x, y)| g.mul(x, y) != g.mul(y, x))
            .unwrap();
        let assignment = BTreeMap::from([(a, x), (b, y)]);
        assert_eq!(flat_check(&g, &t, &assignment), Ok(false));
        let missing = BTreeMap::from([(a, x)]);
        assert_eq!(flat_check(&g, &t, &missing), Err(ColouringError::MissingEdge("b".into())));
    }

    #[test]
    fn cylinder_conjugate_is_flat() {
        let g = make_symmetric(3).unwrap();
        let c = builtin("cylinder").unwrap();
        let id = |l: &str| c.edge_by_label(l).unwrap().id;
        for k in g.elements() {
            for h in g.elements() {
                let a = BTreeMap::from([(id("g"), g.conjugate(k, h)), (id("h"), h), (id("k"), k)]);
                assert_eq!(flat_check(&g, &c, &a), Ok(true));
            }
        }
    }

    #[test]
    fn closed_examples() {
        let s3 = make_symmetric(3).unwrap();
        let none = BoundaryColouring::default();
        let sphere = builtin("sphere_a").unwrap();
        let torus = builtin("torus").unwrap();
        for count in [count_colourings, count_colourings_bruteforce] {
            assert_eq!(count(&s3, &sphere, &none).unwrap().count, BigUint::from(6u32));
            assert_eq!(count(&s3, &torus, &none).unwrap().count, BigUint::from(18u32));
        }
        let z2 = make_cyclic(2).unwrap();
        let disk = builtin("disk_out").unwrap();
        let bc = BoundaryColouring::new(vec![], vec![1]);
        assert_eq!(count_colourings(&z2, &disk, &bc).unwrap().count, BigUint::from(0u32));
        let bc = BoundaryColouring::new(vec![], vec![0]);
        assert_eq!(count_colourings(&z2, &disk, &bc).unwrap().count, BigUint::from(2u32));
        let pants = builtin("pants").unwrap();
        let e = s3.identity();
        let bc = BoundaryColouring::new(vec![e], vec![e, e]);
        assert_eq!(count_colourings(&s3, &pants, &bc).unwrap().count, BigUint::from(36u32));
    }

    #[test]
    fn solver_matches_oracle_on_builtins() {
        for g in [make_cyclic(2).unwrap(), make_cyclic(3).unwrap(), make_symmetric(3).unwrap()] {
            for name in BUILTIN_NAMES {
                let m = builtin(name).unwrap();
                let counter = Counter::new(&g, &m);
                for bc in all_colourings(&g, &m) {
                    let fast = counter.count(&bc).unwrap();
                    let slow = count_colourings_bruteforce(&g, &m, &bc).unwrap().count;
                    assert_eq!(fast, slow, "{name} over {} at {bc:?}", g.name());
                }
            }
        }
    }

    #[test]
    fn gauge_fixing_pins_tree_edges() {
        let g = make_cyclic(3).unwrap();
        let sb = builtin("sphere_b").unwrap();
        // j1, j2 hang off w; the loop k stays a variable
        assert_eq!(Counter::new(&g, &sb).search_variables(), 1);
        // k joins two anchors, neither of which can be gauged
        let c = builtin("cylinder").unwrap();
        assert_eq!(Counter::new(&g, &c).search_variables(), 1);
        let d = builtin("disk_in").unwrap();
        assert_eq!(Counter::new(&g, &d).search_variables(), 0);
    }

    #[test]
    fn arity_and_range_errors() {
        let g = make_cyclic(2).unwrap();
        let c = builtin("cylinder").unwrap();
        let bad = BoundaryColouring::new(vec![0], vec![]);
        assert!(matches!(count_colourings(&g, &c, &bad), Err(ColouringError::Arity { .. })));
        let bad = BoundaryColouring::new(vec![0], vec![5]);
        assert_eq!(
            count_colourings_bruteforce(&g, &c, &bad),
            Err(ColouringError::Element { index: 5, order: 2 })
        );
    }

    #[test]
    fn budget_is_enforced() {
        let g = make_symmetric(3).unwrap();
        let t = builtin("torus").unwrap();
        let none = BoundaryColouring::default();
        assert!(matches!(
            count_colourings_bruteforce_with_budget(&g, &t, &none, 35),
            Err(ColouringError::Budget { budget: 35, .. })
        ));
        assert!(count_colourings_bruteforce_with_budget(&g, &t, &none, 36).is_ok());
    }

    #[test]
    fn empty_complex_counts_one() {
        let g = make_symmetric(3).unwrap();
        let e = CellComplex::empty();
        let none = BoundaryColouring::default();
        assert_eq!(count_colourings(&g, &e, &none).unwrap().count, BigUint::one());
        assert_eq!(count_colourings_bruteforce(&g, &e, &none).unwrap().count, BigUint::one());
    }
}
