//! Finite groups stored as dense Cayley tables.
//!
//! Elements are the indices `0..order`. The identity is stored explicitly and
//! need not be index 0, so that user-supplied tables can be taken as they are.

use std::fmt;
use std::path::Path;

use num_rational::Ratio;
use thiserror::Error;

/// Largest order accepted from a Cayley file or a direct product.
pub const ORDER_CAP: usize = 256;

/// A single failure of the group axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupViolation {
    EntryOutOfRange { a: usize, b: usize, value: usize },
    Associativity { a: usize, b: usize, c: usize },
    Identity { a: usize },
    Inverse { a: usize },
}

impl fmt::Display for GroupViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupViolation::EntryOutOfRange { a, b, value } => {
                write!(f, "entry mul[{a}][{b}] = {value} is out of range")
            }
            GroupViolation::Associativity { a, b, c } => {
                write!(f, "associativity fails for ({a},{b},{c})")
            }
            GroupViolation::Identity { a } => write!(f, "identity law fails at {a}"),
            GroupViolation::Inverse { a } => write!(f, "inverse law fails at {a}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("group order {order} exceeds the cap of {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("not a group: {0}")]
    Axiom(GroupViolation),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("bad group spec `{0}`")]
    Spec(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    labels: Vec<String>,
}

/// Partition of the elements into conjugacy classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyData {
    /// Classes ordered by their smallest member; members sorted.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ConjugacyData {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_size(&self, a: usize) -> usize {
        self.classes[self.class_of[a]].len()
    }
}

impl Group {
    /// Builds a group from table rows, inferring identity and inverses and
    /// checking every axiom.
    pub fn from_rows(
        name: impl Into<String>,
        rows: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Group, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::Argument("empty table".into()));
        }
        for (a, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::Argument(format!(
                    "row {a} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for (b, &value) in row.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::Axiom(GroupViolation::EntryOutOfRange {
                        a,
                        b,
                        value,
                    }));
                }
            }
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let at = |a: usize, b: usize| table[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or(GroupError::NoIdentity)?;
        let mut inv = Vec::with_capacity(order);
        for a in 0..order {
            let b = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(GroupError::NoInverse(a))?;
            inv.push(b);
        }
        let labels = labels.unwrap_or_else(|| (0..order).map(|a| a.to_string()).collect());
        let group = Group::from_raw_parts(name, order, table, identity, inv, labels);
        match group.validate() {
            Ok(()) => Ok(group),
            Err(mut violations) => Err(GroupError::Axiom(violations.swap_remove(0))),
        }
    }

    /// Assembles a group without checking anything. Use [`Group::validate`]
    /// before trusting the result.
    pub fn from_raw_parts(
        name: impl Into<String>,
        order: usize,
        table: Vec<usize>,
        identity: usize,
        inv: Vec<usize>,
        labels: Vec<String>,
    ) -> Group {
        Group {
            name: name.into(),
            order,
            table,
            identity,
            inv,
            labels,
        }
    }

    /// Checks range, associativity, identity and inverse laws. Associativity
    /// is checked exhaustively, which is O(n³).
    pub fn validate(&self) -> Result<(), Vec<GroupViolation>> {
        let n = self.order;
        let mut violations = Vec::new();
        let in_range = |x: usize| x < n;
        if self.table.len() != n * n || self.inv.len() != n || !in_range(self.identity) {
            violations.push(GroupViolation::Identity { a: self.identity });
            return Err(violations);
        }
        for a in 0..n {
            for b in 0..n {
                let value = self.table[a * n + b];
                if !in_range(value) {
                    violations.push(GroupViolation::EntryOutOfRange { a, b, value });
                }
            }
            if !in_range(self.inv[a]) {
                violations.push(GroupViolation::Inverse { a });
            }
        }
        if !violations.is_empty() {
            return Err(violations);
        }
        'assoc: for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        violations.push(GroupViolation::Associativity { a, b, c });
                        break 'assoc;
                    }
                }
            }
        }
        let e = self.identity;
        for a in 0..n {
            if self.mul(e, a) != a || self.mul(a, e) != a {
                violations.push(GroupViolation::Identity { a });
            }
            if self.mul(a, self.inv[a]) != e || self.mul(self.inv[a], a) != e {
                violations.push(GroupViolation::Inverse { a });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Human-readable name of an element, e.g. one-line notation for permutations.
    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// `k·h·k⁻¹`.
    pub fn conjugate(&self, k: usize, h: usize) -> usize {
        self.mul(self.mul(k, h), self.inv(k))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugacy_classes(&self) -> ConjugacyData {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for a in self.elements() {
            if class_of[a] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members: Vec<usize> = self.elements().map(|k| self.conjugate(k, a)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = id;
            }
            classes.push(members);
        }
        ConjugacyData { classes, class_of }
    }

    /// Number of ordered pairs `(j, k)` with `jk = kj`.
    pub fn commuting_pairs(&self) -> u64 {
        let mut count = 0u64;
        for a in self.elements() {
            for b in self.elements() {
                if self.mul(a, b) == self.mul(b, a) {
                    count += 1;
                }
            }
        }
        count
    }

    /// `#{(j,k) : jk = kj} / |G|²`, reduced.
    pub fn commuting_fraction(&self) -> Ratio<u64> {
        let n = self.order as u64;
        Ratio::new(self.commuting_pairs(), n * n)
    }

    /// Order of the centralizer of `a`.
    pub fn centralizer_order(&self, a: usize) -> usize {
        self.elements()
            .filter(|&k| self.mul(k, a) == self.mul(a, k))
            .count()
    }

    /// Parses the text Cayley format: first line the order, then one row per
    /// element; lines starting with `#` are comments.
    pub fn from_cayley_table(text: &str) -> Result<Group, GroupError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(GroupError::Parse {
            line: 0,
            msg: "missing order line".into(),
        })?;
        let order: usize = header.parse().map_err(|_| GroupError::Parse {
            line,
            msg: format!("expected the group order, found `{header}`"),
        })?;
        if order == 0 {
            return Err(GroupError::Parse {
                line,
                msg: "order must be positive".into(),
            });
        }
        if order > ORDER_CAP {
            return Err(GroupError::TooLarge {
                order,
                cap: ORDER_CAP,
            });
        }
        let mut rows = Vec::with_capacity(order);
        for (line, text) in lines {
            if rows.len() == order {
                return Err(GroupError::Parse {
                    line,
                    msg: "more rows than the declared order".into(),
                });
            }
            let row = text
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| GroupError::Parse {
                        line,
                        msg: format!("bad element index `{tok}`"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != order {
                return Err(GroupError::Parse {
                    line,
                    msg: format!("expected {order} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != order {
            return Err(GroupError::Parse {
                line: 0,
                msg: format!("expected {order} rows, found {}", rows.len()),
            });
        }
        Group::from_rows("file", rows, None)
    }

    /// Writes the group in the Cayley file format.
    pub fn to_cayley_table(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for a in self.elements() {
            let row: Vec<String> = self.elements().map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

/// `Z_n` with `a·b = (a+b) mod n`.
pub fn make_cyclic(n: usize) -> Result<Group, GroupError> {
    if n == 0 {
        return Err(GroupError::Argument("cyclic order must be at least 1".into()));
    }
    if n > ORDER_CAP {
        return Err(GroupError::TooLarge { order: n, cap: ORDER_CAP });
    }
    let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    Group::from_rows(format!("Z{n}"), rows, None)
}

/// Dihedral group of order `2n`; element `k + n·s` is `r^k s^s`.
pub fn make_dihedral(n: usize) -> Result<Group, GroupError> {
    if n < 2 {
        return Err(GroupError::Argument("dihedral parameter must be at least 2".into()));
    }
    if 2 * n > ORDER_CAP {
        return Err(GroupError::TooLarge { order: 2 * n, cap: ORDER_CAP });
    }
    let order = 2 * n;
    let split = |x: usize| (x % n, x / n);
    let rows = (0..order)
        .map(|x| {
            let (a, s) = split(x);
            (0..order)
                .map(|y| {
                    let (b, t) = split(y);
                    // r^a s^s · r^b s^t = r^(a ± b) s^(s+t)
                    let rot = if s == 0 { (a + b) % n } else { (a + n - b) % n };
                    rot + n * ((s + t) % 2)
                })
                .collect()
        })
        .collect();
    let labels = (0..order)
        .map(|x| {
            let (a, s) = split(x);
            match (a, s) {
                (0, 0) => "e".to_string(),
                (_, 0) => format!("r^{a}"),
                (0, _) => "s".to_string(),
                _ => format!("r^{a}s"),
            }
        })
        .collect();
    Group::from_rows(format!("D{n}"), rows, Some(labels))
}

/// Symmetric group on `n ≤ 5` points. Permutations are indexed in
/// lexicographic order of their one-line notation, and `(p·q)(x) = p(q(x))`.
pub fn make_symmetric(n: usize) -> Result<Group, GroupError> {
    if !(1..=5).contains(&n) {
        return Err(GroupError::Argument("symmetric degree must be in 1..=5".into()));
    }
    let perms = permutations(n);
    let index = |p: &[usize]| {
        perms
            .binary_search_by(|q| q.as_slice().cmp(p))
            .expect("composition of permutations is a permutation")
    };
    let rows = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let composed: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                    index(&composed)
                })
                .collect()
        })
        .collect();
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<String>())
        .collect();
    Group::from_rows(format!("S{n}"), rows, Some(labels))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                current.push(x);
                rec(n, current, used, out);
                current.pop();
                used[x] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// Quaternion group. Index `2u + s` is `±u` with `u ∈ {1, i, j, k}` and
/// `s = 1` for the negative sign.
pub fn make_quaternion8() -> Group {
    // unit products: (unit, negate)
    const UNIT_MUL: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let rows = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (u, s) = (x / 2, x % 2);
                    let (v, t) = (y / 2, y % 2);
                    let (w, neg) = UNIT_MUL[u][v];
                    2 * w + ((s + t + neg as usize) % 2)
                })
                .collect()
        })
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    Group::from_rows("Q8", rows, Some(labels)).expect("Q8 table is a group")
}

/// `a × b`, element `(x, y)` at index `x·|b| + y`.
pub fn direct_product(a: &Group, b: &Group) -> Result<Group, GroupError> {
    let order = a.order() * b.order();
    if order > ORDER_CAP {
        return Err(GroupError::TooLarge { order, cap: ORDER_CAP });
    }
    let nb = b.order();
    let rows = (0..order)
        .map(|x| {
            (0..order)
                .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                .collect()
        })
        .collect();
    let labels = (0..order)
        .map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb)))
        .collect();
    Group::from_rows(format!("{}x{}", a.name(), b.name()), rows, Some(labels))
}

/// Textual group description as accepted on the command line:
/// `cyclic:N`, `dihedral:N`, `symmetric:N`, `quaternion8`,
/// `product:<spec>x<spec>` and `file:<path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Quaternion8,
    Product(Box<GroupSpec>, Box<GroupSpec>),
    File(String),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec, GroupError> {
        let (spec, rest) = Self::parse_prefix(text)?;
        if !rest.is_empty() {
            return Err(GroupError::Spec(text.to_string()));
        }
        Ok(spec)
    }

    // Products are parsed greedily from the left, so
    // `product:product:AxBxC` is `(A×B)×C`.
    fn parse_prefix(text: &str) -> Result<(GroupSpec, &str), GroupError> {
        let bad = || GroupError::Spec(text.to_string());
        if let Some(rest) = text.strip_prefix("quaternion8") {
            return Ok((GroupSpec::Quaternion8, rest));
        }
        if let Some(path) = text.strip_prefix("file:") {
            if path.is_empty() {
                return Err(bad());
            }
            return Ok((GroupSpec::File(path.to_string()), ""));
        }
        if let Some(rest) = text.strip_prefix("product:") {
            let (left, rest) = Self::parse_prefix(rest)?;
            let rest = rest.strip_prefix('x').ok_or_else(bad)?;
            let (right, rest) = Self::parse_prefix(rest)?;
            return Ok((GroupSpec::Product(Box::new(left), Box::new(right)), rest));
        }
        let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
        let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(bad());
        }
        let n: usize = rest[..digits].parse().map_err(|_| bad())?;
        let spec = match kind {
            "cyclic" => GroupSpec::Cyclic(n),
            "dihedral" => GroupSpec::Dihedral(n),
            "symmetric" => GroupSpec::Symmetric(n),
            _ => return Err(bad()),
        };
        Ok((spec, &rest[digits..]))
    }

    pub fn build(&self) -> Result<Group, GroupError> {
        match self {
            GroupSpec::Cyclic(n) => make_cyclic(*n),
            GroupSpec::Dihedral(n) => make_dihedral(*n),
            GroupSpec::Symmetric(n) => make_symmetric(*n),
            GroupSpec::Quaternion8 => Ok(make_quaternion8()),
            GroupSpec::Product(a, b) => direct_product(&a.build()?, &b.build()?),
            GroupSpec::File(path) => {
                let text = std::fs::read_to_string(Path::new(path)).map_err(|e| GroupError::Io {
                    path: path.clone(),
                    msg: e.to_string(),
                })?;
                Group::from_cayley_table(&text)
            }
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupSpec::parse(s)
    }
}

/// The groups every identity check is run against: Z1..Z6, S3, D4, Q8, Z2×Z2.
pub fn default_suite() -> Vec<Group> {
    let mut groups: Vec<Group> = (1..=6).map(|n| make_cyclic(n).unwrap()).collect();
    groups.push(make_symmetric(3).unwrap());
    groups.push(make_dihedral(4).unwrap());
    groups.push(make_quaternion8());
    let z2 = make_cyclic(2).unwrap();
    groups.push(direct_product(&z2, &z2).unwrap());
    groups
}
