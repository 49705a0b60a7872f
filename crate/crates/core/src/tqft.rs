//! Normalized invariants and invariant matrices.
//!
//! The invariant of a complex with `n` in circles, `m` out circles and `v`
//! internal vertices is `#colourings / |G|^((n+m)/2 + v)`. It is kept exact
//! as a raw count together with `he = n + m + 2v`, the exponent of
//! `|G|^(1/2)` in the denominator.
//!
//! Matrix rows are indexed by out-tuples and columns by in-tuples, each in
//! mixed radix with the leftmost circle most significant.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::ccs::CellComplex;
use crate::colouring::{count_colourings, BoundaryColouring, ColouringError, Counter};
use crate::group::Group;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TqftError {
    #[error("group orders differ: {0} vs {1}")]
    GroupMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// `count · group_order^(−half_exponent/2)`, held exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantValue {
    pub group_order: usize,
    pub count: BigUint,
    pub half_exponent: u32,
}

impl InvariantValue {
    pub fn new(group_order: usize, count: impl Into<BigUint>, half_exponent: u32) -> InvariantValue {
        InvariantValue { group_order, count: count.into(), half_exponent }
    }

    /// Approximate value, for display only.
    pub fn to_f64(&self) -> f64 {
        if self.count.is_zero() {
            return 0.0;
        }
        let ln = ln_big(&self.count) - 0.5 * self.half_exponent as f64 * (self.group_order as f64).ln();
        ln.exp()
    }

    /// Decimal rendering with 12 significant digits.
    pub fn render(&self) -> String {
        render_decimal(self.to_f64())
    }
}

fn ln_big(x: &BigUint) -> f64 {
    match x.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        _ => {
            let bits = x.bits();
            let shifted = x >> (bits - 64);
            shifted.to_f64().unwrap().ln() + (bits - 64) as f64 * std::f64::consts::LN_2
        }
    }
}

fn render_decimal(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{v:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Exact equality of the two values: `a.count² · order^b.he == b.count² · order^a.he`.
pub fn values_equal(a: &InvariantValue, b: &InvariantValue) -> Result<bool, TqftError> {
    if a.group_order != b.group_order {
        return Err(TqftError::GroupMismatch(a.group_order, b.group_order));
    }
    Ok(scaled_equal(&a.count, a.half_exponent, &b.count, b.half_exponent, a.group_order))
}

fn scaled_equal(x: &BigUint, xe: u32, y: &BigUint, ye: u32, order: usize) -> bool {
    let o = BigUint::from(order);
    let (lo, hi) = (xe.min(ye), xe.max(ye));
    // cancel the common power before comparing
    let shift = o.pow(hi - lo);
    if xe <= ye {
        x * x * shift == y * y
    } else {
        x * x == y * y * shift
    }
}

/// Index of a tuple with the leftmost entry most significant.
pub fn encode_tuple(tuple: &[usize], order: usize) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * order + x)
}

pub fn decode_tuple(mut index: usize, len: usize, order: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % order;
        index /= order;
    }
    out
}

/// Raw colouring counts for every boundary colouring, with the shared exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TqftMatrix {
    pub group_order: usize,
    pub in_circles: usize,
    pub out_circles: usize,
    pub half_exponent: u32,
    entries: Vec<BigUint>,
}

impl TqftMatrix {
    pub fn from_entries(
        group_order: usize,
        in_circles: usize,
        out_circles: usize,
        half_exponent: u32,
        entries: Vec<BigUint>,
    ) -> Result<TqftMatrix, TqftError> {
        let want = group_order.pow(in_circles as u32) * group_order.pow(out_circles as u32);
        if entries.len() != want {
            return Err(TqftError::Shape(format!("{} entries, expected {want}", entries.len())));
        }
        Ok(TqftMatrix { group_order, in_circles, out_circles, half_exponent, entries })
    }

    pub fn rows(&self) -> usize {
        self.group_order.pow(self.out_circles as u32)
    }

    pub fn cols(&self) -> usize {
        self.group_order.pow(self.in_circles as u32)
    }

    pub fn get(&self, row: usize, col: usize) -> &BigUint {
        &self.entries[row * self.cols() + col]
    }

    /// Raw count for out-tuple `out` and in-tuple `inp`.
    pub fn entry(&self, out: &[usize], inp: &[usize]) -> &BigUint {
        self.get(encode_tuple(out, self.group_order), encode_tuple(inp, self.group_order))
    }

    pub fn value(&self, row: usize, col: usize) -> InvariantValue {
        InvariantValue::new(self.group_order, self.get(row, col).clone(), self.half_exponent)
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    /// The text dump: a header line, then one line per row.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "tqft n={} m={} order={} he={}\n",
            self.in_circles, self.out_circles, self.group_order, self.half_exponent
        );
        for r in 0..self.rows() {
            let row: Vec<String> = (0..self.cols()).map(|c| self.get(r, c).to_string()).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<TqftMatrix, TqftError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or(TqftError::Parse { line: 1, msg: "empty input".into() })?;
        let perr = |line: usize, msg: &str| TqftError::Parse { line, msg: msg.into() };
        let mut fields = header.split_whitespace();
        if fields.next() != Some("tqft") {
            return Err(perr(1, "expected `tqft` header"));
        }
        let mut get = |key: &str| -> Result<usize, TqftError> {
            fields
                .next()
                .and_then(|f| f.strip_prefix(key))
                .and_then(|f| f.strip_prefix('='))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| perr(1, &format!("expected `{key}=<int>`")))
        };
        let (n, m, order, he) = (get("n")?, get("m")?, get("order")?, get("he")?);
        if order == 0 {
            return Err(perr(1, "order must be positive"));
        }
        let cols = order.pow(n as u32);
        let mut entries = Vec::new();
        for (k, line) in lines {
            let row: Vec<BigUint> = line
                .split_whitespace()
                .map(|t| t.parse::<BigUint>().map_err(|_| perr(k + 1, "bad integer")))
                .collect::<Result<_, _>>()?;
            if row.len() != cols {
                return Err(perr(k + 1, &format!("row has {} entries, expected {cols}", row.len())));
            }
            entries.extend(row);
        }
        TqftMatrix::from_entries(order, n, m, he as u32, entries)
    }
}

/// The normalized invariant for one boundary colouring.
pub fn invariant_scalar(
    g: &Group,
    m: &CellComplex,
    bc: &BoundaryColouring,
) -> Result<InvariantValue, ColouringError> {
    let count = count_colourings(g, m, bc)?.count;
    Ok(InvariantValue::new(g.order(), count, half_exponent_of(m)))
}

/// `n + m + 2v`.
pub fn half_exponent_of(m: &CellComplex) -> u32 {
    (m.in_count() + m.out_count() + 2 * m.internal_vertex_count()) as u32
}

/// Counts for every boundary colouring; columns are computed in parallel.
pub fn invariant_matrix(g: &Group, m: &CellComplex) -> TqftMatrix {
    let (n, k) = (m.in_count(), m.out_count());
    let order = g.order();
    let counter = Counter::new(g, m);
    let (rows, cols) = (order.pow(k as u32), order.pow(n as u32));
    let columns: Vec<Vec<BigUint>> = (0..cols)
        .into_par_iter()
        .map(|c| {
            let mut boundary = decode_tuple(c, n, order);
            boundary.extend(std::iter::repeat_n(0, k));
            (0..rows)
                .map(|r| {
                    boundary[n..].copy_from_slice(&decode_tuple(r, k, order));
                    counter.count_raw(&boundary)
                })
                .collect()
        })
        .collect();
    let mut entries = vec![BigUint::zero(); rows * cols];
    for (c, column) in columns.into_iter().enumerate() {
        for (r, x) in column.into_iter().enumerate() {
            entries[r * cols + c] = x;
        }
    }
    TqftMatrix {
        group_order: order,
        in_circles: n,
        out_circles: k,
        half_exponent: half_exponent_of(m),
        entries,
    }
}

fn same_order(a: &TqftMatrix, b: &TqftMatrix) -> Result<(), TqftError> {
    if a.group_order != b.group_order {
        return Err(TqftError::GroupMismatch(a.group_order, b.group_order));
    }
    Ok(())
}

/// `z2 ∘ z1`: first `z1`, then `z2`.
pub fn compose(z2: &TqftMatrix, z1: &TqftMatrix) -> Result<TqftMatrix, TqftError> {
    same_order(z1, z2)?;
    if z1.out_circles != z2.in_circles || z1.out_circles == 0 {
        return Err(TqftError::Shape(format!(
            "cannot compose {} out circles with {} in circles",
            z1.out_circles, z2.in_circles
        )));
    }
    let (rows, inner, cols) = (z2.rows(), z1.rows(), z1.cols());
    let entries: Vec<BigUint> = (0..rows * cols)
        .into_par_iter()
        .map(|idx| {
            let (r, c) = (idx / cols, idx % cols);
            (0..inner).fold(BigUint::zero(), |acc, k| {
                let (a, b) = (z2.get(r, k), z1.get(k, c));
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    acc + a * b
                }
            })
        })
        .collect();
    Ok(TqftMatrix {
        group_order: z1.group_order,
        in_circles: z1.in_circles,
        out_circles: z2.out_circles,
        half_exponent: z1.half_exponent + z2.half_exponent,
        entries,
    })
}

/// Kronecker product with `z1`'s circles leftmost.
pub fn tensor(z1: &TqftMatrix, z2: &TqftMatrix) -> Result<TqftMatrix, TqftError> {
    same_order(z1, z2)?;
    let (r2, c2) = (z2.rows(), z2.cols());
    let (rows, cols) = (z1.rows() * r2, z1.cols() * c2);
    let entries = (0..rows * cols)
        .map(|idx| {
            let (r, c) = (idx / cols, idx % cols);
            z1.get(r / r2, c / c2) * z2.get(r % r2, c % c2)
        })
        .collect();
    Ok(TqftMatrix {
        group_order: z1.group_order,
        in_circles: z1.in_circles + z2.in_circles,
        out_circles: z1.out_circles + z2.out_circles,
        half_exponent: z1.half_exponent + z2.half_exponent,
        entries,
    })
}

/// The 1×1 matrix of the empty complex.
pub fn unit_matrix(group_order: usize) -> TqftMatrix {
    TqftMatrix {
        group_order,
        in_circles: 0,
        out_circles: 0,
        half_exponent: 0,
        entries: vec![BigUint::from(1u32)],
    }
}

/// Transpose, swapping in and out circles.
pub fn reflect_matrix(z: &TqftMatrix) -> TqftMatrix {
    let (rows, cols) = (z.rows(), z.cols());
    let entries = (0..rows * cols)
        .map(|idx| {
            let (r, c) = (idx / rows, idx % rows);
            z.get(c, r).clone()
        })
        .collect();
    TqftMatrix {
        group_order: z.group_order,
        in_circles: z.out_circles,
        out_circles: z.in_circles,
        half_exponent: z.half_exponent,
        entries,
    }
}

fn reverse_inverse(g: &Group, index: usize, len: usize) -> usize {
    let t = decode_tuple(index, len, g.order());
    let flipped: Vec<usize> = t.iter().rev().map(|&x| g.inv(x)).collect();
    encode_tuple(&flipped, g.order())
}

/// `z'[rev inv g][rev inv h] = z[h][g]` for in-tuple `g` and out-tuple `h`.
pub fn rotate_matrix(z: &TqftMatrix, g: &Group) -> Result<TqftMatrix, TqftError> {
    if g.order() != z.group_order {
        return Err(TqftError::GroupMismatch(z.group_order, g.order()));
    }
    let (n, m) = (z.in_circles, z.out_circles);
    let (rows, cols) = (z.cols(), z.rows());
    let mut entries = vec![BigUint::zero(); rows * cols];
    for h in 0..z.rows() {
        for gi in 0..z.cols() {
            let r = reverse_inverse(g, gi, n);
            let c = reverse_inverse(g, h, m);
            entries[r * cols + c] = z.get(h, gi).clone();
        }
    }
    Ok(TqftMatrix {
        group_order: z.group_order,
        in_circles: m,
        out_circles: n,
        half_exponent: z.half_exponent,
        entries,
    })
}

/// Same shape and every entry [`values_equal`].
pub fn matrices_equal(a: &TqftMatrix, b: &TqftMatrix) -> Result<bool, TqftError> {
    same_order(a, b)?;
    if (a.in_circles, a.out_circles) != (b.in_circles, b.out_circles) {
        return Ok(false);
    }
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .all(|(x, y)| scaled_equal(x, a.half_exponent, y, b.half_exponent, a.group_order)))
}

pub fn is_idempotent(z: &TqftMatrix) -> Result<bool, TqftError> {
    if z.in_circles != z.out_circles {
        return Err(TqftError::Shape(format!(
            "idempotency needs n == m, got {} and {}",
            z.in_circles, z.out_circles
        )));
    }
    if z.in_circles == 0 {
        let zz = TqftMatrix { half_exponent: 2 * z.half_exponent, ..z.clone() };
        let squared = TqftMatrix { entries: vec![z.entries[0].clone() * &z.entries[0]], ..zz };
        return matrices_equal(&squared, z);
    }
    matrices_equal(&compose(z, z)?, z)
}

/// Whether the normalized map sends the nonnegative vector `v` to itself.
pub fn fixes_vector(z: &TqftMatrix, v: &[BigUint]) -> Result<bool, TqftError> {
    if z.rows() != z.cols() || v.len() != z.cols() {
        return Err(TqftError::Shape(format!(
            "{}×{} matrix against a vector of length {}",
            z.rows(),
            z.cols(),
            v.len()
        )));
    }
    Ok((0..z.rows()).all(|r| {
        let zv = (0..z.cols()).fold(BigUint::zero(), |acc, c| acc + z.get(r, c) * &v[c]);
        scaled_equal(&zv, z.half_exponent, &v[r], 0, z.group_order)
    }))
}
