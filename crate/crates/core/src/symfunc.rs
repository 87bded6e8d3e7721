//! Integer partitions and symmetric functions with exact rational
//! coefficients in the monomial (`m`) and elementary (`e`) bases.
//!
//! Conversion between the bases goes through a per-degree transition table:
//! the rows of the `e -> m` matrix are built with the monomial product rule
//! (`e_k = m_{1^k}`), and the `m -> e` matrix is its exact inverse. Tables are
//! built once per degree and shared between threads.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// A weakly decreasing sequence of positive integers.
///
/// The derived ordering is lexicographic on the parts, so `[4,2] < [5,1] < [6]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from parts in any order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub(crate) fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(!parts.contains(&0));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(k)`, or the empty partition when `k = 0`.
    pub fn row(k: u32) -> Self {
        if k == 0 {
            Self::empty()
        } else {
            Partition(vec![k])
        }
    }

    /// The one-column partition `(1^k)`.
    pub fn column(k: usize) -> Self {
        Partition(vec![1; k])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Multiplicity of each distinct part, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|i| self.0.iter().filter(|&&p| p >= i).count() as u32)
            .collect();
        Partition(parts)
    }

    /// Union of the parts of two partitions.
    pub fn join(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// Every partition of `n` exactly once, in reverse lexicographic order:
/// `[4], [3,1], [2,2], [2,1,1], [1,1,1,1]`.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn go(remaining: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(current.clone()));
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            current.push(part);
            go(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    M,
    E,
}

impl Basis {
    fn symbol(self) -> char {
        match self {
            Basis::M => 'm',
            Basis::E => 'e',
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" | "M" => Ok(Basis::M),
            "e" | "E" => Ok(Basis::E),
            _ => Err(Error::Range(format!(
                "unknown basis `{s}` (expected m or e)"
            ))),
        }
    }
}

/// A finite linear combination of basis elements `m_λ` or `e_λ`.
///
/// Zero coefficients are never stored, so two values in the same basis are
/// equal exactly when their term maps are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymFunc {
    basis: Basis,
    terms: BTreeMap<Partition, Rational>,
}

impl SymFunc {
    pub fn zero(basis: Basis) -> Self {
        SymFunc {
            basis,
            terms: BTreeMap::new(),
        }
    }

    /// The constant `1`, i.e. the empty-partition term.
    pub fn one(basis: Basis) -> Self {
        Self::term(basis, Partition::empty(), Rational::one())
    }

    pub fn term(basis: Basis, partition: Partition, coeff: Rational) -> Self {
        let mut f = Self::zero(basis);
        f.add_term(partition, coeff);
        f
    }

    pub fn from_terms<I>(basis: Basis, terms: I) -> Self
    where
        I: IntoIterator<Item = (Partition, Rational)>,
    {
        let mut f = Self::zero(basis);
        for (p, c) in terms {
            f.add_term(p, c);
        }
        f
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, partition: &Partition) -> Rational {
        self.terms
            .get(partition)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Adds `coeff * b_partition` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, partition: Partition, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(partition) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Coefficient-wise sum. `other` is converted to this basis first.
    pub fn add(&self, other: &SymFunc) -> SymFunc {
        let other = other.to_basis(self.basis);
        let mut out = self.clone();
        for (p, c) in other.terms {
            out.add_term(p, c);
        }
        out
    }

    pub fn sub(&self, other: &SymFunc) -> SymFunc {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> SymFunc {
        if c.is_zero() {
            return SymFunc::zero(self.basis);
        }
        SymFunc {
            basis: self.basis,
            terms: self.terms.iter().map(|(p, v)| (p.clone(), v * c)).collect(),
        }
    }

    /// Product of two symmetric functions, returned in the `m` basis.
    pub fn mul(&self, other: &SymFunc) -> SymFunc {
        let a = self.to_m();
        let b = other.to_m();
        let mut out = SymFunc::zero(Basis::M);
        for (pa, ca) in &a.terms {
            for (pb, cb) in &b.terms {
                let coeff = ca * cb;
                for (nu, count) in monomial_product(pa, pb) {
                    out.add_term(nu, &coeff * Rational::from_integer(BigInt::from(count)));
                }
            }
        }
        out
    }

    pub fn to_basis(&self, basis: Basis) -> SymFunc {
        match basis {
            Basis::M => self.to_m(),
            Basis::E => self.to_e(),
        }
    }

    pub fn to_m(&self) -> SymFunc {
        match self.basis {
            Basis::M => self.clone(),
            Basis::E => self.transform(Basis::M, |t, i| &t.e_in_m[i]),
        }
    }

    pub fn to_e(&self) -> SymFunc {
        match self.basis {
            Basis::E => self.clone(),
            Basis::M => self.transform(Basis::E, |t, i| &t.m_in_e[i]),
        }
    }

    fn transform<F>(&self, target: Basis, row: F) -> SymFunc
    where
        F: Fn(&DegreeTable, usize) -> &Vec<Rational>,
    {
        let mut out = SymFunc::zero(target);
        for (p, c) in &self.terms {
            let table = degree_table(p.weight());
            let coeffs = row(&table, table.index[p]);
            for (q, v) in table.partitions.iter().zip(coeffs) {
                if !v.is_zero() {
                    out.add_term(q.clone(), c * v);
                }
            }
        }
        out
    }

    /// True when every `e`-coefficient is positive (vacuously for zero).
    pub fn is_e_positive(&self) -> bool {
        self.to_e().terms.values().all(|c| c.is_positive())
    }

    /// Equality across bases, decided in the `m` basis.
    pub fn same_as(&self, other: &SymFunc) -> bool {
        if self.basis == other.basis {
            self == other
        } else {
            self.to_m() == other.to_m()
        }
    }

    /// Distinct homogeneous degrees present, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(Partition::weight).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(p, c)| serde_json::json!({ "partition": p, "coeff": c.to_string() }))
            .collect();
        serde_json::json!({ "basis": self.basis, "terms": terms, "text": self.to_string() })
    }
}

/// Converts an `e`-basis function to the `m` basis.
pub fn e_to_m(a: &SymFunc) -> Result<SymFunc> {
    if a.basis != Basis::E {
        return Err(Error::BasisMismatch { expected: Basis::E });
    }
    Ok(a.to_m())
}

/// Converts an `m`-basis function to the `e` basis.
pub fn m_to_e(a: &SymFunc) -> Result<SymFunc> {
    if a.basis != Basis::M {
        return Err(Error::BasisMismatch { expected: Basis::M });
    }
    Ok(a.to_e())
}

impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let b = self.basis.symbol();
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{magnitude}*{b}{p}")?,
                (0, true) => write!(f, "-{magnitude}*{b}{p}")?,
                (_, false) => write!(f, " + {magnitude}*{b}{p}")?,
                (_, true) => write!(f, " - {magnitude}*{b}{p}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for SymFunc {
    type Err = Error;

    /// Parses the text form produced by `Display`, e.g. `20*e[4,2] - 1/2*e[6]`.
    fn from_str(text: &str) -> Result<Self> {
        let syntax = |offset: usize, message: &str| Error::Syntax {
            offset,
            message: message.to_string(),
        };
        let trimmed = text.trim();
        if trimmed == "0" {
            return Ok(SymFunc::zero(Basis::M));
        }
        let bytes = text.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let mut basis = None;
        let mut out: Vec<(Partition, Rational)> = Vec::new();
        let mut first = true;
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                if first {
                    return Err(syntax(pos, "empty input"));
                }
                break;
            }
            let mut negative = false;
            if !first {
                match bytes[pos] {
                    b'+' => {}
                    b'-' => negative = true,
                    _ => return Err(syntax(pos, "expected `+` or `-`")),
                }
                pos += 1;
                skip_ws(&mut pos);
            } else if bytes[pos] == b'-' {
                negative = true;
                pos += 1;
            }
            first = false;
            let start = pos;
            while pos < bytes.len() && bytes[pos] != b'*' {
                pos += 1;
            }
            if pos >= bytes.len() {
                return Err(syntax(start, "expected `*` after coefficient"));
            }
            let mut coeff: Rational = text[start..pos]
                .trim()
                .parse()
                .map_err(|_| syntax(start, "invalid rational coefficient"))?;
            if negative {
                coeff = -coeff;
            }
            pos += 1;
            let b = match bytes.get(pos) {
                Some(b'm') => Basis::M,
                Some(b'e') => Basis::E,
                _ => return Err(syntax(pos, "expected basis `m` or `e`")),
            };
            if basis.is_some_and(|x| x != b) {
                return Err(syntax(pos, "mixed bases in one expression"));
            }
            basis = Some(b);
            pos += 1;
            if bytes.get(pos) != Some(&b'[') {
                return Err(syntax(pos, "expected `[`"));
            }
            let open = pos;
            while pos < bytes.len() && bytes[pos] != b']' {
                pos += 1;
            }
            if pos >= bytes.len() {
                return Err(syntax(open, "unclosed `[`"));
            }
            let inner = text[open + 1..pos].trim();
            let parts = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|s| s.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| syntax(open + 1, "invalid partition part"))?
            };
            let partition = Partition::new(parts).map_err(|_| syntax(open + 1, "zero part"))?;
            pos += 1;
            out.push((partition, coeff));
        }
        Ok(SymFunc::from_terms(basis.unwrap_or(Basis::M), out))
    }
}

impl std::ops::Add for &SymFunc {
    type Output = SymFunc;
    fn add(self, rhs: &SymFunc) -> SymFunc {
        SymFunc::add(self, rhs)
    }
}

impl std::ops::Sub for &SymFunc {
    type Output = SymFunc;
    fn sub(self, rhs: &SymFunc) -> SymFunc {
        SymFunc::sub(self, rhs)
    }
}

impl std::ops::Mul for &SymFunc {
    type Output = SymFunc;
    fn mul(self, rhs: &SymFunc) -> SymFunc {
        SymFunc::mul(self, rhs)
    }
}

/// Expansion of `m_a * m_b` in the monomial basis.
///
/// Works in `len(a) + len(b)` variables, which is enough to see every `m_ν`
/// in the product. The coefficient of `m_ν` is the number of pairs of
/// distinct rearrangements `(α, β)` of the zero-padded parts with
/// `α + β = ν`; the search only follows prefixes that keep the sum weakly
/// decreasing.
pub fn monomial_product(a: &Partition, b: &Partition) -> Vec<(Partition, u64)> {
    fn multiset(p: &Partition, slots: usize) -> Vec<(u32, usize)> {
        let mut m = p.multiplicities();
        let zeros = slots - p.len();
        if zeros > 0 {
            m.push((0, zeros));
        }
        m
    }

    fn go(
        left: &mut [(u32, usize)],
        right: &mut [(u32, usize)],
        prev: u32,
        remaining: usize,
        current: &mut Vec<u32>,
        out: &mut BTreeMap<Vec<u32>, u64>,
    ) {
        if remaining == 0 {
            let key: Vec<u32> = current.iter().copied().filter(|&x| x > 0).collect();
            *out.entry(key).or_insert(0) += 1;
            return;
        }
        for i in 0..left.len() {
            if left[i].1 == 0 {
                continue;
            }
            for j in 0..right.len() {
                if right[j].1 == 0 {
                    continue;
                }
                let sum = left[i].0 + right[j].0;
                if sum > prev {
                    continue;
                }
                left[i].1 -= 1;
                right[j].1 -= 1;
                current.push(sum);
                go(left, right, sum, remaining - 1, current, out);
                current.pop();
                left[i].1 += 1;
                right[j].1 += 1;
            }
        }
    }

    let slots = a.len() + b.len();
    let mut left = multiset(a, slots);
    let mut right = multiset(b, slots);
    let mut out = BTreeMap::new();
    go(
        &mut left,
        &mut right,
        u32::MAX,
        slots,
        &mut Vec::with_capacity(slots),
        &mut out,
    );
    out.into_iter()
        .map(|(k, v)| (Partition::from_sorted(k), v))
        .collect()
}

struct DegreeTable {
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// Row `i`: coefficients of `e_{partitions[i]}` over `m_{partitions[j]}`.
    e_in_m: Vec<Vec<Rational>>,
    /// Row `i`: coefficients of `m_{partitions[i]}` over `e_{partitions[j]}`.
    m_in_e: Vec<Vec<Rational>>,
}

type TableCells = Mutex<HashMap<u32, Arc<OnceLock<Arc<DegreeTable>>>>>;

fn degree_table(n: u32) -> Arc<DegreeTable> {
    static TABLES: OnceLock<TableCells> = OnceLock::new();
    let cell = {
        let mut map = TABLES
            .get_or_init(Default::default)
            .lock()
            .expect("transition table lock poisoned");
        map.entry(n).or_default().clone()
    };
    cell.get_or_init(|| Arc::new(build_degree_table(n))).clone()
}

fn e_lambda_in_m(lambda: &Partition) -> SymFunc {
    lambda
        .parts()
        .iter()
        .fold(SymFunc::one(Basis::M), |acc, &k| {
            acc.mul(&SymFunc::term(
                Basis::M,
                Partition::column(k as usize),
                Rational::one(),
            ))
        })
}

fn build_degree_table(n: u32) -> DegreeTable {
    let partitions = partitions_of(n);
    let index: HashMap<Partition, usize> = partitions
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let size = partitions.len();
    let mut e_in_m = vec![vec![Rational::zero(); size]; size];
    for (i, lambda) in partitions.iter().enumerate() {
        for (mu, c) in e_lambda_in_m(lambda).terms {
            e_in_m[i][index[&mu]] = c;
        }
    }
    let m_in_e = invert(&e_in_m).expect("e-to-m transition matrix is invertible");
    DegreeTable {
        partitions,
        index,
        e_in_m,
        m_in_e,
    }
}

/// Gauss-Jordan inverse over the rationals; `None` if singular.
fn invert(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut left: Vec<Vec<Rational>> = a.to_vec();
    let mut right: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !left[r][col].is_zero())?;
        left.swap(col, pivot);
        right.swap(col, pivot);
        let inv = left[col][col].recip();
        for v in left[col].iter_mut().chain(right[col].iter_mut()) {
            *v *= &inv;
        }
        for row in 0..n {
            if row == col || left[row][col].is_zero() {
                continue;
            }
            let factor = left[row][col].clone();
            for j in 0..n {
                let l = &left[col][j] * &factor;
                left[row][j] -= l;
                let r = &right[col][j] * &factor;
                right[row][j] -= r;
            }
        }
    }
    Some(right)
}
