//! Evaluation codes from split bundles on P¹ and P² over F_p.
//!
//! Sections of `O(d)` are degree-`d` forms stored by their coefficients in
//! the monomial basis of [`monomials`]. A codeword evaluates one form per
//! summand at every point of an ordered evaluation set; the column of fiber
//! slot `i` at point `j` is `j * r + i`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FMatrix, Field};
use crate::Rational;

/// Default cap on the number of projective codeword classes enumerated.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Ambient projective space of an evaluation code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    P1,
    P2,
}

impl Space {
    /// Number of homogeneous coordinates.
    pub fn vars(self) -> usize {
        match self {
            Space::P1 => 2,
            Space::P2 => 3,
        }
    }

    /// Dimension of the space of degree-`d` forms.
    pub fn form_dim(self, d: u32) -> usize {
        let d = d as usize;
        match self {
            Space::P1 => d + 1,
            Space::P2 => (d + 1) * (d + 2) / 2,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::P1 => write!(f, "P1"),
            Space::P2 => write!(f, "P2"),
        }
    }
}

impl Serialize for Space {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "P1" | "p1" => Ok(Space::P1),
            "P2" | "p2" => Ok(Space::P2),
            _ => Err(Error::Parse {
                what: "space",
                input: s.to_string(),
            }),
        }
    }
}

/// An F_p-rational point, normalized so its first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<u32>,
}

impl ProjPoint {
    pub fn new(field: Field, space: Space, coords: &[i64]) -> Result<Self> {
        if coords.len() != space.vars() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for a point of {space}",
                coords.len()
            )));
        }
        let mut c: Vec<u32> = coords.iter().map(|&x| field.reduce(x)).collect();
        let Some(lead) = c.iter().copied().find(|&x| x != 0) else {
            return Err(Error::InvalidArgument("all coordinates are zero".into()));
        };
        let inv = field.inv(lead).expect("nonzero element");
        for x in &mut c {
            *x = field.mul(*x, inv);
        }
        Ok(ProjPoint { coords: c })
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn space(&self) -> Space {
        if self.coords.len() == 2 {
            Space::P1
        } else {
            Space::P2
        }
    }

    fn lead(&self) -> usize {
        self.coords.iter().position(|&x| x != 0).expect("normalized point")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses `[1:0:2]`.
pub fn parse_proj_point(field: Field, space: Space, s: &str) -> Result<ProjPoint> {
    let bad = || Error::Parse {
        what: "projective point",
        input: s.to_string(),
    };
    let body = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(bad)?;
    let coords = body
        .split(':')
        .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    ProjPoint::new(field, space, &coords)
}

/// All rational points in lexicographic order of normalized coordinates,
/// `[1:0:0], [1:0:1], …, [0:1:0], …, [0:0:1]` (descending lead position).
pub fn rational_points(field: Field, space: Space) -> Vec<ProjPoint> {
    let p = field.p();
    let n = space.vars();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let count = (p as u64).pow(free as u32);
        for idx in 0..count {
            let mut coords = vec![0u32; n];
            coords[lead] = 1;
            let mut rest = idx;
            for j in (lead + 1..n).rev() {
                coords[j] = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            out.push(ProjPoint { coords });
        }
    }
    out
}

/// Exponent vectors of degree-`d` monomials, lexicographically descending
/// (`x0^d` first).
pub fn monomials(space: Space, d: u32) -> Vec<Vec<u32>> {
    match space {
        Space::P1 => (0..=d).rev().map(|a| vec![a, d - a]).collect(),
        Space::P2 => {
            let mut out = Vec::with_capacity(space.form_dim(d));
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    out.push(vec![a, b, d - a - b]);
                }
            }
            out
        }
    }
}

/// Vanishing to order at least `order` at `point`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct VanishingCondition {
    pub point: ProjPoint,
    pub order: u32,
}

impl VanishingCondition {
    pub fn new(point: ProjPoint, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("vanishing order must be positive".into()));
        }
        Ok(VanishingCondition { point, order })
    }
}

/// Forms of degree `d` satisfying a list of vanishing conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionBasis {
    field: Field,
    space: Space,
    degree: u32,
    conditions: Vec<VanishingCondition>,
    basis: FMatrix,
}

impl SectionBasis {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn conditions(&self) -> &[VanishingCondition] {
        &self.conditions
    }

    /// Rows are coefficient vectors over [`monomials`].
    pub fn basis(&self) -> &FMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn unconstrained_dim(&self) -> usize {
        self.space.form_dim(self.degree)
    }

    /// Value of basis element `row` at the normalized representative.
    pub fn evaluate(&self, row: usize, point: &ProjPoint) -> u32 {
        eval_form(self.field, self.space, self.degree, self.basis.row(row), point)
    }
}

/// Evaluates a form, given by monomial coefficients, at a normalized point.
pub fn eval_form(field: Field, space: Space, d: u32, coeffs: &[u32], point: &ProjPoint) -> u32 {
    monomials(space, d)
        .iter()
        .zip(coeffs)
        .filter(|(_, &c)| c != 0)
        .fold(0, |acc, (m, &c)| {
            let v = m
                .iter()
                .zip(point.coords())
                .fold(1, |v, (&e, &x)| field.mul(v, field.pow(x, e as u64)));
            field.add(acc, field.mul(c, v))
        })
}

/// Binomial coefficients mod p, `table[n][k]` for `n <= max`.
fn binomials(field: Field, max: u32) -> Vec<Vec<u32>> {
    let mut t: Vec<Vec<u32>> = Vec::with_capacity(max as usize + 1);
    for n in 0..=max as usize {
        let mut row = vec![1 % field.p(); n + 1];
        for k in 1..n {
            row[k] = field.add(t[n - 1][k - 1], t[n - 1][k]);
        }
        t.push(row);
    }
    t
}

/// One row per Hasse derivative functional of order `< o` at each point,
/// taken in the affine chart where the leading coordinate is 1.
pub fn condition_matrix(
    field: Field,
    space: Space,
    d: u32,
    conditions: &[VanishingCondition],
) -> FMatrix {
    let monos = monomials(space, d);
    let binom = binomials(field, d);
    let mut data = Vec::new();
    let mut rows = 0;
    for cond in conditions {
        let lead = cond.point.lead();
        let free: Vec<usize> = (0..space.vars()).filter(|&j| j != lead).collect();
        for beta in multi_indices(free.len(), cond.order.saturating_sub(1)) {
            for m in &monos {
                let mut v = 1 % field.p();
                for (&j, &b) in free.iter().zip(&beta) {
                    let e = m[j];
                    if b > e {
                        v = 0;
                        break;
                    }
                    let c = binom[e as usize][b as usize];
                    v = field.mul(v, field.mul(c, field.pow(cond.point.coords[j], (e - b) as u64)));
                }
                data.push(v);
            }
            rows += 1;
        }
    }
    FMatrix::new(field, rows, monos.len(), data).expect("consistent shape")
}

/// All multi-indices of length `n` with total degree at most `max`.
fn multi_indices(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                let used: u32 = prefix.iter().sum();
                (0..=max - used).map(move |b| {
                    let mut v = prefix.clone();
                    v.push(b);
                    v
                })
            })
            .collect();
    }
    out
}

/// Basis of degree-`d` forms vanishing to the given orders.
pub fn vanishing_basis(
    d: u32,
    conditions: &[VanishingCondition],
    space: Space,
    field: Field,
) -> Result<SectionBasis> {
    let mut seen = HashSet::new();
    for c in conditions {
        if c.point.space() != space {
            return Err(Error::SpaceMismatch(c.point.space().to_string(), space.to_string()));
        }
        if !seen.insert(&c.point) {
            return Err(Error::DuplicatePoint(c.point.to_string()));
        }
        if c.point.coords.iter().any(|&x| x >= field.p()) {
            return Err(Error::InvalidArgument(format!("{} is not a point over {field}", c.point)));
        }
    }
    let cm = condition_matrix(field, space, d, conditions);
    let basis = cm.kernel_basis();
    Ok(SectionBasis {
        field,
        space,
        degree: d,
        conditions: conditions.to_vec(),
        basis,
    })
}

/// A point of the evaluation set.
///
/// An exceptional point lies on the exceptional curve over `center` in the
/// blowup; it is evaluated downstairs at `center`, so sections vanishing at
/// `center` give a zero block there.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EvalPoint {
    Regular(ProjPoint),
    Exceptional { center: ProjPoint, direction: ProjPoint },
}

impl EvalPoint {
    fn evaluation_point(&self) -> &ProjPoint {
        match self {
            EvalPoint::Regular(p) => p,
            EvalPoint::Exceptional { center, .. } => center,
        }
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self, EvalPoint::Exceptional { .. })
    }
}

impl fmt::Display for EvalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalPoint::Regular(p) => write!(f, "{p}"),
            EvalPoint::Exceptional { center, direction } => write!(f, "{center}@{direction}"),
        }
    }
}

/// Parses `[1:2:3]` or an exceptional point `[1:0:0]@[1:2]`.
pub fn parse_eval_point(field: Field, space: Space, s: &str) -> Result<EvalPoint> {
    match s.split_once('@') {
        None => Ok(EvalPoint::Regular(parse_proj_point(field, space, s)?)),
        Some((c, d)) => Ok(EvalPoint::Exceptional {
            center: parse_proj_point(field, space, c)?,
            direction: parse_proj_point(field, Space::P1, d)?,
        }),
    }
}

/// A linear code `ev_D(⊕ H⁰)` with its block structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    rank: usize,
    labels: Vec<String>,
    generator: FMatrix,
    k: usize,
    message_dim: usize,
    d_min: Option<u64>,
}

impl LinearCode {
    /// A code from an explicit generator whose columns come in blocks of `rank`.
    pub fn from_generator(rank: usize, generator: FMatrix) -> Result<Self> {
        if rank == 0 || generator.cols() % rank != 0 {
            return Err(Error::ShapeMismatch(format!(
                "{} columns do not split into blocks of {rank}",
                generator.cols()
            )));
        }
        let n_points = generator.cols() / rank;
        Ok(LinearCode {
            field: generator.field(),
            rank,
            labels: (0..n_points).map(|j| format!("#{j}")).collect(),
            k: generator.rank(),
            message_dim: generator.rows(),
            generator,
            d_min: None,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Bundle rank `r`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of evaluation points `N`.
    pub fn n_points(&self) -> usize {
        self.labels.len()
    }

    /// Block length `n = r N`.
    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator(&self) -> &FMatrix {
        &self.generator
    }

    /// Dimension `k` (rank of the generator).
    pub fn dimension(&self) -> usize {
        self.k
    }

    /// Dimension of the message space (sum of the section dimensions).
    pub fn message_dim(&self) -> usize {
        self.message_dim
    }

    pub fn d_min(&self) -> Option<u64> {
        self.d_min
    }

    /// `(point index, fiber index)` of a column.
    pub fn block_of(&self, col: usize) -> (usize, usize) {
        (col / self.rank, col % self.rank)
    }

    /// Codeword of a message vector.
    pub fn encode(&self, message: &[u32]) -> Result<Vec<u32>> {
        self.generator.left_mul_vec(message)
    }

    /// Generator as rows of integers, one row per line.
    pub fn generator_text(&self) -> String {
        self.generator.to_string()
    }

    /// Computes and caches the minimum distance.
    pub fn compute_min_distance(&mut self, budget: u64) -> Result<u64> {
        if let Some(d) = self.d_min {
            return Ok(d);
        }
        let d = min_distance(self, budget)?;
        self.d_min = Some(d);
        Ok(d)
    }

    /// Appends `count` evaluation points whose blocks are identically zero.
    pub fn with_zero_blocks(&self, count: usize) -> LinearCode {
        let g = &self.generator;
        let extra = count * self.rank;
        let cols = g.cols() + extra;
        let mut data = Vec::with_capacity(g.rows() * cols);
        for row in g.iter_rows() {
            data.extend_from_slice(row);
            data.extend(std::iter::repeat_n(0, extra));
        }
        let mut labels = self.labels.clone();
        labels.extend((0..count).map(|j| format!("#zero{j}")));
        LinearCode {
            generator: FMatrix::new(self.field, g.rows(), cols, data).expect("consistent shape"),
            labels,
            ..self.clone()
        }
    }
}

/// Builds the generator matrix of `ev_D` on `⊕ H⁰(O(d_i) ⊗ I)`.
pub fn build_code(bases: &[SectionBasis], points: &[EvalPoint], field: Field) -> Result<LinearCode> {
    let Some(first) = bases.first() else {
        return Err(Error::InvalidArgument("at least one summand is required".into()));
    };
    let space = first.space;
    for b in bases {
        if b.field != field {
            return Err(Error::FieldMismatch(b.field.p(), field.p()));
        }
        if b.space != space {
            return Err(Error::SpaceMismatch(b.space.to_string(), space.to_string()));
        }
    }
    if points.is_empty() {
        return Err(Error::InvalidArgument("the evaluation set is empty".into()));
    }
    let mut seen = HashSet::new();
    for pt in points {
        let q = pt.evaluation_point();
        if q.space() != space {
            return Err(Error::SpaceMismatch(q.space().to_string(), space.to_string()));
        }
        if q.coords.iter().any(|&x| x >= field.p()) {
            return Err(Error::InvalidArgument(format!("{q} is not a point over {field}")));
        }
        if !seen.insert(pt) {
            return Err(Error::DuplicatePoint(pt.to_string()));
        }
    }
    let message_dim: usize = bases.iter().map(SectionBasis::dim).sum();
    if message_dim == 0 {
        return Err(Error::EmptyMessageSpace);
    }

    let r = bases.len();
    let n = r * points.len();
    let mut data = vec![0u32; message_dim * n];
    let mut row = 0;
    for (i, b) in bases.iter().enumerate() {
        for e in 0..b.dim() {
            for (j, pt) in points.iter().enumerate() {
                data[row * n + j * r + i] = b.evaluate(e, pt.evaluation_point());
            }
            row += 1;
        }
    }
    let generator = FMatrix::new(field, message_dim, n, data)?;
    Ok(LinearCode {
        field,
        rank: r,
        labels: points.iter().map(ToString::to_string).collect(),
        k: generator.rank(),
        message_dim,
        generator,
        d_min: None,
    })
}

/// Number of projective codeword classes `(p^k - 1)/(p - 1)`.
pub fn class_count(p: u32, k: usize) -> u128 {
    let p = p as u128;
    let mut total: u128 = 0;
    let mut pw: u128 = 1;
    for _ in 0..k {
        total = total.saturating_add(pw);
        pw = pw.saturating_mul(p);
    }
    total
}

/// Exact minimum Hamming weight over all nonzero codewords.
///
/// Enumerates one representative per projective class: combinations of an
/// echelon basis whose first nonzero coefficient is 1. Work is split by the
/// position of that coefficient and, when present, the next coefficient.
pub fn min_distance(c: &LinearCode, budget: u64) -> Result<u64> {
    let field = c.field;
    let p = field.p();
    let basis = c.generator.row_space();
    let k = basis.rows();
    if k == 0 {
        return Err(Error::EmptyCode);
    }
    let classes = class_count(p, k);
    if classes > budget as u128 {
        return Err(Error::Infeasible { classes, budget });
    }
    let n = basis.cols();
    let rows: Vec<&[u32]> = basis.iter_rows().collect();

    let mut tasks: Vec<(usize, u32)> = Vec::new();
    for lead in 0..k {
        if lead + 1 < k {
            tasks.extend((0..p).map(|c| (lead, c)));
        } else {
            tasks.push((lead, 0));
        }
    }

    let add_scaled = |acc: &mut [u32], row: &[u32], s: u32| {
        for (a, &x) in acc.iter_mut().zip(row) {
            *a = field.add(*a, field.mul(s, x));
        }
    };

    let best = tasks
        .par_iter()
        .map(|&(lead, second)| {
            let mut cur = rows[lead].to_vec();
            let start = if lead + 1 < k {
                add_scaled(&mut cur, rows[lead + 1], second);
                lead + 2
            } else {
                k
            };
            let mut digits = vec![0u32; k.saturating_sub(start)];
            let mut best = n as u64;
            loop {
                let w = cur.iter().filter(|&&x| x != 0).count() as u64;
                best = best.min(w);
                // odometer over the remaining coefficients, one row addition per step
                let mut j = digits.len();
                loop {
                    if j == 0 {
                        return best;
                    }
                    j -= 1;
                    for (a, &x) in cur.iter_mut().zip(rows[start + j]) {
                        let s = *a + x;
                        *a = if s >= p { s - p } else { s };
                    }
                    digits[j] += 1;
                    if digits[j] < p {
                        break;
                    }
                    digits[j] = 0;
                }
            }
        })
        .min()
        .expect("at least one task");
    Ok(best)
}

/// Outcome of removing identically zero evaluation blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroBlockReport {
    pub n_before: usize,
    pub n_after: usize,
    pub zero_blocks: Vec<usize>,
    pub k: usize,
    pub d_min: Option<u64>,
    #[serde(serialize_with = "crate::serialize_rational_opt")]
    pub delta_before: Option<Rational>,
    #[serde(serialize_with = "crate::serialize_rational_opt")]
    pub delta_after: Option<Rational>,
    pub empty_code: bool,
}

/// Deletes every point block that is zero in all generator rows.
pub fn zero_block_contract(c: &LinearCode) -> (LinearCode, ZeroBlockReport) {
    let g = &c.generator;
    let r = c.rank;
    let zero_blocks: Vec<usize> = (0..c.n_points())
        .filter(|&j| (0..r).all(|i| g.column_is_zero(j * r + i)))
        .collect();
    let keep_points: Vec<usize> = (0..c.n_points())
        .filter(|j| zero_blocks.binary_search(j).is_err())
        .collect();
    let keep_cols: Vec<usize> = keep_points
        .iter()
        .flat_map(|&j| (0..r).map(move |i| j * r + i))
        .collect();
    let contracted = LinearCode {
        generator: g.select_columns(&keep_cols),
        labels: keep_points.iter().map(|&j| c.labels[j].clone()).collect(),
        // deleting coordinates that are zero in every codeword keeps all weights
        ..c.clone()
    };
    let delta = |code: &LinearCode| match code.d_min {
        Some(d) if code.n_points() > 0 => {
            Some(Rational::new(d as i64, (code.rank * code.n_points()) as i64))
        }
        _ => None,
    };
    let report = ZeroBlockReport {
        n_before: c.n_points(),
        n_after: contracted.n_points(),
        zero_blocks,
        k: c.k,
        d_min: c.d_min,
        delta_before: delta(c),
        delta_after: delta(&contracted),
        empty_code: contracted.n_points() == 0 || c.k == 0,
    };
    (contracted, report)
}

/// `δ = d_min / (r N)`.
pub fn normalized_distance(c: &LinearCode) -> Result<Rational> {
    let d = c.d_min.ok_or(Error::DistanceUnknown)?;
    if c.n_points() == 0 {
        return Err(Error::EmptyCode);
    }
    Ok(Rational::new(d as i64, (c.rank * c.n_points()) as i64))
}

/// Normalized distances before and after contracting the zero blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub n_before: usize,
    pub n_after: usize,
    pub n_zero: usize,
    pub k: usize,
    pub d_min: u64,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub delta_before: Rational,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub delta_after: Rational,
    /// `δ_after / δ_before`.
    #[serde(serialize_with = "crate::serialize_rational")]
    pub ratio: Rational,
    /// `N / (N - N_zero)`.
    #[serde(serialize_with = "crate::serialize_rational")]
    pub expected_ratio: Rational,
    pub ratio_matches: bool,
    pub strict_improvement: bool,
}

/// Contracts the zero blocks, computes `d_min` on the contracted code and
/// compares the normalized distances.
pub fn mmp_compare(c: &LinearCode, budget: u64) -> Result<ComparisonReport> {
    let (mut contracted, report) = zero_block_contract(c);
    if report.empty_code {
        return Err(Error::EmptyCode);
    }
    let d = contracted.compute_min_distance(budget)?;
    let mut original = c.clone();
    original.d_min = Some(d);
    let delta_before = normalized_distance(&original)?;
    let delta_after = normalized_distance(&contracted)?;
    let ratio = delta_after / delta_before;
    let expected_ratio = Rational::new(report.n_before as i64, report.n_after as i64);
    Ok(ComparisonReport {
        n_before: report.n_before,
        n_after: report.n_after,
        n_zero: report.zero_blocks.len(),
        k: report.k,
        d_min: d,
        delta_before,
        delta_after,
        ratio,
        expected_ratio,
        ratio_matches: ratio == expected_ratio,
        strict_improvement: !report.zero_blocks.is_empty(),
    })
}
