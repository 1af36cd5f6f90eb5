//! Hierarchical depth: exact formulas, bounds and filtration checks.
//!
//! A hierarchical filtration normalized by `Λ₀` is recorded at the level of
//! determinants: the normalization class plus the ordered list of nonzero
//! effective increments `D_i`, which must telescope to `det(E)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::bundle::SplitBundle;
use crate::error::{Error, Result};
use crate::picard::{self, DivisorClass, Lattice};
use crate::Rational;

/// A hierarchical depth, or the absence of any normalized filtration.
///
/// `NoFiltration` orders below every finite length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Depth {
    NoFiltration,
    Length(i64),
}

impl Depth {
    pub fn value(&self) -> Option<i64> {
        match self {
            Depth::NoFiltration => None,
            Depth::Length(h) => Some(*h),
        }
    }

    fn from_count(m: i64) -> Depth {
        if m < 0 {
            Depth::NoFiltration
        } else {
            Depth::Length(m)
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::NoFiltration => write!(f, "-inf"),
            Depth::Length(h) => write!(f, "{h}"),
        }
    }
}

impl Serialize for Depth {
    /// An integer, or `null` for no filtration.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Depth::NoFiltration => s.serialize_none(),
            Depth::Length(h) => s.serialize_i64(*h),
        }
    }
}

/// Determinant data of a filtration `E_0 ⊂ E_1 ⊂ ⋯ ⊂ E_h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierFiltration {
    lambda0: DivisorClass,
    increments: Vec<DivisorClass>,
    bundle_rank: usize,
}

impl HierFiltration {
    pub fn new(
        lambda0: DivisorClass,
        increments: Vec<DivisorClass>,
        bundle_rank: usize,
    ) -> Result<Self> {
        if bundle_rank == 0 {
            return Err(Error::InvalidArgument("bundle rank must be positive".into()));
        }
        let lat = lambda0.lattice();
        if let Some(bad) = increments.iter().find(|d| d.lattice() != lat) {
            return Err(Error::LatticeMismatch(lat.to_string(), bad.lattice().to_string()));
        }
        Ok(HierFiltration {
            lambda0,
            increments,
            bundle_rank,
        })
    }

    /// Builds the filtration whose increments are the unit generators of
    /// `det(target) - Λ₀`, generator by generator.
    pub fn from_decomposition(target: &SplitBundle, lambda0: &DivisorClass) -> Result<Self> {
        let delta = target.det().checked_sub(lambda0)?;
        if !picard::is_effective(&delta) {
            return Err(Error::NotEffective(delta.to_string()));
        }
        let lat = delta.lattice();
        let increments = delta
            .coeffs()
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| {
                std::iter::repeat_with(move || DivisorClass::generator(lat, i)).take(c as usize)
            })
            .collect();
        Self::new(lambda0.clone(), increments, target.rank())
    }

    pub fn lambda0(&self) -> &DivisorClass {
        &self.lambda0
    }

    pub fn increments(&self) -> &[DivisorClass] {
        &self.increments
    }

    pub fn bundle_rank(&self) -> usize {
        self.bundle_rank
    }

    pub fn lattice(&self) -> Lattice {
        self.lambda0.lattice()
    }

    /// The length `h`.
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// `det(E_i)` for `i = 0..=h`.
    pub fn determinants(&self) -> Vec<DivisorClass> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut acc = self.lambda0.clone();
        out.push(acc.clone());
        for d in &self.increments {
            acc = &acc + d;
            out.push(acc.clone());
        }
        out
    }
}

/// Checks effectivity and nonvanishing of every increment and the
/// telescoping identity `Λ₀ + Σ D_i = det(target)`.
pub fn verify_filtration(f: &HierFiltration, target: &SplitBundle) -> Result<bool> {
    if f.lattice() != target.lattice() {
        return Err(Error::LatticeMismatch(
            f.lattice().to_string(),
            target.lattice().to_string(),
        ));
    }
    if f.bundle_rank != target.rank() {
        return Ok(false);
    }
    if f
        .increments
        .iter()
        .any(|d| d.is_zero() || !picard::is_effective(d))
    {
        return Ok(false);
    }
    let top = f.determinants().pop().expect("at least the normalization");
    Ok(top == target.det())
}

/// Depth of `⊕ O_C(d_i)` on a curve: `M = Σ d_i - deg Λ₀` when `M >= 0`.
pub fn curve_split_depth(degrees: &[i64], lambda0_degree: i64) -> Depth {
    Depth::from_count(degrees.iter().sum::<i64>() - lambda0_degree)
}

/// Upper bound `d - d0` on the length of any filtration on a Picard-rank-one
/// variety. Negative values mean no filtration exists.
pub fn rank_one_bound(d: i64, d0: i64) -> i64 {
    d - d0
}

/// Lower and upper depth bounds for a split bundle on a surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceDepth {
    pub lower: Depth,
    pub upper: Depth,
}

/// Depth bounds for a split bundle on P² or P¹×P¹.
///
/// `upper` is the maximal unit decomposition of `Δ = det(E) - Λ₀`. `lower`
/// equals `upper` when every generator in `Δ` has pairwise disjoint
/// representatives, or when the bundle is a line bundle. Otherwise only the
/// explicit chain with one increment per summand is guaranteed, so
/// `lower = min(upper, rank)`.
pub fn surface_split_depth(b: &SplitBundle, lambda0: &DivisorClass) -> Result<SurfaceDepth> {
    let lat = b.lattice();
    if !matches!(lat, Lattice::P2 | Lattice::P1xP1) {
        return Err(Error::UnsupportedLattice(lat.to_string()));
    }
    let delta = b.det().checked_sub(lambda0)?;
    let Some(upper) = picard::decompose_max(&delta) else {
        return Ok(SurfaceDepth {
            lower: Depth::NoFiltration,
            upper: Depth::NoFiltration,
        });
    };
    let all_disjoint = delta
        .coeffs()
        .iter()
        .enumerate()
        .all(|(i, &c)| c == 0 || lat.has_disjoint_representatives(i));
    let lower = if all_disjoint || b.rank() == 1 {
        upper
    } else {
        upper.min(b.rank() as i64)
    };
    Ok(SurfaceDepth {
        lower: Depth::Length(lower),
        upper: Depth::Length(upper),
    })
}

/// Exact depth on a blowup from the depth on the minimal model:
/// `h_min + Σ (α_j - β_j)`.
pub fn mmp_exact_depth(h_min: i64, alpha: &[i64], beta: &[i64]) -> Result<i64> {
    if alpha.len() != beta.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} exceptional determinant coefficients vs {} normalization coefficients",
            alpha.len(),
            beta.len()
        )));
    }
    if h_min < 0 {
        return Err(Error::InvalidArgument(format!("h_min = {h_min} is negative")));
    }
    let mut total = h_min;
    for (j, (a, b)) in alpha.iter().zip(beta).enumerate() {
        if a < b {
            return Err(Error::NotEffective(format!(
                "({a} - {b})E{} in the exceptional difference",
                j + 1
            )));
        }
        total += a - b;
    }
    Ok(total)
}

/// Number of increments carrying a nonzero exceptional part.
pub fn blowup_delta(f: &HierFiltration) -> Result<usize> {
    f.increments
        .iter()
        .map(|d| picard::blowup_split(d).map(|(_, ex)| ex.iter().any(|&m| m != 0)))
        .try_fold(0, |n, hit| hit.map(|h| n + h as usize))
}

/// Slope jumps `(D_i · H) / r` of a filtration.
pub fn slope_profile(f: &HierFiltration, polarization: &DivisorClass) -> Result<Vec<Rational>> {
    let r = f.bundle_rank as i64;
    f.increments
        .iter()
        .map(|d| picard::intersect(d, polarization).map(|x| Rational::new(x, r)))
        .collect()
}

/// Slopes `μ_H(E_0), …, μ_H(E_h)` of the terms of a filtration.
pub fn slope_sequence(f: &HierFiltration, polarization: &DivisorClass) -> Result<Vec<Rational>> {
    let r = f.bundle_rank as i64;
    f.determinants()
        .iter()
        .map(|d| picard::intersect(d, polarization).map(|x| Rational::new(x, r)))
        .collect()
}

/// Monotonicity probe on a curve: depth of a same-rank subsheaf, given by
/// componentwise smaller degrees, never exceeds the depth of the bundle.
pub fn depth_monotonic_check(
    sub_degrees: &[i64],
    super_degrees: &[i64],
    lambda0_degree: i64,
) -> Result<bool> {
    if sub_degrees.len() != super_degrees.len() {
        return Err(Error::ShapeMismatch(format!(
            "subsheaf rank {} vs bundle rank {}",
            sub_degrees.len(),
            super_degrees.len()
        )));
    }
    if sub_degrees.iter().zip(super_degrees).any(|(a, b)| a > b) {
        return Err(Error::InvalidArgument(
            "subsheaf degrees must be componentwise at most the bundle degrees".into(),
        ));
    }
    Ok(curve_split_depth(sub_degrees, lambda0_degree)
        <= curve_split_depth(super_degrees, lambda0_degree))
}
