//! Elementary transforms of split bundles `⊕ O(d_i)` on P¹ over F_p.
//!
//! A subsheaf is modeled by its space of global sections after a twist by
//! `O(t)`. A section of `O(d + t)` is a polynomial of degree at most `d + t`
//! in the affine coordinate, stored as its `d + t + 1` coefficients; summands
//! with `d + t < 0` contribute zero-width blocks. Evaluation at `∞` reads the
//! top coefficient of each block.
//!
//! An elementary transform at a point `q` with covector `c` replaces the
//! subspace by the kernel of `s ↦ c · s(q)`. Sections of the kernel sheaf are
//! exactly this kernel, so the model is exact as long as the functional does
//! not vanish on the current subspace; choosing the twist large enough
//! relative to the number of transforms guarantees that.

use std::fmt;

use serde::Serialize;

use crate::depth::HierFiltration;
use crate::error::{Error, Result};
use crate::gf::{FMatrix, Field};
use crate::picard::DivisorClass;

/// An F_p-rational point of P¹: an affine coordinate or `∞ = [1:0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RationalPoint {
    Affine(u32),
    Infinity,
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Affine(a) => write!(f, "{a}"),
            RationalPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All rational points of P¹(F_p) in the order `0, 1, …, p-1, ∞`.
pub fn rational_points(field: Field) -> Vec<RationalPoint> {
    field
        .elements()
        .map(RationalPoint::Affine)
        .chain(std::iter::once(RationalPoint::Infinity))
        .collect()
}

/// Parses `inf`/`∞` or an integer coordinate (reduced mod p).
pub fn parse_point(field: Field, s: &str) -> Result<RationalPoint> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(RationalPoint::Infinity);
    }
    t.parse::<i64>()
        .map(|v| RationalPoint::Affine(field.reduce(v)))
        .map_err(|_| Error::Parse {
            what: "point of P1",
            input: s.to_string(),
        })
}

/// A surjection from the fiber at `point` onto the skyscraper `k(point)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointFunctional {
    point: RationalPoint,
    covector: Vec<u32>,
}

impl PointFunctional {
    pub fn new(field: Field, point: RationalPoint, covector: &[i64]) -> Result<Self> {
        let covector: Vec<u32> = covector.iter().map(|&c| field.reduce(c)).collect();
        if covector.iter().all(|&c| c == 0) {
            return Err(Error::ZeroCovector);
        }
        Ok(PointFunctional { point, covector })
    }

    pub fn point(&self) -> RationalPoint {
        self.point
    }

    pub fn covector(&self) -> &[u32] {
        &self.covector
    }
}

/// Global sections of a subsheaf of `⊕ O(d_i)` (after twisting by `O(t)`),
/// with a ledger of the determinant degree of the untwisted subsheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsheafModel {
    field: Field,
    degrees: Vec<i64>,
    twist: i64,
    truncation: i64,
    basis: FMatrix,
    det_degree: i64,
    transforms: usize,
}

impl SubsheafModel {
    /// All sections of `⊕ O(d_i)`.
    pub fn full_sections(degrees: &[i64], truncation: i64, field: Field) -> Result<Self> {
        Self::full_sections_twisted(degrees, 0, truncation, field)
    }

    /// All sections of `⊕ O(d_i + twist)`, standing in for `⊕ O(d_i)`.
    pub fn full_sections_twisted(
        degrees: &[i64],
        twist: i64,
        truncation: i64,
        field: Field,
    ) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidArgument("a bundle needs at least one summand".into()));
        }
        if twist < 0 {
            return Err(Error::InvalidArgument(format!("negative twist {twist}")));
        }
        let needed = degrees.iter().map(|d| d + twist).max().unwrap_or(0).max(0);
        if truncation < needed {
            return Err(Error::BadTruncation { truncation, needed });
        }
        let n = block_widths(degrees, twist).iter().sum();
        Ok(SubsheafModel {
            field,
            degrees: degrees.to_vec(),
            twist,
            truncation,
            basis: FMatrix::identity(field, n),
            det_degree: degrees.iter().sum(),
            transforms: 0,
        })
    }

    /// Twist at which `transforms` transforms with arbitrary nonzero covectors
    /// at distinct points all stay visible on global sections.
    pub fn visibility_twist(degrees: &[i64], transforms: usize) -> i64 {
        let min = degrees.iter().copied().min().unwrap_or(0);
        (transforms as i64 - 1 - min).max(0)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    /// Canonical (reduced echelon) basis of the section subspace.
    pub fn basis(&self) -> &FMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Dimension of the ambient section space.
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn det_degree(&self) -> i64 {
        self.det_degree
    }

    pub fn transforms_applied(&self) -> usize {
        self.transforms
    }

    /// Fiber value `s(q) ∈ F_p^r` of a flat coefficient vector.
    pub fn evaluate(&self, section: &[u32], point: RationalPoint) -> Result<Vec<u32>> {
        if section.len() != self.ambient_dim() {
            return Err(Error::ShapeMismatch(format!(
                "section of length {} in a {}-dimensional space",
                section.len(),
                self.ambient_dim()
            )));
        }
        let f = self.field;
        let mut out = Vec::with_capacity(self.rank());
        let mut offset = 0;
        for w in block_widths(&self.degrees, self.twist) {
            let block = &section[offset..offset + w];
            let v = match point {
                RationalPoint::Affine(a) => block
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| f.add(f.mul(acc, a), c)),
                RationalPoint::Infinity => block.last().copied().unwrap_or(0),
            };
            out.push(v);
            offset += w;
        }
        Ok(out)
    }

    /// Coefficient vector of the functional `s ↦ c · s(q)` on the ambient space.
    fn functional_vector(&self, phi: &PointFunctional) -> Result<Vec<u32>> {
        if phi.covector.len() != self.rank() {
            return Err(Error::ShapeMismatch(format!(
                "covector of length {} for a rank-{} bundle",
                phi.covector.len(),
                self.rank()
            )));
        }
        let f = self.field;
        let mut out = Vec::with_capacity(self.ambient_dim());
        for (w, &c) in block_widths(&self.degrees, self.twist).into_iter().zip(&phi.covector) {
            match phi.point {
                RationalPoint::Affine(a) => {
                    let mut pw = 1 % f.p();
                    for _ in 0..w {
                        out.push(f.mul(c, pw));
                        pw = f.mul(pw, a);
                    }
                }
                RationalPoint::Infinity => {
                    out.extend(std::iter::repeat_n(0, w.saturating_sub(1)));
                    if w > 0 {
                        out.push(c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Subspace of sections annihilated by every listed functional.
    fn joint_kernel(&self, functionals: &[&PointFunctional]) -> Result<FMatrix> {
        let mut restricted = Vec::with_capacity(functionals.len() * self.dim());
        for phi in functionals {
            let fv = self.functional_vector(phi)?;
            restricted.extend(self.basis.mul_vec(&fv)?);
        }
        let conditions = FMatrix::new(self.field, functionals.len(), self.dim(), restricted)?;
        let coords = conditions.kernel_basis();
        Ok(coords.mul(&self.basis)?.row_space())
    }

    /// Elementary transform: the kernel of `φ` on the current subsheaf.
    pub fn apply_transform(&self, phi: &PointFunctional) -> Result<SubsheafModel> {
        let fv = self.functional_vector(phi)?;
        if self.basis.mul_vec(&fv)?.iter().all(|&x| x == 0) {
            return Err(Error::VacuousTransform);
        }
        let basis = self.joint_kernel(&[phi])?;
        debug_assert_eq!(basis.rows() + 1, self.dim());
        Ok(SubsheafModel {
            basis,
            det_degree: self.det_degree - 1,
            transforms: self.transforms + 1,
            ..self.clone()
        })
    }

    /// Whether every section of `self` is a section of `other`.
    pub fn is_contained_in(&self, other: &SubsheafModel) -> Result<bool> {
        let stacked = self.basis.vstack(&other.basis)?;
        Ok(stacked.rank() == other.dim())
    }
}

fn block_widths(degrees: &[i64], twist: i64) -> Vec<usize> {
    degrees
        .iter()
        .map(|d| (d + twist + 1).max(0) as usize)
        .collect()
}

/// Dimensions and agreement of the three ways of applying two transforms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommuteReport {
    pub field: u32,
    pub degrees: Vec<i64>,
    pub twist: i64,
    pub dim_start: usize,
    /// `None` when the second transform of the route is vacuous.
    pub dim_v12: Option<usize>,
    pub dim_v21: Option<usize>,
    pub dim_joint: usize,
    pub equal: bool,
}

struct Routes {
    v12: Result<SubsheafModel>,
    v21: Result<SubsheafModel>,
    joint: FMatrix,
}

fn three_routes(m: &SubsheafModel, phi1: &PointFunctional, phi2: &PointFunctional) -> Result<Routes> {
    let v12 = m.apply_transform(phi1).and_then(|v| v.apply_transform(phi2));
    let v21 = m.apply_transform(phi2).and_then(|v| v.apply_transform(phi1));
    let joint = m.joint_kernel(&[phi1, phi2])?;
    Ok(Routes { v12, v21, joint })
}

fn report(m: &SubsheafModel, routes: &Routes) -> CommuteReport {
    let equal = match (&routes.v12, &routes.v21) {
        (Ok(a), Ok(b)) => a.basis == b.basis && a.basis == routes.joint,
        _ => false,
    };
    CommuteReport {
        field: m.field.p(),
        degrees: m.degrees.clone(),
        twist: m.twist,
        dim_start: m.dim(),
        dim_v12: routes.v12.as_ref().ok().map(SubsheafModel::dim),
        dim_v21: routes.v21.as_ref().ok().map(SubsheafModel::dim),
        dim_joint: routes.joint.rows(),
        equal,
    }
}

fn rethrow_shape_errors(routes: &Routes) -> Result<()> {
    for r in [&routes.v12, &routes.v21] {
        if let Err(e) = r {
            if !matches!(e, Error::VacuousTransform) {
                return Err(e.clone());
            }
        }
    }
    Ok(())
}

/// Computes `V12`, `V21` and the joint kernel `V` for transforms at two
/// distinct points and compares their canonical bases.
pub fn commute_check(
    m: &SubsheafModel,
    phi1: &PointFunctional,
    phi2: &PointFunctional,
) -> Result<CommuteReport> {
    if phi1.point == phi2.point {
        return Err(Error::OverlappingSupport);
    }
    let routes = three_routes(m, phi1, phi2)?;
    routes.v12.as_ref().map_err(Clone::clone)?;
    routes.v21.as_ref().map_err(Clone::clone)?;
    Ok(report(m, &routes))
}

/// Same three-route computation for two functionals at one point. Vacuous
/// routes are reported rather than raised; no agreement is implied.
pub fn probe_overlap(
    m: &SubsheafModel,
    phi1: &PointFunctional,
    phi2: &PointFunctional,
) -> Result<CommuteReport> {
    if phi1.point != phi2.point {
        return Err(Error::DistinctSupport);
    }
    let routes = three_routes(m, phi1, phi2)?;
    rethrow_shape_errors(&routes)?;
    Ok(report(m, &routes))
}

/// A filtration of a split bundle on P¹ realized by explicit transforms.
#[derive(Debug, Clone)]
pub struct CurveFiltration {
    pub filtration: HierFiltration,
    /// Models from the bundle down: `chain[0] = E`, `chain[M] = E_0`.
    pub chain: Vec<SubsheafModel>,
    /// Point of the `j`-th transform applied from the top.
    pub points: Vec<RationalPoint>,
    pub covectors: Vec<Vec<u32>>,
    pub twist: i64,
}

/// Realizes a filtration of length `M = Σ d_i - deg Λ₀` by transforms at the
/// first `M` points of `0, 1, …, p-1, ∞`. At each step the covector is the
/// first standard basis vector whose functional is nonzero on the current
/// subspace.
pub fn build_curve_filtration(
    degrees: &[i64],
    lambda0_degree: i64,
    field: Field,
) -> Result<CurveFiltration> {
    let Some(&max_deg) = degrees.iter().max() else {
        return Err(Error::InvalidArgument("a bundle needs at least one summand".into()));
    };
    let m = degrees.iter().sum::<i64>() - lambda0_degree;
    if m < 0 {
        return Err(Error::NegativeM(m));
    }
    let available = field.p() as u64 + 1;
    if m as u64 > available {
        return Err(Error::NotEnoughPoints {
            needed: m,
            p: field.p(),
            available,
        });
    }
    // the top-degree summand must reach degree M-1 for every step to be visible
    let twist = (m - 1 - max_deg).max(0);
    let truncation = degrees.iter().map(|d| d.abs()).sum::<i64>() + m + 1;
    let mut current = SubsheafModel::full_sections_twisted(degrees, twist, truncation, field)?;

    let points: Vec<RationalPoint> = rational_points(field).into_iter().take(m as usize).collect();
    let mut chain = vec![current.clone()];
    let mut covectors = Vec::with_capacity(points.len());
    for &q in &points {
        let mut next = None;
        for i in 0..degrees.len() {
            let mut c = vec![0i64; degrees.len()];
            c[i] = 1;
            let phi = PointFunctional::new(field, q, &c)?;
            match current.apply_transform(&phi) {
                Ok(model) => {
                    covectors.push(phi.covector);
                    next = Some(model);
                    break;
                }
                Err(Error::VacuousTransform) => continue,
                Err(e) => return Err(e),
            }
        }
        current = next.ok_or(Error::VacuousTransform)?;
        chain.push(current.clone());
    }

    let filtration = HierFiltration::new(
        DivisorClass::points(lambda0_degree),
        vec![DivisorClass::points(1); m as usize],
        degrees.len(),
    )?;
    Ok(CurveFiltration {
        filtration,
        chain,
        points,
        covectors,
        twist,
    })
}
