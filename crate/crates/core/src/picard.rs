//! Integer Picard lattices of the model varieties: a curve (degree only),
//! P², the blowup of P² at `m` points, and P¹×P¹.
//!
//! Effectivity on the blowup is the simplicial cone spanned by `f*H` and the
//! exceptional classes `E_j`; strict transforms such as `f*H - E_1` are not
//! representable as effective classes here.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// The model varieties whose Picard lattices are tracked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Lattice {
    /// A smooth projective curve; the single generator is the point class.
    Curve,
    /// The projective plane with hyperplane class `H`.
    P2,
    /// P² blown up at `m` distinct points: generators `f*H, E_1, ..., E_m`.
    BlowupP2(usize),
    /// P¹×P¹ with the two fiber classes `F1, F2`.
    P1xP1,
}

impl Lattice {
    pub fn rank(&self) -> usize {
        match self {
            Lattice::Curve | Lattice::P2 => 1,
            Lattice::BlowupP2(m) => 1 + m,
            Lattice::P1xP1 => 2,
        }
    }

    pub fn is_surface(&self) -> bool {
        !matches!(self, Lattice::Curve)
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            Lattice::Curve => vec!["P".into()],
            Lattice::P2 => vec!["H".into()],
            Lattice::BlowupP2(m) => std::iter::once("H".to_string())
                .chain((1..=*m).map(|j| format!("E{j}")))
                .collect(),
            Lattice::P1xP1 => vec!["F1".into(), "F2".into()],
        }
    }

    /// Intersection number of generators `i` and `j`.
    ///
    /// On a curve this is the degree pairing with `P·P = 1`, so pairing a
    /// class with the point class returns its degree.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        match self {
            Lattice::Curve | Lattice::P2 => 1,
            Lattice::BlowupP2(_) => match (i, j) {
                (0, 0) => 1,
                (0, _) | (_, 0) => 0,
                (a, b) if a == b => -1,
                _ => 0,
            },
            Lattice::P1xP1 => {
                if i == j {
                    0
                } else {
                    1
                }
            }
        }
    }

    /// Whether generator `i` has arbitrarily many pairwise disjoint effective
    /// representatives. Points on a curve, fibers of P¹×P¹ and exceptional
    /// curves do; lines in P² (and their pullbacks) always meet.
    pub fn has_disjoint_representatives(&self, i: usize) -> bool {
        match self {
            Lattice::Curve | Lattice::P1xP1 => true,
            Lattice::P2 => false,
            Lattice::BlowupP2(_) => i > 0,
        }
    }

    /// The polarization used for slopes: the point class on a curve, `H` on
    /// P², `f*H` on the blowup, `F1 + F2` on P¹×P¹.
    pub fn polarization(&self) -> DivisorClass {
        let mut coeffs = vec![0; self.rank()];
        match self {
            Lattice::P1xP1 => {
                coeffs[0] = 1;
                coeffs[1] = 1;
            }
            _ => coeffs[0] = 1,
        }
        DivisorClass {
            lattice: *self,
            coeffs,
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lattice::Curve => write!(f, "Curve"),
            Lattice::P2 => write!(f, "P2"),
            Lattice::BlowupP2(m) => write!(f, "BlowupP2({m})"),
            Lattice::P1xP1 => write!(f, "P1xP1"),
        }
    }
}

impl FromStr for Lattice {
    type Err = Error;

    /// Accepts `curve`, `P2`, `P1xP1`, `blowup:m` / `BlowupP2(m)`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = t.to_ascii_lowercase();
        let bad = || Error::Parse {
            what: "lattice",
            input: s.to_string(),
        };
        match lower.as_str() {
            "curve" | "p1" => return Ok(Lattice::Curve),
            "p2" => return Ok(Lattice::P2),
            "p1xp1" => return Ok(Lattice::P1xP1),
            _ => {}
        }
        let m = if let Some(rest) = lower.strip_prefix("blowup:") {
            rest
        } else if let Some(rest) = lower.strip_prefix("blowupp2(") {
            rest.strip_suffix(')').ok_or_else(bad)?
        } else {
            return Err(bad());
        };
        m.parse().map(Lattice::BlowupP2).map_err(|_| bad())
    }
}

/// A divisor class: an integer vector in the generator basis of a lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    lattice: Lattice,
    coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(lattice: Lattice, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != lattice.rank() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for a rank-{} lattice",
                coeffs.len(),
                lattice.rank()
            )));
        }
        Ok(DivisorClass { lattice, coeffs })
    }

    pub fn zero(lattice: Lattice) -> Self {
        DivisorClass {
            lattice,
            coeffs: vec![0; lattice.rank()],
        }
    }

    /// Unit multiple of generator `i`.
    pub fn generator(lattice: Lattice, i: usize) -> Self {
        let mut c = Self::zero(lattice);
        c.coeffs[i] = 1;
        c
    }

    /// `d` times the point class on a curve.
    pub fn points(d: i64) -> Self {
        DivisorClass {
            lattice: Lattice::Curve,
            coeffs: vec![d],
        }
    }

    /// `a·H` on P².
    pub fn hyperplanes(a: i64) -> Self {
        DivisorClass {
            lattice: Lattice::P2,
            coeffs: vec![a],
        }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_lattice(&self, other: &DivisorClass) -> Result<()> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch(
                self.lattice.to_string(),
                other.lattice.to_string(),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.same_lattice(other)?;
        Ok(DivisorClass {
            lattice: self.lattice,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass {
            lattice: self.lattice,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Degree of a class on a curve, or its `H`-coefficient on P².
    pub fn degree(&self) -> Result<i64> {
        match self.lattice {
            Lattice::Curve | Lattice::P2 => Ok(self.coeffs[0]),
            other => Err(Error::UnsupportedLattice(other.to_string())),
        }
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    /// Panics on a lattice mismatch; use [`DivisorClass::checked_add`] otherwise.
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_add(rhs).expect("adding classes from different lattices")
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_sub(rhs).expect("subtracting classes from different lattices")
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(-1)
    }
}

impl fmt::Display for DivisorClass {
    /// Renders e.g. `5H + 2E1 + 3E2`, `-F1 + 2F2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.lattice.labels();
        let mut first = true;
        for (c, label) in self.coeffs.iter().zip(&labels) {
            if *c == 0 {
                continue;
            }
            let mag = c.abs();
            let body = if mag == 1 {
                label.clone()
            } else {
                format!("{mag}{label}")
            };
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
                write!(f, "{body}")?;
                first = false;
            } else {
                write!(f, " {} {body}", if *c < 0 { '-' } else { '+' })?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Intersection pairing. Both classes must live in the same lattice.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    a.same_lattice(b)?;
    let lat = a.lattice;
    let mut total = 0i64;
    for (i, &x) in a.coeffs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.coeffs.iter().enumerate() {
            total += x * y * lat.pairing(i, j);
        }
    }
    Ok(total)
}

/// Effectivity in the generator cone: all coefficients nonnegative.
pub fn is_effective(c: &DivisorClass) -> bool {
    c.coeffs.iter().all(|&x| x >= 0)
}

/// Maximal number of irreducible effective summands, counting each unit
/// multiple of a generator once. `None` when the class is not effective.
pub fn decompose_max(c: &DivisorClass) -> Option<i64> {
    is_effective(c).then(|| c.coeffs.iter().sum())
}

/// Splits a class on the blowup as `f*D + Σ m_j E_j`, returning `(D, m)`.
pub fn blowup_split(c: &DivisorClass) -> Result<(DivisorClass, Vec<i64>)> {
    match c.lattice {
        Lattice::BlowupP2(_) => Ok((
            DivisorClass::hyperplanes(c.coeffs[0]),
            c.coeffs[1..].to_vec(),
        )),
        other => Err(Error::UnsupportedLattice(other.to_string())),
    }
}

/// Inverse of [`blowup_split`].
pub fn blowup_compose(pullback_part: &DivisorClass, exceptional: &[i64]) -> Result<DivisorClass> {
    let base = pullback(pullback_part, exceptional.len())?;
    let mut coeffs = base.coeffs;
    coeffs[1..].copy_from_slice(exceptional);
    Ok(DivisorClass {
        lattice: Lattice::BlowupP2(exceptional.len()),
        coeffs,
    })
}

/// Pullback `f*: Pic(P²) → Pic(Bl_m P²)`.
pub fn pullback(c: &DivisorClass, m: usize) -> Result<DivisorClass> {
    if c.lattice != Lattice::P2 {
        return Err(Error::UnsupportedLattice(c.lattice.to_string()));
    }
    let mut coeffs = vec![0; 1 + m];
    coeffs[0] = c.coeffs[0];
    Ok(DivisorClass {
        lattice: Lattice::BlowupP2(m),
        coeffs,
    })
}

/// Parses class notation on a given lattice.
///
/// Accepted forms (whitespace-insensitive): `3H + 2E1 - E2` (also `f*H`),
/// `4P` or a bare integer on a curve, a bare integer meaning `aH` on P²,
/// `a F1 + b F2` on P¹×P¹, and `0`.
pub fn parse_class(lattice: Lattice, input: &str) -> Result<DivisorClass> {
    let bad = || Error::Parse {
        what: "divisor class",
        input: input.to_string(),
    };
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad());
    }
    let labels = lattice.labels();
    let mut coeffs = vec![0i64; lattice.rank()];

    let mut terms: Vec<(i64, &str)> = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..=bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*') {
            let term = &s[start..i];
            let (sign, body) = match term.as_bytes().first() {
                Some(b'+') => (1, &term[1..]),
                Some(b'-') => (-1, &term[1..]),
                _ => (1, term),
            };
            if body.is_empty() {
                return Err(bad());
            }
            terms.push((sign, body));
            start = i;
        }
    }

    for (sign, body) in terms {
        let digits = body.chars().take_while(|c| c.is_ascii_digit()).count();
        let (num, rest) = body.split_at(digits);
        let rest = rest.trim_start_matches(['*', '·']);
        let mult: i64 = if num.is_empty() {
            1
        } else {
            num.parse().map_err(|_| bad())?
        };
        let gen = if rest.is_empty() {
            // bare integers are multiples of the first generator on rank-one lattices
            match lattice {
                Lattice::Curve | Lattice::P2 if !num.is_empty() => 0,
                _ if !num.is_empty() && mult == 0 => {
                    continue;
                }
                _ => return Err(bad()),
            }
        } else {
            let name = rest.strip_prefix("f*").unwrap_or(rest);
            let name = if lattice == Lattice::Curve && name.eq_ignore_ascii_case("pt") {
                "P"
            } else {
                name
            };
            labels
                .iter()
                .position(|l| l.eq_ignore_ascii_case(name))
                .ok_or_else(bad)?
        };
        coeffs[gen] += sign * mult;
    }
    Ok(DivisorClass { lattice, coeffs })
}
