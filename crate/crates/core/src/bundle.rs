//! Split vector bundles `⊕ O(D_i)` over a Picard lattice.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::picard::{self, DivisorClass, Lattice};
use crate::Rational;

/// An ordered direct sum of line bundles, all on the same lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitBundle {
    summands: Vec<DivisorClass>,
}

impl SplitBundle {
    pub fn new(summands: Vec<DivisorClass>) -> Result<Self> {
        let Some(first) = summands.first() else {
            return Err(Error::InvalidArgument("a bundle needs at least one summand".into()));
        };
        let lat = first.lattice();
        if let Some(bad) = summands.iter().find(|s| s.lattice() != lat) {
            return Err(Error::LatticeMismatch(lat.to_string(), bad.lattice().to_string()));
        }
        Ok(SplitBundle { summands })
    }

    /// `⊕ O_C(d_i)` on a curve.
    pub fn on_curve(degrees: &[i64]) -> Result<Self> {
        Self::new(degrees.iter().map(|&d| DivisorClass::points(d)).collect())
    }

    /// `⊕ O(a_i H)` on P².
    pub fn on_p2(degrees: &[i64]) -> Result<Self> {
        Self::new(degrees.iter().map(|&d| DivisorClass::hyperplanes(d)).collect())
    }

    pub fn summands(&self) -> &[DivisorClass] {
        &self.summands
    }

    pub fn lattice(&self) -> Lattice {
        self.summands[0].lattice()
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// Determinant class: the sum of the summand classes.
    pub fn det(&self) -> DivisorClass {
        self.summands
            .iter()
            .fold(DivisorClass::zero(self.lattice()), |acc, s| &acc + s)
    }

    /// `μ_H = (det · H) / rank` as an exact rational.
    pub fn slope(&self, polarization: &DivisorClass) -> Result<Rational> {
        let deg = picard::intersect(&self.det(), polarization)?;
        Ok(Rational::new(deg, self.rank() as i64))
    }

    /// Every summand twisted by the line bundle `O(m)`.
    pub fn twist(&self, m: &DivisorClass) -> Result<SplitBundle> {
        let summands = self
            .summands
            .iter()
            .map(|s| s.checked_add(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(SplitBundle { summands })
    }

    /// Pullback of a bundle on P² to the blowup at `m` points.
    pub fn pullback(&self, m: usize) -> Result<SplitBundle> {
        let summands = self
            .summands
            .iter()
            .map(|s| picard::pullback(s, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(SplitBundle { summands })
    }

    /// Summand degrees on a curve.
    pub fn degrees(&self) -> Result<Vec<i64>> {
        if self.lattice() != Lattice::Curve {
            return Err(Error::UnsupportedLattice(self.lattice().to_string()));
        }
        Ok(self.summands.iter().map(|s| s.coeffs()[0]).collect())
    }

    /// Harder–Narasimhan type of a split bundle on a curve.
    pub fn hn_profile(&self) -> Result<HnProfile> {
        let mut degrees = self.degrees()?;
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        let mut groups: Vec<HnGroup> = Vec::new();
        for d in degrees {
            match groups.last_mut() {
                Some(g) if g.slope == Rational::from_integer(d) => g.multiplicity += 1,
                _ => groups.push(HnGroup {
                    slope: Rational::from_integer(d),
                    multiplicity: 1,
                }),
            }
        }
        Ok(HnProfile { groups })
    }
}

impl fmt::Display for SplitBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|s| format!("O({s})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One graded piece of the HN filtration: `O(d)^{⊕ multiplicity}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnGroup {
    #[serde(serialize_with = "crate::serialize_rational")]
    pub slope: Rational,
    pub multiplicity: usize,
}

/// Slopes (strictly decreasing) and multiplicities of the HN graded pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnProfile {
    pub groups: Vec<HnGroup>,
}

impl HnProfile {
    /// Length `s` of the HN filtration.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.groups.iter().map(|g| g.multiplicity).sum()
    }
}

/// Parses `O(3)+O(1)+O(0)` (or `O(2H-E1) + O(H)`, `O(F1)+O(2F2)`, …) on a lattice.
pub fn parse_bundle(lattice: Lattice, input: &str) -> Result<SplitBundle> {
    let bad = || Error::Parse {
        what: "bundle",
        input: input.to_string(),
    };
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut summands = Vec::new();
    let mut rest = s.as_str();
    loop {
        let body = rest.strip_prefix("O(").ok_or_else(bad)?;
        let close = body.find(')').ok_or_else(bad)?;
        summands.push(picard::parse_class(lattice, &body[..close])?);
        rest = &body[close + 1..];
        if rest.is_empty() {
            break;
        }
        rest = rest.strip_prefix('+').ok_or_else(bad)?;
    }
    SplitBundle::new(summands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn determinants() {
        let b = SplitBundle::on_p2(&[3, 2]).unwrap();
        assert_eq!(b.det(), DivisorClass::hyperplanes(5));
        assert_eq!(
            SplitBundle::on_curve(&[7]).unwrap().det(),
            DivisorClass::points(7)
        );
        assert_eq!(
            SplitBundle::on_curve(&[1, -1]).unwrap().det(),
            DivisorClass::points(0)
        );
    }

    #[test]
    fn slopes() {
        let pt = Lattice::Curve.polarization();
        let b = SplitBundle::on_curve(&[3, 1, 0]).unwrap();
        assert_eq!(b.slope(&pt).unwrap(), r(4, 3));
        assert_eq!(
            SplitBundle::on_curve(&[-5]).unwrap().slope(&pt).unwrap(),
            r(-5, 1)
        );
        assert!(b.slope(&DivisorClass::hyperplanes(1)).is_err());
    }

    #[test]
    fn pullback_keeps_slope() {
        let down = SplitBundle::on_p2(&[3, 2, -1]).unwrap();
        let up = down.pullback(2).unwrap();
        let h = DivisorClass::hyperplanes(1);
        let fh = picard::pullback(&h, 2).unwrap();
        assert_eq!(up.slope(&fh).unwrap(), down.slope(&h).unwrap());
    }

    #[test]
    fn hn_examples() {
        let p = SplitBundle::on_curve(&[3, 1, 0]).unwrap().hn_profile().unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(
            p.groups.iter().map(|g| (g.slope, g.multiplicity)).collect::<Vec<_>>(),
            vec![(r(3, 1), 1), (r(1, 1), 1), (r(0, 1), 1)]
        );
        let p = SplitBundle::on_curve(&[1, 1, 0]).unwrap().hn_profile().unwrap();
        assert_eq!(
            p.groups.iter().map(|g| (g.slope, g.multiplicity)).collect::<Vec<_>>(),
            vec![(r(1, 1), 2), (r(0, 1), 1)]
        );
        let p = SplitBundle::on_curve(&[2, 2]).unwrap().hn_profile().unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.groups[0].multiplicity, 2);
        assert!(SplitBundle::on_p2(&[1]).unwrap().hn_profile().is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(SplitBundle::new(vec![]).is_err());
        assert!(matches!(
            SplitBundle::new(vec![DivisorClass::points(1), DivisorClass::hyperplanes(1)]),
            Err(Error::LatticeMismatch(..))
        ));
    }

    #[test]
    fn parse_notation() {
        let b = parse_bundle(Lattice::Curve, "O(3)+O(1)+O(0)").unwrap();
        assert_eq!(b.degrees().unwrap(), vec![3, 1, 0]);
        let b = parse_bundle(Lattice::BlowupP2(1), "O(3H - E1) + O(2H-E1)").unwrap();
        assert_eq!(b.det().coeffs(), &[5, -2]);
        let b = parse_bundle(Lattice::P1xP1, "O(2F1) + O(F2)").unwrap();
        assert_eq!(b.det().coeffs(), &[2, 1]);
        assert!(parse_bundle(Lattice::Curve, "O(3)+").is_err());
        assert!(parse_bundle(Lattice::Curve, "3+1").is_err());
        assert_eq!(
            SplitBundle::on_curve(&[3, -1]).unwrap().to_string(),
            "O(3P) + O(-P)"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn hn_profile_shape(degrees in proptest::collection::vec(-6i64..7, 1..8)) {
            let b = SplitBundle::on_curve(&degrees).unwrap();
            let p = b.hn_profile().unwrap();
            prop_assert_eq!(p.rank(), degrees.len());
            let mut distinct = degrees.clone();
            distinct.sort_unstable();
            distinct.dedup();
            prop_assert_eq!(p.len(), distinct.len());
            for w in p.groups.windows(2) {
                prop_assert!(w[0].slope > w[1].slope);
            }
        }

        #[test]
        fn twist_shifts_determinant(
            degrees in proptest::collection::vec(-6i64..7, 1..6),
            m in -4i64..5,
        ) {
            let b = SplitBundle::on_curve(&degrees).unwrap();
            let tw = DivisorClass::points(m);
            let twisted = b.twist(&tw).unwrap();
            prop_assert_eq!(twisted.det(), &b.det() + &tw.scale(b.rank() as i64));
        }
    }
}
