//! Laurent polynomials over Q with a chosen prime, Newton polygons, and the
//! residue of dlog f on the open annulus 0 < ν_p < 1.
//!
//! Coefficients are exact rationals: the Newton polygon is discontinuous
//! under coefficient perturbation, so approximate coefficients are rejected
//! at the parsing boundary instead of being rounded into a guess. The prime
//! only enters through valuations.

use crate::padic::{rational_valuation, LogBranch, PadicContext, PadicError, PadicNumber};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("f has a root with valuation strictly between 0 and 1: the divisor meets the annulus")]
    DivisorMeetsAnnulus,
    #[error("cannot evaluate negative exponents at zero")]
    EvaluationAtZero,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// f(x) = Σ a_i x^i with finitely many nonzero exact rational a_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    p: u64,
    coeffs: BTreeMap<i64, BigRational>,
}

/// Which boundary circle of the annulus an order is measured on: `TX` is the
/// inner end (ν = 1 side), `TY` the outer end (ν = 0 side).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnulusEnd {
    TX,
    TY,
}

/// Lower convex hull of the points (i, ν_p(a_i)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Hull corners, strictly increasing in the exponent.
    pub vertices: Vec<(i64, i64)>,
    /// One entry per hull edge, slopes strictly increasing.
    pub segments: Vec<PolygonSegment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonSegment {
    pub slope: Ratio<i64>,
    pub length: i64,
}

impl LaurentPolynomial {
    /// Zero coefficients are dropped; the zero polynomial itself is
    /// representable but rejected by every operation that needs dlog.
    pub fn new(p: u64, coeffs: impl IntoIterator<Item = (i64, BigRational)>) -> Self {
        let coeffs = coeffs
            .into_iter()
            .filter(|(_, a)| !a.is_zero())
            .collect();
        LaurentPolynomial { p, coeffs }
    }

    pub fn from_integers(p: u64, coeffs: &[(i64, i64)]) -> Self {
        Self::new(
            p,
            coeffs
                .iter()
                .map(|&(i, a)| (i, BigRational::from_integer(BigInt::from(a)))),
        )
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, BigRational> {
        &self.coeffs
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Pole order at x = 0 (negative when f vanishes there).
    pub fn pole_order(&self) -> Result<i64, LaurentError> {
        self.min_exponent()
            .map(|m| -m)
            .ok_or(LaurentError::ZeroPolynomial)
    }

    pub fn newton_polygon(&self) -> Result<NewtonPolygon, LaurentError> {
        if self.coeffs.is_empty() {
            return Err(LaurentError::ZeroPolynomial);
        }
        let points: Vec<(i64, i64)> = self
            .coeffs
            .iter()
            .map(|(&i, a)| (i, rational_valuation(self.p, a).expect("nonzero coefficient")))
            .collect();
        let mut hull: Vec<(i64, i64)> = Vec::new();
        for pt in points {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                // Drop b when it sits on or above the chord a -> pt.
                let cross = (b.0 - a.0) as i128 * (pt.1 - a.1) as i128
                    - (b.1 - a.1) as i128 * (pt.0 - a.0) as i128;
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let segments = hull
            .windows(2)
            .map(|w| PolygonSegment {
                slope: Ratio::new(w[1].1 - w[0].1, w[1].0 - w[0].0),
                length: w[1].0 - w[0].0,
            })
            .collect();
        Ok(NewtonPolygon {
            vertices: hull,
            segments,
        })
    }

    /// Valuations of the roots of x^(pole order) · f, with multiplicities:
    /// a polygon segment of slope s and width ℓ contributes ℓ roots of
    /// valuation -s. Listed in decreasing root valuation.
    pub fn root_valuation_counts(&self) -> Result<Vec<(Ratio<i64>, i64)>, LaurentError> {
        Ok(self
            .newton_polygon()?
            .segments
            .iter()
            .map(|s| (-s.slope, s.length))
            .collect())
    }

    /// Order of vanishing along the named boundary circle of the annulus:
    /// min_i (ν_p(a_i) + i) at the inner end, min_i ν_p(a_i) at the outer.
    pub fn boundary_order(&self, end: AnnulusEnd) -> Result<i64, LaurentError> {
        if self.coeffs.is_empty() {
            return Err(LaurentError::ZeroPolynomial);
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(&i, a)| {
                let v = rational_valuation(self.p, a).expect("nonzero coefficient");
                match end {
                    AnnulusEnd::TX => v + i,
                    AnnulusEnd::TY => v,
                }
            })
            .min()
            .unwrap())
    }

    /// Residue of dlog f = f'/f dx on the annulus 0 < ν_p(x) < 1: the number
    /// of zeros of valuation >= 1 minus the pole order at 0. Requires the
    /// divisor of f to avoid the open annulus, i.e. no polygon slope
    /// strictly between -1 and 0.
    pub fn annulus_residue_dlog(&self) -> Result<i64, LaurentError> {
        let polygon = self.newton_polygon()?;
        let minus_one = Ratio::from_integer(-1);
        let zero = Ratio::from_integer(0);
        if polygon
            .segments
            .iter()
            .any(|s| s.slope > minus_one && s.slope < zero)
        {
            return Err(LaurentError::DivisorMeetsAnnulus);
        }
        let zeros_inside: i64 = polygon
            .segments
            .iter()
            .filter(|s| s.slope <= minus_one)
            .map(|s| s.length)
            .sum();
        Ok(zeros_inside - self.pole_order()?)
    }

    /// Confronts the annulus residue with the difference of boundary orders.
    pub fn lemma_check(&self) -> Result<LemmaCheck, LaurentError> {
        let residue = self.annulus_residue_dlog()?;
        let boundary =
            self.boundary_order(AnnulusEnd::TX)? - self.boundary_order(AnnulusEnd::TY)?;
        Ok(LemmaCheck {
            residue,
            boundary,
            equal: residue == boundary,
        })
    }

    /// Horner evaluation at a p-adic point, embedding each coefficient with
    /// the context's precision. Negative exponents need an invertible point.
    pub fn evaluate(
        &self,
        ctx: &PadicContext,
        at: &PadicNumber,
    ) -> Result<PadicNumber, LaurentError> {
        assert_eq!(self.p, ctx.prime(), "polynomial and context prime differ");
        let embed = |a: &BigRational| PadicNumber::from_big_rational(self.p, a, ctx.default_prec());
        // Walk the exponents top-down: acc holds Σ a_j x^(j - i) over the
        // coefficients seen so far, rescaled at each gap.
        let mut acc = PadicNumber::exact_zero(self.p);
        let mut last: Option<i64> = None;
        for (&i, a) in self.coeffs.iter().rev() {
            if let Some(l) = last {
                acc = acc.mul(&positive_pow(at, l - i));
            }
            acc = acc.add(&embed(a));
            last = Some(i);
        }
        let Some(lowest) = last else {
            return Ok(PadicNumber::exact_zero(self.p));
        };
        match lowest {
            0 => Ok(acc),
            e if e > 0 => Ok(acc.mul(&positive_pow(at, e))),
            e => {
                if at.is_zero() {
                    return Err(LaurentError::EvaluationAtZero);
                }
                let inv = at.inv().map_err(LaurentError::Padic)?;
                Ok(acc.mul(&positive_pow(&inv, -e)))
            }
        }
    }

    /// Exact convolution product.
    pub fn mul(&self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.p, rhs.p, "polynomial primes differ");
        let mut acc: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &rhs.coeffs {
                let entry = acc.entry(i + j).or_insert_with(BigRational::zero);
                *entry += a * b;
            }
        }
        LaurentPolynomial::new(self.p, acc)
    }
}

fn positive_pow(x: &PadicNumber, e: i64) -> PadicNumber {
    debug_assert!(e >= 1);
    let mut acc = x.clone();
    for _ in 1..e {
        acc = acc.mul(x);
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaCheck {
    pub residue: i64,
    pub boundary: i64,
    pub equal: bool,
}

/// log of the evaluated polynomial; the integrand dlog f integrates to
/// plog(f(x)) up to the usual branch choice.
pub fn dlog_integral(
    f: &LaurentPolynomial,
    ctx: &PadicContext,
    at: &PadicNumber,
    branch: &LogBranch,
) -> Result<PadicNumber, LaurentError> {
    let value = f.evaluate(ctx, at)?;
    crate::padic::plog(&value, branch).map_err(LaurentError::from)
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, a) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})*x")?,
                _ => write!(f, "({a})*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// p + x + x^3 over Q_5: the worked polygon with one root inside the
    /// unit disk and two on its boundary.
    fn sample() -> LaurentPolynomial {
        LaurentPolynomial::from_integers(5, &[(0, 5), (1, 1), (3, 1)])
    }

    #[test]
    fn polygon_of_the_sample() {
        let polygon = sample().newton_polygon().unwrap();
        assert_eq!(polygon.vertices, vec![(0, 1), (1, 0), (3, 0)]);
        assert_eq!(polygon.segments.len(), 2);
        assert_eq!(polygon.segments[0].slope, Ratio::from_integer(-1));
        assert_eq!(polygon.segments[0].length, 1);
        assert_eq!(polygon.segments[1].slope, Ratio::from_integer(0));
        assert_eq!(polygon.segments[1].length, 2);
    }

    #[test]
    fn polygon_of_a_monomial_has_no_segments() {
        let f = LaurentPolynomial::from_integers(5, &[(1, 1)]);
        let polygon = f.newton_polygon().unwrap();
        assert_eq!(polygon.vertices, vec![(1, 0)]);
        assert!(polygon.segments.is_empty());
        assert!(f.root_valuation_counts().unwrap().is_empty());
    }

    #[test]
    fn root_counts_follow_the_segments() {
        assert_eq!(
            sample().root_valuation_counts().unwrap(),
            vec![
                (Ratio::from_integer(1), 1),
                (Ratio::from_integer(0), 2)
            ]
        );
        let linear = LaurentPolynomial::from_integers(5, &[(0, -5), (1, 1)]);
        assert_eq!(
            linear.root_valuation_counts().unwrap(),
            vec![(Ratio::from_integer(1), 1)]
        );
        let ramified = LaurentPolynomial::from_integers(5, &[(0, -5), (2, 1)]);
        assert_eq!(
            ramified.root_valuation_counts().unwrap(),
            vec![(Ratio::new(1, 2), 2)]
        );
    }

    #[test]
    fn residues_on_the_annulus() {
        let x = LaurentPolynomial::from_integers(5, &[(1, 1)]);
        assert_eq!(x.annulus_residue_dlog().unwrap(), 1);
        let x_minus_p = LaurentPolynomial::from_integers(5, &[(0, -5), (1, 1)]);
        assert_eq!(x_minus_p.annulus_residue_dlog().unwrap(), 1);
        let x_minus_1 = LaurentPolynomial::from_integers(5, &[(0, -1), (1, 1)]);
        assert_eq!(x_minus_1.annulus_residue_dlog().unwrap(), 0);
        assert_eq!(sample().annulus_residue_dlog().unwrap(), 1);
        // y = p/x has a simple zero at the inner end and pole order 1 at 0.
        let y = LaurentPolynomial::from_integers(5, &[(-1, 5)]);
        assert_eq!(y.annulus_residue_dlog().unwrap(), -1);
    }

    #[test]
    fn divisor_on_the_annulus_is_rejected() {
        let f = LaurentPolynomial::from_integers(5, &[(0, -5), (2, 1)]);
        assert_eq!(
            f.annulus_residue_dlog().unwrap_err(),
            LaurentError::DivisorMeetsAnnulus
        );
        assert_eq!(
            f.lemma_check().unwrap_err(),
            LaurentError::DivisorMeetsAnnulus
        );
    }

    #[test]
    fn boundary_orders() {
        let x = LaurentPolynomial::from_integers(5, &[(1, 1)]);
        assert_eq!(x.boundary_order(AnnulusEnd::TX).unwrap(), 1);
        assert_eq!(x.boundary_order(AnnulusEnd::TY).unwrap(), 0);
        let y = LaurentPolynomial::from_integers(5, &[(-1, 5)]);
        assert_eq!(y.boundary_order(AnnulusEnd::TX).unwrap(), 0);
        assert_eq!(y.boundary_order(AnnulusEnd::TY).unwrap(), 1);
        assert_eq!(sample().boundary_order(AnnulusEnd::TX).unwrap(), 1);
        assert_eq!(sample().boundary_order(AnnulusEnd::TY).unwrap(), 0);
    }

    #[test]
    fn lemma_check_on_the_worked_examples()
    {
        for f in [
            LaurentPolynomial::from_integers(5, &[(1, 1)]),
            sample(),
            LaurentPolynomial::from_integers(5, &[(-1, 5)]),
            LaurentPolynomial::from_integers(5, &[(0, 5), (1, 1)]),
        ] {
            let check = f.lemma_check().unwrap();
            assert!(check.equal, "residue {} vs boundary {}", check.residue, check.boundary);
        }
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        let zero = LaurentPolynomial::new(5, Vec::<(i64, BigRational)>::new());
        assert!(zero.is_zero());
        assert_eq!(
            zero.newton_polygon().unwrap_err(),
            LaurentError::ZeroPolynomial
        );
        assert_eq!(
            zero.annulus_residue_dlog().unwrap_err(),
            LaurentError::ZeroPolynomial
        );
    }

    #[test]
    fn residue_is_multiplicative() {
        let f = sample();
        let g = LaurentPolynomial::from_integers(5, &[(-1, 5), (0, 1)]);
        let product = f.mul(&g);
        assert_eq!(
            product.annulus_residue_dlog().unwrap(),
            f.annulus_residue_dlog().unwrap() + g.annulus_residue_dlog().unwrap()
        );
    }

    #[test]
    fn root_count_conservation() {
        for f in [sample(), LaurentPolynomial::from_integers(5, &[(-2, 25), (0, 3), (4, 10)])] {
            let total: i64 = f.root_valuation_counts().unwrap().iter().map(|(_, c)| c).sum();
            assert_eq!(total, f.max_exponent().unwrap() - f.min_exponent().unwrap());
        }
    }

    #[test]
    fn evaluation_matches_direct_arithmetic() {
        let ctx = PadicContext::new(5, 8).unwrap();
        let f = sample();
        // f(2) = 5 + 2 + 8 = 15.
        assert!(f.evaluate(&ctx, &ctx.int(2)).unwrap().agrees(&ctx.int(15)));
        let g = LaurentPolynomial::from_integers(5, &[(-1, 5), (2, 3)]);
        // g(5) = 1 + 75 = 76.
        assert!(g.evaluate(&ctx, &ctx.int(5)).unwrap().agrees(&ctx.int(76)));
        assert_eq!(
            g.evaluate(&ctx, &ctx.exact_zero()).unwrap_err(),
            LaurentError::EvaluationAtZero
        );
        // Constant term only.
        let c = LaurentPolynomial::from_integers(5, &[(0, 9)]);
        assert!(c.evaluate(&ctx, &ctx.exact_zero()).unwrap().agrees(&ctx.int(9)));
    }
}
