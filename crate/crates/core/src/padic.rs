//! Precision-tracked arithmetic in the field Q_p.
//!
//! A [`PadicNumber`] is either the exact zero or an approximation
//! `unit * p^val + O(p^(val + rel_prec))` with `unit` a residue in
//! `[1, p^rel_prec)` coprime to p. Every operation propagates precision
//! pessimistically: the result never claims more digits than its inputs
//! justify. Exact zero is kept distinct from "zero to precision N" because
//! cochain algebra downstream relies on genuine zeros surviving sums.
//!
//! The branch-dependent logarithm [`plog`] and the Teichmüller lift
//! [`teichmuller`] live here as well; both require p >= 3 (the series
//! truncation bound used by `plog` is not valid at p = 2).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not a prime >= 3")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    BadPrecision,
    #[error("division by a value indistinguishable from zero")]
    DivisionByZero,
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("not a p-adic unit")]
    NotAUnit,
    #[error("logarithm of a value indistinguishable from zero")]
    LogOfZero,
    #[error("valuation undetermined: no digit is known below O(p^{0})")]
    UndeterminedValuation(i64),
    #[error("cannot parse {text:?} as a p-adic literal: {reason}")]
    Parse { text: String, reason: String },
}

/// Valuation of a p-adic number. `Infinite` is reserved for the exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// A prime together with the relative precision given to exact inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicContext {
    p: u64,
    default_prec: u32,
}

impl PadicContext {
    pub fn new(p: u64, default_prec: u32) -> Result<Self, PadicError> {
        if p < 3 || !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        if default_prec == 0 {
            return Err(PadicError::BadPrecision);
        }
        Ok(PadicContext { p, default_prec })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn default_prec(&self) -> u32 {
        self.default_prec
    }

    pub fn exact_zero(&self) -> PadicNumber {
        PadicNumber::exact_zero(self.p)
    }

    /// Embed an integer, carrying `default_prec` significant digits.
    pub fn int(&self, n: i64) -> PadicNumber {
        self.bigint(&BigInt::from(n))
    }

    pub fn bigint(&self, n: &BigInt) -> PadicNumber {
        PadicNumber::from_bigint(self.p, n, self.default_prec)
    }

    pub fn rational(&self, num: &BigInt, den: &BigInt) -> Result<PadicNumber, PadicError> {
        PadicNumber::from_rational(self.p, num, den, self.default_prec)
    }

    pub fn parse(&self, text: &str) -> Result<PadicNumber, PadicError> {
        PadicNumber::parse(self.p, text, self.default_prec)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    ExactZero,
    /// `rel == 0` encodes O(p^val): no digit known, valuation only bounded
    /// below. In that case `unit` is zero. Otherwise `unit` lies in
    /// `[1, p^rel)` and is coprime to p.
    Approx { val: i64, unit: BigUint, rel: u32 },
}

/// An element of Q_p with tracked precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    p: u64,
    repr: Repr,
}

impl PadicNumber {
    pub fn exact_zero(p: u64) -> Self {
        PadicNumber {
            p,
            repr: Repr::ExactZero,
        }
    }

    /// The unknown `O(p^abs_prec)`: zero at this precision, with no claim
    /// about lower digits.
    pub fn zero_to_precision(p: u64, abs_prec: i64) -> Self {
        PadicNumber {
            p,
            repr: Repr::Approx {
                val: abs_prec,
                unit: BigUint::zero(),
                rel: 0,
            },
        }
    }

    pub fn from_bigint(p: u64, n: &BigInt, rel_prec: u32) -> Self {
        if n.is_zero() {
            return Self::exact_zero(p);
        }
        let v = bigint_valuation(p, n);
        Self::from_scaled(p, v, &(n / pow_bigint(p, v as u64)), rel_prec as i64 + v)
    }

    /// `num / den` with `den` nonzero; the denominator may carry powers of p.
    pub fn from_rational(
        p: u64,
        num: &BigInt,
        den: &BigInt,
        rel_prec: u32,
    ) -> Result<Self, PadicError> {
        if den.is_zero() {
            return Err(PadicError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::exact_zero(p));
        }
        let vn = bigint_valuation(p, num);
        let vd = bigint_valuation(p, den);
        let val = vn - vd;
        let un = num / pow_bigint(p, vn as u64);
        let ud = den / pow_bigint(p, vd as u64);
        let modulus = pow_biguint(p, rel_prec);
        let inv = mod_inverse(&ud.mod_floor(&BigInt::from(modulus.clone())).to_biguint().unwrap(), &modulus)
            .expect("denominator unit is invertible");
        let u = (un * BigInt::from(inv)).mod_floor(&BigInt::from(modulus));
        Ok(PadicNumber {
            p,
            repr: Repr::Approx {
                val,
                unit: u.to_biguint().unwrap(),
                rel: rel_prec,
            },
        })
    }

    pub fn from_big_rational(p: u64, q: &BigRational, rel_prec: u32) -> Self {
        Self::from_rational(p, q.numer(), q.denom(), rel_prec)
            .expect("BigRational has a nonzero denominator")
    }

    /// Canonical constructor: `value * p^base_val` known modulo
    /// `p^(abs_prec - base_val)`. Strips p-powers out of `value` and reduces
    /// the unit into `[1, p^rel)`.
    fn from_scaled(p: u64, base_val: i64, value: &BigInt, abs_prec: i64) -> Self {
        let digits = abs_prec - base_val;
        if digits <= 0 {
            return Self::zero_to_precision(p, abs_prec);
        }
        let modulus = pow_bigint(p, digits as u64);
        let reduced = value.mod_floor(&modulus);
        if reduced.is_zero() {
            return Self::zero_to_precision(p, abs_prec);
        }
        let m = bigint_valuation(p, &reduced);
        let unit = (&reduced / pow_bigint(p, m as u64))
            .mod_floor(&pow_bigint(p, (digits - m) as u64));
        PadicNumber {
            p,
            repr: Repr::Approx {
                val: base_val + m,
                unit: unit.to_biguint().unwrap(),
                rel: (digits - m) as u32,
            },
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::ExactZero)
    }

    /// True when no nonzero digit is known: the exact zero or O(p^N).
    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::ExactZero => true,
            Repr::Approx { rel, .. } => *rel == 0,
        }
    }

    /// `Some(Finite(v))` when a leading digit is known, `Some(Infinite)` for
    /// the exact zero, `None` when the precision cannot decide.
    pub fn valuation(&self) -> Option<Valuation> {
        match &self.repr {
            Repr::ExactZero => Some(Valuation::Infinite),
            Repr::Approx { val, rel, .. } => {
                if *rel == 0 {
                    None
                } else {
                    Some(Valuation::Finite(*val))
                }
            }
        }
    }

    /// The known valuation, or an error when it is undetermined.
    pub fn known_valuation(&self) -> Result<Valuation, PadicError> {
        match &self.repr {
            Repr::ExactZero => Ok(Valuation::Infinite),
            Repr::Approx { val, rel, .. } => {
                if *rel == 0 {
                    Err(PadicError::UndeterminedValuation(*val))
                } else {
                    Ok(Valuation::Finite(*val))
                }
            }
        }
    }

    /// Absolute precision: digits are known below p^abs_prec. `None` means
    /// exact (infinite precision).
    pub fn abs_prec(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Approx { val, rel, .. } => Some(val + *rel as i64),
        }
    }

    pub fn rel_prec(&self) -> Option<u32> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Approx { rel, .. } => Some(*rel),
        }
    }

    /// The stored unit digits, for callers that need the raw residue.
    pub fn unit_part(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Approx { unit, rel, .. } if *rel > 0 => Some(unit),
            _ => None,
        }
    }

    fn assert_same_prime(&self, other: &PadicNumber) {
        assert_eq!(
            self.p, other.p,
            "mixed primes in p-adic arithmetic: {} vs {}",
            self.p, other.p
        );
    }

    pub fn add(&self, rhs: &PadicNumber) -> PadicNumber {
        self.assert_same_prime(rhs);
        match (&self.repr, &rhs.repr) {
            (Repr::ExactZero, _) => rhs.clone(),
            (_, Repr::ExactZero) => self.clone(),
            (
                Repr::Approx {
                    val: v1,
                    unit: u1,
                    rel: r1,
                },
                Repr::Approx {
                    val: v2,
                    unit: u2,
                    rel: r2,
                },
            ) => {
                let abs = (v1 + *r1 as i64).min(v2 + *r2 as i64);
                let base = (*v1).min(*v2);
                let a = BigInt::from(u1.clone()) * pow_bigint(self.p, (v1 - base) as u64);
                let b = BigInt::from(u2.clone()) * pow_bigint(self.p, (v2 - base) as u64);
                PadicNumber::from_scaled(self.p, base, &(a + b), abs)
            }
        }
    }

    pub fn neg(&self) -> PadicNumber {
        match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::Approx { val, unit, rel } => {
                if *rel == 0 {
                    self.clone()
                } else {
                    let modulus = pow_biguint(self.p, *rel);
                    PadicNumber {
                        p: self.p,
                        repr: Repr::Approx {
                            val: *val,
                            unit: &modulus - unit,
                            rel: *rel,
                        },
                    }
                }
            }
        }
    }

    pub fn sub(&self, rhs: &PadicNumber) -> PadicNumber {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &PadicNumber) -> PadicNumber {
        self.assert_same_prime(rhs);
        match (&self.repr, &rhs.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => PadicNumber::exact_zero(self.p),
            (
                Repr::Approx {
                    val: v1,
                    unit: u1,
                    rel: r1,
                },
                Repr::Approx {
                    val: v2,
                    unit: u2,
                    rel: r2,
                },
            ) => {
                // O(p^A) * (w p^s + ...) stays inside O(p^(A+s)); two unknowns
                // multiply to O(p^(A+B)).
                let rel = (*r1).min(*r2);
                if rel == 0 {
                    return PadicNumber::zero_to_precision(self.p, v1 + v2);
                }
                let modulus = pow_biguint(self.p, rel);
                PadicNumber {
                    p: self.p,
                    repr: Repr::Approx {
                        val: v1 + v2,
                        unit: (u1 * u2) % &modulus,
                        rel,
                    },
                }
            }
        }
    }

    pub fn div(&self, rhs: &PadicNumber) -> Result<PadicNumber, PadicError> {
        self.assert_same_prime(rhs);
        let (v2, u2, r2) = match &rhs.repr {
            Repr::Approx { val, unit, rel } if *rel > 0 => (*val, unit, *rel),
            _ => return Err(PadicError::DivisionByZero),
        };
        match &self.repr {
            Repr::ExactZero => Ok(PadicNumber::exact_zero(self.p)),
            Repr::Approx {
                val: v1,
                unit: u1,
                rel: r1,
            } => {
                let rel = (*r1).min(r2);
                if rel == 0 {
                    return Ok(PadicNumber::zero_to_precision(self.p, v1 - v2));
                }
                let modulus = pow_biguint(self.p, rel);
                let inv = mod_inverse(&(u2 % &modulus), &modulus).expect("unit is invertible");
                Ok(PadicNumber {
                    p: self.p,
                    repr: Repr::Approx {
                        val: v1 - v2,
                        unit: (u1 * inv) % &modulus,
                        rel,
                    },
                })
            }
        }
    }

    pub fn inv(&self) -> Result<PadicNumber, PadicError> {
        match &self.repr {
            Repr::Approx { val, unit, rel } if *rel > 0 => {
                let modulus = pow_biguint(self.p, *rel);
                Ok(PadicNumber {
                    p: self.p,
                    repr: Repr::Approx {
                        val: -val,
                        unit: mod_inverse(unit, &modulus).expect("unit is invertible"),
                        rel: *rel,
                    },
                })
            }
            _ => Err(PadicError::DivisionByZero),
        }
    }

    /// Multiply by an exact integer. Exactness means the relative precision
    /// is preserved; only the valuation shifts by ν_p(k).
    pub fn mul_bigint(&self, k: &BigInt) -> PadicNumber {
        if k.is_zero() {
            return PadicNumber::exact_zero(self.p);
        }
        match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::Approx { val, unit, rel } => {
                let d = bigint_valuation(self.p, k);
                if *rel == 0 {
                    return PadicNumber::zero_to_precision(self.p, val + d);
                }
                let modulus = pow_bigint(self.p, *rel as u64);
                let ku = (k / pow_bigint(self.p, d as u64)).mod_floor(&modulus);
                PadicNumber {
                    p: self.p,
                    repr: Repr::Approx {
                        val: val + d,
                        unit: (BigInt::from(unit.clone()) * ku)
                            .mod_floor(&modulus)
                            .to_biguint()
                            .unwrap(),
                        rel: *rel,
                    },
                }
            }
        }
    }

    pub fn mul_int(&self, k: i64) -> PadicNumber {
        self.mul_bigint(&BigInt::from(k))
    }

    /// Divide by an exact nonzero integer. The relative precision is
    /// preserved; the absolute precision drops by ν_p(k), which is the whole
    /// precision charge of the division.
    pub fn div_bigint(&self, k: &BigInt) -> Result<PadicNumber, PadicError> {
        if k.is_zero() {
            return Err(PadicError::ZeroDenominator);
        }
        match &self.repr {
            Repr::ExactZero => Ok(self.clone()),
            Repr::Approx { val, unit, rel } => {
                let d = bigint_valuation(self.p, k);
                if *rel == 0 {
                    return Ok(PadicNumber::zero_to_precision(self.p, val - d));
                }
                let modulus = pow_bigint(self.p, *rel as u64);
                let ku = (k / pow_bigint(self.p, d as u64))
                    .mod_floor(&modulus)
                    .to_biguint()
                    .unwrap();
                let inv = mod_inverse(&ku, &modulus.to_biguint().unwrap())
                    .expect("unit is invertible");
                Ok(PadicNumber {
                    p: self.p,
                    repr: Repr::Approx {
                        val: val - d,
                        unit: (unit * inv) % modulus.to_biguint().unwrap(),
                        rel: *rel,
                    },
                })
            }
        }
    }

    pub fn div_int(&self, k: i64) -> Result<PadicNumber, PadicError> {
        self.div_bigint(&BigInt::from(k))
    }

    /// Integer power. Negative exponents invert first and therefore require
    /// a known leading digit.
    pub fn pow(&self, e: i64) -> Result<PadicNumber, PadicError> {
        if e == 0 {
            return match &self.repr {
                Repr::Approx { rel, .. } if *rel > 0 => Ok(PadicNumber {
                    p: self.p,
                    repr: Repr::Approx {
                        val: 0,
                        unit: BigUint::one(),
                        rel: *rel,
                    },
                }),
                _ => Err(PadicError::DivisionByZero),
            };
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Equality to the joint tracked precision: the difference carries no
    /// known nonzero digit.
    pub fn agrees(&self, other: &PadicNumber) -> bool {
        self.sub(other).is_zero()
    }

    /// Forget digits below p^abs_prec. Exact zero truncates to O(p^abs_prec).
    pub fn truncate_abs(&self, abs_prec: i64) -> PadicNumber {
        match &self.repr {
            Repr::ExactZero => PadicNumber::zero_to_precision(self.p, abs_prec),
            Repr::Approx { val, unit, rel } => {
                let cur = val + *rel as i64;
                if cur <= abs_prec {
                    self.clone()
                } else {
                    PadicNumber::from_scaled(self.p, *val, &BigInt::from(unit.clone()), abs_prec)
                }
            }
        }
    }

    /// Parse the literal grammar: `0`, an integer, `a/b`, `u*p^v`, any of the
    /// non-zero forms followed by ` + O(p^N)`, or a bare `O(p^N)`.
    pub fn parse(p: u64, text: &str, default_rel: u32) -> Result<Self, PadicError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: &str| PadicError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        if compact == "0" {
            return Ok(Self::exact_zero(p));
        }

        let (value_part, cap) = if let Some(rest) = compact.strip_prefix("O(") {
            let n = parse_big_oh(p, rest).ok_or_else(|| err("malformed O(p^N) term"))?;
            return Ok(Self::zero_to_precision(p, n));
        } else if let Some(idx) = compact.find("+O(") {
            let n = parse_big_oh(p, &compact[idx + 3..]).ok_or_else(|| err("malformed O(p^N) term"))?;
            (&compact[..idx], Some(n))
        } else {
            (compact.as_str(), None)
        };

        let (num, den) = if let Some((u, pw)) = value_part.split_once('*') {
            let (base, exp) = pw
                .split_once('^')
                .ok_or_else(|| err("expected u*p^v after '*'"))?;
            if base.parse::<u64>() != Ok(p) {
                return Err(err("power base does not match the context prime"));
            }
            let u: BigInt = u.parse().map_err(|_| err("bad unit integer"))?;
            let v: i64 = exp.parse().map_err(|_| err("bad exponent"))?;
            if v >= 0 {
                (u * pow_bigint(p, v as u64), BigInt::one())
            } else {
                (u, pow_bigint(p, v.unsigned_abs()))
            }
        } else if let Some((a, b)) = value_part.split_once('/') {
            let a: BigInt = a.parse().map_err(|_| err("bad numerator"))?;
            let b: BigInt = b.parse().map_err(|_| err("bad denominator"))?;
            if b.is_zero() {
                return Err(err("zero denominator"));
            }
            (a, b)
        } else {
            let a: BigInt = value_part.parse().map_err(|_| err("bad integer"))?;
            (a, BigInt::one())
        };

        if num.is_zero() {
            return Ok(match cap {
                Some(n) => Self::zero_to_precision(p, n),
                None => Self::exact_zero(p),
            });
        }
        match cap {
            None => Self::from_rational(p, &num, &den, default_rel),
            Some(n) => {
                let val = bigint_valuation(p, &num) - bigint_valuation(p, &den);
                if n - val <= 0 {
                    return Ok(Self::zero_to_precision(p, n));
                }
                let x = Self::from_rational(p, &num, &den, (n - val) as u32)?;
                Ok(x.truncate_abs(n))
            }
        }
    }
}

/// Parses the tail of `O(p^N)` starting just after the opening parenthesis.
fn parse_big_oh(p: u64, rest: &str) -> Option<i64> {
    let inner = rest.strip_suffix(')')?;
    let (base, exp) = inner.split_once('^')?;
    if base.parse::<u64>() != Ok(p) {
        return None;
    }
    exp.parse().ok()
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::ExactZero => write!(f, "0"),
            Repr::Approx { val, unit, rel } => {
                let abs = val + *rel as i64;
                if *rel == 0 {
                    write!(f, "O({}^{})", self.p, abs)
                } else if *val >= 0 {
                    let whole = BigInt::from(unit.clone()) * pow_bigint(self.p, *val as u64);
                    write!(f, "{} + O({}^{})", whole, self.p, abs)
                } else {
                    write!(f, "{}*{}^{} + O({}^{})", unit, self.p, val, self.p, abs)
                }
            }
        }
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "padic({})", self)
    }
}

impl std::ops::Add for &PadicNumber {
    type Output = PadicNumber;
    fn add(self, rhs: &PadicNumber) -> PadicNumber {
        PadicNumber::add(self, rhs)
    }
}

impl std::ops::Sub for &PadicNumber {
    type Output = PadicNumber;
    fn sub(self, rhs: &PadicNumber) -> PadicNumber {
        PadicNumber::sub(self, rhs)
    }
}

impl std::ops::Mul for &PadicNumber {
    type Output = PadicNumber;
    fn mul(self, rhs: &PadicNumber) -> PadicNumber {
        PadicNumber::mul(self, rhs)
    }
}

impl std::ops::Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        PadicNumber::neg(self)
    }
}

/// A branch of the p-adic logarithm, determined by the chosen value of
/// log(p). The Iwasawa branch sets it to exact zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogBranch {
    constant: PadicNumber,
}

impl LogBranch {
    pub fn new(constant: PadicNumber) -> Self {
        LogBranch { constant }
    }

    pub fn iwasawa(p: u64) -> Self {
        LogBranch {
            constant: PadicNumber::exact_zero(p),
        }
    }

    pub fn constant(&self) -> &PadicNumber {
        &self.constant
    }
}

/// Teichmüller lift: the unique (p-1)-st root of unity congruent to `z`
/// modulo p, to `target_prec` absolute digits. Computed by Newton iteration
/// on x^(p-1) - 1 with doubling precision.
pub fn teichmuller(z: &PadicNumber, target_prec: u32) -> Result<PadicNumber, PadicError> {
    if target_prec == 0 {
        return Err(PadicError::BadPrecision);
    }
    if z.is_exact_zero() {
        return Err(PadicError::NotAUnit);
    }
    match z.known_valuation()? {
        Valuation::Finite(0) => {}
        _ => return Err(PadicError::NotAUnit),
    }
    let p = z.prime();
    let a0 = z.unit_part().unwrap() % BigUint::from(p);
    let lift = teichmuller_lift(p, &a0, target_prec);
    Ok(PadicNumber {
        p,
        repr: Repr::Approx {
            val: 0,
            unit: lift,
            rel: target_prec,
        },
    })
}

fn teichmuller_lift(p: u64, a0: &BigUint, target: u32) -> BigUint {
    let pb = BigUint::from(p);
    let mut x = a0.clone();
    let mut prec = 1u32;
    while prec < target {
        prec = (2 * prec).min(target);
        let m = pow_biguint(p, prec);
        // Newton step x <- x - (x^(p-1) - 1) / ((p-1) x^(p-2)) mod p^prec.
        let f = (x.modpow(&(&pb - 1u32), &m) + &m - BigUint::one()) % &m;
        let fp = (x.modpow(&(&pb - 2u32), &m) * (&pb - 1u32)) % &m;
        let step = (f * mod_inverse(&fp, &m).expect("derivative is a unit")) % &m;
        x = (&x + &m - step) % &m;
    }
    x
}

/// Branch-dependent p-adic logarithm:
/// `plog(z) = ν_p(z) * branch + log(<z>)` where `<z> = z / (p^ν ω(z))` is the
/// principal-unit part and the series `log(1+x) = Σ (-1)^(k+1) x^k / k` is
/// truncated once every remaining term is below the target precision.
pub fn plog(z: &PadicNumber, branch: &LogBranch) -> Result<PadicNumber, PadicError> {
    assert_eq!(
        z.prime(),
        branch.constant().prime(),
        "branch constant and argument use different primes"
    );
    if z.is_zero() {
        return Err(PadicError::LogOfZero);
    }
    let p = z.prime();
    let v = match z.known_valuation()? {
        Valuation::Finite(v) => v,
        Valuation::Infinite => return Err(PadicError::LogOfZero),
    };
    let r = z.rel_prec().unwrap();
    let modulus = pow_biguint(p, r);
    let omega = teichmuller_lift(p, &(z.unit_part().unwrap() % BigUint::from(p)), r);
    let principal = (z.unit_part().unwrap()
        * mod_inverse(&omega, &modulus).expect("Teichmüller lift is a unit"))
        % &modulus;
    // x = <z> - 1, with ν(x) >= 1; known to absolute precision r.
    let x = PadicNumber::from_scaled(
        p,
        0,
        &(BigInt::from(principal) - BigInt::one()),
        r as i64,
    );
    let series = log1p_series(&x, r as i64);
    Ok(branch.constant().mul_int(v).add(&series))
}

/// Σ (-1)^(k+1) x^k / k for ν_p(x) >= 1, truncated at absolute precision
/// `target`. Terms are kept while k·ν(x) - floor(log_p k) < target; beyond
/// that every remaining term has valuation at least `target`. This bound
/// needs p >= 3 so that the term valuations are nondecreasing.
fn log1p_series(x: &PadicNumber, target: i64) -> PadicNumber {
    if x.is_zero() {
        return x.clone();
    }
    let p = x.prime();
    let m = match x.valuation() {
        Some(Valuation::Finite(m)) => m,
        _ => unreachable!("nonzero series argument"),
    };
    debug_assert!(m >= 1, "log series needs a principal unit");
    let mut sum = PadicNumber::exact_zero(p);
    let mut power = x.clone();
    let mut k: i64 = 1;
    while k * m - ilog(p, k) < target {
        let term = power.div_int(k).expect("k is nonzero");
        sum = if k % 2 == 1 {
            sum.add(&term)
        } else {
            sum.sub(&term)
        };
        power = power.mul(x);
        k += 1;
    }
    if sum.is_exact_zero() {
        // Every term was truncated away; the tail bound still applies.
        PadicNumber::zero_to_precision(p, target)
    } else {
        sum
    }
}

/// floor(log_p(k)) for k >= 1.
fn ilog(p: u64, k: i64) -> i64 {
    let mut e = 0;
    let mut acc = p as i128;
    while acc <= k as i128 {
        e += 1;
        acc *= p as i128;
    }
    e
}

pub(crate) fn pow_bigint(p: u64, e: u64) -> BigInt {
    BigInt::from(p).pow(e as u32)
}

pub(crate) fn pow_biguint(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// ν_p of a nonzero integer.
pub(crate) fn bigint_valuation(p: u64, n: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

/// ν_p of a rational; `None` for zero.
pub fn rational_valuation(p: u64, q: &BigRational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(bigint_valuation(p, q.numer()) - bigint_valuation(p, q.denom()))
}

pub(crate) fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(&m).to_biguint().unwrap())
}

/// Deterministic Miller-Rabin for u64 inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicContext {
        PadicContext::new(5, 10).unwrap()
    }

    #[test]
    fn context_rejects_bad_parameters() {
        assert_eq!(PadicContext::new(4, 10), Err(PadicError::NotPrime(4)));
        assert_eq!(PadicContext::new(2, 10), Err(PadicError::NotPrime(2)));
        assert_eq!(PadicContext::new(5, 0), Err(PadicError::BadPrecision));
        assert!(PadicContext::new(1000003, 4).is_ok());
    }

    #[test]
    fn valuations_of_embedded_integers() {
        let c = ctx();
        assert_eq!(c.int(50).valuation(), Some(Valuation::Finite(2)));
        assert_eq!(c.int(125).valuation(), Some(Valuation::Finite(3)));
        assert_eq!(c.int(6).valuation(), Some(Valuation::Finite(0)));
        assert_eq!(c.int(0).valuation(), Some(Valuation::Infinite));
        assert_eq!(c.int(-25).valuation(), Some(Valuation::Finite(2)));
    }

    #[test]
    fn addition_can_gain_valuation() {
        let c = ctx();
        let s = c.int(2).add(&c.int(3));
        assert_eq!(s.valuation(), Some(Valuation::Finite(1)));
        assert!(s.agrees(&c.int(5)));
    }

    #[test]
    fn multiplication_adds_valuations() {
        let c = ctx();
        let s = c.int(5).mul(&c.int(5));
        assert_eq!(s.valuation(), Some(Valuation::Finite(2)));
        let q = c.int(1).div(&c.int(5)).unwrap();
        assert_eq!(q.valuation(), Some(Valuation::Finite(-1)));
    }

    #[test]
    fn division_by_anything_zeroish_fails() {
        let c = ctx();
        assert_eq!(
            c.int(3).div(&c.exact_zero()),
            Err(PadicError::DivisionByZero)
        );
        let fuzzy = PadicNumber::zero_to_precision(5, 4);
        assert_eq!(c.int(3).div(&fuzzy), Err(PadicError::DivisionByZero));
    }

    #[test]
    fn precision_follows_the_weaker_operand() {
        let a = PadicNumber::from_bigint(5, &BigInt::from(7), 3);
        let b = PadicNumber::from_bigint(5, &BigInt::from(11), 8);
        assert_eq!(a.add(&b).abs_prec(), Some(3));
        assert_eq!(a.mul(&b).rel_prec(), Some(3));
        // Cancellation gains valuation but the absolute precision stays put.
        let d = a.sub(&PadicNumber::from_bigint(5, &BigInt::from(7), 3));
        assert!(d.is_zero());
        assert_eq!(d.abs_prec(), Some(3));
    }

    #[test]
    fn exact_zero_is_the_additive_identity() {
        let c = ctx();
        let x = c.int(42);
        assert_eq!(x.add(&c.exact_zero()), x);
        assert!(c.exact_zero().add(&c.exact_zero()).is_exact_zero());
        assert!(c.exact_zero().mul(&x).is_exact_zero());
    }

    #[test]
    fn exact_integer_scaling_keeps_relative_precision() {
        let c = ctx();
        let x = c.int(7);
        let y = x.mul_int(50);
        assert_eq!(y.rel_prec(), Some(10));
        assert_eq!(y.valuation(), Some(Valuation::Finite(2)));
        let z = y.div_int(50).unwrap();
        assert!(z.agrees(&x));
        assert_eq!(z.abs_prec(), Some(10));
    }

    #[test]
    fn teichmuller_of_two_mod_125() {
        let c = PadicContext::new(5, 3).unwrap();
        let w = teichmuller(&c.int(2), 3).unwrap();
        assert_eq!(w.unit_part().unwrap(), &BigUint::from(57u32));
        // ω(1) = 1 at any precision.
        let one = teichmuller(&c.int(1), 7).unwrap();
        assert!(one.agrees(&c.int(1)));
    }

    #[test]
    fn teichmuller_rejects_non_units() {
        let c = ctx();
        assert_eq!(teichmuller(&c.int(5), 3), Err(PadicError::NotAUnit));
        assert_eq!(teichmuller(&c.int(0), 3), Err(PadicError::NotAUnit));
    }

    #[test]
    fn teichmuller_is_a_torsion_point() {
        let c = ctx();
        let w = teichmuller(&c.int(3), 10).unwrap();
        assert!(w.pow(4).unwrap().agrees(&c.int(1)));
    }

    #[test]
    fn plog_of_six_iwasawa() {
        let c = PadicContext::new(5, 3).unwrap();
        let l = plog(&c.int(6), &LogBranch::iwasawa(5)).unwrap();
        assert_eq!(l.to_string(), "55 + O(5^3)");
    }

    #[test]
    fn plog_of_one_and_p_powers() {
        let c = ctx();
        let iw = LogBranch::iwasawa(5);
        assert!(plog(&c.int(1), &iw).unwrap().is_zero());
        assert!(plog(&c.int(125), &iw).unwrap().is_zero());
        let ell = LogBranch::new(c.int(17));
        assert!(plog(&c.int(5), &ell).unwrap().agrees(&c.int(17)));
    }

    #[test]
    fn plog_rejects_zeroish_input() {
        let c = ctx();
        let iw = LogBranch::iwasawa(5);
        assert_eq!(plog(&c.exact_zero(), &iw), Err(PadicError::LogOfZero));
        assert_eq!(
            plog(&PadicNumber::zero_to_precision(5, 2), &iw),
            Err(PadicError::LogOfZero)
        );
    }

    #[test]
    fn branch_shift_law() {
        let c = ctx();
        let z = c.int(2).mul_int(125);
        let l0 = plog(&z, &LogBranch::iwasawa(5)).unwrap();
        let l17 = plog(&z, &LogBranch::new(c.int(17))).unwrap();
        assert!(l17.sub(&l0).agrees(&c.int(17).mul_int(3)));
    }

    #[test]
    fn rendering_matches_the_literal_grammar() {
        let c = ctx();
        assert_eq!(c.exact_zero().to_string(), "0");
        assert_eq!(PadicNumber::zero_to_precision(5, 3).to_string(), "O(5^3)");
        let x = PadicNumber::from_bigint(5, &BigInt::from(55), 2);
        assert_eq!(x.to_string(), "55 + O(5^3)");
        let y = PadicNumber::from_rational(5, &BigInt::from(2), &BigInt::from(5), 5).unwrap();
        assert_eq!(y.to_string(), "2*5^-1 + O(5^4)");
    }

    #[test]
    fn parse_round_trips() {
        for text in ["55 + O(5^3)", "2*5^-1 + O(5^4)", "0", "O(5^-2)", "125 + O(5^9)"] {
            let x = PadicNumber::parse(5, text, 10).unwrap();
            assert_eq!(x.to_string(), text, "round trip of {text}");
        }
        let r = PadicNumber::parse(5, "7/3", 4).unwrap();
        assert!(r.mul_int(3).agrees(&PadicNumber::from_bigint(5, &BigInt::from(7), 4)));
        let neg = PadicNumber::parse(5, "-70 + O(5^3)", 10).unwrap();
        assert_eq!(neg.to_string(), "55 + O(5^3)");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(PadicNumber::parse(5, "", 4).is_err());
        assert!(PadicNumber::parse(5, "x+1", 4).is_err());
        assert!(PadicNumber::parse(5, "3*7^2 + O(7^5)", 4).is_err());
        assert!(PadicNumber::parse(5, "1/0", 4).is_err());
        assert!(PadicNumber::parse(5, "O(5^)", 4).is_err());
    }

    #[test]
    fn truncation_is_consistent_with_recomputation() {
        let c3 = PadicContext::new(5, 3).unwrap();
        let c9 = PadicContext::new(5, 9).unwrap();
        let iw = LogBranch::iwasawa(5);
        let lo = plog(&c3.int(6), &iw).unwrap();
        let hi = plog(&c9.int(6), &iw).unwrap();
        assert!(hi.truncate_abs(lo.abs_prec().unwrap()).agrees(&lo));
    }
}
