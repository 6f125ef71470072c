//! Exact scalars: rationals, optionally adjoined with the square root of a
//! square-free integer `d > 1`.
//!
//! A [`Scalar`] is `rat + irr * sqrt(root)`. Rational values always carry
//! `root == 0`, so equality is structural. Mixing two irrational values with
//! different roots is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseScalarError;

/// Number field the scalars of a system live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// `Q(sqrt(d))` for a square-free `d > 1`.
    Quadratic(u32),
}

impl Field {
    pub fn quadratic(d: u32) -> Result<Self, ParseScalarError> {
        if d < 2 || !is_square_free(d) {
            return Err(ParseScalarError::BadRoot(d));
        }
        Ok(Field::Quadratic(d))
    }

    pub fn root(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Quadratic(d) => d,
        }
    }

    /// Whether `x` lies in this field.
    pub fn contains(self, x: &Scalar) -> bool {
        x.root == 0 || x.root == self.root()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Quadratic(d) => write!(f, "quadratic d={d}"),
        }
    }
}

pub(crate) fn is_square_free(d: u32) -> bool {
    let mut p = 2u32;
    while p.saturating_mul(p) <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rat: BigRational,
    irr: BigRational,
    root: u32,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { rat: BigRational::zero(), irr: BigRational::zero(), root: 0 }
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    pub fn int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`. Panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar { rat: r, irr: BigRational::zero(), root: 0 }
    }

    /// `rat + irr * sqrt(root)`.
    pub fn quadratic(rat: BigRational, irr: BigRational, root: u32) -> Self {
        assert!(root >= 2 && is_square_free(root), "root must be square-free and > 1");
        Scalar { rat, irr, root }.normalized()
    }

    /// `sqrt(d)` for a square-free `d > 1`.
    pub fn sqrt(d: u32) -> Self {
        Scalar::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    /// The golden ratio `(1 + sqrt 5) / 2`.
    pub fn golden() -> Self {
        (Scalar::one() + Scalar::sqrt(5)) / Scalar::int(2)
    }

    fn normalized(mut self) -> Self {
        if self.irr.is_zero() {
            self.root = 0;
        }
        self
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.irr
    }

    /// 0 for rational values.
    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        let sa = sign(&self.rat);
        let sb = sign(&self.irr);
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare rat^2 with irr^2 * root
        let lhs = &self.rat * &self.rat;
        let rhs = &self.irr * &self.irr * BigRational::from_integer(BigInt::from(self.root));
        if lhs > rhs {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        if self.irr.is_zero() {
            return Scalar::from_rational(self.rat.recip());
        }
        let d = BigRational::from_integer(BigInt::from(self.root));
        let norm = &self.rat * &self.rat - &self.irr * &self.irr * d;
        Scalar { rat: &self.rat / &norm, irr: -(&self.irr / &norm), root: self.root }.normalized()
    }

    /// Floating approximation, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let r = ratio_to_f64(&self.rat);
        if self.irr.is_zero() {
            r
        } else {
            r + ratio_to_f64(&self.irr) * f64::from(self.root).sqrt()
        }
    }

    fn join_root(a: u32, b: u32) -> u32 {
        match (a, b) {
            (0, r) | (r, 0) => r,
            (r, s) if r == s => r,
            (r, s) => panic!("mixing scalars from Q(sqrt {r}) and Q(sqrt {s})"),
        }
    }
}

fn sign(r: &BigRational) -> Ordering {
    if r.is_positive() {
        Ordering::Greater
    } else if r.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (self - other).signum()
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let root = Scalar::join_root(self.root, rhs.root);
        Scalar { rat: &self.rat + &rhs.rat, irr: &self.irr + &rhs.irr, root }.normalized()
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let root = Scalar::join_root(self.root, rhs.root);
        Scalar { rat: &self.rat - &rhs.rat, irr: &self.irr - &rhs.irr, root }.normalized()
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let root = Scalar::join_root(self.root, rhs.root);
        let d = BigRational::from_integer(BigInt::from(root));
        let rat = &self.rat * &rhs.rat + &self.irr * &rhs.irr * d;
        let irr = &self.rat * &rhs.irr + &self.irr * &rhs.rat;
        Scalar { rat, irr, root }.normalized()
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.recip()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -self.rat, irr: -self.irr, root: self.root }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

fn write_ratio(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text: `p/q`, `r/s*sqrt(d)`, or `p/q + r/s*sqrt(d)`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            return write_ratio(f, &self.rat);
        }
        let neg = self.irr.is_negative();
        let mag = self.irr.abs();
        if !self.rat.is_zero() {
            write_ratio(f, &self.rat)?;
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        } else if neg {
            write!(f, "-")?;
        }
        write_ratio(f, &mag)?;
        write!(f, "*sqrt({})", self.root)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_ratio(s: &str) -> Result<BigRational, ParseScalarError> {
    let s = s.trim();
    let bad = || ParseScalarError::Malformed(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ParseScalarError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(num, den))
}

fn parse_irrational(s: &str) -> Result<(BigRational, u32), ParseScalarError> {
    let s = s.trim();
    let bad = || ParseScalarError::Malformed(s.to_string());
    let idx = s.find("sqrt(").ok_or_else(bad)?;
    let coeff = s[..idx].trim().trim_end_matches('*').trim();
    let rest = s[idx + 5..].strip_suffix(')').ok_or_else(bad)?;
    let root: u32 = rest.trim().parse().map_err(|_| bad())?;
    if root < 2 || !is_square_free(root) {
        return Err(ParseScalarError::BadRoot(root));
    }
    let coeff = match coeff {
        "" => BigRational::one(),
        "-" => -BigRational::one(),
        c => parse_ratio(c)?,
    };
    Ok((coeff, root))
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseScalarError::Malformed(String::new()));
        }
        if !s.contains("sqrt") {
            return Ok(Scalar::from_rational(parse_ratio(s)?));
        }
        // split at a binary +/- that is not the leading sign
        let bytes = s.as_bytes();
        let split = (1..bytes.len()).find(|&i| {
            (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] == b' '
        });
        match split {
            None => {
                let (c, root) = parse_irrational(s)?;
                Ok(Scalar::quadratic(BigRational::zero(), c, root))
            }
            Some(i) => {
                let rat = parse_ratio(&s[..i])?;
                let (c, root) = parse_irrational(&s[i + 1..])?;
                let c = if bytes[i] == b'-' { -c } else { c };
                Ok(Scalar::quadratic(rat, c, root))
            }
        }
    }
}
