//! The group `(ℚ/ℤ)²` as an exact model of the points of an elliptic curve.
//!
//! Coordinates are kept reduced into `[0, 1)` in lowest terms, so equality,
//! ordering and hashing are structural.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Coord = Ratio<i64>;

fn reduce(r: Coord) -> Coord {
    r - r.floor()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    x: Coord,
    y: Coord,
}

impl TorusPoint {
    pub fn new(x: Coord, y: Coord) -> Self {
        TorusPoint {
            x: reduce(x),
            y: reduce(y),
        }
    }

    /// The point `(a/b, c/d)`. Panics on a zero denominator.
    pub fn from_fractions(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(Coord::new(a, b), Coord::new(c, d))
    }

    pub fn zero() -> Self {
        TorusPoint {
            x: Coord::zero(),
            y: Coord::zero(),
        }
    }

    pub fn x(&self) -> Coord {
        self.x
    }

    pub fn y(&self) -> Coord {
        self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn smul(&self, k: i64) -> Self {
        let k = Coord::from_integer(k);
        Self::new(self.x * k, self.y * k)
    }

    /// Smallest `d ≥ 1` with `d·p = 0`.
    pub fn order(&self) -> u64 {
        let (a, b) = (*self.x.denom() as u64, *self.y.denom() as u64);
        a / gcd(a, b) * b
    }

    pub fn is_torsion(&self, d: u64) -> bool {
        d > 0 && d.is_multiple_of(self.order())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Add for TorusPoint {
    type Output = TorusPoint;
    fn add(self, o: TorusPoint) -> TorusPoint {
        TorusPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for TorusPoint {
    type Output = TorusPoint;
    fn sub(self, o: TorusPoint) -> TorusPoint {
        TorusPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for TorusPoint {
    type Output = TorusPoint;
    fn neg(self) -> TorusPoint {
        TorusPoint::new(-self.x, -self.y)
    }
}

impl std::iter::Sum for TorusPoint {
    fn sum<I: Iterator<Item = TorusPoint>>(iter: I) -> TorusPoint {
        iter.fold(TorusPoint::zero(), |a, b| a + b)
    }
}

pub fn add(a: TorusPoint, b: TorusPoint) -> TorusPoint {
    a + b
}

pub fn neg(a: TorusPoint) -> TorusPoint {
    -a
}

pub fn smul(k: i64, a: TorusPoint) -> TorusPoint {
    a.smul(k)
}

/// All `d²` points of order dividing `d`, sorted.
pub fn torsion_points(d: i64) -> Result<Vec<TorusPoint>> {
    if d <= 0 {
        return Err(Error::Malformed(format!("torsion order must be positive, got {d}")));
    }
    let mut out = Vec::with_capacity((d * d) as usize);
    for a in 0..d {
        for b in 0..d {
            out.push(TorusPoint::from_fractions(a, d, b, d));
        }
    }
    out.sort();
    Ok(out)
}

/// The `d`-division point `y/d + choice`, where `y/d` divides each
/// canonical coordinate by `d`. Every solution of `d·x = y` has this form
/// for exactly one `d`-torsion `choice`.
pub fn divide(y: TorusPoint, d: i64, choice: TorusPoint) -> Result<TorusPoint> {
    if d <= 0 {
        return Err(Error::Malformed(format!("division order must be positive, got {d}")));
    }
    if !choice.is_torsion(d as u64) {
        return Err(Error::InvalidTorsion(choice.to_string(), d as u64));
    }
    let d = Coord::from_integer(d);
    Ok(TorusPoint::new(y.x / d, y.y / d) + choice)
}

fn format_coord(r: &Coord) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_coord(s: &str) -> Result<Coord> {
    let bad = || Error::Malformed(format!("cannot parse `{s}` as a rational number"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Coord::new(num, den))
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", format_coord(&self.x), format_coord(&self.y))
    }
}

/// Parses `p/q,r/s`; parentheses and a bare integer coordinate are accepted.
impl FromStr for TorusPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Malformed(format!("expected `x,y`, got `{s}`")))?;
        Ok(TorusPoint::new(parse_coord(a)?, parse_coord(b)?))
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        [format_coord(&self.x), format_coord(&self.y)].serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TorusPoint {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[String; 2]>::deserialize(de)?;
        let parse = |s: &str| parse_coord(s).map_err(serde::de::Error::custom);
        Ok(TorusPoint::new(parse(&a)?, parse(&b)?))
    }
}
