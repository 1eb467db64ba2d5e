use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::num::{fmt_rational, parse_rational, Turn, Q};

/// Tags of the ten registered hyperfields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    R,
    C,
    Triangle,
    P,
    S,
    Phi,
    K,
    TR,
    TC,
    TT,
}

/// Shape of the value space a field lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    /// Values on the real line (signed or nonnegative).
    Line,
    /// Zero plus angles on the unit circle.
    Circle,
    /// Zero plus the punctured complex plane.
    Plane,
}

impl Field {
    pub const ALL: [Field; 10] = [
        Field::R,
        Field::C,
        Field::Triangle,
        Field::P,
        Field::S,
        Field::Phi,
        Field::K,
        Field::TR,
        Field::TC,
        Field::TT,
    ];

    /// The fields with an exact hyperaddition.
    pub const HYPER: [Field; 8] = [
        Field::S,
        Field::K,
        Field::TR,
        Field::TT,
        Field::Triangle,
        Field::P,
        Field::Phi,
        Field::TC,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Field::R => "R",
            Field::C => "C",
            Field::Triangle => "TRI",
            Field::P => "P",
            Field::S => "S",
            Field::Phi => "PHI",
            Field::K => "K",
            Field::TR => "TR",
            Field::TC => "TC",
            Field::TT => "TT",
        }
    }

    pub fn geometry(self) -> Geometry {
        match self {
            Field::R | Field::S | Field::K | Field::TR | Field::TT | Field::Triangle => {
                Geometry::Line
            }
            Field::P | Field::Phi => Geometry::Circle,
            Field::C | Field::TC => Geometry::Plane,
        }
    }

    /// Nonzero elements all have modulus one.
    pub fn unit_modulus(self) -> bool {
        matches!(self, Field::S | Field::K | Field::P | Field::Phi)
    }

    /// Elements are nonnegative reals (angle always zero).
    pub fn nonnegative(self) -> bool {
        matches!(self, Field::K | Field::Triangle | Field::TT)
    }

    /// Elements are signed reals (angle zero or one half).
    pub fn signed_real(self) -> bool {
        matches!(self, Field::R | Field::S | Field::TR)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Field::S | Field::K)
    }

    /// Whether `hypersum` is available (everything except the classical fields).
    pub fn has_hypersum(self) -> bool {
        !matches!(self, Field::R | Field::C)
    }

    /// Whether the field is doubly distributive.
    pub fn doubly_distributive(self) -> bool {
        matches!(self, Field::S | Field::K | Field::TR | Field::TT | Field::R | Field::C)
    }

    /// Whether negation is the identity map.
    pub fn characteristic_two(self) -> bool {
        self.nonnegative()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let up = s.trim().to_ascii_uppercase();
        Ok(match up.as_str() {
            "R" => Field::R,
            "C" => Field::C,
            "TRI" | "TRIANGLE" => Field::Triangle,
            "P" => Field::P,
            "S" => Field::S,
            "PHI" => Field::Phi,
            "K" => Field::K,
            "TR" => Field::TR,
            "TC" => Field::TC,
            "TT" | "TTRIANGLE" => Field::TT,
            _ => return Err(Error::Parse(format!("unknown hyperfield `{s}`"))),
        })
    }
}

/// An element of a registered hyperfield, stored in polar form.
///
/// Zero has modulus 0 and angle 0. A nonzero element has a positive
/// rational modulus and an angle in turns.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    field: Field,
    modulus: Q,
    angle: Turn,
}

impl Element {
    /// Builds an element after checking it belongs to `field`.
    pub fn polar(field: Field, modulus: Q, angle: Turn) -> Result<Self, Error> {
        if modulus.is_negative() {
            return Err(Error::InvalidElement(format!("{field}: negative modulus")));
        }
        if modulus.is_zero() {
            return Ok(Element::zero(field));
        }
        if field.unit_modulus() && !modulus.is_one() {
            return Err(Error::InvalidElement(format!(
                "{field}: nonzero elements have modulus 1, got {}",
                fmt_rational(&modulus)
            )));
        }
        if field.nonnegative() && !angle.is_zero() {
            return Err(Error::InvalidElement(format!("{field}: elements are nonnegative")));
        }
        if field.signed_real() && !(angle.is_zero() || angle == Turn::half()) {
            return Err(Error::InvalidElement(format!("{field}: elements are real")));
        }
        Ok(Element { field, modulus, angle })
    }

    pub fn zero(field: Field) -> Self {
        Element { field, modulus: Q::zero(), angle: Turn::zero() }
    }

    pub fn one(field: Field) -> Self {
        Element { field, modulus: Q::one(), angle: Turn::zero() }
    }

    /// A real value in a line field; negative values are rejected in the nonnegative fields.
    pub fn real(field: Field, x: Q) -> Result<Self, Error> {
        if x.is_negative() {
            Element::polar(field, -x, Turn::half())
        } else {
            Element::polar(field, x, Turn::zero())
        }
    }

    /// A sign in S: `1`, `0` or `-1`.
    pub fn sign(s: i8) -> Self {
        match s.signum() {
            0 => Element::zero(Field::S),
            1 => Element::one(Field::S),
            _ => Element { field: Field::S, modulus: Q::one(), angle: Turn::half() },
        }
    }

    /// A unit with the given angle in P, Phi, C or TC.
    pub fn unit(field: Field, angle: Turn) -> Result<Self, Error> {
        Element::polar(field, Q::one(), angle)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn modulus(&self) -> &Q {
        &self.modulus
    }

    pub fn angle(&self) -> &Turn {
        &self.angle
    }

    pub fn is_zero(&self) -> bool {
        self.modulus.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.modulus.is_one() && self.angle.is_zero()
    }

    /// Signed real value of an element of a line field.
    pub fn real_value(&self) -> Q {
        if self.angle.is_zero() {
            self.modulus.clone()
        } else {
            -self.modulus.clone()
        }
    }

    /// `+1`, `0` or `-1` for elements of a line field.
    pub fn sign_value(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.angle.is_zero() {
            1
        } else {
            -1
        }
    }

    /// The same payload read in another field, validated.
    pub fn relabel(&self, field: Field) -> Result<Self, Error> {
        Element::polar(field, self.modulus.clone(), self.angle.clone())
    }

    fn check_same(&self, other: &Element) -> Result<(), Error> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Element) -> Result<Element, Error> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Element::zero(self.field));
        }
        Ok(Element {
            field: self.field,
            modulus: &self.modulus * &other.modulus,
            angle: self.angle.add(&other.angle),
        })
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Element> {
        if self.is_zero() {
            return None;
        }
        Some(Element { field: self.field, modulus: self.modulus.recip(), angle: self.angle.neg() })
    }

    pub fn div(&self, other: &Element) -> Result<Element, Error> {
        let inv = other.inverse().ok_or(Error::DivisionByZero)?;
        self.mul(&inv)
    }

    pub fn neg(&self) -> Element {
        if self.is_zero() || self.field.characteristic_two() {
            return self.clone();
        }
        Element { field: self.field, modulus: self.modulus.clone(), angle: self.angle.antipode() }
    }

    /// The literal form, e.g. `S:+`, `TR:-3/2`, `TC:3/2@1/4`.
    pub fn literal(&self) -> String {
        format!("{}:{}", self.field.tag(), self.payload())
    }

    /// The payload part of the literal form, without the field tag.
    pub fn payload(&self) -> String {
        match self.field {
            Field::S => String::from(match self.sign_value() {
                1 => "+",
                -1 => "-",
                _ => "0",
            }),
            Field::K => String::from(if self.is_zero() { "0" } else { "1" }),
            Field::R | Field::TR | Field::TT | Field::Triangle => fmt_rational(&self.real_value()),
            Field::P | Field::Phi => {
                if self.is_zero() {
                    String::from("0")
                } else {
                    format!("@{}", self.angle)
                }
            }
            Field::C | Field::TC => {
                if self.is_zero() {
                    String::from("0")
                } else {
                    format!("{}@{}", fmt_rational(&self.modulus), self.angle)
                }
            }
        }
    }

    /// Parses a payload in the given field.
    pub fn parse_payload(field: Field, s: &str) -> Result<Element, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad {field} payload `{s}`"));
        match field {
            Field::S => match s {
                "+" | "+1" | "1" => Ok(Element::sign(1)),
                "-" | "-1" => Ok(Element::sign(-1)),
                "0" => Ok(Element::sign(0)),
                _ => Err(bad()),
            },
            Field::K => match s {
                "0" => Ok(Element::zero(Field::K)),
                "1" => Ok(Element::one(Field::K)),
                _ => Err(bad()),
            },
            Field::R | Field::TR | Field::TT | Field::Triangle => {
                Element::real(field, parse_rational(s).ok_or_else(bad)?)
            }
            Field::P | Field::Phi => {
                if s == "0" {
                    return Ok(Element::zero(field));
                }
                let a = s.strip_prefix('@').ok_or_else(bad)?;
                Element::unit(field, Turn::new(parse_rational(a).ok_or_else(bad)?))
            }
            Field::C | Field::TC => {
                if s == "0" {
                    return Ok(Element::zero(field));
                }
                let (m, a) = match s.split_once('@') {
                    Some((m, a)) => (m, a),
                    None => (s, "0"),
                };
                let m = parse_rational(m).ok_or_else(bad)?;
                let a = parse_rational(a).ok_or_else(bad)?;
                if m.is_zero() {
                    return Ok(Element::zero(field));
                }
                if m.is_negative() {
                    return Element::polar(field, -m, Turn::new(a).antipode());
                }
                Element::polar(field, m, Turn::new(a))
            }
        }
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let (tag, payload) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("element literal `{s}` lacks a field tag")))?;
        Element::parse_payload(tag.parse()?, payload)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

/// Shorthand for parsing a literal in tests and examples; panics on bad input.
pub fn el(s: &str) -> Element {
    match s.parse() {
        Ok(e) => e,
        Err(err) => panic!("bad literal {s}: {err}"),
    }
}
