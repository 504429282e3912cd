//! Scalars over R, C and H stored uniformly as four real components.
//!
//! Real and complex numbers are the subalgebras of the quaternions with the
//! trailing components zero, so one Hamilton product serves all three fields.
//! Scalar multiplication of row vectors is always taken on the left.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CfmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
    #[serde(rename = "H")]
    Quaternion,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::Real, Field::Complex, Field::Quaternion];

    /// Real dimension `d` of the field: 1, 2 or 4.
    pub fn real_dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
            Field::Quaternion => 4,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Field::Real => "R",
            Field::Complex => "C",
            Field::Quaternion => "H",
        }
    }

    fn wider(self, other: Field) -> Field {
        self.max(other)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Field {
    type Err = CfmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "R" | "r" | "real" => Ok(Field::Real),
            "C" | "c" | "complex" => Ok(Field::Complex),
            "H" | "h" | "quaternion" => Ok(Field::Quaternion),
            other => Err(CfmError::Format(format!("unknown field {other:?}, expected R, C or H"))),
        }
    }
}

/// `re + i·i + j·j + k·k`, tagged with the field it belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
    field: Field,
}

impl Scalar {
    /// Builds a scalar from its components; components unused by `field` must be zero.
    pub fn new(field: Field, re: f64, i: f64, j: f64, k: f64) -> Result<Self> {
        let extra_ok = match field {
            Field::Real => i == 0.0 && j == 0.0 && k == 0.0,
            Field::Complex => j == 0.0 && k == 0.0,
            Field::Quaternion => true,
        };
        if !extra_ok {
            return Err(CfmError::Format(format!(
                "components ({re}, {i}, {j}, {k}) do not belong to field {field}"
            )));
        }
        Ok(Scalar { re, i, j, k, field })
    }

    pub fn real(re: f64) -> Self {
        Scalar { re, i: 0.0, j: 0.0, k: 0.0, field: Field::Real }
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar { re, i: im, j: 0.0, k: 0.0, field: Field::Complex }
    }

    pub fn quaternion(re: f64, i: f64, j: f64, k: f64) -> Self {
        Scalar { re, i, j, k, field: Field::Quaternion }
    }

    pub fn zero(field: Field) -> Self {
        Scalar { re: 0.0, i: 0.0, j: 0.0, k: 0.0, field }
    }

    pub fn one(field: Field) -> Self {
        Scalar { re: 1.0, i: 0.0, j: 0.0, k: 0.0, field }
    }

    /// A real number viewed as an element of `field`.
    pub fn from_real(field: Field, re: f64) -> Self {
        Scalar { re, i: 0.0, j: 0.0, k: 0.0, field }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Same value re-tagged into a field that contains it.
    pub fn promote(self, field: Field) -> Result<Self> {
        Scalar::new(field, self.re, self.i, self.j, self.k)
    }

    /// JSON encoding: `[a]`, `[a, b]` or `[a, b, c, e]` depending on the field.
    pub fn components(&self) -> Vec<f64> {
        let all = [self.re, self.i, self.j, self.k];
        all[..self.field.real_dim()].to_vec()
    }

    pub fn from_components(field: Field, parts: &[f64]) -> Result<Self> {
        if parts.len() != field.real_dim() {
            return Err(CfmError::Format(format!(
                "scalar over {field} needs {} component(s), got {}",
                field.real_dim(),
                parts.len()
            )));
        }
        let mut all = [0.0; 4];
        all[..parts.len()].copy_from_slice(parts);
        Scalar::new(field, all[0], all[1], all[2], all[3])
    }

    pub(crate) fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub(crate) fn abs(&self) -> f64 {
        // hypot-style scaling keeps tiny and huge components representable
        let m = self.re.abs().max(self.i.abs()).max(self.j.abs()).max(self.k.abs());
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        let (a, b, c, d) = (self.re / m, self.i / m, self.j / m, self.k / m);
        m * (a * a + b * b + c * c + d * d).sqrt()
    }

    pub(crate) fn conj(&self) -> Self {
        Scalar { re: self.re, i: -self.i, j: -self.j, k: -self.k, field: self.field }
    }

    pub(crate) fn scale(&self, s: f64) -> Self {
        Scalar { re: self.re * s, i: self.i * s, j: self.j * s, k: self.k * s, field: self.field }
    }

    /// Two-sided inverse; the caller guarantees `self != 0`.
    pub(crate) fn inv(&self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    pub(crate) fn is_zero_within(&self, eps: f64) -> bool {
        self.abs() <= eps
    }

    /// Largest deviation of a component from the given real value.
    pub(crate) fn distance_to_real(&self, value: f64) -> f64 {
        (*self - Scalar::from_real(self.field, value)).abs()
    }

    fn hamilton(&self, rhs: &Scalar) -> Scalar {
        let (a1, b1, c1, d1) = (self.re, self.i, self.j, self.k);
        let (a2, b2, c2, d2) = (rhs.re, rhs.i, rhs.j, rhs.k);
        Scalar {
            re: a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            i: a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            j: a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            k: a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            field: self.field.wider(rhs.field),
        }
    }
}

/// Field product `x·y` (Hamilton product over H). Both operands must share a field.
pub fn multiply(x: Scalar, y: Scalar) -> Result<Scalar> {
    if x.field != y.field {
        return Err(CfmError::TagMismatch(x.field, y.field));
    }
    Ok(x.hamilton(&y))
}

/// The unit scalar `q` with `q·x = |x|`, i.e. `conj(x)/|x|`.
pub fn phase_normalizer(x: Scalar) -> Result<Scalar> {
    let r = x.abs();
    if r == 0.0 || !r.is_finite() {
        return Err(CfmError::Degenerate(format!("phase of {x} is undefined")));
    }
    Ok(x.conj().scale(1.0 / r))
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re + rhs.re,
            i: self.i + rhs.i,
            j: self.j + rhs.j,
            k: self.k + rhs.k,
            field: self.field.wider(rhs.field),
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self + (-rhs)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.scale(-1.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.hamilton(&rhs)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            Field::Real => write!(f, "{}", self.re),
            Field::Complex => write!(f, "{}{:+}i", self.re, self.i),
            Field::Quaternion => write!(f, "{}{:+}i{:+}j{:+}k", self.re, self.i, self.j, self.k),
        }
    }
}
