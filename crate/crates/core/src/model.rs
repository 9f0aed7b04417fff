//! The competition map, its Jacobian and 2×2 eigenvalues.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the growth rates; both species follow logistic growth.
pub const MAX_RATE: f64 = 4.0;

/// Names of the six map parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    R1,
    R2,
    C1,
    C2,
    C3,
    C4,
}

impl Param {
    pub const ALL: [Param; 6] = [
        Param::R1,
        Param::R2,
        Param::C1,
        Param::C2,
        Param::C3,
        Param::C4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::R1 => "r1",
            Param::R2 => "r2",
            Param::C1 => "c1",
            Param::C2 => "c2",
            Param::C3 => "c3",
            Param::C4 => "c4",
        }
    }

    pub fn is_rate(self) -> bool {
        matches!(self, Param::R1 | Param::R2)
    }

    /// Checks `value` against this parameter's domain.
    pub fn validate(self, value: f64) -> Result<f64> {
        let invalid = |constraint| Error::InvalidParameter {
            name: self.name(),
            value,
            constraint,
        };
        if !value.is_finite() {
            return Err(invalid("must be finite"));
        }
        if self.is_rate() {
            if !(0.0..=MAX_RATE).contains(&value) {
                return Err(invalid("must lie in [0, 4]"));
            }
        } else if value < 0.0 {
            return Err(invalid("must be non-negative"));
        }
        Ok(value)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown parameter `{s}`")))
    }
}

/// Growth rates `r1, r2` and competition coefficients `c1..c4`.
///
/// `c1`, `c4` are intra-specific, `c2` is the effect of species 2 on species 1
/// and `c3` the effect of species 1 on species 2. Rates lie in `[0, 4]`,
/// coefficients are non-negative; both are checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    r1: f64,
    r2: f64,
    c1: f64,
    c2: f64,
    c3: f64,
    c4: f64,
}

impl ModelParams {
    pub fn new(r1: f64, r2: f64, c1: f64, c2: f64, c3: f64, c4: f64) -> Result<Self> {
        Ok(Self {
            r1: Param::R1.validate(r1)?,
            r2: Param::R2.validate(r2)?,
            c1: Param::C1.validate(c1)?,
            c2: Param::C2.validate(c2)?,
            c3: Param::C3.validate(c3)?,
            c4: Param::C4.validate(c4)?,
        })
    }

    #[inline]
    pub fn r1(&self) -> f64 {
        self.r1
    }
    #[inline]
    pub fn r2(&self) -> f64 {
        self.r2
    }
    #[inline]
    pub fn c1(&self) -> f64 {
        self.c1
    }
    #[inline]
    pub fn c2(&self) -> f64 {
        self.c2
    }
    #[inline]
    pub fn c3(&self) -> f64 {
        self.c3
    }
    #[inline]
    pub fn c4(&self) -> f64 {
        self.c4
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::R1 => self.r1,
            Param::R2 => self.r2,
            Param::C1 => self.c1,
            Param::C2 => self.c2,
            Param::C3 => self.c3,
            Param::C4 => self.c4,
        }
    }

    /// Returns a copy with one parameter replaced, validating the new value.
    pub fn with(&self, param: Param, value: f64) -> Result<Self> {
        let value = param.validate(value)?;
        let mut out = *self;
        match param {
            Param::R1 => out.r1 = value,
            Param::R2 => out.r2 = value,
            Param::C1 => out.c1 = value,
            Param::C2 => out.c2 = value,
            Param::C3 => out.c3 = value,
            Param::C4 => out.c4 = value,
        }
        Ok(out)
    }

    /// True when the inter-specific coefficients vanish and the two species
    /// evolve independently.
    pub fn is_decoupled(&self) -> bool {
        self.c2 == 0.0 && self.c3 == 0.0
    }
}

/// Population densities `(x, y)` of the two species. Always finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct State {
    x: f64,
    y: f64,
}

impl State {
    pub const ORIGIN: State = State { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::NonFiniteState { x, y })
        }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    /// Infinity-norm distance.
    #[inline]
    pub fn dist_inf(&self, other: &State) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }
}

/// Real 2×2 matrix, row-major: `[[a11, a12], [a21, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jacobian2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Jacobian2 {
    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    #[inline]
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }
}

/// One application of the map. Negative values are returned as computed;
/// only overflow to a non-finite value is an error.
#[inline]
pub fn step(p: &ModelParams, s: State) -> Result<State> {
    let State { x, y } = s;
    let nx = x * (p.r1 * (1.0 - p.c1 * x - p.c2 * y));
    let ny = y * (p.r2 * (1.0 - p.c3 * x - p.c4 * y));
    if nx.is_finite() && ny.is_finite() {
        Ok(State { x: nx, y: ny })
    } else {
        Err(Error::NonFiniteStep)
    }
}

/// Closed-form derivative of [`step`] at `s`.
#[inline]
pub fn jacobian(p: &ModelParams, s: State) -> Result<Jacobian2> {
    let State { x, y } = s;
    let j = Jacobian2 {
        a11: p.r1 * (1.0 - 2.0 * p.c1 * x - p.c2 * y),
        a12: -p.r1 * p.c2 * x,
        a21: -p.r2 * p.c3 * y,
        a22: p.r2 * (1.0 - p.c3 * x - 2.0 * p.c4 * y),
    };
    if j.is_finite() {
        Ok(j)
    } else {
        Err(Error::NonFiniteStep)
    }
}

/// Eigenvalues of a real 2×2 matrix, ordered by descending modulus, then
/// descending real part, then descending imaginary part.
pub fn eigenvalues_2x2(j: &Jacobian2) -> [Complex64; 2] {
    let half_trace = 0.5 * j.trace();
    // (t/2)^2 - det, written to avoid cancellation between the squares
    let half_diff = 0.5 * (j.a11 - j.a22);
    let disc = half_diff * half_diff + j.a12 * j.a21;

    let mut eig = if disc >= 0.0 {
        let root = disc.sqrt();
        let big = if half_trace >= 0.0 {
            half_trace + root
        } else {
            half_trace - root
        };
        let small = if big != 0.0 { j.det() / big } else { 0.0 };
        [Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
    } else {
        let im = (-disc).sqrt();
        [
            Complex64::new(half_trace, im),
            Complex64::new(half_trace, -im),
        ]
    };

    let key = |z: &Complex64| (z.norm(), z.re, z.im);
    if key(&eig[1]) > key(&eig[0]) {
        eig.swap(0, 1);
    }
    eig
}
