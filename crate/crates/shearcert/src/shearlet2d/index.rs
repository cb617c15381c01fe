use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::{Dyadic, Exact};
use crate::error::{Error, Result};

/// The three families of a cone-adapted system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Cone {
    Phi,
    Psi,
    PsiTilde,
}

impl Cone {
    pub const ALL: [Cone; 3] = [Cone::Phi, Cone::Psi, Cone::PsiTilde];

    /// Largest admissible `|k|` at scale `j`, or `None` when no shear is allowed.
    pub fn max_shear(self, j: u32) -> Option<i64> {
        let half = 1i64 << (j / 2);
        match self {
            Cone::Phi => (j == 0).then_some(0),
            Cone::Psi => Some(half),
            Cone::PsiTilde => Some(half - 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Cone::Phi => "phi",
            Cone::Psi => "psi",
            Cone::PsiTilde => "psi_tilde",
        }
    }
}

impl std::str::FromStr for Cone {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "phi" => Ok(Cone::Phi),
            "psi" => Ok(Cone::Psi),
            "psi_tilde" => Ok(Cone::PsiTilde),
            _ => Err(Error::InvalidArgument(format!("unknown cone {s:?}"))),
        }
    }
}

/// One element `(cone, j, k, m)` of a shearlet system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShearletIndex {
    pub cone: Cone,
    pub j: u32,
    pub k: i64,
    pub m: (i64, i64),
}

impl ShearletIndex {
    pub fn new(cone: Cone, j: u32, k: i64, m: (i64, i64)) -> Result<Self> {
        let idx = ShearletIndex { cone, j, k, m };
        if idx.is_valid() {
            Ok(idx)
        } else {
            Err(Error::InvalidArgument(format!(
                "shear {k} out of range for {idx}"
            )))
        }
    }

    pub fn phi(m: (i64, i64)) -> Self {
        ShearletIndex {
            cone: Cone::Phi,
            j: 0,
            k: 0,
            m,
        }
    }

    pub fn is_valid(&self) -> bool {
        match self.cone.max_shear(self.j) {
            Some(max) => self.k.abs() <= max,
            None => false,
        }
    }
}

impl fmt::Display for ShearletIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(j={},k={},m=({},{}))",
            self.cone.name(),
            self.j,
            self.k,
            self.m.0,
            self.m.1
        )
    }
}

/// Closed axis-aligned rectangle with dyadic corners.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: Dyadic,
    pub y_min: Dyadic,
    pub x_max: Dyadic,
    pub y_max: Dyadic,
}

impl Rect {
    pub fn new(x_min: Dyadic, y_min: Dyadic, x_max: Dyadic, y_max: Dyadic) -> Result<Self> {
        if x_min >= x_max || y_min >= y_max {
            return Err(Error::DegenerateDomain(format!(
                "[{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Rect {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    /// `[0, a] x [0, a]`.
    pub fn square(a: i64) -> Result<Self> {
        Rect::new(
            Dyadic::from_int(0),
            Dyadic::from_int(0),
            Dyadic::from_int(a),
            Dyadic::from_int(a),
        )
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.x_min.to_f64(),
            self.y_min.to_f64(),
            self.x_max.to_f64(),
            self.y_max.to_f64(),
        ]
    }
}

/// How an element's support must relate to the domain to be enumerated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainRule {
    /// The support's interior meets the domain's interior.
    #[default]
    Intersecting,
    /// The support lies inside the closed domain.
    Contained,
}

/// Filter order, sampling constants, maximal scale and domain of a system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShearletSystemSpec {
    pub order: usize,
    pub c: (Exact, Exact),
    pub j_max: u32,
    pub domain: Rect,
    #[serde(default)]
    pub rule: DomainRule,
}

impl ShearletSystemSpec {
    /// Validated spec: both sampling constants positive with odd denominators.
    pub fn new(order: usize, c: (Exact, Exact), j_max: u32, domain: Rect) -> Result<Self> {
        let spec = Self::new_unchecked(order, c, j_max, domain)?;
        for ci in [&spec.c.0, &spec.c.1] {
            if ci.two_exponent() != 0 {
                return Err(Error::EvenDenominator(ci.to_string()));
            }
        }
        Ok(spec)
    }

    /// Accepts any positive sampling constants (for negative controls).
    pub fn new_unchecked(
        order: usize,
        c: (Exact, Exact),
        j_max: u32,
        domain: Rect,
    ) -> Result<Self> {
        if order == 0 || order > crate::mra1d::MAX_ORDER {
            return Err(Error::InvalidOrder(order));
        }
        for ci in [&c.0, &c.1] {
            if !ci.is_positive() {
                return Err(Error::NonPositiveSampling(ci.to_string()));
            }
        }
        Ok(ShearletSystemSpec {
            order,
            c,
            j_max,
            domain,
            rule: DomainRule::Intersecting,
        })
    }

    pub fn with_rule(mut self, rule: DomainRule) -> Self {
        self.rule = rule;
        self
    }

    /// Both denominators odd.
    pub fn format_admissible(&self) -> bool {
        self.c.0.two_exponent() == 0 && self.c.1.two_exponent() == 0
    }

    /// Support length `2N - 1` of both generators.
    pub fn support_length(&self) -> i64 {
        2 * self.order as i64 - 1
    }

    /// Same system with sampling constants `c / n`.
    pub fn oversampled(&self, n: u32) -> Self {
        let n = Exact::from_int(n as i64);
        let div = |x: &Exact| x.checked_div(&n).expect("n is nonzero");
        ShearletSystemSpec {
            c: (div(&self.c.0), div(&self.c.1)),
            ..self.clone()
        }
    }
}
