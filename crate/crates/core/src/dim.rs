//! Dimensions that are affine in the symbolic factor dimension `m`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// `m_coeff · m + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Dim {
    pub m_coeff: i64,
    pub constant: i64,
}

impl Dim {
    pub const ZERO: Dim = Dim {
        m_coeff: 0,
        constant: 0,
    };

    pub fn new(m_coeff: i64, constant: i64) -> Self {
        Dim { m_coeff, constant }
    }

    pub fn constant(c: i64) -> Self {
        Dim {
            m_coeff: 0,
            constant: c,
        }
    }

    pub fn m(coeff: i64) -> Self {
        Dim {
            m_coeff: coeff,
            constant: 0,
        }
    }

    pub fn at(self, m: i64) -> i64 {
        self.m_coeff * m + self.constant
    }

    pub fn is_zero(self) -> bool {
        self == Dim::ZERO
    }

    /// Positive for every `m ≥ 1`.
    pub fn is_positive(self) -> bool {
        self.m_coeff >= 0 && self.at(1) > 0
    }
}

impl Add for Dim {
    type Output = Dim;
    fn add(self, o: Dim) -> Dim {
        Dim::new(self.m_coeff + o.m_coeff, self.constant + o.constant)
    }
}

impl Sub for Dim {
    type Output = Dim;
    fn sub(self, o: Dim) -> Dim {
        Dim::new(self.m_coeff - o.m_coeff, self.constant - o.constant)
    }
}

impl Neg for Dim {
    type Output = Dim;
    fn neg(self) -> Dim {
        Dim::new(-self.m_coeff, -self.constant)
    }
}

impl std::iter::Sum for Dim {
    fn sum<I: Iterator<Item = Dim>>(iter: I) -> Dim {
        iter.fold(Dim::ZERO, Add::add)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.m_coeff, self.constant);
        if a == 0 {
            return write!(f, "{b}");
        }
        match a {
            1 => write!(f, "m")?,
            -1 => write!(f, "-m")?,
            _ => write!(f, "{a}m")?,
        }
        match b {
            0 => Ok(()),
            b if b > 0 => write!(f, "+{b}"),
            b => write!(f, "{b}"),
        }
    }
}

impl FromStr for Dim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dim> {
        let bad = || Error::Input(format!("cannot parse dimension {s:?}"));
        let s = s.trim();
        let Some(pos) = s.find('m') else {
            return s.parse().map(Dim::constant).map_err(|_| bad());
        };
        let coeff = match &s[..pos] {
            "" | "+" => 1,
            "-" => -1,
            c => c.parse().map_err(|_| bad())?,
        };
        let rest = &s[pos + 1..];
        let constant = match rest {
            "" => 0,
            r if r.starts_with('+') => r[1..].parse().map_err(|_| bad())?,
            r => r.parse().map_err(|_| bad())?,
        };
        Ok(Dim::new(coeff, constant))
    }
}
