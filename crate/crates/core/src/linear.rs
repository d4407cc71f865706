//! Linear subspaces of ℚ^d stored by the reduced row-echelon basis of their conormal space.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::dim::Dim;
use crate::error::{input, Error, Result};
use crate::model::Model;

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Input(format!("cannot parse rational {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A linear subspace through the origin.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    conormal: Vec<Vec<Rational>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace{}", self.conormal_string())
    }
}

/// Reduced row-echelon form with zero rows dropped.
pub fn rref(mut rows: Vec<Vec<Rational>>, width: usize) -> Vec<Vec<Rational>> {
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x = &*x - &factor * p;
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}

impl Subspace {
    pub fn new(ambient_dim: usize, conormal_rows: Vec<Vec<Rational>>) -> Result<Self> {
        if ambient_dim == 0 {
            return input("ambient dimension must be positive");
        }
        if let Some(r) = conormal_rows.iter().find(|r| r.len() != ambient_dim) {
            return input(format!(
                "conormal row of length {} in ambient dimension {ambient_dim}",
                r.len()
            ));
        }
        Ok(Subspace {
            ambient_dim,
            conormal: rref(conormal_rows, ambient_dim),
        })
    }

    pub fn from_integers(ambient_dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| rational(x, 1)).collect())
            .collect();
        Subspace::new(ambient_dim, rows)
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            conormal: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn conormal(&self) -> &[Vec<Rational>] {
        &self.conormal
    }

    pub fn codim(&self) -> usize {
        self.conormal.len()
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim - self.codim()
    }

    pub fn is_whole(&self) -> bool {
        self.conormal.is_empty()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let rows = self
            .conormal
            .iter()
            .chain(&other.conormal)
            .cloned()
            .collect();
        Ok(Subspace {
            ambient_dim: self.ambient_dim,
            conormal: rref(rows, self.ambient_dim),
        })
    }

    /// `self ⊇ other`, i.e. the conormal of `self` lies in the conormal of `other`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self.intersect(other)?.codim() == other.codim())
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return input(format!(
                "ambient mismatch: {} vs {}",
                self.ambient_dim, other.ambient_dim
            ));
        }
        Ok(())
    }

    pub fn conormal_string(&self) -> String {
        let rows: Vec<String> = self
            .conormal
            .iter()
            .map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(","))
            .collect();
        format!("⟨{}⟩", rows.join("|"))
    }

    /// Whether `vectors` are linearly independent.
    pub fn independent(vectors: &[Vec<Rational>], width: usize) -> bool {
        rref(vectors.to_vec(), width).len() == vectors.len()
    }

    /// The annihilator of the span of `vectors`.
    pub fn annihilator_of_span(width: usize, vectors: &[Vec<Rational>]) -> Result<Subspace> {
        let basis = rref(vectors.to_vec(), width);
        let pivots: Vec<usize> = basis
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
            .collect();
        let mut rows = Vec::new();
        for free in (0..width).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); width];
            v[free] = Rational::one();
            for (r, &p) in basis.iter().zip(&pivots) {
                v[p] = -r[free].clone();
            }
            rows.push(v);
        }
        Subspace::new(width, rows)
    }
}

/// Rational linear subspaces of a fixed ℚ^d. In projective mode the elements are
/// cones over projective subspaces of ℙ^{d−1}: the zero subspace counts as empty and
/// dimensions are projective.
#[derive(Debug, Clone)]
pub struct LinearModel {
    pub dim: usize,
    pub projective: bool,
    names: BTreeMap<Subspace, String>,
}

impl LinearModel {
    pub fn new(dim: usize, projective: bool) -> Self {
        LinearModel {
            dim,
            projective,
            names: BTreeMap::new(),
        }
    }

    pub fn name(&mut self, s: &Subspace, name: impl Into<String>) {
        self.names.insert(s.clone(), name.into());
    }

    pub fn check(&self, s: &Subspace) -> Result<()> {
        if s.ambient_dim() != self.dim {
            return input(format!(
                "subspace lives in ℚ^{}, model in ℚ^{}",
                s.ambient_dim(),
                self.dim
            ));
        }
        if s.is_whole() {
            return input("the ambient space is not an arrangement element");
        }
        if self.projective && s.dim() == 0 {
            return input("the zero cone is empty in projective mode");
        }
        Ok(())
    }
}

impl Model for LinearModel {
    type Elem = Subspace;

    fn ambient_dim(&self) -> Dim {
        Dim::constant(self.dim as i64 - self.projective as i64)
    }

    fn dim(&self, e: &Subspace) -> Result<Dim> {
        Ok(Dim::constant(e.dim() as i64 - self.projective as i64))
    }

    fn meet(&self, a: &Subspace, b: &Subspace) -> Result<Option<Subspace>> {
        let s = a.intersect(b)?;
        if self.projective && s.dim() == 0 {
            return Ok(None);
        }
        Ok(Some(s))
    }

    fn contains(&self, a: &Subspace, b: &Subspace) -> Result<bool> {
        a.contains(b)
    }

    fn label(&self, e: &Subspace) -> String {
        self.names
            .get(e)
            .cloned()
            .unwrap_or_else(|| e.conormal_string())
    }
}
