use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{Form, Monomial, Space};
use crate::linalg::{echelon_basis, Matrix};
use crate::operators::OperatorMatrix;
use crate::scalar::GaussianRational;

type Q = GaussianRational;

/// A linear subspace of a space of constant-coefficient forms, stored as the
/// reduced row echelon basis of its coordinate vectors. Two subspaces are
/// equal iff their echelon bases are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: Space,
    n: usize,
    rows: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn zero(ambient: Space, n: usize) -> Self {
        Self { ambient, n, rows: Vec::new() }
    }

    pub fn full(ambient: Space, n: usize) -> Self {
        let d = ambient.dim(n);
        let rows = (0..d).map(|i| (0..d).map(|j| if i == j { Q::from(1) } else { Q::zero() }).collect()).collect();
        Self { ambient, n, rows }
    }

    /// Span of coordinate vectors in the ambient basis.
    pub fn from_vectors(ambient: Space, n: usize, vectors: &[Vec<Q>]) -> Self {
        let nonzero: Vec<Vec<Q>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
        Self { ambient, n, rows: echelon_basis(&nonzero, ambient.dim(n)) }
    }

    /// Span of forms, each of which must lie in the ambient space.
    pub fn span(ambient: Space, n: usize, forms: &[Form<Q>]) -> Result<Self> {
        let basis = ambient.basis(n);
        let vectors = forms
            .iter()
            .map(|f| f.coordinates(&basis).ok_or_else(|| Error::AmbientMismatch(f.to_string(), ambient.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_vectors(ambient, n, &vectors))
    }

    /// `{x : M x = 0}` for a matrix whose columns are indexed by `ambient`.
    pub fn kernel(ambient: Space, n: usize, m: &Matrix<Q>) -> Self {
        Self::from_vectors(ambient, n, &m.nullspace())
    }

    pub fn ambient(&self) -> Space {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// The echelon basis as forms.
    pub fn forms(&self) -> Vec<Form<Q>> {
        let basis = self.ambient.basis(self.n);
        self.rows.iter().map(|r| Form::from_coordinates(&basis, r)).collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient || self.n != other.n {
            return Err(Error::AmbientMismatch(self.ambient.to_string(), other.ambient.to_string()));
        }
        Ok(())
    }

    pub fn contains(&self, f: &Form<Q>) -> Result<bool> {
        let coords = f
            .coordinates(&self.ambient.basis(self.n))
            .ok_or_else(|| Error::AmbientMismatch(f.to_string(), self.ambient.to_string()))?;
        let mut rows = self.rows.clone();
        rows.push(coords);
        Ok(echelon_basis(&rows, self.ambient.dim(self.n)).len() == self.rows.len())
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.sum(other)?.dim() == other.dim())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self::from_vectors(self.ambient, self.n, &rows))
    }

    /// Solves `Σ aᵢ vᵢ = Σ bⱼ wⱼ` and keeps `Σ aᵢ vᵢ`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient, self.n));
        }
        let dim = self.ambient.dim(self.n);
        let mut columns: Vec<Vec<Q>> = self.rows.clone();
        columns.extend(other.rows.iter().map(|w| w.iter().map(|x| -x.clone()).collect()));
        let m = Matrix::from_columns(&columns, dim);
        let a = self.rows.len();
        let vectors: Vec<Vec<Q>> = m
            .nullspace()
            .into_iter()
            .map(|coef| {
                let mut v = vec![Q::zero(); dim];
                for (c, row) in coef[..a].iter().zip(&self.rows) {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, r) in v.iter_mut().zip(row) {
                        *x += &(c * r);
                    }
                }
                v
            })
            .collect();
        Ok(Self::from_vectors(self.ambient, self.n, &vectors))
    }

    /// Coordinates of `f` with respect to the echelon basis, read off at the
    /// pivot columns; `None` if `f` is not in the subspace.
    pub fn coordinates_of(&self, f: &Form<Q>) -> Option<Vec<Q>> {
        let v = f.coordinates(&self.ambient.basis(self.n))?;
        let coords: Vec<Q> = self
            .rows
            .iter()
            .map(|row| {
                let pivot = row.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero");
                v[pivot].clone()
            })
            .collect();
        let mut rebuilt = vec![Q::zero(); v.len()];
        for (c, row) in coords.iter().zip(&self.rows) {
            for (x, r) in rebuilt.iter_mut().zip(row) {
                *x += &(c * r);
            }
        }
        (rebuilt == v).then_some(coords)
    }

    /// Whether `self + other` is direct.
    pub fn is_independent_of(&self, other: &Self) -> Result<bool> {
        Ok(self.sum(other)?.dim() == self.dim() + other.dim())
    }

    /// Image under an operator matrix whose source is the ambient space.
    pub fn image_under(&self, m: &OperatorMatrix) -> Result<Self> {
        if m.source != self.ambient {
            return Err(Error::AmbientMismatch(self.ambient.to_string(), m.source.to_string()));
        }
        let images: Vec<Vec<Q>> = self.rows.iter().map(|r| m.matrix.mul_vec(r)).collect();
        Ok(Self::from_vectors(m.target, self.n, &images))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({}, dim {}) [", self.ambient, self.dim())?;
        for (k, form) in self.forms().iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{form}")?;
        }
        f.write_str("]")
    }
}

/// Shorthand used in tests and reports: `Monomial` as a constant form.
pub fn mono(holo: &[usize], anti: &[usize]) -> Form<Q> {
    Form::basis(Monomial::new(holo, anti))
}
