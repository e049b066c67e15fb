//! The exterior derivative and its bidegree components, the Hodge star, the
//! Lefschetz pair, adjoints and Laplacians, both as operators on forms and as
//! exact matrices between bidegree bases.

mod ids;
mod star;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

pub use ids::{Differential, OperatorId};

use crate::error::{Error, Result};
use crate::exterior::{Bidegree, Form, Monomial, Space};
use crate::linalg::Matrix;
use crate::model::ManifoldSpec;
use crate::scalar::{Coefficient, GaussianRational, SymScalar, SymbolTable};

/// A coefficient ring on which the exterior derivative is defined.
pub trait Differentiable: Coefficient {
    /// Converts a symbolic scalar, if it lies in this ring.
    fn from_symbolic(s: &SymScalar) -> Option<Self>;

    fn differential(&self, symbols: &SymbolTable) -> Result<Form<Self>>;
}

impl Differentiable for GaussianRational {
    fn from_symbolic(s: &SymScalar) -> Option<Self> {
        s.as_constant()
    }

    fn differential(&self, _: &SymbolTable) -> Result<Form<Self>> {
        Ok(Form::zero())
    }
}

impl Differentiable for SymScalar {
    fn from_symbolic(s: &SymScalar) -> Option<Self> {
        Some(s.clone())
    }

    fn differential(&self, symbols: &SymbolTable) -> Result<Form<Self>> {
        SymScalar::differential(self, symbols)
    }
}

/// An exact matrix of an operator between two spaces, columns indexed by the
/// source basis and rows by the target basis.
#[derive(Clone, PartialEq, Debug)]
pub struct OperatorMatrix {
    pub id: OperatorId,
    pub source: Space,
    pub target: Space,
    pub matrix: Matrix<GaussianRational>,
}

/// Operators of a manifold spec acting on forms with coefficients in `C`.
pub struct Calculus<C> {
    n: usize,
    symbols: SymbolTable,
    /// dφʲ then dφ̄ʲ, indexed by `j − 1`.
    holo_d: Vec<Form<C>>,
    anti_d: Vec<Form<C>>,
    omega: Form<C>,
    scale: Option<GaussianRational>,
    monomial_d: Mutex<HashMap<Monomial, Form<C>>>,
    star_cache: Mutex<HashMap<Monomial, Form<GaussianRational>>>,
    matrices: Mutex<HashMap<(OperatorId, Space), Arc<Matrix<GaussianRational>>>>,
}

/// Invariant (constant-coefficient) calculus.
pub type ConstCalculus = Calculus<GaussianRational>;
/// Pointwise symbolic calculus.
pub type SymCalculus = Calculus<SymScalar>;

impl<C: Differentiable> Calculus<C> {
    /// Fails with `NotConstantCoefficient` if a structure coefficient or ω is
    /// not representable in `C`.
    pub fn new(spec: &ManifoldSpec) -> Result<Self> {
        let convert = |f: &Form<SymScalar>| -> Result<Form<C>> {
            let mut out = Form::zero();
            for (m, c) in f.iter() {
                out.add_term(*m, C::from_symbolic(c).ok_or(Error::NotConstantCoefficient)?);
            }
            Ok(out)
        };
        let holo_d = spec.structure.iter().map(convert).collect::<Result<Vec<_>>>()?;
        let anti_d = holo_d.iter().map(|f| f.conj()).collect();
        Ok(Self {
            n: spec.n,
            symbols: spec.symbols.clone(),
            holo_d,
            anti_d,
            omega: convert(&spec.omega)?,
            scale: spec.flags.unitary_scale.clone().map(GaussianRational::real),
            monomial_d: Mutex::new(HashMap::new()),
            star_cache: Mutex::new(HashMap::new()),
            matrices: Mutex::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> &Form<C> {
        &self.omega
    }

    /// The unitary scale `c`, if ω = (i·c/2) Σ φ^{jj̄}.
    pub fn scale(&self) -> Option<&GaussianRational> {
        self.scale.as_ref()
    }

    fn generator_d(&self, g: Monomial) -> &Form<C> {
        if let Some(&j) = g.holo_indices().first() {
            &self.holo_d[j - 1]
        } else {
            &self.anti_d[g.anti_indices()[0] - 1]
        }
    }

    fn d_of_monomial(&self, m: Monomial) -> Form<C> {
        if let Some(f) = self.monomial_d.lock().expect("cache lock").get(&m) {
            return f.clone();
        }
        let factors = m.factors();
        let mut out = Form::zero();
        for k in 0..factors.len() {
            let mut term: Form<C> = Form::scalar(C::one());
            for (i, g) in factors.iter().enumerate() {
                let factor = if i == k { self.generator_d(*g).clone() } else { Form::basis(*g) };
                term = term.wedge(&factor);
            }
            out = if k % 2 == 0 { out + term } else { out - term };
        }
        self.monomial_d.lock().expect("cache lock").insert(m, out.clone());
        out
    }

    /// The exterior derivative, a derivation extending the structure equations
    /// and the declared differentials of the coefficient symbols.
    pub fn ext_d(&self, a: &Form<C>) -> Result<Form<C>> {
        let mut out = Form::zero();
        for (m, c) in a.iter() {
            let dc = c.differential(&self.symbols)?;
            if !dc.is_zero() {
                out = out + dc.wedge(&Form::basis(*m));
            }
            out = out + self.d_of_monomial(*m).scale(c);
        }
        Ok(out)
    }

    /// One of `d`, μ, ∂, ∂̄, μ̄: the projection of `d` of each bidegree part.
    pub fn differential(&self, which: Differential, a: &Form<C>) -> Result<Form<C>> {
        let Some((dp, dq)) = which.shift() else {
            return self.ext_d(a);
        };
        let mut out = Form::zero();
        for (pq, part) in a.parts() {
            if let Some(target) = pq.shifted(dp, dq, self.n) {
                out = out + self.ext_d(&part)?.project(target);
            }
        }
        Ok(out)
    }

    /// d^c = i(∂̄ − ∂ + μ − μ̄).
    pub fn dc(&self, a: &Form<C>) -> Result<Form<C>> {
        let sum = self.differential(Differential::Delbar, a)? - self.differential(Differential::Del, a)?
            + self.differential(Differential::Mu, a)?
            - self.differential(Differential::Mubar, a)?;
        Ok(sum.scale_const(&GaussianRational::i()))
    }

    /// L a = ω ∧ a.
    pub fn lefschetz(&self, a: &Form<C>) -> Form<C> {
        self.omega.wedge(a)
    }

    /// Multiplies the (p,q) part by i^{p−q}.
    pub fn j_action(&self, a: &Form<C>) -> Form<C> {
        a.parts()
            .into_iter()
            .map(|(pq, part)| part.scale_const(&GaussianRational::i_pow(pq.p as i64 - pq.q as i64)))
            .sum()
    }

    /// Star of a basis monomial in ℚ(i), scaled by `c^{n−k}`.
    pub fn star_monomial(&self, m: Monomial) -> Result<Form<GaussianRational>> {
        let c = self.scale.as_ref().ok_or(Error::NotUnitaryMode)?;
        if let Some(f) = self.star_cache.lock().expect("cache lock").get(&m) {
            return Ok(f.clone());
        }
        let k = m.degree();
        let factor = if k <= self.n {
            c.pow((self.n - k) as u32)
        } else {
            c.inv().expect("unitary scale is positive").pow((k - self.n) as u32)
        };
        let f = star::unit_star(self.n, m).scale(&factor);
        self.star_cache.lock().expect("cache lock").insert(m, f.clone());
        Ok(f)
    }

    /// The ℂ-linear Hodge star of the metric `c·g₀`.
    pub fn star(&self, a: &Form<C>) -> Result<Form<C>> {
        let mut out = Form::zero();
        for (m, coeff) in a.iter() {
            out = out + self.star_monomial(*m)?.to_symbolic::<C>().scale(coeff);
        }
        Ok(out)
    }

    /// Λ = −*L*.
    pub fn lambda(&self, a: &Form<C>) -> Result<Form<C>> {
        Ok(-self.star(&self.lefschetz(&self.star(a)?))?)
    }

    /// D* = −* D̄ *, where D̄ is the conjugate operator (d̄ = d).
    pub fn adjoint(&self, which: Differential, a: &Form<C>) -> Result<Form<C>> {
        let s = self.star(a)?;
        Ok(-self.star(&self.differential(which.conj(), &s)?)?)
    }

    /// Δ_D = D D* + D* D.
    pub fn laplacian(&self, which: Differential, a: &Form<C>) -> Result<Form<C>> {
        let first = self.differential(which, &self.adjoint(which, a)?)?;
        let second = self.adjoint(which, &self.differential(which, a)?)?;
        Ok(first + second)
    }

    /// The volume form ω^n/n! = *1.
    pub fn volume(&self) -> Result<Form<GaussianRational>> {
        self.star_monomial(Monomial::ONE)
    }

    /// The Hermitian pairing defined by ⟨a,b⟩ vol = a ∧ *conj(b).
    pub fn inner_product(&self, a: &Form<C>, b: &Form<C>) -> Result<C> {
        let vol = self.volume()?;
        let (top, v) = vol.iter().next().map(|(m, v)| (*m, v.clone())).expect("volume form is nonzero");
        let prod = a.wedge(&self.star(&b.conj())?);
        Ok(prod.coefficient(&top) * C::constant(v.inv().expect("nonzero")))
    }

    pub fn apply(&self, id: OperatorId, a: &Form<C>) -> Result<Form<C>> {
        match id {
            OperatorId::Diff(d) => self.differential(d, a),
            OperatorId::Dc => self.dc(a),
            OperatorId::Star => self.star(a),
            OperatorId::L => Ok(self.lefschetz(a)),
            OperatorId::Lambda => self.lambda(a),
            OperatorId::J => Ok(self.j_action(a)),
            OperatorId::Adjoint(d) => self.adjoint(d, a),
            OperatorId::Laplacian(d) => self.laplacian(d, a),
        }
    }

    /// The space receiving `id` applied to `source`.
    pub fn target(&self, id: OperatorId, source: Space) -> Space {
        let n = self.n;
        let by_degree = |k: usize, delta: isize| -> Space {
            let t = k as isize + delta;
            if t < 0 || t as usize > 2 * n {
                Space::Empty
            } else {
                Space::Degree(t as usize)
            }
        };
        let shift = |b: Bidegree, dp: isize, dq: isize| b.shifted(dp, dq, n).map_or(Space::Empty, Space::Bidegree);
        match source {
            Space::Empty => Space::Empty,
            Space::Degree(k) => match id {
                OperatorId::Diff(_) | OperatorId::Dc => by_degree(k, 1),
                OperatorId::Adjoint(_) => by_degree(k, -1),
                OperatorId::Laplacian(_) | OperatorId::J => source,
                OperatorId::Star => by_degree(k, 2 * n as isize - 2 * k as isize),
                OperatorId::L => by_degree(k, 2),
                OperatorId::Lambda => by_degree(k, -2),
            },
            Space::Bidegree(b) => match id {
                OperatorId::Diff(d) => match d.shift() {
                    Some((dp, dq)) => shift(b, dp, dq),
                    None => by_degree(b.degree(), 1),
                },
                OperatorId::Adjoint(d) => match d.shift() {
                    Some((dp, dq)) => shift(b, -dp, -dq),
                    None => by_degree(b.degree(), -1),
                },
                OperatorId::Laplacian(Differential::D) => Space::Degree(b.degree()),
                OperatorId::Laplacian(_) | OperatorId::J => source,
                OperatorId::Dc => by_degree(b.degree(), 1),
                OperatorId::Star => Space::Bidegree(Bidegree::new(n - b.q, n - b.p)),
                OperatorId::L => shift(b, 1, 1),
                OperatorId::Lambda => shift(b, -1, -1),
            },
        }
    }
}

impl Calculus<GaussianRational> {
    /// Matrix of `id` on `source`; Laplacians are assembled as DD* + D*D from
    /// the matrices of D and D*.
    pub fn matrix(&self, id: OperatorId, source: Space) -> Result<OperatorMatrix> {
        let target = self.target(id, source);
        let matrix = self.raw_matrix(id, source)?;
        Ok(OperatorMatrix { id, source, target, matrix: (*matrix).clone() })
    }

    pub fn bidegree_matrix(&self, id: OperatorId, pq: Bidegree) -> Result<OperatorMatrix> {
        self.matrix(id, Space::Bidegree(pq))
    }

    pub(crate) fn raw_matrix(&self, id: OperatorId, source: Space) -> Result<Arc<Matrix<GaussianRational>>> {
        if id.needs_unitary() && self.scale.is_none() {
            return Err(Error::NotUnitaryMode);
        }
        if let Some(m) = self.matrices.lock().expect("cache lock").get(&(id, source)) {
            return Ok(m.clone());
        }
        let target = self.target(id, source);
        let m = if let OperatorId::Laplacian(d) = id {
            // second ∘ first, passing through the target of `first`
            let block = |first: OperatorId, second: OperatorId| -> Result<Matrix<GaussianRational>> {
                let mid = self.target(first, source);
                if mid == Space::Empty {
                    return Ok(Matrix::zeros(target.dim(self.n), source.dim(self.n)));
                }
                if self.target(second, mid) != target {
                    return Err(Error::CrossCheckMismatch(format!(
                        "Laplacian block {second}∘{first} of {id} on {source} lands in {}",
                        self.target(second, mid)
                    )));
                }
                Ok(&*self.raw_matrix(second, mid)? * &*self.raw_matrix(first, source)?)
            };
            let dd_star = block(OperatorId::Adjoint(d), OperatorId::Diff(d))?;
            let d_star_d = block(OperatorId::Diff(d), OperatorId::Adjoint(d))?;
            &dd_star + &d_star_d
        } else {
            let src = source.basis(self.n);
            let tgt = target.basis(self.n);
            let mut columns = Vec::with_capacity(src.len());
            for m in &src {
                let image = self.apply(id, &Form::basis(*m))?;
                let coords = image.coordinates(&tgt).ok_or_else(|| {
                    Error::CrossCheckMismatch(format!("{id}({m}) = {image} leaves the target space {target}"))
                })?;
                columns.push(coords);
            }
            Matrix::from_columns(&columns, tgt.len())
        };
        let m = Arc::new(m);
        self.matrices.lock().expect("cache lock").insert((id, source), m.clone());
        Ok(m)
    }

    /// Gram matrix `G[i][j] = ⟨e_i, e_j⟩` of the basis of a space.
    pub fn gram(&self, space: Space) -> Result<Matrix<GaussianRational>> {
        let basis = space.basis(self.n);
        let forms: Vec<Form<GaussianRational>> = basis.iter().map(|m| Form::basis(*m)).collect();
        let mut g = Matrix::zeros(basis.len(), basis.len());
        for (i, a) in forms.iter().enumerate() {
            for (j, b) in forms.iter().enumerate() {
                let v = self.inner_product(a, b)?;
                if !v.is_zero() {
                    g.set(i, j, v);
                }
            }
        }
        Ok(g)
    }

    /// Whether μ and μ̄ vanish on every bidegree.
    pub fn mu_vanishes(&self) -> Result<bool> {
        for pq in Bidegree::all(self.n) {
            for d in [Differential::Mu, Differential::Mubar] {
                if !self.raw_matrix(OperatorId::Diff(d), Space::Bidegree(pq))?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Applies a matrix to a form given in the source basis.
pub fn apply_matrix(m: &OperatorMatrix, n: usize, a: &Form<GaussianRational>) -> Option<Form<GaussianRational>> {
    let coords = a.coordinates(&m.source.basis(n))?;
    Some(Form::from_coordinates(&m.target.basis(n), &m.matrix.mul_vec(&coords)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::standard_omega;
    use num_traits::One;

    fn q(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn mono(h: &[usize], a: &[usize]) -> Form<GaussianRational> {
        Form::basis(Monomial::new(h, a))
    }

    #[test]
    fn flat_torus_star_of_unit_and_omega() {
        let spec = ManifoldSpec::flat("t6", 3).unwrap();
        let calc = ConstCalculus::new(&spec).unwrap();
        let omega: Form<GaussianRational> = standard_omega(3, &GaussianRational::one());
        let vol = omega.power(3).scale_const(&crate::scalar::inverse_factorial(3));
        assert_eq!(calc.star(&Form::scalar(GaussianRational::one())).unwrap(), vol);
        let expected = omega.power(2).scale_const(&crate::scalar::inverse_factorial(2));
        assert_eq!(calc.star(&omega).unwrap(), expected);
        assert_eq!(calc.lambda(&omega).unwrap(), Form::scalar(q(-3, 0)));
    }

    #[test]
    fn j_action_powers() {
        let spec = ManifoldSpec::flat("t6", 3).unwrap();
        let calc = ConstCalculus::new(&spec).unwrap();
        assert_eq!(calc.j_action(&mono(&[1], &[1])), mono(&[1], &[1]));
        assert_eq!(calc.j_action(&mono(&[1, 2], &[])), -mono(&[1, 2], &[]));
        assert_eq!(calc.j_action(&mono(&[1], &[2, 3])), mono(&[1], &[2, 3]).scale_const(&q(0, -1)));
    }

    #[test]
    fn unit_norms() {
        // |φ^{1 2̄}|² = |φ¹|²|φ²|² = 2·2 for the metric with orthonormal e^a
        let spec = ManifoldSpec::flat("t6", 3).unwrap();
        let calc = ConstCalculus::new(&spec).unwrap();
        let a = mono(&[1], &[2]);
        assert_eq!(calc.inner_product(&a, &a).unwrap(), q(4, 0));
        assert_eq!(calc.inner_product(&a, &mono(&[2], &[1])).unwrap(), q(0, 0));
        assert_eq!(calc.inner_product(&Form::zero(), &a).unwrap(), q(0, 0));
    }

    #[test]
    fn target_spaces() {
        let spec = ManifoldSpec::flat("t4", 2).unwrap();
        let calc = ConstCalculus::new(&spec).unwrap();
        let b = |p, q| Space::Bidegree(Bidegree::new(p, q));
        assert_eq!(calc.target(OperatorId::Diff(Differential::Mu), b(2, 1)), Space::Empty);
        assert_eq!(calc.target(OperatorId::Diff(Differential::Mu), b(0, 1)), b(2, 0));
        assert_eq!(calc.target(OperatorId::Star, b(1, 0)), b(2, 1));
        assert_eq!(calc.target(OperatorId::Adjoint(Differential::D), b(0, 0)), Space::Empty);
        assert_eq!(calc.target(OperatorId::Laplacian(Differential::D), b(1, 1)), Space::Degree(2));
        let m = calc.bidegree_matrix(OperatorId::Laplacian(Differential::Delbar), Bidegree::new(1, 1)).unwrap();
        assert!(m.matrix.is_zero());
        assert_eq!((m.matrix.rows(), m.matrix.cols()), (4, 4));
    }

    #[test]
    fn symbolic_spec_has_no_constant_calculus() {
        let text = "manifold g\ndim 6\ncoframe phi1 .. phi3\nsymbol V conj W nonzero d = opaque\nsymbol W conj V d = opaque\nd phi1 = V*phi{3,1} - W*phi{,13}\nomega = 1/2*i*phi{1,1}+1/2*i*phi{2,2}+1/2*i*phi{3,3}\n";
        let spec = crate::model::parse_spec(text).unwrap();
        assert!(matches!(ConstCalculus::new(&spec), Err(Error::NotConstantCoefficient)));
        assert!(SymCalculus::new(&spec).is_ok());
    }
}
