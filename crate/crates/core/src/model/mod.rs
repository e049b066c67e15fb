//! Manifold specifications: structure equations on a (1,0)-coframe, the
//! fundamental form, and the flags derived from them.

mod parse;
mod real;
mod validate;

use num_rational::BigRational;
use num_traits::{One, Signed};

pub use parse::{parse_form, parse_spec, render_spec};
pub use real::{FrameForm, Pairing, RealFramePresentation};
pub use validate::{validate, CheckStatus, GeneratorCheck, ValidationReport};

use crate::error::{Error, Result};
use crate::exterior::{standard_omega, Bidegree, Form, Monomial, MAX_DIM};
use crate::operators::Calculus;
use crate::scalar::{Coefficient, GaussianRational, SymScalar, SymbolTable};

#[derive(Clone, PartialEq, Debug)]
pub struct Flags {
    /// No symbol occurs in the structure equations or in ω.
    pub constant_coefficient: bool,
    /// dω = 0 was established exactly.
    pub almost_kahler: bool,
    /// `c` with ω = (i·c/2) Σ φ^{jj̄}, when ω has that shape.
    pub unitary_scale: Option<BigRational>,
    /// μ̄ vanishes on every generator (hence μ = μ̄ = 0).
    pub integrable: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct ManifoldSpec {
    pub name: String,
    /// Complex dimension; the real dimension is `2n`.
    pub n: usize,
    pub symbols: SymbolTable,
    /// `dφʲ` for `j = 1..n`.
    pub structure: Vec<Form<SymScalar>>,
    pub omega: Form<SymScalar>,
    pub flags: Flags,
}

impl ManifoldSpec {
    /// Checks the structural invariants and computes the flags.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        symbols: SymbolTable,
        structure: Vec<Form<SymScalar>>,
        omega: Form<SymScalar>,
    ) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidSpec(format!("complex dimension {n} outside 1..={MAX_DIM}")));
        }
        if structure.len() != n {
            return Err(Error::InvalidSpec(format!("{} structure equations for {n} generators", structure.len())));
        }
        for (j, d) in structure.iter().enumerate() {
            if !d.is_zero() && d.degree() != Some(2) {
                return Err(Error::DegreeMismatch {
                    line: 0,
                    message: format!("d phi{} = {d} is not a pure 2-form", j + 1),
                });
            }
        }
        if omega.bidegree() != Some(Bidegree::new(1, 1)) {
            return Err(Error::DegreeMismatch { line: 0, message: format!("omega = {omega} is not a (1,1)-form") });
        }
        let all_forms = structure.iter().chain(std::iter::once(&omega));
        for f in all_forms.clone() {
            if f.max_index() > n {
                return Err(Error::InvalidSpec(format!("{f} uses a coframe index above {n}")));
            }
            for (_, c) in f.iter() {
                for s in c.symbols() {
                    if symbols.get(s.name()).is_none() {
                        return Err(Error::UnknownSymbol { name: s.name().to_string(), line: 0 });
                    }
                }
            }
        }
        if omega.conj() != omega {
            return Err(Error::NonRealOmega);
        }
        let constant_coefficient = all_forms.clone().all(|f| f.iter().all(|(_, c)| c.as_constant().is_some()));
        let unitary_scale = detect_unitary_scale(n, &omega);
        let integrable = structure.iter().all(|d| d.project(Bidegree::new(0, 2)).is_zero());
        let mut spec = Self {
            name: name.into(),
            n,
            symbols,
            structure,
            omega,
            flags: Flags { constant_coefficient, almost_kahler: false, unitary_scale, integrable },
        };
        let calc = Calculus::<SymScalar>::new(&spec)?;
        spec.flags.almost_kahler = matches!(calc.ext_d(&spec.omega), Ok(dw) if dw.is_zero());
        Ok(spec)
    }

    /// A constant-coefficient spec from complex structure equations.
    pub fn from_constant(
        name: impl Into<String>,
        n: usize,
        structure: Vec<Form<GaussianRational>>,
        omega: Form<GaussianRational>,
    ) -> Result<Self> {
        Self::new(name, n, SymbolTable::new(), structure.iter().map(|f| f.to_symbolic()).collect(), omega.to_symbolic())
    }

    /// A spec from a real presentation and a real fundamental form.
    pub fn from_real(name: impl Into<String>, real: &RealFramePresentation, omega: &FrameForm) -> Result<Self> {
        let n = real.pairing.n();
        let omega = real.pairing.complexify_form(omega);
        Self::from_constant(name, n, real.complexify(), omega)
    }

    /// The flat torus with the standard fundamental form.
    pub fn flat(name: impl Into<String>, n: usize) -> Result<Self> {
        Self::from_constant(name, n, vec![Form::zero(); n], standard_omega(n, &GaussianRational::one()))
    }

    pub fn is_unitary(&self) -> bool {
        self.flags.unitary_scale.is_some()
    }

    /// dφ^j for a 1-based holomorphic index, or its conjugate for φ̄^j.
    pub fn generator_differential(&self, generator: Monomial) -> Form<SymScalar> {
        if let Some(&j) = generator.holo_indices().first() {
            self.structure[j - 1].clone()
        } else {
            let j = generator.anti_indices()[0];
            self.structure[j - 1].conj()
        }
    }
}

fn detect_unitary_scale(n: usize, omega: &Form<SymScalar>) -> Option<BigRational> {
    let c11 = omega.coefficient(&Monomial::new(&[1], &[1])).as_constant()?;
    // ω_{11̄} = i·c/2  ⇒  c = −2i·ω_{11̄}
    let c = c11 * GaussianRational::from_ints(0, -2);
    if !c.is_real() || !c.re().is_positive() {
        return None;
    }
    let expected: Form<SymScalar> = standard_omega(n, &c);
    (expected == *omega).then(|| c.re().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_torus_flags() {
        let spec = ManifoldSpec::flat("t6", 3).unwrap();
        assert!(spec.flags.constant_coefficient);
        assert!(spec.flags.almost_kahler);
        assert!(spec.flags.integrable);
        assert_eq!(spec.flags.unitary_scale, Some(BigRational::one()));
    }

    #[test]
    fn non_closed_omega() {
        // dφ¹ = φ^{23}: dω = (i/2)(φ^{23}∧φ̄¹ − φ¹∧conj(φ^{23})) ≠ 0
        let mut structure = vec![Form::zero(); 3];
        structure[0] = Form::basis(Monomial::new(&[2, 3], &[]));
        let spec =
            ManifoldSpec::from_constant("bad", 3, structure, standard_omega(3, &GaussianRational::one())).unwrap();
        assert!(!spec.flags.almost_kahler);
        assert_eq!(spec.flags.unitary_scale, Some(BigRational::one()));
    }

    #[test]
    fn non_real_omega_rejected() {
        let omega = Form::basis(Monomial::new(&[1], &[1]));
        let err = ManifoldSpec::from_constant("x", 1, vec![Form::zero()], omega).unwrap_err();
        assert_eq!(err, Error::NonRealOmega);
    }
}
