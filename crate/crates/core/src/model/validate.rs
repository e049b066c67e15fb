use serde::Serialize;

use super::ManifoldSpec;
use crate::error::{Error, Result};
use crate::exterior::{Form, Monomial};
use crate::operators::SymCalculus;

#[derive(Clone, PartialEq, Debug, Serialize)]
#[serde(tag = "status", content = "detail")]
pub enum CheckStatus {
    Verified,
    /// The check needs the differential of an opaque symbol.
    SkippedOpaque(String),
    Failed(String),
    Unchecked,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub status: CheckStatus,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ValidationReport {
    pub spec_name: String,
    pub d_squared: Vec<GeneratorCheck>,
    pub omega_real: CheckStatus,
    pub omega_closed: CheckStatus,
    pub almost_kahler: bool,
    pub unitary_scale: Option<String>,
    pub positivity: CheckStatus,
    pub constant_coefficient: bool,
    pub integrable: bool,
}

impl ValidationReport {
    /// No check failed (skipped checks are not failures).
    pub fn is_clean(&self) -> bool {
        let failed = |s: &CheckStatus| matches!(s, CheckStatus::Failed(_));
        !self.d_squared.iter().any(|g| failed(&g.status)) && !failed(&self.omega_real) && !failed(&self.omega_closed)
    }
}

fn status_of(result: Result<Form<crate::scalar::SymScalar>>) -> Result<CheckStatus> {
    match result {
        Ok(f) if f.is_zero() => Ok(CheckStatus::Verified),
        Ok(f) => Ok(CheckStatus::Failed(f.to_string())),
        Err(Error::OpaqueDerivative(s)) => Ok(CheckStatus::SkippedOpaque(s)),
        Err(e) => Err(e),
    }
}

/// Structural checks: d² = 0 on every generator, ω real and closed, unitary
/// mode and positivity. Fails with `InvalidSpec` when d² ≠ 0 is established.
pub fn validate(spec: &ManifoldSpec) -> Result<ValidationReport> {
    let calc = SymCalculus::new(spec)?;
    let mut d_squared = Vec::with_capacity(spec.n);
    for j in 1..=spec.n {
        let status = status_of(calc.ext_d(&Form::basis(Monomial::holo(j))).and_then(|d| calc.ext_d(&d)))?;
        if let CheckStatus::Failed(w) = &status {
            return Err(Error::InvalidSpec(format!("d(d phi{j}) = {w} is not zero")));
        }
        d_squared.push(GeneratorCheck { generator: format!("phi{j}"), status });
    }
    let omega_real = if spec.omega.conj() == spec.omega {
        CheckStatus::Verified
    } else {
        return Err(Error::InvalidSpec(Error::NonRealOmega.to_string()));
    };
    let omega_closed = status_of(calc.ext_d(&spec.omega))?;
    let positivity = if spec.flags.constant_coefficient && spec.is_unitary() {
        CheckStatus::Verified
    } else {
        CheckStatus::Unchecked
    };
    Ok(ValidationReport {
        spec_name: spec.name.clone(),
        d_squared,
        omega_real,
        almost_kahler: omega_closed == CheckStatus::Verified,
        omega_closed,
        unitary_scale: spec.flags.unitary_scale.as_ref().map(|c| c.to_string()),
        positivity,
        constant_coefficient: spec.flags.constant_coefficient,
        integrable: spec.flags.integrable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::standard_omega;
    use crate::scalar::GaussianRational;
    use num_traits::One;

    #[test]
    fn flat_is_clean() {
        let r = validate(&ManifoldSpec::flat("t4", 2).unwrap()).unwrap();
        assert!(r.is_clean());
        assert!(r.almost_kahler);
        assert_eq!(r.positivity, CheckStatus::Verified);
        assert_eq!(r.unitary_scale.as_deref(), Some("1"));
    }

    #[test]
    fn d_squared_violation() {
        // dφ¹ = φ^{23}, dφ² = φ^{1 1̄}: d²φ¹ = φ^{1 1̄}∧φ³ = −φ^{13 1̄}
        let mut s = vec![Form::zero(); 3];
        s[0] = Form::basis(Monomial::new(&[2, 3], &[]));
        s[1] = Form::basis(Monomial::new(&[1], &[1]));
        let spec = ManifoldSpec::from_constant("bad", 3, s, standard_omega(3, &GaussianRational::one())).unwrap();
        assert!(matches!(validate(&spec), Err(Error::InvalidSpec(_))));
    }
}
