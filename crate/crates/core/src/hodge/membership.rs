use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::operators::{Differential, SymCalculus};
use crate::scalar::{Nonzeroness, SymScalar};

/// Outcome of a pointwise harmonicity test.
#[derive(Clone, PartialEq, Debug)]
pub enum Membership {
    Harmonic,
    /// `equation` names the failing condition, `witness` is its nonzero value
    /// and `nonzeroness` the strongest guarantee among its coefficients.
    NotHarmonic {
        equation: String,
        witness: Form<SymScalar>,
        nonzeroness: Nonzeroness,
    },
    /// A needed symbol derivative is opaque.
    Unknown(String),
}

impl Membership {
    pub fn is_harmonic(&self) -> bool {
        matches!(self, Membership::Harmonic)
    }
}

impl Serialize for Membership {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        match self {
            Membership::Harmonic => map.serialize_entry("status", "Harmonic")?,
            Membership::NotHarmonic { equation, witness, nonzeroness } => {
                map.serialize_entry("status", "NotHarmonic")?;
                map.serialize_entry("equation", equation)?;
                map.serialize_entry("witness", &crate::report::form_json(witness))?;
                map.serialize_entry("nonzeroness", nonzeroness)?;
            }
            Membership::Unknown(why) => {
                map.serialize_entry("status", "Unknown")?;
                map.serialize_entry("reason", why)?;
            }
        }
        map.end()
    }
}

fn rank(n: Nonzeroness) -> u8 {
    match n {
        Nonzeroness::Zero => 0,
        Nonzeroness::NonzeroFormal => 1,
        Nonzeroness::NonzeroDeclared => 2,
        Nonzeroness::NonzeroConstant => 3,
    }
}

/// Tests `Δ_D a = 0` for D ∈ {∂, ∂̄} through `D a = 0` and `D̄(*a) = 0`.
pub fn harmonic_membership(calc: &SymCalculus, which: Differential, a: &Form<SymScalar>) -> Result<Membership> {
    if !matches!(which, Differential::Del | Differential::Delbar) {
        return Err(Error::InvalidInput(format!("harmonic membership is defined for del and delbar, not {which}")));
    }
    let conj = which.conj();
    let equations: [(String, Box<dyn Fn() -> Result<Form<SymScalar>>>); 2] = [
        (format!("{which} a"), Box::new(|| calc.differential(which, a))),
        (format!("{conj}(*a)"), Box::new(|| calc.differential(conj, &calc.star(a)?))),
    ];
    for (equation, eval) in equations {
        let value = match eval() {
            Ok(v) => v,
            Err(Error::OpaqueDerivative(s)) => return Ok(Membership::Unknown(format!("derivative of {s} is opaque"))),
            Err(e) => return Err(e),
        };
        if !value.is_zero() {
            let nonzeroness =
                value.iter().map(|(_, c)| c.nonzeroness()).max_by_key(|n| rank(*n)).unwrap_or(Nonzeroness::Zero);
            return Ok(Membership::NotHarmonic { equation, witness: value, nonzeroness });
        }
    }
    Ok(Membership::Harmonic)
}
