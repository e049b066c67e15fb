use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// `d` or one of its four bidegree components.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Differential {
    D,
    Mu,
    Del,
    Delbar,
    Mubar,
}

impl Differential {
    pub const ALL: [Differential; 5] =
        [Differential::D, Differential::Mu, Differential::Del, Differential::Delbar, Differential::Mubar];

    /// Bidegree shift of a component; `None` for `d` itself.
    pub fn shift(self) -> Option<(isize, isize)> {
        match self {
            Differential::D => None,
            Differential::Mu => Some((2, -1)),
            Differential::Del => Some((1, 0)),
            Differential::Delbar => Some((0, 1)),
            Differential::Mubar => Some((-1, 2)),
        }
    }

    /// The complex-conjugate operator: μ ↔ μ̄, ∂ ↔ ∂̄, d ↔ d.
    pub fn conj(self) -> Self {
        match self {
            Differential::D => Differential::D,
            Differential::Mu => Differential::Mubar,
            Differential::Del => Differential::Delbar,
            Differential::Delbar => Differential::Del,
            Differential::Mubar => Differential::Mu,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Differential::D => "d",
            Differential::Mu => "mu",
            Differential::Del => "del",
            Differential::Delbar => "delbar",
            Differential::Mubar => "mubar",
        }
    }
}

impl fmt::Display for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Differential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Differential::ALL.into_iter().find(|d| d.name() == s).ok_or_else(|| {
            Error::InvalidInput(format!("unknown differential `{s}` (expected d, mu, del, delbar, mubar)"))
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum OperatorId {
    Diff(Differential),
    Dc,
    Star,
    L,
    Lambda,
    J,
    Adjoint(Differential),
    Laplacian(Differential),
}

impl OperatorId {
    pub fn all() -> Vec<OperatorId> {
        let mut out: Vec<OperatorId> = Differential::ALL.into_iter().map(OperatorId::Diff).collect();
        out.extend([OperatorId::Dc, OperatorId::Star, OperatorId::L, OperatorId::Lambda, OperatorId::J]);
        out.extend(Differential::ALL.into_iter().map(OperatorId::Adjoint));
        out.extend(Differential::ALL.into_iter().map(OperatorId::Laplacian));
        out
    }

    /// Whether the operator is built from the Hodge star.
    pub fn needs_unitary(self) -> bool {
        matches!(self, OperatorId::Star | OperatorId::Lambda | OperatorId::Adjoint(_) | OperatorId::Laplacian(_))
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorId::Diff(d) => write!(f, "{d}"),
            OperatorId::Dc => f.write_str("dc"),
            OperatorId::Star => f.write_str("star"),
            OperatorId::L => f.write_str("L"),
            OperatorId::Lambda => f.write_str("Lambda"),
            OperatorId::J => f.write_str("J"),
            OperatorId::Adjoint(d) => write!(f, "{d}_star"),
            OperatorId::Laplacian(d) => write!(f, "Delta_{d}"),
        }
    }
}

impl FromStr for OperatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        OperatorId::all()
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown operator `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let all = OperatorId::all();
        assert_eq!(all.len(), 20);
        for id in all {
            assert_eq!(id.to_string().parse::<OperatorId>().unwrap(), id);
        }
        assert_eq!(OperatorId::Laplacian(Differential::Delbar).to_string(), "Delta_delbar");
        assert_eq!(OperatorId::Adjoint(Differential::Mu).to_string(), "mu_star");
    }
}
