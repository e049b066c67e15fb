use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Coefficient, Conjugate, GaussianRational};
use crate::error::{Error, Result};
use crate::exterior::Form;

/// A formal function symbol as it appears inside [`SymScalar`] monomials.
///
/// The atom carries its own conjugate name and the attributes that the
/// ring operations need, so conjugation, inversion and nonvanishing reports
/// never have to consult a table.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol {
    name: Arc<str>,
    conj: Arc<str>,
    nonzero: bool,
    invertible: bool,
}

impl Symbol {
    /// A real-valued symbol (its own conjugate).
    pub fn real(name: &str, nonzero: bool, invertible: bool) -> Self {
        let name: Arc<str> = Arc::from(name);
        Self { conj: name.clone(), name, nonzero, invertible }
    }

    /// A complex symbol whose conjugate is the symbol named `conj`.
    pub fn paired(name: &str, conj: &str, nonzero: bool, invertible: bool) -> Self {
        Self { name: Arc::from(name), conj: Arc::from(conj), nonzero, invertible }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn conj_name(&self) -> &str {
        &self.conj
    }

    pub fn is_real(&self) -> bool {
        self.name == self.conj
    }

    pub fn is_nonzero(&self) -> bool {
        self.nonzero
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    /// The conjugate atom; nonvanishing and invertibility are shared by a pair.
    pub fn conjugate(&self) -> Self {
        Self { name: self.conj.clone(), conj: self.name.clone(), nonzero: self.nonzero, invertible: self.invertible }
    }
}

/// A product of symbol powers with nonzero integer exponents, sorted by symbol.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LaurentMonomial(Vec<(Symbol, i32)>);

impl LaurentMonomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn symbol(s: Symbol) -> Self {
        Self(vec![(s, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Symbol, i32)>) -> Self {
        let mut acc: BTreeMap<Symbol, i32> = BTreeMap::new();
        for (s, e) in powers {
            *acc.entry(s).or_insert(0) += e;
        }
        Self(acc.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn powers(&self) -> &[(Symbol, i32)] {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_powers(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn conj(&self) -> Self {
        Self::from_powers(self.0.iter().map(|(s, e)| (s.conjugate(), *e)))
    }

    fn inverse(&self) -> Self {
        Self(self.0.iter().map(|(s, e)| (s.clone(), -e)).collect())
    }
}

impl fmt::Display for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            f.write_str(s.name())?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Three-valued (plus zero) nonvanishing report for a symbolic scalar.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum Nonzeroness {
    Zero,
    NonzeroConstant,
    /// A single monomial whose symbols are all declared nonvanishing.
    NonzeroDeclared,
    /// Nonzero as a formal expression; pointwise vanishing is not excluded.
    NonzeroFormal,
}

impl Nonzeroness {
    pub fn is_nonzero(self) -> bool {
        !matches!(self, Nonzeroness::Zero)
    }
}

/// A Laurent polynomial over ℚ(i) in function symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SymScalar {
    terms: BTreeMap<LaurentMonomial, GaussianRational>,
}

impl SymScalar {
    pub fn from_constant(c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(LaurentMonomial::one(), c);
        }
        Self { terms }
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::monomial(GaussianRational::one(), LaurentMonomial::symbol(s))
    }

    pub fn monomial(c: GaussianRational, m: LaurentMonomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LaurentMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every symbol occurring in the scalar.
    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(s, _)| s))
    }

    fn add_term(&mut self, m: LaurentMonomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Multiplicative inverse of a nonzero constant or of a single monomial
    /// in invertible symbols.
    pub fn invert(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        if let Some((s, _)) = m.0.iter().find(|(s, _)| !s.is_invertible()) {
            return Err(Error::NotInvertible(format!("{self} (symbol {} is not invertible)", s.name())));
        }
        let inv = c.inv().expect("stored coefficients are nonzero");
        Ok(Self::monomial(inv, m.inverse()))
    }

    pub fn nonzeroness(&self) -> Nonzeroness {
        if self.terms.is_empty() {
            return Nonzeroness::Zero;
        }
        if self.as_constant().is_some() {
            return Nonzeroness::NonzeroConstant;
        }
        if self.terms.len() == 1 {
            let m = self.terms.keys().next().expect("one term");
            if m.0.iter().all(|(s, _)| s.is_nonzero()) {
                return Nonzeroness::NonzeroDeclared;
            }
        }
        Nonzeroness::NonzeroFormal
    }

    /// The exterior derivative of the scalar, computed from the declared
    /// differentials of its symbols.
    pub fn differential(&self, table: &SymbolTable) -> Result<Form<SymScalar>> {
        let mut out = Form::zero();
        for (m, c) in &self.terms {
            for (k, (s, e)) in m.0.iter().enumerate() {
                let ds = table.differential_of(s.name())?;
                let mut rest = m.0.clone();
                rest[k].1 -= 1;
                let factor =
                    SymScalar::monomial(c * &GaussianRational::integer(*e as i64), LaurentMonomial::from_powers(rest));
                out = out + ds.scale(&factor);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SymScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let term = if m.is_one() {
                c.to_string()
            } else if c.is_one() {
                m.to_string()
            } else if *c == -GaussianRational::one() {
                format!("-{m}")
            } else if c.is_compound() {
                format!("({c})*{m}")
            } else {
                format!("{c}*{m}")
            };
            if k > 0 && !term.starts_with('-') {
                f.write_str("+")?;
            }
            f.write_str(&term)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Zero for SymScalar {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for SymScalar {
    fn one() -> Self {
        Self::from_constant(GaussianRational::one())
    }
}

impl Add for SymScalar {
    type Output = SymScalar;
    fn add(mut self, rhs: SymScalar) -> SymScalar {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for SymScalar {
    type Output = SymScalar;
    fn sub(self, rhs: SymScalar) -> SymScalar {
        self + (-rhs)
    }
}

impl Neg for SymScalar {
    type Output = SymScalar;
    fn neg(self) -> SymScalar {
        Self { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Mul for SymScalar {
    type Output = SymScalar;
    fn mul(self, rhs: SymScalar) -> SymScalar {
        &self * &rhs
    }
}

impl<'a> Mul<&'a SymScalar> for &'a SymScalar {
    type Output = SymScalar;
    fn mul(self, rhs: &SymScalar) -> SymScalar {
        let mut out = SymScalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Conjugate for SymScalar {
    fn conj(&self) -> Self {
        let mut out = SymScalar::zero();
        for (m, c) in &self.terms {
            out.add_term(m.conj(), c.conj());
        }
        out
    }
}

impl From<GaussianRational> for SymScalar {
    fn from(c: GaussianRational) -> Self {
        Self::from_constant(c)
    }
}

impl Coefficient for SymScalar {
    fn constant(c: GaussianRational) -> Self {
        Self::from_constant(c)
    }

    fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }
}

/// How the exterior derivative of a symbol is known.
#[derive(Clone, PartialEq, Debug)]
pub enum Derivative {
    Opaque,
    Form(Form<SymScalar>),
}

/// A declared function symbol together with its differential.
#[derive(Clone, PartialEq, Debug)]
pub struct FunctionSymbol {
    pub symbol: Symbol,
    pub derivative: Derivative,
}

/// Declared symbols, keyed by name.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct SymbolTable {
    entries: BTreeMap<String, FunctionSymbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, entry: FunctionSymbol) {
        self.entries.insert(entry.symbol.name().to_string(), entry);
    }

    pub fn get(&self, name: &str) -> Option<&FunctionSymbol> {
        self.entries.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FunctionSymbol> {
        self.entries.values()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `d(name)`: the declared form, or the conjugate of the partner's
    /// declared form when only the partner carries one.
    pub fn differential_of(&self, name: &str) -> Result<Form<SymScalar>> {
        let entry = self.get(name).ok_or_else(|| Error::UnknownSymbol { name: name.to_string(), line: 0 })?;
        match &entry.derivative {
            Derivative::Form(f) => Ok(f.clone()),
            Derivative::Opaque => {
                if !entry.symbol.is_real() {
                    if let Some(FunctionSymbol { derivative: Derivative::Form(f), .. }) =
                        self.get(entry.symbol.conj_name())
                    {
                        return Ok(f.conj());
                    }
                }
                Err(Error::OpaqueDerivative(name.to_string()))
            }
        }
    }
}
