//! The bigraded exterior algebra over a (1,0)-coframe φ¹..φⁿ.
//!
//! A basis monomial is φ^I ∧ φ̄^J with both index sets ascending and all
//! holomorphic factors first. Every sign in the crate comes from this single
//! ordering: a monomial is stored as a bitmask whose low half holds I and
//! whose high half holds J, so the canonical order of factors is the order
//! of bits.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::scalar::{Coefficient, GaussianRational};

/// Largest supported complex dimension. Monomials render indices as single
/// digits, so this is also a limit of the text formats.
pub const MAX_DIM: usize = 9;

const ANTI_SHIFT: u32 = 16;
const HALF_MASK: u32 = (1 << ANTI_SHIFT) - 1;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize)]
pub struct Bidegree {
    pub p: usize,
    pub q: usize,
}

impl Bidegree {
    pub const fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn degree(self) -> usize {
        self.p + self.q
    }

    pub fn conj(self) -> Self {
        Self::new(self.q, self.p)
    }

    /// Bidegree shifted by `(dp, dq)`, if it stays inside `[0, n]²`.
    pub fn shifted(self, dp: isize, dq: isize, n: usize) -> Option<Self> {
        let p = self.p as isize + dp;
        let q = self.q as isize + dq;
        (p >= 0 && q >= 0 && p as usize <= n && q as usize <= n).then(|| Self::new(p as usize, q as usize))
    }

    pub fn is_valid(self, n: usize) -> bool {
        self.p <= n && self.q <= n
    }

    /// Every bidegree of `Λ^{•,•}` for complex dimension `n`, in `(p, q)` order.
    pub fn all(n: usize) -> impl Iterator<Item = Bidegree> {
        (0..=n).flat_map(move |p| (0..=n).map(move |q| Bidegree::new(p, q)))
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// A basis monomial φ^I ∧ φ̄^J.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    bits: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { bits: 0 };

    /// Builds φ^I ∧ φ̄^J from 1-based index sets. Returns `None` on a repeated
    /// index or an index outside `1..=MAX_DIM`; the result is the monomial
    /// with its indices sorted, and no sign is applied.
    pub fn from_sets(holo: &[usize], anti: &[usize]) -> Option<Self> {
        let mut bits = 0u32;
        for (&j, shift) in holo.iter().map(|j| (j, 0)).chain(anti.iter().map(|j| (j, ANTI_SHIFT))) {
            if j == 0 || j > MAX_DIM {
                return None;
            }
            let bit = 1u32 << (j - 1 + shift as usize);
            if bits & bit != 0 {
                return None;
            }
            bits |= bit;
        }
        Some(Self { bits })
    }

    /// Convenience constructor for literal index sets; panics on invalid input.
    pub fn new(holo: &[usize], anti: &[usize]) -> Self {
        Self::from_sets(holo, anti).expect("valid monomial index sets")
    }

    pub fn holo(j: usize) -> Self {
        Self::new(&[j], &[])
    }

    pub fn anti(j: usize) -> Self {
        Self::new(&[], &[j])
    }

    pub(crate) fn bits(self) -> u32 {
        self.bits
    }

    pub(crate) fn from_bits(bits: u32) -> Self {
        Self { bits }
    }

    fn holo_bits(self) -> u32 {
        self.bits & HALF_MASK
    }

    fn anti_bits(self) -> u32 {
        self.bits >> ANTI_SHIFT
    }

    pub fn holo_indices(self) -> Vec<usize> {
        indices(self.holo_bits())
    }

    pub fn anti_indices(self) -> Vec<usize> {
        indices(self.anti_bits())
    }

    pub fn bidegree(self) -> Bidegree {
        Bidegree::new(self.holo_bits().count_ones() as usize, self.anti_bits().count_ones() as usize)
    }

    pub fn degree(self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Highest coframe index used (0 for the unit monomial).
    pub fn max_index(self) -> usize {
        let merged = self.holo_bits() | self.anti_bits();
        (32 - merged.leading_zeros()) as usize
    }

    /// `self ∧ other` as `(sign, monomial)`, or `None` when a factor repeats.
    pub fn wedge(self, other: Monomial) -> Option<(i8, Monomial)> {
        wedge_bits(self.bits, other.bits).map(|(s, b)| (s, Monomial { bits: b }))
    }

    /// The conjugate monomial with its reordering sign:
    /// conj(φ^I∧φ̄^J) = φ̄^I∧φ^J = (−1)^{|I||J|} φ^J∧φ̄^I.
    pub fn conj(self) -> (i8, Monomial) {
        let (p, q) = (self.holo_bits().count_ones(), self.anti_bits().count_ones());
        let sign = if (p * q) % 2 == 0 { 1 } else { -1 };
        (sign, Monomial { bits: self.anti_bits() | (self.holo_bits() << ANTI_SHIFT) })
    }

    /// The factors in canonical order: holomorphic (false, j) then antiholomorphic (true, j).
    pub fn factors(self) -> Vec<Monomial> {
        let mut out = Vec::with_capacity(self.degree());
        let mut b = self.bits;
        while b != 0 {
            let low = b & b.wrapping_neg();
            out.push(Monomial { bits: low });
            b ^= low;
        }
        out
    }
}

fn indices(mut b: u32) -> Vec<usize> {
    let mut out = Vec::new();
    while b != 0 {
        out.push(b.trailing_zeros() as usize + 1);
        b &= b - 1;
    }
    out
}

/// Wedge of two generator bitmasks in the ascending-bit order: the sign is
/// the parity of pairs `(a, b)` with `a ∈ A`, `b ∈ B`, `a > b`.
pub(crate) fn wedge_bits(a: u32, b: u32) -> Option<(i8, u32)> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        let above = !((low << 1).wrapping_sub(1));
        inversions += (a & above).count_ones();
        rest ^= low;
    }
    Some((if inversions % 2 == 0 { 1 } else { -1 }, a | b))
}

/// Lexicographic comparison of two equal-size index sets: the set holding the
/// lowest element of the symmetric difference comes first.
fn lex_cmp(a: u32, b: u32) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let diff = a ^ b;
    let low = diff & diff.wrapping_neg();
    if a & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl Ord for Monomial {
    /// Total degree, then `p`, then `I` and `J` lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.holo_bits().count_ones().cmp(&other.holo_bits().count_ones()))
            .then_with(|| lex_cmp(self.holo_bits(), other.holo_bits()))
            .then_with(|| lex_cmp(self.anti_bits(), other.anti_bits()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("phi{")?;
        for j in self.holo_indices() {
            write!(f, "{j}")?;
        }
        f.write_str(",")?;
        for j in self.anti_indices() {
            write!(f, "{j}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn subsets(n: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for j in start..n {
            if n - j < k {
                break;
            }
            rec(j + 1, n, k - 1, acc | (1 << j), out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, 0, &mut out);
    out
}

/// The ordered basis of Λ^{p,q}: lexicographic in `I`, then in `J`.
/// This order is the column convention of every operator matrix.
pub fn basis_of(pq: Bidegree, n: usize) -> Vec<Monomial> {
    if !pq.is_valid(n) {
        return Vec::new();
    }
    let holo = subsets(n, pq.p);
    let anti = subsets(n, pq.q);
    let mut out = Vec::with_capacity(holo.len() * anti.len());
    for &h in &holo {
        for &a in &anti {
            out.push(Monomial { bits: h | (a << ANTI_SHIFT) });
        }
    }
    out
}

/// A space of forms on which operators act: one bidegree or a whole degree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Space {
    Bidegree(Bidegree),
    Degree(usize),
    /// The zero space, e.g. the target of μ on `Λ^{p,0}`.
    Empty,
}

impl Space {
    pub fn degree(self) -> usize {
        match self {
            Space::Bidegree(b) => b.degree(),
            Space::Degree(k) => k,
            Space::Empty => 0,
        }
    }

    /// Bidegrees making up the space, in basis order.
    pub fn bidegrees(self, n: usize) -> Vec<Bidegree> {
        match self {
            Space::Bidegree(b) => {
                if b.is_valid(n) {
                    vec![b]
                } else {
                    Vec::new()
                }
            }
            Space::Degree(k) => {
                if k > 2 * n {
                    return Vec::new();
                }
                (k.saturating_sub(n)..=k.min(n)).map(|p| Bidegree::new(p, k - p)).collect()
            }
            Space::Empty => Vec::new(),
        }
    }

    pub fn basis(self, n: usize) -> Vec<Monomial> {
        self.bidegrees(n).into_iter().flat_map(|b| basis_of(b, n)).collect()
    }

    pub fn dim(self, n: usize) -> usize {
        self.bidegrees(n).iter().map(|b| binomial(n, b.p) * binomial(n, b.q)).sum()
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Bidegree(b) => write!(f, "{b}"),
            Space::Degree(k) => write!(f, "degree {k}"),
            Space::Empty => write!(f, "0"),
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, j| acc * (n - j) / (j + 1))
}

/// A finite linear combination of basis monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Default for Form<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Form<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut f = Self::zero();
        f.add_term(m, c);
        f
    }

    pub fn basis(m: Monomial) -> Self {
        Self::monomial(m, C::one())
    }

    /// A degree-0 form.
    pub fn scalar(c: C) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut f = Self::zero();
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(m, v)| (*m, v.clone() * c.clone())))
    }

    pub fn scale_const(&self, c: &GaussianRational) -> Self {
        self.scale(&C::constant(c.clone()))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = ma.wedge(*mb) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// The `(p, q)` component.
    pub fn project(&self, pq: Bidegree) -> Self {
        Self { terms: self.terms.iter().filter(|(m, _)| m.bidegree() == pq).map(|(m, c)| (*m, c.clone())).collect() }
    }

    /// All nonzero bidegree components.
    pub fn parts(&self) -> BTreeMap<Bidegree, Self> {
        let mut out: BTreeMap<Bidegree, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.bidegree()).or_insert_with(Self::zero).terms.insert(*m, c.clone());
        }
        out
    }

    /// The common bidegree of all terms; `None` for zero or mixed forms.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(|m| m.bidegree());
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// The common total degree of all terms; `None` for zero or mixed forms.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|k| k == first).then_some(first)
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().map(|m| m.max_index()).max().unwrap_or(0)
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (sign, cm) = m.conj();
            let cc = c.conj();
            out.add_term(cm, if sign < 0 { -cc } else { cc });
        }
        out
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        Form::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Coefficients of a form in an ordered basis. `None` if the form has a
    /// term outside the basis.
    pub fn coordinates(&self, basis: &[Monomial]) -> Option<Vec<C>> {
        let index: BTreeMap<Monomial, usize> = basis.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        let mut out = vec![C::zero(); basis.len()];
        for (m, c) in &self.terms {
            out[*index.get(m)?] = c.clone();
        }
        Some(out)
    }

    pub fn from_coordinates(basis: &[Monomial], coords: &[C]) -> Self {
        Self::from_terms(basis.iter().copied().zip(coords.iter().cloned()))
    }

    /// Constant-coefficient version of the form, if every coefficient is constant.
    pub fn to_constant(&self) -> Option<Form<GaussianRational>> {
        let mut out = Form::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.as_constant()?);
        }
        Some(out)
    }

    pub fn lift<D: Coefficient>(&self) -> Form<D>
    where
        C: Into<GaussianRational>,
    {
        self.map_coefficients(|c| D::constant(c.clone().into()))
    }

    /// `ω ∧ … ∧ ω` (`k` factors); `k = 0` gives the unit.
    pub fn power(&self, k: usize) -> Self {
        let mut acc = Self::scalar(C::one());
        for _ in 0..k {
            acc = acc.wedge(self);
        }
        acc
    }
}

impl Form<GaussianRational> {
    pub fn to_symbolic<D: Coefficient>(&self) -> Form<D> {
        self.map_coefficients(|c| D::constant(c.clone()))
    }
}

impl<C: Coefficient> Add for Form<C> {
    type Output = Form<C>;
    fn add(mut self, rhs: Form<C>) -> Form<C> {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Coefficient> Sub for Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: Form<C>) -> Form<C> {
        self + (-rhs)
    }
}

impl<C: Coefficient> Neg for Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        Form { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<C: Coefficient> std::iter::Sum for Form<C> {
    fn sum<I: Iterator<Item = Form<C>>>(iter: I) -> Self {
        iter.fold(Form::zero(), |acc, f| acc + f)
    }
}

fn needs_parens<C: Coefficient>(c: &C) -> bool {
    let s = c.to_string().replace("^-", "^");
    let body = s.strip_prefix('-').unwrap_or(&s);
    body.contains('+') || body.contains('-')
}

/// Renders in the `.akspec` expression syntax, e.g. `-1/4*F*phi{12,}+phi{,12}`.
impl<C: Coefficient> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let term = if *m == Monomial::ONE {
                if needs_parens(c) {
                    format!("({c})")
                } else {
                    c.to_string()
                }
            } else if c.is_one() {
                m.to_string()
            } else if (-c.clone()).is_one() {
                format!("-{m}")
            } else if needs_parens(c) {
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

impl<C: Coefficient> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The standard fundamental form `(i·c/2) Σ_j φ^{j j̄}`.
pub fn standard_omega<C: Coefficient>(n: usize, scale: &GaussianRational) -> Form<C> {
    let coeff = GaussianRational::i() * scale.clone() * GaussianRational::ratio(1, 2);
    Form::from_terms((1..=n).map(|j| (Monomial::new(&[j], &[j]), C::constant(coeff.clone()))))
}

/// The unit 0-form.
pub fn unit<C: Coefficient>() -> Form<C> {
    Form::scalar(C::one())
}
