//! Real coframes e¹..e^{2n} and their complexification φʲ = e^{aⱼ} + i e^{bⱼ}.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{wedge_bits, Form, Monomial};
use crate::scalar::GaussianRational;

/// A form in a real frame e¹..e^m (generator `a` is bit `a − 1`), with
/// coefficients in ℚ(i) so that complex combinations can be represented.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FrameForm {
    terms: BTreeMap<u32, GaussianRational>,
}

impl FrameForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `Σ c · e^{I}` from 1-based index lists; unsorted lists are reordered
    /// with the permutation sign, repeated indices give zero.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (&'a [usize], GaussianRational)>) -> Self {
        let mut out = Self::zero();
        for (idx, c) in terms {
            let mut acc: Option<(i8, u32)> = Some((1, 0));
            for &a in idx {
                acc = acc.and_then(|(s, bits)| wedge_bits(bits, 1 << (a - 1)).map(|(t, b)| (s * t, b)));
            }
            if let Some((sign, bits)) = acc {
                out.add_term(bits, if sign < 0 { -c } else { c });
            }
        }
        out
    }

    /// Integer-coefficient shorthand: `[(&[1, 3], -1), (&[2, 4], 1)]` is −e^{13} + e^{24}.
    pub fn from_int_terms(terms: &[(&[usize], i64)]) -> Self {
        Self::from_terms(terms.iter().map(|(idx, c)| (*idx, GaussianRational::integer(*c))))
    }

    pub(crate) fn add_term(&mut self, bits: u32, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(bits).or_insert_with(GaussianRational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&bits);
        }
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (u32, &GaussianRational)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as ascending 1-based index lists.
    pub fn entries(&self) -> Vec<(Vec<usize>, GaussianRational)> {
        self.terms
            .iter()
            .map(|(&b, c)| ((0..32).filter(|i| b & (1 << i) != 0).map(|i| i + 1).collect(), c.clone()))
            .collect()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Real and imaginary parts as real frame forms.
    pub fn split(&self) -> (FrameForm, FrameForm) {
        let mut re = Self::zero();
        let mut im = Self::zero();
        for (&b, c) in &self.terms {
            re.add_term(b, GaussianRational::real(c.re().clone()));
            im.add_term(b, GaussianRational::real(c.im().clone()));
        }
        (re, im)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (&b, v) in &self.terms {
            out.add_term(b, v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&b, c) in &other.terms {
            out.add_term(b, c.clone());
        }
        out
    }
}

impl fmt::Display for FrameForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&b, c)) in self.terms.iter().enumerate() {
            let mut idx = String::new();
            let mut rest = b;
            while rest != 0 {
                idx.push_str(&(rest.trailing_zeros() + 1).to_string());
                rest &= rest - 1;
            }
            let coeff = if c.is_one() {
                String::new()
            } else if *c == -GaussianRational::one() {
                "-".to_string()
            } else if c.is_compound() {
                format!("({c})*")
            } else {
                format!("{c}*")
            };
            if k > 0 && !coeff.starts_with('-') {
                f.write_str("+")?;
            }
            write!(f, "{coeff}e{{{idx}}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FrameForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Multiplies out a product of generators given each generator's image as a
/// combination of target monomials. `factors` are single-bit masks in the
/// source order; the result is keyed by target bitmasks.
pub(crate) fn expand_product(
    factors: &[u32],
    image: impl Fn(u32) -> Vec<(u32, GaussianRational)>,
) -> BTreeMap<u32, GaussianRational> {
    let mut acc: BTreeMap<u32, GaussianRational> = BTreeMap::new();
    acc.insert(0, GaussianRational::one());
    for &g in factors {
        let img = image(g);
        let mut next: BTreeMap<u32, GaussianRational> = BTreeMap::new();
        for (bits, c) in &acc {
            for (tb, tc) in &img {
                if let Some((sign, nb)) = wedge_bits(*bits, *tb) {
                    let mut v = c * tc;
                    if sign < 0 {
                        v = -v;
                    }
                    let e = next.entry(nb).or_insert_with(GaussianRational::zero);
                    *e += &v;
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        acc = next;
    }
    acc
}

pub(crate) fn single_bits(mut bits: u32) -> Vec<u32> {
    let mut out = Vec::new();
    while bits != 0 {
        let low = bits & bits.wrapping_neg();
        out.push(low);
        bits ^= low;
    }
    out
}

/// The pairing `φʲ = e^{aⱼ} + i e^{bⱼ}` between a real and a complex coframe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pairing {
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    /// Validates that the pairs form a perfect matching of `{1..2n}`.
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let m = 2 * pairs.len();
        let mut seen = vec![false; m + 1];
        for &(a, b) in &pairs {
            for x in [a, b] {
                if x == 0 || x > m || seen[x] {
                    return Err(Error::InvalidInput(format!("pairing {pairs:?} is not a perfect matching of 1..{m}")));
                }
                seen[x] = true;
            }
        }
        Ok(Self { pairs })
    }

    /// `φʲ = e^{2j−1} + i e^{2j}`.
    pub fn standard(n: usize) -> Self {
        Self { pairs: (1..=n).map(|j| (2 * j - 1, 2 * j)).collect() }
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Image of real generator `e^a` (single bit) in the complex monomial basis.
    fn real_to_complex(&self, bit: u32) -> Vec<(u32, GaussianRational)> {
        let a = bit.trailing_zeros() as usize + 1;
        let half = GaussianRational::ratio(1, 2);
        for (j, &(ra, rb)) in self.pairs.iter().enumerate() {
            let h = Monomial::holo(j + 1).bits();
            let ah = Monomial::anti(j + 1).bits();
            if a == ra {
                // e^a = (φ + φ̄)/2
                return vec![(h, half.clone()), (ah, half)];
            }
            if a == rb {
                // e^b = (φ − φ̄)/(2i) = −(i/2)φ + (i/2)φ̄
                let ih = GaussianRational::i() * half;
                return vec![(h, -ih.clone()), (ah, ih)];
            }
        }
        unreachable!("pairing covers every real generator")
    }

    /// Image of a complex generator (single bit of a [`Monomial`]) in the real frame.
    fn complex_to_real(&self, bit: u32) -> Vec<(u32, GaussianRational)> {
        let m = Monomial::from_bits(bit);
        let (j, anti) = match (m.holo_indices().first(), m.anti_indices().first()) {
            (Some(&j), None) => (j, false),
            (None, Some(&j)) => (j, true),
            _ => unreachable!("single generator"),
        };
        let (a, b) = self.pairs[j - 1];
        let i = if anti { -GaussianRational::i() } else { GaussianRational::i() };
        vec![(1 << (a - 1), GaussianRational::one()), (1 << (b - 1), i)]
    }

    /// Rewrites a real-frame form in the complex monomial basis.
    pub fn complexify_form(&self, form: &FrameForm) -> Form<GaussianRational> {
        let mut out = Form::zero();
        for (bits, c) in form.terms() {
            for (tb, tc) in expand_product(&single_bits(bits), |g| self.real_to_complex(g)) {
                out.add_term(Monomial::from_bits(tb), c * &tc);
            }
        }
        out
    }

    /// Rewrites a complex form in the real frame.
    pub fn realify_form(&self, form: &Form<GaussianRational>) -> FrameForm {
        let mut out = FrameForm::zero();
        for (m, c) in form.iter() {
            for (tb, tc) in expand_product(&single_bits(m.bits()), |g| self.complex_to_real(g)) {
                out.add_term(tb, c * &tc);
            }
        }
        out
    }
}

/// Structure equations of a real coframe together with the complex pairing.
#[derive(Clone, PartialEq, Debug)]
pub struct RealFramePresentation {
    /// `de^a` for `a = 1..2n`.
    pub differentials: Vec<FrameForm>,
    pub pairing: Pairing,
}

impl RealFramePresentation {
    pub fn new(differentials: Vec<FrameForm>, pairing: Pairing) -> Result<Self> {
        if differentials.len() != 2 * pairing.n() {
            return Err(Error::InvalidInput(format!(
                "{} real differentials for a pairing of {} complex generators",
                differentials.len(),
                pairing.n()
            )));
        }
        if let Some(bad) = differentials.iter().find(|f| !f.is_real()) {
            return Err(Error::InvalidInput(format!("real structure equation has complex coefficients: {bad}")));
        }
        Ok(Self { differentials, pairing })
    }

    /// `dφʲ = de^{aⱼ} + i de^{bⱼ}` rewritten in the complex monomial basis.
    pub fn complexify(&self) -> Vec<Form<GaussianRational>> {
        self.pairing
            .pairs()
            .iter()
            .map(|&(a, b)| {
                let combined = self.differentials[a - 1].add(&self.differentials[b - 1].scale(&GaussianRational::i()));
                self.pairing.complexify_form(&combined)
            })
            .collect()
    }

    /// Recovers `de^a` from complex structure equations: `de^{aⱼ} = Re dφʲ`,
    /// `de^{bⱼ} = Im dφʲ` after substituting `φʲ = e^{aⱼ} + i e^{bⱼ}`.
    pub fn realify(pairing: &Pairing, structure: &[Form<GaussianRational>]) -> Vec<FrameForm> {
        let mut out = vec![FrameForm::zero(); 2 * pairing.n()];
        for (&(a, b), d) in pairing.pairs().iter().zip(structure) {
            let (re, im) = pairing.realify_form(d).split();
            out[a - 1] = re;
            out[b - 1] = im;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_must_be_matching() {
        assert!(Pairing::new(vec![(1, 2), (2, 3)]).is_err());
        assert!(Pairing::new(vec![(1, 6), (2, 5), (3, 4)]).is_ok());
        assert!(Pairing::new(vec![(1, 7)]).is_err());
    }

    #[test]
    fn flat_complexifies_to_zero() {
        let p = Pairing::standard(3);
        let r = RealFramePresentation::new(vec![FrameForm::zero(); 6], p).unwrap();
        assert!(r.complexify().iter().all(|f| f.is_zero()));
    }

    #[test]
    fn omega_of_a_pair() {
        // (i/2) φ∧φ̄ = e^{ab}
        let p = Pairing::new(vec![(1, 2)]).unwrap();
        let e12 = FrameForm::from_int_terms(&[(&[1, 2], 1)]);
        let c = p.complexify_form(&e12);
        let expected = Form::monomial(Monomial::new(&[1], &[1]), GaussianRational::i() * GaussianRational::ratio(1, 2));
        assert_eq!(c, expected);
        assert_eq!(p.realify_form(&c), e12);
    }

    #[test]
    fn unsorted_real_terms_take_sign() {
        let f = FrameForm::from_int_terms(&[(&[3, 1], 1)]);
        assert_eq!(f, FrameForm::from_int_terms(&[(&[1, 3], -1)]));
        assert!(FrameForm::from_int_terms(&[(&[2, 2], 1)]).is_zero());
    }
}
