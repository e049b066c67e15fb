use crate::exterior::{wedge_bits, Form, Monomial};
use crate::model::{FrameForm, Pairing};
use crate::scalar::GaussianRational;

/// Star of a monomial for the metric in which `e^{2j−1}, e^{2j}` (with
/// φʲ = e^{2j−1} + i e^{2j}) are orthonormal and vol = e^{1…2n}.
///
/// On the real frame `*e^I = ε e^{I^c}` with `e^I ∧ e^{I^c} = ε vol`.
pub(crate) fn unit_star(n: usize, m: Monomial) -> Form<GaussianRational> {
    let pairing = Pairing::standard(n);
    let full: u32 = (1u32 << (2 * n)) - 1;
    let real = pairing.realify_form(&Form::basis(m));
    let mut image = FrameForm::zero();
    for (bits, c) in real.terms() {
        let rest = full ^ bits;
        let (sign, _) = wedge_bits(bits, rest).expect("disjoint");
        image.add_term(rest, if sign < 0 { -c.clone() } else { c.clone() });
    }
    pairing.complexify_form(&image)
}
