use crate::coefficient::Coefficient;
use crate::error::Result;
use crate::group_ring::GroupRingElement;
use crate::word::{Generator, ReducedWord};

/// Fox derivative `∂w/∂x` in `ℤ[F₂]`.
///
/// Expanding the product rule along the word: a letter `x` at position `i`
/// contributes `+prefix(i)`, a letter `x⁻¹` contributes `−prefix(i)·x⁻¹`,
/// and every prefix of a reduced word is itself reduced.
pub fn fox_derivative<C: Coefficient>(
    w: &ReducedWord,
    x: Generator,
) -> Result<GroupRingElement<ReducedWord, C>> {
    let letters = w.letters();
    let mut out = GroupRingElement::zero();
    for (i, l) in letters.iter().enumerate() {
        if l.generator() != x {
            continue;
        }
        if l.is_positive() {
            out.add_term(ReducedWord::from_reduced(letters[..i].to_vec())?, C::one())?;
        } else {
            out.add_term(ReducedWord::from_reduced(letters[..=i].to_vec())?, -C::one())?;
        }
    }
    Ok(out)
}
