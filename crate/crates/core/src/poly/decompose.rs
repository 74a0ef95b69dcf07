//! Functional decomposition of univariate polynomials.

use num_traits::Zero;

use super::rat::{rat, Rat};
use super::upoly::UPoly;

/// All nontrivial decompositions `h = outer ∘ inner` with both degrees at least 2.
///
/// `inner` is normalised monic with zero constant term, which removes the
/// affine ambiguity. Results are ordered by increasing degree of `outer`.
pub fn up_decompose(h: &UPoly) -> Vec<(UPoly, UPoly)> {
    let n = h.deg();
    let mut out = Vec::new();
    if n < 4 {
        return out;
    }
    for e in 2..n {
        if !n.is_multiple_of(e) || n / e < 2 {
            continue;
        }
        if let Some(pair) = decompose_with_outer_degree(h, e) {
            out.push(pair);
        }
    }
    out
}

/// Decomposition with `deg outer = e`, if one exists.
pub fn decompose_with_outer_degree(h: &UPoly, e: usize) -> Option<(UPoly, UPoly)> {
    let n = h.deg();
    if e == 0 || !n.is_multiple_of(e) {
        return None;
    }
    let k = n / e;
    let inner = approximate_root(h, e)?;
    let outer = inner_adic_expansion(h, &inner)?;
    debug_assert_eq!(outer.deg(), e);
    debug_assert_eq!(inner.deg(), k);
    (outer.compose(&inner) == *h).then_some((outer, inner))
}

/// Monic `r` of degree `n/e` with zero constant term whose `e`-th power matches
/// the top coefficients of `h / lc(h)`.
fn approximate_root(h: &UPoly, e: usize) -> Option<UPoly> {
    let n = h.deg();
    let k = n / e;
    let target = h.monic();
    let mut coeffs = vec![Rat::zero(); k + 1];
    coeffs[k] = rat(1);
    let e_rat = rat(e as i64);
    for j in 1..k {
        let r = UPoly::from_coeffs(coeffs.clone());
        let current = r.pow(e).coeff(n - j);
        let delta = (target.coeff(n - j) - current) / &e_rat;
        coeffs[k - j] += delta;
    }
    Some(UPoly::from_coeffs(coeffs))
}

/// Writes `h = Σ c_i inner^i` with constant `c_i`, or fails if some digit is not constant.
fn inner_adic_expansion(h: &UPoly, inner: &UPoly) -> Option<UPoly> {
    let mut digits = Vec::new();
    let mut rest = h.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(inner);
        if !r.is_constant() {
            return None;
        }
        digits.push(r.coeff(0));
        rest = q;
    }
    Some(UPoly::from_coeffs(digits))
}
