//! Rectification of coordinates and the Stein decomposition `h = φ(r)`.

use num_traits::{One, Zero};

use crate::automorph::{AutoWord, ElementaryMove};
use crate::poly::bpoly::compose_upoly;
use crate::poly::elim::certainly_no_common_zero3;
use crate::poly::rat::rat_nth_root;
use crate::poly::{rat, up_decompose, BPoly, Rat, UPoly, Var};
use crate::{Error, Result};

/// `h = φ(r)` with `r` primitive, `r(0,0) = 0`, and `γ` a value at which `r − γ` is smooth.
#[derive(Clone, Debug, PartialEq)]
pub struct SteinData {
    pub phi: UPoly,
    pub r: BPoly,
    pub generic_value: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RectifyResult {
    /// `p ∘ alpha = x`.
    Rectified { alpha: AutoWord },
    /// Reduction got stuck at `stuck = p ∘ (moves so far)`.
    NotRectifiable { stuck: BPoly, reason: String },
}

/// `h ∘ alpha = phi_hat(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Certificate {
    pub stein: SteinData,
    pub alpha: AutoWord,
    pub phi_hat: UPoly,
}

const GENERIC_VALUE_TRIES: i64 = 25;

/// Univariate `e`-th root over the rationals, if `g` is an exact `e`-th power.
fn upoly_root(g: &UPoly, e: usize) -> Option<UPoly> {
    let n = g.deg();
    if g.is_zero() || !n.is_multiple_of(e) {
        return None;
    }
    let lam = rat_nth_root(&g.lc(), e as u32)?;
    let k = n / e;
    let target = g.monic();
    let mut coeffs = vec![Rat::zero(); k + 1];
    coeffs[k] = Rat::one();
    let e_rat = rat(e as i64);
    for j in 1..=k {
        let cur = UPoly::from_coeffs(coeffs.clone()).pow(e).coeff(n - j);
        coeffs[k - j] += (target.coeff(n - j) - cur) / &e_rat;
    }
    let rho = UPoly::from_coeffs(coeffs);
    (rho.pow(e) == target).then(|| rho.scale(&lam))
}

/// `e`-th root of a form of degree `d`, as a form of degree `d / e`.
fn form_root(f: &BPoly, d: u32, e: u32) -> Option<BPoly> {
    if f.is_zero() || !d.is_multiple_of(e) {
        return None;
    }
    let k = d / e;
    let g = f.specialize(Var::Y, &Rat::one());
    let rho = upoly_root(&g, e as usize)?;
    let root = BPoly::from_terms(
        rho.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32, k - i as u32)),
    );
    (root.pow(e) == *f).then_some(root)
}

/// Solves `φ(r) = h` for `r`, one homogeneous component at a time from the top.
fn solve_inner(h: &BPoly, phi: &UPoly) -> Option<BPoly> {
    let e = phi.deg() as u32;
    let d = h.total_degree();
    if e < 2 || !d.is_multiple_of(e) {
        return None;
    }
    let k = d / e;
    let top = h.homogeneous_part(d).scale(&phi.lc().recip());
    let rk = form_root(&top, d, e)?;
    let signs: &[i64] = if e.is_multiple_of(2) { &[1, -1] } else { &[1] };
    'sign: for &s in signs {
        let rk = rk.scale(&rat(s));
        let divisor = rk.pow(e - 1).scale(&(phi.lc() * rat(e as i64)));
        let mut r = rk.clone();
        for j in (0..k).rev() {
            let residual = h - &compose_upoly(phi, &r);
            let comp = residual.homogeneous_part((e - 1) * k + j);
            if comp.is_zero() {
                continue;
            }
            match comp.div_exact(&divisor) {
                Some(rj) => r = &r + &rj,
                None => continue 'sign,
            }
        }
        if compose_upoly(phi, &r) == *h {
            return Some(r);
        }
    }
    None
}

/// Restriction of `h` to a line along which it keeps full degree.
fn restrict_to_line(h: &BPoly) -> UPoly {
    let d = h.total_degree() as usize;
    let dirs = [
        (1, 2),
        (2, 1),
        (1, 3),
        (3, 1),
        (1, -1),
        (2, 3),
        (3, -2),
        (1, 5),
        (5, 1),
    ];
    for (a, c) in dirs {
        let lx = UPoly::from_coeffs(vec![Rat::new(1.into(), 3.into()), rat(a)]);
        let ly = UPoly::from_coeffs(vec![Rat::new((-2).into(), 5.into()), rat(c)]);
        let hl = h.substitute_univariate(&lx, &ly);
        if hl.deg() == d {
            return hl;
        }
    }
    unreachable!("a nonzero form cannot vanish at all listed directions")
}

/// Puts `(φ, r)` in normal shape: `r(0,0) = 0`, then `φ` monic when its leading
/// coefficient is a rational `e`-th power, else `r` graded-lex monic.
fn normalize_pair(phi: UPoly, r: BPoly) -> (UPoly, BPoly) {
    let c0 = r.constant_term();
    let r = &r - &BPoly::constant(c0.clone());
    let phi = phi.shift(&c0);
    let mu = r.leading_term().expect("nonconstant r").1;
    let r = r.scale(&mu.recip());
    let phi = phi.compose(&UPoly::monomial(mu, 1));
    let e = phi.deg() as u32;
    match rat_nth_root(&phi.lc(), e) {
        Some(lam) => {
            let phi = phi.compose(&UPoly::monomial(lam.recip(), 1));
            (phi, r.scale(&lam))
        }
        None => (phi, r),
    }
}

fn generic_value(r: &BPoly) -> Result<Rat> {
    let (rx, ry) = (r.derivative(Var::X), r.derivative(Var::Y));
    for n in 0..=2 * GENERIC_VALUE_TRIES {
        let g = rat(if n % 2 == 0 { -(n / 2) } else { (n + 1) / 2 });
        if certainly_no_common_zero3(&(r - &BPoly::constant(g.clone())), &rx, &ry) {
            return Ok(g);
        }
    }
    Err(Error::NumericUnstable(format!(
        "no certified smooth level of {r} among small integers"
    )))
}

/// Writes nonconstant `h` as `φ(r)` with `deg φ` maximal.
pub fn stein_decompose(h: &BPoly) -> Result<SteinData> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if h.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let line = restrict_to_line(h);
    let mut candidates: Vec<UPoly> = vec![line.clone()];
    candidates.extend(up_decompose(&line).into_iter().rev().map(|(outer, _)| outer));
    let found = candidates
        .iter()
        .find_map(|phi| solve_inner(h, phi).map(|r| (phi.clone(), r)));
    let (phi, r) = found.unwrap_or_else(|| (UPoly::t(), h.clone()));
    debug_assert_eq!(compose_upoly(&phi, &r), *h);
    let (phi, r) = normalize_pair(phi, r);
    let generic_value = generic_value(&r)?;
    Ok(SteinData {
        phi,
        r,
        generic_value,
    })
}

/// Affine move sending the linear polynomial `p` to `x`.
fn linear_normalizer(p: &BPoly) -> ElementaryMove {
    let (a, b, c) = (p.coeff(1, 0), p.coeff(0, 1), p.constant_term());
    let zero = Rat::zero;
    if !a.is_zero() {
        ElementaryMove::affine(a.recip(), -&b / &a, zero(), Rat::one(), -&c / &a, zero())
    } else {
        ElementaryMove::affine(zero(), Rat::one(), b.recip(), zero(), zero(), -&c / &b)
    }
    .expect("nonsingular")
}

/// Reduction along the edge at the pure vertex `c·y^D` (or `c·x^D` after a swap of roles).
fn vertex_move(p: &BPoly, d: u32, toward_x: bool) -> std::result::Result<ElementaryMove, String> {
    // Work with `q` whose top form is `c·y^D`; `toward_x` means the original top is `c·x^D`.
    let q = if toward_x { p.swap_vars() } else { p.clone() };
    let mut best: Option<Rat> = None;
    for (&(i, j), _) in q.terms() {
        if i > 0 {
            let s = Rat::new(((d - j) as i64).into(), (i as i64).into());
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
    }
    let k = best.ok_or_else(|| "polynomial in one variable of degree at least 2".to_string())?;
    if !k.is_integer() || k < rat(2) {
        return Err(format!("Newton edge slope {k} is not an integer at least 2"));
    }
    let k = k.to_integer().try_into().expect("small slope");
    let k: u32 = k;
    if !d.is_multiple_of(k) {
        return Err("Newton edge does not reach the other axis".into());
    }
    let e = d / k;
    let cx = q.coeff(e, 0);
    if cx.is_zero() {
        return Err("Newton edge does not reach the other axis".into());
    }
    let edge = BPoly::from_terms(
        q.terms()
            .filter(|(&(i, j), _)| k * i + j == d)
            .map(|(&(i, j), c)| (c.clone(), i, j)),
    );
    let lam = -q.coeff(e - 1, k) / (&cx * rat(e as i64));
    let base = &BPoly::x() - &BPoly::monomial(lam.clone(), 0, k);
    if base.pow(e).scale(&cx) != edge {
        return Err("edge polynomial is not a power of a binomial".into());
    }
    let shift = UPoly::monomial(lam, k as usize);
    Ok(if toward_x {
        ElementaryMove::TriangularY(shift)
    } else {
        ElementaryMove::TriangularX(shift)
    })
}

fn reducing_moves(p: &BPoly) -> std::result::Result<Vec<ElementaryMove>, String> {
    let d = p.total_degree();
    if d == 0 {
        return Err("constant polynomial".into());
    }
    if d == 1 {
        return Ok(vec![linear_normalizer(p)]);
    }
    let top = p.homogeneous_part(d);
    let td = top.coeff(d, 0);
    let moves = if td.is_zero() {
        if top != BPoly::monomial(top.coeff(0, d), 0, d) {
            return Err(format!("top form {top} is not a power of a linear form"));
        }
        vec![vertex_move(p, d, false)?]
    } else {
        let mu = top.coeff(d - 1, 1) / (&td * rat(d as i64));
        let ell = &BPoly::x() + &BPoly::monomial(mu.clone(), 0, 1);
        if ell.pow(d).scale(&td) != top {
            return Err(format!("top form {top} is not a power of a linear form"));
        }
        if mu.is_zero() {
            vec![vertex_move(p, d, true)?]
        } else {
            let pre = ElementaryMove::TriangularX(UPoly::monomial(-mu, 1));
            let main = vertex_move(&pre.pullback(p), d, true)?;
            vec![pre, main]
        }
    };
    let reduced = moves.iter().fold(p.clone(), |acc, m| m.pullback(&acc));
    if reduced.total_degree() >= d {
        return Err("edge move does not lower the degree".into());
    }
    Ok(moves)
}

/// Moves `[μ1, ...]` with `deg(p ∘ μ1 ∘ ...) < deg p`, or for linear `p` the affine
/// move sending it to `x`. `None` when no Newton edge qualifies.
pub fn newton_reducing_move(p: &BPoly) -> Option<Vec<ElementaryMove>> {
    reducing_moves(p).ok()
}

/// Finds `alpha` with `p ∘ alpha = x`, or reports where the reduction stopped.
pub fn rectify_coordinate(p: &BPoly) -> Result<RectifyResult> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let mut alpha = AutoWord::identity();
    let mut cur = p.clone();
    while cur != BPoly::x() {
        let d = cur.total_degree();
        let moves = match reducing_moves(&cur) {
            Ok(ms) => ms,
            Err(reason) => return Ok(RectifyResult::NotRectifiable { stuck: cur, reason }),
        };
        for m in moves {
            cur = m.pullback(&cur);
            alpha = alpha.then_inner(m);
        }
        assert!(
            cur.total_degree() < d || (d == 1 && cur == BPoly::x()),
            "reduction must lower the degree"
        );
    }
    debug_assert_eq!(alpha.apply_to_poly(p), BPoly::x());
    Ok(RectifyResult::Rectified { alpha })
}

/// Finds `alpha` with `h ∘ alpha = φ̂(x)` when `h` is a polynomial in a coordinate.
pub fn lemma1_normalize(h: &BPoly) -> Result<Lemma1Certificate> {
    let stein = stein_decompose(h)?;
    let level = &stein.r - &BPoly::constant(stein.generic_value.clone());
    match rectify_coordinate(&level)? {
        RectifyResult::Rectified { alpha } => {
            let phi_hat = stein.phi.shift(&stein.generic_value);
            let lhs = alpha.apply_to_poly(h);
            if lhs != BPoly::from_upoly(&phi_hat, Var::X) {
                return Err(Error::Inconsistent(format!(
                    "pullback {lhs} differs from {phi_hat} in x"
                )));
            }
            Ok(Lemma1Certificate {
                stein,
                alpha,
                phi_hat,
            })
        }
        RectifyResult::NotRectifiable { stuck, reason } => Err(Error::RectifyFailed(format!(
            "inner polynomial {} is not a coordinate: {reason} at {stuck}",
            stein.r
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn p(ts: &[(i64, u32, u32)]) -> BPoly {
        BPoly::from_int_terms(ts)
    }

    fn alpha_of(q: &BPoly) -> AutoWord {
        match rectify_coordinate(q).unwrap() {
            RectifyResult::Rectified { alpha } => alpha,
            other => panic!("expected rectification of {q}, got {other:?}"),
        }
    }

    #[test]
    fn parabola_coordinate() {
        let q = p(&[(1, 1, 0), (1, 0, 2)]);
        let a = alpha_of(&q);
        assert_eq!(a.components(), &(p(&[(1, 1, 0), (-1, 0, 2)]), BPoly::y()));
    }

    #[test]
    fn y_rectifies_by_swap() {
        let a = alpha_of(&BPoly::y());
        assert_eq!(a.components(), &(BPoly::y(), BPoly::x()));
    }

    #[test]
    fn scaled_x_rectifies_by_scaling() {
        let a = alpha_of(&p(&[(3, 1, 0)]));
        assert_eq!(a.moves(), &[ElementaryMove::scaling(ratio(1, 3), rat(1))]);
    }

    #[test]
    fn x_needs_nothing() {
        assert!(alpha_of(&BPoly::x()).is_empty());
    }

    #[test]
    fn mixed_top_form_is_sheared_first() {
        // (x + y)^2 + y  is a coordinate
        let q = p(&[(1, 2, 0), (2, 1, 1), (1, 0, 2), (1, 0, 1)]);
        let a = alpha_of(&q);
        assert_eq!(a.apply_to_poly(&q), BPoly::x());
    }

    #[test]
    fn non_coordinates_are_reported() {
        for q in [
            p(&[(1, 2, 0), (-1, 0, 3)]),
            p(&[(1, 0, 2), (-1, 3, 0), (-1, 2, 0)]),
            p(&[(1, 1, 1)]),
        ] {
            assert!(matches!(
                rectify_coordinate(&q).unwrap(),
                RectifyResult::NotRectifiable { .. }
            ));
            assert!(newton_reducing_move(&q).is_none());
        }
    }

    #[test]
    fn constant_is_rejected() {
        assert!(matches!(
            rectify_coordinate(&p(&[(4, 0, 0)])),
            Err(Error::ConstantPolynomial)
        ));
    }

    #[test]
    fn stein_square_plus_linear() {
        let inner = p(&[(1, 1, 0), (1, 0, 2)]);
        let h = &inner.pow(2) + &inner.scale(&rat(3));
        let s = stein_decompose(&h).unwrap();
        assert_eq!(s.phi, UPoly::from_ints(&[0, 3, 1]));
        assert_eq!(s.r, inner);
        assert_eq!(compose_upoly(&s.phi, &s.r), h);
    }

    #[test]
    fn stein_cube() {
        let inner = p(&[(1, 2, 0), (1, 0, 1)]);
        let s = stein_decompose(&inner.pow(3)).unwrap();
        assert_eq!(s.phi, UPoly::from_ints(&[0, 0, 0, 1]));
        assert_eq!(s.r, inner);
    }

    #[test]
    fn stein_primitive_is_trivial() {
        let h = p(&[(1, 2, 0), (-1, 0, 3)]);
        let s = stein_decompose(&h).unwrap();
        assert_eq!(s.phi.deg(), 1);
        assert_eq!(compose_upoly(&s.phi, &s.r), h);
    }

    #[test]
    fn stein_non_monic_outer() {
        // 2 (x + y^2)^2 keeps a leading coefficient that has no rational square root
        let inner = p(&[(1, 1, 0), (1, 0, 2)]);
        let h = inner.pow(2).scale(&rat(2));
        let s = stein_decompose(&h).unwrap();
        assert_eq!(s.phi.deg(), 2);
        assert_eq!(compose_upoly(&s.phi, &s.r), h);
    }

    #[test]
    fn lemma1_shifted_square() {
        let h = p(&[(1, 0, 2), (2, 2, 1), (1, 4, 0), (-5, 0, 0)]);
        let c = lemma1_normalize(&h).unwrap();
        assert_eq!(c.alpha.components(), &(BPoly::y(), p(&[(1, 1, 0), (-1, 0, 2)])));
        assert_eq!(c.phi_hat, UPoly::from_ints(&[-5, 0, 1]));
    }

    #[test]
    fn lemma1_power_of_x() {
        let c = lemma1_normalize(&p(&[(1, 3, 0)])).unwrap();
        assert!(c.alpha.is_identity());
        assert_eq!(c.phi_hat, UPoly::from_ints(&[0, 0, 0, 1]));
    }

    #[test]
    fn lemma1_rejects_cusp() {
        assert!(matches!(
            lemma1_normalize(&p(&[(1, 2, 0), (-1, 0, 3)])),
            Err(Error::RectifyFailed(_))
        ));
    }
}
