//! Plane polynomial automorphisms as words of elementary moves.
//!
//! Convention: a word `[m0, m1, ..., mk]` denotes `m0 ∘ m1 ∘ ... ∘ mk`, so `mk`
//! acts first. The pullback of a polynomial is `P ∘ w`, and pulling back along
//! a composite is contravariant: `P ∘ (w1 ∘ w2) = (P ∘ w1) ∘ w2`.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::bpoly::compose_upoly;
use crate::poly::{rat, BPoly, Rat, UPoly, Var};
use crate::{Error, Result};

/// Generator of the tame group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryMove {
    /// `(x, y) ↦ (a x + b y + e, c x + d y + f)` with `ad − bc ≠ 0`.
    Affine {
        a: Rat,
        b: Rat,
        c: Rat,
        d: Rat,
        e: Rat,
        f: Rat,
    },
    /// `(x, y) ↦ (x + q(y), y)`.
    TriangularX(UPoly),
    /// `(x, y) ↦ (x, y + q(x))`.
    TriangularY(UPoly),
}

impl ElementaryMove {
    pub fn affine(a: Rat, b: Rat, c: Rat, d: Rat, e: Rat, f: Rat) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::InvalidParams("affine move with zero determinant".into()));
        }
        Ok(ElementaryMove::Affine { a, b, c, d, e, f })
    }

    /// Linear part `[[a, b], [c, d]]` with translation `(e, f)`, from small integers.
    pub fn affine_int(m: [i64; 4], t: [i64; 2]) -> Self {
        Self::affine(rat(m[0]), rat(m[1]), rat(m[2]), rat(m[3]), rat(t[0]), rat(t[1]))
            .expect("nonsingular affine move")
    }

    pub fn swap() -> Self {
        Self::affine_int([0, 1, 1, 0], [0, 0])
    }

    /// `(x, y) ↦ (sx·x, sy·y)`.
    pub fn scaling(sx: Rat, sy: Rat) -> Self {
        Self::affine(sx, Rat::zero(), Rat::zero(), sy, Rat::zero(), Rat::zero()).expect("nonzero scalings")
    }

    pub fn translation(e: Rat, f: Rat) -> Self {
        Self::affine(Rat::one(), Rat::zero(), Rat::zero(), Rat::one(), e, f).expect("identity part")
    }

    pub fn inverse(&self) -> Self {
        match self {
            ElementaryMove::Affine { a, b, c, d, e, f } => {
                let det = a * d - b * c;
                let (ia, ib, ic, id) = (d / &det, -b / &det, -c / &det, a / &det);
                let ie = -(&ia * e + &ib * f);
                let iff = -(&ic * e + &id * f);
                ElementaryMove::Affine {
                    a: ia,
                    b: ib,
                    c: ic,
                    d: id,
                    e: ie,
                    f: iff,
                }
            }
            ElementaryMove::TriangularX(q) => ElementaryMove::TriangularX(-q),
            ElementaryMove::TriangularY(q) => ElementaryMove::TriangularY(-q),
        }
    }

    /// The move applied to a pair of polynomials: `m(p1, p2)`.
    pub fn apply_pair(&self, p1: &BPoly, p2: &BPoly) -> (BPoly, BPoly) {
        match self {
            ElementaryMove::Affine { a, b, c, d, e, f } => (
                &(&p1.scale(a) + &p2.scale(b)) + &BPoly::constant(e.clone()),
                &(&p1.scale(c) + &p2.scale(d)) + &BPoly::constant(f.clone()),
            ),
            ElementaryMove::TriangularX(q) => (p1 + &compose_upoly(q, p2), p2.clone()),
            ElementaryMove::TriangularY(q) => (p1.clone(), p2 + &compose_upoly(q, p1)),
        }
    }

    pub fn apply_point(&self, p: &(Rat, Rat)) -> (Rat, Rat) {
        let (x, y) = p;
        match self {
            ElementaryMove::Affine { a, b, c, d, e, f } => (a * x + b * y + e, c * x + d * y + f),
            ElementaryMove::TriangularX(q) => (x + q.eval(y), y.clone()),
            ElementaryMove::TriangularY(q) => (x.clone(), y + q.eval(x)),
        }
    }

    /// Components of the move as polynomials in `x, y`.
    pub fn components(&self) -> (BPoly, BPoly) {
        self.apply_pair(&BPoly::x(), &BPoly::y())
    }

    /// Pullback `P ∘ m`.
    pub fn pullback(&self, p: &BPoly) -> BPoly {
        let (a, b) = self.components();
        p.substitute(&a, &b)
    }
}

impl fmt::Display for ElementaryMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.components();
        write!(f, "({a}, {b})")
    }
}

/// Automorphism stored as a word of moves, with lazily cached components.
#[derive(Clone, Default)]
pub struct AutoWord {
    moves: Vec<ElementaryMove>,
    cached: OnceLock<(BPoly, BPoly)>,
}

impl PartialEq for AutoWord {
    fn eq(&self, other: &Self) -> bool {
        self.moves == other.moves
    }
}

impl fmt::Debug for AutoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.moves.iter().map(|m| m.to_string()))
            .finish()
    }
}

impl AutoWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(moves: Vec<ElementaryMove>) -> Self {
        AutoWord {
            moves,
            cached: OnceLock::new(),
        }
    }

    pub fn single(m: ElementaryMove) -> Self {
        Self::new(vec![m])
    }

    pub fn moves(&self) -> &[ElementaryMove] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AutoWord) -> AutoWord {
        let mut moves = self.moves.clone();
        moves.extend(other.moves.iter().cloned());
        AutoWord::new(moves)
    }

    /// Appends `m` on the inside: `self ∘ m`.
    pub fn then_inner(&self, m: ElementaryMove) -> AutoWord {
        self.compose(&AutoWord::single(m))
    }

    /// Prepends `m` on the outside: `m ∘ self`.
    pub fn then_outer(&self, m: ElementaryMove) -> AutoWord {
        AutoWord::single(m).compose(self)
    }

    pub fn invert(&self) -> AutoWord {
        AutoWord::new(self.moves.iter().rev().map(|m| m.inverse()).collect())
    }

    /// The word applied to a pair of polynomials: `w(p1, p2)`.
    pub fn apply_pair(&self, p1: &BPoly, p2: &BPoly) -> (BPoly, BPoly) {
        self.moves
            .iter()
            .rev()
            .fold((p1.clone(), p2.clone()), |(a, b), m| m.apply_pair(&a, &b))
    }

    pub fn apply_point(&self, p: &(Rat, Rat)) -> (Rat, Rat) {
        self.moves
            .iter()
            .rev()
            .fold(p.clone(), |acc, m| m.apply_point(&acc))
    }

    /// Expanded coordinate functions.
    pub fn components(&self) -> &(BPoly, BPoly) {
        self.cached
            .get_or_init(|| self.apply_pair(&BPoly::x(), &BPoly::y()))
    }

    pub fn is_identity(&self) -> bool {
        let (a, b) = self.components();
        *a == BPoly::x() && *b == BPoly::y()
    }

    /// Pullback `P ∘ w`.
    pub fn apply_to_poly(&self, p: &BPoly) -> BPoly {
        self.moves.iter().fold(p.clone(), |acc, m| m.pullback(&acc))
    }
}

/// Polynomial map `(x, y) ↦ (f1, f2)` of the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    pub f1: BPoly,
    pub f2: BPoly,
}

impl PolyMap {
    pub fn new(f1: BPoly, f2: BPoly) -> Self {
        PolyMap { f1, f2 }
    }

    pub fn identity() -> Self {
        Self::new(BPoly::x(), BPoly::y())
    }

    pub fn total_degree(&self) -> u32 {
        self.f1.total_degree().max(self.f2.total_degree())
    }

    pub fn eval(&self, p: &(Rat, Rat)) -> (Rat, Rat) {
        (self.f1.eval(&p.0, &p.1), self.f2.eval(&p.0, &p.1))
    }

    /// `self ∘ inner`.
    pub fn compose_map(&self, inner: &PolyMap) -> PolyMap {
        PolyMap::new(
            self.f1.substitute(&inner.f1, &inner.f2),
            self.f2.substitute(&inner.f1, &inner.f2),
        )
    }
}

/// `post ∘ f ∘ pre`, expanded exactly.
pub fn apply_to_map(pre: &AutoWord, f: &PolyMap, post: &AutoWord) -> PolyMap {
    let g1 = pre.apply_to_poly(&f.f1);
    let g2 = pre.apply_to_poly(&f.f2);
    let (h1, h2) = post.apply_pair(&g1, &g2);
    PolyMap::new(h1, h2)
}

fn random_affine(rng: &mut ChaCha8Rng, coeff_bound: i64) -> ElementaryMove {
    loop {
        let s = rng.gen_range(-coeff_bound..=coeff_bound);
        let base: [i64; 4] = match rng.gen_range(0..3) {
            0 => [1, s, 0, 1],
            1 => [1, 0, s, 1],
            _ => [0, 1, 1, 0],
        };
        let diag = [1i64, -1, 2, -2];
        let dx = diag[rng.gen_range(0..4)];
        let dy = diag[rng.gen_range(0..4)];
        let m = [dx * base[0], dx * base[1], dy * base[2], dy * base[3]];
        let e = rng.gen_range(-coeff_bound..=coeff_bound);
        let f = rng.gen_range(-coeff_bound..=coeff_bound);
        if m[0] * m[3] - m[1] * m[2] != 0 {
            return ElementaryMove::affine_int(m, [e, f]);
        }
    }
}

fn random_triangular(rng: &mut ChaCha8Rng, deg_bound: usize, coeff_bound: i64) -> ElementaryMove {
    let deg = rng.gen_range(1..=deg_bound);
    let mut cs: Vec<Rat> = (0..deg)
        .map(|_| rat(rng.gen_range(-coeff_bound..=coeff_bound)))
        .collect();
    let mut top = 0;
    while top == 0 {
        top = rng.gen_range(-coeff_bound..=coeff_bound);
    }
    cs.push(rat(top));
    let q = UPoly::from_coeffs(cs);
    if rng.gen_bool(0.5) {
        ElementaryMove::TriangularX(q)
    } else {
        ElementaryMove::TriangularY(q)
    }
}

/// Deterministic random tame automorphism: alternating affine and triangular
/// moves, starting with an affine one.
pub fn random_tame(seed: u64, word_len: usize, deg_bound: usize, coeff_bound: i64) -> AutoWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deg_bound = deg_bound.max(1);
    let coeff_bound = coeff_bound.max(1);
    let moves = (0..word_len)
        .map(|k| {
            if k % 2 == 0 {
                random_affine(&mut rng, coeff_bound)
            } else {
                random_triangular(&mut rng, deg_bound, coeff_bound)
            }
        })
        .collect();
    AutoWord::new(moves)
}

/// Jacobian determinant of a pair of polynomials.
pub fn jacobian(p1: &BPoly, p2: &BPoly) -> BPoly {
    &(&p1.derivative(Var::X) * &p2.derivative(Var::Y)) - &(&p1.derivative(Var::Y) * &p2.derivative(Var::X))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ts: &[(i64, u32, u32)]) -> BPoly {
        BPoly::from_int_terms(ts)
    }

    fn tri_y(cs: &[i64]) -> ElementaryMove {
        ElementaryMove::TriangularY(UPoly::from_ints(cs))
    }

    #[test]
    fn identity_is_neutral() {
        let w = AutoWord::single(tri_y(&[0, 0, 1]));
        assert_eq!(AutoWord::identity().compose(&w).components(), w.components());
    }

    #[test]
    fn inverse_pair_composes_to_identity() {
        let w = AutoWord::single(tri_y(&[0, 0, 1])).compose(&AutoWord::single(tri_y(&[0, 0, -1])));
        assert!(w.is_identity());
        let s = AutoWord::single(ElementaryMove::swap());
        assert!(s.compose(&s).is_identity());
    }

    #[test]
    fn move_inverses() {
        assert_eq!(tri_y(&[0, 0, 1]).inverse(), tri_y(&[0, 0, -1]));
        let half = ElementaryMove::scaling(rat(2), rat(1)).inverse();
        assert_eq!(half, ElementaryMove::scaling(crate::poly::ratio(1, 2), rat(1)));
        let w = AutoWord::new(vec![ElementaryMove::swap(), tri_y(&[0, 0, 0, 1])]);
        let inv = w.invert();
        assert_eq!(inv.moves(), &[tri_y(&[0, 0, 0, -1]), ElementaryMove::swap()]);
        assert!(w.compose(&inv).is_identity());
        assert!(inv.compose(&w).is_identity());
    }

    #[test]
    fn pullbacks() {
        let w = AutoWord::single(ElementaryMove::TriangularX(UPoly::from_ints(&[0, 0, -1])));
        assert_eq!(w.apply_to_poly(&p(&[(1, 1, 0), (1, 0, 2)])), BPoly::x());
        let q = p(&[(3, 2, 1), (1, 0, 0)]);
        assert_eq!(AutoWord::identity().apply_to_poly(&q), q);
        assert_eq!(
            AutoWord::single(ElementaryMove::swap()).apply_to_poly(&BPoly::x()),
            BPoly::y()
        );
    }

    #[test]
    fn map_composition_examples() {
        let f = PolyMap::new(p(&[(1, 2, 0)]), BPoly::y());
        let id = AutoWord::identity();
        assert_eq!(apply_to_map(&id, &f, &id), f);
        let swapped = apply_to_map(&id, &f, &AutoWord::single(ElementaryMove::swap()));
        assert_eq!(swapped, PolyMap::new(BPoly::y(), p(&[(1, 2, 0)])));
        let g = PolyMap::new(p(&[(1, 2, 0)]), p(&[(1, 0, 1), (1, 3, 0)]));
        let pre = AutoWord::single(tri_y(&[0, 0, 0, -1]));
        assert_eq!(apply_to_map(&pre, &g, &id), f);
    }

    #[test]
    fn random_words() {
        assert!(random_tame(3, 0, 2, 2).is_empty());
        assert_eq!(random_tame(11, 4, 3, 3), random_tame(11, 4, 3, 3));
        let w = random_tame(7, 2, 3, 3);
        assert!(w.compose(&w.invert()).is_identity());
    }

    #[test]
    fn point_action_matches_components() {
        let w = random_tame(5, 3, 2, 2);
        let pt = (rat(2), rat(-3));
        let (a, b) = w.components();
        assert_eq!(w.apply_point(&pt), (a.eval(&pt.0, &pt.1), b.eval(&pt.0, &pt.1)));
    }
}
