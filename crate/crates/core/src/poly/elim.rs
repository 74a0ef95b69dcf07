//! Elimination: resultants, interpolation, bivariate gcd and square-free parts.
//!
//! Bivariate resultants are computed by evaluating the eliminated-variable
//! resultant at rational points of the remaining variable and interpolating.
//! Each evaluation is a univariate resultant with formal degrees, so points
//! where a leading coefficient vanishes are handled without special casing.
//! The Sylvester/Bareiss route is kept alongside as an independent check.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::bpoly::{BPoly, Var};
use super::rat::{denom_lcm, rat, Rat};
use super::upoly::UPoly;
use crate::{Error, Result};

/// Commutative ring with exact division, enough for fraction-free elimination.
pub trait ExactRing: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / o`, which must be exact.
    fn div_exact(&self, o: &Self) -> Self;
}

impl ExactRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl ExactRing for UPoly {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        UPoly::div_exact(self, o).expect("Bareiss division is exact")
    }
}

/// Determinant by fraction-free Gaussian elimination (Bareiss), with row pivoting.
pub fn bareiss_det<T: ExactRing>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    let mut negate = false;
    let mut prev: Option<T> = None;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = match &prev {
                    Some(p) => t.div_exact(p),
                    None => t,
                };
            }
        }
        prev = Some(m[k][k].clone());
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Sylvester matrix of two coefficient vectors (index = exponent) with formal degrees.
fn sylvester<T: ExactRing>(a: &[T], b: &[T], n: usize, m: usize) -> Vec<Vec<T>> {
    let size = n + m;
    let get = |v: &[T], i: usize| v.get(i).cloned().unwrap_or_else(T::zero);
    let mut rows = Vec::with_capacity(size);
    for r in 0..m {
        let mut row = vec![T::zero(); size];
        for k in 0..=n {
            row[r + k] = get(a, n - k);
        }
        rows.push(row);
    }
    for r in 0..n {
        let mut row = vec![T::zero(); size];
        for k in 0..=m {
            row[r + k] = get(b, m - k);
        }
        rows.push(row);
    }
    rows
}

/// `(A, d)` with `a = A / d`, `A` integral.
fn integer_coeffs(a: &UPoly) -> (Vec<BigInt>, BigInt) {
    let d = denom_lcm(a.coeffs());
    let ai = a
        .coeffs()
        .iter()
        .map(|c| (c * Rat::from_integer(d.clone())).to_integer())
        .collect();
    (ai, d)
}

/// Univariate resultant as the Sylvester determinant (Bareiss over the integers).
pub fn resultant_sylvester(a: &UPoly, b: &UPoly, n: usize, m: usize) -> Rat {
    if n == 0 && m == 0 {
        return Rat::one();
    }
    let (ia, la) = integer_coeffs(a);
    let (ib, lb) = integer_coeffs(b);
    let det = bareiss_det(sylvester(&ia, &ib, n, m));
    let scale = num_traits::pow(la, m) * num_traits::pow(lb, n);
    Rat::new(det, scale)
}

fn rpow(r: &Rat, e: usize) -> Rat {
    num_traits::pow(r.clone(), e)
}

/// Resultant of polynomials of exact degree, by the Euclidean remainder sequence.
fn resultant_euclid(a: &UPoly, b: &UPoly) -> Rat {
    if a.is_zero() || b.is_zero() {
        return Rat::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut n = a.deg();
    let mut m = b.deg();
    let mut acc = Rat::one();
    if n < m {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut n, &mut m);
        if n * m % 2 == 1 {
            acc = -acc;
        }
    }
    loop {
        if m == 0 {
            return acc * rpow(&b.lc(), n);
        }
        let r = a.div_rem(&b).1;
        if r.is_zero() {
            return Rat::zero();
        }
        let rd = r.deg();
        if n * m % 2 == 1 {
            acc = -acc;
        }
        acc *= rpow(&b.lc(), n - rd);
        a = b;
        b = r;
        n = m;
        m = rd;
    }
}

/// Univariate resultant `Res_{n,m}(a, b)` with formal degrees `n >= deg a`, `m >= deg b`.
pub fn resultant_univariate(a: &UPoly, b: &UPoly, n: usize, m: usize) -> Rat {
    debug_assert!(a.deg() <= n && b.deg() <= m);
    if n == 0 {
        return rpow(&a.coeff(0), m);
    }
    if m == 0 {
        return rpow(&b.coeff(0), n);
    }
    if a.is_zero() || b.is_zero() {
        return Rat::zero();
    }
    let (na, mb) = (a.deg(), b.deg());
    if na < n && mb < m {
        return Rat::zero();
    }
    if mb < m {
        return rpow(&a.lc(), m - mb) * resultant_univariate(a, b, n, mb);
    }
    if na < n {
        let sign = if (m * (n - na)) % 2 == 1 {
            -Rat::one()
        } else {
            Rat::one()
        };
        return sign * rpow(&b.lc(), n - na) * resultant_univariate(a, b, na, m);
    }
    resultant_euclid(a, b)
}

/// Evaluation nodes `0, 1, -1, 2, -2, ...`.
pub fn nodes(count: usize) -> Vec<Rat> {
    (0..count)
        .map(|k| {
            let h = k.div_ceil(2) as i64;
            if k % 2 == 1 {
                rat(h)
            } else {
                rat(-h)
            }
        })
        .collect()
}

/// Newton interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> UPoly {
    let n = xs.len();
    assert_eq!(n, ys.len());
    let mut dd: Vec<Rat> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = UPoly::zero();
    for i in (0..n).rev() {
        p = &(&p * &UPoly::from_coeffs(vec![-xs[i].clone(), Rat::one()])) + &UPoly::constant(dd[i].clone());
    }
    p
}

/// Interpolates a bivariate polynomial from values on the grid `xs × ys`.
pub fn interpolate_grid(xs: &[Rat], ys: &[Rat], vals: &[Vec<Rat>]) -> BPoly {
    let rows: Vec<UPoly> = vals.iter().map(|row| interpolate(ys, row)).collect();
    let maxd = rows.iter().map(|r| r.coeffs().len()).max().unwrap_or(0);
    let mut coeffs_in_y = Vec::with_capacity(maxd);
    for k in 0..maxd {
        let col: Vec<Rat> = rows.iter().map(|r| r.coeff(k)).collect();
        coeffs_in_y.push(interpolate(xs, &col));
    }
    BPoly::from_coeffs_in(&coeffs_in_y, Var::Y)
}

/// Upper bound on the degree of `Res_v(p, q)` in the remaining variable.
fn resultant_degree_bound(p: &BPoly, q: &BPoly, v: Var) -> usize {
    let o = v.other();
    let by_parts = p.degree_in(v) * q.degree_in(o) + q.degree_in(v) * p.degree_in(o);
    let bezout = p.total_degree() * q.total_degree();
    by_parts.min(bezout) as usize
}

/// `Res_v(p, q)` as a polynomial in the other variable.
pub fn resultant(p: &BPoly, q: &BPoly, v: Var) -> Result<BPoly> {
    let n = p.degree_in(v) as usize;
    let m = q.degree_in(v) as usize;
    if n == 0 && m == 0 {
        return Err(Error::DegenerateElimination);
    }
    let o = v.other();
    let pts = nodes(resultant_degree_bound(p, q, v) + 1);
    let vals: Vec<Rat> = pts
        .iter()
        .map(|t| resultant_univariate(&p.specialize(o, t), &q.specialize(o, t), n, m))
        .collect();
    Ok(BPoly::from_upoly(&interpolate(&pts, &vals), o))
}

/// `Res_v(p, q)` computed directly as a Sylvester determinant over `Q[other]`.
pub fn resultant_bareiss(p: &BPoly, q: &BPoly, v: Var) -> Result<BPoly> {
    let n = p.degree_in(v) as usize;
    let m = q.degree_in(v) as usize;
    if n == 0 && m == 0 {
        return Err(Error::DegenerateElimination);
    }
    let pc = p.to_coeffs_in(v);
    let qc = q.to_coeffs_in(v);
    let det = bareiss_det(sylvester(&pc, &qc, n, m));
    Ok(BPoly::from_upoly(&det, v.other()))
}

// ---- bivariate gcd ----

type YPoly = Vec<UPoly>;

fn ytrim(mut a: YPoly) -> YPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn ydeg(a: &YPoly) -> usize {
    a.len().saturating_sub(1)
}

fn content(a: &YPoly) -> UPoly {
    a.iter().fold(UPoly::zero(), |g, c| g.gcd(c))
}

fn primitive_part(a: &YPoly) -> YPoly {
    let c = content(a);
    if c.is_zero() {
        return Vec::new();
    }
    a.iter()
        .map(|x| x.div_exact(&c).expect("content divides"))
        .collect()
}

fn prem(a: &YPoly, b: &YPoly) -> YPoly {
    let db = ydeg(b);
    let lb = b[db].clone();
    let mut r = a.clone();
    while !r.is_empty() && ydeg(&r) >= db {
        let dr = ydeg(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: YPoly = r.iter().map(|c| c * &lb).collect();
        for (k, c) in b.iter().enumerate() {
            next[k + shift] = &next[k + shift] - &(c * &lr);
        }
        r = ytrim(next);
    }
    r
}

/// Greatest common divisor, made monic under graded-lex order; `gcd(0, 0) = 0`.
pub fn gcd(p: &BPoly, q: &BPoly) -> BPoly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    let a = p.to_coeffs_in(Var::Y);
    let b = q.to_coeffs_in(Var::Y);
    let cont = content(&a).gcd(&content(&b));
    let mut a = primitive_part(&a);
    let mut b = primitive_part(&b);
    if ydeg(&a) < ydeg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let g = loop {
        if ydeg(&b) == 0 {
            break vec![UPoly::one()];
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            break b;
        }
        a = b;
        b = primitive_part(&r);
    };
    let g = BPoly::from_coeffs_in(&g, Var::Y);
    (&g * &BPoly::from_upoly(&cont, Var::X)).monic()
}

/// `p / gcd(p, ∂p/∂x, ∂p/∂y)`, made monic.
pub fn squarefree_part(p: &BPoly) -> Result<BPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(BPoly::one());
    }
    let g = gcd(&gcd(p, &p.derivative(Var::X)), &p.derivative(Var::Y));
    Ok(p.div_exact(&g).expect("gcd divides").monic())
}

/// Whether `a` and `b` certainly have no common zero in the affine plane.
///
/// Conservative: `false` means a common zero may exist.
pub fn certainly_no_common_zero(a: &BPoly, b: &BPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    if a.is_constant() || b.is_constant() {
        return true;
    }
    if !gcd(a, b).is_constant() {
        return false;
    }
    [Var::Y, Var::X].iter().any(|&v| {
        if !a.involves(v) && !b.involves(v) {
            return false;
        }
        resultant(a, b, v).is_ok_and(|r| r.is_constant() && !r.is_zero())
    })
}

/// Whether `a`, `b`, `c` certainly have no common zero (zero polynomials are ignored).
pub fn certainly_no_common_zero3(a: &BPoly, b: &BPoly, c: &BPoly) -> bool {
    let live: Vec<&BPoly> = [a, b, c].into_iter().filter(|p| !p.is_zero()).collect();
    match live.len() {
        0 => false,
        1 => live[0].is_constant() && !live[0].is_zero(),
        2 => certainly_no_common_zero(live[0], live[1]),
        _ => {
            if live.iter().any(|p| p.is_constant()) {
                return true;
            }
            if !gcd(&gcd(a, b), c).is_constant() {
                return false;
            }
            [Var::Y, Var::X].iter().any(|&v| {
                let r1 = resultant(a, b, v);
                let r2 = resultant(a, c, v);
                match (r1, r2) {
                    (Ok(r1), Ok(r2)) => {
                        let (u1, u2) = (r1.as_univariate(v.other()), r2.as_univariate(v.other()));
                        match (u1, u2) {
                            (Some(u1), Some(u2)) => {
                                !u1.is_zero() && !u2.is_zero() && u1.gcd(&u2).is_constant()
                            }
                            _ => false,
                        }
                    }
                    _ => false,
                }
            })
        }
    }
}

/// Integer content-free form with positive leading coefficient; handy for comparisons.
pub fn normalize_up_to_constant(p: &BPoly) -> BPoly {
    let m = p.monic();
    if m.leading_term().is_some_and(|(_, c)| c.is_negative()) {
        -&m
    } else {
        m
    }
}
