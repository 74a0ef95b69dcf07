//! Map-level analysis: Jacobian, geometric degree, critical values, the
//! non-properness set, the branched value set, and numeric fibers.
//!
//! Elimination runs in sheared source coordinates `(x, y) ↦ (x + s·y, t·x + y)`
//! chosen so that the first component has constant leading coefficient in
//! both variables. Then the roots of `Res_y(f1 − a, f2 − b)` are exactly the
//! `x`-coordinates of the fiber over `(a, b)`, and for generic `s, t` distinct
//! fiber points have distinct `x`-coordinates.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automorph::{jacobian, ElementaryMove, PolyMap};
use crate::poly::elim::{interpolate, interpolate_grid, nodes, resultant_univariate};
use crate::poly::linalg::{charpoly, nullspace};
use crate::poly::rat::approx_rational;
use crate::poly::roots::{cluster, CLUSTER_TOL, POLISH_ITERS};
use crate::poly::{gcd, rat, resultant, squarefree_part, up_roots_numeric, BPoly, CPoint, Rat, UPoly, Var};
use crate::rectify::{rectify_coordinate, RectifyResult};
use crate::{Error, Result};

/// Range of random integer target coordinates.
pub const TARGET_RANGE: i64 = 10_000;
/// Retry budget for generic sampling.
pub const MAX_RETRIES: usize = 100;
/// Largest implicit degree tried by the undetermined-coefficient fallback.
const MAX_IMPLICIT_DEGREE: u32 = 16;

/// Square-free curve in the target plane; `u` is stored as `x` and `v` as `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    pub defining: BPoly,
    pub empty: bool,
}

impl CurveSpec {
    pub fn empty() -> Self {
        CurveSpec {
            defining: BPoly::one(),
            empty: true,
        }
    }

    /// Square-free, monic curve `p = 0`; a nonzero constant gives the empty curve.
    pub fn from_poly(p: &BPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if p.is_constant() {
            return Ok(Self::empty());
        }
        Ok(CurveSpec {
            defining: squarefree_part(p)?,
            empty: false,
        })
    }

    pub fn contains(&self, u: &Rat, v: &Rat) -> bool {
        !self.empty && self.defining.eval(u, v).is_zero()
    }

    pub fn to_uv_string(&self) -> String {
        if self.empty {
            "1".into()
        } else {
            self.defining.to_string_with(["u", "v"])
        }
    }
}

/// Number of fiber points over a rational target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FiberCount {
    Finite(usize),
    Infinite,
}

impl FiberCount {
    pub fn is(&self, n: usize) -> bool {
        *self == FiberCount::Finite(n)
    }
}

/// Numerically solved fiber.
#[derive(Clone, Debug, Serialize)]
pub struct FiberSolution {
    pub points: Vec<(CPoint, CPoint)>,
    pub count_distinct: usize,
    /// Distinct roots of the better-separating eliminant, an exact count for generic shears.
    pub exact_count: usize,
    pub residual_bound: f64,
    pub infinite: bool,
}

/// Linear change `(x, y) ↦ (x + s·y, t·x + y)`.
#[derive(Clone, Debug, PartialEq)]
struct Shear {
    s: Rat,
    t: Rat,
}

impl Shear {
    fn as_move(&self) -> ElementaryMove {
        ElementaryMove::affine(
            Rat::one(),
            self.s.clone(),
            self.t.clone(),
            Rat::one(),
            Rat::zero(),
            Rat::zero(),
        )
        .expect("st ≠ 1")
    }

    fn pull(&self, p: &BPoly) -> BPoly {
        self.as_move().pullback(p)
    }

    fn push(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let (s, t) = (self.s_f64(), self.t_f64());
        (x + y * s, x * t + y)
    }

    fn s_f64(&self) -> f64 {
        crate::poly::rat::to_f64(&self.s)
    }

    fn t_f64(&self) -> f64 {
        crate::poly::rat::to_f64(&self.t)
    }
}

/// Random shear under which every `p` keeps its total degree in each variable separately.
fn pick_shear(ps: &[&BPoly], rng: &mut ChaCha8Rng) -> Shear {
    let tops: Vec<BPoly> = ps.iter().map(|p| p.homogeneous_part(p.total_degree())).collect();
    let mut bound = 9;
    loop {
        for _ in 0..200 {
            let s = rat(rng.gen_range(-bound..=bound));
            let t = rat(rng.gen_range(-bound..=bound));
            if s.is_zero() || t.is_zero() || &s * &t == Rat::one() {
                continue;
            }
            if tops
                .iter()
                .all(|top| !top.eval(&s, &Rat::one()).is_zero() && !top.eval(&Rat::one(), &t).is_zero())
            {
                return Shear { s, t };
            }
        }
        bound *= 4;
    }
}

fn sheared(f: &PolyMap, sh: &Shear) -> (BPoly, BPoly) {
    (sh.pull(&f.f1), sh.pull(&f.f2))
}

fn minus_const(p: &BPoly, c: &Rat) -> BPoly {
    p - &BPoly::constant(c.clone())
}

/// `Res_v(g1, g2)` as a univariate polynomial in the other variable.
fn eliminant(g1: &BPoly, g2: &BPoly, v: Var) -> Result<UPoly> {
    Ok(resultant(g1, g2, v)?
        .as_univariate(v.other())
        .expect("resultant is univariate"))
}

fn distinct_roots(r: &UPoly) -> usize {
    if r.is_zero() {
        0
    } else {
        r.squarefree_part().deg()
    }
}

pub fn jacobian_det(f: &PolyMap) -> BPoly {
    jacobian(&f.f1, &f.f2)
}

fn ensure_dominating(f: &PolyMap) -> Result<BPoly> {
    let j = jacobian_det(f);
    if j.is_zero() {
        return Err(Error::DegenerateMap);
    }
    Ok(j)
}

fn random_target(rng: &mut ChaCha8Rng) -> (Rat, Rat) {
    (
        rat(rng.gen_range(-TARGET_RANGE..=TARGET_RANGE)),
        rat(rng.gen_range(-TARGET_RANGE..=TARGET_RANGE)),
    )
}

/// Exact number of distinct points over `(a, b)`, taking the largest count over two shears and both axes.
pub fn exact_fiber_count(f: &PolyMap, target: &(Rat, Rat), seed: u64) -> Result<FiberCount> {
    let (a, b) = target;
    let (g1, g2) = (minus_const(&f.f1, a), minus_const(&f.f2, b));
    if g1.is_zero() || g2.is_zero() || !gcd(&g1, &g2).is_constant() {
        return Ok(FiberCount::Infinite);
    }
    Ok(FiberCount::Finite(best_projections(f, &g1, &g2, seed)?.count()))
}

/// Distinct `x`-roots of the eliminant after one shear; never exceeds the true count.
fn sheared_count(g1: &BPoly, g2: &BPoly, sh: &Shear) -> Result<usize> {
    Ok(distinct_roots(&eliminant(&sh.pull(g1), &sh.pull(g2), Var::Y)?))
}

/// Square-free eliminants onto both sheared axes.
struct Projections {
    shear: Shear,
    rx: UPoly,
    ry: UPoly,
}

impl Projections {
    fn new(g1: &BPoly, g2: &BPoly, shear: Shear) -> Result<Self> {
        let (h1, h2) = (shear.pull(g1), shear.pull(g2));
        let rx = eliminant(&h1, &h2, Var::Y)?.squarefree_part();
        let ry = eliminant(&h1, &h2, Var::X)?.squarefree_part();
        Ok(Projections { shear, rx, ry })
    }

    /// Each axis can only merge points, so the larger count is the better lower bound.
    fn count(&self) -> usize {
        self.rx.deg().max(self.ry.deg())
    }
}

/// The best of two shears, each checked along both axes.
fn best_projections(f: &PolyMap, g1: &BPoly, g2: &BPoly, seed: u64) -> Result<Projections> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = Projections::new(g1, g2, pick_shear(&[&f.f1, &f.f2], &mut rng))?;
    let second = Projections::new(g1, g2, pick_shear(&[&f.f1, &f.f2], &mut rng))?;
    Ok(if second.count() > first.count() {
        second
    } else {
        first
    })
}

/// Number of preimages of a generic point.
///
/// Counts at random integer targets under random shears; a non-generic target
/// or shear can only lose points, so the first count seen twice as the running maximum is returned.
pub fn geometric_degree(f: &PolyMap, seed: u64) -> Result<usize> {
    ensure_dominating(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, usize)> = None;
    for _ in 0..MAX_RETRIES {
        let (a, b) = random_target(&mut rng);
        let (g1, g2) = (minus_const(&f.f1, &a), minus_const(&f.f2, &b));
        if !gcd(&g1, &g2).is_constant() {
            continue;
        }
        let n = sheared_count(&g1, &g2, &pick_shear(&[&f.f1, &f.f2], &mut rng))?;
        best = match best {
            Some((m, seen)) if m == n => {
                if seen + 1 >= 2 {
                    return Ok(n);
                }
                Some((m, seen + 1))
            }
            Some((m, seen)) if m > n => Some((m, seen)),
            _ => Some((n, 1)),
        };
    }
    Err(Error::SamplingFailed(MAX_RETRIES))
}

/// Newton polishing that only accepts steps lowering the relative residual.
fn newton2(g1: &BPoly, g2: &BPoly, mut p: (Complex64, Complex64)) -> (Complex64, Complex64) {
    let d = [
        g1.derivative(Var::X),
        g1.derivative(Var::Y),
        g2.derivative(Var::X),
        g2.derivative(Var::Y),
    ];
    let mut res = rel_residual(g1, g2, p.0, p.1);
    for _ in 0..POLISH_ITERS {
        if res == 0.0 {
            break;
        }
        let (x, y) = p;
        let (r1, r2) = (g1.eval_f64(x, y), g2.eval_f64(x, y));
        let [a, b, c, e] = [0, 1, 2, 3].map(|i| d[i].eval_f64(x, y));
        let det = a * e - b * c;
        let (dx, dy) = ((e * r1 - b * r2) / det, (a * r2 - c * r1) / det);
        let q = (x - dx, y - dy);
        let finite = [q.0.re, q.0.im, q.1.re, q.1.im].iter().all(|v| v.is_finite());
        let q_res = if finite {
            rel_residual(g1, g2, q.0, q.1)
        } else {
            f64::INFINITY
        };
        if q_res >= res {
            break;
        }
        (p, res) = (q, q_res);
    }
    p
}

fn rel_residual(g1: &BPoly, g2: &BPoly, x: Complex64, y: Complex64) -> f64 {
    let r1 = g1.eval_f64(x, y).norm() / g1.magnitude_at(x, y).max(1.0);
    let r2 = g2.eval_f64(x, y).norm() / g2.magnitude_at(x, y).max(1.0);
    r1.max(r2)
}

/// Numeric fiber over a rational target.
pub fn solve_fiber(f: &PolyMap, target: &(Rat, Rat), seed: u64) -> Result<FiberSolution> {
    let (a, b) = target;
    let (g1, g2) = (minus_const(&f.f1, a), minus_const(&f.f2, b));
    if g1.is_zero() || g2.is_zero() || !gcd(&g1, &g2).is_constant() {
        return Ok(FiberSolution {
            points: Vec::new(),
            count_distinct: 0,
            exact_count: 0,
            residual_bound: 0.0,
            infinite: true,
        });
    }
    let Projections { shear: sh, rx, ry } = best_projections(f, &g1, &g2, seed)?;
    let exact_count = rx.deg().max(ry.deg());
    if rx.deg() == 0 || ry.deg() == 0 {
        return Ok(FiberSolution {
            points: Vec::new(),
            count_distinct: 0,
            exact_count,
            residual_bound: 0.0,
            infinite: false,
        });
    }
    // Each root on the separating axis gets its partner from the other axis.
    let (xs, ys) = (up_roots_numeric(&rx)?.roots, up_roots_numeric(&ry)?.roots);
    let x_separates = rx.deg() >= ry.deg();
    let (primary, secondary) = if x_separates { (&xs, &ys) } else { (&ys, &xs) };
    let mut pts = Vec::with_capacity(primary.len());
    let mut residual_bound: f64 = 0.0;
    // Sheared coordinates can cancel heavily, so pairing and polishing happen
    // in the original ones.
    for pr in primary {
        let (ox, oy) = secondary
            .iter()
            .map(|sr| {
                let (p, s) = (pr.to_complex(), sr.to_complex());
                if x_separates {
                    sh.push(p, s)
                } else {
                    sh.push(s, p)
                }
            })
            .min_by(|p, q| rel_residual(&g1, &g2, p.0, p.1).total_cmp(&rel_residual(&g1, &g2, q.0, q.1)))
            .expect("nonempty");
        let (ox, oy) = newton2(&g1, &g2, (ox, oy));
        residual_bound = residual_bound.max(rel_residual(&g1, &g2, ox, oy));
        pts.push((CPoint::try_from(ox)?, CPoint::try_from(oy)?));
    }
    let dist = |p: &(CPoint, CPoint), q: &(CPoint, CPoint)| {
        (p.0.to_complex() - q.0.to_complex())
            .norm()
            .max((p.1.to_complex() - q.1.to_complex()).norm())
    };
    let points = cluster(&pts, dist, CLUSTER_TOL);
    Ok(FiberSolution {
        count_distinct: points.len(),
        points,
        exact_count,
        residual_bound,
        infinite: false,
    })
}

/// Matrix of multiplication by `q` on `Q[t] / (modulus)` in the monomial basis.
fn mult_matrix(q: &UPoly, modulus: &UPoly) -> Vec<Vec<Rat>> {
    let n = modulus.deg();
    let mut cols = Vec::with_capacity(n);
    let mut cur = q.div_rem(modulus).1;
    for _ in 0..n {
        cols.push(cur.clone());
        cur = (&cur * &UPoly::t()).div_rem(modulus).1;
    }
    (0..n)
        .map(|i| cols.iter().map(|c| c.coeff(i)).collect())
        .collect()
}

/// Implicit equation of the curve `t ↦ (p(t), q(t))`, square-free.
pub fn implicitize_parametric(p: &UPoly, q: &UPoly) -> Result<CurveSpec> {
    match (p.is_constant(), q.is_constant()) {
        (true, true) => Ok(CurveSpec::empty()),
        (true, false) => CurveSpec::from_poly(&(&BPoly::x() - &BPoly::constant(p.coeff(0)))),
        (false, true) => CurveSpec::from_poly(&(&BPoly::y() - &BPoly::constant(q.coeff(0)))),
        (false, false) => {
            // Res_t(p − u, q − v) is, up to a constant, the characteristic polynomial
            // in v of multiplication by q modulo p − u; its degree in u is at most deg q.
            let us = nodes(q.deg() + 1);
            let polys: Vec<UPoly> = us
                .iter()
                .map(|u| charpoly(mult_matrix(q, &(p - &UPoly::constant(u.clone())))))
                .collect();
            let coeffs_in_v: Vec<UPoly> = (0..=p.deg())
                .map(|k| {
                    let vals: Vec<Rat> = polys.iter().map(|c| c.coeff(k)).collect();
                    interpolate(&us, &vals)
                })
                .collect();
            CurveSpec::from_poly(&BPoly::from_coeffs_in(&coeffs_in_v, Var::Y))
        }
    }
}

/// Remainder of a polynomial in `y` (coefficients in `Q[x]`) modulo `s`, monic in `y`.
fn rem_monic_y(mut p: Vec<UPoly>, s: &[UPoly]) -> Vec<UPoly> {
    let m = s.len() - 1;
    while p.len() > m {
        let top = p.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        let off = p.len() - m;
        for (k, sk) in s.iter().take(m).enumerate() {
            p[off + k] = &p[off + k] - &(&top * sk);
        }
    }
    p
}

/// Least-degree `G` with `G(f1, f2) ≡ 0` modulo `s`, by undetermined coefficients.
fn implicitize_on_curve(f: &PolyMap, s: &BPoly, seed: u64) -> Result<CurveSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sh = pick_shear(&[s], &mut rng);
    let ss = sh.pull(s).monic();
    let ss = ss.scale(&ss.coeff(0, ss.total_degree()).recip());
    let sc = ss.to_coeffs_in(Var::Y);
    let (f1, f2) = sheared(f, &sh);
    let reduce = |p: &BPoly| rem_monic_y(p.to_coeffs_in(Var::Y), &sc);
    let to_poly = |v: &[UPoly]| BPoly::from_coeffs_in(v, Var::Y);
    let cap = (s.total_degree() * f.total_degree()).min(MAX_IMPLICIT_DEGREE);
    let mut pw1 = vec![BPoly::one()];
    let mut pw2 = vec![BPoly::one()];
    for _ in 0..cap {
        let a = to_poly(&reduce(&(pw1.last().expect("nonempty") * &f1)));
        let b = to_poly(&reduce(&(pw2.last().expect("nonempty") * &f2)));
        pw1.push(a);
        pw2.push(b);
    }
    for d in 1..=cap {
        let exps: Vec<(u32, u32)> = (0..=d).flat_map(|i| (0..=d - i).map(move |j| (i, j))).collect();
        let cols: Vec<BPoly> = exps
            .iter()
            .map(|&(i, j)| to_poly(&reduce(&(&pw1[i as usize] * &pw2[j as usize]))))
            .collect();
        let mut monos: Vec<(u32, u32)> = cols.iter().flat_map(|c| c.terms().map(|(e, _)| *e)).collect();
        monos.sort_unstable();
        monos.dedup();
        let rows: Vec<Vec<Rat>> = monos
            .iter()
            .map(|&(i, j)| cols.iter().map(|c| c.coeff(i, j)).collect())
            .collect();
        let kernel = nullspace(rows, exps.len());
        if kernel.is_empty() {
            continue;
        }
        let g = kernel
            .iter()
            .map(|v| BPoly::from_terms(exps.iter().zip(v).map(|(&(i, j), c)| (c.clone(), i, j))))
            .reduce(|acc, p| gcd(&acc, &p))
            .expect("nonempty kernel");
        return CurveSpec::from_poly(&g);
    }
    Err(Error::TooLarge(format!(
        "no implicit equation of degree at most {cap} for the image of {s} = 0"
    )))
}

/// Closure of the image of the critical set.
pub fn critical_value_curve(f: &PolyMap) -> Result<CurveSpec> {
    let j = ensure_dominating(f)?;
    if j.is_constant() {
        return Ok(CurveSpec::empty());
    }
    let s = squarefree_part(&j)?;
    match rectify_coordinate(&s)? {
        RectifyResult::Rectified { alpha } => {
            // the critical set is the line t ↦ alpha(0, t)
            let (a, b) = alpha.components();
            let (a0, b0) = (
                a.specialize(Var::X, &Rat::zero()),
                b.specialize(Var::X, &Rat::zero()),
            );
            let p = f.f1.substitute_univariate(&a0, &b0);
            let q = f.f2.substitute_univariate(&a0, &b0);
            implicitize_parametric(&p, &q)
        }
        RectifyResult::NotRectifiable { .. } => implicitize_on_curve(f, &s, 0),
    }
}

/// Lagrange weights `1 / Π_{j≠i} (x_i − x_j)`, so that `Σ w_i y_i` is the top coefficient.
fn top_coefficient_weights(xs: &[Rat]) -> Vec<Rat> {
    xs.iter()
        .enumerate()
        .map(|(i, xi)| {
            xs.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(Rat::one(), |acc, (_, xj)| acc * (xi - xj))
                .recip()
        })
        .collect()
}

/// Target points over which fiber points escape to infinity.
///
/// After a shear making `f1` monic in `y`, a fiber point can only escape with
/// `x → ∞`, which happens exactly where the leading `x`-coefficient of
/// `Res_y(f1 − u, f2 − v)` vanishes.
pub fn nonproper_curve(f: &PolyMap, seed: u64) -> Result<CurveSpec> {
    ensure_dominating(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sh = pick_shear(&[&f.f1], &mut rng);
    let (f1, f2) = sheared(f, &sh);
    let (n, m) = (f1.degree_in(Var::Y) as usize, f2.degree_in(Var::Y) as usize);
    let mut top = 0;
    for _ in 0..2 {
        let (a, b) = random_target(&mut rng);
        let r = eliminant(&minus_const(&f1, &a), &minus_const(&f2, &b), Var::Y)?;
        top = top.max(r.deg());
    }
    let xs = nodes(top + 1);
    let w = top_coefficient_weights(&xs);
    let slices: Vec<(UPoly, UPoly)> = xs
        .iter()
        .map(|x| (f1.specialize(Var::X, x), f2.specialize(Var::X, x)))
        .collect();
    let us = nodes(m + 1);
    let vs = nodes(n + 1);
    let vals: Vec<Vec<Rat>> = us
        .iter()
        .map(|u| {
            vs.iter()
                .map(|v| {
                    slices
                        .iter()
                        .zip(&w)
                        .map(|((p, q), wi)| {
                            let p = p - &UPoly::constant(u.clone());
                            let q = q - &UPoly::constant(v.clone());
                            resultant_univariate(&p, &q, n, m) * wi
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    let lc = interpolate_grid(&us, &vs, &vals);
    if lc.is_zero() {
        return Err(Error::Inconsistent("leading coefficient locus vanished".into()));
    }
    CurveSpec::from_poly(&lc)
}

/// Rational points on `c = 0`: along a rectifying parametrisation when `c` is a
/// coordinate, otherwise rational roots of small-integer slices.
pub fn rational_points_on(c: &BPoly, count: usize) -> Vec<(Rat, Rat)> {
    let mut out: Vec<(Rat, Rat)> = Vec::new();
    let origin = (Rat::zero(), Rat::zero());
    if let Ok(RectifyResult::Rectified { alpha }) = rectify_coordinate(c) {
        for t in nodes(4 * count + 4).into_iter().skip(1) {
            let p = alpha.apply_point(&(Rat::zero(), t));
            if p != origin && !out.contains(&p) {
                out.push(p);
            }
            if out.len() == count {
                break;
            }
        }
        return out;
    }
    for u0 in nodes(41) {
        for v in [Var::X, Var::Y] {
            let slice = c.specialize(v, &u0);
            if slice.deg() == 0 {
                continue;
            }
            let Ok(report) = up_roots_numeric(&slice) else {
                continue;
            };
            for z in report.roots {
                if z.im.abs() > 1e-8 {
                    continue;
                }
                let Some(r) = approx_rational(z.re, 1_000_000) else {
                    continue;
                };
                if !slice.eval(&r).is_zero() {
                    continue;
                }
                let p = match v {
                    Var::X => (u0.clone(), r),
                    Var::Y => (r, u0.clone()),
                };
                if p != origin && !out.contains(&p) {
                    out.push(p);
                    if out.len() == count {
                        return out;
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PieceStatus {
    /// Fiber count differs from the geometric degree at sampled points.
    Confirmed,
    /// Fiber count equals the geometric degree at sampled points; dropped.
    Rejected,
    /// No rational sample point found; kept.
    Unverified,
}

#[derive(Clone, Debug)]
pub struct LocusPiece {
    pub defining: BPoly,
    pub status: PieceStatus,
    pub evidence: Vec<((Rat, Rat), FiberCount)>,
}

#[derive(Clone, Debug)]
pub struct BranchLocus {
    pub degree: usize,
    pub critical: CurveSpec,
    pub nonproper: CurveSpec,
    pub pieces: Vec<LocusPiece>,
    pub curve: CurveSpec,
}

const SAMPLES_PER_PIECE: usize = 3;

fn judge_piece(f: &PolyMap, piece: BPoly, degree: usize, seed: u64) -> Result<LocusPiece> {
    let pts = rational_points_on(&piece, SAMPLES_PER_PIECE);
    let mut evidence = Vec::with_capacity(pts.len());
    for (k, p) in pts.into_iter().enumerate() {
        let c = exact_fiber_count(f, &p, seed.wrapping_add(k as u64))?;
        evidence.push((p, c));
    }
    let deficient = evidence.iter().filter(|(_, c)| !c.is(degree)).count();
    let status = if evidence.is_empty() {
        PieceStatus::Unverified
    } else if 2 * deficient > evidence.len() {
        PieceStatus::Confirmed
    } else {
        PieceStatus::Rejected
    };
    Ok(LocusPiece {
        defining: piece,
        status,
        evidence,
    })
}

/// Branched value set with per-component evidence.
pub fn branch_locus_detailed(f: &PolyMap, seed: u64) -> Result<BranchLocus> {
    let degree = geometric_degree(f, seed)?;
    let critical = critical_value_curve(f)?;
    let nonproper = nonproper_curve(f, seed)?;
    let mut candidates = Vec::new();
    match (critical.empty, nonproper.empty) {
        (true, true) => {}
        (false, true) => candidates.push(critical.defining.clone()),
        (true, false) => candidates.push(nonproper.defining.clone()),
        (false, false) => {
            let g = gcd(&critical.defining, &nonproper.defining);
            for p in [
                critical.defining.div_exact(&g).expect("gcd divides"),
                nonproper.defining.div_exact(&g).expect("gcd divides"),
                g,
            ] {
                if !p.is_constant() {
                    candidates.push(p);
                }
            }
        }
    }
    let mut pieces = Vec::with_capacity(candidates.len());
    for (k, c) in candidates.into_iter().enumerate() {
        pieces.push(judge_piece(
            f,
            c,
            degree,
            seed.wrapping_add(1000 * (k as u64 + 1)),
        )?);
    }
    let kept = pieces
        .iter()
        .filter(|p| p.status != PieceStatus::Rejected)
        .fold(BPoly::one(), |acc, p| &acc * &p.defining);
    Ok(BranchLocus {
        degree,
        critical,
        nonproper,
        pieces,
        curve: CurveSpec::from_poly(&kept)?,
    })
}

/// `{ a : #f⁻¹(a) ≠ deg_f }` as a square-free curve.
pub fn branch_locus(f: &PolyMap, seed: u64) -> Result<CurveSpec> {
    Ok(branch_locus_detailed(f, seed)?.curve)
}

/// Integer target off `avoid`, at which the fiber is finite.
pub fn generic_target(f: &PolyMap, avoid: &CurveSpec, rng: &mut ChaCha8Rng) -> Result<(Rat, Rat)> {
    for _ in 0..MAX_RETRIES {
        let t = random_target(rng);
        if avoid.contains(&t.0, &t.1) {
            continue;
        }
        let (g1, g2) = (minus_const(&f.f1, &t.0), minus_const(&f.f2, &t.1));
        if gcd(&g1, &g2).is_constant() {
            return Ok(t);
        }
    }
    Err(Error::SamplingFailed(MAX_RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ts: &[(i64, u32, u32)]) -> BPoly {
        BPoly::from_int_terms(ts)
    }

    fn map(a: &[(i64, u32, u32)], b: &[(i64, u32, u32)]) -> PolyMap {
        PolyMap::new(p(a), p(b))
    }

    fn square() -> PolyMap {
        map(&[(1, 2, 0)], &[(1, 0, 1)])
    }

    fn cube_type_two() -> PolyMap {
        map(&[(1, 3, 0)], &[(1, 2, 1)])
    }

    fn u() -> BPoly {
        BPoly::x()
    }

    #[test]
    fn jacobians() {
        assert_eq!(jacobian_det(&square()), p(&[(2, 1, 0)]));
        assert_eq!(jacobian_det(&cube_type_two()), p(&[(3, 4, 0)]));
        assert_eq!(jacobian_det(&PolyMap::identity()), BPoly::one());
    }

    #[test]
    fn degrees() {
        assert_eq!(geometric_degree(&PolyMap::identity(), 0).unwrap(), 1);
        assert_eq!(geometric_degree(&square(), 0).unwrap(), 2);
        assert_eq!(geometric_degree(&cube_type_two(), 0).unwrap(), 3);
    }

    #[test]
    fn degenerate_map_is_rejected() {
        let f = map(&[(1, 1, 1)], &[(2, 1, 1)]);
        assert!(matches!(geometric_degree(&f, 0), Err(Error::DegenerateMap)));
    }

    #[test]
    fn critical_values() {
        assert_eq!(critical_value_curve(&square()).unwrap().defining, u());
        assert!(critical_value_curve(&PolyMap::identity()).unwrap().empty);
        let f = map(&[(1, 2, 0)], &[(1, 0, 1), (1, 3, 0)]);
        assert_eq!(critical_value_curve(&f).unwrap().defining, u());
    }

    #[test]
    fn critical_values_of_non_coordinate_critical_set() {
        // (x^2, y^2): critical set xy = 0 maps onto uv = 0
        let f = map(&[(1, 2, 0)], &[(1, 0, 2)]);
        assert_eq!(critical_value_curve(&f).unwrap().defining, p(&[(1, 1, 1)]));
    }

    #[test]
    fn nonproper_sets() {
        assert!(nonproper_curve(&square(), 0).unwrap().empty);
        assert!(nonproper_curve(&PolyMap::identity(), 0).unwrap().empty);
        assert_eq!(nonproper_curve(&cube_type_two(), 0).unwrap().defining, u());
    }

    #[test]
    fn branch_loci() {
        assert_eq!(branch_locus(&square(), 0).unwrap().defining, u());
        assert_eq!(branch_locus(&cube_type_two(), 0).unwrap().defining, u());
        assert!(branch_locus(&PolyMap::identity(), 0).unwrap().empty);
    }

    #[test]
    fn fibers() {
        let s = solve_fiber(&square(), &(rat(4), rat(0)), 0).unwrap();
        assert_eq!(s.count_distinct, 2);
        let mut xs: Vec<f64> = s.points.iter().map(|q| q.0.re).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] + 2.0).abs() < 1e-9 && (xs[1] - 2.0).abs() < 1e-9);
        assert!(s.points.iter().all(|q| q.1.re.abs() < 1e-9));
        assert!(s.residual_bound < 1e-6);

        let s = solve_fiber(&cube_type_two(), &(rat(0), rat(5)), 0).unwrap();
        assert_eq!(s.count_distinct, 0);
        assert!(!s.infinite);

        let s = solve_fiber(&cube_type_two(), &(rat(0), rat(0)), 0).unwrap();
        assert!(s.infinite);
    }

    #[test]
    fn fiber_over_one_five() {
        let s = solve_fiber(&cube_type_two(), &(rat(1), rat(5)), 3).unwrap();
        assert_eq!(s.count_distinct, 3);
        assert_eq!(s.exact_count, 3);
        for (x, y) in &s.points {
            let (x, y) = (x.to_complex(), y.to_complex());
            assert!((x * x * x - 1.0).norm() < 1e-9);
            assert!((x * x * y - 5.0).norm() < 1e-9);
        }
    }

    #[test]
    fn parametric_implicitization() {
        // t ↦ (t^2, t^3) is the cusp v^2 = u^3
        let c =
            implicitize_parametric(&UPoly::from_ints(&[0, 0, 1]), &UPoly::from_ints(&[0, 0, 0, 1])).unwrap();
        assert_eq!(c.defining, p(&[(1, 3, 0), (-1, 0, 2)]));
    }

    #[test]
    fn collinear_fiber_survives_every_shear() {
        // (x^3, y − x): every fiber lies on a line of slope 1, which some shears project to a point.
        let f = map(&[(1, 3, 0)], &[(1, 0, 1), (-1, 1, 0)]);
        let t = (rat(5), rat(-2));
        for seed in 0..64 {
            assert_eq!(
                solve_fiber(&f, &t, seed).unwrap().count_distinct,
                3,
                "seed {seed}"
            );
            assert_eq!(
                exact_fiber_count(&f, &t, seed).unwrap(),
                FiberCount::Finite(3),
                "seed {seed}"
            );
        }
    }
}
