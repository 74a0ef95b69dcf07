//! Double-precision complex roots of rational univariate polynomials.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_traits::Zero;

use super::rat::{approx_rational, ratio, to_f64, Rat};
use super::upoly::UPoly;
use crate::{Error, Result};

/// Distance below which two numeric points are considered the same.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Newton polishing iterations per root.
pub const POLISH_ITERS: usize = 20;

/// A finite complex number.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CPoint {
    pub re: f64,
    pub im: f64,
}

impl CPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(CPoint { re, im })
        } else {
            Err(Error::NumericUnstable("non-finite coordinate".into()))
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl TryFrom<Complex64> for CPoint {
    type Error = Error;
    fn try_from(z: Complex64) -> Result<Self> {
        CPoint::new(z.re, z.im)
    }
}

/// Roots with multiplicity plus the worst relative residual after polishing.
#[derive(Clone, Debug)]
pub struct RootReport {
    pub roots: Vec<CPoint>,
    pub residual: f64,
}

fn to_f64_coeffs(p: &UPoly) -> Result<Vec<f64>> {
    let m = p.monic();
    let cs: Vec<f64> = m.coeffs().iter().map(to_f64).collect();
    if cs.iter().any(|c| !c.is_finite()) || cs.last().is_none_or(|c| c.is_zero()) {
        return Err(Error::NumericUnstable(format!(
            "coefficients of {p} do not fit in double precision"
        )));
    }
    Ok(cs)
}

fn horner(cs: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    let mut mag = 0.0;
    let r = z.norm();
    for c in cs.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
        mag = mag * r + c.abs();
    }
    (v, dv, mag)
}

/// Attempts at the eigenvalue iteration, each from a different shift.
const SCHUR_ATTEMPTS: i64 = 4;
const SCHUR_MAX_ITERS: usize = 10_000;

/// Roots of a square-free polynomial via companion-matrix eigenvalues plus Newton polishing.
///
/// The polynomial is first shifted exactly to its root centroid, so a tight
/// cluster far from the origin stays well conditioned in floating point. A
/// symmetric root pattern can stall the eigenvalue iteration; the shift is then
/// moved off-centre by a fraction of the root radius.
fn simple_roots(p: &UPoly) -> Result<(Vec<Complex64>, f64)> {
    let n = p.deg();
    let centre = -p.coeff(n - 1) / (p.lc() * Rat::from_integer(n.into()));
    let radius = root_radius(&to_f64_coeffs(&p.shift(&centre))?);
    for k in 0..SCHUR_ATTEMPTS {
        let nudge = approx_rational(radius * k as f64 / 7.0, 1000).unwrap_or_else(|| ratio(k, 7));
        let c = &centre + nudge;
        if let Some((roots, worst)) = shifted_roots(&p.shift(&c))? {
            let cz = Complex64::new(to_f64(&c), 0.0);
            return Ok((roots.into_iter().map(|z| z + cz).collect(), worst));
        }
    }
    Err(Error::NumericUnstable(format!(
        "eigenvalue iteration stalled for {p}"
    )))
}

/// Fujiwara-style bound `max |c_i / c_n|^(1/(n-i))` on the root moduli.
fn root_radius(cs: &[f64]) -> f64 {
    let n = cs.len() - 1;
    let lc = cs[n].abs();
    (0..n)
        .map(|i| (cs[i].abs() / lc).powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
}

fn shifted_roots(p: &UPoly) -> Result<Option<(Vec<Complex64>, f64)>> {
    let cs = to_f64_coeffs(p)?;
    let n = cs.len() - 1;
    let mut roots: Vec<Complex64> = if n == 1 {
        vec![Complex64::new(-cs[0], 0.0)]
    } else {
        // t = ρ s with ρ a power of two near the root radius: exact, and balances the companion matrix.
        let rho = match root_radius(&cs) {
            r if r > 0.0 && r.is_finite() => 2f64.powi(r.log2().round() as i32),
            _ => 1.0,
        };
        let lc = cs[n];
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            comp[(i, n - 1)] = -cs[i] / lc * rho.powi(i as i32 - n as i32);
        }
        match Schur::try_new(comp, f64::EPSILON, SCHUR_MAX_ITERS) {
            Some(schur) => schur.complex_eigenvalues().iter().map(|z| z * rho).collect(),
            None => return Ok(None),
        }
    };
    let mut worst: f64 = 0.0;
    for z in roots.iter_mut() {
        for _ in 0..POLISH_ITERS {
            let (v, dv, _) = horner(&cs, *z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            *z -= step;
            if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                break;
            }
        }
        let (v, _, mag) = horner(&cs, *z);
        worst = worst.max(v.norm() / mag.max(1.0));
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NumericUnstable(format!("root of {p} diverged")));
        }
    }
    // A square-free input has distinct roots; coincident ones mean Newton collapsed.
    for i in 0..n {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() <= 1e-12 * (1.0 + roots[i].norm()) {
                return Ok(None);
            }
        }
    }
    Ok(Some((roots, worst)))
}

/// All `deg h` roots with multiplicity.
///
/// The exact square-free decomposition is taken first, so repeated roots come
/// out as exact repeats of a well-conditioned simple root.
pub fn up_roots_numeric(h: &UPoly) -> Result<RootReport> {
    if h.deg() == 0 {
        return Err(Error::NumericUnstable("constant polynomial has no roots".into()));
    }
    let mut roots = Vec::with_capacity(h.deg());
    let mut residual: f64 = 0.0;
    for (factor, mult) in h.squarefree_decomposition() {
        let (rs, res) = simple_roots(&factor)?;
        residual = residual.max(res);
        for r in rs {
            for _ in 0..mult {
                roots.push(CPoint::try_from(r)?);
            }
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(RootReport { roots, residual })
}

/// Groups points closer than `tol` (single linkage) and returns one representative per group.
pub fn cluster<P: Copy>(points: &[P], dist: impl Fn(&P, &P) -> f64, tol: f64) -> Vec<P> {
    let mut reps: Vec<P> = Vec::new();
    for p in points {
        if !reps.iter().any(|r| dist(r, p) < tol) {
            reps.push(*p);
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::{rat, ratio};

    fn close(a: CPoint, re: f64, im: f64) -> bool {
        (a.re - re).abs() < 1e-10 && (a.im - im).abs() < 1e-10
    }

    #[test]
    fn real_pair() {
        let r = up_roots_numeric(&UPoly::from_ints(&[-4, 0, 1])).unwrap();
        assert!(close(r.roots[0], -2.0, 0.0) && close(r.roots[1], 2.0, 0.0));
    }

    #[test]
    fn imaginary_pair() {
        let r = up_roots_numeric(&UPoly::from_ints(&[1, 0, 1])).unwrap();
        assert!(close(r.roots[0], 0.0, -1.0) && close(r.roots[1], 0.0, 1.0));
    }

    #[test]
    fn triple_root_stays_clustered() {
        let p = UPoly::from_roots(&[rat(1), rat(1), rat(1)]);
        let r = up_roots_numeric(&p).unwrap();
        assert_eq!(r.roots.len(), 3);
        for z in &r.roots {
            assert!((z.to_complex() - Complex64::new(1.0, 0.0)).norm() < CLUSTER_TOL);
        }
        let reps = cluster(
            &r.roots,
            |a, b| (a.to_complex() - b.to_complex()).norm(),
            CLUSTER_TOL,
        );
        assert_eq!(reps.len(), 1);
    }

    #[test]
    fn constant_is_rejected() {
        assert!(up_roots_numeric(&UPoly::from_ints(&[3])).is_err());
    }

    fn assert_distinct_roots(p: &UPoly) {
        let r = up_roots_numeric(p).unwrap();
        assert_eq!(r.roots.len(), p.deg());
        let reps = cluster(
            &r.roots,
            |a, b| (a.to_complex() - b.to_complex()).norm(),
            CLUSTER_TOL,
        );
        assert_eq!(reps.len(), p.deg(), "{p}");
        assert!(r.residual < 1e-12, "{p}: residual {}", r.residual);
    }

    #[test]
    fn symmetric_patterns_converge() {
        assert_distinct_roots(&UPoly::from_ints(&[-2, 0, 0, 0, 1]));
        assert_distinct_roots(&UPoly::from_ints(&[1, 0, 0, 0, 0, 0, 1]));
        assert_distinct_roots(&UPoly::from_ints(&[-16, 0, 0, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn badly_scaled_quintic() {
        let p = UPoly::from_coeffs(vec![
            Rat::new(
                "43892120994033720933143".parse().unwrap(),
                "101682350000".parse().unwrap(),
            ),
            Rat::new("34336401528623".parse().unwrap(), "1886500".parse().unwrap()),
            ratio(3979581079, 75460),
            ratio(2558, 245),
            rat(5),
            rat(1),
        ]);
        assert_distinct_roots(&p);
    }

    #[test]
    fn far_cluster() {
        let p = UPoly::from_roots(&[rat(100000), rat(100001), ratio(200001, 2), rat(100002)]);
        let r = up_roots_numeric(&p).unwrap();
        assert!(close(r.roots[0], 100000.0, 0.0) && close(r.roots[3], 100002.0, 0.0));
    }
}
