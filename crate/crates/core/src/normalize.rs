//! Reduction of maps with a line as branched value set to the three normal
//! forms, plus the germ pull-back distinguisher and the J-curve ratio check.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::analyze::{branch_locus_detailed, implicitize_parametric, CurveSpec};
use crate::automorph::{apply_to_map, AutoWord, ElementaryMove, PolyMap};
use crate::poly::rat::rat_pow;
use crate::poly::{rat, BPoly, Rat, UPoly, Var};
use crate::rectify::{lemma1_normalize, rectify_coordinate, RectifyResult};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalForm {
    /// `(x^d, y)`
    TypeI { d: u32 },
    /// `(x^d, x^m y)`
    TypeII { d: u32, m: u32 },
    /// `(x^d, x^m (x^n y + Σ a_i x^i))`
    TypeIII { d: u32, m: u32, n: u32, a: Vec<Rat> },
}

impl NormalForm {
    pub fn type_i(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParams("d must be at least 1".into()));
        }
        Ok(NormalForm::TypeI { d })
    }

    pub fn type_ii(d: u32, m: u32) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(Error::InvalidParams("d and m must be at least 1".into()));
        }
        Ok(NormalForm::TypeII { d, m })
    }

    /// Checked constructor: `a_0 ≠ 0` and `a_i = 0` whenever `d | i + m`.
    pub fn type_iii(d: u32, m: u32, n: u32, a: Vec<Rat>) -> Result<Self> {
        if d == 0 || m == 0 || n == 0 {
            return Err(Error::InvalidParams("d, m and n must be at least 1".into()));
        }
        if a.len() != n as usize {
            return Err(Error::InvalidParams(format!(
                "expected {n} coefficients, got {}",
                a.len()
            )));
        }
        if a[0].is_zero() {
            return Err(Error::InvalidParams("a_0 must be nonzero".into()));
        }
        if let Some(i) = (0..n).find(|&i| (i + m).is_multiple_of(d) && !a[i as usize].is_zero()) {
            return Err(Error::InvalidParams(format!(
                "a_{i} must vanish since {i} + {m} is divisible by {d}"
            )));
        }
        Ok(NormalForm::TypeIII { d, m, n, a })
    }

    pub fn degree(&self) -> u32 {
        match self {
            NormalForm::TypeI { d } | NormalForm::TypeII { d, .. } | NormalForm::TypeIII { d, .. } => *d,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            NormalForm::TypeI { .. } => "i",
            NormalForm::TypeII { .. } => "ii",
            NormalForm::TypeIII { .. } => "iii",
        }
    }

    pub fn map(&self) -> PolyMap {
        let one = Rat::one;
        match self {
            NormalForm::TypeI { d } => PolyMap::new(BPoly::monomial(one(), *d, 0), BPoly::y()),
            NormalForm::TypeII { d, m } => {
                PolyMap::new(BPoly::monomial(one(), *d, 0), BPoly::monomial(one(), *m, 1))
            }
            NormalForm::TypeIII { d, m, n, a } => {
                let mut f2 = BPoly::monomial(one(), m + n, 1);
                for (i, ai) in a.iter().enumerate() {
                    f2.add_term((m + i as u32, 0), ai.clone());
                }
                PolyMap::new(BPoly::monomial(one(), *d, 0), f2)
            }
        }
    }
}

/// `a·x^k·y + x^l·g(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiMonomial {
    pub a: Rat,
    pub k: u32,
    pub l: u32,
    pub g: UPoly,
    /// The `y`-free part is zero (then `l = 0`, `g = 0`).
    pub y_free_zero: bool,
}

impl SemiMonomial {
    pub fn to_poly(&self) -> BPoly {
        let mut p = BPoly::monomial(self.a.clone(), self.k, 1);
        for (j, c) in self.g.coeffs().iter().enumerate() {
            p.add_term((self.l + j as u32, 0), c.clone());
        }
        p
    }
}

pub fn extract_semi_monomial(f2: &BPoly) -> Result<SemiMonomial> {
    let dy = f2.degree_in(Var::Y);
    if dy > 1 {
        return Err(Error::ShapeMismatch(format!("y-degree {dy} in {f2}")));
    }
    let coeffs = f2.to_coeffs_in(Var::Y);
    let c1 = coeffs.get(1).cloned().unwrap_or_else(UPoly::zero);
    if c1.is_zero() {
        return Err(Error::ShapeMismatch(format!("no y term in {f2}")));
    }
    let k = c1.valuation().expect("nonzero");
    if c1.deg() != k {
        return Err(Error::ShapeMismatch(format!(
            "y-coefficient {c1} is not a monomial"
        )));
    }
    let a = c1.lc();
    let c0 = coeffs.first().cloned().unwrap_or_else(UPoly::zero);
    if c0.is_zero() {
        return Ok(SemiMonomial {
            a,
            k: k as u32,
            l: 0,
            g: UPoly::zero(),
            y_free_zero: true,
        });
    }
    let l = c0.valuation().expect("nonzero");
    let g = UPoly::from_coeffs(c0.coeffs()[l..].to_vec());
    Ok(SemiMonomial {
        a,
        k: k as u32,
        l: l as u32,
        g,
        y_free_zero: false,
    })
}

/// Data of the `k > 0` case split.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitData {
    pub m: u32,
    pub n: u32,
    pub h: UPoly,
    pub b: UPoly,
    pub c: UPoly,
    pub gamma1: AutoWord,
    pub gamma2: AutoWord,
}

fn set_coeff(v: &mut Vec<Rat>, i: usize, c: Rat) {
    if v.len() <= i {
        v.resize(i + 1, Rat::zero());
    }
    v[i] += c;
}

/// `γ1 = (u, a⁻¹(v − c(u)))` as a word.
fn gamma1_word(a: &Rat, c: &UPoly) -> AutoWord {
    AutoWord::new(vec![
        ElementaryMove::scaling(Rat::one(), a.recip()),
        ElementaryMove::TriangularY(-c),
    ])
}

/// Splits `x^l g(x)` into the `h`, `b`, `c` parts for `k ≥ 1`.
pub fn split_case(semi: &SemiMonomial, d: u32) -> Result<SplitData> {
    if semi.k == 0 {
        return Err(Error::InvalidParams("split_case needs k ≥ 1".into()));
    }
    let (m, n) = if semi.y_free_zero {
        (semi.k, 0)
    } else {
        let m = semi.k.min(semi.l);
        (m, semi.k - m)
    };
    let ainv = semi.a.recip();
    let (mut h, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
    for (jj, e) in semi.g.coeffs().iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let j = semi.l + jj as u32;
        if j.is_multiple_of(d) {
            set_coeff(&mut c, (j / d) as usize, e.clone());
        } else if n == 0 {
            set_coeff(&mut h, (j - m) as usize, e * &ainv);
        } else {
            let i = j - m;
            if i >= n {
                set_coeff(&mut b, (i - n) as usize, e * &ainv);
            } else {
                set_coeff(&mut h, i as usize, e * &ainv);
            }
        }
    }
    let (h, b, c) = (
        UPoly::from_coeffs(h),
        UPoly::from_coeffs(b),
        UPoly::from_coeffs(c),
    );
    let gamma1 = gamma1_word(&semi.a, &c);
    let gamma2 = AutoWord::single(ElementaryMove::TriangularY(if n == 0 { -&h } else { -&b }));
    Ok(SplitData {
        m,
        n,
        h,
        b,
        c,
        gamma1,
        gamma2,
    })
}

/// Restores `a_0 ≠ 0` by pulling powers of `x` out of `h`; collapses to Type II when `h = 0`.
pub fn renormalize_typeiii(m: u32, n: u32, a: &[Rat], d: u32) -> Result<NormalForm> {
    let (mut m, mut n) = (m, n);
    let mut a: Vec<Rat> = a.to_vec();
    a.resize(n as usize, Rat::zero());
    loop {
        for (i, ai) in a.iter_mut().enumerate() {
            if (i as u32 + m).is_multiple_of(d) {
                *ai = Rat::zero();
            }
        }
        match a.iter().position(|c| !c.is_zero()) {
            None => return NormalForm::type_ii(d, m + n),
            Some(0) => return NormalForm::type_iii(d, m, n, a),
            Some(s) => {
                m += s as u32;
                n -= s as u32;
                a.drain(..s);
            }
        }
    }
}

/// Everything needed to replay the reduction exactly.
#[derive(Clone, Debug)]
pub struct NormalizationTrace {
    pub degree: u32,
    pub branch_locus: CurveSpec,
    /// `α` with `α(E_f) = {u = 0}` and first component of `α ∘ f ∘ β` equal to `x^d + c`.
    pub alpha_target: AutoWord,
    pub beta_source: AutoWord,
    pub shift_c: Rat,
    pub semi: SemiMonomial,
    pub m: u32,
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub h_poly: UPoly,
    pub b_poly: UPoly,
    pub c_poly: UPoly,
    pub gamma1: AutoWord,
    pub gamma2: AutoWord,
    pub final_form: NormalForm,
}

impl NormalizationTrace {
    /// Target-side word `γ1 ∘ (u − c, v) ∘ α`.
    pub fn target_word(&self) -> AutoWord {
        self.gamma1
            .then_inner(ElementaryMove::translation(-self.shift_c.clone(), Rat::zero()))
            .compose(&self.alpha_target)
    }

    /// Source-side word `β ∘ γ2`.
    pub fn source_word(&self) -> AutoWord {
        self.beta_source.compose(&self.gamma2)
    }

    /// Distinguished target point: the image of the line in the fiber for Types ii/iii.
    pub fn distinguished_point(&self) -> (Rat, Rat) {
        self.target_word()
            .invert()
            .apply_point(&(Rat::zero(), Rat::zero()))
    }
}

pub fn replay(f: &PolyMap, trace: &NormalizationTrace) -> PolyMap {
    apply_to_map(&trace.source_word(), f, &trace.target_word())
}

/// Whether the fiber of `f` over `target` contains a curve.
pub fn fiber_contains_curve(f: &PolyMap, target: &(Rat, Rat)) -> bool {
    let g1 = &f.f1 - &BPoly::constant(target.0.clone());
    let g2 = &f.f2 - &BPoly::constant(target.1.clone());
    g1.is_zero() || g2.is_zero() || !crate::poly::gcd(&g1, &g2).is_constant()
}

/// Writes `phi_hat` as `κ (x − δ)^d + c`, or fails.
fn recentre(phi_hat: &UPoly) -> Result<(Rat, Rat, Rat)> {
    let d = phi_hat.deg();
    let kappa = phi_hat.lc();
    let delta = -phi_hat.coeff(d - 1) / (&kappa * rat(d as i64));
    let centred = phi_hat.shift(&delta);
    if (1..d).any(|i| !centred.coeff(i).is_zero()) {
        return Err(Error::Lemma1MiddleCoefficients(format!(
            "{phi_hat} is not a shifted pure power"
        )));
    }
    Ok((kappa, delta, centred.coeff(0)))
}

/// Runs the full reduction and checks the replay identity exactly.
pub fn normalize_map(f: &PolyMap, seed: u64) -> Result<NormalizationTrace> {
    let locus = branch_locus_detailed(f, seed)?;
    let alpha0 = if locus.curve.empty {
        if locus.degree != 1 {
            return Err(Error::NotInClass(format!(
                "empty branch locus with geometric degree {}",
                locus.degree
            )));
        }
        AutoWord::identity()
    } else {
        match rectify_coordinate(&locus.curve.defining)? {
            RectifyResult::Rectified { alpha } => alpha.invert(),
            RectifyResult::NotRectifiable { reason, .. } => {
                return Err(Error::NotInClass(format!(
                    "branch locus {} is not a line: {reason}",
                    locus.curve.to_uv_string()
                )))
            }
        }
    };
    let (fb1, _) = alpha0.apply_pair(&f.f1, &f.f2);
    let cert = lemma1_normalize(&fb1)?;
    let (kappa, delta, c0) = recentre(&cert.phi_hat)?;
    let d = cert.phi_hat.deg() as u32;
    if d as usize != locus.degree {
        return Err(Error::Inconsistent(format!(
            "first component has degree {d} but the geometric degree is {}",
            locus.degree
        )));
    }
    let alpha_target = alpha0.then_outer(ElementaryMove::scaling(kappa.recip(), Rat::one()));
    let beta_source = cert
        .alpha
        .then_inner(ElementaryMove::translation(delta, Rat::zero()));
    let shift_c = &c0 / &kappa;
    let (fb1, fb2) = alpha_target.apply_pair(&f.f1, &f.f2);
    let ft1 = &beta_source.apply_to_poly(&fb1) - &BPoly::constant(shift_c.clone());
    if ft1 != BPoly::monomial(Rat::one(), d, 0) {
        return Err(Error::Inconsistent(format!(
            "first component became {ft1}, expected x^{d}"
        )));
    }
    let ft2 = beta_source.apply_to_poly(&fb2);
    let semi = extract_semi_monomial(&ft2)?;
    let trace = if semi.k == 0 {
        let tail = &semi.g * &UPoly::monomial(Rat::one(), semi.l as usize);
        let gamma2 = AutoWord::new(vec![
            ElementaryMove::scaling(Rat::one(), semi.a.recip()),
            ElementaryMove::TriangularY(-&tail),
        ]);
        NormalizationTrace {
            degree: d,
            branch_locus: locus.curve,
            alpha_target,
            beta_source,
            shift_c,
            m: 0,
            n: 0,
            k: semi.k,
            l: semi.l,
            h_poly: UPoly::zero(),
            b_poly: UPoly::zero(),
            c_poly: UPoly::zero(),
            gamma1: AutoWord::identity(),
            gamma2,
            final_form: NormalForm::type_i(d)?,
            semi,
        }
    } else {
        let split = split_case(&semi, d)?;
        let final_form = if split.n == 0 {
            NormalForm::type_ii(d, split.m)?
        } else {
            let a: Vec<Rat> = (0..split.n as usize).map(|i| split.h.coeff(i)).collect();
            renormalize_typeiii(split.m, split.n, &a, d)?
        };
        NormalizationTrace {
            degree: d,
            branch_locus: locus.curve,
            alpha_target,
            beta_source,
            shift_c,
            m: split.m,
            n: split.n,
            k: semi.k,
            l: semi.l,
            h_poly: split.h,
            b_poly: split.b,
            c_poly: split.c,
            gamma1: split.gamma1,
            gamma2: split.gamma2,
            final_form,
            semi,
        }
    };
    let replayed = replay(f, &trace);
    if replayed != trace.final_form.map() {
        return Err(Error::Inconsistent(format!(
            "replay gives ({}, {}), expected ({}, {})",
            replayed.f1,
            replayed.f2,
            trace.final_form.map().f1,
            trace.final_form.map().f2
        )));
    }
    Ok(trace)
}

/// Whether the two forms are related by scalings `(λx, μy)` and `(σu, νv)` with complex factors.
pub fn equivalent_normal_forms(n1: &NormalForm, n2: &NormalForm) -> bool {
    match (n1, n2) {
        (NormalForm::TypeI { d: d1 }, NormalForm::TypeI { d: d2 }) => d1 == d2,
        (NormalForm::TypeII { d: d1, m: m1 }, NormalForm::TypeII { d: d2, m: m2 }) => d1 == d2 && m1 == m2,
        (
            NormalForm::TypeIII {
                d: d1,
                m: m1,
                n: nn1,
                a: a1,
            },
            NormalForm::TypeIII {
                d: d2,
                m: m2,
                n: nn2,
                a: a2,
            },
        ) => (d1, m1, nn1) == (d2, m2, nn2) && scaling_related(a1, a2),
        _ => false,
    }
}

/// Whether `b_i = c·λ^i·a_i` for all `i` with some nonzero complex `c, λ`.
///
/// With `ρ_i = (b_i a_0) / (a_i b_0)` this asks for `λ` with `λ^i = ρ_i` on the
/// support. If `g` is the gcd of the support and `Σ c_i i = g`, then `λ^g` must
/// be `Λ = Π ρ_i^{c_i}`, and a solution exists iff `Λ^{i/g} = ρ_i` for all `i`.
fn scaling_related(a: &[Rat], b: &[Rat]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return false;
    }
    let support: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_zero()).collect();
    if support != (0..b.len()).filter(|&i| !b[i].is_zero()).collect::<Vec<_>>() || support[0] != 0 {
        return false;
    }
    let rho = |i: usize| (&b[i] * &a[0]) / (&a[i] * &b[0]);
    let mut g: i64 = 0;
    let mut lam = Rat::one();
    for &i in support.iter().skip(1) {
        let i = i as i64;
        let e = g.extended_gcd(&i);
        // new Λ = Λ^{x} · ρ_i^{y} with x·g + y·i = gcd
        lam = rat_pow(&lam, e.x) * rat_pow(&rho(i as usize), e.y);
        g = e.gcd;
    }
    support
        .iter()
        .skip(1)
        .all(|&i| rat_pow(&lam, i as i64 / g) == rho(i))
}

/// Monomial germ `t ↦ (t^p, c·t^q)` at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    pub p: u32,
    pub q: u32,
    pub c: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GermClass {
    /// Not applicable: Type i has finite fibers.
    LineOnly,
    BranchAtOrigin,
    BoundedBranch,
    BranchAtInfinity,
}

/// Classifies the pull-back of a germ by the exponent of `y` along `x = t^{p/d}`.
pub fn germ_pullback(nf: &NormalForm, germ: &Germ) -> GermClass {
    match nf {
        NormalForm::TypeI { .. } => GermClass::LineOnly,
        // y = c t^q / x^m = c t^{q − p m / d}
        NormalForm::TypeII { d, m } => {
            let lhs = germ.q as u64 * *d as u64;
            let rhs = germ.p as u64 * *m as u64;
            match lhs.cmp(&rhs) {
                std::cmp::Ordering::Greater => GermClass::BranchAtOrigin,
                std::cmp::Ordering::Equal => GermClass::BoundedBranch,
                std::cmp::Ordering::Less => GermClass::BranchAtInfinity,
            }
        }
        // y ~ −a_0 t^{−p n / d}, unbounded since a_0 ≠ 0 and n ≥ 1
        NormalForm::TypeIII { .. } => GermClass::BranchAtInfinity,
    }
}

#[derive(Clone, Debug)]
pub struct JCurveInput {
    pub components: Vec<(UPoly, UPoly)>,
    pub probes: Vec<AutoWord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JCurveVerdict {
    CandidateJCurve,
    NotJCurve,
}

#[derive(Clone, Debug)]
pub struct ComponentCheck {
    pub implicit: BPoly,
    pub not_line: bool,
    /// `gcd(p′, q′)`: nonconstant means the parametrisation has a critical point.
    pub derivative_gcd: UPoly,
}

#[derive(Clone, Debug)]
pub struct JCurveReport {
    /// Entry 0 is the identity, then one entry per probe.
    pub ratio_equal: Vec<bool>,
    pub components: Vec<ComponentCheck>,
    pub verdict: JCurveVerdict,
}

fn ratios_equal(degs: &[(usize, usize)]) -> bool {
    degs.windows(2).all(|w| w[0].0 * w[1].1 == w[1].0 * w[0].1)
}

pub fn jcurve_ratio_check(input: &JCurveInput) -> Result<JCurveReport> {
    if let Some(i) = input
        .components
        .iter()
        .position(|(p, q)| p.is_constant() && q.is_constant())
    {
        return Err(Error::InvalidParams(format!("component {i} is constant")));
    }
    let mut ratio_equal = Vec::with_capacity(input.probes.len() + 1);
    ratio_equal.push(ratios_equal(
        &input
            .components
            .iter()
            .map(|(p, q)| (p.deg(), q.deg()))
            .collect::<Vec<_>>(),
    ));
    for probe in &input.probes {
        let (a, b) = probe.components();
        let degs: Vec<(usize, usize)> = input
            .components
            .iter()
            .map(|(p, q)| {
                (
                    a.substitute_univariate(p, q).deg(),
                    b.substitute_univariate(p, q).deg(),
                )
            })
            .collect();
        ratio_equal.push(ratios_equal(&degs));
    }
    let mut components = Vec::with_capacity(input.components.len());
    for (p, q) in &input.components {
        let implicit = implicitize_parametric(p, q)?.defining;
        let not_line = !matches!(rectify_coordinate(&implicit)?, RectifyResult::Rectified { .. });
        components.push(ComponentCheck {
            implicit,
            not_line,
            derivative_gcd: p.derivative().gcd(&q.derivative()),
        });
    }
    let verdict = if ratio_equal.iter().all(|&b| b) && components.iter().all(|c| c.not_line) {
        JCurveVerdict::CandidateJCurve
    } else {
        JCurveVerdict::NotJCurve
    };
    Ok(JCurveReport {
        ratio_equal,
        components,
        verdict,
    })
}
