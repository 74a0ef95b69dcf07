//! Sparse bivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{rat, to_f64, Rat};
use super::upoly::UPoly;
use num_complex::Complex64;

/// One of the two variables. For target-side polynomials `X` plays `u` and `Y` plays `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
}

/// Exponent pair `(i, j)` for `x^i y^j`.
pub type Exp = (u32, u32);

/// Graded lexicographic comparison: total degree first, then the `x` exponent.
pub fn grlex(a: &Exp, b: &Exp) -> Ordering {
    (a.0 + a.1, a.0).cmp(&(b.0 + b.1, b.0))
}

/// Sparse polynomial in two variables. No zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BPoly {
    terms: BTreeMap<Exp, Rat>,
}

impl BPoly {
    pub fn zero() -> Self {
        BPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rat::one(), 0, 1)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Self::x(),
            Var::Y => Self::y(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rat, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BPoly { terms }
    }

    /// Builds from `(coeff, i, j)` triples, merging repeated exponents.
    pub fn from_terms(it: impl IntoIterator<Item = (Rat, u32, u32)>) -> Self {
        let mut p = Self::zero();
        for (c, i, j) in it {
            p.add_term((i, j), c);
        }
        p
    }

    pub fn from_int_terms(ts: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(ts.iter().map(|&(c, i, j)| (rat(c), i, j)))
    }

    /// Embeds a univariate polynomial as a polynomial in `v`.
    pub fn from_upoly(p: &UPoly, v: Var) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let k = k as u32;
            match v {
                Var::X => (c.clone(), k, 0),
                Var::Y => (c.clone(), 0, k),
            }
        }))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0, 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|&(i, j)| if v == Var::X { i } else { j })
            .max()
            .unwrap_or(0)
    }

    /// Whether the variable `v` occurs at all.
    pub fn involves(&self, v: Var) -> bool {
        self.degree_in(v) > 0
    }

    /// Leading exponent and coefficient under graded-lex order.
    pub fn leading_term(&self) -> Option<(Exp, Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| grlex(a.0, b.0))
            .map(|(e, c)| (*e, c.clone()))
    }

    /// Terms in descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(Exp, Rat)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|a, b| grlex(&b.0, &a.0));
        v
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Scales so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.recip()),
            None => Self::zero(),
        }
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        BPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.0 + e.1 == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Power with a signed exponent; negative exponents are rejected.
    pub fn try_pow(&self, e: i64) -> crate::Result<Self> {
        if e < 0 {
            return Err(crate::Error::NegativeExponent(e));
        }
        Ok(self.pow(e as u32))
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            match v {
                Var::X if i > 0 => out.add_term((i - 1, j), c * rat(i as i64)),
                Var::Y if j > 0 => out.add_term((i, j - 1), c * rat(j as i64)),
                _ => {}
            }
        }
        out
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.to_coeffs_in(Var::Y)
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * y + c.eval(x))
    }

    pub fn eval_f64(&self, x: Complex64, y: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j), c) in &self.terms {
            acc += x.powu(i) * y.powu(j) * to_f64(c);
        }
        acc
    }

    /// Sum of absolute term values at a point; used to scale residuals.
    pub fn magnitude_at(&self, x: Complex64, y: Complex64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| (x.powu(i) * y.powu(j)).norm() * to_f64(c).abs())
            .sum()
    }

    /// Substitutes `v = value`, leaving a univariate polynomial in the other variable.
    pub fn specialize(&self, v: Var, value: &Rat) -> UPoly {
        let coeffs = self.to_coeffs_in(v.other());
        UPoly::from_coeffs(coeffs.iter().map(|c| c.eval(value)).collect())
    }

    /// Substitutes `v = value` but keeps the result bivariate.
    pub fn partial_eval(&self, v: Var, value: &Rat) -> Self {
        Self::from_upoly(&self.specialize(v, value), v.other())
    }

    /// Coefficients as a polynomial in `v`: entry `k` is the coefficient of `v^k`,
    /// a univariate polynomial in the other variable.
    pub fn to_coeffs_in(&self, v: Var) -> Vec<UPoly> {
        let n = if self.is_zero() {
            0
        } else {
            self.degree_in(v) as usize + 1
        };
        let mut raw: Vec<Vec<Rat>> = vec![Vec::new(); n];
        for (&(i, j), c) in &self.terms {
            let (k, o) = match v {
                Var::X => (i as usize, j as usize),
                Var::Y => (j as usize, i as usize),
            };
            let row = &mut raw[k];
            if row.len() <= o {
                row.resize(o + 1, Rat::zero());
            }
            row[o] = c.clone();
        }
        raw.into_iter().map(UPoly::from_coeffs).collect()
    }

    /// Inverse of [`BPoly::to_coeffs_in`].
    pub fn from_coeffs_in(coeffs: &[UPoly], v: Var) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (o, a) in c.coeffs().iter().enumerate() {
                let e = match v {
                    Var::X => (k as u32, o as u32),
                    Var::Y => (o as u32, k as u32),
                };
                p.add_term(e, a.clone());
            }
        }
        p
    }

    /// Polynomial in `v` only, if the other variable does not occur.
    pub fn as_univariate(&self, v: Var) -> Option<UPoly> {
        if self.involves(v.other()) {
            return None;
        }
        Some(self.specialize(v.other(), &Rat::zero()))
    }

    /// Composition `self(a(x, y), b(x, y))`.
    pub fn substitute(&self, a: &BPoly, b: &BPoly) -> BPoly {
        if self.is_zero() {
            return Self::zero();
        }
        // Horner in y with x-powers cached.
        let rows = self.to_coeffs_in(Var::Y);
        let maxx = self.degree_in(Var::X) as usize;
        let mut apow = Vec::with_capacity(maxx + 1);
        apow.push(Self::one());
        for k in 1..=maxx {
            let next = &apow[k - 1] * a;
            apow.push(next);
        }
        let eval_row = |row: &UPoly| {
            let mut acc = Self::zero();
            for (k, c) in row.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc = &acc + &apow[k].scale(c);
                }
            }
            acc
        };
        rows.iter()
            .rev()
            .fold(Self::zero(), |acc, row| &(&acc * b) + &eval_row(row))
    }

    /// Composition with univariate polynomials, `self(p(t), q(t))`.
    pub fn substitute_univariate(&self, p: &UPoly, q: &UPoly) -> UPoly {
        let a = Self::from_upoly(p, Var::X);
        let b = Self::from_upoly(q, Var::X);
        self.substitute(&a, &b)
            .as_univariate(Var::X)
            .expect("univariate substitution stays univariate")
    }

    /// Exact quotient by multivariate division in graded-lex order, `None` if `d` does not divide.
    pub fn div_exact(&self, d: &BPoly) -> Option<BPoly> {
        let (dl, dc) = d.leading_term()?;
        let dinv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((rl, rc)) = rem.leading_term() {
            if rl.0 < dl.0 || rl.1 < dl.1 {
                return None;
            }
            let e = (rl.0 - dl.0, rl.1 - dl.1);
            let c = rc * &dinv;
            let step = Self::monomial(c.clone(), e.0, e.1);
            rem = &rem - &(&step * d);
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Swaps the roles of the two variables.
    pub fn swap_vars(&self) -> Self {
        BPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((j, i), c.clone()))
                .collect(),
        }
    }

    /// Lowest power of `v` dividing every term.
    pub fn valuation_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|&(i, j)| if v == Var::X { i } else { j })
            .min()
            .unwrap_or(0)
    }

    /// Deterministic text form with the given variable names, graded-lex descending.
    pub fn to_string_with(&self, names: [&str; 2]) -> String {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, ((i, j), c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mut monom = Vec::new();
            for (e, name) in [(*i, names[0]), (*j, names[1])] {
                match e {
                    0 => {}
                    1 => monom.push(name.to_string()),
                    _ => monom.push(format!("{name}^{e}")),
                }
            }
            let monom = monom.join("*");
            if monom.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&monom);
            } else {
                out.push_str(&format!("{a}*{monom}"));
            }
        }
        out
    }
}

/// `q(p)` for univariate `q`.
pub fn compose_upoly(q: &UPoly, p: &BPoly) -> BPoly {
    q.coeffs()
        .iter()
        .rev()
        .fold(BPoly::zero(), |acc, c| &(&acc * p) + &BPoly::constant(c.clone()))
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(["x", "y"]))
    }
}

impl fmt::Debug for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BPoly({})", self)
    }
}

impl Add for &BPoly {
    type Output = BPoly;
    fn add(self, rhs: &BPoly) -> BPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &BPoly {
    type Output = BPoly;
    fn sub(self, rhs: &BPoly) -> BPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &BPoly {
    type Output = BPoly;
    fn mul(self, rhs: &BPoly) -> BPoly {
        let mut acc: BTreeMap<Exp, Rat> = BTreeMap::new();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                *acc.entry((i + k, j + l)).or_insert_with(Rat::zero) += a * b;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        BPoly { terms: acc }
    }
}

impl Neg for &BPoly {
    type Output = BPoly;
    fn neg(self) -> BPoly {
        self.scale(&-Rat::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BPoly {
            type Output = BPoly;
            fn $m(self, rhs: BPoly) -> BPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BPoly {
    type Output = BPoly;
    fn neg(self) -> BPoly {
        -&self
    }
}
