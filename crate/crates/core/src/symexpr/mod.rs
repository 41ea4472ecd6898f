//! Exact expressions of the form `Σ c · monomial(x, t, r, s) · exp(a r + b s)` with rational
//! `c, a, b`.
//!
//! This class is closed under addition, multiplication and differentiation, which is all the
//! symmetry generators need. Expressions are kept in a canonical normal form, so equality and
//! zero tests are exact structural comparisons.

mod field;
mod parse;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::params::{to_f64, Rational};

pub use field::{lie_bracket, VectorFieldSpec};
pub use parse::{parse_expr, parse_expr_with};

/// Independent or dependent variable. Spatial indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Spatial coordinate `x_j`, `j >= 1`.
    X(usize),
    /// Time.
    T,
    /// Log-amplitude `r = ln|psi|`.
    R,
    /// Phase `s = arg psi`.
    S,
}

impl Var {
    /// Parses `x1..xn`, `t`, `r` or `s`; spatial indices above `n` are rejected.
    pub fn parse(name: &str, n: usize) -> Result<Var> {
        let v = match name {
            "t" => Var::T,
            "r" => Var::R,
            "s" => Var::S,
            _ => {
                let idx = name
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or_else(|| Error::UnknownVariable(name.into()))?;
                Var::X(idx)
            }
        };
        match v {
            Var::X(j) if j == 0 || j > n => Err(Error::UnknownVariable(name.into())),
            _ => Ok(v),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(j) => write!(f, "x{j}"),
            Var::T => f.write_str("t"),
            Var::R => f.write_str("r"),
            Var::S => f.write_str("s"),
        }
    }
}

/// Product of powers of variables; sorted by variable, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    /// The empty product.
    pub fn one() -> Self {
        Self(Vec::new())
    }

    /// A single variable.
    pub fn var(v: Var) -> Self {
        Self(alloc::vec![(v, 1)])
    }

    /// Exponent of `v`.
    pub fn degree(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    /// `(variable, exponent)` pairs in canonical order.
    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                core::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Self(out)
    }

    /// Derivative with respect to `v` as `(multiplier, monomial)`; `None` if it vanishes.
    fn derive(&self, v: Var) -> Option<(u32, Self)> {
        let pos = self.0.iter().position(|(w, _)| *w == v)?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 = e - 1;
        }
        Some((e, Self(out)))
    }

    fn eval(&self, x: &[f64], t: f64, r: f64, s: f64) -> f64 {
        self.0.iter().fold(1.0, |acc, &(v, e)| {
            let base = match v {
                Var::X(j) => x.get(j - 1).copied().unwrap_or(f64::NAN),
                Var::T => t,
                Var::R => r,
                Var::S => s,
            };
            acc * powi(base, e)
        })
    }
}

fn powi(base: f64, e: u32) -> f64 {
    (0..e).fold(1.0, |acc, _| acc * base)
}

/// Sort key of a term: exponential rates first, then the monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Key {
    a: Rational,
    b: Rational,
    mono: Monomial,
}

/// One term `coeff · mono · exp(a r + b s)` of a [`SymExpr`].
#[derive(Clone, Copy, Debug)]
pub struct Term<'a> {
    /// Nonzero rational coefficient.
    pub coeff: &'a Rational,
    /// Polynomial factor.
    pub mono: &'a Monomial,
    /// Rate of `r` in the exponential.
    pub a: &'a Rational,
    /// Rate of `s` in the exponential.
    pub b: &'a Rational,
}

/// Exact expression in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymExpr {
    terms: BTreeMap<Key, Rational>,
}

impl SymExpr {
    /// The zero expression.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant one.
    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// A rational constant.
    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one(), Rational::zero(), Rational::zero())
    }

    /// An integer constant.
    pub fn int(c: i64) -> Self {
        Self::constant(crate::params::int(c))
    }

    /// A single variable.
    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v), Rational::zero(), Rational::zero())
    }

    /// `exp(a r + b s)`.
    pub fn exp_linear(a: Rational, b: Rational) -> Self {
        Self::term(Rational::one(), Monomial::one(), a, b)
    }

    /// A single term `c · mono · exp(a r + b s)`.
    pub fn term(c: Rational, mono: Monomial, a: Rational, b: Rational) -> Self {
        let mut out = Self::zero();
        out.accumulate(Key { a, b, mono }, c);
        out
    }

    fn accumulate(&mut self, key: Key, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// True iff the normal form has no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms in the normal form.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`SymExpr::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = Term<'_>> {
        self.terms.iter().map(|(k, c)| Term { coeff: c, mono: &k.mono, a: &k.a, b: &k.b })
    }

    /// The value if the expression is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (k, c) = self.terms.iter().next()?;
                (k.mono.0.is_empty() && k.a.is_zero() && k.b.is_zero()).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Whether any term depends on `v` (exponentials count for `r` and `s`).
    pub fn depends_on(&self, v: Var) -> bool {
        self.terms
            .keys()
            .any(|k| k.mono.degree(v) > 0 || (v == Var::R && !k.a.is_zero()) || (v == Var::S && !k.b.is_zero()))
    }

    /// Largest spatial index appearing, 0 if none.
    pub fn max_spatial_index(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|k| k.mono.0.iter())
            .filter_map(|(v, _)| match v {
                Var::X(j) => Some(*j),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative with respect to `v`.
    pub fn differentiate(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            if let Some((e, mono)) = k.mono.derive(v) {
                let key = Key { a: k.a.clone(), b: k.b.clone(), mono };
                out.accumulate(key, c * Rational::from_integer(e.into()));
            }
            let rate = match v {
                Var::R => &k.a,
                Var::S => &k.b,
                _ => continue,
            };
            if !rate.is_zero() {
                out.accumulate(k.clone(), c * rate);
            }
        }
        out
    }

    /// Derivative with respect to a named variable of an `n`-dimensional problem.
    pub fn differentiate_named(&self, name: &str, n: usize) -> Result<Self> {
        Ok(self.differentiate(Var::parse(name, n)?))
    }

    /// Floating-point evaluation at `(x, t, r, s)`; `x` is 0-based storage for `x1..xn`.
    pub fn eval(&self, x: &[f64], t: f64, r: f64, s: f64) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| {
                let mut v = to_f64(c) * k.mono.eval(x, t, r, s);
                if !(k.a.is_zero() && k.b.is_zero()) {
                    v *= libm::exp(to_f64(&k.a) * r + to_f64(&k.b) * s);
                }
                v
            })
            .sum()
    }

    /// Exact evaluation at a rational point; `None` if a nontrivial exponential is present.
    pub fn eval_exact(&self, x: &[Rational], t: &Rational, r: &Rational, s: &Rational) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            if !(k.a.is_zero() && k.b.is_zero()) {
                return None;
            }
            let mut v = c.clone();
            for (var, e) in &k.mono.0 {
                let base = match var {
                    Var::X(j) => x.get(j - 1)?,
                    Var::T => t,
                    Var::R => r,
                    Var::S => s,
                };
                v *= num_traits::pow(base.clone(), *e as usize);
            }
            acc += v;
        }
        Some(acc)
    }

    /// Precomputes floating-point coefficients for fast repeated evaluation.
    pub fn compile(&self) -> CompiledExpr {
        CompiledExpr {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| CompiledTerm {
                    coeff: to_f64(c),
                    factors: k.mono.0.clone(),
                    a: to_f64(&k.a),
                    b: to_f64(&k.b),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
struct CompiledTerm {
    coeff: f64,
    factors: Vec<(Var, u32)>,
    a: f64,
    b: f64,
}

/// Floating-point snapshot of a [`SymExpr`].
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    terms: Vec<CompiledTerm>,
}

impl CompiledExpr {
    /// Evaluates at `(x, t, r, s)`.
    pub fn eval(&self, x: &[f64], t: f64, r: f64, s: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let mut v = term.coeff;
                for &(var, e) in &term.factors {
                    let base = match var {
                        Var::X(j) => x.get(j - 1).copied().unwrap_or(f64::NAN),
                        Var::T => t,
                        Var::R => r,
                        Var::S => s,
                    };
                    v *= powi(base, e);
                }
                if term.a != 0.0 || term.b != 0.0 {
                    v *= libm::exp(term.a * r + term.b * s);
                }
                v
            })
            .sum()
    }
}

impl From<Var> for SymExpr {
    fn from(v: Var) -> Self {
        SymExpr::var(v)
    }
}

impl From<Rational> for SymExpr {
    fn from(c: Rational) -> Self {
        SymExpr::constant(c)
    }
}

impl Add<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn add(self, rhs: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.accumulate(k.clone(), c.clone());
        }
        out
    }
}

impl Sub<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn sub(self, rhs: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.accumulate(k.clone(), -c.clone());
        }
        out
    }
}

impl Mul<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn mul(self, rhs: &SymExpr) -> SymExpr {
        let mut out = SymExpr::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                let key = Key { a: &k1.a + &k2.a, b: &k1.b + &k2.b, mono: k1.mono.mul(&k2.mono) };
                out.accumulate(key, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        SymExpr { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect() }
    }
}

impl Neg for SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<SymExpr> for SymExpr {
            type Output = SymExpr;
            fn $m(self, rhs: SymExpr) -> SymExpr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&SymExpr> for SymExpr {
            type Output = SymExpr;
            fn $m(self, rhs: &SymExpr) -> SymExpr {
                (&self).$m(rhs)
            }
        }
        impl $tr<SymExpr> for &SymExpr {
            type Output = SymExpr;
            fn $m(self, rhs: SymExpr) -> SymExpr {
                self.$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl core::iter::Sum for SymExpr {
    fn sum<I: Iterator<Item = SymExpr>>(iter: I) -> Self {
        iter.fold(SymExpr::zero(), |acc, e| acc + e)
    }
}

fn fmt_linear(f: &mut fmt::Formatter<'_>, a: &Rational, b: &Rational) -> fmt::Result {
    let mut first = true;
    for (c, name) in [(a, "r"), (b, "s")] {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if c.is_negative() { " - " } else { " + " })?;
        }
        if mag.is_one() {
            f.write_str(name)?;
        } else {
            write!(f, "{mag}*{name}")?;
        }
        first = false;
    }
    Ok(())
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<alloc::string::String> =
                k.mono.0.iter().map(|(v, e)| if *e == 1 { format!("{v}") } else { format!("{v}^{e}") }).collect();
            if !(k.a.is_zero() && k.b.is_zero()) {
                factors.push(format!("exp({})", LinearForm(&k.a, &k.b)));
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

struct LinearForm<'a>(&'a Rational, &'a Rational);

impl fmt::Display for LinearForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_linear(f, self.0, self.1)
    }
}
