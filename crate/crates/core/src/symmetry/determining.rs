//! Determining equations of the two-component system for a vector field whose `ξ` depends on
//! `(x, t)` only and whose `τ` depends on `t` only.
//!
//! Each equation is named after the jet coefficient of the prolonged condition it comes from,
//! e.g. [`DeterminingEquation::SxF2`] collects the terms multiplying `s_{x_j}` in the condition
//! for the second equation.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::params::{int, DgParams, Rational};
use crate::symexpr::{SymExpr, Var, VectorFieldSpec};

/// Identifies one determining equation; indices are 1-based spatial indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[allow(missing_docs)]
pub enum DeterminingEquation {
    SxF2(usize),
    SxF1(usize),
    RxF2(usize),
    RxF1(usize),
    ZerothF2,
    ZerothF1,
    /// `ξ^j_{x_k} + ξ^k_{x_j} = 0` for `j < k`.
    Rotation(usize, usize),
    SxSxF2(usize),
    LapSF2(usize),
    LapSF1(usize),
    RxSxF2(usize),
    LapRF2(usize),
    LapRF1(usize),
    RxSxF1(usize),
    RxRxF2(usize),
    RxRxF1(usize),
    SxSxF1(usize),
}

impl fmt::Display for DeterminingEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DeterminingEquation::*;
        match *self {
            SxF2(j) => write!(f, "s_x{j} in F2"),
            SxF1(j) => write!(f, "s_x{j} in F1"),
            RxF2(j) => write!(f, "r_x{j} in F2"),
            RxF1(j) => write!(f, "r_x{j} in F1"),
            ZerothF2 => f.write_str("zeroth order in F2"),
            ZerothF1 => f.write_str("zeroth order in F1"),
            Rotation(j, k) => write!(f, "rotation x{j},x{k}"),
            SxSxF2(j) => write!(f, "s_x{j}^2 in F2"),
            LapSF2(j) => write!(f, "lap s (x{j}) in F2"),
            LapSF1(j) => write!(f, "lap s (x{j}) in F1"),
            RxSxF2(j) => write!(f, "r_x{j} s_x{j} in F2"),
            LapRF2(j) => write!(f, "lap r (x{j}) in F2"),
            LapRF1(j) => write!(f, "lap r (x{j}) in F1"),
            RxSxF1(j) => write!(f, "r_x{j} s_x{j} in F1"),
            RxRxF2(j) => write!(f, "r_x{j}^2 in F2"),
            RxRxF1(j) => write!(f, "r_x{j}^2 in F1"),
            SxSxF1(j) => write!(f, "s_x{j}^2 in F1"),
        }
    }
}

/// One equation with the field's coefficients substituted.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminingResidual {
    /// Which equation.
    pub equation: DeterminingEquation,
    /// Left-hand side in normal form; zero iff the equation holds.
    pub value: SymExpr,
}

fn sum(terms: &[(Rational, &SymExpr)]) -> SymExpr {
    terms.iter().map(|(c, e)| e.scale(c)).sum()
}

/// Substitutes `x` into all determining equations at `p`.
///
/// The field is a symmetry iff every returned value is zero. Errors with
/// [`Error::NotReduced`] when `ξ` depends on `(r, s)` or `τ` depends on anything but `t`.
pub fn determining_residuals(p: &DgParams, x: &VectorFieldSpec) -> Result<Vec<DeterminingResidual>> {
    use DeterminingEquation::*;
    let n = x.n();
    if n != p.n() {
        return Err(Error::ArityMismatch { left: n, right: p.n() });
    }
    for (j, xi) in x.xis().iter().enumerate() {
        if xi.depends_on(Var::R) || xi.depends_on(Var::S) {
            return Err(Error::NotReduced(format!("xi{} depends on r or s", j + 1)));
        }
    }
    let tau = x.tau();
    if tau.depends_on(Var::R) || tau.depends_on(Var::S) || (1..=n).any(|j| tau.depends_on(Var::X(j))) {
        return Err(Error::NotReduced("tau must depend on t only".into()));
    }
    let (nu1, nu2) = (p.nu1().clone(), p.nu2().clone());
    let [_, m1, m2, m3, m4, m5] = [0, 1, 2, 3, 4, 5].map(|k| p.mu(k).clone());
    let q = int;
    let d = |e: &SymExpr, v: Var| e.differentiate(v);
    let lap = |e: &SymExpr| -> SymExpr { (1..=n).map(|j| d(&d(e, Var::X(j)), Var::X(j))).sum() };
    let (phi, sig) = (x.phi(), x.sigma());
    let (r, s, t) = (Var::R, Var::S, Var::T);
    let (ps, pr, ss, sr) = (d(phi, s), d(phi, r), d(sig, s), d(sig, r));
    let (pss, prr, prs) = (d(&ps, s), d(&pr, r), d(&pr, s));
    let (sss, srr, srs) = (d(&ss, s), d(&sr, r), d(&sr, s));
    let tt = d(tau, t);
    let m14 = &m1 + &m4;
    let m25 = &m2 + &m5;
    let mut out = Vec::new();
    let mut push = |equation, value| out.push(DeterminingResidual { equation, value });

    for j in 1..=n {
        let xj = Var::X(j);
        let xi = x.xi(j);
        let (xit, lxi) = (d(xi, t), lap(xi));
        let (px, sx) = (d(phi, xj), d(sig, xj));
        let (pxs, pxr, sxs, sxr) = (d(&px, s), d(&px, r), d(&sx, s), d(&sx, r));
        push(
            SxF2(j),
            sum(&[
                (q(-1), &xit),
                (-m1.clone(), &lxi),
                (q(2) * &m14, &px),
                (q(4) * &m2, &pxs),
                (q(2) * &m3, &sx),
                (q(2) * &m1, &sxs),
            ]),
        );
        push(SxF1(j), sum(&[(-nu1.clone(), &lxi), (q(2) * &nu1, &px), (q(4) * &nu2, &pxs), (q(2) * &nu1, &sxs)]));
        push(
            RxF2(j),
            sum(&[(-m2.clone(), &lxi), (q(4) * &m25, &px), (q(2) * &m2, &pxr), (m14.clone(), &sx), (m1.clone(), &sxr)]),
        );
        push(
            RxF1(j),
            sum(&[
                (q(1), &xit),
                (q(-2) * &nu2, &lxi),
                (q(8) * &nu2, &px),
                (q(4) * &nu2, &pxr),
                (q(2) * &nu1, &sx),
                (q(2) * &nu1, &sxr),
            ]),
        );
    }
    push(ZerothF2, sum(&[(q(1), &d(sig, t)), (m1.clone(), &lap(sig)), (q(2) * &m2, &lap(phi))]));
    push(ZerothF1, sum(&[(q(-1), &d(phi, t)), (q(2) * &nu2, &lap(phi)), (nu1.clone(), &lap(sig))]));
    for j in 1..=n {
        for k in j + 1..=n {
            push(Rotation(j, k), &d(x.xi(j), Var::X(k)) + &d(x.xi(k), Var::X(j)));
        }
    }
    for j in 1..=n {
        let dx = d(x.xi(j), Var::X(j));
        push(
            SxSxF2(j),
            sum(&[
                (q(2) * &m14, &ps),
                (q(2) * &m2, &pss),
                (m3.clone(), &ss),
                (m1.clone(), &sss),
                (m3.clone(), &tt),
                (q(-2) * &m3, &dx),
            ]),
        );
        push(LapSF2(j), sum(&[(q(2) * &m2, &ps), (nu1.clone(), &sr), (m1.clone(), &tt), (q(-2) * &m1, &dx)]));
        push(
            LapSF1(j),
            sum(&[
                (&m1 + q(2) * &nu2, &ps),
                (-nu1.clone(), &pr),
                (nu1.clone(), &ss),
                (nu1.clone(), &tt),
                (q(-2) * &nu1, &dx),
            ]),
        );
        push(
            RxSxF2(j),
            sum(&[
                (q(4) * &m25, &ps),
                (m14.clone(), &pr),
                (q(2) * &m2, &prs),
                (&m3 + &nu1, &sr),
                (m1.clone(), &srs),
                (m14.clone(), &tt),
                (q(-2) * &m14, &dx),
            ]),
        );
        push(
            LapRF2(j),
            sum(&[
                (q(2) * &m2, &pr),
                (q(-2) * &m2, &ss),
                (&m1 + q(2) * &nu2, &sr),
                (q(2) * &m2, &tt),
                (q(-4) * &m2, &dx),
            ]),
        );
        push(LapRF1(j), sum(&[(q(2) * &m2, &ps), (nu1.clone(), &sr), (q(2) * &nu2, &tt), (q(-4) * &nu2, &dx)]));
        push(
            RxSxF1(j),
            sum(&[
                (&m14 + q(4) * &nu2, &ps),
                (q(2) * &nu2, &prs),
                (nu1.clone(), &ss),
                (nu1.clone(), &srs),
                (nu1.clone(), &tt),
                (q(-2) * &nu1, &dx),
            ]),
        );
        push(
            RxRxF2(j),
            sum(&[
                (q(8) * &m25, &pr),
                (q(2) * &m2, &prr),
                (q(-4) * &m25, &ss),
                (q(2) * (&m14 + q(2) * &nu2), &sr),
                (m1.clone(), &srr),
                (q(4) * &m25, &tt),
                (q(-8) * &m25, &dx),
            ]),
        );
        push(
            RxRxF1(j),
            sum(&[
                (q(4) * &m25, &ps),
                (q(4) * &nu2, &pr),
                (q(2) * &nu2, &prr),
                (q(2) * &nu1, &sr),
                (nu1.clone(), &srr),
                (q(4) * &nu2, &tt),
                (q(-8) * &nu2, &dx),
            ]),
        );
        push(SxSxF1(j), sum(&[(&m3 + q(2) * &nu1, &ps), (q(2) * &nu2, &pss), (nu1.clone(), &sss)]));
    }
    Ok(out)
}
