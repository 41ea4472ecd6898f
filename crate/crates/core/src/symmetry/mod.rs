//! Symmetry generators of the Doebner–Goldin family, their commutation relations, the
//! determining equations, and one-parameter flows acting on log-polar fields.
//!
//! Generators are built per parameter point because their coefficients depend on `(ν, μ)`.
//! [`basis_generator`] refuses generators whose subfamily condition fails; [`generator_field`]
//! builds the formal vector field regardless, which is what the determining-equation tests need.

mod commutators;
mod determining;
mod flows;
mod poly;
mod verify;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linearize::{default_heat_pair, default_se_solution, HeatPair};
use crate::params::{classify, int, DgParams, Rational, Subfamily, SymmetryClass};
use crate::pde::SeSolution;
use crate::symexpr::{SymExpr, Var, VectorFieldSpec};

pub use commutators::{sample_polynomials, verify_commutator_table, CommutatorReport, CommutatorRow, RowStatus};
pub use determining::{determining_residuals, DeterminingEquation, DeterminingResidual};
pub use flows::{
    flow_closed, flow_closed_onto, flow_numeric, flow_numeric_field, flow_numeric_onto, flow_point, flow_yf_with,
    time_map, CompiledField, FlowPoint, VectorField,
};
pub use poly::UniPoly;
pub use verify::{verify_symmetry_flow, FlowReport, FlowSource, VerifyOptions};

/// Name of a symmetry generator together with its indices or payload.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorName {
    /// Rotation `x_j ∂_{x_k} − x_k ∂_{x_j}`, `j < k`.
    L(usize, usize),
    /// Time translation.
    H,
    /// Dilation.
    D,
    /// Projective transformation.
    C,
    /// Space translation along `x_j`.
    P(usize),
    /// Galilei boost along `x_j`.
    B(usize),
    /// Constant phase shift.
    E,
    /// Amplitude scaling.
    R,
    /// Time reflection-type scaling coupled to the phase.
    A,
    /// Exponential generator of the `ExpSub` family.
    F,
    /// `f(μ₁r + ν₁s)(∂_r − (2ν₂/ν₁)∂_s)` for a polynomial `f`.
    Yf(UniPoly),
    /// Heat-driven generator built from a forward/backward pair.
    Zheat(HeatPair),
    /// Schroedinger-driven generator.
    Zse(SeSolution),
}

/// Subfamily condition under which a generator is a symmetry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    /// Holds for every parameter point.
    Always,
    /// A subfamily predicate.
    Subfamily(Subfamily),
    /// A specific class (the `Z` generators).
    Class(SymmetryClass),
}

impl GeneratorName {
    /// Parses a CLI-style name such as `"L:1,2"`, `"P:1"`, `"Yf:z^2+1"`, `"Zheat"`. The `Z`
    /// generators receive default payloads derived from `p`.
    pub fn parse(text: &str, p: &DgParams) -> Result<Self> {
        let text = text.trim();
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (text, None),
        };
        let index = |a: Option<&str>| -> Result<usize> {
            a.ok_or_else(|| Error::InvalidArgument(format!("generator {head} needs an index")))?
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad index in {text:?}")))
        };
        let no_arg = |g: GeneratorName| -> Result<GeneratorName> {
            match arg {
                None => Ok(g),
                Some(_) => Err(Error::InvalidArgument(format!("generator {head} takes no argument"))),
            }
        };
        let g = match head {
            "L" => {
                let a = arg.ok_or_else(|| Error::InvalidArgument("L needs indices j,k".into()))?;
                let (j, k) =
                    a.split_once(',').ok_or_else(|| Error::InvalidArgument(format!("bad indices in {text:?}")))?;
                let j = j.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad index in {text:?}")))?;
                let k = k.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad index in {text:?}")))?;
                GeneratorName::L(j, k)
            }
            "P" => GeneratorName::P(index(arg)?),
            "B" => GeneratorName::B(index(arg)?),
            "H" => no_arg(GeneratorName::H)?,
            "D" => no_arg(GeneratorName::D)?,
            "C" => no_arg(GeneratorName::C)?,
            "E" => no_arg(GeneratorName::E)?,
            "R" => no_arg(GeneratorName::R)?,
            "A" => no_arg(GeneratorName::A)?,
            "F" => no_arg(GeneratorName::F)?,
            "Yf" => GeneratorName::Yf(UniPoly::parse(
                arg.ok_or_else(|| Error::InvalidArgument("Yf needs a polynomial in z".into()))?,
            )?),
            "Zheat" => no_arg(GeneratorName::Zheat(default_heat_pair(p)?))?,
            "Zse" => no_arg(GeneratorName::Zse(default_se_solution(p)?))?,
            _ => return Err(Error::InvalidArgument(format!("unknown generator {text:?}"))),
        };
        g.check_indices(p.n())?;
        Ok(g)
    }

    /// Short label (`"L:1,2"`, `"Yf:z^2 + 1"`, ...); parses back for all but the payload kinds.
    pub fn label(&self) -> String {
        match self {
            GeneratorName::L(j, k) => format!("L:{j},{k}"),
            GeneratorName::P(j) => format!("P:{j}"),
            GeneratorName::B(j) => format!("B:{j}"),
            GeneratorName::Yf(f) => format!("Yf:{f}"),
            other => other.kind().to_string(),
        }
    }

    /// Family name without indices.
    pub fn kind(&self) -> &'static str {
        match self {
            GeneratorName::L(..) => "L",
            GeneratorName::H => "H",
            GeneratorName::D => "D",
            GeneratorName::C => "C",
            GeneratorName::P(_) => "P",
            GeneratorName::B(_) => "B",
            GeneratorName::E => "E",
            GeneratorName::R => "R",
            GeneratorName::A => "A",
            GeneratorName::F => "F",
            GeneratorName::Yf(_) => "Yf",
            GeneratorName::Zheat(_) => "Zheat",
            GeneratorName::Zse(_) => "Zse",
        }
    }

    /// Checks `1 ≤ j < k ≤ n` for `L` and `1 ≤ j ≤ n` for `P`, `B`.
    pub fn check_indices(&self, n: usize) -> Result<()> {
        let ok = match *self {
            GeneratorName::L(j, k) => 1 <= j && j < k && k <= n,
            GeneratorName::P(j) | GeneratorName::B(j) => (1..=n).contains(&j),
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("index out of range for n = {n} in {}", self.label())))
        }
    }

    /// The subfamily condition making this a symmetry.
    pub fn requirement(&self) -> Requirement {
        match self {
            GeneratorName::L(..)
            | GeneratorName::H
            | GeneratorName::D
            | GeneratorName::P(_)
            | GeneratorName::E
            | GeneratorName::R => Requirement::Always,
            GeneratorName::C | GeneratorName::B(_) => Requirement::Subfamily(Subfamily::GalSub),
            GeneratorName::A => Requirement::Subfamily(Subfamily::FinSub),
            GeneratorName::F => Requirement::Subfamily(Subfamily::ExpSub),
            GeneratorName::Yf(_) => Requirement::Subfamily(Subfamily::InfSub),
            GeneratorName::Zheat(_) => Requirement::Class(SymmetryClass::Sym1b),
            GeneratorName::Zse(_) => Requirement::Class(SymmetryClass::Sym1c),
        }
    }

    /// Whether the generator is a symmetry at `p`.
    pub fn is_admissible(&self, p: &DgParams) -> bool {
        match self.requirement() {
            Requirement::Always => true,
            Requirement::Subfamily(s) => s.holds(p),
            Requirement::Class(c) => classify(p) == c,
        }
    }

    /// Errors with [`Error::Inadmissible`] unless the generator is a symmetry at `p`.
    pub fn check_admissible(&self, p: &DgParams) -> Result<()> {
        self.check_indices(p.n())?;
        if self.is_admissible(p) {
            Ok(())
        } else {
            Err(Error::Inadmissible { generator: self.label(), class: classify(p) })
        }
    }

    /// True for generators with `ξ = τ = 0`.
    pub fn is_vertical(&self) -> bool {
        matches!(
            self,
            GeneratorName::E
                | GeneratorName::R
                | GeneratorName::F
                | GeneratorName::Yf(_)
                | GeneratorName::Zheat(_)
                | GeneratorName::Zse(_)
        )
    }
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The finite-dimensional generators admissible at `p`, in a fixed order.
pub fn finite_basis(p: &DgParams) -> Vec<GeneratorName> {
    let n = p.n();
    let mut out = Vec::new();
    for j in 1..=n {
        for k in j + 1..=n {
            out.push(GeneratorName::L(j, k));
        }
    }
    out.extend([GeneratorName::H, GeneratorName::D, GeneratorName::C]);
    out.extend((1..=n).map(GeneratorName::P));
    out.extend((1..=n).map(GeneratorName::B));
    out.extend([GeneratorName::E, GeneratorName::R, GeneratorName::A, GeneratorName::F]);
    out.retain(|g| g.is_admissible(p));
    out
}

fn c(q: Rational) -> SymExpr {
    SymExpr::constant(q)
}

fn v(var: Var) -> SymExpr {
    SymExpr::var(var)
}

/// Rates `(λ, η, κ)` of `F = e^{ηr + λs}(∂_r − κ∂_s)`.
pub fn exp_rates(p: &DgParams) -> Result<(Rational, Rational, Rational)> {
    let two = int(2);
    let (nu1, nu2, mu1, mu3) = (p.nu1(), p.nu2(), p.mu1(), p.mu3());
    let d1 = mu1 - &two * nu2;
    let d2 = nu1 + mu3;
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::InvalidParams("F needs mu1 != 2 nu2 and nu1 + mu3 != 0".into()));
    }
    let lambda = &two * &d2 / &d1;
    let eta = mu1 / nu1 * &lambda - (mu3 + &two * nu1) / nu1;
    let kappa = (mu3 * (mu1 + &two * nu2) + &two * nu1 * mu1) / (&two * nu1 * &d2);
    Ok((lambda, eta, kappa))
}

/// Vector field of `Y_f` at `p` (no admissibility check).
pub fn yf_field(p: &DgParams, f: &UniPoly) -> VectorFieldSpec {
    let n = p.n();
    let z = &v(Var::R).scale(p.mu1()) + &v(Var::S).scale(p.nu1());
    let fz = f.compose(&z);
    let gamma2 = int(2) * p.nu2() / p.nu1();
    let sigma = fz.scale(&-gamma2);
    VectorFieldSpec::new(vec![SymExpr::zero(); n], SymExpr::zero(), fz, sigma).expect("consistent arity")
}

/// The formal vector field of `name` at `p`, without checking admissibility.
///
/// The `Z` generators depend on numerically given heat or Schroedinger solutions and have no
/// exact representation; they yield [`Error::NotSymbolic`].
pub fn generator_field(name: &GeneratorName, p: &DgParams) -> Result<VectorFieldSpec> {
    let n = p.n();
    name.check_indices(n)?;
    let nr = int(n as i64);
    let two = int(2);
    let inv2nu1 = Rational::one() / (&two * p.nu1());
    let zero = SymExpr::zero;
    let zeros = || vec![SymExpr::zero(); n];
    let build = |xi: Vec<SymExpr>, tau, phi, sigma| VectorFieldSpec::new(xi, tau, phi, sigma);
    let x2: SymExpr = (1..=n).map(|j| v(Var::X(j)).pow(2)).sum();
    let shift = c(&nr * p.mu1() * &inv2nu1);
    match name {
        GeneratorName::L(j, k) => {
            let mut xi = zeros();
            xi[k - 1] = v(Var::X(*j));
            xi[j - 1] = -v(Var::X(*k));
            build(xi, zero(), zero(), zero())
        }
        GeneratorName::H => build(zeros(), SymExpr::one(), zero(), zero()),
        GeneratorName::D => {
            build((1..=n).map(|j| v(Var::X(j))).collect(), v(Var::T).scale(&two), c(-&nr / &two), shift)
        }
        GeneratorName::C => {
            let t = v(Var::T);
            build(
                (1..=n).map(|j| &v(Var::X(j)) * &t).collect(),
                t.pow(2),
                t.scale(&(-&nr / &two)),
                &x2.scale(&-(&inv2nu1 / &two)) + &(&shift * &t),
            )
        }
        GeneratorName::P(j) => {
            let mut xi = zeros();
            xi[j - 1] = SymExpr::one();
            build(xi, zero(), zero(), zero())
        }
        GeneratorName::B(j) => {
            let mut xi = zeros();
            xi[j - 1] = v(Var::T);
            build(xi, zero(), zero(), v(Var::X(*j)).scale(&-inv2nu1))
        }
        GeneratorName::E => build(zeros(), zero(), zero(), c(-inv2nu1)),
        GeneratorName::R => build(zeros(), zero(), SymExpr::one(), zero()),
        GeneratorName::A => {
            build(zeros(), -v(Var::T), zero(), &v(Var::R).scale(&(&two * p.nu2() / p.nu1())) + &v(Var::S))
        }
        GeneratorName::F => {
            let (lambda, eta, kappa) = exp_rates(p)?;
            let e = SymExpr::exp_linear(eta, lambda);
            let sigma = e.scale(&-kappa);
            build(zeros(), zero(), e, sigma)
        }
        GeneratorName::Yf(f) => Ok(yf_field(p, f)),
        GeneratorName::Zheat(_) | GeneratorName::Zse(_) => {
            Err(Error::NotSymbolic(format!("{} is built from a numerical solution", name.kind())))
        }
    }
}

/// The vector field of an admissible generator at `p`.
pub fn basis_generator(name: &GeneratorName, p: &DgParams) -> Result<VectorFieldSpec> {
    name.check_admissible(p)?;
    generator_field(name, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic(n: usize) -> DgParams {
        SymmetryClass::Sym0.representative(n)
    }

    #[test]
    fn h_and_a_coefficients() {
        let p = generic(2);
        let h = basis_generator(&GeneratorName::H, &p).unwrap();
        assert_eq!(h.tau(), &SymExpr::one());
        assert!(h.xis().iter().all(SymExpr::is_zero) && h.phi().is_zero() && h.sigma().is_zero());
        let a = generator_field(&GeneratorName::A, &p).unwrap();
        assert_eq!(a.tau(), &-v(Var::T));
        assert_eq!(a.to_string(), "(-t) d/dt + (2/3*r + s) d/ds");
    }

    #[test]
    fn f_rates_at_example_point() {
        let p = DgParams::builder(1, int(1)).mu(1, int(1)).build().unwrap();
        let (l, e, k) = exp_rates(&p).unwrap();
        assert_eq!((l, e, k), (int(2), int(0), int(1)));
        assert!(exp_rates(&DgParams::builder(1, int(1)).build().unwrap()).is_err());
    }

    #[test]
    fn admissibility_gate() {
        let p = generic(2);
        assert!(matches!(
            basis_generator(&GeneratorName::C, &p),
            Err(Error::Inadmissible { class: SymmetryClass::Sym0, .. })
        ));
        assert!(basis_generator(&GeneratorName::P(2), &p).is_ok());
        assert!(basis_generator(&GeneratorName::P(3), &p).is_err());
        let gal = SymmetryClass::Sym1.representative(2);
        assert!(basis_generator(&GeneratorName::B(1), &gal).is_ok());
        assert!(basis_generator(&GeneratorName::A, &gal).is_err());
        let zs = basis_generator(
            &GeneratorName::Zse(default_se_solution(&SymmetryClass::Sym1c.representative(1)).unwrap()),
            &SymmetryClass::Sym1c.representative(1),
        );
        assert!(matches!(zs, Err(Error::NotSymbolic(_))));
    }

    #[test]
    fn parse_names() {
        let p = generic(2);
        assert_eq!(GeneratorName::parse("L:1,2", &p).unwrap(), GeneratorName::L(1, 2));
        assert_eq!(GeneratorName::parse("B:2", &p).unwrap(), GeneratorName::B(2));
        assert!(GeneratorName::parse("L:2,1", &p).is_err());
        assert!(GeneratorName::parse("P:0", &p).is_err());
        assert!(GeneratorName::parse("Q", &p).is_err());
        assert!(GeneratorName::parse("H:1", &p).is_err());
        let y = GeneratorName::parse("Yf:z^2 - 1/3", &p).unwrap();
        assert_eq!(y.label(), "Yf:z^2 - 1/3");
        assert_eq!(GeneratorName::parse(&y.label(), &p).unwrap(), y);
        assert!(GeneratorName::parse("Zheat", &p).is_err());
        let heat = SymmetryClass::Sym1b.representative(1);
        assert!(matches!(GeneratorName::parse("Zheat", &heat).unwrap(), GeneratorName::Zheat(_)));
    }

    #[test]
    fn finite_basis_sizes() {
        // Sym3 in n = 2: one rotation, H, D, C, two P, two B, E, R, A.
        assert_eq!(finite_basis(&SymmetryClass::Sym3.representative(2)).len(), 11);
        assert_eq!(finite_basis(&generic(3)).len(), 3 + 2 + 3 + 2);
        let fz = finite_basis(&SymmetryClass::Sym4.representative(1));
        assert!(fz.contains(&GeneratorName::F));
    }
}
