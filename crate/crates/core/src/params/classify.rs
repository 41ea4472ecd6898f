//! Subfamily predicates and the maximal-symmetry classifier.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::gauge::{compute_invariants, GaugeInvariants};
use super::{int, rat, DgParams, Rational};
use crate::error::{Error, Result};

/// Maximal Lie-symmetry class of a parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryClass {
    /// No subfamily condition holds.
    Sym0,
    /// Galilei-invariant points.
    Sym1,
    /// Points admitting the extra scaling `A`.
    Sym2,
    /// Galilei-invariant points admitting `A`.
    Sym3,
    /// Points admitting the exponential generator `F`.
    Sym4,
    /// Non-commutative infinite symmetry `Y_f`.
    Sym0a,
    /// Commutative infinite symmetry `Y_f`.
    Sym2a,
    /// Linearizable to a heat-equation pair.
    Sym1b,
    /// Linearizable to the free Schroedinger equation.
    Sym1c,
}

impl SymmetryClass {
    /// All classes in a fixed order.
    pub const ALL: [SymmetryClass; 9] = [
        SymmetryClass::Sym0,
        SymmetryClass::Sym1,
        SymmetryClass::Sym2,
        SymmetryClass::Sym3,
        SymmetryClass::Sym4,
        SymmetryClass::Sym0a,
        SymmetryClass::Sym2a,
        SymmetryClass::Sym1b,
        SymmetryClass::Sym1c,
    ];

    /// Structure of the maximal symmetry algebra.
    pub fn algebra(self) -> &'static str {
        match self {
            SymmetryClass::Sym0 => "(aff(1) ⋉ e(n)) ⊕ t(2)",
            SymmetryClass::Sym1 => "sch_e(n) ⊕ t(1)",
            SymmetryClass::Sym2 => "(aff(1) ⋉ (aff(1) ⋉ e(n))) ⊕ t(1)",
            SymmetryClass::Sym3 => "(aff(1) ⋉ sch(n)) ⊕ t(1)",
            SymmetryClass::Sym4 => "(t(2) ⋉ t(1)) ⊕ (aff(1) ⋉ e(n))",
            SymmetryClass::Sym0a => "(aff(1) ⋉ e(n)) ⊕ (t(1) ⋉ a∞) ⊕ t(1)",
            SymmetryClass::Sym2a => "(aff(1) ⋉ ((aff(1) ⋉ e(n)) ⊕ a∞)) ⊕ t(1)",
            SymmetryClass::Sym1b => "(sch_e(n) ⊕ t(1)) ⋉ b∞",
            SymmetryClass::Sym1c => "(sch_e(n) ⊕ t(1)) ⋉ c∞",
        }
    }

    /// A fixed parameter point of this class in dimension `n`.
    ///
    /// # Panics
    /// Panics if `n == 0`.
    pub fn representative(self, n: usize) -> DgParams {
        let pick =
            |sub: Subfamily, free: &[Rational]| sub.point(n, free).expect("representative parameters are admissible");
        match self {
            SymmetryClass::Sym0 => DgParams::new(
                n,
                [int(1), rat(1, 3)],
                [int(0), rat(1, 5), rat(2, 7), rat(3, 11), rat(1, 13), rat(5, 17)],
            )
            .expect("nonzero nu1"),
            SymmetryClass::Sym1 => pick(Subfamily::GalSub, &[int(1), rat(1, 2), rat(1, 3), int(2), rat(1, 5), int(0)]),
            SymmetryClass::Sym2 => pick(Subfamily::FinSub, &[int(1), rat(1, 2), int(3), int(0)]),
            SymmetryClass::Sym3 => pick(Subfamily::FinSub, &[int(1), rat(1, 2), int(-1), int(0)]),
            SymmetryClass::Sym4 => pick(Subfamily::ExpSub, &[int(1), rat(1, 3), int(1), rat(1, 2), int(0)]),
            SymmetryClass::Sym0a => pick(Subfamily::InfSub, &[int(1), rat(1, 2), int(3), int(0)]),
            SymmetryClass::Sym2a => pick(Subfamily::InfaSub, &[int(1), rat(1, 2), int(0)]),
            SymmetryClass::Sym1b => pick(Subfamily::EhrSub, &[int(1), int(0), int(-1), int(0)]),
            SymmetryClass::Sym1c => pick(Subfamily::EhrSub, &[int(1), int(0), int(1), int(0)]),
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SymmetryClass::Sym0 => "Sym0",
            SymmetryClass::Sym1 => "Sym1",
            SymmetryClass::Sym2 => "Sym2",
            SymmetryClass::Sym3 => "Sym3",
            SymmetryClass::Sym4 => "Sym4",
            SymmetryClass::Sym0a => "Sym0a",
            SymmetryClass::Sym2a => "Sym2a",
            SymmetryClass::Sym1b => "Sym1b",
            SymmetryClass::Sym1c => "Sym1c",
        };
        f.write_str(s)
    }
}

impl FromStr for SymmetryClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SymmetryClass::ALL
            .into_iter()
            .find(|c| format!("{c}").eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown symmetry class `{s}`")))
    }
}

/// The special parameter subfamilies with enlarged symmetry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subfamily {
    /// `mu1 + mu4 = 0`, `mu3 + nu1 = 0`: Galilei boosts and projective maps.
    GalSub,
    /// Points admitting the scaling `A`.
    FinSub,
    /// Points admitting the infinite family `Y_f`.
    InfSub,
    /// `InfSub` with `mu1 = 2 nu2`: the `Y_f` commute.
    InfaSub,
    /// Linearizable points.
    EhrSub,
    /// Points admitting the exponential generator `F`.
    ExpSub,
}

impl Subfamily {
    /// All subfamilies.
    pub const ALL: [Subfamily; 6] = [
        Subfamily::GalSub,
        Subfamily::FinSub,
        Subfamily::InfSub,
        Subfamily::InfaSub,
        Subfamily::EhrSub,
        Subfamily::ExpSub,
    ];

    /// Whether `p` satisfies the defining conditions on the raw parameters.
    pub fn holds(self, p: &DgParams) -> bool {
        let two = int(2);
        let (nu1, nu2) = (p.nu1(), p.nu2());
        let (mu1, mu2, mu3, mu4, mu5) = (p.mu1(), p.mu2(), p.mu3(), p.mu4(), p.mu5());
        match self {
            Subfamily::GalSub => (mu1 + mu4).is_zero() && (mu3 + nu1).is_zero(),
            Subfamily::FinSub => {
                *mu1 == &two * nu2
                    && *mu2 == &two * nu2 * nu2 / nu1
                    && *mu4 == &two * mu3 * nu2 / nu1
                    && *mu5 == mu3 * nu2 * nu2 / (nu1 * nu1)
            }
            Subfamily::InfSub => {
                *mu2 == nu2 * mu1 / nu1
                    && *mu3 == -(&two * nu1)
                    && *mu4 == -(&two * nu2) - mu1
                    && *mu5 == -(nu2 * mu1 / nu1)
            }
            Subfamily::InfaSub => Subfamily::InfSub.holds(p) && *mu1 == &two * nu2,
            Subfamily::EhrSub => {
                *mu1 == &two * nu2
                    && (mu3 + nu1).is_zero()
                    && *mu4 == -(&two * nu2)
                    && *mu5 == -(mu2 / &two)
                    && *mu2 != &two * nu2 * nu2 / nu1
            }
            Subfamily::ExpSub => {
                let a = mu1 - &two * nu2;
                let b = mu3 + nu1;
                if a.is_zero() || b.is_zero() {
                    return false;
                }
                let m12 = mu1 + &two * nu2;
                let mu2_req = (mu3 * &m12 * &m12 * (mu3 + &two * nu1) + int(8) * mu1 * nu1 * nu1 * nu2)
                    / (int(8) * nu1 * &b * &b);
                *mu2 == mu2_req && *mu4 == mu3 * &m12 / (&two * nu1) && *mu5 == mu3 * mu2 / (&two * nu1)
            }
        }
    }

    /// Whether invariants `iota` satisfy the gauge-invariant form of the conditions.
    pub fn holds_invariant(self, iota: &GaugeInvariants) -> bool {
        let GaugeInvariants { iota1: i1, iota2: i2, iota3: i3, iota4: i4, iota5: i5, .. } = iota;
        match self {
            Subfamily::GalSub => i3.is_zero() && i4.is_zero(),
            Subfamily::FinSub => i1.is_zero() && i2.is_zero() && i4.is_zero() && i5.is_zero(),
            Subfamily::InfSub => i1.is_zero() && i5.is_zero() && *i3 == -Rational::one() && i4 == i2,
            Subfamily::InfaSub => Subfamily::InfSub.holds_invariant(iota) && i2.is_zero(),
            Subfamily::EhrSub => !i1.is_zero() && i2.is_zero() && i3.is_zero() && i4.is_zero() && i5.is_zero(),
            Subfamily::ExpSub => {
                if i2.is_zero() || i3.is_zero() {
                    return false;
                }
                let i1_req = i2 * i2 * (i3 * i3 - Rational::one()) / (int(8) * i3 * i3);
                *i4 == (Rational::one() - i3) * i2 / int(2) && *i1 == i1_req && *i5 == i3 * i1
            }
        }
    }

    /// Number of free rational coordinates expected by [`Subfamily::point`].
    pub fn free_dimension(self) -> usize {
        match self {
            Subfamily::GalSub => 6,
            Subfamily::FinSub | Subfamily::InfSub | Subfamily::EhrSub => 4,
            Subfamily::InfaSub => 3,
            Subfamily::ExpSub => 5,
        }
    }

    /// Builds a point of the subfamily from free coordinates.
    ///
    /// The coordinates are, always ending with `mu0`:
    /// * `GalSub`: `nu1, nu2, mu1, mu2, mu5, mu0`
    /// * `FinSub`: `nu1, nu2, mu3, mu0`
    /// * `InfSub`: `nu1, nu2, mu1, mu0`
    /// * `InfaSub`: `nu1, nu2, mu0`
    /// * `EhrSub`: `nu1, nu2, mu2, mu0` (requires `mu2 != 2 nu2² / nu1`)
    /// * `ExpSub`: `nu1, nu2, mu1, mu3, mu0` (requires `mu1 != 2 nu2` and `mu3 != -nu1`)
    pub fn point(self, n: usize, free: &[Rational]) -> Result<DgParams> {
        if free.len() != self.free_dimension() {
            return Err(Error::InvalidArgument(format!(
                "{self:?} takes {} free coordinates, got {}",
                self.free_dimension(),
                free.len()
            )));
        }
        let two = int(2);
        let nu1 = free[0].clone();
        let nu2 = free[1].clone();
        if nu1.is_zero() {
            return Err(Error::InvalidParams(String::from("nu1 must be nonzero")));
        }
        let mu0 = free[free.len() - 1].clone();
        let mu = match self {
            Subfamily::GalSub => {
                let (mu1, mu2, mu5) = (free[2].clone(), free[3].clone(), free[4].clone());
                [mu0, mu1.clone(), mu2, -nu1.clone(), -mu1, mu5]
            }
            Subfamily::FinSub => {
                let mu3 = free[2].clone();
                let mu1 = &two * &nu2;
                let mu2 = &two * &nu2 * &nu2 / &nu1;
                let mu4 = &two * &mu3 * &nu2 / &nu1;
                let mu5 = &mu3 * &nu2 * &nu2 / (&nu1 * &nu1);
                [mu0, mu1, mu2, mu3, mu4, mu5]
            }
            Subfamily::InfSub | Subfamily::InfaSub => {
                let mu1 = if self == Subfamily::InfSub { free[2].clone() } else { &two * &nu2 };
                let mu2 = &nu2 * &mu1 / &nu1;
                let mu3 = -(&two * &nu1);
                let mu4 = -(&two * &nu2) - &mu1;
                let mu5 = -(&mu2);
                [mu0, mu1, mu2, mu3, mu4, mu5]
            }
            Subfamily::EhrSub => {
                let mu2 = free[2].clone();
                if mu2 == &two * &nu2 * &nu2 / &nu1 {
                    return Err(Error::InvalidParams(String::from("EhrSub requires mu2 != 2 nu2^2 / nu1")));
                }
                let mu5 = -(&mu2 / &two);
                [mu0, &two * &nu2, mu2, -nu1.clone(), -(&two * &nu2), mu5]
            }
            Subfamily::ExpSub => {
                let (mu1, mu3) = (free[2].clone(), free[3].clone());
                let b = &mu3 + &nu1;
                if (&mu1 - &two * &nu2).is_zero() || b.is_zero() {
                    return Err(Error::InvalidParams(String::from("ExpSub requires mu1 != 2 nu2 and mu3 != -nu1")));
                }
                let m12 = &mu1 + &two * &nu2;
                let mu2 = (&mu3 * &m12 * &m12 * (&mu3 + &two * &nu1) + int(8) * &mu1 * &nu1 * &nu1 * &nu2)
                    / (int(8) * &nu1 * &b * &b);
                let mu4 = &mu3 * &m12 / (&two * &nu1);
                let mu5 = &mu3 * &mu2 / (&two * &nu1);
                [mu0, mu1, mu2, mu3, mu4, mu5]
            }
        };
        DgParams::new(n, [nu1, nu2], mu)
    }
}

impl fmt::Display for Subfamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Subfamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subfamily::ALL
            .into_iter()
            .find(|c| format!("{c}").eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown subfamily `{s}`")))
    }
}

/// Which subfamily conditions hold at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PredicateReport {
    /// Galilei subfamily.
    pub gal_sub: bool,
    /// Scaling subfamily.
    pub fin_sub: bool,
    /// Infinite (vector-field) subfamily.
    pub inf_sub: bool,
    /// Infinite commutative subfamily.
    pub infa_sub: bool,
    /// Linearizable subfamily.
    pub ehr_sub: bool,
    /// Exponential-generator subfamily.
    pub exp_sub: bool,
}

impl PredicateReport {
    fn from_fn(mut f: impl FnMut(Subfamily) -> bool) -> Self {
        Self {
            gal_sub: f(Subfamily::GalSub),
            fin_sub: f(Subfamily::FinSub),
            inf_sub: f(Subfamily::InfSub),
            infa_sub: f(Subfamily::InfaSub),
            ehr_sub: f(Subfamily::EhrSub),
            exp_sub: f(Subfamily::ExpSub),
        }
    }

    /// Whether the predicate for `s` holds.
    pub fn get(&self, s: Subfamily) -> bool {
        match s {
            Subfamily::GalSub => self.gal_sub,
            Subfamily::FinSub => self.fin_sub,
            Subfamily::InfSub => self.inf_sub,
            Subfamily::InfaSub => self.infa_sub,
            Subfamily::EhrSub => self.ehr_sub,
            Subfamily::ExpSub => self.exp_sub,
        }
    }

    /// Every subfamily whose predicate holds.
    pub fn holding(&self) -> Vec<Subfamily> {
        Subfamily::ALL.into_iter().filter(|s| self.get(*s)).collect()
    }
}

/// Evaluates every subfamily predicate on the raw parameters.
pub fn predicate_report(p: &DgParams) -> PredicateReport {
    PredicateReport::from_fn(|s| s.holds(p))
}

fn decide(report: &PredicateReport, iota1: &Rational) -> SymmetryClass {
    if report.ehr_sub {
        if iota1.is_negative() {
            SymmetryClass::Sym1b
        } else {
            SymmetryClass::Sym1c
        }
    } else if report.inf_sub {
        if report.infa_sub {
            SymmetryClass::Sym2a
        } else {
            SymmetryClass::Sym0a
        }
    } else if report.gal_sub && report.fin_sub {
        SymmetryClass::Sym3
    } else if report.gal_sub {
        SymmetryClass::Sym1
    } else if report.fin_sub {
        SymmetryClass::Sym2
    } else if report.exp_sub {
        SymmetryClass::Sym4
    } else {
        SymmetryClass::Sym0
    }
}

/// Most special symmetry class of `p`, tested in the order EhrSub, InfSub, GalSub/FinSub,
/// ExpSub on the raw parameters.
pub fn classify(p: &DgParams) -> SymmetryClass {
    let iota1 = p.nu1() * p.mu2() - p.nu2() * p.mu1();
    decide(&predicate_report(p), &iota1)
}

/// Same decision as [`classify`] but computed only from the gauge invariants.
pub fn classify_invariants(iota: &GaugeInvariants) -> SymmetryClass {
    let report = PredicateReport::from_fn(|s| s.holds_invariant(iota));
    decide(&report, &iota.iota1)
}

/// Convenience: classification through the invariant route.
pub fn classify_via_invariants(p: &DgParams) -> SymmetryClass {
    classify_invariants(&compute_invariants(p))
}

impl SymmetryClass {
    /// Whether `p` satisfies the defining condition of this class; unlike [`classify`] this
    /// does not ask for maximality, so a `Sym3` point also satisfies `Sym1` and `Sym2`.
    pub fn predicate_holds(self, p: &DgParams) -> bool {
        let ehr =
            |neg: bool| Subfamily::EhrSub.holds(p) && (p.nu1() * p.mu2() - p.nu2() * p.mu1()).is_negative() == neg;
        match self {
            SymmetryClass::Sym0 => true,
            SymmetryClass::Sym1 => Subfamily::GalSub.holds(p),
            SymmetryClass::Sym2 => Subfamily::FinSub.holds(p),
            SymmetryClass::Sym3 => Subfamily::GalSub.holds(p) && Subfamily::FinSub.holds(p),
            SymmetryClass::Sym4 => Subfamily::ExpSub.holds(p),
            SymmetryClass::Sym0a => Subfamily::InfSub.holds(p),
            SymmetryClass::Sym2a => Subfamily::InfaSub.holds(p),
            SymmetryClass::Sym1b => ehr(true),
            SymmetryClass::Sym1c => ehr(false),
        }
    }

    /// Known inclusion of class conditions: the condition of `self` implies that of `other`.
    pub fn refines(self, other: SymmetryClass) -> bool {
        use SymmetryClass::*;
        self == other
            || other == Sym0
            || matches!(
                (self, other),
                (Sym3, Sym1) | (Sym3, Sym2) | (Sym1b, Sym1) | (Sym1c, Sym1) | (Sym2a, Sym0a) | (Sym2a, Sym2)
            )
    }

    fn index(self) -> usize {
        SymmetryClass::ALL.iter().position(|c| *c == self).expect("listed")
    }
}

/// Inclusions between class conditions observed on a set of points.
///
/// `a ≤ b` holds when every observed point satisfying the condition of `a` also satisfies the
/// condition of `b`. On any fixed sample this is a preorder; it is a partial order once every
/// pair of distinct conditions has a separating point. The stratum relation records the same
/// for the points whose maximal class is `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentOrder {
    /// Number of points per maximal class, in [`SymmetryClass::ALL`] order.
    pub counts: [usize; 9],
    leq: [[bool; 9]; 9],
    stratum: [[bool; 9]; 9],
}

/// Evaluates every class condition on `points` and records the observed inclusions.
pub fn containment_order<'a>(points: impl IntoIterator<Item = &'a DgParams>) -> ContainmentOrder {
    let mut counts = [0; 9];
    let mut leq = [[true; 9]; 9];
    let mut stratum = [[true; 9]; 9];
    for p in points {
        let holds = SymmetryClass::ALL.map(|c| c.predicate_holds(p));
        let a = classify(p).index();
        counts[a] += 1;
        for i in 0..9 {
            stratum[a][i] &= holds[i];
            if holds[i] {
                for j in 0..9 {
                    leq[i][j] &= holds[j];
                }
            }
        }
    }
    for (a, row) in stratum.iter_mut().enumerate() {
        if counts[a] == 0 {
            *row = [false; 9];
            row[a] = true;
        }
    }
    ContainmentOrder { counts, leq, stratum }
}

impl ContainmentOrder {
    /// Whether the condition of `a` was only seen together with that of `b`.
    pub fn leq(&self, a: SymmetryClass, b: SymmetryClass) -> bool {
        self.leq[a.index()][b.index()]
    }

    /// Whether every point of maximal class `a` satisfies the condition of `b`.
    pub fn stratum_within(&self, a: SymmetryClass, b: SymmetryClass) -> bool {
        self.stratum[a.index()][b.index()]
    }

    /// Reflexive, antisymmetric and transitive.
    pub fn is_partial_order(&self) -> bool {
        let all = SymmetryClass::ALL;
        all.iter().all(|&a| self.leq(a, a))
            && all.iter().all(|&a| all.iter().all(|&b| a == b || !(self.leq(a, b) && self.leq(b, a))))
            && all.iter().all(|&a| {
                all.iter().all(|&b| all.iter().all(|&c| !(self.leq(a, b) && self.leq(b, c)) || self.leq(a, c)))
            })
    }

    /// Pairs where the observed order differs from [`SymmetryClass::refines`].
    pub fn mismatches(&self) -> Vec<(SymmetryClass, SymmetryClass)> {
        let mut out = Vec::new();
        for a in SymmetryClass::ALL {
            for b in SymmetryClass::ALL {
                if self.leq(a, b) != a.refines(b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Covering relations `a ⋖ b` (immediate inclusions) of the observed order.
    pub fn covers(&self) -> Vec<(SymmetryClass, SymmetryClass)> {
        let all = SymmetryClass::ALL;
        let mut out = Vec::new();
        for a in all {
            for b in all {
                if a != b
                    && self.leq(a, b)
                    && !all.iter().any(|&c| c != a && c != b && self.leq(a, c) && self.leq(c, b))
                {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representatives_reproduce_the_inclusions() {
        let pts: Vec<DgParams> =
            SymmetryClass::ALL.iter().flat_map(|c| [c.representative(1), c.representative(2)]).collect();
        let order = containment_order(&pts);
        assert!(order.counts.iter().all(|&c| c == 2));
        assert!(order.mismatches().is_empty(), "{:?}", order.mismatches());
        assert!(order.is_partial_order());
        let covers = order.covers();
        assert!(covers.contains(&(SymmetryClass::Sym3, SymmetryClass::Sym1)));
        assert!(covers.contains(&(SymmetryClass::Sym2a, SymmetryClass::Sym0a)));
        assert!(!covers.contains(&(SymmetryClass::Sym3, SymmetryClass::Sym0)));
        // Points with a non-commutative Y_f symmetry also carry F, but the commutative ones do not.
        assert!(order.stratum_within(SymmetryClass::Sym0a, SymmetryClass::Sym4));
        assert!(!order.leq(SymmetryClass::Sym0a, SymmetryClass::Sym4));
    }

    fn se_point() -> DgParams {
        DgParams::builder(1, int(-1)).mu(2, rat(-1, 2)).mu(3, int(1)).mu(5, rat(1, 4)).build().unwrap()
    }

    #[test]
    fn linear_schroedinger_point_is_sym1c() {
        assert_eq!(classify(&se_point()), SymmetryClass::Sym1c);
    }

    #[test]
    fn heat_branch_example_is_sym1b() {
        let p = DgParams::builder(1, int(1)).mu(2, int(-1)).mu(3, int(-1)).mu(5, rat(1, 2)).build().unwrap();
        assert_eq!(classify(&p), SymmetryClass::Sym1b);
    }

    #[test]
    fn pure_nu1_point_falls_in_the_scaling_class() {
        let p = DgParams::builder(3, int(1)).build().unwrap();
        let report = predicate_report(&p);
        assert_eq!(report.holding(), [Subfamily::FinSub]);
        assert_eq!(classify(&p), SymmetryClass::Sym2);
    }

    #[test]
    fn representatives_classify_to_themselves_on_both_routes() {
        for class in SymmetryClass::ALL {
            for n in 1..=3 {
                let p = class.representative(n);
                assert_eq!(classify(&p), class, "{class}");
                assert_eq!(classify_via_invariants(&p), class, "{class}");
            }
        }
    }

    #[test]
    fn subfamily_points_satisfy_both_forms() {
        for sub in Subfamily::ALL {
            let free: Vec<Rational> = (0..sub.free_dimension()).map(|k| rat(2 * k as i64 + 3, 7 - k as i64)).collect();
            let p = sub.point(2, &free).unwrap();
            assert!(sub.holds(&p), "{sub}");
            assert!(sub.holds_invariant(&compute_invariants(&p)), "{sub}");
        }
    }

    #[test]
    fn names_round_trip() {
        for c in SymmetryClass::ALL {
            assert_eq!(format!("{c}").parse::<SymmetryClass>().unwrap(), c);
        }
        for s in Subfamily::ALL {
            assert_eq!(format!("{s}").parse::<Subfamily>().unwrap(), s);
        }
        assert!("Sym9".parse::<SymmetryClass>().is_err());
    }
}
