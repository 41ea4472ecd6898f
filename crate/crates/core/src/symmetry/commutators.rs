//! Exact verification of the commutation relations among the generators.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use super::{exp_rates, generator_field, yf_field, GeneratorName as G, UniPoly};
use crate::params::{int, rat, DgParams, Rational, Subfamily};
use crate::symexpr::{lie_bracket, VectorFieldSpec};

/// Outcome of one commutation relation over all its index instances.
#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    /// Every instance holds exactly.
    Pass,
    /// First failing instance with the computed and expected brackets.
    Fail {
        /// Instance, e.g. `"[L:1,2, P:2]"`.
        instance: String,
        /// Computed bracket.
        got: String,
        /// Expected right-hand side.
        expected: String,
    },
    /// Not applicable at this parameter point.
    Skipped(String),
}

/// One relation of the table.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorRow {
    /// Human-readable relation, e.g. `"[D,H] = -2H"`.
    pub relation: String,
    /// Number of index instances checked.
    pub instances: usize,
    /// Result.
    pub status: RowStatus,
}

/// All relations checked at one parameter point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CommutatorReport {
    /// Rows in table order, followed by the infinite-family relations and the closure check.
    pub rows: Vec<CommutatorRow>,
}

impl CommutatorReport {
    /// True when no row failed.
    pub fn all_passed(&self) -> bool {
        self.failed().next().is_none()
    }
    /// Rows that passed.
    pub fn passed(&self) -> impl Iterator<Item = &CommutatorRow> {
        self.rows.iter().filter(|r| r.status == RowStatus::Pass)
    }
    /// Rows that failed.
    pub fn failed(&self) -> impl Iterator<Item = &CommutatorRow> {
        self.rows.iter().filter(|r| matches!(r.status, RowStatus::Fail { .. }))
    }
    /// Rows that were skipped.
    pub fn skipped(&self) -> impl Iterator<Item = &CommutatorRow> {
        self.rows.iter().filter(|r| matches!(r.status, RowStatus::Skipped(_)))
    }
}

/// Polynomials used to instantiate the relations of `Y_f` (degrees 0 to 4).
pub fn sample_polynomials() -> Vec<UniPoly> {
    ["1", "z", "z^2 - 1/2", "2*z^3 + z", "z^4 - 3*z^2 + 1/3"]
        .iter()
        .map(|s| UniPoly::parse(s).expect("valid literal"))
        .collect()
}

struct Ctx<'a> {
    p: &'a DgParams,
    n: usize,
}

type Instance = (String, VectorFieldSpec, VectorFieldSpec);

impl Ctx<'_> {
    fn f(&self, g: &G) -> VectorFieldSpec {
        generator_field(g, self.p).expect("finite generator with valid indices")
    }

    /// `L_ab` for any ordered pair, using `L_ba = −L_ab` and `L_aa = 0`.
    fn l(&self, a: usize, b: usize) -> VectorFieldSpec {
        use core::cmp::Ordering::*;
        match a.cmp(&b) {
            Less => self.f(&G::L(a, b)),
            Greater => self.f(&G::L(b, a)).scale(&-Rational::one()),
            Equal => VectorFieldSpec::zero(self.n),
        }
    }

    fn delta(&self, a: usize, b: usize, v: &VectorFieldSpec) -> VectorFieldSpec {
        if a == b {
            v.clone()
        } else {
            VectorFieldSpec::zero(self.n)
        }
    }

    fn inst(&self, x: &G, y: &G, expected: VectorFieldSpec) -> Instance {
        let got = lie_bracket(&self.f(x), &self.f(y)).expect("same arity");
        (format!("[{x}, {y}]"), got, expected)
    }
}

fn run(relation: &str, needs: Option<String>, instances: impl FnOnce() -> Vec<Instance>) -> CommutatorRow {
    if let Some(reason) = needs {
        return CommutatorRow { relation: relation.into(), instances: 0, status: RowStatus::Skipped(reason) };
    }
    let list = instances();
    let count = list.len();
    let status = list
        .into_iter()
        .find(|(_, got, exp)| got != exp)
        .map(|(instance, got, exp)| RowStatus::Fail { instance, got: got.to_string(), expected: exp.to_string() })
        .unwrap_or(RowStatus::Pass);
    CommutatorRow { relation: relation.into(), instances: count, status }
}

fn need(cond: bool, why: &str) -> Option<String> {
    (!cond).then(|| why.to_string())
}

fn combine(a: Option<String>, b: Option<String>) -> Option<String> {
    match (a, b) {
        (Some(x), Some(y)) => Some(format!("{x}; {y}")),
        (x, y) => x.or(y),
    }
}

/// Checks every relation of the commutator table symbolically at `p`, plus the relations of
/// `Y_f` and `F` when those exist, plus closure: every bracket of finite basis generators not
/// listed in the table vanishes. Relations whose generators are not symmetries at `p` are
/// reported as skipped.
pub fn verify_commutator_table(p: &DgParams) -> CommutatorReport {
    let n = p.n();
    let cx = Ctx { p, n };
    let gal = Subfamily::GalSub.holds(p);
    let fin = Subfamily::FinSub.holds(p);
    let g_need = need(gal, "needs GalSub");
    let f_need = need(fin, "needs FinSub");
    let l_need = need(n >= 2, "needs n >= 2");
    let idx: Vec<usize> = (1..=n).collect();
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|j| (j + 1..=n).map(move |k| (j, k))).collect();
    let neg = |v: VectorFieldSpec| v.scale(&-Rational::one());
    let mut rows = Vec::new();

    rows.push(run("[D,H] = -2H", None, || vec![cx.inst(&G::D, &G::H, cx.f(&G::H).scale(&int(-2)))]));
    rows.push(run("[H,C] = D", g_need.clone(), || vec![cx.inst(&G::H, &G::C, cx.f(&G::D))]));
    rows.push(run("[D,C] = 2C", g_need.clone(), || vec![cx.inst(&G::D, &G::C, cx.f(&G::C).scale(&int(2)))]));
    rows.push(run("[H,B_j] = P_j", g_need.clone(), || {
        idx.iter().map(|&j| cx.inst(&G::H, &G::B(j), cx.f(&G::P(j)))).collect()
    }));
    rows.push(run("[D,P_j] = -P_j", None, || {
        idx.iter().map(|&j| cx.inst(&G::D, &G::P(j), neg(cx.f(&G::P(j))))).collect()
    }));
    rows.push(run("[D,B_j] = B_j", g_need.clone(), || {
        idx.iter().map(|&j| cx.inst(&G::D, &G::B(j), cx.f(&G::B(j)))).collect()
    }));
    rows.push(run("[C,P_j] = -B_j", g_need.clone(), || {
        idx.iter().map(|&j| cx.inst(&G::C, &G::P(j), neg(cx.f(&G::B(j))))).collect()
    }));
    rows.push(run("[P_j,B_k] = delta_jk E", g_need.clone(), || {
        let e = cx.f(&G::E);
        idx.iter()
            .flat_map(|&j| idx.iter().map(move |&k| (j, k)))
            .map(|(j, k)| cx.inst(&G::P(j), &G::B(k), cx.delta(j, k, &e)))
            .collect()
    }));
    rows.push(run("[A,H] = H", f_need.clone(), || vec![cx.inst(&G::A, &G::H, cx.f(&G::H))]));
    rows.push(run("[A,C] = -C", combine(f_need.clone(), g_need.clone()), || {
        vec![cx.inst(&G::A, &G::C, neg(cx.f(&G::C)))]
    }));
    rows.push(run("[A,E] = -E", f_need.clone(), || vec![cx.inst(&G::A, &G::E, neg(cx.f(&G::E)))]));
    rows.push(run("[A,R] = 4 nu2 E", f_need.clone(), || {
        vec![cx.inst(&G::A, &G::R, cx.f(&G::E).scale(&(int(4) * p.nu2())))]
    }));
    rows.push(run("[A,B_j] = -B_j", combine(f_need.clone(), g_need.clone()), || {
        idx.iter().map(|&j| cx.inst(&G::A, &G::B(j), neg(cx.f(&G::B(j))))).collect()
    }));
    let lp = |make: fn(usize) -> G| {
        let mut out = Vec::new();
        for &(j, k) in &pairs {
            for &l in &idx {
                let a = cx.delta(k, l, &cx.f(&make(j)));
                let b = cx.delta(j, l, &cx.f(&make(k)));
                out.push(cx.inst(&G::L(j, k), &make(l), a.sub(&b).expect("arity")));
            }
        }
        out
    };
    rows.push(run("[L_jk,P_l] = delta_kl P_j - delta_jl P_k", l_need.clone(), || lp(G::P)));
    rows.push(run("[L_jk,B_l] = delta_kl B_j - delta_jl B_k", combine(l_need.clone(), g_need.clone()), || lp(G::B)));
    rows.push(run("[L_jk,L_lm] = delta_kl L_jm + delta_jm L_kl - delta_jl L_km - delta_km L_jl", l_need, || {
        let mut out = Vec::new();
        for &(j, k) in &pairs {
            for &(l, m) in &pairs {
                let e = cx
                    .delta(k, l, &cx.l(j, m))
                    .add(&cx.delta(j, m, &cx.l(k, l)))
                    .and_then(|v| v.sub(&cx.delta(j, l, &cx.l(k, m))))
                    .and_then(|v| v.sub(&cx.delta(k, m, &cx.l(j, l))))
                    .expect("arity");
                out.push(cx.inst(&G::L(j, k), &G::L(l, m), e));
            }
        }
        out
    }));

    rows.extend(infinite_rows(&cx));
    rows.push(closure_row(&cx));
    CommutatorReport { rows }
}

fn infinite_rows(cx: &Ctx<'_>) -> Vec<CommutatorRow> {
    let p = cx.p;
    let inf = Subfamily::InfSub.holds(p);
    let y_need = need(inf, "needs InfSub");
    let polys = sample_polynomials();
    let y = |f: &UniPoly| yf_field(p, f);
    let br = |a: &VectorFieldSpec, b: &VectorFieldSpec| lie_bracket(a, b).expect("arity");
    let label = |a: &UniPoly, b: &str| format!("[Yf:{a}, {b}]");
    let iota2 = p.mu1() - int(2) * p.nu2();
    let mut rows = Vec::new();
    rows.push(run("[Y_f1,Y_f2] = (mu1 - 2 nu2) Y_[f1,f2]", y_need.clone(), || {
        let mut out = Vec::new();
        for (i, f1) in polys.iter().enumerate() {
            for f2 in &polys[i + 1..] {
                out.push((label(f1, &format!("Yf:{f2}")), br(&y(f1), &y(f2)), y(&f1.bracket(f2)).scale(&iota2)));
            }
        }
        out
    }));
    rows.push(run("[Y_f,R] = -mu1 Y_f'", y_need.clone(), || {
        let r = cx.f(&G::R);
        polys.iter().map(|f| (label(f, "R"), br(&y(f), &r), y(&f.derivative()).scale(&-p.mu1().clone()))).collect()
    }));
    rows.push(run("[Y_f,E] = 1/2 Y_f'", y_need.clone(), || {
        let e = cx.f(&G::E);
        polys.iter().map(|f| (label(f, "E"), br(&y(f), &e), y(&f.derivative()).scale(&rat(1, 2)))).collect()
    }));
    rows.push(run("[Y_f,A] = -Y_(z f')", combine(y_need, need(Subfamily::FinSub.holds(p), "needs FinSub")), || {
        let a = cx.f(&G::A);
        polys
            .iter()
            .map(|f| (label(f, "A"), br(&y(f), &a), y(&f.derivative().times_z()).scale(&-Rational::one())))
            .collect()
    }));
    let x_need = need(Subfamily::ExpSub.holds(p), "needs ExpSub");
    let rates = exp_rates(p).ok();
    rows.push(run("[F,E] = lambda/(2 nu1) F", x_need.clone(), || {
        let (lambda, _, _) = rates.clone().expect("ExpSub has valid rates");
        let k = lambda / (int(2) * p.nu1());
        vec![cx.inst(&G::F, &G::E, cx.f(&G::F).scale(&k))]
    }));
    rows.push(run("[F,R] = -eta F", x_need, || {
        let (_, eta, _) = rates.clone().expect("ExpSub has valid rates");
        vec![cx.inst(&G::F, &G::R, cx.f(&G::F).scale(&-eta))]
    }));
    rows
}

/// Pairs covered by some table row, as unordered kind/index keys.
fn listed(x: &G, y: &G) -> bool {
    use G::*;
    let key = |g: &G| -> u8 {
        match g {
            L(..) => 0,
            H => 1,
            D => 2,
            C => 3,
            P(_) => 4,
            B(_) => 5,
            E => 6,
            R => 7,
            A => 8,
            _ => 9,
        }
    };
    let (a, b) = (key(x).min(key(y)), key(x).max(key(y)));
    matches!(
        (a, b),
        (1, 2)
            | (1, 3)
            | (2, 3)
            | (1, 5)
            | (2, 4)
            | (2, 5)
            | (3, 4)
            | (4, 5)
            | (1, 8)
            | (3, 8)
            | (6, 8)
            | (7, 8)
            | (5, 8)
            | (0, 4)
            | (0, 5)
            | (0, 0)
    )
}

fn closure_row(cx: &Ctx<'_>) -> CommutatorRow {
    let basis: Vec<G> = super::finite_basis(cx.p).into_iter().filter(|g| *g != G::F).collect();
    run("all other brackets of the finite basis vanish", None, || {
        let mut out = Vec::new();
        for (i, x) in basis.iter().enumerate() {
            for y in &basis[i + 1..] {
                if !listed(x, y) {
                    out.push(cx.inst(x, y, VectorFieldSpec::zero(cx.n)));
                }
            }
        }
        out
    })
}
