//! Numerical check that a flow maps solutions to solutions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::flows::{flow_closed_onto, preimage_box, time_inverse};
use super::GeneratorName;
use crate::error::{Error, Result};
use crate::params::DgParams;
use crate::pde::{residual, Boundary, Grid, LogPolarField, ResidualNorms, Solution, Trajectory};

/// Where the solution being transformed comes from.
#[derive(Clone, Copy)]
pub enum FlowSource<'a> {
    /// A closed form, sampled wherever the flow needs it.
    Closed(&'a dyn Solution),
    /// Precomputed slices; the target grid shrinks until every preimage lies inside them.
    Sampled(&'a Trajectory),
}

impl core::fmt::Debug for FlowSource<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FlowSource::Closed(_) => f.write_str("Closed(..)"),
            FlowSource::Sampled(t) => write!(f, "Sampled({} slices)", t.len()),
        }
    }
}

/// Settings of [`verify_symmetry_flow`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Number of time slices (at least 3).
    pub slices: usize,
    /// First target time of closed-form runs.
    pub t_start: f64,
    /// Largest acceptable residual of the untransformed source.
    pub baseline_tol: f64,
    /// Repeat closed-form runs with doubled resolution to estimate the order.
    pub refine: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { slices: 5, t_start: 0.0, baseline_tol: 0.1, refine: true }
    }
}

/// Residual norms before and after the flow.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowReport {
    /// Generator label.
    pub generator: String,
    /// Flow parameter.
    pub epsilon: f64,
    /// Residual of the source.
    pub baseline: ResidualNorms,
    /// Residual of the transformed solution.
    pub transformed: ResidualNorms,
    /// Residual of the transformed solution at doubled resolution.
    pub refined: Option<ResidualNorms>,
    /// Ratio of the `L∞` residuals at the two resolutions, about 4 for second order.
    pub ratio: Option<f64>,
}

impl FlowReport {
    /// Whether the transformed `L∞` residual stays within `factor` times the baseline plus `abs`.
    pub fn within(&self, factor: f64, abs: f64) -> bool {
        self.transformed.linf() <= factor * self.baseline.linf() + abs
    }
}

/// Applies the flow of `name` to a solution and measures the DG residual before and after.
pub fn verify_symmetry_flow(
    p: &DgParams,
    name: &GeneratorName,
    eps: f64,
    source: FlowSource<'_>,
    grid: &Grid,
    opts: &VerifyOptions,
) -> Result<FlowReport> {
    name.check_admissible(p)?;
    if opts.slices < 3 {
        return Err(Error::TooFewSlices { need: 3, got: opts.slices });
    }
    let (baseline, transformed, refined) = match source {
        FlowSource::Closed(sol) => {
            let (b, t) = closed_run(p, name, eps, sol, grid, opts)?;
            check_baseline(b.linf(), opts)?;
            let refined = if opts.refine {
                let fine = grid.with_points(2 * grid.points(0))?.with_dt(0.5 * grid.dt())?;
                Some(closed_run(p, name, eps, sol, &fine, opts)?.1)
            } else {
                None
            };
            (b, t, refined)
        }
        FlowSource::Sampled(traj) => {
            let b = residual(p, traj)?;
            check_baseline(b.linf(), opts)?;
            (b, sampled_run(p, name, eps, traj, grid)?, None)
        }
    };
    Ok(FlowReport {
        generator: name.label(),
        epsilon: eps,
        baseline,
        transformed,
        refined,
        ratio: refined.map(|r| transformed.linf() / r.linf()),
    })
}

fn check_baseline(b: f64, opts: &VerifyOptions) -> Result<()> {
    if b.is_finite() && b <= opts.baseline_tol {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "source residual {b:e} exceeds {:e}; it is not a solution at this resolution",
            opts.baseline_tol
        )))
    }
}

fn closed_run(
    p: &DgParams,
    name: &GeneratorName,
    eps: f64,
    sol: &dyn Solution,
    grid: &Grid,
    opts: &VerifyOptions,
) -> Result<(ResidualNorms, ResidualNorms)> {
    let base = Trajectory::sample(grid, sol, opts.t_start, opts.slices)?;
    let baseline = residual(p, &base)?;
    let mut out = Vec::with_capacity(opts.slices);
    for k in 0..opts.slices {
        let t = opts.t_start + k as f64 * grid.dt();
        let t0 = time_inverse(name, eps, t)?;
        let src_grid = match grid.boundary() {
            Boundary::Dirichlet => {
                let (lo, hi) = preimage_box(name, eps, p, grid, t0)?;
                grid.aligned_cover(&lo[..grid.dim()], &hi[..grid.dim()], 3)?
            }
            Boundary::Periodic => grid.clone(),
        };
        let src = LogPolarField::from_solution(&src_grid, t0, sol)?;
        out.push(flow_closed_onto(name, eps, &src, p, grid)?);
    }
    let transformed = residual(p, &Trajectory::new(out)?)?;
    Ok((baseline, transformed))
}

fn inside(lo: &[f64; 2], hi: &[f64; 2], g: &Grid) -> bool {
    (0..g.dim()).all(|a| lo[a] >= g.lo(a) - 1e-12 && hi[a] <= g.hi(a) + 1e-12)
}

fn sampled_run(p: &DgParams, name: &GeneratorName, eps: f64, traj: &Trajectory, grid: &Grid) -> Result<ResidualNorms> {
    let src = traj.slices[0].grid();
    let mut target = grid.clone();
    if src.boundary() == Boundary::Dirichlet {
        loop {
            let mut fits = true;
            for slice in &traj.slices {
                let (lo, hi) = preimage_box(name, eps, p, &target, slice.t())?;
                fits &= inside(&lo, &hi, src);
            }
            if fits {
                break;
            }
            let d = target.dim();
            let lo: Vec<f64> = (0..d).map(|a| target.lo(a) + target.spacing(a)).collect();
            let hi: Vec<f64> = (0..d).map(|a| target.hi(a) - target.spacing(a)).collect();
            let pts: Vec<usize> = (0..d).map(|a| target.points(a).saturating_sub(2)).collect();
            if pts.iter().any(|&n| n < crate::pde::MIN_POINTS) {
                return Err(Error::OutOfSupport(format!(
                    "the flow of {name} moves the data too far for the sampled trajectory"
                )));
            }
            target = Grid::new(&lo, &hi, &pts, target.boundary(), target.dt())?;
        }
    }
    let out = traj.slices.iter().map(|s| flow_closed_onto(name, eps, s, p, &target)).collect::<Result<Vec<_>>>()?;
    residual(p, &Trajectory::new(out)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SymmetryClass;
    use crate::pde::{LogCoshProfile, SelfSimilar};

    #[test]
    fn boost_converges_at_second_order() {
        let p = SymmetryClass::Sym1.representative(1);
        let sol = LogCoshProfile::new(&p, alloc::vec![0.8], 0.1).unwrap();
        let g = Grid::line(-4.0, 4.0, 64, Boundary::Dirichlet, 1e-3).unwrap();
        let rep = verify_symmetry_flow(
            &p,
            &GeneratorName::B(1),
            0.3,
            FlowSource::Closed(&sol),
            &g,
            &VerifyOptions::default(),
        )
        .unwrap();
        let ratio = rep.ratio.unwrap();
        assert!(ratio > 3.0 && ratio < 5.0, "{rep:?}");
    }

    #[test]
    fn scaling_flow_at_sym3() {
        let p = SymmetryClass::Sym3.representative(1);
        let sol = SelfSimilar::new(&p, 1.0, 0.4, 1.0).unwrap();
        let g = Grid::line(-4.0, 4.0, 64, Boundary::Dirichlet, 1e-3).unwrap();
        let opts = VerifyOptions { t_start: 0.2, ..VerifyOptions::default() };
        for (name, eps) in [(GeneratorName::A, 0.2), (GeneratorName::C, 0.3), (GeneratorName::D, 0.1)] {
            let rep = verify_symmetry_flow(&p, &name, eps, FlowSource::Closed(&sol), &g, &opts).unwrap();
            let ratio = rep.ratio.unwrap();
            assert!(ratio > 3.0 && ratio < 5.0, "{name}: {rep:?}");
        }
    }

    #[test]
    fn translation_keeps_residual_small() {
        let p = SymmetryClass::Sym0.representative(1);
        let sol = LogCoshProfile::new(&p, alloc::vec![0.8], 0.1).unwrap();
        let g = Grid::line(-4.0, 4.0, 64, Boundary::Dirichlet, 1e-3).unwrap();
        let opts = VerifyOptions { refine: false, ..VerifyOptions::default() };
        let rep = verify_symmetry_flow(&p, &GeneratorName::P(1), 0.5, FlowSource::Closed(&sol), &g, &opts).unwrap();
        assert!(rep.within(2.0, 1e-12), "{rep:?}");
        let tr = Trajectory::sample(&g, &sol, 0.0, 5).unwrap();
        let rep = verify_symmetry_flow(&p, &GeneratorName::P(1), 0.5, FlowSource::Sampled(&tr), &g, &opts).unwrap();
        assert!(rep.within(2.0, 1e-12), "{rep:?}");
    }

    #[test]
    fn inadmissible_and_non_solutions_rejected() {
        let p = SymmetryClass::Sym0.representative(1);
        let sol = LogCoshProfile::new(&p, alloc::vec![0.8], 0.1).unwrap();
        let g = Grid::line(-4.0, 4.0, 32, Boundary::Dirichlet, 1e-3).unwrap();
        let o = VerifyOptions::default();
        assert!(matches!(
            verify_symmetry_flow(&p, &GeneratorName::B(1), 0.1, FlowSource::Closed(&sol), &g, &o),
            Err(Error::Inadmissible { .. })
        ));
        let q = SymmetryClass::Sym1.representative(1);
        assert!(matches!(
            verify_symmetry_flow(&q, &GeneratorName::H, 0.1, FlowSource::Closed(&sol), &g, &o),
            Err(Error::InvalidArgument(_))
        ));
    }
}
