//! End-to-end integration: direct coordinate integration, integration of
//! the reduced scalar equation, root tracking, and the round-trip report.

use crate::error::{Error, Result};
use crate::mpoly::MultiPoly;
use crate::reduction::{
    reduce_almost_generic, reduce_generic, sigma1_jet_polys, sigma_system,
    AlmostGenericReduction, ReducedODE, ReductionData,
};
use crate::scalar::{Complex64, Rational};
use crate::symfun::{discriminant_from_sigma, monic_coeffs, vieta_image};
use crate::systems::{classify, Kind, QuadraticTensor, SymmetricSystem};

use super::aberth::{aberth_roots, match_roots, min_separation};
use super::dopri5::Dopri5;
use super::{IntegrationReport, IntegrationStatus, ToleranceConfig, Trajectory};

const ROOT_ITERS: usize = 200;

/// A reduction handed to the integrator.
pub enum ReducedProblem<'a> {
    Generic(&'a ReductionData<Rational>),
    AlmostGeneric(&'a AlmostGenericReduction<Rational>),
}

/// Reduced problem promoted to complex coefficients and flattened for fast
/// evaluation.
struct Compiled {
    order: usize,
    n: usize,
    ode_terms: Vec<(Vec<u32>, Complex64)>,
    sigma_exprs: Vec<MultiPoly<Complex64>>,
    aux: Option<(Complex64, MultiPoly<Complex64>)>,
}

impl Compiled {
    fn from_problem(problem: &ReducedProblem<'_>) -> Compiled {
        let promote = |p: &MultiPoly<Rational>| p.map_coeffs(|c| c.to_complex());
        let flatten = |ode: &ReducedODE<Rational>| {
            ode.terms()
                .map(|(m, c)| (m.0.clone(), c.to_complex()))
                .collect::<Vec<_>>()
        };
        match problem {
            ReducedProblem::Generic(red) => Compiled {
                order: red.ode.order(),
                n: red.sigma_exprs.len(),
                ode_terms: flatten(&red.ode),
                sigma_exprs: red.sigma_exprs.iter().map(promote).collect(),
                aux: None,
            },
            ReducedProblem::AlmostGeneric(red) => Compiled {
                order: red.ode.order(),
                n: red.sigma_exprs.len() + 1,
                ode_terms: flatten(&red.ode),
                sigma_exprs: red.sigma_exprs.iter().map(promote).collect(),
                aux: Some((red.last_linear.0.to_complex(), promote(&red.last_linear.1))),
            },
        }
    }

    fn rhs(&self, y: &[Complex64], dy: &mut [Complex64]) {
        let m = self.order;
        for i in 0..m - 1 {
            dy[i] = y[i + 1];
        }
        let mut top = Complex64::new(0.0, 0.0);
        for (omega, lam) in &self.ode_terms {
            let mut t = *lam;
            for (k, &e) in omega.iter().enumerate() {
                if e > 0 {
                    t *= y[k].powu(e);
                }
            }
            top += t;
        }
        dy[m - 1] = -top;
        if let Some((c, g)) = &self.aux {
            dy[m] = c * y[0] * y[m] + g.eval_complex(&y[..m]);
        }
    }

    fn sigma_of_state(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self
            .sigma_exprs
            .iter()
            .map(|p| p.eval_complex(&y[..self.order]))
            .collect();
        if self.aux.is_some() {
            out.push(y[self.order]);
        }
        out
    }
}

fn inf_norm(y: &[Complex64]) -> f64 {
    y.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Integrate a closure, recording every accepted step; truncates at poles.
fn integrate_closure<F>(
    mut f: F,
    x0: &[Complex64],
    span: (f64, f64),
    cfg: &ToleranceConfig,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    cfg.validate()?;
    let (t0, t1) = span;
    if !(t1 > t0) {
        return Err(Error::Invalid("empty time span".into()));
    }
    let mut traj = Trajectory::new(x0.len());
    traj.push(t0, x0.to_vec());
    let mut solver = Dopri5::new(&mut f, t0, x0.to_vec(), t1, cfg);
    let mut steps = 0usize;
    while !solver.done() {
        let p = solver.propose(t1)?;
        if inf_norm(&p.y_new) > cfg.blowup_norm {
            traj.truncated = true;
            traj.truncation_time = Some(solver.t);
            break;
        }
        let (t, y) = (p.t_new, p.y_new.clone());
        solver.commit(p);
        traj.push(t, y);
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::Invalid("step budget exhausted".into()));
        }
    }
    Ok(traj)
}

/// Integrate a closure, recording exactly at the given times (the first
/// entry is the initial time).
pub fn integrate_at_times<F>(
    mut f: F,
    x0: &[Complex64],
    times: &[f64],
    cfg: &ToleranceConfig,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    cfg.validate()?;
    let mut traj = Trajectory::new(x0.len());
    if times.is_empty() {
        return Ok(traj);
    }
    traj.push(times[0], x0.to_vec());
    if times.len() == 1 {
        return Ok(traj);
    }
    let t_end = *times.last().unwrap();
    let mut solver = Dopri5::new(&mut f, times[0], x0.to_vec(), t_end, cfg);
    let mut steps = 0usize;
    'targets: for &target in &times[1..] {
        while solver.t < target {
            let scale = target.abs().max(solver.t.abs()).max(1.0);
            if target - solver.t <= 8.0 * f64::EPSILON * scale {
                // a final rounding sliver; snap onto the grid point
                solver.t = target;
                break;
            }
            let p = solver.propose(target)?;
            if inf_norm(&p.y_new) > cfg.blowup_norm {
                traj.truncated = true;
                traj.truncation_time = Some(solver.t);
                break 'targets;
            }
            solver.commit(p);
            steps += 1;
            if steps > cfg.max_steps {
                return Err(Error::Invalid("step budget exhausted".into()));
            }
        }
        traj.push(solver.t, solver.y.clone());
    }
    Ok(traj)
}

/// Direct adaptive integration of a symmetric system from a complex point.
pub fn integrate_direct(
    sys: &SymmetricSystem<Rational>,
    x0: &[Complex64],
    span: (f64, f64),
    cfg: &ToleranceConfig,
) -> Result<Trajectory> {
    if x0.len() != sys.n() {
        return Err(Error::DimensionMismatch {
            expected: sys.n(),
            got: x0.len(),
        });
    }
    integrate_closure(direct_rhs(sys), x0, span, cfg)
}

/// Direct adaptive integration of a general quadratic tensor system.
pub fn integrate_direct_tensor(
    tensor: &QuadraticTensor<Rational>,
    x0: &[Complex64],
    span: (f64, f64),
    cfg: &ToleranceConfig,
) -> Result<Trajectory> {
    if x0.len() != tensor.n() {
        return Err(Error::DimensionMismatch {
            expected: tensor.n(),
            got: x0.len(),
        });
    }
    let t = tensor.to_numeric();
    let n = t.n();
    let f = move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let v = t.vector_field(y).expect("dimension checked");
        dy[..n].copy_from_slice(&v);
    };
    integrate_closure(f, x0, span, cfg)
}

fn direct_rhs(
    sys: &SymmetricSystem<Rational>,
) -> impl FnMut(f64, &[Complex64], &mut [Complex64]) {
    let num = sys.to_numeric();
    let (a, b, g, d) = (
        *num.alpha(),
        *num.beta(),
        *num.gamma(),
        *num.delta(),
    );
    move |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let p1: Complex64 = y.iter().sum();
        let p2: Complex64 = y.iter().map(|z| z * z).sum();
        let tail = g * p1 * p1 + d * p2;
        for (dyk, &yk) in dy.iter_mut().zip(y) {
            *dyk = a * yk * yk + b * yk * p1 + tail;
        }
    }
}

/// Integrate the reduced problem from jet initial data; returns the
/// trajectory of the elementary symmetric values s_1..s_n.
pub fn integrate_reduced(
    problem: &ReducedProblem<'_>,
    jets0: &[Complex64],
    sigma_n0: Option<Complex64>,
    span: (f64, f64),
    cfg: &ToleranceConfig,
) -> Result<Trajectory> {
    let compiled = Compiled::from_problem(problem);
    if jets0.len() != compiled.order {
        return Err(Error::DimensionMismatch {
            expected: compiled.order,
            got: jets0.len(),
        });
    }
    let mut state0 = jets0.to_vec();
    if compiled.aux.is_some() {
        state0.push(sigma_n0.ok_or(Error::MissingAuxiliaryInitialValue)?);
    }
    let jet_traj = integrate_closure(
        |_t, y, dy| compiled.rhs(y, dy),
        &state0,
        span,
        cfg,
    )?;
    let mut out = Trajectory::new(compiled.n);
    out.truncated = jet_traj.truncated;
    out.truncation_time = jet_traj.truncation_time;
    for (t, y) in jet_traj.times.iter().zip(&jet_traj.states) {
        out.push(*t, compiled.sigma_of_state(y));
    }
    Ok(out)
}

/// Advance labeled roots from one symmetric-value sample to the next,
/// subdividing along the linear homotopy when the roots move too fast to
/// trust the labeling.
/// Collision floor: the caller's tolerance, but never finer than the
/// square-root-of-epsilon scale at which a numeric double root stalls.
fn degeneracy_floor(roots: &[Complex64], cfg: &ToleranceConfig) -> f64 {
    let scale = 1.0 + inf_norm(roots);
    cfg.root_tol.max(f64::EPSILON.sqrt() * scale)
}

fn advance_roots(
    roots: &[Complex64],
    sigma_from: &[Complex64],
    sigma_to: &[Complex64],
    cfg: &ToleranceConfig,
    depth: usize,
) -> Result<Vec<Complex64>> {
    let sep = if roots.len() >= 2 {
        min_separation(roots)
    } else {
        f64::INFINITY
    };
    if sep < degeneracy_floor(roots, cfg) {
        return Err(Error::DiscriminantDegenerate(sep));
    }
    let coeffs = monic_coeffs(sigma_to);
    let unordered = aberth_roots(&coeffs, Some(roots), cfg.root_tol, ROOT_ITERS)?;
    let perm = match_roots(roots, &unordered);
    let advanced: Vec<Complex64> = perm.iter().map(|&p| unordered[p]).collect();
    let displacement = roots
        .iter()
        .zip(&advanced)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if displacement <= cfg.collision_factor * sep || roots.len() < 2 {
        let sep_new = if advanced.len() >= 2 {
            min_separation(&advanced)
        } else {
            f64::INFINITY
        };
        if sep_new < degeneracy_floor(&advanced, cfg) {
            return Err(Error::DiscriminantDegenerate(sep_new));
        }
        return Ok(advanced);
    }
    if depth >= 48 {
        return Err(Error::DiscriminantDegenerate(sep));
    }
    let mid: Vec<Complex64> = sigma_from
        .iter()
        .zip(sigma_to)
        .map(|(a, b)| (a + b) * 0.5)
        .collect();
    let half = advance_roots(roots, sigma_from, &mid, cfg, depth + 1)?;
    advance_roots(&half, &mid, sigma_to, cfg, depth + 1)
}

/// Lift a trajectory of elementary symmetric values to labeled coordinate
/// trajectories by polynomial root tracking.
pub fn track_roots(sigma: &Trajectory, cfg: &ToleranceConfig) -> Result<Trajectory> {
    track_roots_impl(sigma, cfg, None)
}

/// Same, with the initial labels matched against a given starting point.
pub fn track_roots_from(
    sigma: &Trajectory,
    cfg: &ToleranceConfig,
    initial: &[Complex64],
) -> Result<Trajectory> {
    track_roots_impl(sigma, cfg, Some(initial))
}

fn track_roots_impl(
    sigma: &Trajectory,
    cfg: &ToleranceConfig,
    initial: Option<&[Complex64]>,
) -> Result<Trajectory> {
    cfg.validate()?;
    if sigma.is_empty() {
        return Err(Error::Invalid("empty trajectory".into()));
    }
    let n = sigma.dim;
    let coeffs0 = monic_coeffs(&sigma.states[0]);
    let mut roots = aberth_roots(&coeffs0, initial, cfg.root_tol, ROOT_ITERS)?;
    if let Some(x0) = initial {
        let perm = match_roots(x0, &roots);
        roots = perm.iter().map(|&p| roots[p]).collect();
    }
    if n >= 2 && min_separation(&roots) < degeneracy_floor(&roots, cfg) {
        return Err(Error::DiscriminantDegenerate(min_separation(&roots)));
    }
    let mut out = Trajectory::new(n);
    out.truncated = sigma.truncated;
    out.truncation_time = sigma.truncation_time;
    out.push(sigma.times[0], roots.clone());
    for i in 1..sigma.len() {
        roots = advance_roots(
            &roots,
            &sigma.states[i - 1],
            &sigma.states[i],
            cfg,
            0,
        )?;
        out.push(sigma.times[i], roots.clone());
    }
    Ok(out)
}

/// Full round trip: reduce, integrate the reduced equation with the root
/// tracker coupled to step control, re-integrate directly on the same time
/// grid, and compare.
pub fn algebraic_integrate(
    sys: &SymmetricSystem<Rational>,
    x0: &[Complex64],
    span: (f64, f64),
    cfg: &ToleranceConfig,
) -> Result<IntegrationReport> {
    cfg.validate()?;
    let n = sys.n();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if n >= 2 && min_separation(x0) <= cfg.root_tol {
        return Err(Error::DegenerateInitialData);
    }

    let generic_red;
    let almost_red;
    let problem = match classify(sys).kind {
        Kind::Generic => {
            generic_red = reduce_generic(sys)?;
            ReducedProblem::Generic(&generic_red)
        }
        Kind::AlmostGenericOnly => {
            almost_red = reduce_almost_generic(sys)?;
            ReducedProblem::AlmostGeneric(&almost_red)
        }
        Kind::NonGeneric => return Err(Error::NotReducible),
    };
    let compiled = Compiled::from_problem(&problem);

    // initial jets from the exact jet polynomials, evaluated at sigma(x0)
    let sigma0: Vec<Complex64> = vieta_image(x0);
    let ss = sigma_system(sys);
    let jet_polys = sigma1_jet_polys(&ss, compiled.order);
    let mut state0: Vec<Complex64> = jet_polys.iter().map(|p| p.eval_complex(&sigma0)).collect();
    if compiled.aux.is_some() {
        state0.push(sigma0[n - 1]);
    }

    // polish the initial labels onto the exact roots of the monic polynomial
    let coeffs0 = monic_coeffs(&sigma0);
    let mut roots = aberth_roots(&coeffs0, Some(x0), cfg.root_tol, ROOT_ITERS)?;
    let perm = match_roots(x0, &roots);
    roots = perm.iter().map(|&p| roots[p]).collect();

    let (t0, t1) = span;
    if !(t1 > t0) {
        return Err(Error::Invalid("empty time span".into()));
    }
    let mut sigma_traj = Trajectory::new(n);
    let mut recon = Trajectory::new(n);
    sigma_traj.push(t0, sigma0.clone());
    recon.push(t0, roots.clone());
    let mut disc_min = discriminant_min(&sigma0, n);
    let mut status = IntegrationStatus::Ok;

    let mut rhs = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| compiled.rhs(y, dy);
    let mut solver = Dopri5::new(&mut rhs, t0, state0, t1, cfg);
    let mut sigma_prev = sigma0;
    let mut steps = 0usize;
    let mut rejections = 0usize;
    while !solver.done() {
        let p = solver.propose(t1)?;
        if inf_norm(&p.y_new) > cfg.blowup_norm {
            sigma_traj.truncated = true;
            sigma_traj.truncation_time = Some(solver.t);
            recon.truncated = true;
            recon.truncation_time = Some(solver.t);
            status = IntegrationStatus::PoleTruncated;
            break;
        }
        let sigma_new = compiled.sigma_of_state(&p.y_new);
        // the tracker drives refinement: a step whose roots jump too far
        // relative to their separation is rejected and retried smaller
        match advance_roots(&roots, &sigma_prev, &sigma_new, cfg, 48) {
            Ok(advanced) => {
                let t = p.t_new;
                solver.commit(p);
                roots = advanced;
                sigma_prev = sigma_new.clone();
                disc_min = disc_min.min(discriminant_min(&sigma_new, n));
                sigma_traj.push(t, sigma_new);
                recon.push(t, roots.clone());
                rejections = 0;
            }
            Err(Error::DiscriminantDegenerate(sep)) => {
                rejections += 1;
                if rejections > 40 {
                    if recon.len() <= 1 {
                        return Err(Error::DiscriminantDegenerate(sep));
                    }
                    sigma_traj.truncated = true;
                    sigma_traj.truncation_time = Some(solver.t);
                    recon.truncated = true;
                    recon.truncation_time = Some(solver.t);
                    status = IntegrationStatus::DiscriminantDegenerate;
                    break;
                }
                solver.refine(0.5);
            }
            Err(e) => return Err(e),
        }
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::Invalid("step budget exhausted".into()));
        }
    }

    // direct integration on the same grid
    let direct = integrate_at_times(direct_rhs(sys), x0, &recon.times, cfg)?;
    if direct.truncated && status == IntegrationStatus::Ok {
        status = IntegrationStatus::PoleTruncated;
    }

    let common = direct.len().min(recon.len());
    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    for idx in 0..common {
        let d = &direct.states[idx];
        let r = &recon.states[idx];
        let abs = d
            .iter()
            .zip(r)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let scale = inf_norm(d).max(1e-30);
        max_abs = max_abs.max(abs);
        max_rel = max_rel.max(abs / scale);
    }

    Ok(IntegrationReport {
        direct,
        reconstructed: recon,
        max_abs_error: max_abs,
        max_rel_error: max_rel,
        discriminant_min_abs: disc_min,
        status,
    })
}

fn discriminant_min(sigma: &[Complex64], n: usize) -> f64 {
    if n < 2 {
        f64::INFINITY
    } else {
        discriminant_from_sigma(sigma).norm()
    }
}
