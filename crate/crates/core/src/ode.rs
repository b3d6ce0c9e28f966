//! Fixed-step RK4 integration of the kinetic system and a numerical witness
//! of global asymptotic stability via Lyapunov descent along trajectories.

use crate::error::{Error, Result};
use crate::model::{lyapunov_value, ModelParams, SpeciesState};

/// Solution samples of the kinetic ODE.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpeciesState>,
    pub params: ModelParams,
    /// Number of components clipped to zero after undershooting below -1e-12.
    pub clips: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> &SpeciesState {
        self.states.last().expect("trajectory is nonempty")
    }
}

/// Result of checking monotone Lyapunov descent along a trajectory.
#[derive(Debug, Clone, Copy)]
pub struct DescentReport {
    /// True iff `V(t_{i+1}) <= V(t_i) + 1e-9` for every step.
    pub monotone: bool,
    /// Worst observed increase of `V` across a step (0 if none).
    pub max_increase: f64,
}

const DESCENT_TOL: f64 = 1e-9;
const CLIP_REPORT_THRESHOLD: f64 = -1e-12;

fn rk4_step(p: &ModelParams, u: [f64; 3], dt: f64) -> [f64; 3] {
    let f = |v: [f64; 3]| p.reaction(&SpeciesState::from_array(v));
    let k1 = f(u);
    let k2 = f([
        u[0] + 0.5 * dt * k1[0],
        u[1] + 0.5 * dt * k1[1],
        u[2] + 0.5 * dt * k1[2],
    ]);
    let k3 = f([
        u[0] + 0.5 * dt * k2[0],
        u[1] + 0.5 * dt * k2[1],
        u[2] + 0.5 * dt * k2[2],
    ]);
    let k4 = f([u[0] + dt * k3[0], u[1] + dt * k3[1], u[2] + dt * k3[2]]);
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrate the kinetics with classical fixed-step RK4.
///
/// Components that undershoot zero are clipped back to zero; undershoots
/// beyond round-off (below -1e-12) are counted in [`Trajectory::clips`].
pub fn integrate_ode(
    p: &ModelParams,
    u0: &SpeciesState,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !(t_end >= dt) {
        return Err(Error::Domain(format!(
            "need dt > 0 and t_end >= dt, got dt = {dt}, t_end = {t_end}"
        )));
    }
    if !u0.is_nonnegative() {
        return Err(Error::Domain(format!("initial state must be nonnegative, got {u0:?}")));
    }
    let n_steps = (t_end / dt).round().max(1.0) as usize;
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut clips = 0usize;
    let mut u = u0.as_array();
    times.push(0.0);
    states.push(*u0);
    for step in 1..=n_steps {
        u = rk4_step(p, u, dt);
        for v in u.iter_mut() {
            if !v.is_finite() {
                return Err(Error::StepSize { t: step as f64 * dt, dt });
            }
            if *v < 0.0 {
                if *v < CLIP_REPORT_THRESHOLD {
                    clips += 1;
                }
                *v = 0.0;
            }
        }
        times.push(step as f64 * dt);
        states.push(SpeciesState::from_array(u));
    }
    Ok(Trajectory { times, states, params: *p, clips })
}

/// Evaluate the Lyapunov function along the trajectory and check that it
/// never increases by more than the descent tolerance.
pub fn verify_lyapunov_descent(traj: &Trajectory) -> Result<DescentReport> {
    let ubar = traj.params.positive_equilibrium()?;
    let mut prev = f64::INFINITY;
    let mut max_increase: f64 = 0.0;
    for state in &traj.states {
        let v = lyapunov_value(&traj.params, &ubar, state)?;
        if prev.is_finite() {
            max_increase = max_increase.max(v - prev);
        }
        prev = v;
    }
    Ok(DescentReport { monotone: max_increase <= DESCENT_TOL, max_increase: max_increase.max(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Closed-form logistic solution, the oracle for the prey sub-problem.
    fn logistic(a: f64, u0: f64, t: f64) -> f64 {
        u0 / (u0 + (1.0 - u0) * (-a * t).exp())
    }

    #[test]
    fn equilibrium_start_stays_put() {
        let p = ModelParams::reference(2.0);
        let ubar = p.positive_equilibrium().unwrap();
        let traj = integrate_ode(&p, &ubar, 10.0, 0.01).unwrap();
        for s in &traj.states {
            assert!(s.dist_inf(&ubar) < 1e-10);
        }
        assert_eq!(traj.clips, 0);
    }

    #[test]
    fn converges_to_equilibrium_from_generic_start() {
        let p = ModelParams::reference(2.0);
        let ubar = p.positive_equilibrium().unwrap();
        let traj = integrate_ode(&p, &SpeciesState::new(0.5, 0.5, 0.5), 200.0, 0.01).unwrap();
        assert!(traj.final_state().dist_inf(&ubar) < 1e-6);
    }

    #[test]
    fn predator_free_dynamics_reduce_to_logistic() {
        let p = ModelParams::reference(2.0);
        // u3 = 0 is invariant; each prey then follows its own logistic curve.
        let traj = integrate_ode(&p, &SpeciesState::new(0.2, 0.7, 0.0), 30.0, 0.01).unwrap();
        let end = traj.final_state();
        assert_eq!(end.u3, 0.0);
        assert_abs_diff_eq!(end.u1, logistic(1.0, 0.2, 30.0), epsilon = 1e-8);
        assert_abs_diff_eq!(end.u2, logistic(1.0, 0.7, 30.0), epsilon = 1e-8);
    }

    #[test]
    fn fourth_order_convergence_on_logistic_subproblem() {
        let p = ModelParams::reference(2.0);
        let t_end = 5.0;
        let exact = logistic(1.0, 0.2, t_end);
        let errs: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&dt| {
                let traj = integrate_ode(&p, &SpeciesState::new(0.2, 0.2, 0.0), t_end, dt).unwrap();
                (traj.final_state().u1 - exact).abs()
            })
            .collect();
        // halving dt should shrink the error by about 2^4
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 12.0, "observed ratio {ratio}, errors {errs:?}");
        }
    }

    #[test]
    fn non_finite_state_reports_step_size_error() {
        // a step size so large the RK4 stages overflow the double range
        let p = ModelParams::reference(2.0);
        let r = integrate_ode(&p, &SpeciesState::new(2.5, 2.5, 2.5), 2e80, 1e80);
        assert!(matches!(r, Err(Error::StepSize { .. })));
    }

    #[test]
    fn huge_undershoot_is_clipped_and_reported() {
        // dt beyond the stability limit drives components far negative; the
        // contract clips them to zero and counts the events
        let p = ModelParams::reference(2.0);
        let traj = integrate_ode(&p, &SpeciesState::new(2.5, 2.5, 2.5), 100.0, 50.0).unwrap();
        assert!(traj.clips > 0);
        assert!(traj.states.iter().all(|s| s.is_nonnegative()));
    }

    #[test]
    fn descent_report_on_constant_and_reversed_trajectories() {
        let p = ModelParams::reference(2.0);
        let ubar = p.positive_equilibrium().unwrap();

        let constant = integrate_ode(&p, &ubar, 5.0, 0.05).unwrap();
        let rep = verify_lyapunov_descent(&constant).unwrap();
        assert!(rep.monotone);
        assert_eq!(rep.max_increase, 0.0);

        let mut forward = integrate_ode(&p, &SpeciesState::new(0.5, 0.5, 0.5), 50.0, 0.01).unwrap();
        assert!(verify_lyapunov_descent(&forward).unwrap().monotone);

        forward.states.reverse();
        let rep = verify_lyapunov_descent(&forward).unwrap();
        assert!(!rep.monotone);
        assert!(rep.max_increase > 0.0);
    }

    #[test]
    fn descent_rejects_nonpositive_states() {
        let p = ModelParams::reference(2.0);
        let mut traj = integrate_ode(&p, &SpeciesState::new(0.5, 0.5, 0.5), 1.0, 0.1).unwrap();
        traj.states[3] = SpeciesState::new(0.0, 0.5, 0.5);
        assert!(matches!(verify_lyapunov_descent(&traj), Err(Error::Domain(_))));
    }

    #[test]
    fn random_starts_descend_and_converge() {
        let p = ModelParams::reference(2.0);
        let ubar = p.positive_equilibrium().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let u0 = SpeciesState::new(
                rng.gen_range(0.05..2.0),
                rng.gen_range(0.05..2.0),
                rng.gen_range(0.05..2.0),
            );
            let traj = integrate_ode(&p, &u0, 500.0, 0.01).unwrap();
            assert!(verify_lyapunov_descent(&traj).unwrap().monotone, "u0 = {u0:?}");
            assert!(traj.final_state().dist_inf(&ubar) < 1e-4, "u0 = {u0:?}");
        }
    }
}
