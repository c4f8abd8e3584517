//! Complex-state adaptive integration, simultaneous root finding with
//! continuous tracking, and the end-to-end pipeline that integrates the
//! reduced scalar equation and reconstructs coordinate trajectories as the
//! moving roots of the monic polynomial built from elementary symmetric
//! values.

mod aberth;
mod dopri5;
mod pipeline;
mod residual;

pub use aberth::{aberth_roots, match_roots};
pub use dopri5::Dopri5;
pub use pipeline::{
    algebraic_integrate, integrate_at_times, integrate_direct, integrate_direct_tensor,
    integrate_reduced, track_roots, track_roots_from, ReducedProblem,
};
pub use residual::{residual_check, ClosedFormCase};

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::scalar::Complex64;

/// Tolerances and safety limits for the numeric pipeline.
#[derive(Clone, Debug)]
pub struct ToleranceConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cap on the step size; infinite by default.
    pub max_step: f64,
    /// State norm that counts as a pole; integration truncates there.
    pub blowup_norm: f64,
    /// Root polish tolerance and the collision threshold for tracking.
    pub root_tol: f64,
    /// A tracking step is refined when roots move farther than this factor
    /// times the smallest pairwise separation.
    pub collision_factor: f64,
    /// Hard cap on accepted integrator steps.
    pub max_steps: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            blowup_norm: 1e8,
            root_tol: 1e-12,
            collision_factor: 0.5,
            max_steps: 1_000_000,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> crate::error::Result<()> {
        let positive = [
            self.rel_tol,
            self.abs_tol,
            self.max_step,
            self.blowup_norm,
            self.root_tol,
        ];
        if positive.iter().any(|&v| !(v > 0.0)) {
            return Err(crate::error::Error::Invalid(
                "tolerances must be positive".into(),
            ));
        }
        if !(self.collision_factor > 0.0 && self.collision_factor < 1.0) {
            return Err(crate::error::Error::Invalid(
                "collision_factor must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Sampled complex states over a strictly increasing time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub dim: usize,
    pub truncated: bool,
    pub truncation_time: Option<f64>,
}

impl Trajectory {
    pub fn new(dim: usize) -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            dim,
            truncated: false,
            truncation_time: None,
        }
    }

    pub fn push(&mut self, t: f64, state: Vec<Complex64>) {
        debug_assert_eq!(state.len(), self.dim);
        debug_assert!(self.times.last().map_or(true, |&last| t > last));
        self.times.push(t);
        self.states.push(state);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV rendering with header "t, re(x1), im(x1), ...".
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 1..=self.dim {
            out.push_str(&format!(", re(x{i}), im(x{i})"));
        }
        out.push('\n');
        for (t, state) in self.times.iter().zip(&self.states) {
            out.push_str(&format!("{t:.17e}"));
            for z in state {
                out.push_str(&format!(", {:.17e}, {:.17e}", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }
}

struct ComplexPair(Complex64);

impl Serialize for ComplexPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.0.re)?;
        seq.serialize_element(&self.0.im)?;
        seq.end()
    }
}

impl Serialize for Trajectory {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let states: Vec<Vec<ComplexPair>> = self
            .states
            .iter()
            .map(|row| row.iter().map(|&z| ComplexPair(z)).collect())
            .collect();
        let mut st = s.serialize_struct("Trajectory", 5)?;
        st.serialize_field("times", &self.times)?;
        st.serialize_field("states", &states)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("truncated", &self.truncated)?;
        st.serialize_field("truncation_time", &self.truncation_time)?;
        st.end()
    }
}

/// Outcome classification of a round trip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationStatus {
    Ok,
    PoleTruncated,
    DiscriminantDegenerate,
}

/// Direct trajectory, reconstructed trajectory, and round-trip metrics over
/// their common time grid.
#[derive(Clone, Debug, Serialize)]
pub struct IntegrationReport {
    pub direct: Trajectory,
    pub reconstructed: Trajectory,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub discriminant_min_abs: f64,
    pub status: IntegrationStatus,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_shape() {
        let mut tr = Trajectory::new(2);
        tr.push(0.0, vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, -1.0)]);
        let csv = tr.to_csv();
        assert!(csv.starts_with("t, re(x1), im(x1), re(x2), im(x2)\n"));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn trajectory_json_states_are_pairs() {
        let mut tr = Trajectory::new(1);
        tr.push(0.5, vec![Complex64::new(1.5, -2.5)]);
        let json = serde_json::to_string(&tr).unwrap();
        assert!(json.contains("[[1.5,-2.5]]"));
        assert!(json.contains("\"truncated\":false"));
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceConfig::default().validate().is_ok());
        let mut bad = ToleranceConfig::default();
        bad.collision_factor = 1.5;
        assert!(bad.validate().is_err());
        let mut bad = ToleranceConfig::default();
        bad.rel_tol = 0.0;
        assert!(bad.validate().is_err());
    }
}
