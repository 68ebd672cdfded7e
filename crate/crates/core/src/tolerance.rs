use serde::{Deserialize, Serialize};

/// Every numeric threshold used by the library, in one place.
///
/// Floors (`eps_kappa`, `eps_slope`) decide whether a quantity is treated as zero and are
/// not affected by [`Tolerances::scaled`]; everything else is a pass/fail tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Curvature floor below which the Frenet frame is undefined.
    pub eps_kappa: f64,
    /// Slope floor separating rectifying curves (`c₁ ≠ 0`) from ordinary helices.
    pub eps_slope: f64,
    /// `|speed − 1|` for unit-speed checks.
    pub speed: f64,
    /// Frame orthonormality residual, closed-form backend.
    pub frame_closed: f64,
    /// Frame orthonormality residual, finite-difference backend.
    pub frame_fd: f64,
    /// Max deviation of σ from its mean, closed-form input.
    pub sigma_closed: f64,
    /// Max deviation of σ from its mean, sampled or finite-difference input.
    pub sigma_sampled: f64,
    /// RMS residual of the τ/κ line fit, closed-form input.
    pub fit_closed: f64,
    /// RMS residual of the τ/κ line fit, sampled or finite-difference input.
    pub fit_sampled: f64,
    /// `|⟨α, n⟩|` for the rectifying-plane test, closed-form input.
    pub leak_closed: f64,
    /// `|⟨α, n⟩|` for the rectifying-plane test, sampled or finite-difference input.
    pub leak_sampled: f64,
    /// Relative slack in the chord-length consistency check of sampled curves.
    pub chord: f64,
    /// Family verification suite thresholds.
    pub suite: SuiteTolerances,
}

/// Thresholds of the closed-form verification suite run by `rsh verify`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteTolerances {
    pub unit_speed: f64,
    pub kappa_tau_law: f64,
    pub ratio_line: f64,
    pub sigma: f64,
    pub cone: f64,
    pub ode: f64,
    pub axis: f64,
    pub lambda2: f64,
    pub latitude: f64,
    pub normal_leak: f64,
}

impl Default for SuiteTolerances {
    fn default() -> Self {
        Self {
            unit_speed: 1e-9,
            kappa_tau_law: 1e-9,
            ratio_line: 1e-9,
            sigma: 1e-9,
            cone: 1e-10,
            ode: 1e-9,
            axis: 1e-8,
            lambda2: 1e-10,
            latitude: 1e-9,
            normal_leak: 1e-9,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_kappa: 1e-9,
            eps_slope: 1e-8,
            speed: 1e-9,
            frame_closed: 1e-8,
            frame_fd: 1e-5,
            sigma_closed: 1e-6,
            sigma_sampled: 1e-4,
            fit_closed: 1e-8,
            fit_sampled: 1e-4,
            leak_closed: 1e-9,
            leak_sampled: 1e-4,
            chord: 1e-6,
            suite: SuiteTolerances::default(),
        }
    }
}

impl Tolerances {
    /// Multiplies every pass/fail tolerance by `factor`. Floors are left unchanged.
    pub fn scaled(&self, factor: f64) -> Self {
        let s = &self.suite;
        Self {
            eps_kappa: self.eps_kappa,
            eps_slope: self.eps_slope,
            speed: self.speed * factor,
            frame_closed: self.frame_closed * factor,
            frame_fd: self.frame_fd * factor,
            sigma_closed: self.sigma_closed * factor,
            sigma_sampled: self.sigma_sampled * factor,
            fit_closed: self.fit_closed * factor,
            fit_sampled: self.fit_sampled * factor,
            leak_closed: self.leak_closed * factor,
            leak_sampled: self.leak_sampled * factor,
            chord: self.chord * factor,
            suite: SuiteTolerances {
                unit_speed: s.unit_speed * factor,
                kappa_tau_law: s.kappa_tau_law * factor,
                ratio_line: s.ratio_line * factor,
                sigma: s.sigma * factor,
                cone: s.cone * factor,
                ode: s.ode * factor,
                axis: s.axis * factor,
                lambda2: s.lambda2 * factor,
                latitude: s.latitude * factor,
                normal_leak: s.normal_leak * factor,
            },
        }
    }
}
