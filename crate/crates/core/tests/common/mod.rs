#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsh_core::curve::uniform_grid;
use rsh_core::FamilyParams;

pub const SWEEP_SEED: u64 = 0x5eed_2024;
pub const SWEEP_SIZE: usize = 50;

/// A randomized family member together with the parameter window it is examined on.
#[derive(Debug, Clone, Copy)]
pub struct Member {
    pub params: FamilyParams,
    pub s_min: f64,
    pub s_max: f64,
}

impl Member {
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(self.s_min, self.s_max, n)
    }

    /// `n` points strictly inside the window.
    pub fn interior(&self, n: usize) -> Vec<f64> {
        let h = (self.s_max - self.s_min) / (n + 1) as f64;
        (1..=n).map(|i| self.s_min + h * i as f64).collect()
    }

    /// `(c₁, c₂)` as seen in the Frenet frame of the generated curve.
    pub fn oriented_line(&self) -> (f64, f64) {
        let e = self.params.orientation();
        (e * self.params.c1(), e * self.params.c2())
    }
}

/// Window on which `f = c₁s + c₂` runs over `[-2, 2]`.
pub fn window(params: &FamilyParams) -> (f64, f64) {
    let a = (-2.0 - params.c2()) / params.c1();
    let b = (2.0 - params.c2()) / params.c1();
    (a.min(b), a.max(b))
}

/// `|c₁| ∈ [0.1, 5]` with random sign, `c₂ ∈ [−2, 2]`, `θ ∈ (0.1, π/2 − 0.1)`.
pub fn sweep() -> Vec<Member> {
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    (0..SWEEP_SIZE)
        .map(|_| {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let c1 = sign * rng.gen_range(0.1..=5.0);
            let c2 = rng.gen_range(-2.0..=2.0);
            let theta = rng.gen_range(0.1..FRAC_PI_2 - 0.1);
            let params = FamilyParams::new(c1, c2, theta).expect("sweep parameters are valid");
            let (s_min, s_max) = window(&params);
            Member {
                params,
                s_min,
                s_max,
            }
        })
        .collect()
}

pub fn example1() -> FamilyParams {
    FamilyParams::from_cos_theta(1.0, 0.0, 1.0 / 3.0).unwrap()
}

pub fn example2() -> FamilyParams {
    FamilyParams::from_cos_theta(0.5, -0.2, 0.1).unwrap()
}
