//! Simulated local-to-unity series with ARMA(1,1) errors and deterministic
//! volatility shifts:
//!
//! ```text
//! y_t = exp(-c/T) y_{t-1} + sigma_t e_t,   e_t = theta e_{t-1} + phi eta_{t-1} + eta_t
//! ```

use rand::Rng as _;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{rng_from_seed, Rng};
use crate::series::TimeSeries;

pub const BURN_IN: usize = 100;
pub const MIN_DGP_LEN: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Innovation {
    Normal,
    #[serde(alias = "t3", alias = "student-t3")]
    StudentT3,
    #[serde(alias = "de")]
    DoubleExp,
}

impl Innovation {
    pub fn label(self) -> &'static str {
        match self {
            Innovation::Normal => "normal",
            Innovation::StudentT3 => "t3",
            Innovation::DoubleExp => "de",
        }
    }

    pub fn sample(self, rng: &mut Rng) -> f64 {
        match self {
            Innovation::Normal => rng.sample(StandardNormal),
            Innovation::StudentT3 => {
                let z: f64 = rng.sample(StandardNormal);
                let chi = ChiSquared::new(3.0).expect("valid degrees of freedom");
                let v: f64 = chi.sample(rng);
                z / (v / 3.0).sqrt()
            }
            Innovation::DoubleExp => loop {
                // Inverse CDF of the density exp(-|x|)/2.
                let u: f64 = rng.random::<f64>() - 0.5;
                let tail = 1.0 - 2.0 * u.abs();
                if tail > 0.0 {
                    break -u.signum() * tail.ln();
                }
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolCase {
    Constant,
    OneShift,
    TwoShifts,
    Smooth,
}

impl VolCase {
    pub fn label(self) -> &'static str {
        match self {
            VolCase::Constant => "constant",
            VolCase::OneShift => "one-shift",
            VolCase::TwoShifts => "two-shifts",
            VolCase::Smooth => "smooth",
        }
    }

    /// `sigma(tau)` on `(0, 1]`.
    pub fn sigma_at(self, tau: f64, sigma0: f64, sigma1: f64) -> f64 {
        let jump = sigma1 - sigma0;
        match self {
            VolCase::Constant => sigma0,
            VolCase::OneShift => sigma0 + if tau > 0.5 { jump } else { 0.0 },
            VolCase::TwoShifts => sigma0 + if tau > 0.3 && tau < 0.7 { jump } else { 0.0 },
            VolCase::Smooth => sigma0 + jump * (1.0 - (-15.0 * (tau - 0.5).powi(2)).exp()),
        }
    }
}

/// Named `(theta, phi)` pairs. `PaperMa1` and `PaperAr1` carry the values
/// printed for the serially dependent designs; note that `theta` multiplies
/// `e_{t-1}` in the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorPreset {
    Iid,
    PaperMa1,
    PaperAr1,
}

impl ErrorPreset {
    pub fn theta_phi(self) -> (f64, f64) {
        match self {
            ErrorPreset::Iid => (0.0, 0.0),
            ErrorPreset::PaperMa1 => (0.5, 0.0),
            ErrorPreset::PaperAr1 => (0.0, 0.5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DgpSpec {
    pub c: f64,
    pub theta: f64,
    pub phi: f64,
    pub innovation: Innovation,
    pub vol_case: VolCase,
    pub sigma0: f64,
    pub sigma1: f64,
    #[serde(rename = "T")]
    pub t_len: usize,
}

impl Default for DgpSpec {
    fn default() -> Self {
        Self {
            c: 0.0,
            theta: 0.0,
            phi: 0.0,
            innovation: Innovation::Normal,
            vol_case: VolCase::Constant,
            sigma0: 1.0,
            sigma1: 1.0,
            t_len: 100,
        }
    }
}

impl DgpSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta.abs() < 1.0) {
            return Err(Error::InvalidDgp(format!("|theta| = {} must be < 1", self.theta.abs())));
        }
        if self.t_len < MIN_DGP_LEN {
            return Err(Error::InvalidDgp(format!(
                "T = {} is below the minimum of {MIN_DGP_LEN}",
                self.t_len
            )));
        }
        if !(self.sigma0 > 0.0 && self.sigma1 > 0.0) || !self.sigma0.is_finite() || !self.sigma1.is_finite() {
            return Err(Error::InvalidDgp("sigma0 and sigma1 must be positive".into()));
        }
        if !(self.c >= 0.0 && self.c.is_finite()) || !self.phi.is_finite() {
            return Err(Error::InvalidDgp("c must be nonnegative and phi finite".into()));
        }
        Ok(())
    }

    pub fn gamma0(&self) -> f64 {
        (-self.c / self.t_len as f64).exp()
    }

    pub fn with_preset(mut self, preset: ErrorPreset) -> Self {
        (self.theta, self.phi) = preset.theta_phi();
        self
    }
}

/// `sigma_t = sigma(t/T)` for `t = 1..T`.
pub fn volatility_profile(vol_case: VolCase, sigma0: f64, sigma1: f64, t_len: usize) -> Vec<f64> {
    (1..=t_len)
        .map(|t| vol_case.sigma_at(t as f64 / t_len as f64, sigma0, sigma1))
        .collect()
}

/// ARMA(1,1) errors after a burn-in started from `e = eta = 0`.
pub fn simulate_errors(spec: &DgpSpec, rng: &mut Rng) -> Vec<f64> {
    let (mut e_prev, mut eta_prev) = (0.0, 0.0);
    let mut out = Vec::with_capacity(spec.t_len);
    for step in 0..BURN_IN + spec.t_len {
        let eta = spec.innovation.sample(rng);
        let e = spec.theta * e_prev + spec.phi * eta_prev + eta;
        if step >= BURN_IN {
            out.push(e);
        }
        e_prev = e;
        eta_prev = eta;
    }
    out
}

/// Simulated series together with the error sequence that drove it.
pub fn simulate_with_errors(spec: &DgpSpec, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    spec.validate()?;
    let mut rng = rng_from_seed(seed);
    let errors = simulate_errors(spec, &mut rng);
    let sigma = volatility_profile(spec.vol_case, spec.sigma0, spec.sigma1, spec.t_len);
    let gamma0 = spec.gamma0();
    let mut level = 0.0;
    let y = errors
        .iter()
        .zip(&sigma)
        .map(|(e, s)| {
            level = gamma0 * level + s * e;
            level
        })
        .collect();
    Ok((y, errors))
}

pub fn simulate_series(spec: &DgpSpec, seed: u64) -> Result<TimeSeries> {
    let (y, _) = simulate_with_errors(spec, seed)?;
    TimeSeries::new(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_shift_profile() {
        let p = volatility_profile(VolCase::OneShift, 1.0, 5.0, 10);
        assert_eq!(p, vec![1.0, 1.0, 1.0, 1.0, 1.0, 5.0, 5.0, 5.0, 5.0, 5.0]);
    }

    #[test]
    fn smooth_and_two_shift_boundaries() {
        assert_eq!(VolCase::Smooth.sigma_at(0.5, 1.0, 9.0), 1.0);
        assert_eq!(VolCase::TwoShifts.sigma_at(0.3, 1.0, 9.0), 1.0);
        assert_eq!(VolCase::TwoShifts.sigma_at(0.7, 1.0, 9.0), 1.0);
        assert_eq!(VolCase::TwoShifts.sigma_at(0.5, 1.0, 9.0), 9.0);
    }

    #[test]
    fn profiles_are_bounded() {
        for case in [VolCase::Constant, VolCase::OneShift, VolCase::TwoShifts, VolCase::Smooth] {
            for (s0, s1) in [(1.0, 5.0), (1.0, 1.0 / 9.0)] {
                let p = volatility_profile(case, s0, s1, 250);
                let (lo, hi) = (f64::min(s0, s1), f64::max(s0, s1));
                assert!(p.iter().all(|&s| s >= lo - 1e-15 && s <= hi + 1e-15));
                assert_eq!(p, volatility_profile(case, s0, s1, 250));
            }
        }
    }

    #[test]
    fn gamma0_at_unit_root() {
        assert_eq!(DgpSpec::default().gamma0(), 1.0);
        let spec = DgpSpec { c: 10.0, ..DgpSpec::default() };
        assert!((spec.gamma0() - 0.904_837_418_035_959_6).abs() < 1e-15);
    }

    #[test]
    fn pure_random_walk() {
        let spec = DgpSpec::default();
        let (y, e) = simulate_with_errors(&spec, 11).unwrap();
        let mut level = 0.0;
        for (yt, et) in y.iter().zip(&e) {
            level += et;
            assert_eq!(*yt, level);
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(DgpSpec { t_len: 10, ..DgpSpec::default() }.validate().is_err());
        assert!(DgpSpec { theta: 1.0, ..DgpSpec::default() }.validate().is_err());
        assert!(DgpSpec { sigma1: 0.0, ..DgpSpec::default() }.validate().is_err());
        assert!(DgpSpec { c: -1.0, ..DgpSpec::default() }.validate().is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = DgpSpec {
            innovation: Innovation::StudentT3,
            vol_case: VolCase::Smooth,
            sigma1: 3.0,
            ..DgpSpec::default()
        }
        .with_preset(ErrorPreset::PaperMa1);
        assert_eq!(simulate_series(&spec, 3).unwrap(), simulate_series(&spec, 3).unwrap());
        assert_ne!(simulate_series(&spec, 3).unwrap(), simulate_series(&spec, 4).unwrap());
        assert_eq!(simulate_series(&spec, 3).unwrap().len(), 100);
    }

    #[test]
    fn presets() {
        assert_eq!(ErrorPreset::PaperMa1.theta_phi(), (0.5, 0.0));
        assert_eq!(ErrorPreset::PaperAr1.theta_phi(), (0.0, 0.5));
    }
}
