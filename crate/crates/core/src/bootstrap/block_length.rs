//! Subsampling choice of the bootstrap block length.
//!
//! The target is `psi = var(n^{-1/2} sum e_t)`. For every length-`m` run of
//! the standardized residuals and every candidate `b`, the moving-block
//! estimate `psi_m(b)` is compared with a full-sample pilot estimate; the
//! candidate with the smallest summed squared deviation is rescaled by
//! `(n/m)^{1/3}`.

use crate::error::{Error, Result};

/// Moving block estimate of the variance of the scaled partial sum:
/// `(b (n-b+1))^{-1} sum_j (S_j - b zbar)^2` over the `n-b+1` block sums `S_j`.
pub fn mbb_variance(z: &[f64], b: usize) -> f64 {
    let n = z.len();
    assert!(b >= 1 && b <= n, "block length {b} outside 1..={n}");
    let mean = z.iter().sum::<f64>() / n as f64;
    let centre = b as f64 * mean;

    let mut sum: f64 = z[..b].iter().sum();
    let mut acc = (sum - centre).powi(2);
    for j in b..n {
        sum += z[j] - z[j - b];
        acc += (sum - centre).powi(2);
    }
    acc / (b * (n - b + 1)) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HhjParams {
    pub m: usize,
    pub pilot_b: usize,
    pub max_iter: usize,
}

impl HhjParams {
    /// `m = 2 ceil(sqrt n)` clipped to `[16, n/4]`, pilot `ceil(n^{1/3})`,
    /// three refinement passes. Small samples are pulled back into the
    /// valid region `1 <= pilot < m < n`.
    pub fn default_for(n: usize) -> Self {
        let mut m = 2 * (n as f64).sqrt().ceil() as usize;
        m = m.max(16).min(n / 4);
        m = m.max(2).min(n.saturating_sub(1));
        let pilot_b = ((n as f64).cbrt().ceil() as usize).clamp(1, m.saturating_sub(1).max(1));
        Self {
            m,
            pilot_b,
            max_iter: 3,
        }
    }
}

fn select_subsample_block(z: &[f64], m: usize, target: f64) -> usize {
    let n = z.len();
    let max_b = m.div_ceil(3);
    let mut best = (1, f64::INFINITY);
    for b in 1..=max_b {
        let crit: f64 = (0..n - m)
            .map(|i| (mbb_variance(&z[i..i + m], b) - target).powi(2))
            .sum();
        if crit < best.1 {
            best = (b, crit);
        }
    }
    best.0
}

pub fn hhj_block_length(std_resid: &[f64], m: usize, pilot_b: usize, max_iter: usize) -> Result<usize> {
    let n = std_resid.len();
    if m < 2 || m >= n || pilot_b < 1 || pilot_b >= m {
        return Err(Error::InvalidSubsampleLength { m, pilot: pilot_b, n });
    }
    let scale = (n as f64 / m as f64).cbrt();
    let upper = (n / 3).max(1);

    let mut pilot = pilot_b;
    let mut b_opt = pilot_b;
    for _ in 0..=max_iter {
        let target = mbb_variance(std_resid, pilot);
        let b_m = select_subsample_block(std_resid, m, target);
        b_opt = ((scale * b_m as f64).round() as usize).clamp(1, upper);
        if b_opt == pilot {
            break;
        }
        pilot = b_opt;
    }
    Ok(b_opt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_has_zero_variance() {
        for b in 1..=10 {
            assert_eq!(mbb_variance(&[3.0; 10], b), 0.0);
        }
    }

    #[test]
    fn unit_block_hand_arithmetic() {
        assert_eq!(mbb_variance(&[0.0, 2.0], 1), 1.0);
    }

    #[test]
    fn matches_direct_block_sums() {
        let z: Vec<f64> = (0..23).map(|i| ((i * 7 % 11) as f64 - 5.0) * 0.3).collect();
        let n = z.len();
        let mean = z.iter().sum::<f64>() / n as f64;
        for b in [1, 2, 5, 9, 23] {
            let mut acc = 0.0;
            for j in 0..=n - b {
                let s: f64 = z[j..j + b].iter().sum();
                acc += (s - b as f64 * mean).powi(2);
            }
            let direct = acc / (b * (n - b + 1)) as f64;
            assert!((mbb_variance(&z, b) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_formula() {
        // (200/25)^{1/3} * 2 = 4.
        let scale: f64 = (200.0f64 / 25.0).cbrt();
        assert_eq!((scale * 2.0).round() as usize, 4);
    }

    #[test]
    fn invalid_subsample_lengths() {
        let z = vec![0.5; 50];
        assert!(hhj_block_length(&z, 1, 1, 3).is_err());
        assert!(hhj_block_length(&z, 50, 1, 3).is_err());
        assert!(hhj_block_length(&z, 10, 10, 3).is_err());
        assert!(hhj_block_length(&z, 10, 0, 3).is_err());
    }

    #[test]
    fn default_params_are_valid() {
        for n in [8, 9, 12, 20, 40, 64, 99, 100, 250, 1000, 5000] {
            let p = HhjParams::default_for(n);
            assert!(p.m >= 2 && p.m < n, "n={n} {p:?}");
            assert!(p.pilot_b >= 1 && p.pilot_b < p.m, "n={n} {p:?}");
        }
        let p = HhjParams::default_for(100);
        assert_eq!((p.m, p.pilot_b, p.max_iter), (20, 5, 3));
    }
}
