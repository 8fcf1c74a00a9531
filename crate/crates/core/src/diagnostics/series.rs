/// Effective sample size from autocorrelations, truncated by Geyer's initial
/// positive sequence.
pub fn effective_sample_size(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 4 {
        return n as f64;
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let c: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let var = c.iter().map(|v| v * v).sum::<f64>() / n as f64;
    if var == 0.0 {
        return n as f64;
    }
    let rho = |lag: usize| c[..n - lag].iter().zip(&c[lag..]).map(|(a, b)| a * b).sum::<f64>() / (n as f64 * var);
    let mut tau = -1.0;
    let mut lag = 0;
    while lag + 1 < n {
        let pair = rho(lag) + rho(lag + 1);
        if pair <= 0.0 {
            break;
        }
        tau += 2.0 * pair;
        lag += 2;
    }
    (n as f64 / tau.max(1e-12)).min(n as f64)
}

/// Kolmogorov–Smirnov distance between the sample and a reference CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the KS statistic at sample size `n`.
pub fn ks_critical_1pct(n: f64) -> f64 {
    1.627_6 / n.sqrt()
}

/// Frequency of oscillation about the mean, in cycles per unit time.
///
/// Crossings are detected with a hysteresis band of a quarter standard
/// deviation and timed by linear interpolation; the frequency is half the
/// number of crossing intervals over the time they span, and 0 when fewer than
/// two crossings are found.
pub fn estimate_oscillation_frequency(trace: &[f64], dt: f64) -> f64 {
    if trace.len() < 4 || dt.is_nan() || dt <= 0.0 {
        return 0.0;
    }
    let n = trace.len() as f64;
    let mean = trace.iter().sum::<f64>() / n;
    let c: Vec<f64> = trace.iter().map(|v| v - mean).collect();
    let sd = (c.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    if sd == 0.0 {
        return 0.0;
    }
    let band = 0.25 * sd;
    let mut side = 0i8;
    let mut last_zero = None;
    let mut crossings = Vec::new();
    for i in 0..c.len() {
        if i > 0 && (c[i - 1] <= 0.0) != (c[i] <= 0.0) {
            last_zero = Some((i - 1) as f64 + c[i - 1] / (c[i - 1] - c[i]));
        }
        let now = if c[i] > band {
            1
        } else if c[i] < -band {
            -1
        } else {
            continue;
        };
        if side != 0 && now != side {
            if let Some(t) = last_zero {
                crossings.push(t * dt);
            }
        }
        side = now;
    }
    if crossings.len() < 2 {
        return 0.0;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    (crossings.len() - 1) as f64 / (2.0 * span)
}

/// First index `i` at which the mean of `series[i..i + window]` exceeds `threshold`.
pub fn time_to_reach(series: &[f64], threshold: f64, window: usize) -> Option<usize> {
    if window == 0 || series.len() < window {
        return None;
    }
    series
        .windows(window)
        .position(|w| w.iter().sum::<f64>() / window as f64 > threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RandomSource, RngStream};
    use std::f64::consts::TAU;

    #[test]
    fn constant_trace_has_no_frequency() {
        assert_eq!(estimate_oscillation_frequency(&[1.0; 100], 0.1), 0.0);
    }

    #[test]
    fn sine_frequency() {
        let t: Vec<f64> = (0..1000).map(|i| (TAU * i as f64 * 0.01).sin()).collect();
        let rho = estimate_oscillation_frequency(&t, 0.01);
        assert!((0.99..=1.01).contains(&rho), "{rho}");
    }

    #[test]
    fn noisy_sine_frequency() {
        let mut rng = RngStream::new(12);
        let t: Vec<f64> = (0..2000)
            .map(|i| (3.0 * TAU * i as f64 * 0.005).sin() + 0.05 * rng.standard_normal())
            .collect();
        let rho = estimate_oscillation_frequency(&t, 0.005);
        assert!((2.9..=3.1).contains(&rho), "{rho}");
    }

    #[test]
    fn iid_ess_is_near_n_and_ar1_is_smaller() {
        let mut rng = RngStream::new(1);
        let iid: Vec<f64> = (0..20_000).map(|_| rng.standard_normal()).collect();
        let e = effective_sample_size(&iid);
        assert!(e > 17_000.0, "{e}");
        let mut ar = vec![0.0; 20_000];
        for i in 1..ar.len() {
            ar[i] = 0.9 * ar[i - 1] + rng.standard_normal();
        }
        // The AR(1) integrated autocorrelation time is (1 + φ)/(1 − φ) = 19.
        let e = effective_sample_size(&ar);
        assert!((600.0..1600.0).contains(&e), "{e}");
    }

    #[test]
    fn ks_against_uniform() {
        let s: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_statistic(&s, |x| x) - 0.005).abs() < 1e-12);
    }

    #[test]
    fn reach_time() {
        let s = [0.0, 0.0, 1.0, 5.0, 5.0, 5.0];
        assert_eq!(time_to_reach(&s, 4.0, 2), Some(3));
        assert_eq!(time_to_reach(&s, 10.0, 2), None);
    }
}
