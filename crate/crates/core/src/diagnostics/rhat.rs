use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Average ranks (1-based), ties sharing the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = 0.5 * ((i + 1) + (j + 1)) as f64;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Classic `√((n−1)/n + B/(n·W))` over equal-length sequences.
pub fn split_rhat_of(seqs: &[&[f64]]) -> f64 {
    let n = seqs[0].len() as f64;
    let stats: Vec<(f64, f64)> = seqs.iter().map(|s| mean_var(s)).collect();
    let w = stats.iter().map(|s| s.1).sum::<f64>() / stats.len() as f64;
    let means: Vec<f64> = stats.iter().map(|s| s.0).collect();
    let b = n * mean_var(&means).1;
    ((n - 1.0) / n + b / (n * w)).sqrt()
}

/// Rank-normalized split R̂.
///
/// Each chain is split into halves (the middle draw of an odd-length chain is
/// dropped), the pooled draws are replaced by normal scores of their average
/// ranks, and the classic split statistic is computed on the scores. Returns
/// `Ok(None)` when every value is identical.
pub fn rank_normalized_rhat(chains: &[Vec<f64>]) -> Result<Option<f64>> {
    if chains.len() < 2 {
        return Err(Error::InvalidConfig("R-hat needs at least two chains".into()));
    }
    let len = chains[0].len();
    if len < 4 || chains.iter().any(|c| c.len() != len) {
        return Err(Error::InvalidConfig("R-hat needs equal-length chains of at least 4 draws".into()));
    }
    let half = len / 2;
    let mut pooled = Vec::with_capacity(2 * half * chains.len());
    for c in chains {
        pooled.extend_from_slice(&c[..half]);
        pooled.extend_from_slice(&c[len - half..]);
    }
    if pooled.iter().all(|v| *v == pooled[0]) {
        return Ok(None);
    }
    let total = pooled.len() as f64;
    let normal = Normal::standard();
    let scores: Vec<f64> = average_ranks(&pooled)
        .into_iter()
        .map(|r| normal.inverse_cdf((r - 0.375) / (total + 0.25)))
        .collect();
    let seqs: Vec<&[f64]> = scores.chunks(half).collect();
    Ok(Some(split_rhat_of(&seqs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_share_average_rank() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn constant_chains_are_undefined() {
        assert_eq!(rank_normalized_rhat(&[vec![2.0; 10], vec![2.0; 10]]).unwrap(), None);
    }

    #[test]
    fn rejects_short_or_single_chains() {
        assert!(rank_normalized_rhat(&[vec![1.0, 2.0, 3.0, 4.0]]).is_err());
        assert!(rank_normalized_rhat(&[vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]]).is_err());
    }
}
