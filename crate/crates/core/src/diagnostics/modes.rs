/// Assigns a mode label to a state, or `None` when ambiguous.
pub trait ModeClassifier {
    fn classify(&self, x: &[f64]) -> Option<usize>;
}

impl<F: Fn(&[f64]) -> Option<usize>> ModeClassifier for F {
    fn classify(&self, x: &[f64]) -> Option<usize> {
        self(x)
    }
}

/// Two modes split by the hyperplane through the midpoint of two centers.
#[derive(Debug, Clone)]
pub struct ProjectionClassifier {
    midpoint: Vec<f64>,
    direction: Vec<f64>,
}

impl ProjectionClassifier {
    /// Label 0 on the side of `mu_a`, 1 on the side of `mu_b`.
    pub fn between(mu_a: &[f64], mu_b: &[f64]) -> Self {
        ProjectionClassifier {
            midpoint: mu_a.iter().zip(mu_b).map(|(a, b)| 0.5 * (a + b)).collect(),
            direction: mu_a.iter().zip(mu_b).map(|(a, b)| b - a).collect(),
        }
    }

    /// Signed projection `⟨x − midpoint, direction⟩`.
    pub fn project(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.midpoint)
            .zip(&self.direction)
            .map(|((xi, m), d)| (xi - m) * d)
            .sum()
    }
}

impl ModeClassifier for ProjectionClassifier {
    fn classify(&self, x: &[f64]) -> Option<usize> {
        let p = self.project(x);
        if p > 0.0 {
            Some(1)
        } else if p < 0.0 {
            Some(0)
        } else {
            None
        }
    }
}

/// Nearest of several reference states in Euclidean distance; `None` when
/// the two closest are within `tolerance` relative distance of each other.
#[derive(Debug, Clone)]
pub struct NearestReferenceClassifier {
    pub references: Vec<Vec<f64>>,
    pub tolerance: f64,
}

impl NearestReferenceClassifier {
    pub fn new(references: Vec<Vec<f64>>) -> Self {
        NearestReferenceClassifier { references, tolerance: 0.1 }
    }
}

impl ModeClassifier for NearestReferenceClassifier {
    fn classify(&self, x: &[f64]) -> Option<usize> {
        let mut d: Vec<(f64, usize)> = self
            .references
            .iter()
            .enumerate()
            .map(|(i, r)| (x.iter().zip(r).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(), i))
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0));
        match d.as_slice() {
            [] => None,
            [only] => Some(only.1),
            [first, second, ..] => {
                if second.0 - first.0 < self.tolerance * second.0 {
                    None
                } else {
                    Some(first.1)
                }
            }
        }
    }
}

/// Labels of a series with unassigned states carrying the previous label.
pub fn carried_labels<C: ModeClassifier + ?Sized, S: AsRef<[f64]>>(series: &[S], classifier: &C) -> Vec<Option<usize>> {
    let mut current = None;
    series
        .iter()
        .map(|x| {
            if let Some(l) = classifier.classify(x.as_ref()) {
                current = Some(l);
            }
            current
        })
        .collect()
}

/// Number of consecutive assigned states with different labels.
pub fn count_mode_hops<C: ModeClassifier + ?Sized, S: AsRef<[f64]>>(series: &[S], classifier: &C) -> usize {
    carried_labels(series, classifier)
        .windows(2)
        .filter(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if a != b))
        .count()
}

/// Distinct labels assigned anywhere in the series.
pub fn visited_modes<C: ModeClassifier + ?Sized, S: AsRef<[f64]>>(series: &[S], classifier: &C) -> Vec<usize> {
    let mut seen: Vec<usize> = series.iter().filter_map(|x| classifier.classify(x.as_ref())).collect();
    seen.sort_unstable();
    seen.dedup();
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_sign_changes() {
        let c = ProjectionClassifier::between(&[-1.0], &[1.0]);
        let s = [[-1.0], [-2.0], [3.0], [0.5], [-0.1]];
        assert_eq!(count_mode_hops(&s, &c), 2);
        assert_eq!(count_mode_hops(&[[4.0]; 6], &c), 0);
    }

    #[test]
    fn unassigned_states_do_not_break_or_create_hops() {
        let c = ProjectionClassifier::between(&[-1.0], &[1.0]);
        assert_eq!(count_mode_hops(&[[-1.0], [0.0], [-1.0], [0.0], [1.0]], &c), 1);
        assert_eq!(count_mode_hops(&[[0.0], [0.0], [1.0]], &c), 0);
    }

    #[test]
    fn relabeling_is_invisible() {
        let c = ProjectionClassifier::between(&[-1.0], &[1.0]);
        let flipped = |x: &[f64]| c.classify(x).map(|l| 7 - l);
        let s: Vec<[f64; 1]> = (0..40).map(|i| [((i * 7919) % 13) as f64 - 6.0]).collect();
        assert_eq!(count_mode_hops(&s, &c), count_mode_hops(&s, &flipped));
    }

    #[test]
    fn nearest_reference_with_ambiguity_band() {
        let c = NearestReferenceClassifier::new(vec![vec![0.0, 0.0], vec![10.0, 0.0]]);
        assert_eq!(c.classify(&[1.0, 0.0]), Some(0));
        assert_eq!(c.classify(&[9.0, 1.0]), Some(1));
        assert_eq!(c.classify(&[5.2, 0.0]), None);
    }
}
