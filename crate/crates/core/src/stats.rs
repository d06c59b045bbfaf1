//! Small estimators shared by the Monte Carlo runners.

/// Point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

impl Estimate {
    /// Binomial proportion `successes / trials` with `sqrt(p(1-p)/trials)`.
    pub fn proportion(successes: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self {
                mean: f64::NAN,
                std_err: f64::NAN,
            };
        }
        let p = successes as f64 / trials as f64;
        Self {
            mean: p,
            std_err: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }

    /// `|mean − expected| ≤ k·std_err`.
    pub fn within(&self, expected: f64, k: f64) -> bool {
        (self.mean - expected).abs() <= k * self.std_err
    }
}

/// Mean of a correlated series with a batch-means standard error.
///
/// The series is cut into `batches` contiguous blocks (the remainder at the
/// front is dropped); the error is the spread of block means over
/// `sqrt(batches)`.
pub fn batch_means(series: &[f64], batches: usize) -> Estimate {
    let batches = batches.clamp(2, series.len().max(2));
    let size = series.len() / batches;
    if size == 0 {
        let mean = series.iter().sum::<f64>() / series.len() as f64;
        return Estimate {
            mean,
            std_err: f64::NAN,
        };
    }
    let skip = series.len() - size * batches;
    let means: Vec<f64> = series[skip..]
        .chunks_exact(size)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    let mean = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
    Estimate {
        mean,
        std_err: (var / batches as f64).sqrt(),
    }
}
