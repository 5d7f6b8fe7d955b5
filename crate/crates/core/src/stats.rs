//! Small statistics helpers: numerically stable moments, rank
//! correlation and isotonic (monotone) regression.

use alloc::vec::Vec;

use crate::math;

/// One-pass mean/variance accumulator (Welford update).
#[derive(Clone, Copy, Debug, Default)]
pub struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn sample_variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Population variance; zero for an empty accumulator.
    pub fn population_variance(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.m2 / self.n as f64
        }
    }

    /// Standard error of the mean; zero for fewer than two samples.
    pub fn sem(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            math::sqrt(self.sample_variance() / self.n as f64)
        }
    }
}

/// Ranks with ties assigned their average rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("non-finite value"));
    let mut ranks = alloc::vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation of two paired samples.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    pearson(&rx, &ry)
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / math::sqrt(sxx * syy)
}

/// Weighted isotonic regression (nondecreasing) by pool-adjacent-violators.
pub fn isotonic_nondecreasing(ys: &[f64], ws: &[f64]) -> Vec<f64> {
    assert_eq!(ys.len(), ws.len());
    // (mean, weight, count) blocks
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(ys.len());
    for (&y, &w) in ys.iter().zip(ws) {
        blocks.push((y, w, 1));
        while blocks.len() >= 2 {
            let last = blocks[blocks.len() - 1];
            let prev = blocks[blocks.len() - 2];
            if prev.0 <= last.0 {
                break;
            }
            let w_sum = prev.1 + last.1;
            let merged = (
                (prev.0 * prev.1 + last.0 * last.1) / w_sum,
                w_sum,
                prev.2 + last.2,
            );
            blocks.pop();
            blocks.pop();
            blocks.push(merged);
        }
    }
    let mut out = Vec::with_capacity(ys.len());
    for (mean, _, count) in blocks {
        for _ in 0..count {
            out.push(mean);
        }
    }
    out
}

/// Isotonic regression constrained to be nonincreasing.
pub fn isotonic_nonincreasing(ys: &[f64], ws: &[f64]) -> Vec<f64> {
    let negated: Vec<f64> = ys.iter().map(|y| -y).collect();
    isotonic_nondecreasing(&negated, ws)
        .into_iter()
        .map(|y| -y)
        .collect()
}
