use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Single random percentage split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    train_fraction: f64,
    seed: u64,
}

impl SplitSpec {
    pub const DEFAULT_TRAIN_FRACTION: f64 = 0.66;

    pub fn new(train_fraction: f64, seed: u64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::config(format!(
                "train fraction {train_fraction} must lie strictly between 0 and 1"
            )));
        }
        Ok(SplitSpec {
            train_fraction,
            seed,
        })
    }

    pub fn train_fraction(&self) -> f64 {
        self.train_fraction
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `round(train_fraction * n)`.
    pub fn train_size(&self, n: usize) -> usize {
        (self.train_fraction * n as f64).round() as usize
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: Self::DEFAULT_TRAIN_FRACTION,
            seed: 0,
        }
    }
}

/// Shuffles `0..n` with the seeded generator and cuts it. Both halves are
/// returned in ascending order.
pub fn split_indices(n: usize, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    if n < 2 {
        return Err(Error::Empty(format!("need at least 2 records to split, got {n}")));
    }
    let m = spec.train_size(n);
    if m == 0 || m == n {
        return Err(Error::config(format!(
            "train fraction {} leaves an empty side for {n} records",
            spec.train_fraction
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    order.shuffle(&mut rng);
    let mut train = order[..m].to_vec();
    let mut test = order[m..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn split<T: Clone>(items: &[T], spec: &SplitSpec) -> Result<(Vec<T>, Vec<T>)> {
    let (train, test) = split_indices(items.len(), spec)?;
    Ok((
        train.iter().map(|&i| items[i].clone()).collect(),
        test.iter().map(|&i| items[i].clone()).collect(),
    ))
}
