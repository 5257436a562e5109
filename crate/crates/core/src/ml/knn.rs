use std::collections::BTreeMap;

use super::{check_schema, FeatureValue, FeatureVector, Labeled, Schema};
use crate::error::{Error, Result};
use crate::model::{Category, PrivacyCategory};

/// Per-feature value ranges over the training set, used to scale numeric
/// differences into `[0, 1]`.
fn numeric_ranges(schema: &Schema, train: &[Labeled]) -> Vec<f64> {
    (0..schema.len())
        .map(|f| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for e in train {
                if let FeatureValue::Num(v) = e.x.values()[f] {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            if hi > lo {
                hi - lo
            } else {
                0.0
            }
        })
        .collect()
}

fn attribute_distance(a: &FeatureValue, b: &FeatureValue, range: f64) -> f64 {
    match (a, b) {
        (FeatureValue::Missing, FeatureValue::Missing) => 0.0,
        (FeatureValue::Missing, _) | (_, FeatureValue::Missing) => 1.0,
        (FeatureValue::Num(x), FeatureValue::Num(y)) => {
            if range > 0.0 {
                ((x - y).abs() / range).min(1.0)
            } else {
                0.0
            }
        }
        (FeatureValue::Cat(x), FeatureValue::Cat(y)) if x == y => 0.0,
        _ => 1.0,
    }
}

/// Mean of per-attribute distances. Categorical values differ by 0 or 1;
/// numeric values by their difference over `ranges[i]`, capped at 1; a
/// missing value is at distance 1 from any known value and 0 from another
/// missing value.
pub fn distance(x: &FeatureVector, y: &FeatureVector, ranges: &[f64]) -> f64 {
    let n = x.len();
    let total: f64 = x
        .values()
        .iter()
        .zip(y.values())
        .zip(ranges)
        .map(|((a, b), &r)| attribute_distance(a, b, r))
        .sum();
    total / n as f64
}

/// Stored training set with its numeric ranges.
#[derive(Debug, Clone)]
pub struct KnnModel {
    schema: Schema,
    train: Vec<Labeled>,
    ranges: Vec<f64>,
    k: usize,
}

impl KnnModel {
    pub const DEFAULT_K: usize = 4;

    pub fn new(schema: Schema, train: Vec<Labeled>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("k must be at least 1"));
        }
        if train.len() < k {
            return Err(Error::Empty(format!(
                "k={k} neighbours requested but only {} training records",
                train.len()
            )));
        }
        for e in &train {
            check_schema(&schema, &e.x)?;
        }
        if train.windows(2).any(|w| w[0].y.scheme() != w[1].y.scheme()) {
            return Err(Error::Contract("training labels mix schemes".into()));
        }
        let ranges = numeric_ranges(&schema, &train);
        Ok(KnnModel {
            schema,
            train,
            ranges,
            k,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn ranges(&self) -> &[f64] {
        &self.ranges
    }

    /// Indices and distances of the k nearest training records; equal
    /// distances keep training-set order.
    pub fn neighbours(&self, x: &FeatureVector) -> Result<Vec<(usize, f64)>> {
        self.nearest(x, None)
    }

    fn nearest(&self, x: &FeatureVector, skip: Option<usize>) -> Result<Vec<(usize, f64)>> {
        check_schema(&self.schema, x)?;
        let mut all: Vec<(usize, f64)> = self
            .train
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(i, e)| (i, distance(x, &e.x, &self.ranges)))
            .collect();
        all.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        all.truncate(self.k);
        Ok(all)
    }

    /// Majority vote over the k nearest neighbours. Vote ties go to the
    /// label with the smaller summed distance, then to the more
    /// privacy-preserving category.
    pub fn predict(&self, x: &FeatureVector) -> Result<PrivacyCategory> {
        self.vote(&self.nearest(x, None)?)
    }

    /// Prediction for training record `index` from the other records.
    /// Numeric ranges still cover the whole training set.
    pub fn predict_leave_one_out(&self, index: usize) -> Result<PrivacyCategory> {
        let e = self
            .train
            .get(index)
            .ok_or_else(|| Error::Contract(format!("no training record {index}")))?;
        if self.train.len() <= self.k {
            return Err(Error::Empty(format!(
                "leave-one-out with k={} needs more than {} records",
                self.k,
                self.train.len()
            )));
        }
        self.vote(&self.nearest(&e.x, Some(index))?)
    }

    fn vote(&self, neighbours: &[(usize, f64)]) -> Result<PrivacyCategory> {
        let mut votes: BTreeMap<Category, (usize, f64)> = BTreeMap::new();
        for &(i, d) in neighbours {
            let v = votes.entry(self.train[i].y.category()).or_insert((0, 0.0));
            v.0 += 1;
            v.1 += d;
        }
        let mut best: Option<(Category, usize, f64)> = None;
        for (&c, &(n, sum)) in &votes {
            let better = match best {
                None => true,
                Some((_, bn, bsum)) => n > bn || (n == bn && sum < bsum),
            };
            if better {
                best = Some((c, n, sum));
            }
        }
        let (c, ..) = best.expect("k >= 1 neighbours");
        PrivacyCategory::new(self.train[0].y.scheme(), c)
    }
}

/// One-shot prediction; see [`KnnModel::predict`].
pub fn knn_predict(schema: &Schema, train: &[Labeled], x: &FeatureVector, k: usize) -> Result<PrivacyCategory> {
    KnnModel::new(schema.clone(), train.to_vec(), k)?.predict(x)
}
