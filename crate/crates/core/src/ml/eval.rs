use std::fmt::Write as _;

use serde::Serialize;

use super::{split_indices, DecisionTree, FeatureVector, KnnModel, Labeled, LabeledUsers, Schema, SplitSpec};
use crate::error::{Error, Result};
use crate::model::{Category, PrivacyCategory, Scheme};

pub trait Classifier {
    fn predict(&self, x: &FeatureVector) -> Result<PrivacyCategory>;
}

impl Classifier for DecisionTree {
    fn predict(&self, x: &FeatureVector) -> Result<PrivacyCategory> {
        DecisionTree::predict(self, x)
    }
}

impl Classifier for KnnModel {
    fn predict(&self, x: &FeatureVector) -> Result<PrivacyCategory> {
        KnnModel::predict(self, x)
    }
}

/// Rows are actual classes, columns predicted, both in scheme order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub categories: Vec<Category>,
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    fn new(scheme: Scheme) -> Self {
        let n = scheme.class_count();
        ConfusionMatrix {
            categories: scheme.categories().to_vec(),
            counts: vec![vec![0; n]; n],
        }
    }

    fn position(&self, c: Category) -> Result<usize> {
        self.categories
            .iter()
            .position(|x| *x == c)
            .ok_or_else(|| Error::Contract(format!("category {c} outside the evaluated scheme")))
    }

    pub fn get(&self, actual: Category, predicted: Category) -> usize {
        match (self.position(actual), self.position(predicted)) {
            (Ok(a), Ok(p)) => self.counts[a][p],
            _ => 0,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.categories {
            let _ = write!(out, "{:>5}", c.symbol());
        }
        out.push_str("   <-- classified as\n");
        for (row, c) in self.counts.iter().zip(&self.categories) {
            for n in row {
                let _ = write!(out, "{n:>5}");
            }
            let _ = writeln!(out, " | {}", c.symbol());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub scheme: Scheme,
    pub total: usize,
    pub correct: usize,
    /// Percentage of correctly classified instances.
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
}

impl EvalReport {
    pub fn render(&self) -> String {
        format!(
            "scheme\t{}-class\ninstances\t{}\ncorrectly classified\t{} ({:.2}%)\n\n{}",
            self.scheme.class_count(),
            self.total,
            self.correct,
            self.accuracy,
            self.confusion.render()
        )
    }
}

pub fn evaluate(model: &dyn Classifier, test: &[Labeled]) -> Result<EvalReport> {
    let first = test
        .first()
        .ok_or_else(|| Error::Empty("cannot evaluate on an empty test set".into()))?;
    let scheme = first.y.scheme();
    let mut confusion = ConfusionMatrix::new(scheme);
    let mut correct = 0;
    for e in test {
        let predicted = model.predict(&e.x)?;
        let a = confusion.position(e.y.category())?;
        let p = confusion.position(predicted.category())?;
        confusion.counts[a][p] += 1;
        if predicted.category() == e.y.category() {
            correct += 1;
        }
    }
    Ok(EvalReport {
        scheme,
        total: test.len(),
        correct,
        accuracy: 100.0 * correct as f64 / test.len() as f64,
        confusion,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetRow {
    pub scheme: Scheme,
    pub features: String,
    pub accuracy: f64,
}

/// KNN accuracy for each feature subset under each labeling scheme, all on
/// one shared split.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetTable {
    pub k: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub rows: Vec<SubsetRow>,
}

pub fn subset_table(
    data: &LabeledUsers<'_>,
    subsets: &[Schema],
    schemes: &[Scheme],
    k: usize,
    spec: &SplitSpec,
) -> Result<SubsetTable> {
    let (train_idx, test_idx) = split_indices(data.users.len(), spec)?;
    let mut rows = Vec::new();
    for &scheme in schemes {
        for schema in subsets {
            let all = data.examples(schema, scheme);
            let train = train_idx.iter().map(|&i| all[i].clone()).collect();
            let test: Vec<Labeled> = test_idx.iter().map(|&i| all[i].clone()).collect();
            let model = KnnModel::new(schema.clone(), train, k)?;
            let report = evaluate(&model, &test)?;
            rows.push(SubsetRow {
                scheme,
                features: schema.to_string(),
                accuracy: report.accuracy,
            });
        }
    }
    Ok(SubsetTable {
        k,
        train_size: train_idx.len(),
        test_size: test_idx.len(),
        rows,
    })
}

impl SubsetTable {
    /// One block per scheme: feature subsets across, accuracy below.
    pub fn render(&self) -> String {
        let mut out = format!(
            "KNN k={} train={} test={}\n",
            self.k, self.train_size, self.test_size
        );
        let mut schemes: Vec<Scheme> = self.rows.iter().map(|r| r.scheme).collect();
        schemes.dedup();
        for scheme in schemes {
            let rows: Vec<&SubsetRow> = self.rows.iter().filter(|r| r.scheme == scheme).collect();
            let _ = writeln!(out, "\n{}-class privacy behaviour", scheme.class_count());
            let _ = write!(out, "{:<32}", "Attribute");
            for r in &rows {
                let _ = write!(out, "\t{}", r.features);
            }
            let _ = write!(out, "\n{:<32}", "Correctly classified instances");
            for r in &rows {
                let _ = write!(out, "\t{:.2}%", r.accuracy);
            }
            out.push('\n');
        }
        out
    }
}
