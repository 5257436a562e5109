//! Feature extraction, train/test splitting, a C4.5-style decision tree,
//! k-nearest-neighbour prediction and accuracy evaluation.

mod eval;
mod knn;
mod split;
mod tree;

pub use eval::{evaluate, subset_table, Classifier, ConfusionMatrix, EvalReport, SubsetRow, SubsetTable};
pub use knn::{distance, knn_predict, KnnModel};
pub use split::{split, split_indices, SplitSpec};
pub use tree::{best_split, entropy, train_tree, DecisionTree, Node, SplitScore, TreeParams};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::GeometryConfig;
use crate::labeling::{compute_exposure, label, FiveClassRule, UserExposure};
use crate::model::{Attribute, Dataset, PrivacyCategory, Scheme, UserRecord};

/// One input column of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Profile(Attribute),
    /// Faces in eligible photos.
    Faces,
    /// Tags in eligible photos.
    Tags,
    /// Number of eligible photos.
    Photos,
}

impl Feature {
    pub fn name(self) -> &'static str {
        match self {
            Feature::Profile(a) => a.name(),
            Feature::Faces => "n_faces",
            Feature::Tags => "n_tags",
            Feature::Photos => "n_photos",
        }
    }

    pub fn is_numeric(self) -> bool {
        !matches!(self, Feature::Profile(a) if a != Attribute::Age)
    }

    fn extract(self, user: &UserRecord, exposure: &UserExposure) -> FeatureValue {
        match self {
            Feature::Profile(Attribute::Age) => match user.profile().age() {
                Some(a) => FeatureValue::Num(f64::from(a)),
                None => FeatureValue::Missing,
            },
            Feature::Profile(a) => match user.profile().get(a).as_known() {
                Some(v) => FeatureValue::Cat(v.to_string()),
                None => FeatureValue::Missing,
            },
            Feature::Faces => FeatureValue::Num(exposure.n_faces as f64),
            Feature::Tags => FeatureValue::Num(exposure.n_tags as f64),
            Feature::Photos => FeatureValue::Num(exposure.n_photos as f64),
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "n_faces" | "faces" => Ok(Feature::Faces),
            "n_tags" | "tags" => Ok(Feature::Tags),
            "n_photos" | "photos" => Ok(Feature::Photos),
            other => other.parse().map(Feature::Profile),
        }
    }
}

/// Ordered feature list shared by every vector of a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    features: Vec<Feature>,
}

impl Schema {
    pub fn new(features: Vec<Feature>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::config("a schema needs at least one feature"));
        }
        for (i, f) in features.iter().enumerate() {
            if features[..i].contains(f) {
                return Err(Error::config(format!("feature {f} listed twice")));
            }
        }
        Ok(Schema { features })
    }

    /// The nine self-reported profile attributes.
    pub fn profile() -> Self {
        Schema {
            features: Attribute::ALL.iter().map(|&a| Feature::Profile(a)).collect(),
        }
    }

    /// This schema with faces, tags and photo counts appended.
    pub fn with_exposure(mut self) -> Self {
        for f in [Feature::Faces, Feature::Tags, Feature::Photos] {
            if !self.features.contains(&f) {
                self.features.push(f);
            }
        }
        self
    }

    /// Parses a comma-separated feature list.
    pub fn parse_list(list: &str) -> Result<Self> {
        let features = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Schema::new(features)
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn extract(&self, user: &UserRecord, exposure: &UserExposure) -> FeatureVector {
        FeatureVector {
            values: self.features.iter().map(|f| f.extract(user, exposure)).collect(),
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.features.iter().map(|x| x.name()).collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FeatureValue {
    Missing,
    Num(f64),
    Cat(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    values: Vec<FeatureValue>,
}

impl FeatureVector {
    pub fn new(values: Vec<FeatureValue>) -> Self {
        FeatureVector { values }
    }

    pub fn values(&self) -> &[FeatureValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A feature vector with its known category.
#[derive(Debug, Clone, PartialEq)]
pub struct Labeled {
    pub x: FeatureVector,
    pub y: PrivacyCategory,
}

/// Per-user exposure and labels, computed once and reused for every schema.
#[derive(Debug, Clone)]
pub struct LabeledUsers<'a> {
    pub users: &'a [UserRecord],
    pub exposures: Vec<UserExposure>,
    pub labels: Vec<[PrivacyCategory; 3]>,
}

impl<'a> LabeledUsers<'a> {
    pub fn new(dataset: &'a Dataset, geometry: &GeometryConfig, rule: FiveClassRule) -> Self {
        let users = dataset.users();
        let exposures: Vec<UserExposure> = users.iter().map(|u| compute_exposure(u, geometry)).collect();
        let labels = exposures
            .iter()
            .map(|e| Scheme::ALL.map(|s| label(e, s, rule)))
            .collect();
        LabeledUsers {
            users,
            exposures,
            labels,
        }
    }

    pub fn label(&self, index: usize, scheme: Scheme) -> PrivacyCategory {
        let pos = Scheme::ALL.iter().position(|s| *s == scheme).expect("known scheme");
        self.labels[index][pos]
    }

    pub fn examples(&self, schema: &Schema, scheme: Scheme) -> Vec<Labeled> {
        (0..self.users.len())
            .map(|i| Labeled {
                x: schema.extract(&self.users[i], &self.exposures[i]),
                y: self.label(i, scheme),
            })
            .collect()
    }
}

pub(crate) fn check_schema(schema: &Schema, x: &FeatureVector) -> Result<()> {
    if x.len() != schema.len() {
        return Err(Error::Contract(format!(
            "feature vector has {} values, schema has {}",
            x.len(),
            schema.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttrValue, UserProfile};

    #[test]
    fn schema_parsing() {
        let s = Schema::parse_list("education,location,n_faces").unwrap();
        assert_eq!(
            s.features(),
            &[
                Feature::Profile(Attribute::Education),
                Feature::Profile(Attribute::Location),
                Feature::Faces
            ]
        );
        assert!(Schema::parse_list("").is_err());
        assert!(Schema::parse_list("education,education").is_err());
        assert!(Schema::parse_list("shoe_size").is_err());
        assert_eq!(Schema::profile().with_exposure().len(), 12);
    }

    #[test]
    fn extraction_marks_missing() {
        let p = UserProfile::new()
            .with_age(Some(40))
            .unwrap()
            .with(Attribute::Education, AttrValue::known("Graduate").unwrap());
        let u = UserRecord::new("u", p, vec![]).unwrap();
        let x = Schema::parse_list("age,education,degree,n_tags")
            .unwrap()
            .extract(&u, &UserExposure::default());
        assert_eq!(
            x.values(),
            &[
                FeatureValue::Num(40.0),
                FeatureValue::Cat("Graduate".into()),
                FeatureValue::Missing,
                FeatureValue::Num(0.0)
            ]
        );
        assert!(Feature::Profile(Attribute::Age).is_numeric());
        assert!(!Feature::Profile(Attribute::Degree).is_numeric());
    }
}
