//! KNN accuracy per single-attribute feature subset under every labeling
//! scheme, on one shared split.
//!
//! ```text
//! cargo run --example knn_tables
//! ```

use facetag_privacy::geometry::GeometryConfig;
use facetag_privacy::labeling::FiveClassRule;
use facetag_privacy::ml::{subset_table, KnnModel, LabeledUsers, Schema, SplitSpec};
use facetag_privacy::model::Scheme;
use facetag_privacy::synth::{generate, SynthConfig};

fn main() -> facetag_privacy::Result<()> {
    let out = generate(&SynthConfig::default().with_users(400).with_seed(12))?;
    let data = LabeledUsers::new(&out.dataset, &GeometryConfig::default(), FiveClassRule::default());
    let subsets = ["age", "education", "location", "relationship", "age,gender,education"]
        .iter()
        .map(|s| Schema::parse_list(s))
        .collect::<facetag_privacy::Result<Vec<_>>>()?;
    let table = subset_table(&data, &subsets, &Scheme::ALL, KnnModel::DEFAULT_K, &SplitSpec::default())?;
    print!("{}", table.render());
    Ok(())
}
