//! Trains a gain-ratio decision tree with and without the exposure
//! features and evaluates both on a 66/34 split.
//!
//! ```text
//! cargo run --example decision_tree
//! ```

use facetag_privacy::geometry::GeometryConfig;
use facetag_privacy::labeling::FiveClassRule;
use facetag_privacy::ml::{evaluate, split, train_tree, LabeledUsers, Schema, SplitSpec, TreeParams};
use facetag_privacy::model::Scheme;
use facetag_privacy::synth::{generate, SynthConfig};

fn main() -> facetag_privacy::Result<()> {
    let out = generate(&SynthConfig::default().with_users(600).with_seed(8))?;
    let data = LabeledUsers::new(&out.dataset, &GeometryConfig::default(), FiveClassRule::default());
    for schema in [Schema::profile(), Schema::profile().with_exposure()] {
        let examples = data.examples(&schema, Scheme::Seven);
        let (train, test) = split(&examples, &SplitSpec::default())?;
        let tree = train_tree(&schema, &train, TreeParams::default())?;
        println!("features: {schema}\n");
        println!("{}", tree.render());
        println!("{}", evaluate(&tree, &test)?.render());
    }
    Ok(())
}
