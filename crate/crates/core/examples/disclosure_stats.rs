//! Attribute disclosure and per-gender exposure totals for a synthetic
//! population.
//!
//! ```text
//! cargo run --example disclosure_stats
//! ```

use facetag_privacy::prep::compute_stats;
use facetag_privacy::synth::{generate, SynthConfig};

fn main() -> facetag_privacy::Result<()> {
    let out = generate(&SynthConfig::default().with_users(200).with_seed(4))?;
    print!("{}", compute_stats(out.dataset.users())?.render());
    Ok(())
}
