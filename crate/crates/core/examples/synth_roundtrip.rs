//! Generates a dataset file with mixed pixel and fraction geometry, loads
//! it, and shows that the normalized form is stable.
//!
//! ```text
//! cargo run --example synth_roundtrip
//! ```

use facetag_privacy::dataset_file::{ingest_str, serialize, IngestOptions};
use facetag_privacy::prep::CanonTable;
use facetag_privacy::synth::{generate, SynthConfig};

fn main() -> facetag_privacy::Result<()> {
    let out = generate(&SynthConfig::default().with_users(50).with_seed(5))?;
    let raw = out.file.to_json();
    let table = CanonTable::builtin();
    let opts = IngestOptions::default();

    let first = serialize(&ingest_str(&raw, "generated", &opts, &table)?);
    let second = serialize(&ingest_str(&first, "normalized", &opts, &table)?);
    println!("pixel-unit photos in the generated file: {}", raw.matches("\"pixel\"").count());
    println!("pixel-unit photos after normalization:   {}", first.matches("\"pixel\"").count());
    println!("normalized form stable: {}", first == second);
    println!("{} bytes raw, {} bytes normalized", raw.len(), first.len());
    Ok(())
}
