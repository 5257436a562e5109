//! Builds a privacy report with setting recommendations for the first few
//! users who expose more than their profile predicts.
//!
//! ```text
//! cargo run --example recommend_report
//! ```

use facetag_privacy::recommend::{build_reports, reports_to_csv, Action, PipelineConfig};
use facetag_privacy::synth::{generate, SynthConfig};

fn main() -> facetag_privacy::Result<()> {
    let out = generate(&SynthConfig::default().with_users(200).with_seed(21))?;
    let reports = build_reports(&out.dataset, &PipelineConfig::default())?;
    let flagged: Vec<_> = reports
        .iter()
        .filter(|r| r.recommendation.action == Action::Tighten)
        .collect();
    println!("{} of {} users get stricter settings suggested\n", flagged.len(), reports.len());
    if let Some(r) = flagged.first() {
        print!("{}", r.render());
    }
    println!();
    print!("{}", reports_to_csv(&reports[..5])?);
    Ok(())
}
