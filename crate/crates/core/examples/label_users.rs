//! Labels synthetic users under the 3-, 5- and 7-class schemes.
//!
//! ```text
//! cargo run --example label_users
//! ```

use facetag_privacy::geometry::GeometryConfig;
use facetag_privacy::labeling::{compute_exposure, FiveClassRule, Labels};
use facetag_privacy::synth::{generate, SynthConfig};

fn main() -> facetag_privacy::Result<()> {
    let out = generate(&SynthConfig::default().with_users(12).with_seed(1))?;
    let geo = GeometryConfig::default();
    println!("user\tphotos\tfaces\ttags\t3\t5\t7");
    for user in out.dataset.users() {
        let e = compute_exposure(user, &geo);
        let l = Labels::of(&e, FiveClassRule::PhotoFraction);
        println!(
            "{}\t{}/{}\t{}\t{}\t{}\t{}\t{}",
            user.user_id(),
            e.n_photos,
            e.n_total_photos,
            e.n_faces,
            e.n_tags,
            l.three,
            l.five,
            l.seven
        );
    }
    Ok(())
}
