//! Maps messy profile values onto canonical ones with the built-in table,
//! then extends the table at runtime.
//!
//! ```text
//! cargo run --example canonicalize_profiles
//! ```

use facetag_privacy::model::Attribute;
use facetag_privacy::prep::CanonTable;

fn main() -> facetag_privacy::Result<()> {
    let mut table = CanonTable::builtin();
    let inputs = [
        (Attribute::Religion, "islam"),
        (Attribute::Religion, " Christian-Catholic "),
        (Attribute::Location, "Boston, MA"),
        (Attribute::Hometown, "Toronto, ON"),
        (Attribute::Education, "Grad"),
        (Attribute::Degree, "PhD"),
        (Attribute::Relationship, "its complicated"),
    ];
    for (attr, raw) in inputs {
        let c = table.canonicalize(attr, raw)?;
        println!("{attr:<14}{raw:<24}-> {} ({:?})", c.value, c.provenance);
    }

    table.add(Attribute::Relationship, "its complicated", "It's complicated")?;
    let c = table.canonicalize(Attribute::Relationship, "ITS COMPLICATED")?;
    println!("after adding a mapping: {} ({:?})", c.value, c.provenance);
    Ok(())
}
