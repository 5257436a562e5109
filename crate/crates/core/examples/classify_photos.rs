//! Places a few hand-built photos on the L0..L8 exposure lattice.
//!
//! ```text
//! cargo run --example classify_photos
//! ```

use facetag_privacy::geometry::{classify_photo, tag_on_face, GeometryConfig};
use facetag_privacy::model::{FaceRect, PhotoAnnotation, TagPoint};

fn main() -> facetag_privacy::Result<()> {
    let cfg = GeometryConfig::default();
    let faces = vec![
        FaceRect::new(0.1, 0.1, 0.15, 0.2)?,
        FaceRect::new(0.4, 0.1, 0.15, 0.2)?,
        FaceRect::new(0.7, 0.1, 0.15, 0.2)?,
    ];
    let photos = vec![
        PhotoAnnotation::new("landscape", vec![], vec![])?,
        PhotoAnnotation::new("group, untagged", faces.clone(), vec![])?,
        PhotoAnnotation::new("caption tags", faces.clone(), vec![TagPoint::new(0.2, 0.9)?, TagPoint::new(0.5, 0.9)?])?,
        PhotoAnnotation::new("one face tagged", faces.clone(), vec![TagPoint::new(0.47, 0.2)?])?,
        PhotoAnnotation::new(
            "everyone tagged, plus one",
            faces.clone(),
            vec![
                TagPoint::new(0.17, 0.2)?,
                TagPoint::new(0.47, 0.2)?,
                TagPoint::new(0.77, 0.2)?,
                TagPoint::new(0.5, 0.9)?,
            ],
        )?,
    ];
    for p in &photos {
        let level = classify_photo(p, &cfg);
        println!("{:<28}{}  {}", p.photo_id(), level.code(), level.describe());
    }

    // the tolerance widens each face box by 10% of its size on every side
    let face = FaceRect::new(0.4, 0.4, 0.2, 0.2)?;
    for x in [0.37, 0.39] {
        let t = TagPoint::new(x, 0.5)?;
        println!("tag at x={x}: on face = {}", tag_on_face(&t, &face, &cfg));
    }
    Ok(())
}
