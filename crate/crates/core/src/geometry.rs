//! Tag-on-face tests and the per-photo privacy level.

use crate::error::{Error, Result};
use crate::model::{FaceRect, PhotoAnnotation, PrivacyLevel, TagPoint};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    epsilon: f64,
}

impl GeometryConfig {
    pub const DEFAULT_EPSILON: f64 = 0.10;
    pub const MAX_EPSILON: f64 = 0.5;

    /// `epsilon` is the fraction of each face's width (height) added on the
    /// left and right (top and bottom) before testing containment.
    pub fn new(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || !(0.0..=Self::MAX_EPSILON).contains(&epsilon) {
            return Err(Error::config(format!(
                "epsilon {epsilon} out of range [0,{}]",
                Self::MAX_EPSILON
            )));
        }
        Ok(GeometryConfig { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            epsilon: Self::DEFAULT_EPSILON,
        }
    }
}

/// Closed containment of the tag in the face expanded by epsilon, with the
/// expansion clipped to the image.
pub fn tag_on_face(tag: &TagPoint, face: &FaceRect, cfg: &GeometryConfig) -> bool {
    let dx = cfg.epsilon * face.width();
    let dy = cfg.epsilon * face.height();
    let left = (face.x() - dx).max(0.0);
    let right = (face.x() + face.width() + dx).min(1.0);
    let top = (face.y() - dy).max(0.0);
    let bottom = (face.y() + face.height() + dy).min(1.0);
    (left..=right).contains(&tag.x()) && (top..=bottom).contains(&tag.y())
}

/// Whether any tag of the photo falls on any of its faces.
///
/// Only meaningful when the photo has both faces and tags; callers branch on
/// the counts first.
pub fn photo_on_face(photo: &PhotoAnnotation, cfg: &GeometryConfig) -> Result<bool> {
    if photo.faces().is_empty() || photo.tags().is_empty() {
        return Err(Error::Contract(format!(
            "photo {} needs at least one face and one tag ({} faces, {} tags)",
            photo.photo_id(),
            photo.faces().len(),
            photo.tags().len()
        )));
    }
    Ok(photo
        .tags()
        .iter()
        .any(|t| photo.faces().iter().any(|f| tag_on_face(t, f, cfg))))
}

/// Places the photo on the L0..L8 exposure lattice. A single on-face tag
/// puts the photo in the on-face branch.
pub fn classify_photo(photo: &PhotoAnnotation, cfg: &GeometryConfig) -> PrivacyLevel {
    use PrivacyLevel::*;
    let faces = photo.faces().len();
    let tags = photo.tags().len();
    match (faces, tags) {
        (0, 0) => L0NoFaceNoTag,
        (_, 0) => L1FaceNoTag,
        (0, _) => L2TagNoFace,
        _ => {
            let on_face = photo_on_face(photo, cfg).expect("counts checked above");
            match (on_face, tags.cmp(&faces)) {
                (false, Ordering::Less) => L3OffFaceTagsLtFaces,
                (false, Ordering::Equal) => L4OffFaceTagsEqFaces,
                (false, Ordering::Greater) => L5OffFaceTagsGtFaces,
                (true, Ordering::Less) => L6OnFaceTagsLtFaces,
                (true, Ordering::Equal) => L7OnFaceTagsEqFaces,
                (true, Ordering::Greater) => L8OnFaceTagsGtFaces,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn face(x: f64, y: f64, w: f64, h: f64) -> FaceRect {
        FaceRect::new(x, y, w, h).unwrap()
    }

    fn tag(x: f64, y: f64) -> TagPoint {
        TagPoint::new(x, y).unwrap()
    }

    fn photo(faces: Vec<FaceRect>, tags: Vec<TagPoint>) -> PhotoAnnotation {
        PhotoAnnotation::new("p", faces, tags).unwrap()
    }

    // three faces in a row across the top half
    fn three_faces() -> Vec<FaceRect> {
        vec![
            face(0.1, 0.1, 0.15, 0.2),
            face(0.4, 0.1, 0.15, 0.2),
            face(0.7, 0.1, 0.15, 0.2),
        ]
    }

    #[test]
    fn epsilon_bounds() {
        assert!(GeometryConfig::new(0.0).is_ok());
        assert!(GeometryConfig::new(0.5).is_ok());
        assert!(GeometryConfig::new(0.51).is_err());
        assert!(GeometryConfig::new(-0.01).is_err());
        assert_eq!(GeometryConfig::default().epsilon(), 0.10);
    }

    #[test]
    fn tag_on_face_examples() {
        let cfg = GeometryConfig::default();
        let f = face(0.4, 0.4, 0.2, 0.2);
        assert!(tag_on_face(&tag(0.5, 0.5), &f, &cfg));
        assert!(!tag_on_face(&tag(0.05, 0.05), &face(0.6, 0.6, 0.2, 0.2), &cfg));
        // expanded left edge is 0.4 - 0.1 * 0.2 = 0.38
        assert!(tag_on_face(&tag(0.39, 0.5), &f, &cfg));
        assert!(!tag_on_face(&tag(0.37, 0.5), &f, &cfg));
        let exact = GeometryConfig::new(0.0).unwrap();
        assert!(!tag_on_face(&tag(0.39, 0.5), &f, &exact));
    }

    #[test]
    fn expansion_is_clipped_to_image() {
        let cfg = GeometryConfig::new(0.5).unwrap();
        let f = face(0.0, 0.0, 0.2, 0.2);
        assert!(tag_on_face(&tag(0.0, 0.0), &f, &cfg));
        assert!(tag_on_face(&tag(0.3, 0.3), &f, &cfg));
        assert!(!tag_on_face(&tag(0.31, 0.1), &f, &cfg));
    }

    #[test]
    fn photo_on_face_examples() {
        let cfg = GeometryConfig::default();
        // three faces, one tag on the middle face
        let p = photo(three_faces(), vec![tag(0.47, 0.2)]);
        assert!(photo_on_face(&p, &cfg).unwrap());
        // three faces, three tags along the bottom
        let p = photo(three_faces(), vec![tag(0.1, 0.9), tag(0.5, 0.9), tag(0.8, 0.9)]);
        assert!(!photo_on_face(&p, &cfg).unwrap());
        // one face, one tag on it and one off it
        let p = photo(vec![face(0.4, 0.4, 0.2, 0.2)], vec![tag(0.5, 0.5), tag(0.9, 0.9)]);
        let pairs: Vec<bool> = p
            .tags()
            .iter()
            .flat_map(|t| p.faces().iter().map(move |f| tag_on_face(t, f, &cfg)))
            .collect();
        assert_eq!(pairs, vec![true, false]);
        assert!(photo_on_face(&p, &cfg).unwrap());
    }

    #[test]
    fn photo_on_face_requires_faces_and_tags() {
        let cfg = GeometryConfig::default();
        assert!(matches!(
            photo_on_face(&photo(three_faces(), vec![]), &cfg),
            Err(Error::Contract(_))
        ));
        assert!(photo_on_face(&photo(vec![], vec![tag(0.5, 0.5)]), &cfg).is_err());
    }

    #[test]
    fn classify_examples() {
        use PrivacyLevel::*;
        let cfg = GeometryConfig::default();
        assert_eq!(classify_photo(&photo(vec![], vec![]), &cfg), L0NoFaceNoTag);
        assert_eq!(classify_photo(&photo(three_faces(), vec![]), &cfg), L1FaceNoTag);
        assert_eq!(
            classify_photo(&photo(vec![], vec![tag(0.2, 0.2), tag(0.3, 0.3)]), &cfg),
            L2TagNoFace
        );
        assert_eq!(
            classify_photo(&photo(three_faces(), vec![tag(0.5, 0.9)]), &cfg),
            L3OffFaceTagsLtFaces
        );
        let off3 = vec![tag(0.1, 0.9), tag(0.5, 0.9), tag(0.8, 0.9)];
        assert_eq!(classify_photo(&photo(three_faces(), off3.clone()), &cfg), L4OffFaceTagsEqFaces);
        let mut off4 = off3.clone();
        off4.push(tag(0.9, 0.95));
        assert_eq!(classify_photo(&photo(three_faces(), off4), &cfg), L5OffFaceTagsGtFaces);
        assert_eq!(
            classify_photo(&photo(three_faces(), vec![tag(0.47, 0.2)]), &cfg),
            L6OnFaceTagsLtFaces
        );
        let on3 = vec![tag(0.17, 0.2), tag(0.47, 0.2), tag(0.77, 0.2)];
        assert_eq!(classify_photo(&photo(three_faces(), on3.clone()), &cfg), L7OnFaceTagsEqFaces);
        let mut on4 = on3;
        on4.push(tag(0.5, 0.9));
        assert_eq!(classify_photo(&photo(three_faces(), on4), &cfg), L8OnFaceTagsGtFaces);
    }

    #[test]
    fn duplicate_tags_count_separately() {
        let cfg = GeometryConfig::default();
        let f = vec![face(0.4, 0.4, 0.2, 0.2)];
        let p = photo(f, vec![tag(0.5, 0.5), tag(0.5, 0.5)]);
        assert_eq!(classify_photo(&p, &cfg), PrivacyLevel::L8OnFaceTagsGtFaces);
    }

    fn arb_face() -> impl Strategy<Value = FaceRect> {
        (0.0..0.9f64, 0.0..0.9f64, 0.01..0.1f64, 0.01..0.1f64)
            .prop_map(|(x, y, w, h)| FaceRect::new(x, y, w, h).unwrap())
    }

    fn arb_tag() -> impl Strategy<Value = TagPoint> {
        (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(x, y)| TagPoint::new(x, y).unwrap())
    }

    proptest! {
        #[test]
        fn zero_epsilon_is_exact_containment(t in arb_tag(), f in arb_face()) {
            let cfg = GeometryConfig::new(0.0).unwrap();
            let inside = t.x() >= f.x() && t.x() <= f.x() + f.width()
                && t.y() >= f.y() && t.y() <= f.y() + f.height();
            prop_assert_eq!(tag_on_face(&t, &f, &cfg), inside);
        }

        #[test]
        fn adding_a_tag_never_lowers_the_level(
            faces in prop::collection::vec(arb_face(), 0..5),
            tags in prop::collection::vec(arb_tag(), 0..5),
            extra in arb_tag(),
        ) {
            let cfg = GeometryConfig::default();
            let p = photo(faces, tags);
            prop_assert!(classify_photo(&p.with_tag(extra), &cfg) >= classify_photo(&p, &cfg));
        }

        #[test]
        fn level_ignores_list_order(
            faces in prop::collection::vec(arb_face(), 0..5),
            tags in prop::collection::vec(arb_tag(), 0..5),
        ) {
            let cfg = GeometryConfig::default();
            let forward = classify_photo(&photo(faces.clone(), tags.clone()), &cfg);
            let mut rf = faces;
            let mut rt = tags;
            rf.reverse();
            let shift = rt.len().min(1);
            rt.rotate_left(shift);
            prop_assert_eq!(forward, classify_photo(&photo(rf, rt), &cfg));
        }
    }
}
