//! User-level exposure counts and the 3-, 5- and 7-class labeling rules.
//!
//! The 3-class rule looks at album settings over all of a user's photos.
//! The 5- and 7-class rules count faces and tags, which are only observed
//! in Public and Friends-of-Friends albums, so they work on those photos
//! alone. Whether a tag sits on a face does not affect any label.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{classify_photo, GeometryConfig};
use crate::model::{Category, PrivacyCategory, PrivacyLevel, Scheme, UserRecord};

/// Photo, face and tag counts for one user.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UserExposure {
    /// Photos in analysis-eligible albums.
    pub n_photos: usize,
    /// Photos in Public or Friends-of-Friends albums. Same set as
    /// `n_photos`, kept separately because the 3-class rule names it.
    pub n_public_or_fof_photos: usize,
    pub n_total_photos: usize,
    pub n_faces: usize,
    pub n_tags: usize,
    pub n_photos_with_faces: usize,
    /// `None` when there are no eligible photos.
    pub max_level: Option<PrivacyLevel>,
    pub level_histogram: [usize; 9],
}

impl UserExposure {
    /// Checks the count invariants. Used when exposures are built by hand.
    pub fn validate(&self) -> Result<()> {
        if self.n_photos_with_faces > self.n_photos {
            return Err(Error::validation(format!(
                "{} photos with faces exceeds {} photos",
                self.n_photos_with_faces, self.n_photos
            )));
        }
        if self.n_public_or_fof_photos > self.n_total_photos {
            return Err(Error::validation(
                "more public/friends-of-friends photos than photos in total",
            ));
        }
        let hist: usize = self.level_histogram.iter().sum();
        if hist != self.n_photos {
            return Err(Error::validation(format!(
                "level histogram sums to {hist}, expected {}",
                self.n_photos
            )));
        }
        Ok(())
    }

    pub fn count_at(&self, level: PrivacyLevel) -> usize {
        self.level_histogram[level.rank() as usize]
    }
}

pub fn compute_exposure(user: &UserRecord, cfg: &GeometryConfig) -> UserExposure {
    let mut exp = UserExposure::default();
    for album in user.albums() {
        exp.n_total_photos += album.photos().len();
        if !album.is_analysis_eligible() {
            continue;
        }
        for photo in album.photos() {
            exp.n_photos += 1;
            exp.n_public_or_fof_photos += 1;
            exp.n_faces += photo.faces().len();
            exp.n_tags += photo.tags().len();
            if !photo.faces().is_empty() {
                exp.n_photos_with_faces += 1;
            }
            let level = classify_photo(photo, cfg);
            exp.level_histogram[level.rank() as usize] += 1;
            exp.max_level = exp.max_level.max(Some(level));
        }
    }
    exp
}

/// How the 5-class "faces below half of photos" clause is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FiveClassRule {
    /// Fraction of eligible photos that contain at least one face.
    #[default]
    PhotoFraction,
    /// Raw face count against the number of eligible photos.
    RawRatio,
}

impl FromStr for FiveClassRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "photo_fraction" => Ok(FiveClassRule::PhotoFraction),
            "raw_ratio" => Ok(FiveClassRule::RawRatio),
            other => Err(Error::config(format!(
                "unknown five-class rule `{other}` (expected photo_fraction or raw_ratio)"
            ))),
        }
    }
}

fn labeled(scheme: Scheme, category: Category) -> PrivacyCategory {
    PrivacyCategory::new(scheme, category).expect("rule emits categories of its own scheme")
}

/// F without photos, P when fewer than half are public or
/// friends-of-friends, U otherwise.
pub fn label_3class(exp: &UserExposure) -> PrivacyCategory {
    let cat = if exp.n_total_photos == 0 {
        Category::F
    } else if 2 * exp.n_public_or_fof_photos < exp.n_total_photos {
        Category::P
    } else {
        Category::U
    };
    labeled(Scheme::Three, cat)
}

pub fn label_5class(exp: &UserExposure) -> PrivacyCategory {
    label_5class_with(exp, FiveClassRule::default())
}

pub fn label_5class_with(exp: &UserExposure, rule: FiveClassRule) -> PrivacyCategory {
    let cat = if exp.n_photos == 0 {
        Category::F
    } else if exp.n_photos_with_faces == exp.n_photos {
        Category::U
    } else if exp.n_faces == 0 {
        Category::FP
    } else {
        let faces = match rule {
            FiveClassRule::PhotoFraction => exp.n_photos_with_faces,
            FiveClassRule::RawRatio => exp.n_faces,
        };
        if 2 * faces < exp.n_photos {
            Category::P
        } else {
            Category::PU
        }
    };
    labeled(Scheme::Five, cat)
}

pub fn label_7class(exp: &UserExposure) -> PrivacyCategory {
    use std::cmp::Ordering::*;
    let cat = if exp.n_photos == 0 {
        Category::F
    } else {
        match (exp.n_faces, exp.n_tags) {
            (0, 0) => Category::FP,
            (_, 0) => Category::PPlus,
            (0, _) => Category::P,
            (faces, tags) => match tags.cmp(&faces) {
                Less => Category::PMinus,
                Equal => Category::PU,
                Greater => Category::U,
            },
        }
    };
    labeled(Scheme::Seven, cat)
}

pub fn label(exp: &UserExposure, scheme: Scheme, rule: FiveClassRule) -> PrivacyCategory {
    match scheme {
        Scheme::Three => label_3class(exp),
        Scheme::Five => label_5class_with(exp, rule),
        Scheme::Seven => label_7class(exp),
    }
}

/// One user's labels under all three schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Labels {
    pub three: PrivacyCategory,
    pub five: PrivacyCategory,
    pub seven: PrivacyCategory,
}

impl Labels {
    pub fn of(exp: &UserExposure, rule: FiveClassRule) -> Self {
        Labels {
            three: label_3class(exp),
            five: label_5class_with(exp, rule),
            seven: label_7class(exp),
        }
    }

    pub fn get(&self, scheme: Scheme) -> PrivacyCategory {
        match scheme {
            Scheme::Three => self.three,
            Scheme::Five => self.five,
            Scheme::Seven => self.seven,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Album, FaceRect, PhotoAnnotation, TagPoint, UserProfile, VisibilitySetting};
    use proptest::prelude::*;

    fn exposure(n_photos: usize, with_faces: usize, faces: usize, tags: usize) -> UserExposure {
        UserExposure {
            n_photos,
            n_public_or_fof_photos: n_photos,
            n_total_photos: n_photos,
            n_faces: faces,
            n_tags: tags,
            n_photos_with_faces: with_faces,
            ..Default::default()
        }
    }

    fn user(albums: Vec<Album>) -> UserRecord {
        UserRecord::new("u", UserProfile::new(), albums).unwrap()
    }

    #[test]
    fn empty_user_has_zero_exposure() {
        let exp = compute_exposure(&user(vec![]), &GeometryConfig::default());
        assert_eq!(exp, UserExposure::default());
        assert_eq!(label_3class(&exp).category(), Category::F);
        assert_eq!(label_5class(&exp).category(), Category::F);
        assert_eq!(label_7class(&exp).category(), Category::F);
    }

    #[test]
    fn public_album_levels() {
        let faces = vec![
            FaceRect::new(0.1, 0.1, 0.1, 0.1).unwrap(),
            FaceRect::new(0.4, 0.1, 0.1, 0.1).unwrap(),
            FaceRect::new(0.7, 0.1, 0.1, 0.1).unwrap(),
        ];
        let l1 = PhotoAnnotation::new("p1", faces.clone(), vec![]).unwrap();
        let l3 = PhotoAnnotation::new("p2", faces, vec![TagPoint::new(0.5, 0.9).unwrap()]).unwrap();
        let album = Album::new("a", "pub", VisibilitySetting::Public, vec![l1, l3]).unwrap();
        let exp = compute_exposure(&user(vec![album]), &GeometryConfig::default());
        exp.validate().unwrap();
        assert_eq!(exp.n_photos, 2);
        assert_eq!(exp.n_faces, 6);
        assert_eq!(exp.n_tags, 1);
        assert_eq!(exp.n_photos_with_faces, 2);
        assert_eq!(exp.max_level, Some(PrivacyLevel::L3OffFaceTagsLtFaces));
        assert_eq!(exp.count_at(PrivacyLevel::L1FaceNoTag), 1);
    }

    #[test]
    fn only_me_photos_are_not_eligible() {
        let photos = (0..5)
            .map(|i| PhotoAnnotation::new(format!("p{i}"), vec![], vec![]).unwrap())
            .collect();
        let album = Album::new("a", "mine", VisibilitySetting::OnlyMe, photos).unwrap();
        let exp = compute_exposure(&user(vec![album]), &GeometryConfig::default());
        assert_eq!(exp.n_photos, 0);
        assert_eq!(exp.n_total_photos, 5);
        assert_eq!(exp.max_level, None);
        // photos exist but none are visible to strangers
        assert_eq!(label_3class(&exp).category(), Category::P);
        assert_eq!(label_7class(&exp).category(), Category::F);
    }

    #[test]
    fn three_class_examples() {
        let mut e = exposure(0, 0, 0, 0);
        assert_eq!(label_3class(&e).category(), Category::F);
        e.n_total_photos = 10;
        e.n_public_or_fof_photos = 3;
        assert_eq!(label_3class(&e).category(), Category::P);
        e.n_public_or_fof_photos = 5;
        assert_eq!(label_3class(&e).category(), Category::U);
        e.n_public_or_fof_photos = 10;
        assert_eq!(label_3class(&e).category(), Category::U);
    }

    #[test]
    fn five_class_examples() {
        assert_eq!(label_5class(&exposure(0, 0, 0, 0)).category(), Category::F);
        assert_eq!(label_5class(&exposure(4, 4, 9, 0)).category(), Category::U);
        assert_eq!(label_5class(&exposure(10, 0, 0, 0)).category(), Category::FP);
        assert_eq!(label_5class(&exposure(10, 3, 3, 0)).category(), Category::P);
        assert_eq!(label_5class(&exposure(10, 5, 5, 0)).category(), Category::PU);
    }

    #[test]
    fn five_class_rule_readings_diverge() {
        // 3 of 10 photos have faces, but they hold 8 faces between them
        let e = exposure(10, 3, 8, 0);
        assert_eq!(label_5class_with(&e, FiveClassRule::PhotoFraction).category(), Category::P);
        assert_eq!(label_5class_with(&e, FiveClassRule::RawRatio).category(), Category::PU);
        assert_eq!("raw_ratio".parse::<FiveClassRule>().unwrap(), FiveClassRule::RawRatio);
        assert!("other".parse::<FiveClassRule>().is_err());
    }

    #[test]
    fn seven_class_examples() {
        assert_eq!(label_7class(&exposure(2, 2, 5, 0)).category(), Category::PPlus);
        assert_eq!(label_7class(&exposure(2, 2, 5, 5)).category(), Category::PU);
        assert_eq!(label_7class(&exposure(2, 1, 2, 3)).category(), Category::U);
        assert_eq!(label_7class(&exposure(3, 0, 0, 0)).category(), Category::FP);
        assert_eq!(label_7class(&exposure(3, 0, 0, 2)).category(), Category::P);
        assert_eq!(label_7class(&exposure(3, 2, 4, 1)).category(), Category::PMinus);
    }

    #[test]
    fn labels_carry_their_scheme() {
        let l = Labels::of(&exposure(3, 2, 4, 1), FiveClassRule::default());
        assert_eq!(l.get(Scheme::Three).scheme(), Scheme::Three);
        assert_eq!(l.get(Scheme::Five).scheme(), Scheme::Five);
        assert_eq!(l.get(Scheme::Seven).scheme(), Scheme::Seven);
    }

    prop_compose! {
        fn arb_exposure()(n_photos in 0usize..20)
            (with_faces in 0..=n_photos, n_photos in Just(n_photos), tags in 0usize..30, extra in 0usize..30)
            -> UserExposure {
            exposure(n_photos, with_faces, with_faces + if with_faces > 0 { extra } else { 0 }, if n_photos > 0 { tags } else { 0 })
        }
    }

    proptest! {
        #[test]
        fn f_agrees_across_five_and_seven(e in arb_exposure()) {
            let five_f = label_5class(&e).category() == Category::F;
            let seven_f = label_7class(&e).category() == Category::F;
            prop_assert_eq!(five_f, seven_f);
            prop_assert_eq!(seven_f, e.n_photos == 0);
        }

        #[test]
        fn more_tags_never_more_private(faces in 1usize..30, tags in 0usize..30, more in 1usize..10) {
            let lo = label_7class(&exposure(3, 1, faces, tags)).category();
            let hi = label_7class(&exposure(3, 1, faces, tags + more)).category();
            prop_assert!(hi >= lo);
        }
    }
}
