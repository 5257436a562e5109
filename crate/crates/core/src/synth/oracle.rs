//! Slow, direct restatements of the labeling rules and of KNN, used to
//! cross-check the production code. Nothing here calls into the geometry,
//! labeling or ml modules.

use crate::ml::FeatureValue;
use crate::model::{Category, UserRecord, VisibilitySetting};

/// (3-class, 5-class, 7-class) labels, the 5-class one under the
/// photo-fraction reading.
pub fn oracle_label(user: &UserRecord) -> (Category, Category, Category) {
    let mut total = 0usize;
    let mut visible = 0usize;
    let mut photos = 0usize;
    let mut faces = 0usize;
    let mut tags = 0usize;
    let mut photos_with_faces = 0usize;
    for album in user.albums() {
        let open = matches!(album.setting(), VisibilitySetting::Public | VisibilitySetting::FriendsOfFriends);
        for photo in album.photos() {
            total += 1;
            if open {
                visible += 1;
                photos += 1;
                faces += photo.faces().len();
                tags += photo.tags().len();
                photos_with_faces += usize::from(!photo.faces().is_empty());
            }
        }
    }

    let three = if total == 0 {
        Category::F
    } else if (visible as f64) / (total as f64) < 0.5 {
        Category::P
    } else {
        Category::U
    };

    let five = if photos == 0 {
        Category::F
    } else if photos_with_faces == photos {
        Category::U
    } else if faces == 0 {
        Category::FP
    } else if (photos_with_faces as f64) / (photos as f64) < 0.5 {
        Category::P
    } else {
        Category::PU
    };

    let seven = if photos == 0 {
        Category::F
    } else if faces == 0 && tags == 0 {
        Category::FP
    } else if tags == 0 {
        Category::PPlus
    } else if faces == 0 {
        Category::P
    } else if tags < faces {
        Category::PMinus
    } else if tags == faces {
        Category::PU
    } else {
        Category::U
    };
    (three, five, seven)
}

/// Brute-force KNN over `(features, label)` pairs.
pub fn oracle_knn(train: &[(Vec<FeatureValue>, Category)], x: &[FeatureValue], k: usize) -> Category {
    let width = x.len();
    let mut ranges = vec![0.0; width];
    for (f, range) in ranges.iter_mut().enumerate() {
        let nums: Vec<f64> = train
            .iter()
            .filter_map(|(v, _)| if let FeatureValue::Num(n) = v[f] { Some(n) } else { None })
            .collect();
        if let (Some(lo), Some(hi)) = (
            nums.iter().cloned().reduce(f64::min),
            nums.iter().cloned().reduce(f64::max),
        ) {
            *range = hi - lo;
        }
    }

    let mut scored: Vec<(f64, usize, Category)> = Vec::new();
    for (i, (v, c)) in train.iter().enumerate() {
        let mut sum = 0.0;
        for f in 0..width {
            sum += match (&x[f], &v[f]) {
                (FeatureValue::Missing, FeatureValue::Missing) => 0.0,
                (FeatureValue::Num(a), FeatureValue::Num(b)) => {
                    if ranges[f] == 0.0 {
                        0.0
                    } else {
                        f64::min(1.0, (a - b).abs() / ranges[f])
                    }
                }
                (FeatureValue::Cat(a), FeatureValue::Cat(b)) if a == b => 0.0,
                _ => 1.0,
            };
        }
        scored.push((sum / width as f64, i, *c));
    }
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let mut best = Category::F;
    let mut best_votes = 0;
    let mut best_sum = f64::INFINITY;
    for c in Category::ALL {
        let mine: Vec<f64> = scored[..k].iter().filter(|s| s.2 == c).map(|s| s.0).collect();
        let votes = mine.len();
        let sum: f64 = mine.iter().sum();
        if votes > best_votes || (votes == best_votes && votes > 0 && sum < best_sum) {
            best = c;
            best_votes = votes;
            best_sum = sum;
        }
    }
    best
}
