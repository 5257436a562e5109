//! Seeded synthetic datasets with a known 7-class category per user.
//!
//! Users are built backwards from the labeling rules: the intended
//! category fixes the face and tag totals over Public and
//! Friends-of-Friends photos, which are then spread over photos. Faces sit
//! in the upper part of the image and off-face tags in a band at the bottom,
//! so on-face placement is never accidental.

pub mod oracle;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset_file::{
    AlbumDoc, DatasetFile, IngestOptions, InterestsDoc, PhotoDoc, ProfileDoc, RectDoc, TagDoc, Units, UserDoc,
    SCHEMA_VERSION,
};
use crate::error::{Error, Result};
use crate::model::{Attribute, Category, Dataset, VisibilitySetting};
use crate::prep::CanonTable;

const MIX_TOLERANCE: f64 = 1e-9;
/// Lowest image row a face may reach.
const FACE_BAND_BOTTOM: f64 = 0.7;
/// Off-face tags are drawn with `y` in this band.
const TAG_BAND: (f64, f64) = (0.85, 0.98);

/// Category proportions: fixed shares plus a remainder spread evenly over
/// the listed categories.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryMix {
    fixed: Vec<(Category, f64)>,
    remainder: Vec<Category>,
}

impl CategoryMix {
    pub fn new(fixed: Vec<(Category, f64)>, remainder: Vec<Category>) -> Result<Self> {
        for &(c, p) in &fixed {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("share {p} for {c} outside [0,1]")));
            }
            if remainder.contains(&c) {
                return Err(Error::config(format!("{c} is both fixed and in the remainder")));
            }
        }
        let mix = CategoryMix { fixed, remainder };
        let rest = mix.rest();
        if rest < -MIX_TOLERANCE {
            return Err(Error::config(format!("fixed shares sum to {} > 1", 1.0 - rest)));
        }
        if mix.remainder.is_empty() && rest.abs() > MIX_TOLERANCE {
            return Err(Error::config(format!("shares sum to {}, expected 1", 1.0 - rest)));
        }
        Ok(mix)
    }

    fn rest(&self) -> f64 {
        1.0 - self.fixed.iter().map(|(_, p)| p).sum::<f64>()
    }

    pub fn shares(&self) -> BTreeMap<Category, f64> {
        let mut out: BTreeMap<Category, f64> = BTreeMap::new();
        for &(c, p) in &self.fixed {
            *out.entry(c).or_default() += p;
        }
        if !self.remainder.is_empty() {
            let each = self.rest().max(0.0) / self.remainder.len() as f64;
            for &c in &self.remainder {
                *out.entry(c).or_default() += each;
            }
        }
        out
    }

    /// Exact per-category counts by the largest-remainder method; ties go to
    /// the earlier category.
    pub fn counts(&self, n: usize) -> BTreeMap<Category, usize> {
        let shares = self.shares();
        let mut counts: BTreeMap<Category, usize> = BTreeMap::new();
        let mut fractions = Vec::new();
        for (&c, &p) in &shares {
            let exact = p * n as f64;
            let floor = exact.floor() as usize;
            counts.insert(c, floor);
            fractions.push((c, exact - floor as f64));
        }
        let assigned: usize = counts.values().sum();
        fractions.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        for (c, _) in fractions.into_iter().take(n.saturating_sub(assigned)) {
            *counts.get_mut(&c).expect("present") += 1;
        }
        counts
    }
}

impl Default for CategoryMix {
    fn default() -> Self {
        CategoryMix {
            fixed: vec![
                (Category::PPlus, 0.32),
                (Category::FP, 0.24),
                (Category::F, 0.15),
                (Category::U, 0.04),
            ],
            remainder: vec![Category::P, Category::PMinus, Category::PU],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_users: usize,
    pub mix: CategoryMix,
    /// Photos in Public or Friends-of-Friends albums, drawn from
    /// `1..=max_eligible_photos` for users who have any.
    pub max_eligible_photos: usize,
    pub max_total_faces: usize,
    pub max_total_tags: usize,
    /// Chance that a tag on a photo with faces is placed on one of them.
    pub on_face_probability: f64,
    /// Chance that a user with photos also has a more restricted album.
    pub restricted_album_probability: f64,
    /// Chance that a photo is written with pixel geometry.
    pub pixel_units_probability: f64,
    /// Chance that a raw spelling variant is written instead of the
    /// canonical value.
    pub variant_probability: f64,
    pub missing: BTreeMap<Attribute, f64>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        let missing = [
            (Attribute::Degree, 0.94),
            (Attribute::PoliticalView, 0.77),
            (Attribute::Religion, 0.65),
            (Attribute::Relationship, 0.41),
            (Attribute::Hometown, 0.23),
            (Attribute::Education, 0.21),
            (Attribute::Location, 0.20),
            (Attribute::Gender, 0.0),
            (Attribute::Age, 0.0),
        ]
        .into_iter()
        .collect();
        SynthConfig {
            seed: 0,
            n_users: 200,
            mix: CategoryMix::default(),
            max_eligible_photos: 4,
            max_total_faces: 2,
            max_total_tags: 3,
            on_face_probability: 0.5,
            restricted_album_probability: 0.3,
            pixel_units_probability: 0.3,
            variant_probability: 0.2,
            missing,
        }
    }
}

impl SynthConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_users(mut self, n_users: usize) -> Self {
        self.n_users = n_users;
        self
    }

    fn validate(&self) -> Result<()> {
        let probs = [
            ("on_face_probability", self.on_face_probability),
            ("restricted_album_probability", self.restricted_album_probability),
            ("pixel_units_probability", self.pixel_units_probability),
            ("variant_probability", self.variant_probability),
        ];
        for (name, p) in probs.into_iter().chain(self.missing.values().map(|&p| ("missing", p))) {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("{name} {p} outside [0,1]")));
            }
        }
        let max_photos = IngestOptions::DEFAULT_MAX_PHOTOS * (IngestOptions::DEFAULT_MAX_ALBUMS - 1);
        if self.max_eligible_photos == 0 || self.max_eligible_photos > max_photos {
            return Err(Error::config(format!("max_eligible_photos must be in 1..={max_photos}")));
        }
        if self.max_total_faces < 2 || self.max_total_tags <= self.max_total_faces.min(2) {
            return Err(Error::config(
                "need max_total_faces >= 2 and max_total_tags > 2 to realise every category",
            ));
        }
        Ok(())
    }
}

/// A generated dataset, its file form and the category each user was
/// built for, in user order.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub file: DatasetFile,
    pub dataset: Dataset,
    pub intended: Vec<Category>,
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthOutput> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut intended: Vec<Category> = cfg
        .mix
        .counts(cfg.n_users)
        .into_iter()
        .flat_map(|(c, n)| std::iter::repeat_n(c, n))
        .collect();
    intended.shuffle(&mut rng);
    let users = intended
        .iter()
        .enumerate()
        .map(|(i, &c)| make_user(&mut rng, cfg, format!("u{i:05}"), c))
        .collect();
    let file = DatasetFile {
        schema_version: SCHEMA_VERSION,
        users,
    };
    let dataset = file.to_dataset(&IngestOptions::default(), &CanonTable::builtin())?;
    Ok(SynthOutput { file, dataset, intended })
}

/// Face and tag totals over eligible photos for a category.
fn totals(rng: &mut ChaCha8Rng, cfg: &SynthConfig, c: Category) -> (usize, usize) {
    let (mf, mt) = (cfg.max_total_faces, cfg.max_total_tags);
    match c {
        Category::F | Category::FP => (0, 0),
        Category::PPlus => (rng.gen_range(1..=mf), 0),
        Category::P => (0, rng.gen_range(1..=mt)),
        Category::PMinus => {
            let f = rng.gen_range(2..=mf);
            (f, rng.gen_range(1..f))
        }
        Category::PU => {
            let f = rng.gen_range(1..=mf.min(mt));
            (f, f)
        }
        Category::U => {
            let f = rng.gen_range(1..=mf.min(mt - 1));
            (f, rng.gen_range(f + 1..=mt))
        }
    }
}

struct PhotoPlan {
    faces: Vec<[f64; 4]>,
    tags: usize,
}

fn place_faces(rng: &mut ChaCha8Rng, n: usize) -> Vec<[f64; 4]> {
    let mut faces: Vec<[f64; 4]> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut candidate = [0.0; 4];
        for _ in 0..20 {
            let w = rng.gen_range(0.05..0.15);
            let h = rng.gen_range(0.05..0.15);
            candidate = [rng.gen_range(0.0..1.0 - w), rng.gen_range(0.0..FACE_BAND_BOTTOM - h), w, h];
            let overlaps = faces.iter().any(|f| {
                candidate[0] < f[0] + f[2] && f[0] < candidate[0] + candidate[2]
                    && candidate[1] < f[1] + f[3] && f[1] < candidate[1] + candidate[3]
            });
            if !overlaps {
                break;
            }
        }
        faces.push(candidate);
    }
    faces
}

/// Spreads `total` items over the `slots` among `n` photos, each to a uniformly drawn slot.
fn scatter(rng: &mut ChaCha8Rng, total: usize, n: usize, slots: &[usize]) -> Vec<usize> {
    let mut counts = vec![0; n];
    for _ in 0..total {
        counts[*slots.choose(rng).expect("non-empty")] += 1;
    }
    counts
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

fn floor6(v: f64) -> f64 {
    (v * 1e6).floor() / 1e6
}

fn photo_doc(rng: &mut ChaCha8Rng, cfg: &SynthConfig, id: String, plan: &PhotoPlan) -> PhotoDoc {
    let pixel = rng.gen_bool(cfg.pixel_units_probability);
    let (w, h) = (rng.gen_range(640u32..=2048), rng.gen_range(480u32..=1536));
    // Rectangles as they will read after ingestion.
    let faces: Vec<[f64; 4]> = plan
        .faces
        .iter()
        .map(|f| {
            if pixel {
                let (wf, hf) = (f64::from(w), f64::from(h));
                let px = (f[0] * wf).floor();
                let py = (f[1] * hf).floor();
                let pw = (f[2] * wf).floor().max(1.0);
                let ph = (f[3] * hf).floor().max(1.0);
                [px, py, pw, ph]
            } else {
                f.map(floor6)
            }
        })
        .collect();
    let as_fraction = |f: &[f64; 4]| -> [f64; 4] {
        if pixel {
            [f[0] / f64::from(w), f[1] / f64::from(h), f[2] / f64::from(w), f[3] / f64::from(h)]
        } else {
            *f
        }
    };
    let tags = (0..plan.tags)
        .map(|i| {
            let on_face = !faces.is_empty() && rng.gen_bool(cfg.on_face_probability);
            let (x, y) = if on_face {
                let f = as_fraction(faces.choose(rng).expect("faces"));
                (f[0] + f[2] / 2.0, f[1] + f[3] / 2.0)
            } else {
                (rng.gen_range(0.0..1.0), rng.gen_range(TAG_BAND.0..TAG_BAND.1))
            };
            let named = rng.gen_bool(0.7);
            TagDoc {
                x: round6(x).clamp(0.0, 1.0),
                y: round6(y).clamp(0.0, 1.0),
                name: named.then(|| format!("friend{}", i + rng.gen_range(0..50))),
                links_to_profile: !named || rng.gen_bool(0.8),
            }
        })
        .collect();
    let faces = faces
        .into_iter()
        .map(|f| RectDoc {
            x: f[0],
            y: f[1],
            width: f[2],
            height: f[3],
        })
        .collect();
    PhotoDoc {
        photo_id: id,
        created: Some(random_date(rng)),
        units: if pixel { Units::Pixel } else { Units::Fraction },
        width: pixel.then_some(w),
        height: pixel.then_some(h),
        faces,
        tags,
    }
}

fn random_date(rng: &mut ChaCha8Rng) -> String {
    let base = chrono::NaiveDate::from_ymd_opt(2014, 1, 1).expect("valid date");
    let d = base + chrono::Days::new(rng.gen_range(0..3 * 365));
    format!("{}T{:02}:{:02}:00", d.format("%Y-%m-%d"), rng.gen_range(0..24), rng.gen_range(0..60))
}

fn make_user(rng: &mut ChaCha8Rng, cfg: &SynthConfig, user_id: String, c: Category) -> UserDoc {
    let mut albums = Vec::new();
    if c != Category::F {
        let n_photos = rng.gen_range(1..=cfg.max_eligible_photos);
        let (faces, tags) = totals(rng, cfg, c);
        let all: Vec<usize> = (0..n_photos).collect();
        let face_counts = scatter(rng, faces, n_photos, &all);
        let with_faces: Vec<usize> = all.iter().copied().filter(|&i| face_counts[i] > 0).collect();
        // Tags on photos with faces may land on a face; otherwise anywhere.
        let tag_slots = if with_faces.is_empty() || rng.gen_bool(0.5) { &all } else { &with_faces };
        let tag_counts = scatter(rng, tags, n_photos, tag_slots);
        let plans: Vec<PhotoPlan> = (0..n_photos)
            .map(|i| PhotoPlan {
                faces: place_faces(rng, face_counts[i]),
                tags: tag_counts[i],
            })
            .collect();
        let per_album = IngestOptions::DEFAULT_MAX_PHOTOS;
        for (a, chunk) in plans.chunks(per_album).enumerate() {
            let setting = if rng.gen_bool(0.6) {
                VisibilitySetting::Public
            } else {
                VisibilitySetting::FriendsOfFriends
            };
            let photos = chunk
                .iter()
                .enumerate()
                .map(|(p, plan)| photo_doc(rng, cfg, format!("{user_id}-a{a}-p{p}"), plan))
                .collect();
            albums.push(AlbumDoc {
                album_id: format!("{user_id}-a{a}"),
                name: ALBUM_NAMES.choose(rng).expect("names").to_string(),
                setting,
                created: Some(random_date(rng)),
                photos,
            });
        }
        if rng.gen_bool(cfg.restricted_album_probability) {
            let a = albums.len();
            let setting = *[VisibilitySetting::Friends, VisibilitySetting::Custom, VisibilitySetting::OnlyMe]
                .choose(rng)
                .expect("settings");
            let photos = (0..rng.gen_range(1..=6))
                .map(|p| {
                    let n_faces = rng.gen_range(0..=2);
                    let plan = PhotoPlan {
                        faces: place_faces(rng, n_faces),
                        tags: rng.gen_range(0..=2),
                    };
                    photo_doc(rng, cfg, format!("{user_id}-a{a}-p{p}"), &plan)
                })
                .collect();
            albums.push(AlbumDoc {
                album_id: format!("{user_id}-a{a}"),
                name: "Private".into(),
                setting,
                created: Some(random_date(rng)),
                photos,
            });
        }
    }
    UserDoc {
        user_id,
        profile: make_profile(rng, cfg, c),
        interests: make_interests(rng),
        albums,
    }
}

const ALBUM_NAMES: [&str; 6] = ["Mobile Uploads", "Profile Pictures", "Timeline Photos", "Summer", "Family", "Trip"];

/// Value pools per attribute. Entries are raw spellings; each maps to a
/// canonical value in the built-in table.
fn pool(attr: Attribute) -> &'static [&'static str] {
    match attr {
        Attribute::Gender => &["Male", "Female"],
        Attribute::Hometown | Attribute::Location => &["USA", "Saudi Arabia", "Egypt", "India", "UK", "Canada"],
        Attribute::Relationship => &["Single", "In a relationship", "Married", "Engaged", "It's complicated"],
        Attribute::Religion => &["Muslim", "Christianity", "Atheist", "Hinduism", "Judaism", "Buddhism"],
        Attribute::PoliticalView => &["Liberal", "Conservative", "Moderate"],
        Attribute::Education => &["College", "High School", "Graduate"],
        Attribute::Degree => &["Bachelor", "Master", "Doctorate"],
        Attribute::Age => &[],
    }
}

fn variants(attr: Attribute, canonical: &str) -> &'static [&'static str] {
    match (attr, canonical) {
        (Attribute::Religion, "Muslim") => &["islam", "MUSLIM", "مسلم", "Moslem"],
        (Attribute::Religion, "Christianity") => &["Christian-Catholic", "Protestant", "Roman Catholic"],
        (Attribute::Education, "Graduate") => &["Grad", "Graduate School"],
        (Attribute::Education, "College") => &["University", "Undergraduate"],
        (Attribute::Degree, "Bachelor") => &["BS", "B.Sc."],
        (Attribute::Degree, "Master") => &["MS", "MBA"],
        (Attribute::Location | Attribute::Hometown, "USA") => &["Boston, MA", "Seattle, WA", "United States"],
        (Attribute::Location | Attribute::Hometown, "Canada") => &["Toronto, ON", "Vancouver, BC"],
        (Attribute::Gender, "Male") => &["M", "Man"],
        (Attribute::Gender, "Female") => &["F", "Woman"],
        _ => &[],
    }
}

fn make_profile(rng: &mut ChaCha8Rng, cfg: &SynthConfig, c: Category) -> ProfileDoc {
    // More revealing categories skew younger and toward particular values.
    let center = [52i64, 40, 30, 34, 27, 24, 21][c.index()];
    let age = (center + rng.gen_range(-10..=10)).clamp(14, 73);
    let missing = |attr: Attribute| cfg.missing.get(&attr).copied().unwrap_or(0.0);
    let mut doc = ProfileDoc {
        age: (!rng.gen_bool(missing(Attribute::Age))).then_some(age),
        ..ProfileDoc::default()
    };
    for attr in Attribute::CATEGORICAL {
        if rng.gen_bool(missing(attr)) {
            continue;
        }
        let values = pool(attr);
        let canonical = if rng.gen_bool(0.5) {
            values[c.index() % values.len()]
        } else {
            values.choose(rng).expect("pool")
        };
        let spelled = match variants(attr, canonical) {
            v if !v.is_empty() && rng.gen_bool(cfg.variant_probability) => v.choose(rng).expect("variants"),
            _ => canonical,
        };
        let value = match rng.gen_range(0..10) {
            0 => format!("  {spelled} "),
            1 => spelled.to_lowercase(),
            _ => spelled.to_string(),
        };
        match attr {
            Attribute::Gender => doc.gender = Some(value),
            Attribute::Hometown => doc.hometown = Some(value),
            Attribute::Location => doc.location = Some(value),
            Attribute::Relationship => doc.relationship = Some(value),
            Attribute::Religion => doc.religion = Some(value),
            Attribute::PoliticalView => doc.political_view = Some(value),
            Attribute::Education => doc.education = Some(value),
            Attribute::Degree => doc.degree = Some(value),
            Attribute::Age => unreachable!(),
        }
    }
    doc
}

fn make_interests(rng: &mut ChaCha8Rng) -> InterestsDoc {
    const BOOKS: [&str; 5] = ["Dune", "Emma", "Ulysses", "Beloved", "Middlemarch"];
    const MUSIC: [&str; 5] = ["jazz", "rock", "classical", "hip hop", "folk"];
    const TV: [&str; 4] = ["news", "sitcoms", "documentaries", "sports"];
    const MOVIES: [&str; 4] = ["Alien", "Vertigo", "Amelie", "Heat"];
    let mut pick = |items: &[&str]| {
        let n = rng.gen_range(0..=2);
        items.choose_multiple(rng, n).map(|s| s.to_string()).collect()
    };
    InterestsDoc {
        books: pick(&BOOKS),
        music: pick(&MUSIC),
        tv: pick(&TV),
        movies: pick(&MOVIES),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeometryConfig;
    use crate::labeling::{compute_exposure, label_7class};

    #[test]
    fn default_mix_counts() {
        let counts = CategoryMix::default().counts(1000);
        assert_eq!(counts[&Category::PPlus], 320);
        assert_eq!(counts[&Category::FP], 240);
        assert_eq!(counts[&Category::F], 150);
        assert_eq!(counts[&Category::U], 40);
        assert_eq!(counts[&Category::P] + counts[&Category::PMinus] + counts[&Category::PU], 250);
        assert_eq!(counts.values().sum::<usize>(), 1000);
        assert_eq!(CategoryMix::default().counts(7).values().sum::<usize>(), 7);
    }

    #[test]
    fn infeasible_mix_is_rejected() {
        assert!(CategoryMix::new(vec![(Category::F, 0.7), (Category::U, 0.5)], vec![Category::P]).is_err());
        assert!(CategoryMix::new(vec![(Category::F, 0.5)], vec![]).is_err());
        assert!(CategoryMix::new(vec![(Category::F, 0.5), (Category::U, 0.5)], vec![]).is_ok());
    }

    #[test]
    fn labels_match_intent_and_generation_is_seeded() {
        let cfg = SynthConfig::default().with_users(300).with_seed(7);
        let out = generate(&cfg).unwrap();
        let geo = GeometryConfig::default();
        for (u, c) in out.dataset.users().iter().zip(&out.intended) {
            assert_eq!(label_7class(&compute_exposure(u, &geo)).category(), *c, "{}", u.user_id());
        }
        let again = generate(&cfg).unwrap();
        assert_eq!(again.file, out.file);
        assert_ne!(generate(&cfg.clone().with_seed(8)).unwrap().file, out.file);
    }
}
