//! On-disk dataset format: a versioned JSON document.
//!
//! Faces may be given in pixels (`"units": "pixel"`, with the image
//! `width` and `height`) or in fractions of the image. They are always
//! converted to fractions on load and always written back as fractions, so
//! a loaded-then-saved file is stable under further round trips. Tags are
//! always fractions.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "users": [{
//!     "user_id": "u1",
//!     "profile": { "age": 33, "gender": "Female", "religion": null, ... },
//!     "interests": { "books": [], "music": ["jazz"], "tv": [], "movies": [] },
//!     "albums": [{
//!       "album_id": "a1", "name": "Summer", "setting": "public",
//!       "photos": [{
//!         "photo_id": "p1", "units": "pixel", "width": 1000, "height": 800,
//!         "faces": [{ "x": 400, "y": 320, "width": 200, "height": 160 }],
//!         "tags": [{ "x": 0.5, "y": 0.5, "name": "Sam", "links_to_profile": true }]
//!       }]
//!     }]
//!   }]
//! }
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    Album, AttrValue, Attribute, Dataset, FaceRect, Interests, PhotoAnnotation, TagPoint, Timestamp,
    UserProfile, UserRecord, VisibilitySetting,
};
use crate::prep::CanonTable;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub schema_version: u32,
    #[serde(default)]
    pub users: Vec<UserDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserDoc {
    pub user_id: String,
    #[serde(default)]
    pub profile: ProfileDoc,
    #[serde(default)]
    pub interests: InterestsDoc,
    #[serde(default)]
    pub albums: Vec<AlbumDoc>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    #[serde(default)]
    pub age: Option<i64>,
    #[serde(default)]
    pub gender: Option<String>,
    #[serde(default)]
    pub hometown: Option<String>,
    #[serde(default)]
    pub location: Option<String>,
    #[serde(default)]
    pub relationship: Option<String>,
    #[serde(default)]
    pub religion: Option<String>,
    #[serde(default)]
    pub political_view: Option<String>,
    #[serde(default)]
    pub education: Option<String>,
    #[serde(default)]
    pub degree: Option<String>,
}

impl ProfileDoc {
    fn slot(&self, attribute: Attribute) -> &Option<String> {
        match attribute {
            Attribute::Gender => &self.gender,
            Attribute::Hometown => &self.hometown,
            Attribute::Location => &self.location,
            Attribute::Relationship => &self.relationship,
            Attribute::Religion => &self.religion,
            Attribute::PoliticalView => &self.political_view,
            Attribute::Education => &self.education,
            Attribute::Degree => &self.degree,
            Attribute::Age => unreachable!("age is numeric"),
        }
    }

    fn slot_mut(&mut self, attribute: Attribute) -> &mut Option<String> {
        match attribute {
            Attribute::Gender => &mut self.gender,
            Attribute::Hometown => &mut self.hometown,
            Attribute::Location => &mut self.location,
            Attribute::Relationship => &mut self.relationship,
            Attribute::Religion => &mut self.religion,
            Attribute::PoliticalView => &mut self.political_view,
            Attribute::Education => &mut self.education,
            Attribute::Degree => &mut self.degree,
            Attribute::Age => unreachable!("age is numeric"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterestsDoc {
    #[serde(default)]
    pub books: BTreeSet<String>,
    #[serde(default)]
    pub music: BTreeSet<String>,
    #[serde(default)]
    pub tv: BTreeSet<String>,
    #[serde(default)]
    pub movies: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlbumDoc {
    pub album_id: String,
    #[serde(default)]
    pub name: String,
    pub setting: VisibilitySetting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created: Option<String>,
    #[serde(default)]
    pub photos: Vec<PhotoDoc>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    #[default]
    Fraction,
    Pixel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotoDoc {
    pub photo_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created: Option<String>,
    #[serde(default)]
    pub units: Units,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<u32>,
    #[serde(default)]
    pub faces: Vec<RectDoc>,
    #[serde(default)]
    pub tags: Vec<TagDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectDoc {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TagDoc {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default = "default_true")]
    pub links_to_profile: bool,
}

/// Ingestion limits. `None` means unlimited.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestOptions {
    pub max_albums: Option<usize>,
    pub max_photos_per_album: Option<usize>,
    /// Drops albums and photos created before this time; undated entries
    /// are kept.
    pub since: Option<Timestamp>,
}

impl IngestOptions {
    pub const DEFAULT_MAX_ALBUMS: usize = 5;
    pub const DEFAULT_MAX_PHOTOS: usize = 10;

    pub fn unlimited() -> Self {
        IngestOptions {
            max_albums: None,
            max_photos_per_album: None,
            since: None,
        }
    }
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            max_albums: Some(Self::DEFAULT_MAX_ALBUMS),
            max_photos_per_album: Some(Self::DEFAULT_MAX_PHOTOS),
            since: None,
        }
    }
}

fn parse_created(created: &Option<String>, ctx: &str) -> Result<Option<Timestamp>> {
    created
        .as_deref()
        .map(|s| s.parse::<Timestamp>().map_err(|e| e.within(ctx)))
        .transpose()
}

/// Keeps at most `cap` items, the most recent ones when every item is
/// dated and the leading ones otherwise. Survivors keep their file order.
fn cap_recent<T>(items: Vec<(T, Option<Timestamp>)>, cap: Option<usize>, since: Option<Timestamp>) -> Vec<T> {
    let items: Vec<_> = items
        .into_iter()
        .filter(|(_, at)| match (since, at) {
            (Some(s), Some(t)) => *t >= s,
            _ => true,
        })
        .collect();
    let Some(cap) = cap else {
        return items.into_iter().map(|(t, _)| t).collect();
    };
    if items.len() <= cap {
        return items.into_iter().map(|(t, _)| t).collect();
    }
    let mut keep = vec![false; items.len()];
    if items.iter().all(|(_, at)| at.is_some()) {
        let mut order: Vec<usize> = (0..items.len()).collect();
        order.sort_by(|&a, &b| items[b].1.cmp(&items[a].1).then(a.cmp(&b)));
        for &i in &order[..cap] {
            keep[i] = true;
        }
    } else {
        keep[..cap].iter_mut().for_each(|k| *k = true);
    }
    items
        .into_iter()
        .zip(keep)
        .filter_map(|((t, _), k)| k.then_some(t))
        .collect()
}

fn nonblank(v: &Option<String>) -> Option<&str> {
    v.as_deref().filter(|s| !s.trim().is_empty())
}

impl DatasetFile {
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let doc: DatasetFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            source_name: source_name.to_string(),
            message: e.to_string(),
        })?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::validation(format!(
                "{source_name}: unsupported schema_version {} (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dataset serializes");
        s.push('\n');
        s
    }

    /// Validates, converts pixel geometry, applies the caps and
    /// canonicalizes profile values.
    pub fn to_dataset(&self, opts: &IngestOptions, table: &CanonTable) -> Result<Dataset> {
        let users = self
            .users
            .iter()
            .map(|u| user_from_doc(u, opts, table))
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(users)
    }

    /// Fraction-unit document for a dataset.
    pub fn from_dataset(dataset: &Dataset) -> Self {
        DatasetFile {
            schema_version: SCHEMA_VERSION,
            users: dataset.users().iter().map(user_to_doc).collect(),
        }
    }
}

fn user_from_doc(doc: &UserDoc, opts: &IngestOptions, table: &CanonTable) -> Result<UserRecord> {
    let uid = &doc.user_id;
    let ctx = format!("user {uid}");
    let age = match doc.profile.age {
        None => None,
        Some(a) if (1..=i64::from(UserProfile::MAX_AGE)).contains(&a) => Some(a as u8),
        Some(a) => {
            return Err(Error::validation(format!(
                "{ctx}: age {a} out of range [1,{}]",
                UserProfile::MAX_AGE
            )))
        }
    };
    let mut profile = UserProfile::new().with_age(age)?;
    for attr in Attribute::CATEGORICAL {
        if let Some(raw) = nonblank(doc.profile.slot(attr)) {
            let c = table.canonicalize(attr, raw)?;
            profile = profile.with(attr, AttrValue::known(c.value)?);
        }
    }
    let clean = |set: &BTreeSet<String>| -> BTreeSet<String> {
        set.iter()
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    };
    profile = profile.with_interests(Interests {
        books: clean(&doc.interests.books),
        music: clean(&doc.interests.music),
        tv: clean(&doc.interests.tv),
        movies: clean(&doc.interests.movies),
    });

    let mut albums = Vec::with_capacity(doc.albums.len());
    for a in &doc.albums {
        let actx = format!("{ctx}, album {}", a.album_id);
        let created = parse_created(&a.created, &actx)?;
        let mut photos = Vec::with_capacity(a.photos.len());
        for p in &a.photos {
            let pctx = format!("{actx}, photo {}", p.photo_id);
            photos.push((photo_from_doc(p, &pctx)?, parse_created(&p.created, &pctx)?));
        }
        let photos: Vec<PhotoAnnotation> = cap_recent(
            photos.into_iter().map(|(p, at)| (p.clone().with_created(at), at)).collect(),
            opts.max_photos_per_album,
            opts.since,
        );
        let album = Album::new(&a.album_id, &a.name, a.setting, photos)
            .map_err(|e| e.within(&actx))?
            .with_created(created);
        albums.push((album, created));
    }
    let albums = cap_recent(albums, opts.max_albums, opts.since);
    UserRecord::new(uid, profile, albums)
}

fn photo_from_doc(doc: &PhotoDoc, ctx: &str) -> Result<PhotoAnnotation> {
    let (sx, sy) = match doc.units {
        Units::Fraction => (1.0, 1.0),
        Units::Pixel => match (doc.width, doc.height) {
            (Some(w), Some(h)) if w > 0 && h > 0 => (f64::from(w), f64::from(h)),
            _ => {
                return Err(Error::validation(format!(
                    "{ctx}: pixel units need positive width and height"
                )))
            }
        },
    };
    let faces = doc
        .faces
        .iter()
        .enumerate()
        .map(|(i, r)| {
            FaceRect::new(r.x / sx, r.y / sy, r.width / sx, r.height / sy)
                .map_err(|e| e.within(&format!("{ctx}, face {i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let tags = doc
        .tags
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let tag = TagPoint::new(t.x, t.y).map_err(|e| e.within(&format!("{ctx}, tag {i}")))?;
            Ok(match &t.name {
                Some(n) => tag.with_name(n.clone(), t.links_to_profile),
                None if !t.links_to_profile => tag.unlinked(),
                None => tag,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PhotoAnnotation::new(&doc.photo_id, faces, tags).map_err(|e| e.within(ctx))
}

fn user_to_doc(user: &UserRecord) -> UserDoc {
    let p = user.profile();
    let mut profile = ProfileDoc {
        age: p.age().map(i64::from),
        ..ProfileDoc::default()
    };
    for attr in Attribute::CATEGORICAL {
        *profile.slot_mut(attr) = p.get(attr).as_known().map(str::to_string);
    }
    let i = p.interests();
    UserDoc {
        user_id: user.user_id().to_string(),
        profile,
        interests: InterestsDoc {
            books: i.books.clone(),
            music: i.music.clone(),
            tv: i.tv.clone(),
            movies: i.movies.clone(),
        },
        albums: user
            .albums()
            .iter()
            .map(|a| AlbumDoc {
                album_id: a.album_id().to_string(),
                name: a.name().to_string(),
                setting: a.setting(),
                created: a.created().map(|t| t.to_string()),
                photos: a.photos().iter().map(photo_to_doc).collect(),
            })
            .collect(),
    }
}

fn photo_to_doc(p: &PhotoAnnotation) -> PhotoDoc {
    PhotoDoc {
        photo_id: p.photo_id().to_string(),
        created: p.created().map(|t| t.to_string()),
        units: Units::Fraction,
        width: None,
        height: None,
        faces: p
            .faces()
            .iter()
            .map(|f| RectDoc {
                x: f.x(),
                y: f.y(),
                width: f.width(),
                height: f.height(),
            })
            .collect(),
        tags: p
            .tags()
            .iter()
            .map(|t| TagDoc {
                x: t.x(),
                y: t.y(),
                name: t.tagged_name().map(str::to_string),
                links_to_profile: t.links_to_profile(),
            })
            .collect(),
    }
}

pub fn ingest_str(text: &str, source_name: &str, opts: &IngestOptions, table: &CanonTable) -> Result<Dataset> {
    DatasetFile::parse(text, source_name)?.to_dataset(opts, table)
}

pub fn ingest(path: &Path, opts: &IngestOptions, table: &CanonTable) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    ingest_str(&text, &path.display().to_string(), opts, table)
}

/// Canonical text form of a dataset.
pub fn serialize(dataset: &Dataset) -> String {
    DatasetFile::from_dataset(dataset).to_json()
}
