//! Core domain types: visibility settings, photo geometry, user records,
//! photo privacy levels and user privacy categories.
//!
//! Every type validates on construction and is immutable afterwards.
//! Geometry is always expressed in fractions of the image dimensions.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use chrono::{NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Audience of a photo album, ordered loosest to strictest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VisibilitySetting {
    Public,
    FriendsOfFriends,
    Friends,
    /// Selective audience of specific people or networks.
    Custom,
    OnlyMe,
}

impl VisibilitySetting {
    pub const ALL: [VisibilitySetting; 5] = [
        VisibilitySetting::Public,
        VisibilitySetting::FriendsOfFriends,
        VisibilitySetting::Friends,
        VisibilitySetting::Custom,
        VisibilitySetting::OnlyMe,
    ];

    /// Photos are only analysed when strangers can reach them.
    pub fn is_analysis_eligible(self) -> bool {
        matches!(
            self,
            VisibilitySetting::Public | VisibilitySetting::FriendsOfFriends
        )
    }

    /// Position in the strictness order, 0 for `Public`.
    pub fn strictness(self) -> usize {
        self as usize
    }

    /// The setting `steps` positions stricter, saturating at `OnlyMe`.
    pub fn stricter_by(self, steps: usize) -> VisibilitySetting {
        let idx = (self.strictness() + steps).min(Self::ALL.len() - 1);
        Self::ALL[idx]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VisibilitySetting::Public => "public",
            VisibilitySetting::FriendsOfFriends => "friends_of_friends",
            VisibilitySetting::Friends => "friends",
            VisibilitySetting::Custom => "custom",
            VisibilitySetting::OnlyMe => "only_me",
        }
    }
}

impl fmt::Display for VisibilitySetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for VisibilitySetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::validation(format!("unknown visibility setting `{s}`")))
    }
}

// Pixel-to-fraction conversion can overshoot an edge by a rounding error.
const EDGE_SLACK: f64 = 1e-9;

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::validation(format!(
            "{name}={v} out of range [0,1]"
        )));
    }
    Ok(())
}

/// Face bounding box, in fractions of the image width and height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceRect {
    x: f64,
    y: f64,
    width: f64,
    height: f64,
}

impl FaceRect {
    pub fn new(x: f64, y: f64, width: f64, height: f64) -> Result<Self> {
        check_unit("x", x)?;
        check_unit("y", y)?;
        check_unit("width", width)?;
        check_unit("height", height)?;
        if width <= 0.0 || height <= 0.0 {
            return Err(Error::validation(format!(
                "face rectangle must have positive size, got {width}x{height}"
            )));
        }
        if x + width > 1.0 + EDGE_SLACK || y + height > 1.0 + EDGE_SLACK {
            return Err(Error::validation(format!(
                "face rectangle ({x},{y},{width},{height}) extends past the image"
            )));
        }
        Ok(FaceRect {
            x,
            y,
            width,
            height,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }
}

/// A name tag anchored at a point of the photo.
#[derive(Debug, Clone, PartialEq)]
pub struct TagPoint {
    x: f64,
    y: f64,
    tagged_name: Option<String>,
    links_to_profile: bool,
}

impl TagPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        check_unit("x", x)?;
        check_unit("y", y)?;
        Ok(TagPoint {
            x,
            y,
            tagged_name: None,
            links_to_profile: true,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>, links_to_profile: bool) -> Self {
        self.tagged_name = Some(name.into());
        self.links_to_profile = links_to_profile;
        self
    }

    /// A plain-text tag (no profile link).
    pub fn unlinked(mut self) -> Self {
        self.links_to_profile = false;
        self
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn tagged_name(&self) -> Option<&str> {
        self.tagged_name.as_deref()
    }

    pub fn links_to_profile(&self) -> bool {
        self.links_to_profile
    }
}

/// Creation time of an album or photo, kept to second resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(NaiveDateTime);

impl Timestamp {
    const FORMAT: &'static str = "%Y-%m-%dT%H:%M:%S";

    pub fn new(at: NaiveDateTime) -> Self {
        Timestamp(at)
    }

    pub fn as_datetime(&self) -> NaiveDateTime {
        self.0
    }
}

impl FromStr for Timestamp {
    type Err = Error;

    /// Accepts `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM:SS` or an RFC 3339 time
    /// (the offset is dropped).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, Self::FORMAT) {
            return Ok(Timestamp(dt));
        }
        if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
            return Ok(Timestamp(d.and_hms_opt(0, 0, 0).expect("midnight exists")));
        }
        if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(s) {
            return Ok(Timestamp(dt.naive_local()));
        }
        Err(Error::validation(format!("unparseable timestamp `{s}`")))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format(Self::FORMAT))
    }
}

/// Face rectangles and tag points of a single photo.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotoAnnotation {
    photo_id: String,
    created: Option<Timestamp>,
    faces: Vec<FaceRect>,
    tags: Vec<TagPoint>,
}

impl PhotoAnnotation {
    pub fn new(photo_id: impl Into<String>, faces: Vec<FaceRect>, tags: Vec<TagPoint>) -> Result<Self> {
        let photo_id = photo_id.into();
        if photo_id.trim().is_empty() {
            return Err(Error::validation("photo_id must not be empty"));
        }
        Ok(PhotoAnnotation {
            photo_id,
            created: None,
            faces,
            tags,
        })
    }

    pub fn with_created(mut self, created: Option<Timestamp>) -> Self {
        self.created = created;
        self
    }

    /// Copy of this photo with one more tag.
    pub fn with_tag(&self, tag: TagPoint) -> Self {
        let mut out = self.clone();
        out.tags.push(tag);
        out
    }

    pub fn photo_id(&self) -> &str {
        &self.photo_id
    }

    pub fn created(&self) -> Option<Timestamp> {
        self.created
    }

    pub fn faces(&self) -> &[FaceRect] {
        &self.faces
    }

    pub fn tags(&self) -> &[TagPoint] {
        &self.tags
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Album {
    album_id: String,
    name: String,
    setting: VisibilitySetting,
    created: Option<Timestamp>,
    photos: Vec<PhotoAnnotation>,
}

impl Album {
    pub fn new(
        album_id: impl Into<String>,
        name: impl Into<String>,
        setting: VisibilitySetting,
        photos: Vec<PhotoAnnotation>,
    ) -> Result<Self> {
        let album_id = album_id.into();
        if album_id.trim().is_empty() {
            return Err(Error::validation("album_id must not be empty"));
        }
        Ok(Album {
            album_id,
            name: name.into(),
            setting,
            created: None,
            photos,
        })
    }

    pub fn with_created(mut self, created: Option<Timestamp>) -> Self {
        self.created = created;
        self
    }

    pub fn album_id(&self) -> &str {
        &self.album_id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn setting(&self) -> VisibilitySetting {
        self.setting
    }

    pub fn created(&self) -> Option<Timestamp> {
        self.created
    }

    pub fn photos(&self) -> &[PhotoAnnotation] {
        &self.photos
    }

    pub fn is_analysis_eligible(&self) -> bool {
        self.setting.is_analysis_eligible()
    }
}

/// A categorical profile value, with `Missing` as an ordinary value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum AttrValue {
    #[default]
    Missing,
    Known(String),
}

impl AttrValue {
    /// Wraps a non-blank value. Blank text is rejected; absent values
    /// must be given as `AttrValue::Missing`.
    pub fn known(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        if value.trim().is_empty() {
            return Err(Error::validation(
                "blank attribute value; use Missing for undisclosed attributes",
            ));
        }
        Ok(AttrValue::Known(value))
    }

    pub fn as_known(&self) -> Option<&str> {
        match self {
            AttrValue::Missing => None,
            AttrValue::Known(v) => Some(v),
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, AttrValue::Missing)
    }
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Missing => f.write_str("?"),
            AttrValue::Known(v) => f.write_str(v),
        }
    }
}

/// Profile attributes collected for every user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    Age,
    Gender,
    Hometown,
    Location,
    Relationship,
    Religion,
    PoliticalView,
    Education,
    Degree,
}

impl Attribute {
    pub const ALL: [Attribute; 9] = [
        Attribute::Age,
        Attribute::Gender,
        Attribute::Hometown,
        Attribute::Location,
        Attribute::Relationship,
        Attribute::Religion,
        Attribute::PoliticalView,
        Attribute::Education,
        Attribute::Degree,
    ];

    /// Every attribute except age, which is numeric.
    pub const CATEGORICAL: [Attribute; 8] = [
        Attribute::Gender,
        Attribute::Hometown,
        Attribute::Location,
        Attribute::Relationship,
        Attribute::Religion,
        Attribute::PoliticalView,
        Attribute::Education,
        Attribute::Degree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Attribute::Age => "age",
            Attribute::Gender => "gender",
            Attribute::Hometown => "hometown",
            Attribute::Location => "location",
            Attribute::Relationship => "relationship",
            Attribute::Religion => "religion",
            Attribute::PoliticalView => "political_view",
            Attribute::Education => "education",
            Attribute::Degree => "degree",
        }
    }

    /// Attributes the network always shows to everyone.
    pub fn is_always_public(self) -> bool {
        matches!(self, Attribute::Age | Attribute::Gender)
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Attribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        Attribute::ALL
            .iter()
            .copied()
            .find(|a| a.name() == key)
            .ok_or_else(|| Error::validation(format!("unknown attribute `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Interests {
    pub books: BTreeSet<String>,
    pub music: BTreeSet<String>,
    pub tv: BTreeSet<String>,
    pub movies: BTreeSet<String>,
}

impl Interests {
    pub fn len(&self) -> usize {
        self.books.len() + self.music.len() + self.tv.len() + self.movies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Self-reported profile attributes and likes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UserProfile {
    age: Option<u8>,
    categorical: [AttrValue; 8],
    interests: Interests,
}

impl UserProfile {
    pub const MAX_AGE: u8 = 130;

    /// Empty profile: every attribute missing, no interests.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_age(mut self, age: Option<u8>) -> Result<Self> {
        if let Some(a) = age {
            if !(1..=Self::MAX_AGE).contains(&a) {
                return Err(Error::validation(format!(
                    "age {a} out of range [1,{}]",
                    Self::MAX_AGE
                )));
            }
        }
        self.age = age;
        Ok(self)
    }

    /// Sets a categorical attribute. Panics when given `Attribute::Age`.
    pub fn with(mut self, attribute: Attribute, value: AttrValue) -> Self {
        *self.slot_mut(attribute) = value;
        self
    }

    pub fn with_interests(mut self, interests: Interests) -> Self {
        self.interests = interests;
        self
    }

    pub fn age(&self) -> Option<u8> {
        self.age
    }

    /// Categorical value; `Attribute::Age` is rendered as text.
    pub fn get(&self, attribute: Attribute) -> AttrValue {
        match attribute {
            Attribute::Age => match self.age {
                Some(a) => AttrValue::Known(a.to_string()),
                None => AttrValue::Missing,
            },
            other => self.categorical[Self::index(other)].clone(),
        }
    }

    pub fn is_disclosed(&self, attribute: Attribute) -> bool {
        match attribute {
            Attribute::Age => self.age.is_some(),
            other => !self.categorical[Self::index(other)].is_missing(),
        }
    }

    pub fn interests(&self) -> &Interests {
        &self.interests
    }

    fn index(attribute: Attribute) -> usize {
        Attribute::CATEGORICAL
            .iter()
            .position(|a| *a == attribute)
            .expect("age has no categorical slot")
    }

    fn slot_mut(&mut self, attribute: Attribute) -> &mut AttrValue {
        &mut self.categorical[Self::index(attribute)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserRecord {
    user_id: String,
    profile: UserProfile,
    albums: Vec<Album>,
}

impl UserRecord {
    /// Rejects duplicate album ids and photo ids within the user.
    pub fn new(user_id: impl Into<String>, profile: UserProfile, albums: Vec<Album>) -> Result<Self> {
        let user_id = user_id.into();
        if user_id.trim().is_empty() {
            return Err(Error::validation("user_id must not be empty"));
        }
        let mut album_ids = HashSet::new();
        let mut photo_ids = HashSet::new();
        for album in &albums {
            if !album_ids.insert(album.album_id()) {
                return Err(Error::validation(format!(
                    "user {user_id}: duplicate album_id `{}`",
                    album.album_id()
                )));
            }
            for photo in album.photos() {
                if !photo_ids.insert(photo.photo_id()) {
                    return Err(Error::validation(format!(
                        "user {user_id}: duplicate photo_id `{}`",
                        photo.photo_id()
                    )));
                }
            }
        }
        Ok(UserRecord {
            user_id,
            profile,
            albums,
        })
    }

    pub fn user_id(&self) -> &str {
        &self.user_id
    }

    pub fn profile(&self) -> &UserProfile {
        &self.profile
    }

    pub fn albums(&self) -> &[Album] {
        &self.albums
    }

    /// Photos in Public or Friends-of-Friends albums.
    pub fn eligible_photos(&self) -> impl Iterator<Item = &PhotoAnnotation> {
        self.albums
            .iter()
            .filter(|a| a.is_analysis_eligible())
            .flat_map(|a| a.photos().iter())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    users: Vec<UserRecord>,
}

impl Dataset {
    pub fn new(users: Vec<UserRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        for u in &users {
            if !seen.insert(u.user_id()) {
                return Err(Error::validation(format!(
                    "duplicate user_id `{}`",
                    u.user_id()
                )));
            }
        }
        Ok(Dataset { users })
    }

    pub fn users(&self) -> &[UserRecord] {
        &self.users
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }
}

/// Exposure rank of a single photo, least to most revealing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PrivacyLevel {
    L0NoFaceNoTag,
    L1FaceNoTag,
    L2TagNoFace,
    L3OffFaceTagsLtFaces,
    L4OffFaceTagsEqFaces,
    L5OffFaceTagsGtFaces,
    L6OnFaceTagsLtFaces,
    L7OnFaceTagsEqFaces,
    L8OnFaceTagsGtFaces,
}

impl PrivacyLevel {
    pub const ALL: [PrivacyLevel; 9] = [
        PrivacyLevel::L0NoFaceNoTag,
        PrivacyLevel::L1FaceNoTag,
        PrivacyLevel::L2TagNoFace,
        PrivacyLevel::L3OffFaceTagsLtFaces,
        PrivacyLevel::L4OffFaceTagsEqFaces,
        PrivacyLevel::L5OffFaceTagsGtFaces,
        PrivacyLevel::L6OnFaceTagsLtFaces,
        PrivacyLevel::L7OnFaceTagsEqFaces,
        PrivacyLevel::L8OnFaceTagsGtFaces,
    ];

    pub fn rank(self) -> u8 {
        self as u8
    }

    pub fn from_rank(rank: u8) -> Option<Self> {
        Self::ALL.get(rank as usize).copied()
    }

    /// Short code, `L0` through `L8`.
    pub fn code(self) -> &'static str {
        ["L0", "L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8"][self as usize]
    }

    pub fn describe(self) -> &'static str {
        match self {
            PrivacyLevel::L0NoFaceNoTag => "no faces, no tags",
            PrivacyLevel::L1FaceNoTag => "faces, no tags",
            PrivacyLevel::L2TagNoFace => "tags, no faces",
            PrivacyLevel::L3OffFaceTagsLtFaces => "tags off faces, fewer tags than faces",
            PrivacyLevel::L4OffFaceTagsEqFaces => "tags off faces, as many tags as faces",
            PrivacyLevel::L5OffFaceTagsGtFaces => "tags off faces, more tags than faces",
            PrivacyLevel::L6OnFaceTagsLtFaces => "tag on face, fewer tags than faces",
            PrivacyLevel::L7OnFaceTagsEqFaces => "tag on face, as many tags as faces",
            PrivacyLevel::L8OnFaceTagsGtFaces => "tag on face, more tags than faces",
        }
    }

    /// True for the levels where some tag sits on a face.
    pub fn has_tag_on_face(self) -> bool {
        self >= PrivacyLevel::L6OnFaceTagsLtFaces
    }
}

impl fmt::Display for PrivacyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.code())
    }
}

impl FromStr for PrivacyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim().trim_start_matches(['L', 'l']);
        digits
            .parse::<u8>()
            .ok()
            .and_then(PrivacyLevel::from_rank)
            .ok_or_else(|| Error::validation(format!("unknown privacy level `{s}`")))
    }
}

/// User privacy category, ordered from most privacy preserving (F) to
/// least (U).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    /// Fundamentalist.
    F,
    /// Fundamentalist leaning pragmatic.
    FP,
    #[serde(rename = "P+")]
    PPlus,
    /// Pragmatic.
    P,
    #[serde(rename = "P-")]
    PMinus,
    /// Pragmatic leaning unconcerned.
    PU,
    /// Unconcerned.
    U,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::F,
        Category::FP,
        Category::PPlus,
        Category::P,
        Category::PMinus,
        Category::PU,
        Category::U,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Category::F => "F",
            Category::FP => "FP",
            Category::PPlus => "P+",
            Category::P => "P",
            Category::PMinus => "P-",
            Category::PU => "PU",
            Category::U => "U",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.symbol())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.symbol().eq_ignore_ascii_case(s))
            .or(match s {
                "Pplus" | "PPlus" => Some(Category::PPlus),
                "Pminus" | "PMinus" => Some(Category::PMinus),
                _ => None,
            })
            .ok_or_else(|| Error::validation(format!("unknown privacy category `{s}`")))
    }
}

/// Labeling scheme: 3, 5 or 7 classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "5")]
    Five,
    #[serde(rename = "7")]
    Seven,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Three, Scheme::Five, Scheme::Seven];

    pub fn categories(self) -> &'static [Category] {
        match self {
            Scheme::Three => &[Category::F, Category::P, Category::U],
            Scheme::Five => &[Category::F, Category::FP, Category::P, Category::PU, Category::U],
            Scheme::Seven => &Category::ALL,
        }
    }

    pub fn allows(self, category: Category) -> bool {
        self.categories().contains(&category)
    }

    pub fn class_count(self) -> usize {
        self.categories().len()
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.class_count())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "3" => Ok(Scheme::Three),
            "5" => Ok(Scheme::Five),
            "7" => Ok(Scheme::Seven),
            other => Err(Error::validation(format!(
                "unknown scheme `{other}` (expected 3, 5 or 7)"
            ))),
        }
    }
}

/// A category tagged with the scheme that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrivacyCategory {
    scheme: Scheme,
    category: Category,
}

impl PrivacyCategory {
    pub fn new(scheme: Scheme, category: Category) -> Result<Self> {
        if !scheme.allows(category) {
            return Err(Error::validation(format!(
                "category {category} is not part of the {scheme}-class scheme"
            )));
        }
        Ok(PrivacyCategory { scheme, category })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn category(&self) -> Category {
        self.category
    }

    /// Strictly less privacy preserving than `other`.
    pub fn is_more_revealing_than(&self, other: &PrivacyCategory) -> bool {
        self.category > other.category
    }
}

impl fmt::Display for PrivacyCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.category.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strictness_order_and_eligibility() {
        use VisibilitySetting::*;
        assert!(Public < FriendsOfFriends);
        assert!(FriendsOfFriends < Friends);
        assert!(Friends < Custom);
        assert!(Custom < OnlyMe);
        let eligible: Vec<_> = VisibilitySetting::ALL
            .iter()
            .filter(|s| s.is_analysis_eligible())
            .collect();
        assert_eq!(eligible, [&Public, &FriendsOfFriends]);
        assert_eq!(Public.stricter_by(1), FriendsOfFriends);
        assert_eq!(OnlyMe.stricter_by(3), OnlyMe);
    }

    #[test]
    fn face_rect_rejects_out_of_range() {
        assert!(FaceRect::new(0.4, 0.4, 0.2, 0.2).is_ok());
        assert!(FaceRect::new(0.9, 0.1, 0.2, 0.2).is_err());
        assert!(FaceRect::new(0.1, 0.1, 0.0, 0.2).is_err());
        assert!(FaceRect::new(-0.1, 0.1, 0.1, 0.2).is_err());
        assert!(FaceRect::new(0.1, f64::NAN, 0.1, 0.2).is_err());
        // 0.8 + 0.2 sits exactly on the edge
        assert!(FaceRect::new(0.8, 0.8, 0.2, 0.2).is_ok());
    }

    #[test]
    fn tag_point_range() {
        assert!(TagPoint::new(0.0, 1.0).is_ok());
        assert!(TagPoint::new(0.5, 1.3).is_err());
    }

    #[test]
    fn age_range_is_enforced() {
        assert!(UserProfile::new().with_age(Some(0)).is_err());
        assert!(UserProfile::new().with_age(Some(131)).is_err());
        assert!(UserProfile::new().with_age(Some(130)).is_ok());
        assert!(UserProfile::new().with_age(None).is_ok());
    }

    #[test]
    fn blank_attribute_is_not_a_value() {
        assert!(AttrValue::known("  ").is_err());
        assert_eq!(AttrValue::known("Muslim").unwrap().as_known(), Some("Muslim"));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let photo = || PhotoAnnotation::new("p1", vec![], vec![]).unwrap();
        let a1 = Album::new("a1", "one", VisibilitySetting::Public, vec![photo()]).unwrap();
        let a2 = Album::new("a2", "two", VisibilitySetting::Friends, vec![photo()]).unwrap();
        assert!(UserRecord::new("u", UserProfile::new(), vec![a1.clone(), a2]).is_err());
        let u1 = UserRecord::new("u", UserProfile::new(), vec![a1.clone()]).unwrap();
        assert!(Dataset::new(vec![u1.clone(), u1]).is_err());
    }

    #[test]
    fn category_scheme_consistency() {
        for scheme in Scheme::ALL {
            for cat in Category::ALL {
                assert_eq!(PrivacyCategory::new(scheme, cat).is_ok(), scheme.allows(cat));
            }
        }
        assert!(PrivacyCategory::new(Scheme::Three, Category::FP).is_err());
        assert!(PrivacyCategory::new(Scheme::Five, Category::PPlus).is_err());
        assert_eq!(Scheme::Five.class_count(), 5);
    }

    #[test]
    fn category_order_and_parse() {
        let mut sorted = Category::ALL;
        sorted.sort();
        assert_eq!(sorted, Category::ALL);
        assert!(Category::PPlus < Category::P && Category::P < Category::PMinus);
        for c in Category::ALL {
            assert_eq!(c.symbol().parse::<Category>().unwrap(), c);
        }
    }

    #[test]
    fn level_ranks() {
        for (i, l) in PrivacyLevel::ALL.iter().enumerate() {
            assert_eq!(l.rank() as usize, i);
            assert_eq!(PrivacyLevel::from_rank(i as u8), Some(*l));
            assert_eq!(l.code().parse::<PrivacyLevel>().unwrap(), *l);
        }
        assert_eq!(PrivacyLevel::from_rank(9), None);
    }

    #[test]
    fn timestamp_forms() {
        let d: Timestamp = "2016-03-01".parse().unwrap();
        assert_eq!(d.to_string(), "2016-03-01T00:00:00");
        let t: Timestamp = "2016-03-01T10:20:30+02:00".parse().unwrap();
        assert_eq!(t.to_string(), "2016-03-01T10:20:30");
        assert!("yesterday".parse::<Timestamp>().is_err());
    }
}
