//! Album setting recommendations and per-user privacy reports.
//!
//! A recommendation compares the category a user's own photos put them in
//! (observed) with the category predicted from their profile. Users who
//! expose more than predicted get stricter settings suggested for the
//! albums holding their most revealing photos.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{classify_photo, GeometryConfig};
use crate::labeling::{FiveClassRule, Labels, UserExposure};
use crate::ml::{KnnModel, LabeledUsers, Schema};
use crate::model::{Attribute, Category, Dataset, PrivacyCategory, PrivacyLevel, Scheme, UserRecord, VisibilitySetting};
use crate::prep::{compute_stats, DisclosureStats};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecommendConfig {
    /// Albums holding a photo at or above this level are tightened.
    pub threshold: PrivacyLevel,
    /// Steps along Public < Friends-of-Friends < Friends < Custom < Only me.
    pub step: usize,
}

impl Default for RecommendConfig {
    fn default() -> Self {
        RecommendConfig {
            threshold: PrivacyLevel::L6OnFaceTagsLtFaces,
            step: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Tighten,
    NoChange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlbumSuggestion {
    pub album_id: String,
    pub current: VisibilitySetting,
    pub suggested: VisibilitySetting,
    pub max_level: Option<PrivacyLevel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recommendation {
    pub user_id: String,
    pub predicted: Category,
    pub observed: Category,
    pub action: Action,
    /// Every album, with the suggested setting equal to the current one
    /// where nothing changes.
    pub albums: Vec<AlbumSuggestion>,
    pub rationale: Vec<String>,
}

impl Recommendation {
    pub fn changed_albums(&self) -> impl Iterator<Item = &AlbumSuggestion> {
        self.albums.iter().filter(|a| a.current != a.suggested)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{}\tobserved {}\tpredicted {}\t{}\n",
            self.user_id,
            self.observed,
            self.predicted,
            match self.action {
                Action::Tighten => "tighten",
                Action::NoChange => "no change",
            }
        );
        for a in self.changed_albums() {
            let _ = writeln!(out, "  album {}: {} -> {}", a.album_id, a.current, a.suggested);
        }
        for r in &self.rationale {
            let _ = writeln!(out, "  - {r}");
        }
        out
    }
}

fn album_max_level(album: &crate::model::Album, geometry: &GeometryConfig) -> Option<PrivacyLevel> {
    album.photos().iter().map(|p| classify_photo(p, geometry)).max()
}

/// Both categories must be 7-class.
pub fn recommend(
    user: &UserRecord,
    exposure: &UserExposure,
    observed: PrivacyCategory,
    predicted: PrivacyCategory,
    cfg: &RecommendConfig,
    geometry: &GeometryConfig,
) -> Result<Recommendation> {
    for (what, c) in [("observed", observed), ("predicted", predicted)] {
        if c.scheme() != Scheme::Seven {
            return Err(Error::Contract(format!(
                "{what} category is {}-class; recommendations need 7-class categories",
                c.scheme().class_count()
            )));
        }
    }
    let revealing = observed.is_more_revealing_than(&predicted);
    let mut rationale = Vec::new();
    let albums: Vec<AlbumSuggestion> = user
        .albums()
        .iter()
        .map(|a| {
            let max_level = album_max_level(a, geometry);
            let hot = a.is_analysis_eligible() && max_level.is_some_and(|l| l >= cfg.threshold);
            let suggested = if revealing && hot {
                a.setting().stricter_by(cfg.step)
            } else {
                a.setting()
            };
            if suggested != a.setting() {
                rationale.push(format!(
                    "album {} is {} and holds a photo at {} ({})",
                    a.album_id(),
                    a.setting(),
                    max_level.expect("hot album has photos").code(),
                    max_level.expect("hot album has photos").describe()
                ));
            }
            AlbumSuggestion {
                album_id: a.album_id().to_string(),
                current: a.setting(),
                suggested,
                max_level,
            }
        })
        .collect();

    let changed = albums.iter().any(|a| a.current != a.suggested);
    let summary = if !revealing {
        format!(
            "observed behaviour {} is not more revealing than predicted {}",
            observed.category(),
            predicted.category()
        )
    } else if changed {
        format!(
            "observed behaviour {} is more revealing than predicted {} ({} faces, {} tags in {} visible photos)",
            observed.category(),
            predicted.category(),
            exposure.n_faces,
            exposure.n_tags,
            exposure.n_photos
        )
    } else {
        format!(
            "observed behaviour {} is more revealing than predicted {} but no visible album reaches {}",
            observed.category(),
            predicted.category(),
            cfg.threshold.code()
        )
    };
    rationale.insert(0, summary);
    Ok(Recommendation {
        user_id: user.user_id().to_string(),
        predicted: predicted.category(),
        observed: observed.category(),
        action: if changed { Action::Tighten } else { Action::NoChange },
        albums,
        rationale,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeRow {
    pub attribute: Attribute,
    /// `None` when undisclosed.
    pub value: Option<String>,
    pub always_public: bool,
    /// Share of all users who left this attribute empty.
    pub population_missing_percent: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterestsSummary {
    pub books: usize,
    pub music: usize,
    pub tv: usize,
    pub movies: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlbumRow {
    pub album_id: String,
    pub name: String,
    pub setting: VisibilitySetting,
    pub photos: usize,
    pub analysed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhotoRow {
    pub album_id: String,
    pub photo_id: String,
    pub faces: usize,
    pub tags: usize,
    pub level: PrivacyLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskKind {
    AlwaysPublicAttribute,
    TagOnFace,
    MoreTagsThanFaces,
}

impl RiskKind {
    fn text(self) -> &'static str {
        match self {
            RiskKind::AlwaysPublicAttribute => "always public",
            RiskKind::TagOnFace => "tag placed on face",
            RiskKind::MoreTagsThanFaces => "more tags than faces",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiskFlag {
    /// Attribute name or photo id.
    pub subject: String,
    pub kinds: Vec<RiskKind>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRow {
    pub three: Category,
    pub five: Category,
    pub seven: Category,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExposureRow {
    pub photos: usize,
    pub total_photos: usize,
    pub faces: usize,
    pub tags: usize,
    pub photos_with_faces: usize,
    pub max_level: Option<PrivacyLevel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrivacyReport {
    pub user_id: String,
    pub attributes: Vec<AttributeRow>,
    pub interests: InterestsSummary,
    pub albums: Vec<AlbumRow>,
    /// Photos of Public and Friends-of-Friends albums only.
    pub photos: Vec<PhotoRow>,
    pub exposure: ExposureRow,
    pub labels: LabelRow,
    pub risk_flags: Vec<RiskFlag>,
    pub recommendation: Recommendation,
}

pub fn build_report(
    user: &UserRecord,
    exposure: &UserExposure,
    labels: &Labels,
    stats: Option<&DisclosureStats>,
    recommendation: Recommendation,
    geometry: &GeometryConfig,
) -> PrivacyReport {
    let profile = user.profile();
    let attributes: Vec<AttributeRow> = Attribute::ALL
        .iter()
        .map(|&a| AttributeRow {
            attribute: a,
            value: match a {
                Attribute::Age => profile.age().map(|v| v.to_string()),
                _ => profile.get(a).as_known().map(str::to_string),
            },
            always_public: a.is_always_public(),
            population_missing_percent: stats.and_then(|s| s.get(a).missing_percent),
        })
        .collect();

    let mut risk_flags: Vec<RiskFlag> = attributes
        .iter()
        .filter(|r| r.always_public && r.value.is_some())
        .map(|r| RiskFlag {
            subject: r.attribute.to_string(),
            kinds: vec![RiskKind::AlwaysPublicAttribute],
            message: format!("{} is {}", r.attribute, RiskKind::AlwaysPublicAttribute.text()),
        })
        .collect();

    let mut photos = Vec::new();
    for album in user.albums().iter().filter(|a| a.is_analysis_eligible()) {
        for p in album.photos() {
            let level = classify_photo(p, geometry);
            let mut kinds = Vec::new();
            if level.has_tag_on_face() {
                kinds.push(RiskKind::TagOnFace);
            }
            if matches!(level, PrivacyLevel::L5OffFaceTagsGtFaces | PrivacyLevel::L8OnFaceTagsGtFaces) {
                kinds.push(RiskKind::MoreTagsThanFaces);
            }
            if !kinds.is_empty() {
                let message = kinds.iter().map(|k| k.text()).collect::<Vec<_>>().join("; ");
                risk_flags.push(RiskFlag {
                    subject: p.photo_id().to_string(),
                    kinds,
                    message,
                });
            }
            photos.push(PhotoRow {
                album_id: album.album_id().to_string(),
                photo_id: p.photo_id().to_string(),
                faces: p.faces().len(),
                tags: p.tags().len(),
                level,
            });
        }
    }

    let i = profile.interests();
    PrivacyReport {
        user_id: user.user_id().to_string(),
        attributes,
        interests: InterestsSummary {
            books: i.books.len(),
            music: i.music.len(),
            tv: i.tv.len(),
            movies: i.movies.len(),
        },
        albums: user
            .albums()
            .iter()
            .map(|a| AlbumRow {
                album_id: a.album_id().to_string(),
                name: a.name().to_string(),
                setting: a.setting(),
                photos: a.photos().len(),
                analysed: a.is_analysis_eligible(),
            })
            .collect(),
        photos,
        exposure: ExposureRow {
            photos: exposure.n_photos,
            total_photos: exposure.n_total_photos,
            faces: exposure.n_faces,
            tags: exposure.n_tags,
            photos_with_faces: exposure.n_photos_with_faces,
            max_level: exposure.max_level,
        },
        labels: LabelRow {
            three: labels.three.category(),
            five: labels.five.category(),
            seven: labels.seven.category(),
        },
        risk_flags,
        recommendation,
    }
}

impl PrivacyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            source_name: "report".into(),
            message: e.to_string(),
        })
    }

    pub fn render(&self) -> String {
        let mut out = format!("== user {} ==\n\nprofile\n", self.user_id);
        for a in &self.attributes {
            let _ = write!(out, "  {:<16}{}", a.attribute.name(), a.value.as_deref().unwrap_or("?"));
            if a.always_public {
                out.push_str("  [always public]");
            }
            if let Some(p) = a.population_missing_percent {
                let _ = write!(out, "  ({p}% of users leave this empty)");
            }
            out.push('\n');
        }
        let i = &self.interests;
        let _ = writeln!(
            out,
            "  interests       books {}, music {}, tv {}, movies {}",
            i.books, i.music, i.tv, i.movies
        );
        out.push_str("\nalbums\n");
        for a in &self.albums {
            let _ = writeln!(
                out,
                "  {:<12}{:<20}{:<20}{} photos{}",
                a.album_id,
                a.name,
                a.setting.to_string(),
                a.photos,
                if a.analysed { "" } else { " (not analysed)" }
            );
        }
        out.push_str("\nphotos\n");
        for p in &self.photos {
            let _ = writeln!(
                out,
                "  {:<12}{:<16}faces {} tags {}  {} {}",
                p.album_id,
                p.photo_id,
                p.faces,
                p.tags,
                p.level.code(),
                p.level.describe()
            );
        }
        let e = &self.exposure;
        let _ = writeln!(
            out,
            "\nexposure\n  visible photos {} of {}, faces {}, tags {}, photos with faces {}, max level {}",
            e.photos,
            e.total_photos,
            e.faces,
            e.tags,
            e.photos_with_faces,
            e.max_level.map_or("-", |l| l.code())
        );
        let l = &self.labels;
        let _ = writeln!(out, "\nlabels\n  3-class {}  5-class {}  7-class {}", l.three, l.five, l.seven);
        out.push_str("\nrisks\n");
        if self.risk_flags.is_empty() {
            out.push_str("  none\n");
        }
        for r in &self.risk_flags {
            let _ = writeln!(out, "  {}: {}", r.subject, r.message);
        }
        out.push_str("\nrecommendation\n");
        for line in self.recommendation.render().lines() {
            let _ = writeln!(out, "  {line}");
        }
        out
    }
}

/// Settings for running recommendations over a whole dataset.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineConfig {
    pub geometry: GeometryConfig,
    pub rule: FiveClassRule,
    pub k: Option<usize>,
    pub recommend: RecommendConfig,
}

/// 7-class category of each user predicted from the profile attributes of
/// the other users (leave-one-out KNN).
pub fn predicted_categories(data: &LabeledUsers<'_>, k: usize) -> Result<Vec<PrivacyCategory>> {
    let schema = Schema::profile();
    let model = KnnModel::new(schema.clone(), data.examples(&schema, Scheme::Seven), k)?;
    (0..data.users.len()).map(|i| model.predict_leave_one_out(i)).collect()
}

pub fn build_reports(dataset: &Dataset, cfg: &PipelineConfig) -> Result<Vec<PrivacyReport>> {
    let stats = compute_stats(dataset.users())?;
    let data = LabeledUsers::new(dataset, &cfg.geometry, cfg.rule);
    let predicted = predicted_categories(&data, cfg.k.unwrap_or(KnnModel::DEFAULT_K))?;
    data.users
        .iter()
        .enumerate()
        .map(|(i, user)| {
            let exposure = &data.exposures[i];
            let labels = Labels::of(exposure, cfg.rule);
            let rec = recommend(user, exposure, labels.seven, predicted[i], &cfg.recommend, &cfg.geometry)?;
            Ok(build_report(user, exposure, &labels, Some(&stats), rec, &cfg.geometry))
        })
        .collect()
}

/// One CSV row per report.
pub fn reports_to_csv(reports: &[PrivacyReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [
        "user_id",
        "label_3",
        "label_5",
        "label_7",
        "predicted_7",
        "visible_photos",
        "total_photos",
        "faces",
        "tags",
        "max_level",
        "risk_flags",
        "action",
        "albums_tightened",
    ];
    let csv_err = |e: csv::Error| Error::Contract(format!("csv export: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for r in reports {
        let tightened: Vec<&str> = r.recommendation.changed_albums().map(|a| a.album_id.as_str()).collect();
        w.write_record([
            r.user_id.clone(),
            r.labels.three.to_string(),
            r.labels.five.to_string(),
            r.labels.seven.to_string(),
            r.recommendation.predicted.to_string(),
            r.exposure.photos.to_string(),
            r.exposure.total_photos.to_string(),
            r.exposure.faces.to_string(),
            r.exposure.tags.to_string(),
            r.exposure.max_level.map_or("", |l| l.code()).to_string(),
            r.risk_flags.len().to_string(),
            match r.recommendation.action {
                Action::Tighten => "tighten".into(),
                Action::NoChange => "no_change".into(),
            },
            tightened.join(";"),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Contract(format!("csv export: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
