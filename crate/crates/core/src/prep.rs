//! Canonicalization of free-text profile values and dataset disclosure
//! statistics.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::model::{Attribute, AttrValue, UserProfile, UserRecord, VisibilitySetting};

/// Seed table shipped with the crate.
pub const DEFAULT_TABLE: &str = include_str!("../data/canon.tsv");

const REGION: &str = "region";

/// Lookup key for a raw value: trimmed, NFC-normalized, lower-cased.
pub fn normalize_key(raw: &str) -> String {
    let lowered: String = raw.trim().nfc().collect::<String>().to_lowercase();
    lowered.nfc().collect::<String>().trim().to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Mapped,
    Passthrough,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub value: String,
    pub provenance: Provenance,
}

/// Raw-to-canonical value maps per attribute, plus a region-to-country map
/// for "City, Region" locations.
#[derive(Debug, Clone, Default)]
pub struct CanonTable {
    entries: HashMap<Attribute, HashMap<String, String>>,
    regions: HashMap<String, String>,
}

impl CanonTable {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The table seeded from `data/canon.tsv`.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_TABLE, "builtin canon table").expect("builtin table is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses `attribute<TAB>raw<TAB>canonical` lines; `#` starts a comment
    /// line. Every canonical value becomes a key for itself, and region
    /// countries become fixed points of `location` and `hometown`.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut table = CanonTable::default();
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let bad = |msg: String| Error::Parse {
                source_name: source_name.to_string(),
                message: format!("line {}: {msg}", lineno + 1),
            };
            if fields.len() != 3 {
                return Err(bad(format!("expected 3 tab-separated fields, found {}", fields.len())));
            }
            let (attr, raw, canonical) = (fields[0].trim(), fields[1], fields[2].trim());
            if normalize_key(raw).is_empty() || canonical.is_empty() {
                return Err(bad("empty raw or canonical value".into()));
            }
            if attr == REGION {
                table.add_region(raw, canonical).map_err(|e| bad(e.to_string()))?;
            } else {
                let attribute: Attribute = attr.parse().map_err(|e: Error| bad(e.to_string()))?;
                if attribute == Attribute::Age {
                    return Err(bad("age is numeric and cannot be canonicalized".into()));
                }
                table.add(attribute, raw, canonical).map_err(|e| bad(e.to_string()))?;
            }
        }
        table.close()?;
        Ok(table)
    }

    /// Adds one mapping. Conflicting duplicates are rejected.
    pub fn add(&mut self, attribute: Attribute, raw: &str, canonical: &str) -> Result<()> {
        let map = self.entries.entry(attribute).or_default();
        insert_unique(map, normalize_key(raw), canonical, attribute.name())
    }

    pub fn add_region(&mut self, region: &str, country: &str) -> Result<()> {
        insert_unique(&mut self.regions, normalize_key(region), country, REGION)
    }

    /// Makes every canonical value a fixed point of its attribute.
    fn close(&mut self) -> Result<()> {
        let countries: Vec<String> = self.regions.values().cloned().collect();
        for attr in [Attribute::Location, Attribute::Hometown] {
            for c in &countries {
                self.add(attr, c, c)?;
            }
        }
        let mut pending = Vec::new();
        for (attr, map) in &self.entries {
            for canonical in map.values() {
                pending.push((*attr, canonical.clone()));
            }
        }
        for (attr, canonical) in pending {
            self.add(attr, &canonical, &canonical)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(HashMap::len).sum::<usize>() + self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Maps a raw value to its canonical form. Unmatched values come back
    /// key-normalized and flagged as passthrough.
    pub fn canonicalize(&self, attribute: Attribute, raw: &str) -> Result<Canonical> {
        let key = normalize_key(raw);
        if key.is_empty() {
            return Err(Error::Contract(format!(
                "blank {attribute} value passed to canonicalize"
            )));
        }
        let mapped = |value: &str| Canonical {
            value: value.to_string(),
            provenance: Provenance::Mapped,
        };
        if let Some(c) = self.entries.get(&attribute).and_then(|m| m.get(&key)) {
            return Ok(mapped(c));
        }
        if matches!(attribute, Attribute::Location | Attribute::Hometown) {
            if let Some((_, region)) = key.rsplit_once(',') {
                if let Some(country) = self.regions.get(&normalize_key(region)) {
                    return Ok(mapped(country));
                }
            }
        }
        Ok(Canonical {
            value: key,
            provenance: Provenance::Passthrough,
        })
    }

    /// Canonicalizes every categorical attribute of a profile. Missing
    /// values stay missing.
    pub fn canonicalize_profile(&self, profile: UserProfile) -> Result<UserProfile> {
        let mut out = profile;
        for attr in Attribute::CATEGORICAL {
            if let AttrValue::Known(raw) = out.get(attr) {
                let c = self.canonicalize(attr, &raw)?;
                out = out.with(attr, AttrValue::known(c.value)?);
            }
        }
        Ok(out)
    }
}

fn insert_unique(map: &mut HashMap<String, String>, key: String, canonical: &str, what: &str) -> Result<()> {
    match map.get(&key) {
        Some(existing) if existing != canonical => Err(Error::validation(format!(
            "{what}: `{key}` maps to both `{existing}` and `{canonical}`"
        ))),
        Some(_) => Ok(()),
        None => {
            map.insert(key, canonical.to_string());
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttributeStat {
    pub attribute: Attribute,
    pub missing_count: usize,
    pub total_count: usize,
    /// Rounded half-up; `None` when no user could have reported it.
    pub missing_percent: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GenderTotals {
    pub users: usize,
    /// Faces in Public and Friends-of-Friends albums.
    pub faces: usize,
    pub tags: usize,
    pub albums: usize,
    pub public_albums: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisclosureStats {
    pub users: usize,
    pub attributes: Vec<AttributeStat>,
    /// Keyed by gender value, `?` for undisclosed.
    pub by_gender: BTreeMap<String, GenderTotals>,
}

impl DisclosureStats {
    pub fn get(&self, attribute: Attribute) -> &AttributeStat {
        self.attributes
            .iter()
            .find(|a| a.attribute == attribute)
            .expect("every attribute is reported")
    }

    pub fn render(&self) -> String {
        let mut out = format!("users\t{}\n\nattribute\tmissing\ttotal\tmissing%\n", self.users);
        for a in &self.attributes {
            let pct = a
                .missing_percent
                .map_or_else(|| "n/a".to_string(), |p| format!("{p}%"));
            out.push_str(&format!("{}\t{}\t{}\t{}\n", a.attribute, a.missing_count, a.total_count, pct));
        }
        out.push_str("\ngender\tusers\tfaces\ttags\talbums\tpublic_albums\n");
        for (g, t) in &self.by_gender {
            out.push_str(&format!(
                "{g}\t{}\t{}\t{}\t{}\t{}\n",
                t.users, t.faces, t.tags, t.albums, t.public_albums
            ));
        }
        out
    }
}

/// Integer percent, rounded half-up.
pub fn percent_half_up(part: usize, whole: usize) -> Option<u32> {
    if whole == 0 {
        return None;
    }
    Some(((200 * part + whole) / (2 * whole)) as u32)
}

pub fn compute_stats(users: &[UserRecord]) -> Result<DisclosureStats> {
    if users.is_empty() {
        return Err(Error::Empty("cannot compute statistics of an empty dataset".into()));
    }
    let attributes = Attribute::ALL
        .iter()
        .map(|&attribute| {
            let missing_count = users
                .iter()
                .filter(|u| !u.profile().is_disclosed(attribute))
                .count();
            AttributeStat {
                attribute,
                missing_count,
                total_count: users.len(),
                missing_percent: percent_half_up(missing_count, users.len()),
            }
        })
        .collect();

    let mut by_gender: BTreeMap<String, GenderTotals> = BTreeMap::new();
    for user in users {
        let totals = by_gender
            .entry(user.profile().get(Attribute::Gender).to_string())
            .or_default();
        totals.users += 1;
        totals.albums += user.albums().len();
        totals.public_albums += user
            .albums()
            .iter()
            .filter(|a| a.setting() == VisibilitySetting::Public)
            .count();
        for photo in user.eligible_photos() {
            totals.faces += photo.faces().len();
            totals.tags += photo.tags().len();
        }
    }
    Ok(DisclosureStats {
        users: users.len(),
        attributes,
        by_gender,
    })
}
