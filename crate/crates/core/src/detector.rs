//! Face detector client interface.
//!
//! Face rectangles normally arrive already annotated in the dataset. The
//! [`FileDetector`] stub serves precomputed rectangles from a JSON file of
//! the form `{"photo_id": [{"x": .., "y": .., "width": .., "height": ..}]}`
//! in fraction units; no network detector is provided.

use std::collections::BTreeMap;
use std::path::Path;

use crate::dataset_file::RectDoc;
use crate::error::{Error, Result};
use crate::model::FaceRect;

pub trait FaceDetector {
    /// Face rectangles for a photo, in fractions of the image size.
    fn detect(&self, photo_id: &str) -> Result<Vec<FaceRect>>;
}

#[derive(Debug, Clone, Default)]
pub struct FileDetector {
    faces: BTreeMap<String, Vec<FaceRect>>,
}

impl FileDetector {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: BTreeMap<String, Vec<RectDoc>> = serde_json::from_str(text).map_err(|e| Error::Parse {
            source_name: "detector file".into(),
            message: e.to_string(),
        })?;
        let faces = raw
            .into_iter()
            .map(|(id, rects)| {
                let rects = rects
                    .iter()
                    .map(|r| FaceRect::new(r.x, r.y, r.width, r.height))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| e.within(&format!("detector photo {id}")))?;
                Ok((id, rects))
            })
            .collect::<Result<_>>()?;
        Ok(FileDetector { faces })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse(&text)
    }
}

impl FaceDetector for FileDetector {
    /// Photos absent from the file have no detected faces.
    fn detect(&self, photo_id: &str) -> Result<Vec<FaceRect>> {
        Ok(self.faces.get(photo_id).cloned().unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serves_file_rectangles() {
        let d = FileDetector::parse(r#"{"p1": [{"x": 0.1, "y": 0.2, "width": 0.3, "height": 0.3}]}"#).unwrap();
        assert_eq!(d.detect("p1").unwrap().len(), 1);
        assert!(d.detect("other").unwrap().is_empty());
        assert!(FileDetector::parse(r#"{"p1": [{"x": 0.9, "y": 0.2, "width": 0.3, "height": 0.3}]}"#).is_err());
    }
}
