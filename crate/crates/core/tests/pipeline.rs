use facetag_privacy::detector::{FaceDetector, FileDetector};
use facetag_privacy::geometry::GeometryConfig;
use facetag_privacy::labeling::FiveClassRule;
use facetag_privacy::ml::{evaluate, split, train_tree, DecisionTree, LabeledUsers, Schema, SplitSpec, TreeParams};
use facetag_privacy::model::{PhotoAnnotation, Scheme};
use facetag_privacy::recommend::{build_reports, reports_to_csv, Action, PipelineConfig, PrivacyReport};
use facetag_privacy::synth::{generate, SynthConfig};

#[test]
fn reports_round_trip_and_agree_with_labels() {
    let out = generate(&SynthConfig::default().with_users(120).with_seed(9)).unwrap();
    let reports = build_reports(&out.dataset, &PipelineConfig::default()).unwrap();
    assert_eq!(reports.len(), 120);
    for (r, intended) in reports.iter().zip(&out.intended) {
        assert_eq!(r.labels.seven, *intended);
        let json = r.to_json();
        assert_eq!(PrivacyReport::from_json(&json).unwrap().to_json(), json);
        if r.recommendation.action == Action::Tighten {
            assert!(r.recommendation.observed > r.recommendation.predicted);
            assert!(r.recommendation.changed_albums().all(|a| a.suggested > a.current));
        }
    }
    let csv = reports_to_csv(&reports).unwrap();
    assert_eq!(csv.lines().count(), 121);
}

#[test]
fn tree_json_round_trip_predicts_identically() {
    let out = generate(&SynthConfig::default().with_users(300).with_seed(2)).unwrap();
    let data = LabeledUsers::new(&out.dataset, &GeometryConfig::default(), FiveClassRule::default());
    let schema = Schema::profile().with_exposure();
    let examples = data.examples(&schema, Scheme::Five);
    let (train, test) = split(&examples, &SplitSpec::new(0.66, 5).unwrap()).unwrap();
    let tree = train_tree(&schema, &train, TreeParams::default()).unwrap();
    let back = DecisionTree::from_json(&tree.to_json()).unwrap();
    for e in &test {
        assert_eq!(tree.predict(&e.x).unwrap(), back.predict(&e.x).unwrap());
    }
    let report = evaluate(&tree, &test).unwrap();
    let total: usize = report.confusion.counts.iter().flatten().sum();
    assert_eq!(total, test.len());
}

#[test]
fn detector_stub_feeds_photo_annotations() {
    let detector = FileDetector::parse(r#"{"p1": [{"x": 0.4, "y": 0.4, "width": 0.2, "height": 0.2}]}"#).unwrap();
    let faces = detector.detect("p1").unwrap();
    let photo = PhotoAnnotation::new("p1", faces, vec![]).unwrap();
    assert_eq!(photo.faces().len(), 1);
    assert!(detector.detect("p2").unwrap().is_empty());
}
