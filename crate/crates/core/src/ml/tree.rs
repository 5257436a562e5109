//! C4.5-style decision tree.
//!
//! Splits are chosen by gain ratio among candidates whose information gain
//! is at least the average positive gain. Categorical features split
//! multi-way with one branch per observed value; numeric features split on
//! `<= threshold`. Missing values form their own branch in both cases.
//! No pruning.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{check_schema, FeatureValue, FeatureVector, Labeled, Schema};
use crate::error::{Error, Result};
use crate::model::{Category, PrivacyCategory, Scheme};

// Information gains below this are treated as zero.
const GAIN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    /// Nodes with fewer examples than this become leaves.
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { min_leaf: 2 }
    }
}

pub type Distribution = BTreeMap<Category, usize>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        label: Category,
        distribution: Distribution,
    },
    Categorical {
        feature: usize,
        majority: Category,
        distribution: Distribution,
        branches: BTreeMap<String, Node>,
        missing: Option<Box<Node>>,
    },
    Numeric {
        feature: usize,
        threshold: f64,
        majority: Category,
        distribution: Distribution,
        le: Box<Node>,
        gt: Box<Node>,
        missing: Option<Box<Node>>,
    },
}

impl Node {
    pub fn majority(&self) -> Category {
        match self {
            Node::Leaf { label, .. } => *label,
            Node::Categorical { majority, .. } | Node::Numeric { majority, .. } => *majority,
        }
    }

    pub fn distribution(&self) -> &Distribution {
        match self {
            Node::Leaf { distribution, .. }
            | Node::Categorical { distribution, .. }
            | Node::Numeric { distribution, .. } => distribution,
        }
    }

    pub fn depth(&self) -> usize {
        self.children().map(|c| 1 + c.depth()).max().unwrap_or(0)
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            _ => self.children().map(Node::leaf_count).sum(),
        }
    }

    fn children(&self) -> Box<dyn Iterator<Item = &Node> + '_> {
        match self {
            Node::Leaf { .. } => Box::new(std::iter::empty()),
            Node::Categorical { branches, missing, .. } => {
                Box::new(branches.values().chain(missing.as_deref()))
            }
            Node::Numeric { le, gt, missing, .. } => {
                Box::new([le.as_ref(), gt.as_ref()].into_iter().chain(missing.as_deref()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    schema: Schema,
    scheme: Scheme,
    min_leaf: usize,
    root: Node,
}

/// Shannon entropy in bits of a class histogram.
pub fn entropy<'a>(counts: impl IntoIterator<Item = &'a usize>) -> f64 {
    let counts: Vec<usize> = counts.into_iter().copied().filter(|&c| c > 0).collect();
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    -counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            p * p.log2()
        })
        .sum::<f64>()
}

fn distribution<'a>(labels: impl Iterator<Item = &'a Category>) -> Distribution {
    let mut d = Distribution::new();
    for l in labels {
        *d.entry(*l).or_default() += 1;
    }
    d
}

/// Most frequent class; ties go to the more privacy-preserving category.
fn majority(d: &Distribution) -> Category {
    let mut best: Option<(Category, usize)> = None;
    for (&c, &n) in d {
        if best.is_none_or(|(_, m)| n > m) {
            best = Some((c, n));
        }
    }
    best.map(|(c, _)| c).expect("non-empty distribution")
}

/// Scores of the best split on one feature.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitScore {
    pub feature: usize,
    pub gain: f64,
    pub split_info: f64,
    pub gain_ratio: f64,
    /// Set for numeric splits.
    pub threshold: Option<f64>,
}

/// Partition of example indices produced by a split.
enum Partition {
    Categorical {
        branches: BTreeMap<String, Vec<usize>>,
        missing: Vec<usize>,
    },
    Numeric {
        threshold: f64,
        le: Vec<usize>,
        gt: Vec<usize>,
        missing: Vec<usize>,
    },
}

impl Partition {
    fn parts(&self) -> Vec<&Vec<usize>> {
        match self {
            Partition::Categorical { branches, missing } => {
                branches.values().chain(std::iter::once(missing)).collect()
            }
            Partition::Numeric { le, gt, missing, .. } => vec![le, gt, missing],
        }
    }
}

fn score(labels: &[Category], rows: &[usize], parts: &[&Vec<usize>]) -> Option<(f64, f64)> {
    let non_empty = parts.iter().filter(|p| !p.is_empty()).count();
    if non_empty < 2 {
        return None;
    }
    let n = rows.len() as f64;
    let parent = entropy(distribution(rows.iter().map(|&i| &labels[i])).values());
    let mut children = 0.0;
    let mut split_info = 0.0;
    for part in parts.iter().filter(|p| !p.is_empty()) {
        let w = part.len() as f64 / n;
        children += w * entropy(distribution(part.iter().map(|&i| &labels[i])).values());
        split_info -= w * w.log2();
    }
    Some((parent - children, split_info))
}

fn categorical_partition(xs: &[&FeatureVector], rows: &[usize], feature: usize) -> Partition {
    let mut branches: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut missing = Vec::new();
    for &i in rows {
        match &xs[i].values()[feature] {
            FeatureValue::Cat(v) => branches.entry(v.clone()).or_default().push(i),
            FeatureValue::Num(v) => branches.entry(v.to_string()).or_default().push(i),
            FeatureValue::Missing => missing.push(i),
        }
    }
    Partition::Categorical { branches, missing }
}

fn numeric_value(v: &FeatureValue) -> Option<f64> {
    match v {
        FeatureValue::Num(x) => Some(*x),
        _ => None,
    }
}

/// Best `<=` threshold by information gain; thresholds are observed values.
fn numeric_partition(
    xs: &[&FeatureVector],
    labels: &[Category],
    rows: &[usize],
    feature: usize,
) -> Option<(Partition, f64, f64)> {
    let mut known: Vec<(f64, usize)> = Vec::new();
    let mut missing = Vec::new();
    for &i in rows {
        match numeric_value(&xs[i].values()[feature]) {
            Some(v) => known.push((v, i)),
            None => missing.push(i),
        }
    }
    known.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut best: Option<(f64, f64, f64, usize)> = None;
    for cut in 1..known.len() {
        if known[cut - 1].0 == known[cut].0 {
            continue;
        }
        let le: Vec<usize> = known[..cut].iter().map(|&(_, i)| i).collect();
        let gt: Vec<usize> = known[cut..].iter().map(|&(_, i)| i).collect();
        if let Some((gain, info)) = score(labels, rows, &[&le, &gt, &missing]) {
            if best.is_none_or(|(g, ..)| gain > g) {
                best = Some((gain, info, known[cut - 1].0, cut));
            }
        }
    }
    let (gain, info, threshold, cut) = best?;
    let sorted = |part: &[(f64, usize)]| {
        let mut v: Vec<usize> = part.iter().map(|&(_, i)| i).collect();
        v.sort_unstable();
        v
    };
    Some((
        Partition::Numeric {
            threshold,
            le: sorted(&known[..cut]),
            gt: sorted(&known[cut..]),
            missing,
        },
        gain,
        info,
    ))
}

fn candidate(
    schema: &Schema,
    xs: &[&FeatureVector],
    labels: &[Category],
    rows: &[usize],
    feature: usize,
) -> Option<(SplitScore, Partition)> {
    let (partition, gain, split_info) = if schema.features()[feature].is_numeric() {
        numeric_partition(xs, labels, rows, feature)?
    } else {
        let p = categorical_partition(xs, rows, feature);
        let (gain, info) = score(labels, rows, &p.parts())?;
        (p, gain, info)
    };
    if gain <= GAIN_FLOOR || split_info <= 0.0 {
        return None;
    }
    let threshold = match &partition {
        Partition::Numeric { threshold, .. } => Some(*threshold),
        Partition::Categorical { .. } => None,
    };
    Some((
        SplitScore {
            feature,
            gain,
            split_info,
            gain_ratio: gain / split_info,
            threshold,
        },
        partition,
    ))
}

fn choose(mut cands: Vec<(SplitScore, Partition)>) -> Option<(SplitScore, Partition)> {
    if cands.is_empty() {
        return None;
    }
    let mean_gain = cands.iter().map(|(s, _)| s.gain).sum::<f64>() / cands.len() as f64;
    let mut best: Option<usize> = None;
    for (i, (s, _)) in cands.iter().enumerate() {
        if s.gain + GAIN_FLOOR < mean_gain {
            continue;
        }
        if best.is_none_or(|b| s.gain_ratio > cands[b].0.gain_ratio) {
            best = Some(i);
        }
    }
    best.map(|b| cands.swap_remove(b))
}

/// Best split of the given rows over all features, or `None` when no
/// feature has positive gain. Exposed for inspecting gain ratios.
pub fn best_split(schema: &Schema, examples: &[Labeled], rows: &[usize]) -> Option<SplitScore> {
    let xs: Vec<&FeatureVector> = examples.iter().map(|e| &e.x).collect();
    let labels: Vec<Category> = examples.iter().map(|e| e.y.category()).collect();
    let cands = (0..schema.len())
        .filter_map(|f| candidate(schema, &xs, &labels, rows, f))
        .collect();
    choose(cands).map(|(s, _)| s)
}

struct Builder<'a> {
    schema: &'a Schema,
    xs: Vec<&'a FeatureVector>,
    labels: Vec<Category>,
    min_leaf: usize,
}

impl Builder<'_> {
    fn build(&self, rows: &[usize], used: &BTreeSet<usize>) -> Node {
        let dist = distribution(rows.iter().map(|&i| &self.labels[i]));
        let maj = majority(&dist);
        let leaf = |distribution: Distribution| Node::Leaf {
            label: maj,
            distribution,
        };
        if dist.len() == 1 || rows.len() < self.min_leaf {
            return leaf(dist);
        }
        let cands = (0..self.schema.len())
            .filter(|f| !used.contains(f))
            .filter_map(|f| candidate(self.schema, &self.xs, &self.labels, rows, f))
            .collect();
        let Some((score, partition)) = choose(cands) else {
            return leaf(dist);
        };
        let child = |rows: &[usize], used: &BTreeSet<usize>| -> Option<Box<Node>> {
            (!rows.is_empty()).then(|| Box::new(self.build(rows, used)))
        };
        match partition {
            Partition::Categorical { branches, missing } => {
                let mut used = used.clone();
                used.insert(score.feature);
                Node::Categorical {
                    feature: score.feature,
                    majority: maj,
                    distribution: dist,
                    branches: branches
                        .into_iter()
                        .map(|(v, r)| (v, self.build(&r, &used)))
                        .collect(),
                    missing: child(&missing, &used),
                }
            }
            Partition::Numeric {
                threshold,
                le,
                gt,
                missing,
            } => Node::Numeric {
                feature: score.feature,
                threshold,
                majority: maj,
                distribution: dist,
                le: Box::new(self.build(&le, used)),
                gt: Box::new(self.build(&gt, used)),
                missing: child(&missing, used),
            },
        }
    }
}

pub fn train_tree(schema: &Schema, train: &[Labeled], params: TreeParams) -> Result<DecisionTree> {
    let first = train
        .first()
        .ok_or_else(|| Error::Empty("decision tree needs at least one training example".into()))?;
    let scheme = first.y.scheme();
    for e in train {
        check_schema(schema, &e.x)?;
        if e.y.scheme() != scheme {
            return Err(Error::Contract("training labels mix schemes".into()));
        }
    }
    let builder = Builder {
        schema,
        xs: train.iter().map(|e| &e.x).collect(),
        labels: train.iter().map(|e| e.y.category()).collect(),
        min_leaf: params.min_leaf.max(1),
    };
    let rows: Vec<usize> = (0..train.len()).collect();
    let root = builder.build(&rows, &BTreeSet::new());
    Ok(DecisionTree {
        schema: schema.clone(),
        scheme,
        min_leaf: builder.min_leaf,
        root,
    })
}

impl DecisionTree {
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<PrivacyCategory> {
        check_schema(&self.schema, x)?;
        let mut node = &self.root;
        let category = loop {
            let next = match node {
                Node::Leaf { label, .. } => break *label,
                Node::Categorical {
                    feature,
                    branches,
                    missing,
                    ..
                } => {
                    let key = match &x.values()[*feature] {
                        FeatureValue::Cat(v) => Some(v.clone()),
                        FeatureValue::Num(v) => Some(v.to_string()),
                        FeatureValue::Missing => None,
                    };
                    key.and_then(|k| branches.get(&k)).or(missing.as_deref())
                }
                Node::Numeric {
                    feature,
                    threshold,
                    le,
                    gt,
                    missing,
                    ..
                } => match numeric_value(&x.values()[*feature]) {
                    Some(v) if v <= *threshold => Some(le.as_ref()),
                    Some(_) => Some(gt.as_ref()),
                    None => missing.as_deref(),
                },
            };
            match next {
                Some(n) => node = n,
                None => break node.majority(),
            }
        };
        PrivacyCategory::new(self.scheme, category)
    }

    /// Indented text form, one line per branch.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Node::Leaf { .. } = self.root {
            let _ = writeln!(out, ": {}", leaf_summary(&self.root));
        } else {
            self.render_children(&self.root, 0, &mut out);
        }
        let _ = writeln!(
            out,
            "\nNumber of leaves: {}\nSize of the tree: {}",
            self.root.leaf_count(),
            count_nodes(&self.root)
        );
        out
    }

    fn render_children(&self, node: &Node, depth: usize, out: &mut String) {
        let indent = "|   ".repeat(depth);
        let mut line = |cond: String, child: &Node| {
            if let Node::Leaf { .. } = child {
                let _ = writeln!(out, "{indent}{cond} : {}", leaf_summary(child));
            } else {
                let _ = writeln!(out, "{indent}{cond}");
                self.render_children(child, depth + 1, out);
            }
        };
        match node {
            Node::Leaf { .. } => {}
            Node::Categorical {
                feature,
                branches,
                missing,
                ..
            } => {
                let name = self.schema.features()[*feature].name();
                for (v, child) in branches {
                    line(format!("{name} = {v}"), child);
                }
                if let Some(m) = missing {
                    line(format!("{name} = ?"), m);
                }
            }
            Node::Numeric {
                feature,
                threshold,
                le,
                gt,
                missing,
                ..
            } => {
                let name = self.schema.features()[*feature].name();
                line(format!("{name} <= {threshold}"), le);
                line(format!("{name} > {threshold}"), gt);
                if let Some(m) = missing {
                    line(format!("{name} = ?"), m);
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            source_name: "decision tree".into(),
            message: e.to_string(),
        })
    }
}

fn count_nodes(node: &Node) -> usize {
    1 + node.children().map(count_nodes).sum::<usize>()
}

fn leaf_summary(node: &Node) -> String {
    let d = node.distribution();
    let total: usize = d.values().sum();
    let wrong = total - d.get(&node.majority()).copied().unwrap_or(0);
    if wrong == 0 {
        format!("{} ({total})", node.majority())
    } else {
        format!("{} ({total}/{wrong})", node.majority())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ml::Feature;
    use crate::model::Attribute;

    fn cat(v: &str) -> FeatureValue {
        FeatureValue::Cat(v.into())
    }

    fn ex(values: Vec<FeatureValue>, c: Category) -> Labeled {
        Labeled {
            x: FeatureVector::new(values),
            y: PrivacyCategory::new(Scheme::Seven, c).unwrap(),
        }
    }

    fn schema(list: &str) -> Schema {
        Schema::parse_list(list).unwrap()
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&[4, 0]), 0.0);
        assert!((entropy(&[1, 1]) - 1.0).abs() < 1e-12);
        assert!((entropy(&[1, 1, 1, 1]) - 2.0).abs() < 1e-12);
        assert_eq!(entropy(&[]), 0.0);
    }

    #[test]
    fn single_class_gives_single_leaf() {
        let s = schema("education");
        let train = vec![ex(vec![cat("a")], Category::P), ex(vec![cat("b")], Category::P)];
        let t = train_tree(&s, &train, TreeParams::default()).unwrap();
        assert!(matches!(t.root(), Node::Leaf { label: Category::P, .. }));
    }

    #[test]
    fn separating_attribute_is_chosen() {
        let s = schema("gender,education");
        let train = vec![
            ex(vec![cat("Male"), cat("x")], Category::F),
            ex(vec![cat("Male"), cat("y")], Category::F),
            ex(vec![cat("Female"), cat("x")], Category::U),
            ex(vec![cat("Female"), cat("y")], Category::U),
        ];
        let t = train_tree(&s, &train, TreeParams::default()).unwrap();
        match t.root() {
            Node::Categorical { feature, branches, .. } => {
                assert_eq!(*feature, 0);
                assert_eq!(branches.len(), 2);
                assert!(branches.values().all(|b| matches!(b, Node::Leaf { .. })));
            }
            other => panic!("expected a categorical split, got {other:?}"),
        }
        let best = best_split(&s, &train, &[0, 1, 2, 3]).unwrap();
        assert!((best.gain - 1.0).abs() < 1e-12);
        assert!((best.gain_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_training_set_is_an_error() {
        assert!(matches!(
            train_tree(&schema("education"), &[], TreeParams::default()),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn numeric_threshold_split() {
        let s = schema("age");
        let train: Vec<_> = [(15.0, Category::U), (18.0, Category::U), (40.0, Category::F), (60.0, Category::F)]
            .into_iter()
            .map(|(a, c)| ex(vec![FeatureValue::Num(a)], c))
            .collect();
        let t = train_tree(&s, &train, TreeParams::default()).unwrap();
        match t.root() {
            Node::Numeric { threshold, .. } => assert_eq!(*threshold, 18.0),
            other => panic!("expected a numeric split, got {other:?}"),
        }
        let q = |a| t.predict(&FeatureVector::new(vec![FeatureValue::Num(a)])).unwrap().category();
        assert_eq!(q(20.0), Category::F);
        assert_eq!(q(18.0), Category::U);
        // missing with no missing branch falls back to the root majority, a tie resolved to F
        assert_eq!(t.predict(&FeatureVector::new(vec![FeatureValue::Missing])).unwrap().category(), Category::F);
    }

    #[test]
    fn unseen_value_falls_back() {
        let s = schema("education");
        let train = vec![
            ex(vec![cat("a")], Category::P),
            ex(vec![cat("a")], Category::P),
            ex(vec![cat("b")], Category::U),
            ex(vec![cat("b")], Category::U),
            ex(vec![cat("b")], Category::U),
        ];
        let t = train_tree(&s, &train, TreeParams::default()).unwrap();
        assert_eq!(t.predict(&FeatureVector::new(vec![cat("zzz")])).unwrap().category(), Category::U);

        let mut with_missing = train.clone();
        with_missing.push(ex(vec![FeatureValue::Missing], Category::F));
        with_missing.push(ex(vec![FeatureValue::Missing], Category::F));
        let t = train_tree(&s, &with_missing, TreeParams::default()).unwrap();
        assert_eq!(t.predict(&FeatureVector::new(vec![cat("zzz")])).unwrap().category(), Category::F);
        assert_eq!(t.predict(&FeatureVector::new(vec![FeatureValue::Missing])).unwrap().category(), Category::F);
    }

    #[test]
    fn categorical_feature_not_reused_on_path() {
        let s = schema("education,gender");
        let mut train = Vec::new();
        for (e, g, c) in [
            ("a", "m", Category::F),
            ("a", "f", Category::P),
            ("b", "m", Category::U),
            ("b", "f", Category::U),
            ("a", "m", Category::F),
            ("a", "f", Category::P),
        ] {
            train.push(ex(vec![cat(e), cat(g)], c));
        }
        let t = train_tree(&s, &train, TreeParams { min_leaf: 1 }).unwrap();
        assert!(t.root().depth() <= s.len());
        for e in &train {
            assert_eq!(t.predict(&e.x).unwrap(), e.y);
        }
    }

    #[test]
    fn json_round_trip_and_render() {
        let s = Schema::new(vec![Feature::Profile(Attribute::Gender), Feature::Tags]).unwrap();
        let train = vec![
            ex(vec![cat("Male"), FeatureValue::Num(0.0)], Category::PPlus),
            ex(vec![cat("Male"), FeatureValue::Num(3.0)], Category::U),
            ex(vec![cat("Female"), FeatureValue::Num(0.0)], Category::PPlus),
            ex(vec![FeatureValue::Missing, FeatureValue::Num(5.0)], Category::U),
        ];
        let t = train_tree(&s, &train, TreeParams::default()).unwrap();
        let back = DecisionTree::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        let text = t.render();
        assert!(text.contains("n_tags <= 0 : P+ (2)"), "{text}");
        assert!(text.contains("n_tags > 0 : U (2)"), "{text}");
    }
}
