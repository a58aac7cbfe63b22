//! Stakeholder choices: signed feature literals rated 1 to 5, their
//! ingestion from choice files or JSON, and the merge into one configuration
//! with a per-literal importance ledger.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::model::FeatureModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn sigil(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

/// A feature marked desired (`F`) or undesired (`¬F`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub feature: String,
    pub polarity: Polarity,
}

impl Literal {
    pub fn positive(feature: impl Into<String>) -> Self {
        Literal {
            feature: feature.into(),
            polarity: Polarity::Positive,
        }
    }

    pub fn negative(feature: impl Into<String>) -> Self {
        Literal {
            feature: feature.into(),
            polarity: Polarity::Negative,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }

    pub fn negated(&self) -> Self {
        Literal {
            feature: self.feature.clone(),
            polarity: match self.polarity {
                Polarity::Positive => Polarity::Negative,
                Polarity::Negative => Polarity::Positive,
            },
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_positive() {
            f.write_str("¬")?;
        }
        f.write_str(&self.feature)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed literal `{0}`")]
pub struct LiteralParseError(pub String);

impl FromStr for Literal {
    type Err = LiteralParseError;

    /// Accepts `F`, `¬F` and `-F`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (polarity, name) = if let Some(rest) = s.strip_prefix('¬') {
            (Polarity::Negative, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (Polarity::Negative, rest)
        } else {
            (Polarity::Positive, s)
        };
        if !crate::model::is_valid_name(name) {
            return Err(LiteralParseError(s.to_string()));
        }
        Ok(Literal {
            feature: name.to_string(),
            polarity,
        })
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Importance degree on the ordinal 1 (not important) to 5 (very important)
/// scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Degree(u8);

impl Degree {
    pub const MIN: Degree = Degree(1);
    pub const MAX: Degree = Degree(5);

    pub fn new(value: u8) -> Option<Degree> {
        (1..=5).contains(&value).then_some(Degree(value))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl DoubleEndedIterator<Item = Degree> {
        (1..=5).map(Degree)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = u8::deserialize(deserializer)?;
        Degree::new(v).ok_or_else(|| serde::de::Error::custom(format!("degree {v} outside 1..=5")))
    }
}

/// Non-empty list of degrees kept in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ImportanceList(Vec<Degree>);

impl ImportanceList {
    pub fn single(degree: Degree) -> Self {
        ImportanceList(vec![degree])
    }

    /// Sorts the given degrees; `None` when empty.
    pub fn from_degrees(degrees: impl IntoIterator<Item = Degree>) -> Option<Self> {
        let mut v: Vec<Degree> = degrees.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_unstable_by(|a, b| b.cmp(a));
        Some(ImportanceList(v))
    }

    /// Sorted insert, after any equal degrees already present.
    pub fn insert(&mut self, degree: Degree) {
        let at = self.0.partition_point(|&d| d >= degree);
        self.0.insert(at, degree);
    }

    pub fn max(&self) -> Degree {
        self.0[0]
    }

    pub fn as_slice(&self) -> &[Degree] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl<'de> Deserialize<'de> for ImportanceList {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<Degree>::deserialize(deserializer)?;
        ImportanceList::from_degrees(v).ok_or_else(|| serde::de::Error::custom("empty importance list"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatedChoice {
    pub literal: Literal,
    pub degree: Degree,
}

/// One stakeholder's explicit, rated choices. Every feature appears at most
/// once and exists in the model the config was validated against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StakeholderConfig {
    stakeholder: String,
    choices: Vec<RatedChoice>,
}

impl StakeholderConfig {
    pub fn new(
        stakeholder: impl Into<String>,
        choices: Vec<RatedChoice>,
        model: &FeatureModel,
    ) -> Result<Self, ChoiceError> {
        let stakeholder = stakeholder.into();
        let mut seen = HashSet::new();
        for c in &choices {
            if !model.contains(&c.literal.feature) {
                return Err(ChoiceErrorKind::UnknownFeature(c.literal.feature.clone()).into());
            }
            if !seen.insert(c.literal.feature.as_str()) {
                return Err(ChoiceErrorKind::DuplicateFeature(c.literal.feature.clone()).into());
            }
        }
        Ok(StakeholderConfig { stakeholder, choices })
    }

    pub fn stakeholder(&self) -> &str {
        &self.stakeholder
    }

    pub fn choices(&self) -> &[RatedChoice] {
        &self.choices
    }

    pub fn chose(&self, literal: &Literal) -> bool {
        self.choices.iter().any(|c| &c.literal == literal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChoiceErrorKind {
    #[error("missing `stakeholder: <id>` header")]
    MissingHeader,
    #[error("malformed record `{0}`, expected `<feature>:<+|->:<degree>`")]
    MalformedRecord(String),
    #[error("malformed polarity `{0}`, expected `+` or `-`")]
    MalformedPolarity(String),
    #[error("degree `{0}` outside 1..=5")]
    DegreeOutOfRange(String),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("feature `{0}` chosen more than once")]
    DuplicateFeature(String),
    #[error("malformed literal `{0}`")]
    MalformedLiteral(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ChoiceError {
    pub line: Option<usize>,
    pub kind: ChoiceErrorKind,
}

impl fmt::Display for ChoiceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.kind),
            None => self.kind.fmt(f),
        }
    }
}

impl From<ChoiceErrorKind> for ChoiceError {
    fn from(kind: ChoiceErrorKind) -> Self {
        ChoiceError { line: None, kind }
    }
}

impl ChoiceError {
    fn at(line: usize, kind: ChoiceErrorKind) -> Self {
        ChoiceError { line: Some(line), kind }
    }
}

fn parse_record(record: &str) -> Result<RatedChoice, ChoiceErrorKind> {
    let parts: Vec<&str> = record.split(':').map(str::trim).collect();
    let [feature, polarity, degree] = parts[..] else {
        return Err(ChoiceErrorKind::MalformedRecord(record.to_string()));
    };
    make_choice(feature, polarity, degree)
}

fn make_choice(feature: &str, polarity: &str, degree: &str) -> Result<RatedChoice, ChoiceErrorKind> {
    let polarity = match polarity {
        "+" => Polarity::Positive,
        "-" => Polarity::Negative,
        other => return Err(ChoiceErrorKind::MalformedPolarity(other.to_string())),
    };
    let degree = degree
        .parse::<u8>()
        .ok()
        .and_then(Degree::new)
        .ok_or_else(|| ChoiceErrorKind::DegreeOutOfRange(degree.to_string()))?;
    if !crate::model::is_valid_name(feature) {
        return Err(ChoiceErrorKind::MalformedRecord(feature.to_string()));
    }
    Ok(RatedChoice {
        literal: Literal {
            feature: feature.to_string(),
            polarity,
        },
        degree,
    })
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses a choice file:
///
/// ```text
/// stakeholder: Stk1
/// KeyWordSupport:+:2, DB:+:4
/// Active:-:3
/// ```
///
/// Records are separated by newlines or commas.
pub fn parse_stakeholder_config(text: &str, model: &FeatureModel) -> Result<StakeholderConfig, ChoiceError> {
    let mut stakeholder = None;
    let mut choices = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if stakeholder.is_none() {
            let id = line
                .strip_prefix("stakeholder:")
                .map(str::trim)
                .filter(|id| !id.is_empty())
                .ok_or(ChoiceError::at(lineno, ChoiceErrorKind::MissingHeader))?;
            stakeholder = Some(id.to_string());
            continue;
        }
        for record in line.split(',').map(str::trim).filter(|r| !r.is_empty()) {
            let choice = parse_record(record).map_err(|k| ChoiceError::at(lineno, k))?;
            if !model.contains(&choice.literal.feature) {
                return Err(ChoiceError::at(
                    lineno,
                    ChoiceErrorKind::UnknownFeature(choice.literal.feature),
                ));
            }
            if !seen.insert(choice.literal.feature.clone()) {
                return Err(ChoiceError::at(
                    lineno,
                    ChoiceErrorKind::DuplicateFeature(choice.literal.feature),
                ));
            }
            choices.push(choice);
        }
    }
    let stakeholder = stakeholder.ok_or(ChoiceError::from(ChoiceErrorKind::MissingHeader))?;
    StakeholderConfig::new(stakeholder, choices, model)
}

#[derive(Deserialize)]
struct JsonStakeholder {
    stakeholder: String,
    #[serde(default)]
    choices: Vec<JsonChoice>,
}

#[derive(Deserialize)]
struct JsonChoice {
    feature: String,
    polarity: String,
    degree: serde_json::Value,
}

/// Parses the JSON array form,
/// `[{"stakeholder": .., "choices": [{"feature": .., "polarity": "+", "degree": ..}]}]`.
pub fn parse_stakeholder_json(text: &str, model: &FeatureModel) -> Result<Vec<StakeholderConfig>, ChoiceError> {
    let raw: Vec<JsonStakeholder> =
        serde_json::from_str(text).map_err(|e| ChoiceError::from(ChoiceErrorKind::Json(e.to_string())))?;
    raw.into_iter()
        .map(|s| {
            let choices = s
                .choices
                .iter()
                .map(|c| make_choice(&c.feature, &c.polarity, c.degree.to_string().trim_matches('"')))
                .collect::<Result<Vec<_>, _>>()?;
            StakeholderConfig::new(s.stakeholder, choices, model)
        })
        .collect()
}

/// Parses a whitespace- or comma-separated literal list (`F`, `¬F`, `-F`),
/// checking every feature against the model.
pub fn parse_literal_set(text: &str, model: &FeatureModel) -> Result<Vec<Literal>, ChoiceError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        for tok in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let lit: Literal = tok
                .parse()
                .map_err(|_| ChoiceError::at(i + 1, ChoiceErrorKind::MalformedLiteral(tok.to_string())))?;
            if !model.contains(&lit.feature) {
                return Err(ChoiceError::at(i + 1, ChoiceErrorKind::UnknownFeature(lit.feature)));
            }
            out.push(lit);
        }
    }
    Ok(out)
}

/// The merged configuration: an insertion-ordered literal set plus the
/// importance ledger mapping each literal to its descending degree list.
///
/// Ledger entries outlive removal of their literal from the set, so a
/// literal that comes back later keeps its history.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergedConfiguration {
    literals: IndexSet<Literal>,
    ledger: IndexMap<Literal, ImportanceList>,
}

impl MergedConfiguration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn literals(&self) -> &IndexSet<Literal> {
        &self.literals
    }

    pub fn ledger(&self) -> &IndexMap<Literal, ImportanceList> {
        &self.ledger
    }

    pub fn contains(&self, literal: &Literal) -> bool {
        self.literals.contains(literal)
    }

    pub fn importance(&self, literal: &Literal) -> Option<&ImportanceList> {
        self.ledger.get(literal)
    }

    /// Inserts `degree` into `literal`'s ledger entry, creating it (and
    /// appending the literal to the set) when absent.
    pub fn ledger_insert(&mut self, literal: &Literal, degree: Degree) {
        match self.ledger.get_mut(literal) {
            Some(list) => list.insert(degree),
            None => {
                self.ledger.insert(literal.clone(), ImportanceList::single(degree));
            }
        }
        if !self.literals.contains(literal) {
            self.literals.insert(literal.clone());
        }
    }

    /// Removes the literal from the set, keeping its ledger entry.
    pub fn remove(&mut self, literal: &Literal) -> bool {
        self.literals.shift_remove(literal)
    }
}

/// Merges stakeholder choices in list order, then choice order.
pub fn merge_configs(configs: &[StakeholderConfig]) -> MergedConfiguration {
    let mut merged = MergedConfiguration::new();
    for config in configs {
        for choice in &config.choices {
            merged.ledger_insert(&choice.literal, choice.degree);
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;

    fn d(v: u8) -> Degree {
        Degree::new(v).unwrap()
    }

    fn list(v: &[u8]) -> Vec<u8> {
        v.to_vec()
    }

    fn degrees(l: &ImportanceList) -> Vec<u8> {
        l.as_slice().iter().map(|d| d.get()).collect()
    }

    fn model() -> FeatureModel {
        parse_model("R\n  F?\n  G?\n  DB?\n  KeyWordSupport?\n  Active?\n  https?\n").unwrap()
    }

    #[test]
    fn literal_negation_and_rendering() {
        let f = Literal::positive("F");
        assert_eq!(f.negated().negated(), f);
        assert_eq!(f.to_string(), "F");
        assert_eq!(f.negated().to_string(), "¬F");
        assert_eq!("¬F".parse::<Literal>().unwrap(), f.negated());
        assert_eq!("-F".parse::<Literal>().unwrap(), f.negated());
        assert!("¬".parse::<Literal>().is_err());
    }

    #[test]
    fn degree_bounds() {
        assert!(Degree::new(0).is_none());
        assert!(Degree::new(6).is_none());
        assert_eq!(Degree::all().count(), 5);
    }

    #[test]
    fn ledger_insert_keeps_descending_order() {
        let mut m = MergedConfiguration::new();
        let text = Literal::positive("Text");
        m.ledger_insert(&text, d(4));
        m.ledger_insert(&text, d(2));
        assert_eq!(degrees(m.importance(&text).unwrap()), list(&[4, 2]));

        let f = Literal::positive("F");
        m.ledger_insert(&f, d(5));
        assert_eq!(degrees(m.importance(&f).unwrap()), list(&[5]));

        let mut l = ImportanceList::from_degrees([d(5), d(3)]).unwrap();
        l.insert(d(4));
        assert_eq!(degrees(&l), list(&[5, 4, 3]));
    }

    #[test]
    fn parse_single_line_form() {
        let m = model();
        let cfg = parse_stakeholder_config(
            "stakeholder: Stk1\nKeyWordSupport:+:2, DB:+:4, Active:-:3, https:+:5\n",
            &m,
        )
        .unwrap();
        assert_eq!(cfg.stakeholder(), "Stk1");
        assert_eq!(cfg.choices().len(), 4);
        assert_eq!(cfg.choices()[2].literal, Literal::negative("Active"));
        assert_eq!(cfg.choices()[2].degree, d(3));
    }

    #[test]
    fn parse_empty_choice_list() {
        let cfg = parse_stakeholder_config("# nobody\nstakeholder: S\n", &model()).unwrap();
        assert!(cfg.choices().is_empty());
    }

    #[test]
    fn parse_errors() {
        let m = model();
        let err = parse_stakeholder_config("stakeholder: S\nDB:+:4\nDB:-:2\n", &m).unwrap_err();
        assert_eq!(err, ChoiceError::at(3, ChoiceErrorKind::DuplicateFeature("DB".into())));
        let err = parse_stakeholder_config("stakeholder: S\nDB:+:6\n", &m).unwrap_err();
        assert_eq!(err.kind, ChoiceErrorKind::DegreeOutOfRange("6".into()));
        let err = parse_stakeholder_config("stakeholder: S\nDB:*:3\n", &m).unwrap_err();
        assert_eq!(err.kind, ChoiceErrorKind::MalformedPolarity("*".into()));
        let err = parse_stakeholder_config("stakeholder: S\nNope:+:3\n", &m).unwrap_err();
        assert_eq!(err.kind, ChoiceErrorKind::UnknownFeature("Nope".into()));
        let err = parse_stakeholder_config("DB:+:3\n", &m).unwrap_err();
        assert_eq!(err.kind, ChoiceErrorKind::MissingHeader);
        let err = parse_stakeholder_config("stakeholder: S\nDB+3\n", &m).unwrap_err();
        assert!(matches!(err.kind, ChoiceErrorKind::MalformedRecord(_)));
    }

    #[test]
    fn json_and_text_forms_agree() {
        let m = model();
        let text = parse_stakeholder_config("stakeholder: S\nF:+:3\nG:-:1\n", &m).unwrap();
        let json = parse_stakeholder_json(
            r#"[{"stakeholder":"S","choices":[{"feature":"F","polarity":"+","degree":3},{"feature":"G","polarity":"-","degree":1}]}]"#,
            &m,
        )
        .unwrap();
        assert_eq!(json, vec![text]);
        let err = parse_stakeholder_json(
            r#"[{"stakeholder":"S","choices":[{"feature":"F","polarity":"+","degree":9}]}]"#,
            &m,
        )
        .unwrap_err();
        assert_eq!(err.kind, ChoiceErrorKind::DegreeOutOfRange("9".into()));
    }

    #[test]
    fn merge_single_choice() {
        let m = model();
        let cfg = StakeholderConfig::new(
            "S",
            vec![RatedChoice {
                literal: Literal::positive("F"),
                degree: d(3),
            }],
            &m,
        )
        .unwrap();
        let merged = merge_configs(&[cfg]);
        assert_eq!(merged.literals().len(), 1);
        assert_eq!(degrees(merged.importance(&Literal::positive("F")).unwrap()), list(&[3]));
    }

    #[test]
    fn merge_same_choice_twice() {
        let m = model();
        let mk = |s: &str| {
            StakeholderConfig::new(
                s,
                vec![RatedChoice {
                    literal: Literal::positive("F"),
                    degree: d(2),
                }],
                &m,
            )
            .unwrap()
        };
        let cfgs = [mk("A"), mk("B")];
        let merged = merge_configs(&cfgs);
        // brute listing of every (stakeholder, choice) pair
        let pairs: Vec<(&str, &RatedChoice)> = cfgs
            .iter()
            .flat_map(|c| c.choices().iter().map(move |ch| (c.stakeholder(), ch)))
            .collect();
        let mut expected: Vec<u8> = pairs
            .iter()
            .filter(|(_, ch)| ch.literal == Literal::positive("F"))
            .map(|(_, ch)| ch.degree.get())
            .collect();
        expected.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(merged.literals().len(), 1);
        assert_eq!(degrees(merged.importance(&Literal::positive("F")).unwrap()), expected);
        assert_eq!(expected, list(&[2, 2]));
    }

    #[test]
    fn remove_keeps_ledger() {
        let mut m = MergedConfiguration::new();
        let f = Literal::negative("F");
        m.ledger_insert(&f, d(1));
        assert!(m.remove(&f));
        assert!(!m.contains(&f));
        assert!(m.importance(&f).is_some());
    }
}
