//! Collaborative product-line configuration with importance-rated choices.
//!
//! Stakeholders each pick desired (`F`) and undesired (`¬F`) features of a
//! feature model and rate every pick from 1 to 5. [`resolve_session`]
//! merges the picks, settles `F`/`¬F` and XOR-group conflicts by comparing
//! the descending degree lists of the two sides, propagates `requires` /
//! `excludes` constraints, and repeats until the configuration is valid or
//! stops changing. [`score`] then measures how much of each stakeholder's
//! choices survived.
//!
//! ```
//! use plconf::{parse_model, parse_stakeholder_config, resolve_session, ManagerRule};
//!
//! let model = parse_model("Root\n  A?\n  B?\n---\nrequires A B\n").unwrap();
//! let alice = parse_stakeholder_config("stakeholder: alice\nA:+:4\n", &model).unwrap();
//! let bob = parse_stakeholder_config("stakeholder: bob\nA:-:2\n", &model).unwrap();
//! let outcome = resolve_session(&model, &[alice, bob], &ManagerRule::MostComplete).unwrap();
//! assert!(outcome.valid);
//! assert_eq!(outcome.final_config.len(), 2); // A and B
//! ```

pub mod engine;
pub mod generate;
pub mod model;
pub mod report;
pub mod stakeholder;
pub mod validity;

pub use engine::{
    compare_importance, resolve_session, resolve_session_with_cap, ComparisonResult, Conflict, ConflictKind,
    EngineError, IterationTrace, ManagerRule, PropagationRecord, ResolutionOutcome,
};
pub use model::{parse_model, serialize_model, FeatureModel, ModelError, ParseError};
pub use report::{score, Format, Fraction, SatisfactionReport};
pub use stakeholder::{
    merge_configs, parse_literal_set, parse_stakeholder_config, parse_stakeholder_json, ChoiceError, Degree,
    ImportanceList, Literal, MergedConfiguration, Polarity, RatedChoice, StakeholderConfig,
};
pub use validity::{check_validity, complete, enumerate_valid, is_subsumed, CompleteConfiguration, ValidityReport};
