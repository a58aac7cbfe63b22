//! Stakeholder satisfaction: per degree, how many rated choices survived
//! into the final configuration.

mod render;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::stakeholder::{Degree, Literal, StakeholderConfig};

pub use render::{render, render_satisfaction, render_trace_lines, Format, RenderError, ResolutionDocument};

/// An exact, unreduced ratio `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "FractionRepr", into = "FractionRepr")]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

#[derive(Serialize, Deserialize)]
struct FractionRepr {
    num: u64,
    den: u64,
    #[serde(default, skip_deserializing)]
    value: f64,
}

impl From<FractionRepr> for Fraction {
    fn from(r: FractionRepr) -> Self {
        Fraction { num: r.num, den: r.den }
    }
}

impl From<Fraction> for FractionRepr {
    fn from(f: Fraction) -> Self {
        FractionRepr {
            num: f.num,
            den: f.den,
            value: f.value(),
        }
    }
}

impl Fraction {
    /// `None` when `den` is zero.
    pub fn new(num: u64, den: u64) -> Option<Fraction> {
        (den > 0).then_some(Fraction { num, den })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Equality of the rational values.
    pub fn same_value(self, other: Fraction) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Chosen (`d`) and retained (`r`) counts for one degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCell {
    pub degree: u8,
    pub chosen: u64,
    pub retained: u64,
}

impl DegreeCell {
    /// `r / d`; undefined when nothing was chosen at this degree.
    pub fn rate(&self) -> Option<Fraction> {
        Fraction::new(self.retained, self.chosen)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Satisfaction {
    /// Degrees 5 down to 1.
    pub per_degree: Vec<DegreeCell>,
    /// Retained choices over all choices.
    pub overall: Option<Fraction>,
    /// Sum of retained degrees over the sum of all degrees.
    pub weighted: Option<Fraction>,
}

impl Satisfaction {
    fn empty() -> Self {
        Satisfaction {
            per_degree: Degree::all()
                .rev()
                .map(|d| DegreeCell {
                    degree: d.get(),
                    ..DegreeCell::default()
                })
                .collect(),
            overall: None,
            weighted: None,
        }
    }

    pub fn cell(&self, degree: u8) -> Option<&DegreeCell> {
        self.per_degree.iter().find(|c| c.degree == degree)
    }

    fn add(&mut self, degree: Degree, retained: bool) {
        let cell = self
            .per_degree
            .iter_mut()
            .find(|c| c.degree == degree.get())
            .expect("all degrees present");
        cell.chosen += 1;
        cell.retained += retained as u64;
    }

    fn finish(&mut self) {
        let (mut d, mut r, mut wd, mut wr) = (0, 0, 0, 0);
        for c in &self.per_degree {
            d += c.chosen;
            r += c.retained;
            wd += c.chosen * c.degree as u64;
            wr += c.retained * c.degree as u64;
        }
        self.overall = Fraction::new(r, d);
        self.weighted = Fraction::new(wr, wd);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StakeholderSatisfaction {
    pub stakeholder: String,
    #[serde(flatten)]
    pub satisfaction: Satisfaction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatisfactionReport {
    pub per_stakeholder: Vec<StakeholderSatisfaction>,
    pub global: Satisfaction,
    /// Sum of retained degrees over the sum of all degrees; 0 when nobody
    /// rated anything.
    pub weighted_global: Fraction,
}

impl SatisfactionReport {
    pub fn stakeholder(&self, id: &str) -> Option<&Satisfaction> {
        self.per_stakeholder
            .iter()
            .find(|s| s.stakeholder == id)
            .map(|s| &s.satisfaction)
    }
}

/// A choice counts as retained when its exact literal is in `final_config`.
pub fn score(configs: &[StakeholderConfig], final_config: &[Literal]) -> SatisfactionReport {
    let kept: HashSet<&Literal> = final_config.iter().collect();
    let mut global = Satisfaction::empty();
    let mut per_stakeholder = Vec::with_capacity(configs.len());
    for cfg in configs {
        let mut s = Satisfaction::empty();
        for choice in cfg.choices() {
            let retained = kept.contains(&choice.literal);
            s.add(choice.degree, retained);
            global.add(choice.degree, retained);
        }
        s.finish();
        per_stakeholder.push(StakeholderSatisfaction {
            stakeholder: cfg.stakeholder().to_string(),
            satisfaction: s,
        });
    }
    global.finish();
    let weighted_global = global.weighted.unwrap_or(Fraction { num: 0, den: 1 });
    SatisfactionReport {
        per_stakeholder,
        global,
        weighted_global,
    }
}
