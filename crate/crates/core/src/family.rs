//! Finite credal families and the JSON model format.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result, ValidationError};
use crate::rational::{format_rational, one, parse_rational, to_f64, zero, Rational};
use crate::state::{StateSet, StateSpace};

/// A probability mass function with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pmf {
    mass: Vec<Rational>,
}

impl Pmf {
    /// Checks non-negativity and an exact unit sum.
    pub fn new(mass: Vec<Rational>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::Precondition("pmf over an empty space".into()));
        }
        if mass.iter().any(|m| m.is_negative()) {
            return Err(Error::Precondition("pmf with negative mass".into()));
        }
        let sum: Rational = mass.iter().sum();
        if sum != one() {
            return Err(Error::Precondition(format!("pmf sums to {sum}")));
        }
        Ok(Self { mass })
    }

    pub fn dirac(n: usize, at: usize) -> Self {
        let mut mass = vec![zero(); n];
        mass[at] = one();
        Self { mass }
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn mass(&self) -> &[Rational] {
        &self.mass
    }

    pub fn get(&self, y: usize) -> &Rational {
        &self.mass[y]
    }

    pub fn support(&self) -> StateSet {
        (0..self.mass.len()).filter(|&y| !self.mass[y].is_zero()).collect()
    }

    pub fn expectation(&self, f: &[Rational]) -> Rational {
        self.mass.iter().zip(f).filter(|(p, _)| !p.is_zero()).map(|(p, v)| p * v).sum()
    }

    /// Keeps the coordinates in `class` (in increasing order), or `None` if
    /// some mass falls outside it.
    pub fn restrict(&self, class: &StateSet) -> Option<Pmf> {
        let outside = (0..self.mass.len()).any(|y| !class.contains(&y) && !self.mass[y].is_zero());
        if outside {
            return None;
        }
        Some(Pmf { mass: class.iter().map(|&y| self.mass[y].clone()).collect() })
    }
}

/// A non-empty finite set of pmfs per state; the finitely generated
/// representation of an upper transition operator.
#[derive(Clone)]
pub struct CredalFamily {
    states: StateSpace,
    per_state: Vec<Vec<Pmf>>,
    floats: Vec<Vec<Vec<f64>>>,
}

impl PartialEq for CredalFamily {
    fn eq(&self, other: &Self) -> bool {
        self.states.labels() == other.states.labels() && self.per_state == other.per_state
    }
}

impl Eq for CredalFamily {}

impl fmt::Debug for CredalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, set) in self.per_state.iter().enumerate() {
            let rendered: Vec<Vec<String>> =
                set.iter().map(|p| p.mass.iter().map(format_rational).collect()).collect();
            m.entry(&self.states.label(x), &rendered);
        }
        m.finish()
    }
}

impl CredalFamily {
    /// Builds a family, sorting each set and removing duplicate pmfs.
    pub fn new(states: StateSpace, per_state: Vec<Vec<Pmf>>) -> Result<Self> {
        states.check_len(per_state.len())?;
        let mut errors = Vec::new();
        let mut canonical = Vec::with_capacity(per_state.len());
        for (x, mut set) in per_state.into_iter().enumerate() {
            if set.is_empty() {
                errors.push(ValidationError::EmptySet { state: states.label(x).to_string() });
            }
            for p in &set {
                states.check_len(p.len())?;
            }
            set.sort();
            set.dedup();
            canonical.push(set);
        }
        if !errors.is_empty() {
            return Err(Error::Validation(errors));
        }
        let floats = canonical
            .iter()
            .map(|set| set.iter().map(|p| p.mass.iter().map(to_f64).collect()).collect())
            .collect();
        Ok(Self { states, per_state: canonical, floats })
    }

    /// `P_x = {𝟙_x}` for every state.
    pub fn identity(states: StateSpace) -> Self {
        let n = states.len();
        let sets = (0..n).map(|x| vec![Pmf::dirac(n, x)]).collect();
        Self::new(states, sets).expect("identity family is valid")
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pmfs(&self, x: usize) -> &[Pmf] {
        &self.per_state[x]
    }

    /// True when every state has a single pmf, i.e. a precise chain.
    pub fn is_precise(&self) -> bool {
        self.per_state.iter().all(|s| s.len() == 1)
    }

    pub fn upper_exact(&self, f: &[Rational]) -> Result<Vec<Rational>> {
        self.states.check_len(f.len())?;
        Ok(self
            .per_state
            .iter()
            .map(|set| set.iter().map(|p| p.expectation(f)).max().expect("non-empty set"))
            .collect())
    }

    pub fn upper_f64(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.states.check_len(f.len())?;
        Ok(self.upper_f64_unchecked(f))
    }

    pub(crate) fn upper_f64_unchecked(&self, f: &[f64]) -> Vec<f64> {
        self.floats
            .iter()
            .map(|set| {
                set.iter()
                    .map(|p| p.iter().zip(f).map(|(a, b)| a * b).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }

    /// `max_{p ∈ P_x} p(y)`.
    pub fn max_mass(&self, x: usize, y: usize) -> Rational {
        self.per_state[x].iter().map(|p| p.get(y).clone()).max().expect("non-empty set")
    }

    /// Keeps, for each state in `class`, the pmfs supported inside `class`.
    pub fn restrict(&self, class: &StateSet) -> Result<CredalFamily> {
        if class.is_empty() {
            return Err(Error::Precondition("restriction to an empty class".into()));
        }
        if let Some(&bad) = class.iter().find(|&&x| x >= self.len()) {
            self.states.check_index(bad)?;
        }
        let mut sets = Vec::with_capacity(class.len());
        for &x in class {
            let set: Vec<Pmf> = self.per_state[x].iter().filter_map(|p| p.restrict(class)).collect();
            if set.is_empty() {
                return Err(Error::NotWellDefined { state: self.states.label(x).to_string() });
            }
            sets.push(set);
        }
        CredalFamily::new(self.states.subspace(class), sets)
    }

    pub fn to_model(&self) -> ModelFile {
        let mut credal_sets = BTreeMap::new();
        for (x, set) in self.per_state.iter().enumerate() {
            let pmfs = set
                .iter()
                .map(|p| {
                    p.mass
                        .iter()
                        .enumerate()
                        .filter(|(_, m)| !m.is_zero())
                        .map(|(y, m)| (self.states.label(y).to_string(), MassText(format_rational(m))))
                        .collect()
                })
                .collect();
            credal_sets.insert(self.states.label(x).to_string(), pmfs);
        }
        ModelFile { states: self.states.labels().to_vec(), credal_sets }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_model()).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        validate_family(&ModelFile::from_json(text)?)
    }
}

/// A rational written as a JSON string. Bare JSON numbers are refused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct MassText(pub String);

impl<'de> Deserialize<'de> for MassText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MassVisitor;

        fn bare<E: de::Error>(shown: String) -> E {
            E::custom(format!(
                "bare JSON number {shown} is not accepted; write masses as strings such as \"1/4\" or \"0.25\""
            ))
        }

        impl Visitor<'_> for MassVisitor {
            type Value = MassText;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string such as \"1/4\" or \"0.25\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<MassText, E> {
                Ok(MassText(v.to_string()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<MassText, E> {
                Err(bare(v.to_string()))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<MassText, E> {
                Err(bare(v.to_string()))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<MassText, E> {
                Err(bare(v.to_string()))
            }
        }

        deserializer.deserialize_any(MassVisitor)
    }
}

/// The on-disk model: `{"states": [...], "credal_sets": {"x": [{"y": "1/2"}, ...]}}`.
/// Omitted entries of a pmf carry mass 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub states: Vec<String>,
    pub credal_sets: BTreeMap<String, Vec<BTreeMap<String, MassText>>>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: {
                let full = e.to_string();
                let suffix = format!(" at line {} column {}", e.line(), e.column());
                full.strip_suffix(&suffix).map(str::to_string).unwrap_or(full)
            },
        })
    }
}

/// Validates a parsed model, reporting every problem found.
pub fn validate_family(raw: &ModelFile) -> Result<CredalFamily> {
    let states = StateSpace::new(raw.states.iter().cloned())?;
    let n = states.len();
    let mut errors = Vec::new();

    for key in raw.credal_sets.keys() {
        if states.index_of(key).is_none() {
            errors.push(ValidationError::UnknownState {
                label: key.clone(),
                context: "credal_sets".into(),
            });
        }
    }

    let mut per_state = Vec::with_capacity(n);
    for x in 0..n {
        let label = states.label(x);
        let Some(raw_set) = raw.credal_sets.get(label) else {
            errors.push(ValidationError::MissingState { label: label.to_string() });
            per_state.push(Vec::new());
            continue;
        };
        if raw_set.is_empty() {
            errors.push(ValidationError::EmptySet { state: label.to_string() });
        }
        let mut set = Vec::with_capacity(raw_set.len());
        for (k, entries) in raw_set.iter().enumerate() {
            let mut mass = vec![zero(); n];
            let mut ok = true;
            for (target, text) in entries {
                let Some(y) = states.index_of(target) else {
                    errors.push(ValidationError::UnknownState {
                        label: target.clone(),
                        context: format!("pmf #{k} of state `{label}`"),
                    });
                    ok = false;
                    continue;
                };
                match parse_rational(&text.0) {
                    Ok(v) if v.is_negative() => {
                        errors.push(ValidationError::NegativeMass {
                            state: label.to_string(),
                            pmf: k,
                            target: target.clone(),
                            value: format_rational(&v),
                        });
                        ok = false;
                    }
                    Ok(v) => mass[y] = v,
                    Err(_) => {
                        errors.push(ValidationError::BadRational {
                            state: label.to_string(),
                            pmf: k,
                            target: target.clone(),
                            text: text.0.clone(),
                        });
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            let sum: Rational = mass.iter().sum();
            if sum != one() {
                errors.push(ValidationError::BadSum {
                    state: label.to_string(),
                    pmf: k,
                    sum: format_rational(&sum),
                });
                continue;
            }
            set.push(Pmf { mass });
        }
        per_state.push(set);
    }

    if !errors.is_empty() {
        return Err(Error::Validation(errors));
    }
    CredalFamily::new(states, per_state)
}
