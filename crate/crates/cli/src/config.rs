//! Experiment configuration: a JSON document whose fields can each be
//! overridden from the command line.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use noonsim::detection::{DEFAULT_GRID_SIZE, MIN_GRID_SIZE};
use noonsim::sources::{self, SqueezedVacuumSpec, DEFAULT_PAIR_CUTOFF};
use noonsim::spectrum::DEFAULT_THRESHOLD;
use noonsim::{Complex64, DetectionPattern, Injection, PureState};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Complex pair amplitude, written either as a number or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Alpha {
    Real(f64),
    Complex([f64; 2]),
}

impl Alpha {
    pub fn value(self) -> Complex64 {
        match self {
            Alpha::Real(re) => Complex64::new(re, 0.0),
            Alpha::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Real(re) => write!(f, "{re}"),
            Alpha::Complex([re, im]) => write!(f, "[{re},{im}]"),
        }
    }
}

fn default_cutoff() -> u32 {
    DEFAULT_PAIR_CUTOFF
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezedSource {
    pub alpha: Alpha,
    #[serde(default = "default_cutoff")]
    pub cutoff: u32,
    #[serde(default)]
    pub postselect_total: Option<u32>,
}

/// Which input state to build.
///
/// In JSON this is either the text form accepted by `--source`
/// (`"pair_fock(2)"`) or the tagged form (`{"pair_fock": 2}`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSpec {
    SinglePhoton,
    PairFock(u32),
    SqueezedVacuum(SqueezedSource),
    Noon(u32),
    Kitten(u32),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SourceRepr {
    Text(String),
    Tagged(SourceSpec),
}

fn deserialize_source<'de, D>(de: D) -> Result<SourceSpec, D::Error>
where
    D: serde::Deserializer<'de>,
{
    match SourceRepr::deserialize(de)? {
        SourceRepr::Text(text) => text.parse().map_err(serde::de::Error::custom),
        SourceRepr::Tagged(spec) => Ok(spec),
    }
}

impl SourceSpec {
    /// Builds the (post-selected, if requested) input state and the
    /// post-selection probability.
    pub fn build(&self) -> Result<(PureState, Option<f64>), CliError> {
        let state = match self {
            SourceSpec::SinglePhoton => sources::single_photon(),
            SourceSpec::PairFock(k) => sources::pair_fock(*k),
            SourceSpec::Noon(n) => sources::noon(*n)?,
            SourceSpec::Kitten(n) => sources::kitten_input(*n)?,
            SourceSpec::SqueezedVacuum(sq) => {
                let spec = SqueezedVacuumSpec::new(sq.alpha.value(), sq.cutoff)?;
                let state = sources::squeezed_vacuum(&spec)?;
                if let Some(total) = sq.postselect_total {
                    let (selected, probability) = state.postselect_total(total);
                    if selected.is_zero() {
                        return Err(CliError::Validation(format!(
                            "no {total}-photon component within cutoff {}",
                            sq.cutoff
                        )));
                    }
                    return Ok((selected, Some(probability)));
                }
                state
            }
        };
        if state.is_zero() || state.max_photons() == 0 {
            return Err(CliError::Validation(format!(
                "source {self} carries no photons"
            )));
        }
        Ok((state, None))
    }

    /// NOON states are prepared between the splitters; everything else
    /// enters before the input splitter.
    pub fn default_injection(&self) -> Injection {
        match self {
            SourceSpec::Noon(_) => Injection::Inside,
            _ => Injection::Input,
        }
    }
}

impl fmt::Display for SourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceSpec::SinglePhoton => write!(f, "single_photon"),
            SourceSpec::PairFock(k) => write!(f, "pair_fock({k})"),
            SourceSpec::Noon(n) => write!(f, "noon({n})"),
            SourceSpec::Kitten(n) => write!(f, "kitten({n})"),
            SourceSpec::SqueezedVacuum(sq) => {
                write!(f, "squeezed_vacuum({},{}", sq.alpha, sq.cutoff)?;
                if let Some(t) = sq.postselect_total {
                    write!(f, ",{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for SourceSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || {
            CliError::Validation(format!(
                "invalid source {s:?}; expected single_photon, pair_fock(k), noon(N), kitten(n) \
                 or squeezed_vacuum(alpha[,cutoff[,postselect_total]])"
            ))
        };
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                (s[..open].trim(), Some(inner.trim()))
            }
            None => (s, None),
        };
        let int = |a: Option<&str>| -> Result<u32, CliError> {
            a.ok_or_else(bad)?.trim().parse().map_err(|_| bad())
        };
        match name {
            "single_photon" if args.is_none() => Ok(SourceSpec::SinglePhoton),
            "pair_fock" => Ok(SourceSpec::PairFock(int(args)?)),
            "noon" => Ok(SourceSpec::Noon(int(args)?)),
            "kitten" => Ok(SourceSpec::Kitten(int(args)?)),
            "squeezed_vacuum" => {
                let args = args.ok_or_else(bad)?;
                let (alpha, rest) = if let Some(body) = args.strip_prefix('[') {
                    let close = body.find(']').ok_or_else(bad)?;
                    let parts: Vec<f64> = body[..close]
                        .split(',')
                        .map(|p| p.trim().parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad())?;
                    let [re, im] = parts[..] else {
                        return Err(bad());
                    };
                    (Alpha::Complex([re, im]), &body[close + 1..])
                } else {
                    let end = args.find(',').unwrap_or(args.len());
                    let re = args[..end].trim().parse().map_err(|_| bad())?;
                    (Alpha::Real(re), &args[end..])
                };
                let rest: Vec<&str> = rest
                    .trim_start_matches(',')
                    .split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .collect();
                if rest.len() > 2 {
                    return Err(bad());
                }
                let cutoff = match rest.first() {
                    Some(c) => c.parse().map_err(|_| bad())?,
                    None => DEFAULT_PAIR_CUTOFF,
                };
                let postselect_total = match rest.get(1) {
                    Some(t) => Some(t.parse().map_err(|_| bad())?),
                    None => None,
                };
                Ok(SourceSpec::SqueezedVacuum(SqueezedSource {
                    alpha,
                    cutoff,
                    postselect_total,
                }))
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum InjectionPoint {
    Input,
    Inside,
}

impl From<InjectionPoint> for Injection {
    fn from(p: InjectionPoint) -> Self {
        match p {
            InjectionPoint::Input => Injection::Input,
            InjectionPoint::Inside => Injection::Inside,
        }
    }
}

fn default_grid_size() -> usize {
    DEFAULT_GRID_SIZE
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

/// A fringe experiment as read from a config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(deserialize_with = "deserialize_source")]
    pub source: SourceSpec,
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    /// Restrict output to these patterns, written `"nA:nB"`.
    #[serde(default)]
    pub patterns: Option<Vec<String>>,
    #[serde(default)]
    pub injection: Option<InjectionPoint>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub out_csv: Option<PathBuf>,
    #[serde(default)]
    pub out_json: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(source: SourceSpec) -> Self {
        ExperimentConfig {
            source,
            grid_size: DEFAULT_GRID_SIZE,
            patterns: None,
            injection: None,
            threshold: DEFAULT_THRESHOLD,
            out_csv: None,
            out_json: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn injection(&self) -> Injection {
        self.injection
            .map(Injection::from)
            .unwrap_or_else(|| self.source.default_injection())
    }

    pub fn parsed_patterns(&self) -> Result<Option<Vec<DetectionPattern>>, CliError> {
        self.patterns
            .as_ref()
            .map(|list| {
                list.iter()
                    .map(|p| p.parse().map_err(|e| CliError::Validation(format!("{e}"))))
                    .collect()
            })
            .transpose()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid_size < MIN_GRID_SIZE {
            return Err(CliError::Validation(format!(
                "grid_size must be at least {MIN_GRID_SIZE}, got {}",
                self.grid_size
            )));
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(CliError::Validation(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        if let Some(patterns) = self.parsed_patterns()? {
            if let Some(p) = patterns.iter().find(|p| p.counts().len() != 2) {
                return Err(CliError::Validation(format!(
                    "pattern {p} must have two channels"
                )));
            }
        }
        // surfaces source invariant violations early
        self.source.build()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_text_sources() {
        assert_eq!(
            "single_photon".parse::<SourceSpec>().unwrap(),
            SourceSpec::SinglePhoton
        );
        assert_eq!(
            "pair_fock(2)".parse::<SourceSpec>().unwrap(),
            SourceSpec::PairFock(2)
        );
        assert_eq!(
            " noon( 4 ) ".parse::<SourceSpec>().unwrap(),
            SourceSpec::Noon(4)
        );
        assert_eq!(
            "kitten(3)".parse::<SourceSpec>().unwrap(),
            SourceSpec::Kitten(3)
        );
        let sq: SourceSpec = "squeezed_vacuum([0.2, 0.1], 12, 4)".parse().unwrap();
        assert_eq!(
            sq,
            SourceSpec::SqueezedVacuum(SqueezedSource {
                alpha: Alpha::Complex([0.2, 0.1]),
                cutoff: 12,
                postselect_total: Some(4)
            })
        );
        let sq: SourceSpec = "squeezed_vacuum(0.3)".parse().unwrap();
        assert_eq!(sq.to_string(), "squeezed_vacuum(0.3,10)");
        for bad in [
            "pair_fock",
            "pair_fock(x)",
            "noon(1",
            "laser(2)",
            "squeezed_vacuum(0.1,2,3,4)",
        ] {
            assert!(bad.parse::<SourceSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "single_photon",
            "pair_fock(2)",
            "noon(6)",
            "kitten(1)",
            "squeezed_vacuum([0.2,0.1],8,2)",
        ] {
            let spec: SourceSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn json_source_forms() {
        let a = ExperimentConfig::from_json(r#"{"source": "pair_fock(2)"}"#).unwrap();
        let b = ExperimentConfig::from_json(r#"{"source": {"pair_fock": 2}}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.grid_size, 256);
        let c = ExperimentConfig::from_json(
            r#"{"source": {"squeezed_vacuum": {"alpha": [0.2, 0.0], "postselect_total": 4}}, "grid_size": 64}"#,
        )
        .unwrap();
        let (state, p) = c.source.build().unwrap();
        assert!(p.unwrap() > 0.0);
        assert_eq!(state.max_photons(), 4);
        assert!(ExperimentConfig::from_json(r#"{"source": "noon(2)", "bogus": 1}"#).is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::new(SourceSpec::PairFock(1));
        assert!(cfg.validate().is_ok());
        cfg.grid_size = 4;
        assert!(cfg.validate().is_err());
        cfg.grid_size = 16;
        cfg.patterns = Some(vec!["1:1:0".into()]);
        assert!(cfg.validate().is_err());
        cfg.patterns = Some(vec!["1:1".into()]);
        assert!(cfg.validate().is_ok());
        assert!(ExperimentConfig::new(SourceSpec::Noon(0))
            .validate()
            .is_err());
        assert!(ExperimentConfig::new(SourceSpec::PairFock(0))
            .validate()
            .is_err());
        let sq = "squeezed_vacuum(1.5)".parse::<SourceSpec>().unwrap();
        assert!(ExperimentConfig::new(sq).validate().is_err());
        let sq = "squeezed_vacuum(0.2,1,4)".parse::<SourceSpec>().unwrap();
        assert!(ExperimentConfig::new(sq).validate().is_err());
    }

    #[test]
    fn injection_defaults() {
        assert_eq!(
            ExperimentConfig::new(SourceSpec::Noon(4)).injection(),
            Injection::Inside
        );
        assert_eq!(
            ExperimentConfig::new(SourceSpec::PairFock(2)).injection(),
            Injection::Input
        );
        let mut cfg = ExperimentConfig::new(SourceSpec::Noon(4));
        cfg.injection = Some(InjectionPoint::Input);
        assert_eq!(cfg.injection(), Injection::Input);
    }
}
