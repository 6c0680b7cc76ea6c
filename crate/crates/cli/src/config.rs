//! Experiment selection and parameters.
//!
//! Config files are TOML: top-level keys apply to every experiment and a
//! table named after an experiment overrides them for that experiment.
//!
//! ```toml
//! resolution = 1024
//!
//! [gn_usc]
//! t = 1.6
//! x_grid = [0.1, 0.05, 0.01, 0.001]
//! ```

use std::fmt;
use std::str::FromStr;

use toml::{Table, Value};

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    PolydiscFormula,
    G2Usc,
    GnUsc,
    Monotone,
    RemOne,
    RemTwo,
    ElemReinhardtTable,
    ProductCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::PolydiscFormula,
        Experiment::G2Usc,
        Experiment::GnUsc,
        Experiment::Monotone,
        Experiment::RemOne,
        Experiment::RemTwo,
        Experiment::ElemReinhardtTable,
        Experiment::ProductCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::PolydiscFormula => "polydisc_formula",
            Experiment::G2Usc => "g2_usc",
            Experiment::GnUsc => "gn_usc",
            Experiment::Monotone => "monotone",
            Experiment::RemOne => "rem_one",
            Experiment::RemTwo => "rem_two",
            Experiment::ElemReinhardtTable => "elem_reinhardt_table",
            Experiment::ProductCheck => "product_check",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::PolydiscFormula => {
                "minimal simplex of the polydisc box corner is T_(n r_1^2, ..., n r_n^2); checked against the grid oracle"
            }
            Experiment::G2Usc => {
                "G_2: W(0; e_1) = 1 while the triangle certificate forces limsup W((x,0); e_1) >= sqrt 2"
            }
            Experiment::GnUsc => {
                "G_n: W~(0; e_1) = 1/sqrt(n-1); constrained simplex certificates push W~((x,0,..); e_1) toward sqrt(2/n)"
            }
            Experiment::Monotone => {
                "truncations D_m of G_n: W~(0; e_1) = sqrt(2/n) for every m, above the limit value 1/sqrt(n-1)"
            }
            Experiment::RemOne => "ball inside a bidisc with larger Wu metric: sqrt 2 > 1 at e_1",
            Experiment::RemTwo => "drop of the degenerate dimension: W~ = 1/sqrt 2 against 1/sqrt 3 at e_3",
            Experiment::ElemReinhardtTable => {
                "closed forms of gamma^(k), A and kappa on elementary Reinhardt domains, and W~ = Busemann hull"
            }
            Experiment::ProductCheck => "Wu metric of products of polydiscs and of G_2 x Delta from the factors",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                CliError::Usage(format!("unknown experiment {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Optional parameters; `None` falls back to the experiment default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub n: Option<usize>,
    pub x: Option<f64>,
    pub x_grid: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub m_list: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub big_c: Option<f64>,
    pub resolution: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<String>,
}

impl Params {
    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: &Params) -> Params {
        macro_rules! take {
            ($($f:ident),*) => {
                $(if other.$f.is_some() { self.$f = other.$f.clone(); })*
            };
        }
        take!(n, x, x_grid, t, m_list, alpha, big_c, resolution, tol, out);
        self
    }

    fn from_table(table: &Table, context: &str) -> CliResult<Params> {
        let mut p = Params::default();
        for (key, value) in table {
            if let Value::Table(_) = value {
                continue;
            }
            let field = |what: &str| CliError::Config(format!("{context}: key `{key}` expects {what}, got {value}"));
            let number = |v: &Value| -> Option<f64> {
                match v {
                    Value::Float(f) => Some(*f),
                    Value::Integer(i) => Some(*i as f64),
                    _ => None,
                }
            };
            let numbers = |v: &Value| -> Option<Vec<f64>> {
                match v {
                    Value::Array(items) => items.iter().map(number).collect(),
                    other => number(other).map(|x| vec![x]),
                }
            };
            let count = |v: &Value| -> Option<usize> {
                match v {
                    Value::Integer(i) if *i >= 0 => Some(*i as usize),
                    _ => None,
                }
            };
            match key.replace('-', "_").as_str() {
                "n" => p.n = Some(count(value).ok_or_else(|| field("a nonnegative integer"))?),
                "x" => p.x = Some(number(value).ok_or_else(|| field("a number"))?),
                "x_grid" => p.x_grid = Some(numbers(value).ok_or_else(|| field("a list of numbers"))?),
                "t" => p.t = Some(number(value).ok_or_else(|| field("a number"))?),
                "m_list" => p.m_list = Some(numbers(value).ok_or_else(|| field("a list of numbers"))?),
                "alpha" => p.alpha = Some(numbers(value).ok_or_else(|| field("a list of numbers"))?),
                "big_c" => p.big_c = Some(number(value).ok_or_else(|| field("a number"))?),
                "resolution" => p.resolution = Some(count(value).ok_or_else(|| field("a nonnegative integer"))?),
                "tol" => p.tol = Some(number(value).ok_or_else(|| field("a number"))?),
                "out" => {
                    p.out = Some(
                        value
                            .as_str()
                            .ok_or_else(|| field("a string"))?
                            .to_string(),
                    )
                }
                _ => return Err(CliError::Config(format!("{context}: unknown key `{key}`"))),
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub params: Params,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            params: Params::default(),
        }
    }

    /// Parameters for `experiment` from config text: top level, then the
    /// experiment's own table.
    pub fn from_config_str(experiment: Experiment, text: &str) -> CliResult<Self> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Config(format!("config: {e}")))?;
        for (key, value) in &table {
            if let Value::Table(_) = value {
                key.parse::<Experiment>()
                    .map_err(|_| CliError::Config(format!("config: unknown section [{key}]")))?;
            }
        }
        let mut params = Params::from_table(&table, "config")?;
        if let Some(Value::Table(section)) = table.get(experiment.name()) {
            params = params.overlay(&Params::from_table(section, &format!("config [{}]", experiment.name()))?);
        }
        Ok(Self { experiment, params })
    }

    pub fn with_overrides(mut self, flags: &Params) -> Self {
        self.params = self.params.overlay(flags);
        self
    }
}
