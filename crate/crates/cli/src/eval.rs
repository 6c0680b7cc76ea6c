use std::fmt;
use std::str::FromStr;

use wu_core::busemann::Indicatrix;
use wu_core::domains::{elem_reinhardt_indicatrix, indicatrix_at, sandwich_wu, DomainSpec};
use wu_core::metrics::{elem_reinhardt_metric, MetricKind};
use wu_core::wu::{wu_metric_with, WuOptions, WuResult};
use wu_core::{CVector, Complex64};

use crate::report::ResultRow;
use crate::{CliError, CliResult};

/// What `eval` computes at `(a; X)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalKind {
    /// Closed form of an elementary Reinhardt domain.
    Metric(MetricKind),
    /// `W~` (or `W` when `full`) of the indicatrix of `base`.
    ///
    /// `base` selects the pseudometric on elementary Reinhardt domains; other
    /// domains use their certified indicatrix bracket.
    Wu { base: MetricKind, full: bool },
}

impl fmt::Display for EvalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalKind::Metric(k) => write!(f, "{k}"),
            EvalKind::Wu { full: false, .. } => write!(f, "wu"),
            EvalKind::Wu { full: true, .. } => write!(f, "wu-full"),
        }
    }
}

impl FromStr for EvalKind {
    type Err = CliError;

    /// `gamma`, `gammaK`, `azukawa`, `kobayashi`, `wu`, `wu-full`.
    fn from_str(s: &str) -> CliResult<Self> {
        let kobayashi = MetricKind::Kobayashi;
        Ok(match s {
            "gamma" => EvalKind::Metric(MetricKind::Caratheodory(1)),
            "azukawa" => EvalKind::Metric(MetricKind::Azukawa),
            "kobayashi" => EvalKind::Metric(kobayashi),
            "wu" => EvalKind::Wu { base: kobayashi, full: false },
            "wu-full" => EvalKind::Wu { base: kobayashi, full: true },
            other => match other.strip_prefix("gamma").map(str::parse::<u32>) {
                Some(Ok(k)) if k >= 1 => EvalKind::Metric(MetricKind::Caratheodory(k)),
                _ => {
                    return Err(CliError::Usage(format!(
                        "unknown kind {s:?}; expected gamma, gammaK, azukawa, kobayashi, wu or wu-full"
                    )))
                }
            },
        })
    }
}

/// Comma-separated complex numbers such as `0.5,0.1+0.2i`.
pub fn parse_point(s: &str) -> CliResult<CVector> {
    let parts = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<Complex64>()
                .map_err(|_| CliError::Usage(format!("not a complex number: {t:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(CVector::new(parts)?)
}

fn point_label(z: &CVector) -> String {
    z.components()
        .iter()
        .map(|c| if c.im == 0.0 { c.re.to_string() } else { c.to_string() })
        .collect::<Vec<_>>()
        .join(";")
}

/// Wu pseudometric at `a`: the sampled pipeline for elementary Reinhardt
/// domains, the certified bracket otherwise.
pub fn wu_at(spec: &DomainSpec, base: MetricKind, a: &CVector, resolution: usize) -> CliResult<WuResult> {
    match spec {
        DomainSpec::ElemReinhardt { alpha, big_c } => {
            let ind = elem_reinhardt_indicatrix(base, alpha, *big_c, a)?;
            wu_of(&ind, resolution)
        }
        _ => Ok(sandwich_wu(&indicatrix_at(spec, a)?, resolution)?),
    }
}

pub fn wu_of(ind: &Indicatrix, resolution: usize) -> CliResult<WuResult> {
    let opts = WuOptions {
        resolution,
        ..WuOptions::for_dim(ind.dim())
    };
    Ok(wu_metric_with(ind, &opts)?)
}

/// One evaluation as a result row with branch diagnostics.
pub fn eval_metric(spec: &DomainSpec, kind: EvalKind, a: &CVector, x: &CVector, resolution: usize) -> CliResult<ResultRow> {
    spec.validate()?;
    let row = ResultRow::new("eval", kind.to_string(), 0.0)
        .param("domain", spec)
        .param("point", point_label(a))
        .param("vector", point_label(x));
    match kind {
        EvalKind::Metric(k) => {
            let DomainSpec::ElemReinhardt { alpha, big_c } = spec else {
                return Err(CliError::Usage(format!(
                    "closed forms are available on elementary Reinhardt domains, not {spec}"
                )));
            };
            let e = elem_reinhardt_metric(k, alpha, *big_c, a, x)?;
            let nz = &e.normalized;
            Ok(row
                .value("value", e.value.value)
                .value("case", e.case().number() as f64)
                .value("l", nz.l as f64)
                .value("s", nz.s as f64)
                .value("r", nz.r)
                .value("exponent_scale", nz.exponent_scale))
        }
        EvalKind::Wu { base, full } => {
            let w = wu_at(spec, base, a, resolution)?;
            let value = if full { w.full(x)? } else { w.tilde(x)? };
            Ok(row
                .value("value", value)
                .value("m", w.m as f64)
                .value("gap", w.gap))
        }
    }
}
