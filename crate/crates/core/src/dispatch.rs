//! Rank and decomposition dispatch: the cheapest method that certifies an
//! answer decides, and the report names it.

use crate::apolarity::essential_variables;
use crate::binary::{binary_decompose_seeded, binary_rank_seeded, DEFAULT_SEED};
use crate::bounds::{
    bound_report, catalecticant_lower, monomial_colon_lower, monomial_decomposition, monomial_rank, BoundReport,
    RankInterval,
};
use crate::decomposition::WaringDecomposition;
use crate::error::{Error, Result};
use crate::form::Form;
use crate::multivar::{bcmt_decompose_detailed, catalecticant_decompose_detailed, kernel_points_decompose};
use serde::Serialize;

/// Monomials above this degree skip the colon-bound cross-check.
const MONOMIAL_COLON_MAX_DEGREE: u32 = 16;
/// Largest rank tried by the Hankel pipeline when no bound is tighter.
pub const DEFAULT_BCMT_MAX: usize = 12;
/// Residual tolerance relative to the largest coefficient of `F`.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug)]
pub struct RankOptions {
    pub seed: u64,
    pub tol: f64,
    pub bcmt_max: usize,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { seed: DEFAULT_SEED, tol: DEFAULT_RESIDUAL_TOL, bcmt_max: DEFAULT_BCMT_MAX }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    MonomialFormula,
    MonomialFormulaColon,
    EssentialVariables,
    BinarySuite,
    Catalecticant,
    Bcmt,
    BoundInterval,
}

impl RankMethod {
    pub fn label(&self) -> &'static str {
        match self {
            RankMethod::MonomialFormula => "monomial formula",
            RankMethod::MonomialFormulaColon => "monomial formula + e=1 colon bound",
            RankMethod::EssentialVariables => "essential variables",
            RankMethod::BinarySuite => "binary suite",
            RankMethod::Catalecticant => "catalecticant method",
            RankMethod::Bcmt => "hankel eigenvector method",
            RankMethod::BoundInterval => "bound interval",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RankOutcome {
    pub interval: RankInterval,
    pub border_rank: Option<u64>,
    pub essential_variables: usize,
    pub method: RankMethod,
    /// One line per dispatch stage that was tried and did not decide.
    pub trail: Vec<String>,
    pub decomposition: Option<WaringDecomposition>,
    pub bounds: Option<BoundReport>,
}

impl RankOutcome {
    pub fn rank(&self) -> Option<u64> {
        self.interval.value()
    }
}

fn monomial_exponent(f: &Form) -> Option<Vec<u32>> {
    if f.num_terms() != 1 {
        return None;
    }
    f.terms().next().map(|(e, _)| e.clone())
}

fn trail_error(trail: &mut Vec<String>, stage: &str, e: &Error) {
    trail.push(format!("{stage}: {e}"));
}

/// Points from a Hankel basis of low degree, else directly as the zeros of
/// the catalecticant kernel.
fn catalecticant_method(f: &Form, opts: &RankOptions) -> Result<WaringDecomposition> {
    match catalecticant_decompose_detailed(f, opts.tol, opts.seed) {
        Ok(out) => Ok(out.decomposition),
        Err(first) => kernel_points_decompose(f, opts.tol, opts.seed)
            .map_err(|second| Error::MethodInapplicable(format!("{first}; {second}"))),
    }
}

/// Rank of `F`, or the best certified interval when no method decides.
pub fn rank(f: &Form, opts: &RankOptions) -> Result<RankOutcome> {
    if f.is_zero() {
        return Err(Error::Argument("the zero form has no rank".into()));
    }
    let mut trail = Vec::new();
    let ev = essential_variables(f)?;
    let m = ev.m;
    let outcome = |interval, border_rank, method, trail, decomposition, bounds| RankOutcome {
        interval,
        border_rank,
        essential_variables: m,
        method,
        trail,
        decomposition,
        bounds,
    };

    if let Some(alpha) = monomial_exponent(f) {
        let r = monomial_rank(&alpha)?;
        let nonzero = alpha.iter().filter(|&&a| a > 0).count() as u64;
        let border = if nonzero == 1 { 1 } else { crate::bounds::catalecticant_lower(f)? };
        let method = if f.degree() <= MONOMIAL_COLON_MAX_DEGREE && monomial_colon_lower(&alpha)? == r {
            RankMethod::MonomialFormulaColon
        } else {
            RankMethod::MonomialFormula
        };
        let border = if nonzero <= 2 { Some(border) } else { None };
        return Ok(outcome(RankInterval::exact(r), border, method, trail, None, None));
    }
    trail.push("monomial formula: not a monomial".into());

    if m == 1 {
        return Ok(outcome(RankInterval::exact(1), Some(1), RankMethod::EssentialVariables, trail, None, None));
    }
    trail.push(format!("essential variables: {m}"));

    if m == 2 {
        let cert = binary_rank_seeded(f, opts.seed)?;
        return Ok(outcome(
            RankInterval::exact(cert.rank as u64),
            Some(cert.border_rank as u64),
            RankMethod::BinarySuite,
            trail,
            None,
            None,
        ));
    }
    trail.push("sigma2 test: more than two essential variables, border rank at least 3".into());

    let lower = catalecticant_lower(f)?;
    match catalecticant_method(f, opts) {
        Ok(dec) => {
            let r = dec.len() as u64;
            return Ok(outcome(RankInterval::exact(r), Some(r), RankMethod::Catalecticant, trail, Some(dec), None));
        }
        Err(e) => trail_error(&mut trail, "catalecticant method", &e),
    }

    let bounds = bound_report(f, m)?;
    let interval = bounds.interval();
    let r_max = interval.upper.map_or(opts.bcmt_max, |u| (u as usize).min(opts.bcmt_max));
    match bcmt_decompose_detailed(f, r_max, opts.tol, opts.seed) {
        Ok(out) => {
            let r = out.decomposition.len() as u64;
            if r == interval.lower.max(lower) {
                return Ok(outcome(
                    RankInterval::exact(r),
                    None,
                    RankMethod::Bcmt,
                    trail,
                    Some(out.decomposition),
                    Some(bounds),
                ));
            }
            trail.push(format!("hankel eigenvector method: decomposition of length {r} above the lower bound"));
            let tightened = RankInterval {
                lower: interval.lower.max(lower),
                upper: Some(interval.upper.map_or(r, |u| u.min(r))),
            };
            return Ok(outcome(
                tightened,
                None,
                RankMethod::BoundInterval,
                trail,
                Some(out.decomposition),
                Some(bounds),
            ));
        }
        Err(e) => trail_error(&mut trail, "hankel eigenvector method", &e),
    }

    Ok(outcome(interval, None, RankMethod::BoundInterval, trail, None, Some(bounds)))
}

/// Border rank where it is decidable here: at most two essential variables,
/// or whenever the catalecticant method recovers a decomposition.
pub fn border_rank(f: &Form, opts: &RankOptions) -> Result<(u64, RankMethod)> {
    let out = rank(f, opts)?;
    out.border_rank.map(|b| (b, out.method.clone())).ok_or_else(|| {
        Error::MethodInapplicable(format!(
            "border rank needs at most two essential variables or a catalecticant decomposition; \
             catalecticant lower bound is {}",
            catalecticant_lower(f).unwrap_or(0)
        ))
    })
}

/// Verified decomposition, choosing the method the rank dispatch would use.
pub fn decompose(f: &Form, opts: &RankOptions) -> Result<(WaringDecomposition, RankMethod)> {
    if f.is_zero() {
        return Err(Error::Argument("the zero form has no decomposition".into()));
    }
    if let Some(alpha) = monomial_exponent(f) {
        let unit = monomial_decomposition(&alpha, opts.tol)?;
        let dec = crate::decomposition::from_linear_forms(f, unit.linear_forms, opts.tol)?;
        return Ok((dec, RankMethod::MonomialFormula));
    }
    let m = essential_variables(f)?.m;
    if m <= 2 {
        let method = if m == 1 { RankMethod::EssentialVariables } else { RankMethod::BinarySuite };
        return Ok((binary_decompose_seeded(f, opts.tol, opts.seed)?, method));
    }
    match catalecticant_method(f, opts) {
        Ok(dec) => Ok((dec, RankMethod::Catalecticant)),
        Err(_) => {
            Ok((bcmt_decompose_detailed(f, opts.bcmt_max, opts.tol, opts.seed)?.decomposition, RankMethod::Bcmt))
        }
    }
}
