//! Classical fund performance metrics over monthly return series.
//!
//! All variance-like quantities use the population convention (divide by n).
//! Metrics that involve the benchmark (beta, Jensen's alpha, tracking error,
//! information ratio, capture ratios, Treynor) are computed over the inner
//! join of fund and benchmark dates; fund-only metrics use the full series.

use chrono::NaiveDate;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("insufficient history: {have} observations, need {need}")]
    InsufficientHistory { have: usize, need: usize },
    #[error("fewer than {need} aligned fund/benchmark observations")]
    InsufficientOverlap { need: usize },
    #[error("observation dates are not strictly increasing")]
    NonMonotonicDates,
    #[error("return {0} is not a valid decimal fraction (must be finite and > -1)")]
    InvalidReturn(f64),
    #[error("benchmark variance below 1e-12")]
    DegenerateBenchmark,
    #[error("return volatility below 1e-12")]
    ZeroVolatility,
    #[error("no observations below the minimum acceptable return")]
    ZeroDownside,
    #[error("beta magnitude below 1e-12")]
    ZeroBeta,
    #[error("tracking error below 1e-12 (fund is a linear function of the benchmark)")]
    ZeroTrackingError,
    #[error("no periods with positive benchmark return")]
    NoUpPeriods,
    #[error("no periods with negative benchmark return")]
    NoDownPeriods,
    #[error("var confidence {0} outside (0.5, 1)")]
    BadConfidence(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    Monthly,
}

/// An ordered monthly return series for one fund (returns as decimal
/// fractions, e.g. 0.01 for +1%).
#[derive(Debug, Clone)]
pub struct ReturnSeries {
    pub fund_id: String,
    observations: Vec<(NaiveDate, f64)>,
    pub periodicity: Periodicity,
}

impl ReturnSeries {
    pub fn new(
        fund_id: impl Into<String>,
        observations: Vec<(NaiveDate, f64)>,
    ) -> Result<Self, MetricError> {
        for pair in observations.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(MetricError::NonMonotonicDates);
            }
        }
        for (_, r) in &observations {
            if !r.is_finite() || *r <= -1.0 {
                return Err(MetricError::InvalidReturn(*r));
            }
        }
        Ok(Self {
            fund_id: fund_id.into(),
            observations,
            periodicity: Periodicity::Monthly,
        })
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn returns(&self) -> impl Iterator<Item = f64> + '_ {
        self.observations.iter().map(|(_, r)| *r)
    }

    pub fn observations(&self) -> &[(NaiveDate, f64)] {
        &self.observations
    }
}

/// Benchmark series plus the run-level rate assumptions.
///
/// Defaults: risk-free rate and minimum acceptable return of 0 per period,
/// VaR confidence 0.95. The underlying study never states its values, so
/// these are configuration, not reconstructions.
#[derive(Debug, Clone)]
pub struct MarketContext {
    pub benchmark: ReturnSeries,
    pub risk_free_rate: f64,
    pub minimum_acceptable_return: f64,
    pub var_confidence: f64,
}

impl MarketContext {
    pub fn new(benchmark: ReturnSeries) -> Self {
        Self {
            benchmark,
            risk_free_rate: 0.0,
            minimum_acceptable_return: 0.0,
            var_confidence: 0.95,
        }
    }

    pub fn with_rates(mut self, risk_free: f64, mar: f64) -> Self {
        self.risk_free_rate = risk_free;
        self.minimum_acceptable_return = mar;
        self
    }

    pub fn with_var_confidence(mut self, confidence: f64) -> Result<Self, MetricError> {
        if !(confidence > 0.5 && confidence < 1.0) {
            return Err(MetricError::BadConfidence(confidence));
        }
        self.var_confidence = confidence;
        Ok(self)
    }
}

/// Every metric the scenarios can draw from. `None` means the value could
/// not be computed (or was not supplied by the input file).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricSet {
    pub expected_return: Option<f64>,
    pub sharpe: Option<f64>,
    pub treynor: Option<f64>,
    pub sortino: Option<f64>,
    pub jensen_alpha: Option<f64>,
    pub information_ratio: Option<f64>,
    pub beta: Option<f64>,
    pub std_dev: Option<f64>,
    pub downside_probability: Option<f64>,
    pub var_pct_corpus: Option<f64>,
    pub tracking_error: Option<f64>,
    pub upside_capture: Option<f64>,
    pub downside_capture: Option<f64>,
    /// Cost proxies carried through from ingestion, never computed here.
    pub expense_ratio: Option<f64>,
    pub exit_load: Option<f64>,
}

/// Field identifiers accepted in scenario definitions, in declaration order.
pub const METRIC_FIELDS: &[&str] = &[
    "expected_return",
    "sharpe",
    "treynor",
    "sortino",
    "jensen_alpha",
    "information_ratio",
    "beta",
    "std_dev",
    "downside_probability",
    "var_pct_corpus",
    "tracking_error",
    "upside_capture",
    "downside_capture",
    "expense_ratio",
    "exit_load",
];

impl MetricSet {
    /// Looks a metric up by its field identifier.
    pub fn get(&self, field: &str) -> Option<Option<f64>> {
        Some(match field {
            "expected_return" => self.expected_return,
            "sharpe" => self.sharpe,
            "treynor" => self.treynor,
            "sortino" => self.sortino,
            "jensen_alpha" => self.jensen_alpha,
            "information_ratio" => self.information_ratio,
            "beta" => self.beta,
            "std_dev" => self.std_dev,
            "downside_probability" => self.downside_probability,
            "var_pct_corpus" => self.var_pct_corpus,
            "tracking_error" => self.tracking_error,
            "upside_capture" => self.upside_capture,
            "downside_capture" => self.downside_capture,
            "expense_ratio" => self.expense_ratio,
            "exit_load" => self.exit_load,
            _ => return None,
        })
    }

    pub fn is_known_field(field: &str) -> bool {
        METRIC_FIELDS.contains(&field)
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn pop_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

fn pop_covariance(xs: &[f64], ys: &[f64]) -> f64 {
    let mx = mean(xs);
    let my = mean(ys);
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.len() as f64
}

/// Inner join of fund and benchmark observations on period-end date.
struct Aligned {
    fund: Vec<f64>,
    bench: Vec<f64>,
    /// Observations present on only one side.
    dropped: usize,
}

fn align(fund: &ReturnSeries, bench: &ReturnSeries) -> Aligned {
    let mut f = Vec::new();
    let mut b = Vec::new();
    let (fo, bo) = (fund.observations(), bench.observations());
    let (mut i, mut j) = (0, 0);
    while i < fo.len() && j < bo.len() {
        match fo[i].0.cmp(&bo[j].0) {
            std::cmp::Ordering::Equal => {
                f.push(fo[i].1);
                b.push(bo[j].1);
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    let dropped = fo.len() + bo.len() - 2 * f.len();
    Aligned {
        fund: f,
        bench: b,
        dropped,
    }
}

fn aligned_for(fund: &ReturnSeries, ctx: &MarketContext, need: usize) -> Result<Aligned, MetricError> {
    let a = align(fund, &ctx.benchmark);
    if a.fund.len() < need {
        return Err(MetricError::InsufficientOverlap { need });
    }
    Ok(a)
}

/// Compounded return over every trailing `window`-month span, one per month.
pub fn rolling_returns(series: &ReturnSeries, window: usize) -> Result<Vec<f64>, MetricError> {
    let n = series.len();
    if n < window || window == 0 {
        return Err(MetricError::InsufficientHistory {
            have: n,
            need: window,
        });
    }
    let rets: Vec<f64> = series.returns().collect();
    Ok((0..=n - window)
        .map(|start| {
            rets[start..start + window]
                .iter()
                .fold(1.0, |acc, r| acc * (1.0 + r))
                - 1.0
        })
        .collect())
}

/// Mean of the 12-month rolling returns over the trailing 24-month window.
pub fn expected_return(series: &ReturnSeries) -> Result<f64, MetricError> {
    let n = series.len();
    if n < 24 {
        return Err(MetricError::InsufficientHistory { have: n, need: 24 });
    }
    let tail = ReturnSeries::new(
        series.fund_id.clone(),
        series.observations()[n - 24..].to_vec(),
    )
    .expect("slice of a valid series is valid");
    let rolls = rolling_returns(&tail, 12)?;
    Ok(mean(&rolls))
}

/// Population standard deviation of the fund's periodic returns.
pub fn std_dev(series: &ReturnSeries) -> Result<f64, MetricError> {
    if series.is_empty() {
        return Err(MetricError::InsufficientHistory { have: 0, need: 1 });
    }
    let rets: Vec<f64> = series.returns().collect();
    Ok(pop_variance(&rets).sqrt())
}

/// Covariance with the benchmark over benchmark variance, both population.
pub fn beta(fund: &ReturnSeries, ctx: &MarketContext) -> Result<f64, MetricError> {
    let a = aligned_for(fund, ctx, 3)?;
    let var_b = pop_variance(&a.bench);
    if var_b < 1e-12 {
        return Err(MetricError::DegenerateBenchmark);
    }
    Ok(pop_covariance(&a.fund, &a.bench) / var_b)
}

pub fn sharpe(fund: &ReturnSeries, ctx: &MarketContext) -> Result<f64, MetricError> {
    if fund.is_empty() {
        return Err(MetricError::InsufficientHistory { have: 0, need: 1 });
    }
    let rets: Vec<f64> = fund.returns().collect();
    let sigma = pop_variance(&rets).sqrt();
    if sigma < 1e-12 {
        return Err(MetricError::ZeroVolatility);
    }
    Ok((mean(&rets) - ctx.risk_free_rate) / sigma)
}

/// Excess return over MAR divided by downside deviation, where the downside
/// deviation sums squared shortfalls below MAR but divides by the full
/// sample size.
pub fn sortino(fund: &ReturnSeries, ctx: &MarketContext) -> Result<f64, MetricError> {
    if fund.is_empty() {
        return Err(MetricError::InsufficientHistory { have: 0, need: 1 });
    }
    let mar = ctx.minimum_acceptable_return;
    let rets: Vec<f64> = fund.returns().collect();
    let shortfall_sq: f64 = rets
        .iter()
        .filter(|r| **r < mar)
        .map(|r| (r - mar) * (r - mar))
        .sum();
    if shortfall_sq == 0.0 {
        return Err(MetricError::ZeroDownside);
    }
    let dd = (shortfall_sq / rets.len() as f64).sqrt();
    Ok((mean(&rets) - mar) / dd)
}

pub fn treynor(fund: &ReturnSeries, ctx: &MarketContext) -> Result<f64, MetricError> {
    let b = beta(fund, ctx)?;
    if b.abs() <= 1e-12 {
        return Err(MetricError::ZeroBeta);
    }
    let a = aligned_for(fund, ctx, 3)?;
    Ok((mean(&a.fund) - ctx.risk_free_rate) / b)
}

/// Mean return above the CAPM prediction for the fund's beta.
pub fn jensen_alpha(fund: &ReturnSeries, ctx: &MarketContext) -> Result<f64, MetricError> {
    let b = beta(fund, ctx)?;
    let a = aligned_for(fund, ctx, 3)?;
    let rf = ctx.risk_free_rate;
    Ok(mean(&a.fund) - (rf + b * (mean(&a.bench) - rf)))
}

/// Residual volatility around the benchmark regression line:
/// sqrt(var(r_p) - beta^2 var(r_M)), clamped at zero against rounding.
///
/// Evaluated as the population variance of the residuals r_p - beta * r_M,
/// which equals the displayed difference exactly but avoids the cancellation
/// that would otherwise leave noise of ~1e-9 on funds that track the
/// benchmark perfectly.
pub fn tracking_error(fund: &ReturnSeries, ctx: &MarketContext) -> Result<f64, MetricError> {
    let b = beta(fund, ctx)?;
    let a = aligned_for(fund, ctx, 3)?;
    let residuals: Vec<f64> = a
        .fund
        .iter()
        .zip(&a.bench)
        .map(|(rf, rb)| rf - b * rb)
        .collect();
    Ok(pop_variance(&residuals).max(0.0).sqrt())
}

pub fn information_ratio(fund: &ReturnSeries, ctx: &MarketContext) -> Result<f64, MetricError> {
    let alpha = jensen_alpha(fund, ctx)?;
    let te = tracking_error(fund, ctx)?;
    if te <= 1e-12 {
        return Err(MetricError::ZeroTrackingError);
    }
    Ok(alpha / te)
}

/// Fraction of periodic observations returning less than MAR.
pub fn downside_probability(fund: &ReturnSeries, ctx: &MarketContext) -> Result<f64, MetricError> {
    if fund.is_empty() {
        return Err(MetricError::InsufficientHistory { have: 0, need: 1 });
    }
    let mar = ctx.minimum_acceptable_return;
    let below = fund.returns().filter(|r| *r < mar).count();
    Ok(below as f64 / fund.len() as f64)
}

/// Historical VaR as a percentage of corpus: the empirical lower-tail
/// quantile of periodic returns at the context confidence, floored at zero.
/// Uses the order statistic at index floor((1 - c) * (n - 1)).
pub fn historical_var_pct(fund: &ReturnSeries, ctx: &MarketContext) -> Result<f64, MetricError> {
    let n = fund.len();
    if n < 20 {
        return Err(MetricError::InsufficientHistory { have: n, need: 20 });
    }
    let mut rets: Vec<f64> = fund.returns().collect();
    rets.sort_by(|a, b| a.partial_cmp(b).expect("returns are finite"));
    let idx = ((1.0 - ctx.var_confidence) * (n - 1) as f64).floor() as usize;
    let q = rets[idx];
    Ok((-q).max(0.0) * 100.0)
}

/// Compounded fund return over benchmark-up (resp. -down) periods relative
/// to the compounded benchmark return over the same periods, times 100.
pub fn capture_ratios(fund: &ReturnSeries, ctx: &MarketContext) -> Result<(f64, f64), MetricError> {
    let a = aligned_for(fund, ctx, 1)?;
    let compound = |mask: &dyn Fn(f64) -> bool| -> Option<(f64, f64)> {
        let mut any = false;
        let (mut f, mut b) = (1.0, 1.0);
        for (rf, rb) in a.fund.iter().zip(&a.bench) {
            if mask(*rb) {
                any = true;
                f *= 1.0 + rf;
                b *= 1.0 + rb;
            }
        }
        any.then_some((f - 1.0, b - 1.0))
    };
    let (fu, bu) = compound(&|r| r > 0.0).ok_or(MetricError::NoUpPeriods)?;
    let (fd, bd) = compound(&|r| r < 0.0).ok_or(MetricError::NoDownPeriods)?;
    Ok((fu / bu * 100.0, fd / bd * 100.0))
}

/// One skipped metric: which field, and why.
#[derive(Debug, Clone)]
pub struct MetricWarning {
    pub fund_id: String,
    pub metric: &'static str,
    pub reason: String,
}

/// Computes every derivable metric for one fund, collecting per-metric
/// failures as warnings instead of aborting the batch. Cost proxies
/// (expense ratio, exit load) are ingestion data and stay unset.
pub fn compute_metric_set(
    fund: &ReturnSeries,
    ctx: &MarketContext,
) -> (MetricSet, Vec<MetricWarning>) {
    let mut warnings = Vec::new();
    let mut grab = |metric: &'static str, r: Result<f64, MetricError>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            warnings.push(MetricWarning {
                fund_id: fund.fund_id.clone(),
                metric,
                reason: e.to_string(),
            });
            None
        }
    };

    let captures = capture_ratios(fund, ctx);
    let (up, down) = match captures {
        Ok((u, d)) => (Ok(u), Ok(d)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    let set = MetricSet {
        expected_return: grab("expected_return", expected_return(fund)),
        sharpe: grab("sharpe", sharpe(fund, ctx)),
        treynor: grab("treynor", treynor(fund, ctx)),
        sortino: grab("sortino", sortino(fund, ctx)),
        jensen_alpha: grab("jensen_alpha", jensen_alpha(fund, ctx)),
        information_ratio: grab("information_ratio", information_ratio(fund, ctx)),
        beta: grab("beta", beta(fund, ctx)),
        std_dev: grab("std_dev", std_dev(fund)),
        downside_probability: grab("downside_probability", downside_probability(fund, ctx)),
        var_pct_corpus: grab("var_pct_corpus", historical_var_pct(fund, ctx)),
        tracking_error: grab("tracking_error", tracking_error(fund, ctx)),
        upside_capture: grab("upside_capture", up),
        downside_capture: grab("downside_capture", down),
        expense_ratio: None,
        exit_load: None,
    };

    let dropped = align(fund, &ctx.benchmark).dropped;
    if dropped > 0 {
        warnings.push(MetricWarning {
            fund_id: fund.fund_id.clone(),
            metric: "alignment",
            reason: format!("{dropped} observations without a matching date were dropped"),
        });
    }
    (set, warnings)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn months(returns: &[f64]) -> ReturnSeries {
        let obs = returns
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let d = NaiveDate::from_ymd_opt(2018 + i as i32 / 12, 1 + (i % 12) as u32, 28)
                    .unwrap();
                (d, *r)
            })
            .collect();
        ReturnSeries::new("test", obs).unwrap()
    }

    fn ctx_for(bench: &[f64]) -> MarketContext {
        MarketContext::new(months(bench))
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn rolling_identity_on_zero_returns() {
        let s = months(&[0.0; 12]);
        assert_eq!(rolling_returns(&s, 12).unwrap(), vec![0.0]);
    }

    #[test]
    fn rolling_compounds_one_percent_months() {
        let s = months(&[0.01; 13]);
        let rolls = rolling_returns(&s, 12).unwrap();
        // Independent check: multiply the factors out directly.
        let mut expected = 1.0_f64;
        for _ in 0..12 {
            expected *= 1.01;
        }
        expected -= 1.0;
        assert_eq!(rolls.len(), 2);
        assert!(close(rolls[0], expected), "{} vs {expected}", rolls[0]);
        assert!(close(rolls[1], expected));
    }

    #[test]
    fn rolling_rejects_short_history() {
        let s = months(&[0.01; 11]);
        assert!(matches!(
            rolling_returns(&s, 12),
            Err(MetricError::InsufficientHistory { have: 11, need: 12 })
        ));
    }

    #[test]
    fn expected_return_of_flat_series_is_zero() {
        let s = months(&[0.0; 24]);
        assert!(close(expected_return(&s).unwrap(), 0.0));
    }

    #[test]
    fn expected_return_of_constant_growth() {
        let s = months(&[0.01; 24]);
        let expected = 1.01_f64.powi(12) - 1.0;
        assert!((expected_return(&s).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn expected_return_needs_24_months() {
        let s = months(&[0.01; 23]);
        assert!(matches!(
            expected_return(&s),
            Err(MetricError::InsufficientHistory { have: 23, need: 24 })
        ));
    }

    #[test]
    fn beta_of_identical_series_is_one() {
        let r = [0.02, -0.01, 0.03, 0.0, -0.02];
        assert!(close(beta(&months(&r), &ctx_for(&r)).unwrap(), 1.0));
    }

    #[test]
    fn beta_scales_linearly() {
        let b = [0.02, -0.01, 0.03, 0.0, -0.02];
        let f: Vec<f64> = b.iter().map(|r| 2.0 * r).collect();
        assert!(close(beta(&months(&f), &ctx_for(&b)).unwrap(), 2.0));
    }

    #[test]
    fn beta_rejects_flat_benchmark() {
        let f = [0.02, -0.01, 0.03];
        assert!(matches!(
            beta(&months(&f), &ctx_for(&[0.01, 0.01, 0.01])),
            Err(MetricError::DegenerateBenchmark)
        ));
    }

    #[test]
    fn sharpe_direct_substitution() {
        // Two observations with mean 0.10 and population sigma 0.03.
        let f = months(&[0.07, 0.13]);
        let ctx = ctx_for(&[0.0, 0.0]).with_rates(0.04, 0.0);
        assert!(close(sharpe(&f, &ctx).unwrap(), 2.0));
    }

    #[test]
    fn sharpe_zero_when_mean_equals_risk_free() {
        let f = months(&[0.03, 0.05]);
        let ctx = ctx_for(&[0.0, 0.0]).with_rates(0.04, 0.0);
        assert!(close(sharpe(&f, &ctx).unwrap(), 0.0));
    }

    #[test]
    fn sharpe_rejects_constant_returns() {
        let f = months(&[0.01, 0.01, 0.01]);
        assert!(matches!(
            sharpe(&f, &ctx_for(&[0.0, 0.0, 0.0])),
            Err(MetricError::ZeroVolatility)
        ));
    }

    #[test]
    fn sortino_rejects_when_nothing_below_mar() {
        let f = months(&[0.0, 0.0, 0.0]);
        assert!(matches!(
            sortino(&f, &ctx_for(&[0.0, 0.0, 0.0])),
            Err(MetricError::ZeroDownside)
        ));
    }

    #[test]
    fn sortino_hand_evaluation() {
        // Shortfalls of -0.1 twice over n = 4: DD = sqrt(0.02 / 4).
        let f = months(&[-0.1, 0.2, -0.1, 0.2]);
        let ctx = ctx_for(&[0.0; 4]);
        let dd = (0.02_f64 / 4.0).sqrt();
        let expected = 0.05 / dd;
        assert!(close(sortino(&f, &ctx).unwrap(), expected));
    }

    #[test]
    fn sortino_zero_mean_gives_zero() {
        let f = months(&[-0.1, 0.1]);
        let ctx = ctx_for(&[0.0, 0.0]);
        assert!(close(sortino(&f, &ctx).unwrap(), 0.0));
    }

    #[test]
    fn treynor_of_benchmark_fund_is_mean_return() {
        let b = [0.02, -0.01, 0.03, 0.0];
        let expected = b.iter().sum::<f64>() / 4.0;
        assert!(close(
            treynor(&months(&b), &ctx_for(&b)).unwrap(),
            expected
        ));
    }

    #[test]
    fn treynor_direct_substitution() {
        // Fund = 2 * benchmark + shift gives beta 2; pick values so the
        // fund mean is 0.10 and the risk-free rate 0.04.
        let b = [0.02, 0.06, 0.01, 0.07];
        let f = [0.06, 0.14, 0.04, 0.16];
        let ctx = ctx_for(&b).with_rates(0.04, 0.0);
        assert!(close(treynor(&months(&f), &ctx).unwrap(), 0.03));
    }

    #[test]
    fn treynor_rejects_zero_beta() {
        // Constructed for exactly zero sample covariance.
        let b = [0.02, -0.02, 0.02, -0.02];
        let f = [0.01, 0.01, -0.01, -0.01];
        assert!(matches!(
            treynor(&months(&f), &ctx_for(&b)),
            Err(MetricError::ZeroBeta)
        ));
    }

    #[test]
    fn jensen_alpha_zero_for_benchmark_itself() {
        let b = [0.02, -0.01, 0.03, 0.0];
        assert!(close(jensen_alpha(&months(&b), &ctx_for(&b)).unwrap(), 0.0));
    }

    #[test]
    fn jensen_alpha_of_constant_shift() {
        let b = [0.02, -0.01, 0.03, 0.0];
        let f: Vec<f64> = b.iter().map(|r| r + 0.01).collect();
        assert!(close(
            jensen_alpha(&months(&f), &ctx_for(&b)).unwrap(),
            0.01
        ));
    }

    #[test]
    fn tracking_error_vanishes_on_linear_fit() {
        let b = [0.02, -0.01, 0.03, 0.0];
        assert!(tracking_error(&months(&b), &ctx_for(&b)).unwrap() < 1e-9);
        let f: Vec<f64> = b.iter().map(|r| 2.0 * r).collect();
        assert!(tracking_error(&months(&f), &ctx_for(&b)).unwrap() < 1e-9);
    }

    #[test]
    fn tracking_error_equals_sigma_when_uncorrelated() {
        let b = [0.02, -0.02, 0.02, -0.02];
        let f = [0.01, 0.01, -0.01, -0.01];
        let te = tracking_error(&months(&f), &ctx_for(&b)).unwrap();
        assert!(close(te, 0.01));
    }

    #[test]
    fn information_ratio_rejects_exact_benchmark() {
        let b = [0.02, -0.01, 0.03, 0.0];
        assert!(matches!(
            information_ratio(&months(&b), &ctx_for(&b)),
            Err(MetricError::ZeroTrackingError)
        ));
    }

    #[test]
    fn information_ratio_composes_alpha_and_tracking_error() {
        let b = [0.02, -0.02, 0.01, -0.01];
        let f = [0.03, -0.01, 0.00, 0.01];
        let fund = months(&f);
        let ctx = ctx_for(&b);
        let expected = jensen_alpha(&fund, &ctx).unwrap() / tracking_error(&fund, &ctx).unwrap();
        assert!(close(information_ratio(&fund, &ctx).unwrap(), expected));
    }

    #[test]
    fn downside_probability_counts_fractions() {
        let ctx = ctx_for(&[0.0; 4]);
        assert!(close(
            downside_probability(&months(&[-0.01, 0.02, -0.03, 0.04]), &ctx).unwrap(),
            0.5
        ));
        assert!(close(
            downside_probability(&months(&[0.01, 0.02, 0.03, 0.04]), &ctx).unwrap(),
            0.0
        ));
        assert!(close(
            downside_probability(&months(&[-0.01, -0.02, -0.03, -0.04]), &ctx).unwrap(),
            1.0
        ));
    }

    #[test]
    fn var_picks_the_tail_order_statistic() {
        // Sorted index floor(0.05 * 19) = 0: the single -10% month.
        let mut rets = vec![0.01; 19];
        rets.push(-0.10);
        let f = months(&rets);
        let ctx = ctx_for(&[0.0; 20]);
        assert!(close(historical_var_pct(&f, &ctx).unwrap(), 10.0));
    }

    #[test]
    fn var_clamps_at_zero_for_all_positive_returns() {
        let f = months(&[0.01; 20]);
        let ctx = ctx_for(&[0.0; 20]);
        assert!(close(historical_var_pct(&f, &ctx).unwrap(), 0.0));
    }

    #[test]
    fn var_needs_twenty_observations() {
        let f = months(&[0.01; 10]);
        let ctx = ctx_for(&[0.0; 10]);
        assert!(matches!(
            historical_var_pct(&f, &ctx),
            Err(MetricError::InsufficientHistory { have: 10, need: 20 })
        ));
    }

    #[test]
    fn capture_ratios_identity_and_flat_fund() {
        let b = [0.02, -0.01, 0.03, -0.02];
        let (u, d) = capture_ratios(&months(&b), &ctx_for(&b)).unwrap();
        assert!(close(u, 100.0) && close(d, 100.0));

        let flat = months(&[0.0; 4]);
        let (u, d) = capture_ratios(&flat, &ctx_for(&b)).unwrap();
        assert!(close(u, 0.0) && close(d, 0.0));
    }

    #[test]
    fn capture_ratios_need_down_periods() {
        let b = [0.02, 0.01, 0.03];
        let f = [0.01, 0.02, 0.01];
        assert!(matches!(
            capture_ratios(&months(&f), &ctx_for(&b)),
            Err(MetricError::NoDownPeriods)
        ));
    }

    #[test]
    fn series_constructor_enforces_invariants() {
        let d1 = NaiveDate::from_ymd_opt(2020, 1, 31).unwrap();
        let d2 = NaiveDate::from_ymd_opt(2020, 2, 29).unwrap();
        assert!(matches!(
            ReturnSeries::new("x", vec![(d2, 0.0), (d1, 0.0)]),
            Err(MetricError::NonMonotonicDates)
        ));
        assert!(matches!(
            ReturnSeries::new("x", vec![(d1, -1.0)]),
            Err(MetricError::InvalidReturn(_))
        ));
    }

    #[test]
    fn alignment_drops_unmatched_dates() {
        let d = |m: u32| NaiveDate::from_ymd_opt(2020, m, 28).unwrap();
        let fund = ReturnSeries::new("f", vec![(d(1), 0.01), (d(2), 0.02), (d(4), 0.03)]).unwrap();
        let bench = ReturnSeries::new("b", vec![(d(1), 0.01), (d(3), 0.02), (d(4), 0.03)]).unwrap();
        let a = align(&fund, &bench);
        assert_eq!(a.fund, vec![0.01, 0.03]);
        assert_eq!(a.bench, vec![0.01, 0.03]);
        assert_eq!(a.dropped, 2);
    }

    #[test]
    fn compute_metric_set_collects_warnings() {
        let b = [0.02, -0.01, 0.03, 0.0];
        let (set, warnings) = compute_metric_set(&months(&b), &ctx_for(&b));
        // Fund equals benchmark: information ratio must fail, beta must be 1.
        assert!(set.information_ratio.is_none());
        assert!(close(set.beta.unwrap(), 1.0));
        assert!(warnings.iter().any(|w| w.metric == "information_ratio"));
        // Too short for expected return and VaR.
        assert!(set.expected_return.is_none());
        assert!(set.var_pct_corpus.is_none());
    }
}
