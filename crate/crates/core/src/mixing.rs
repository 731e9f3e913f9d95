//! Shift autocorrelations and mixing diagnostics, and the `B + C ⊆ A`
//! pipeline for sets that look pseudorandom.
//!
//! Everything here is a finite-window estimate. A report can say a set
//! looks mixing at this `N`; it cannot certify that it is.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::construct::{
    bergelson_thin, build_d_with, extract_l, interleave_bc, with_trace_prefix, BcCertificate,
    CertificateStatus, DOptions, ExtractParams, StageFailure, ThinParams, TraceEntry,
};
use crate::density::{density_report, default_schedule};
use crate::error::{Error, Result};
use crate::exact::{self, Density, ExactBig, ExactDensity};
use crate::windowset::WindowSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Overlap on `[1, N − i]`, divided by `N − i`.
    Truncated,
    /// Overlap under `x ↦ x + i (mod N)`, divided by `N`.
    #[default]
    Cyclic,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncated" => Ok(Mode::Truncated),
            "cyclic" => Ok(Mode::Cyclic),
            _ => Err(Error::validation("mode", format!("`{s}` is not truncated or cyclic"))),
        }
    }
}

/// Density of `A ∩ (A − i)`.
pub fn autocorrelation(a: &WindowSet, i: usize, mode: Mode) -> Result<Density> {
    let n = a.window_len();
    if i >= n {
        return Err(Error::range("i", i, 0, n - 1));
    }
    Ok(match mode {
        Mode::Truncated => exact::density(a.count_with_translate(a, i, n - i), n - i),
        Mode::Cyclic => exact::density(a.cyclic_self_overlap(i), n),
    })
}

#[derive(Clone, Debug)]
pub struct MixingParams {
    pub n_max: usize,
    pub eps: Vec<f64>,
    pub mode: Mode,
    pub theta_mix: f64,
    pub theta_str: f64,
}

impl MixingParams {
    pub fn new(n_max: usize) -> Self {
        Self {
            n_max,
            eps: vec![0.01, 0.05, 0.1],
            mode: Mode::Cyclic,
            theta_mix: 0.02,
            theta_str: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    MixingLike,
    Structured,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct REpsPoint {
    pub eps: f64,
    pub count: usize,
    #[serde(serialize_with = "exact::ser_density")]
    pub density: Density,
}

/// `cesaro(n_max) <= ε·δ + max(r)·(1 − δ)`, evaluated exactly.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityCheck {
    pub eps: f64,
    #[serde(serialize_with = "exact::ser_density")]
    pub delta: Density,
    #[serde(serialize_with = "exact::ser_big")]
    pub lhs: BigRational,
    #[serde(serialize_with = "exact::ser_big")]
    pub rhs: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Thresholds {
    pub theta_mix: f64,
    pub theta_str: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub window_len: usize,
    pub n_max: usize,
    pub mode: Mode,
    #[serde(serialize_with = "exact::ser_density")]
    pub alpha: Density,
    /// `gamma[i - 1]` is the autocorrelation at shift `i`.
    pub gamma: Vec<ExactDensity>,
    pub r: Vec<ExactBig>,
    pub cesaro: Vec<ExactBig>,
    #[serde(serialize_with = "exact::ser_big")]
    pub max_r: BigRational,
    pub r_eps_density: Vec<REpsPoint>,
    pub classification: Classification,
    pub thresholds: Thresholds,
    pub inequality: Vec<InequalityCheck>,
    pub status: &'static str,
}

impl MixingReport {
    pub fn final_cesaro(&self) -> &BigRational {
        &self.cesaro.last().expect("n_max >= 1").0
    }

    pub fn inequality_holds(&self) -> bool {
        self.inequality.iter().all(|c| c.holds)
    }
}

fn deviations(a: &WindowSet, alpha: &Density, n_max: usize, mode: Mode) -> Result<(Vec<Density>, Vec<BigRational>)> {
    let alpha_sq = exact::to_big(alpha) * exact::to_big(alpha);
    let gamma = (1..=n_max)
        .into_par_iter()
        .map(|i| autocorrelation(a, i, mode))
        .collect::<Result<Vec<_>>>()?;
    let r = gamma
        .iter()
        .map(|g| (exact::to_big(g) - &alpha_sq).abs())
        .collect();
    Ok((gamma, r))
}

fn upper_alpha(a: &WindowSet) -> Result<Density> {
    Ok(density_report(a, &default_schedule(a.window_len()))?.upper_estimate)
}

fn check_n_max(a: &WindowSet, n_max: usize) -> Result<()> {
    let half = a.window_len() / 2;
    if n_max == 0 || n_max > half {
        return Err(Error::range("n_max", n_max, 1, half));
    }
    Ok(())
}

pub fn mixing_report(a: &WindowSet, params: &MixingParams) -> Result<MixingReport> {
    check_n_max(a, params.n_max)?;
    let alpha = upper_alpha(a)?;
    let (gamma, r) = deviations(a, &alpha, params.n_max, params.mode)?;

    let mut cesaro = Vec::with_capacity(r.len());
    let mut sum = BigRational::zero();
    for (i, ri) in r.iter().enumerate() {
        sum += ri;
        cesaro.push(ExactBig(&sum / BigInt::from(i + 1)));
    }
    let max_r = r.iter().max().cloned().unwrap_or_else(BigRational::zero);
    let last = cesaro.last().unwrap().0.clone();

    let mut r_eps_density = Vec::new();
    let mut inequality = Vec::new();
    for &eps in &params.eps {
        let e = exact::decimal(eps);
        let count = r.iter().filter(|ri| **ri <= e).count();
        let delta = exact::density(count, params.n_max);
        let d = exact::to_big(&delta);
        let rhs = &e * &d + &max_r * (BigRational::from_integer(1.into()) - &d);
        inequality.push(InequalityCheck {
            eps,
            delta,
            holds: last <= rhs,
            lhs: last.clone(),
            rhs,
        });
        r_eps_density.push(REpsPoint {
            eps,
            count,
            density: delta,
        });
    }

    let classification = if last <= exact::decimal(params.theta_mix) {
        Classification::MixingLike
    } else if last >= exact::decimal(params.theta_str) {
        Classification::Structured
    } else {
        Classification::Inconclusive
    };

    Ok(MixingReport {
        window_len: a.window_len(),
        n_max: params.n_max,
        mode: params.mode,
        alpha,
        gamma: gamma.into_iter().map(ExactDensity).collect(),
        r: r.into_iter().map(ExactBig).collect(),
        cesaro,
        max_r,
        r_eps_density,
        classification,
        thresholds: Thresholds {
            theta_mix: params.theta_mix,
            theta_str: params.theta_str,
        },
        inequality,
        status: "estimate",
    })
}

/// `{i <= n_max : r(i) <= eps}` against `α²`.
pub fn r_epsilon(a: &WindowSet, eps: f64, n_max: usize, mode: Mode) -> Result<WindowSet> {
    check_n_max(a, n_max)?;
    let alpha = upper_alpha(a)?;
    let (_, r) = deviations(a, &alpha, n_max, mode)?;
    let e = exact::decimal(eps);
    WindowSet::from_fn(n_max, |i| r[i - 1] <= e).map(|s| s.with_label(format!("R_{eps}")))
}

/// `(1/n) Σ_{i<=n} |dens(A ∩ (Y − i)) − α·dens(Y)|` over truncated windows.
pub fn cross_deviation(a: &WindowSet, y: &WindowSet, n_max: usize) -> Result<f64> {
    a.same_window(y)?;
    check_n_max(a, n_max)?;
    let n = a.window_len();
    let alpha = exact::density_f64(&upper_alpha(a)?);
    let beta = y.len() as f64 / n as f64;
    let total: f64 = (1..=n_max)
        .into_par_iter()
        .map(|i| {
            let hit = a.count_with_translate(y, i, n - i) as f64 / (n - i) as f64;
            (hit - alpha * beta).abs()
        })
        .sum();
    Ok(total / n_max as f64)
}

#[derive(Clone, Copy, Debug)]
pub struct PseudorandomParams {
    pub size: usize,
    pub candidates: usize,
    pub tau: Option<f64>,
    pub rho: Option<f64>,
    pub d_len: Option<usize>,
    /// Shift range for the classification report.
    pub n_max: usize,
}

impl PseudorandomParams {
    pub fn new(size: usize) -> Self {
        Self {
            size,
            candidates: ExtractParams::default().candidates,
            tau: None,
            rho: None,
            d_len: None,
            n_max: 1000,
        }
    }
}

/// `B + C ⊆ A` with `d_n` drawn from the shifts whose cross deviation
/// against `L` stays below `η = α²/2`.
pub fn find_bc_pseudorandom(a: &WindowSet, params: PseudorandomParams) -> Result<BcCertificate> {
    let m = params.size;
    if m == 0 {
        return Err(Error::validation("size", "must be positive"));
    }
    let n = a.window_len();
    let n_max = params.n_max.min(n / 2).max(1);
    let report = mixing_report(a, &MixingParams::new(n_max))?;
    let tag = |mut cert: BcCertificate| {
        if report.classification != Classification::MixingLike {
            cert.tags.push("hypothesis_unmet".into());
        }
        cert
    };
    let alpha = exact::density_f64(&report.alpha);
    if alpha == 0.0 {
        return Err(Error::validation("A", "upper density estimate is zero"));
    }

    let l = match extract_l(
        a,
        ExtractParams {
            candidates: params.candidates,
            prefer_robust: true,
        },
    ) {
        Ok(l) => l,
        Err(Error::Stage { stage, reason }) => return Ok(tag(BcCertificate::failed(n, m, stage, reason))),
        Err(e) => return Err(e),
    };
    let w = l.window_len;
    let beta = l.cardinality as f64 / w as f64;
    let eta = alpha * alpha / 2.0;
    let target = alpha * beta;
    let in_r_eta = |d: usize| {
        let mu = l.set.count_with_translate(a, d, w) as f64 / w as f64;
        (mu - target).abs() < eta
    };

    let d_len = params.d_len.unwrap_or(3 * m).max(m);
    let l_enum: Vec<usize> = l.set.iter().take(d_len).collect();
    let opts = DOptions {
        require_member: false,
        drop_budget: None,
    };
    let mut relaxed = false;
    let mut d = build_d_with(a, &l_enum, d_len, opts, in_r_eta)?;
    if d.terms.len() < m && report.classification != Classification::MixingLike {
        // Structured sets can have an empty R_η; outside the hypothesis the
        // filter is advisory, so retry without it.
        d = build_d_with(a, &l_enum, d_len, opts, |_| true)?;
        relaxed = true;
    }
    if d.terms.len() < m {
        return Ok(tag(BcCertificate::failed(
            n,
            m,
            "build_D",
            format!("reached length {} of {}", d.terms.len(), d_len),
        )));
    }
    let thin = ThinParams {
        tau: params.tau.unwrap_or((target - eta).max(alpha * alpha / 2.0)),
        rho: params.rho.unwrap_or(0.95 * alpha),
    };
    let thinned = match bergelson_thin(a, &l.set, &d.values(), thin) {
        Ok(t) => t,
        Err(Error::Stage { stage, reason }) => return Ok(tag(BcCertificate::failed(n, m, stage, reason))),
        Err(e) => return Err(e),
    };
    let mut cert = interleave_bc(a, &l.set, &thinned.values(), m)?;
    let head = vec![
        TraceEntry {
            stage: "extract_L",
            role: "x0",
            step: 0,
            value: l.base_point,
            note: format!("robustness {} beta {beta:.6}", l.robustness_score),
        },
        TraceEntry {
            stage: "build_D",
            role: "summary",
            step: 0,
            value: d.terms.len(),
            note: format!("eta {eta:.6} drops {}", d.drops),
        },
        TraceEntry {
            stage: "bergelson_thin",
            role: "summary",
            step: 0,
            value: thinned.survivors.len(),
            note: format!("tau {} rho {}", thin.tau, thin.rho),
        },
    ];
    with_trace_prefix(&mut cert, head);
    if relaxed {
        cert.tags.push("r_eta_relaxed".into());
    }
    if cert.status == CertificateStatus::Partial {
        cert.failure = Some(StageFailure {
            stage: "interleave_bc".into(),
            reason: format!("exhausted after {} of {} picks", cert.b.len(), m),
        });
    }
    Ok(tag(cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GeneratorSpec};
    use num_rational::Ratio;

    fn evens(n: usize) -> WindowSet {
        WindowSet::from_fn(n, |x| x % 2 == 0).unwrap()
    }

    fn big(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn autocorrelation_evens() {
        let a = evens(1000);
        for mode in [Mode::Truncated, Mode::Cyclic] {
            assert_eq!(autocorrelation(&a, 4, mode).unwrap(), Ratio::new(1, 2));
            assert_eq!(autocorrelation(&a, 3, mode).unwrap(), Ratio::new(0, 1));
            assert_eq!(autocorrelation(&a, 0, mode).unwrap(), Ratio::new(1, 2));
        }
        assert!(autocorrelation(&a, 1000, Mode::Cyclic).is_err());
    }

    #[test]
    fn autocorrelation_full_set() {
        let a = WindowSet::full(500).unwrap();
        for i in [1, 17, 499] {
            assert_eq!(autocorrelation(&a, i, Mode::Truncated).unwrap(), Ratio::new(1, 1));
            assert_eq!(autocorrelation(&a, i, Mode::Cyclic).unwrap(), Ratio::new(1, 1));
        }
    }

    #[test]
    fn autocorrelation_bernoulli() {
        let a = generate(&GeneratorSpec::bernoulli(0.5, 2, 1_000_000)).unwrap();
        let g = exact::density_f64(&autocorrelation(&a, 17, Mode::Truncated).unwrap());
        assert!((g - 0.25).abs() < 0.005, "{g}");
    }

    #[test]
    fn report_evens_is_structured() {
        let r = mixing_report(&evens(10_000), &MixingParams::new(100)).unwrap();
        assert_eq!(r.alpha, Ratio::new(1, 2));
        assert!(r.r.iter().all(|x| x.0 == big(1, 4)));
        assert!(r.cesaro.iter().all(|x| x.0 == big(1, 4)));
        assert_eq!(r.classification, Classification::Structured);
        assert!(r.inequality_holds());
    }

    #[test]
    fn report_full_set_is_degenerate_mixing() {
        let r = mixing_report(&WindowSet::full(1000).unwrap(), &MixingParams::new(50)).unwrap();
        assert!(r.cesaro.iter().all(|x| x.0.is_zero()));
        assert_eq!(r.classification, Classification::MixingLike);
    }

    #[test]
    fn r_eps_sets_are_nested() {
        let a = generate(&GeneratorSpec::bernoulli(0.3, 9, 20_000)).unwrap();
        let small = r_epsilon(&a, 0.001, 200, Mode::Cyclic).unwrap();
        let large = r_epsilon(&a, 0.01, 200, Mode::Cyclic).unwrap();
        assert!(small.is_subset(&large));
    }

    #[test]
    fn r_eps_evens() {
        let a = evens(4000);
        assert_eq!(r_epsilon(&a, 0.3, 100, Mode::Cyclic).unwrap().len(), 100);
        assert!(r_epsilon(&a, 0.2, 100, Mode::Cyclic).unwrap().is_empty());
    }

    #[test]
    fn n_max_bound() {
        assert!(mixing_report(&evens(100), &MixingParams::new(51)).is_err());
    }

    #[test]
    fn pseudorandom_full_set() {
        let a = WindowSet::full(5000).unwrap();
        let cert = find_bc_pseudorandom(&a, PseudorandomParams::new(4)).unwrap();
        assert!(cert.is_verified_at_size(), "{cert:?}");
    }

    #[test]
    fn pseudorandom_evens_tagged() {
        let a = evens(20_000);
        let cert = find_bc_pseudorandom(&a, PseudorandomParams::new(4)).unwrap();
        assert!(cert.is_verified_at_size(), "{cert:?}");
        assert!(cert.tags.contains(&"hypothesis_unmet".to_string()));
    }
}
