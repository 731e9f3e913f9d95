//! Greedy `B + C ⊆ A` constructions on a finite window, and the exact
//! certificate checker.
//!
//! The pipeline is `extract_l → build_d → bergelson_thin → interleave_bc`.
//! Each stage re-establishes its own defining predicate, and the final
//! certificate is always decided by [`verify_bc`], which scans all
//! `|B|·|C|` sums and trusts none of the bookkeeping.

use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::{default_banach_estimate, BanachWitness};
use crate::error::{Error, Result};
use crate::exact::{self, Density};
use crate::windowset::WindowSet;

/// Sizes of the finite subsets `F ⊆ L` sampled for the robustness score.
const ROBUSTNESS_PREFIXES: [usize; 4] = [1, 2, 4, 8];

/// How many `b` candidates `interleave_bc` tries per step before giving up.
const MAX_B_TRIES: usize = 256;

#[derive(Clone, Debug, Serialize)]
pub struct LTranslate {
    pub base_point: usize,
    /// `{l : x₀ + l ∈ A}` over the window `[1, N − x₀]`.
    #[serde(skip)]
    pub set: WindowSet,
    pub window_len: usize,
    pub cardinality: usize,
    #[serde(serialize_with = "exact::ser_density")]
    pub density_score: Density,
    pub robustness_score: usize,
    pub candidates_scored: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct ExtractParams {
    pub candidates: usize,
    /// Rank candidates with a positive robustness score ahead of the rest.
    pub prefer_robust: bool,
}

impl Default for ExtractParams {
    fn default() -> Self {
        Self {
            candidates: 8,
            prefer_robust: false,
        }
    }
}

/// The translate of `A` seen from `x0`.
pub fn translate_at(a: &WindowSet, x0: usize) -> Result<WindowSet> {
    if x0 == 0 || x0 >= a.window_len() {
        return Err(Error::range("x0", x0, 1, a.window_len() - 1));
    }
    Ok(a
        .translate_down(x0 as isize, a.window_len() - x0)?
        .with_label(format!("L@{x0}")))
}

/// `min_F |A ∩ ⋂_{l∈F}(A − l)|` over prefix and interleaved samples of `L`.
pub fn robustness_score(a: &WindowSet, l: &WindowSet) -> usize {
    let head: Vec<usize> = l.iter().take(8).collect();
    if head.is_empty() {
        return 0;
    }
    let mut families: Vec<Vec<usize>> = ROBUSTNESS_PREFIXES
        .iter()
        .filter(|&&k| k <= head.len())
        .map(|&k| head[..k].to_vec())
        .collect();
    families.push(head.iter().copied().step_by(2).collect());
    families.push(head.iter().copied().skip(1).step_by(2).collect());
    families
        .iter()
        .filter(|f| !f.is_empty())
        .map(|f| {
            a.intersect_translate(f)
                .map(|s| s.len())
                .unwrap_or(0)
        })
        .min()
        .unwrap_or(0)
}

fn score(a: &WindowSet, x0: usize) -> Result<LTranslate> {
    let set = translate_at(a, x0)?;
    let density_score = default_banach_estimate(&set).density();
    let robustness_score = robustness_score(a, &set);
    Ok(LTranslate {
        base_point: x0,
        window_len: set.window_len(),
        cardinality: set.len(),
        set,
        density_score,
        robustness_score,
        candidates_scored: 0,
    })
}

/// Picks the base point `x₀` among the first `candidates` members of `A` in
/// the Banach witness interval, maximizing `(density, robustness)`.
pub fn extract_l(a: &WindowSet, params: ExtractParams) -> Result<LTranslate> {
    if a.is_empty() {
        return Err(Error::validation("A", "set is empty"));
    }
    if params.candidates == 0 {
        return Err(Error::validation("candidates", "must be positive"));
    }
    let witness: BanachWitness = default_banach_estimate(a);
    let mut points: Vec<usize> = Vec::with_capacity(params.candidates);
    let mut after = witness.start - 1;
    while points.len() < params.candidates {
        match a.next_member(after) {
            Some(x) if x <= witness.end() && x < a.window_len() => {
                points.push(x);
                after = x;
            }
            _ => break,
        }
    }
    if points.is_empty() {
        return Err(Error::Stage {
            stage: "extract_L",
            reason: "no base point inside the Banach witness interval".into(),
        });
    }
    let scored = points
        .par_iter()
        .map(|&x0| score(a, x0))
        .collect::<Result<Vec<_>>>()?;
    let key = |t: &LTranslate| {
        (
            params.prefer_robust && t.robustness_score > 0,
            t.density_score,
            t.robustness_score,
        )
    };
    // Ascending x0 order, so keeping the first maximum breaks ties by smallest x0.
    let mut best: Option<LTranslate> = None;
    for t in scored.into_iter().filter(|t| !t.set.is_empty()) {
        if best.as_ref().is_none_or(|b| key(&t) > key(b)) {
            best = Some(t);
        }
    }
    let mut best = best.ok_or_else(|| Error::Stage {
        stage: "extract_L",
        reason: "every candidate base point yields an empty translate".into(),
    })?;
    best.candidates_scored = points.len();
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DTerm {
    pub value: usize,
    /// `l_i + value ∈ A` holds for `i <= covered`.
    pub covered: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DSequence {
    pub terms: Vec<DTerm>,
    pub requested: usize,
    pub drops: usize,
    pub complete: bool,
}

impl DSequence {
    pub fn values(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.value).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DOptions {
    /// Require `d ∈ A` as well.
    pub require_member: bool,
    /// Constraint drops allowed in total; `None` means `⌈m/2⌉`.
    pub drop_budget: Option<usize>,
}

impl Default for DOptions {
    fn default() -> Self {
        Self {
            require_member: true,
            drop_budget: None,
        }
    }
}

/// `d₁ < d₂ < …` from `A` with `l_i + d_j ∈ A` for `i <= j`, smallest first.
pub fn build_d(a: &WindowSet, l_enum: &[usize], m: usize) -> Result<DSequence> {
    build_d_with(a, l_enum, m, DOptions::default(), |_| true)
}

/// [`build_d`] with an extra acceptance filter on candidates.
///
/// When no candidate qualifies, the newest constraint is dropped (the
/// required prefix of `L` shrinks by one for this and every later term)
/// and the step retried, up to the drop budget.
pub fn build_d_with(
    a: &WindowSet,
    l_enum: &[usize],
    m: usize,
    opts: DOptions,
    mut accept: impl FnMut(usize) -> bool,
) -> Result<DSequence> {
    if l_enum.is_empty() {
        return Err(Error::validation("L_enum", "must not be empty"));
    }
    if m == 0 {
        return Err(Error::validation("m", "must be positive"));
    }
    if l_enum.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("L_enum", "must be strictly ascending"));
    }
    let budget = opts.drop_budget.unwrap_or(m.div_ceil(2));
    let base = if opts.require_member {
        a.clone()
    } else {
        WindowSet::full(a.window_len())?
    };
    // prefixes[p] = base ∩ ⋂_{i<=p} (A − l_i)
    let mut prefixes = vec![base];
    let mut terms = Vec::with_capacity(m);
    let mut drops = 0;
    let mut prev = 0;

    'steps: for j in 1..=m {
        loop {
            let p = (j - drops).clamp(1, l_enum.len());
            while prefixes.len() <= p {
                let q = prefixes.len();
                let mut next = prefixes[q - 1].clone();
                next.intersect_with_translate(a, l_enum[q - 1]);
                prefixes.push(next);
            }
            let mut after = prev;
            while let Some(d) = prefixes[p].next_member(after) {
                if accept(d) {
                    terms.push(DTerm {
                        value: d,
                        covered: p,
                    });
                    prev = d;
                    continue 'steps;
                }
                after = d;
            }
            if drops < budget && p > 1 {
                drops += 1;
            } else {
                break 'steps;
            }
        }
    }
    Ok(DSequence {
        complete: terms.len() == m,
        terms,
        requested: m,
        drops,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct ThinParams {
    pub tau: f64,
    pub rho: f64,
}

impl ThinParams {
    pub fn new(tau: f64) -> Self {
        Self { tau, rho: 0.9 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThinStep {
    pub value: usize,
    /// `|L ∩ ⋂_{i<=n}(A − e_i)|` after accepting this term.
    pub intersection: usize,
    /// Required floor `tau·rhoⁿ·|window|`, rendered exactly.
    pub threshold: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Thinned {
    pub survivors: Vec<ThinStep>,
    pub rejected: Vec<usize>,
    /// Candidates with `|L ∩ (A − d)| < tau·|window|` on their own.
    pub below_tau: Vec<usize>,
    pub window_len: usize,
    pub tau: f64,
    pub rho: f64,
}

impl Thinned {
    pub fn values(&self) -> Vec<usize> {
        self.survivors.iter().map(|s| s.value).collect()
    }
}

/// Greedy subsequence of `d` keeping `|L ∩ ⋂(A − e_i)| >= tau·ρⁿ·|window|`.
pub fn bergelson_thin(a: &WindowSet, l: &WindowSet, d: &[usize], params: ThinParams) -> Result<Thinned> {
    if params.tau.is_nan() || params.tau <= 0.0 {
        return Err(Error::validation("tau", "must be positive"));
    }
    if !(params.rho > 0.0 && params.rho <= 1.0) {
        return Err(Error::validation("rho", "must be in (0, 1]"));
    }
    let w = l.window_len();
    let window = BigRational::from_integer(w.into());
    let tau = exact::decimal(params.tau);
    let rho = exact::decimal(params.rho);
    let mut floor = &tau * &window;
    let mut running = l.clone();
    let mut survivors = Vec::new();
    let mut rejected = Vec::new();
    let mut below_tau = Vec::new();

    for &dv in d {
        let alone = l.count_with_translate(a, dv, w);
        if BigRational::from_integer(alone.into()) < &tau * &window {
            below_tau.push(dv);
        }
        let next_floor = &floor * &rho;
        let mut candidate = running.clone();
        candidate.intersect_with_translate(a, dv);
        let size = candidate.len();
        if BigRational::from_integer(size.into()) >= next_floor && size > 0 {
            survivors.push(ThinStep {
                value: dv,
                intersection: size,
                threshold: exact::render(next_floor.numer(), next_floor.denom()),
            });
            running = candidate;
            floor = next_floor;
        } else {
            rejected.push(dv);
        }
    }
    if survivors.len() < 2 {
        return Err(Error::Stage {
            stage: "bergelson_thin",
            reason: format!(
                "only {} of {} candidates survive tau = {}; try a smaller tau",
                survivors.len(),
                d.len(),
                params.tau
            ),
        });
    }
    Ok(Thinned {
        survivors,
        rejected,
        below_tau,
        window_len: w,
        tau: params.tau,
        rho: params.rho,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub b: usize,
    pub c: usize,
    pub sum: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub stage: &'static str,
    pub role: &'static str,
    pub step: usize,
    pub value: usize,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageFailure {
    pub stage: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    /// `|B| = |C| =` the requested size and every sum checks out.
    Verified,
    /// Fewer elements than requested; whatever was found still checks out.
    Partial,
    /// At least one violation.
    Refuted,
    /// A pipeline stage failed before any sets were produced.
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BcCertificate {
    pub window_len: usize,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    pub k: i64,
    pub requested_size: usize,
    /// Violations list is empty. Says nothing about size.
    pub verified: bool,
    pub status: CertificateStatus,
    pub violations: Vec<Violation>,
    pub tags: Vec<String>,
    pub trace: Vec<TraceEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<StageFailure>,
}

impl BcCertificate {
    pub fn is_verified_at_size(&self) -> bool {
        self.status == CertificateStatus::Verified
    }

    pub fn failed(window_len: usize, requested_size: usize, stage: &str, reason: String) -> Self {
        Self {
            window_len,
            b: Vec::new(),
            c: Vec::new(),
            k: 0,
            requested_size,
            verified: false,
            status: CertificateStatus::Failed,
            violations: Vec::new(),
            tags: Vec::new(),
            trace: Vec::new(),
            failure: Some(StageFailure {
                stage: stage.into(),
                reason,
            }),
        }
    }

    fn settle_status(&mut self) {
        self.verified = self.violations.is_empty();
        self.status = if self.failure.is_some() && self.b.is_empty() {
            CertificateStatus::Failed
        } else if !self.verified {
            CertificateStatus::Refuted
        } else if self.b.len() >= self.requested_size && self.c.len() >= self.requested_size {
            CertificateStatus::Verified
        } else {
            CertificateStatus::Partial
        };
    }
}

/// Exhaustive check of `B + C ⊆ A ∪ (A + k)`. Sums outside the window are violations.
pub fn verify_bc(a: &WindowSet, b: &[usize], c: &[usize], k: i64) -> BcCertificate {
    let n = a.window_len() as i64;
    let mut violations = Vec::new();
    for &bi in b {
        for &cj in c {
            let sum = bi as i64 + cj as i64;
            let in_window = (1..=n).contains(&sum);
            let in_a = in_window && a.contains(sum as usize);
            let back = sum - k;
            let in_shift = in_window && (1..=n).contains(&back) && a.contains(back as usize);
            if !(in_a || in_shift) {
                violations.push(Violation {
                    b: bi,
                    c: cj,
                    sum: sum as usize,
                });
            }
        }
    }
    let mut cert = BcCertificate {
        window_len: a.window_len(),
        b: b.to_vec(),
        c: c.to_vec(),
        k,
        requested_size: b.len().min(c.len()),
        verified: false,
        status: CertificateStatus::Refuted,
        violations,
        tags: Vec::new(),
        trace: Vec::new(),
        failure: None,
    };
    cert.settle_status();
    cert
}

/// Alternating picks: `b_j` is the smallest unused element of
/// `L ∩ ⋂_{i<j}(A − c_i)` that admits a partner, and `c_j` the smallest later
/// element of `E` with `b_i + c_j ∈ A` for all `i <= j`.
pub fn interleave_bc(a: &WindowSet, l: &WindowSet, e: &[usize], m: usize) -> Result<BcCertificate> {
    if m == 0 {
        return Err(Error::validation("m", "must be positive"));
    }
    let mut running = l.clone();
    let mut b: Vec<usize> = Vec::with_capacity(m);
    let mut c: Vec<usize> = Vec::with_capacity(m);
    let mut trace = Vec::new();
    let mut next_e = 0;

    for j in 1..=m {
        let mut pick = None;
        let mut after = 0;
        let mut tries = 0;
        while let Some(bj) = running.next_member(after) {
            after = bj;
            if b.contains(&bj) {
                continue;
            }
            tries += 1;
            let hit = e[next_e..].iter().position(|&cand| {
                a.contains(bj + cand) && b.iter().all(|&bi| a.contains(bi + cand))
            });
            if let Some(off) = hit {
                pick = Some((bj, next_e + off));
                break;
            }
            if tries >= MAX_B_TRIES {
                break;
            }
        }
        let Some((bj, idx)) = pick else { break };
        let cj = e[idx];
        trace.push(TraceEntry {
            stage: "interleave_bc",
            role: "b",
            step: j,
            value: bj,
            note: format!("smallest admissible in L ∩ ⋂(A − c_i), candidate #{tries}"),
        });
        trace.push(TraceEntry {
            stage: "interleave_bc",
            role: "c",
            step: j,
            value: cj,
            note: format!("E[{idx}]"),
        });
        b.push(bj);
        c.push(cj);
        next_e = idx + 1;
        running.intersect_with_translate(a, cj);
    }

    b.sort_unstable();
    let mut cert = verify_bc(a, &b, &c, 0);
    cert.requested_size = m;
    cert.trace = trace;
    cert.settle_status();
    Ok(cert)
}

#[derive(Clone, Copy, Debug)]
pub struct HighDensityParams {
    pub size: usize,
    pub candidates: usize,
    pub tau: Option<f64>,
    pub rho: Option<f64>,
    /// Length of the D sequence; `None` means `3·size`.
    pub d_len: Option<usize>,
}

impl HighDensityParams {
    pub fn new(size: usize) -> Self {
        Self {
            size,
            candidates: ExtractParams::default().candidates,
            tau: None,
            rho: None,
            d_len: None,
        }
    }
}

/// Threshold and decay used when the caller leaves them unset.
///
/// `tau = 2·est − 1` when positive, else `est²/2`; `rho = 0.95·est`.
pub fn default_thin_params(estimate: &Density) -> ThinParams {
    let est = exact::density_f64(estimate);
    let doubled = 2.0 * est - 1.0;
    let tau = if doubled > 0.0 { doubled } else { est * est / 2.0 };
    ThinParams {
        tau,
        rho: 0.95 * est,
    }
}

pub(crate) fn with_trace_prefix(cert: &mut BcCertificate, mut entries: Vec<TraceEntry>) {
    entries.append(&mut cert.trace);
    cert.trace = entries;
}

/// `extract_l → build_d → bergelson_thin → interleave_bc`, with `C ⊆ A` asserted.
pub fn find_bc_high_density(a: &WindowSet, params: HighDensityParams) -> Result<BcCertificate> {
    let m = params.size;
    if m == 0 {
        return Err(Error::validation("size", "must be positive"));
    }
    let n = a.window_len();
    let estimate = default_banach_estimate(a).density();
    let hypothesis_met = estimate > Ratio::new(1, 2);
    let tag = |mut cert: BcCertificate| {
        if !hypothesis_met {
            cert.tags.push("hypothesis_unmet".into());
        }
        cert
    };
    if estimate.is_zero() {
        return Err(Error::validation("A", "Banach estimate is zero"));
    }

    let l = match extract_l(
        a,
        ExtractParams {
            candidates: params.candidates,
            prefer_robust: false,
        },
    ) {
        Ok(l) => l,
        Err(Error::Stage { stage, reason }) => return Ok(tag(BcCertificate::failed(n, m, stage, reason))),
        Err(e) => return Err(e),
    };
    let defaults = default_thin_params(&estimate);
    let thin = ThinParams {
        tau: params.tau.unwrap_or(defaults.tau),
        rho: params.rho.unwrap_or(defaults.rho),
    };
    let d_len = params.d_len.unwrap_or(3 * m).max(m);
    let l_enum: Vec<usize> = l.set.iter().take(d_len).collect();
    let d = build_d(a, &l_enum, d_len)?;
    if d.terms.len() < m {
        return Ok(tag(BcCertificate::failed(
            n,
            m,
            "build_D",
            format!("reached length {} of {}", d.terms.len(), d_len),
        )));
    }
    let thinned = match bergelson_thin(a, &l.set, &d.values(), thin) {
        Ok(t) => t,
        Err(Error::Stage { stage, reason }) => return Ok(tag(BcCertificate::failed(n, m, stage, reason))),
        Err(e) => return Err(e),
    };
    let mut cert = interleave_bc(a, &l.set, &thinned.values(), m)?;
    if !cert.c.iter().all(|&x| a.contains(x)) {
        return Err(Error::Internal("C ⊄ A in the high-density pipeline".into()));
    }
    let mut head = vec![TraceEntry {
        stage: "extract_L",
        role: "x0",
        step: 0,
        value: l.base_point,
        note: format!(
            "density {} robustness {} over {} candidates",
            exact::render(l.density_score.numer(), l.density_score.denom()),
            l.robustness_score,
            l.candidates_scored
        ),
    }];
    head.extend(d.terms.iter().enumerate().map(|(i, t)| TraceEntry {
        stage: "build_D",
        role: "d",
        step: i + 1,
        value: t.value,
        note: format!("covers l_1..l_{}", t.covered),
    }));
    head.push(TraceEntry {
        stage: "bergelson_thin",
        role: "summary",
        step: 0,
        value: thinned.survivors.len(),
        note: format!("tau {} rho {} rejected {}", thin.tau, thin.rho, thinned.rejected.len()),
    });
    with_trace_prefix(&mut cert, head);
    if cert.status == CertificateStatus::Partial {
        cert.failure = Some(StageFailure {
            stage: "interleave_bc".into(),
            reason: format!("exhausted after {} of {} picks", cert.b.len(), m),
        });
    }
    Ok(tag(cert))
}

/// Checks `B + C ⊆ A` and the stage invariants without reusing pipeline code.
pub fn recheck(a: &WindowSet, b: &[usize], c: &[usize]) -> bool {
    b.iter()
        .all(|&x| c.iter().all(|&y| x + y <= a.window_len() && a.contains(x + y)))
}
