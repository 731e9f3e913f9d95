//! Pinned-seed test batteries.
//!
//! Each check reports what it measured, the threshold it was held to and a
//! verdict. Wall-clock time is recorded but kept out of the JSON so reports
//! stay byte-identical between runs.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sumset_core::construct::{find_bc_high_density, verify_bc, HighDensityParams};
use sumset_core::density::{default_banach_estimate, window_banach_density};
use sumset_core::exact;
use sumset_core::mixing::{
    autocorrelation, cross_deviation, find_bc_pseudorandom, mixing_report, r_epsilon, Classification,
    MixingParams, Mode, PseudorandomParams,
};
use sumset_core::oracle;
use sumset_core::ramsey::{mono_subset, one_shift, DenseColoring, OneShiftParams};
use sumset_core::transform::{block_transform, default_n_schedule, fatten};
use sumset_core::{generate, GeneratorKind, GeneratorSpec, WindowSet};

use crate::args::Suite;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub name: &'static str,
    pub measured: String,
    pub threshold: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_limit_s: Option<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckResult {
    /// Passed on value and, when a limit is set, finished within it.
    pub fn passed_in_time(&self) -> bool {
        self.passed
            && self
                .time_limit_s
                .is_none_or(|s| self.elapsed <= Duration::from_secs(s))
    }

    pub fn line(&self) -> String {
        let limit = self
            .time_limit_s
            .map(|s| format!(" (limit {s} s)"))
            .unwrap_or_default();
        format!(
            "{} [{}] {}: measured {}; threshold {}; {:.2} s{}",
            if self.passed_in_time() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.threshold,
            self.elapsed.as_secs_f64(),
            limit
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub suite: Suite,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub total: usize,
}

impl HarnessReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

type Check = fn() -> anyhow::Result<CheckResult>;

struct Outcome {
    measured: String,
    threshold: String,
    passed: bool,
}

fn check(
    id: &str,
    name: &'static str,
    time_limit_s: Option<u64>,
    body: impl FnOnce() -> anyhow::Result<Outcome>,
) -> anyhow::Result<CheckResult> {
    let start = Instant::now();
    let o = body()?;
    Ok(CheckResult {
        id: id.into(),
        name,
        measured: o.measured,
        threshold: o.threshold,
        passed: o.passed,
        time_limit_s,
        elapsed: start.elapsed(),
    })
}

pub fn acceptance_checks() -> Vec<(&'static str, Check)> {
    vec![
        ("1", certificate_exactness),
        ("2", block_transform_oracle),
        ("3", fattening),
        ("4", high_density_bc),
        ("5", one_shift_bc),
        ("6", mixing_analytics),
        ("7", cesaro_density_inequality),
        ("8", ramsey_soundness),
        ("9", determinism),
    ]
}

pub fn oracle_checks() -> Vec<(&'static str, Check)> {
    vec![
        ("oracle-1", oracle_block_and_verify),
        ("oracle-2", oracle_density_and_autocorrelation),
    ]
}

pub fn quick_checks() -> Vec<(&'static str, Check)> {
    vec![
        ("quick-1", quick_density_and_fatten),
        ("quick-2", quick_certificates),
        ("quick-3", quick_mixing),
    ]
}

pub fn run_suite(suite: Suite) -> anyhow::Result<HarnessReport> {
    let checks = match suite {
        Suite::Acceptance => acceptance_checks(),
        Suite::Oracle => oracle_checks(),
        Suite::Quick => quick_checks(),
    };
    let checks = checks
        .into_iter()
        .map(|(_, f)| f())
        .collect::<anyhow::Result<Vec<_>>>()?;
    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(HarnessReport {
        suite,
        total: checks.len(),
        passed,
        checks,
    })
}

fn bernoulli(p: f64, seed: u64, n: usize) -> anyhow::Result<WindowSet> {
    Ok(generate(&GeneratorSpec::bernoulli(p, seed, n))?)
}

fn evens(n: usize) -> anyhow::Result<WindowSet> {
    Ok(generate(&GeneratorSpec::periodic(2, &[0], n))?)
}

fn naive_violations(member: &[bool], b: &[usize], c: &[usize], k: i64) -> Vec<(usize, usize, usize)> {
    oracle::bc_violations(member, b, c, k)
}

fn agree(a: &WindowSet, member: &[bool], b: &[usize], c: &[usize], k: i64) -> (bool, bool) {
    let cert = verify_bc(a, b, c, k);
    let naive = naive_violations(member, b, c, k);
    let got: Vec<_> = cert.violations.iter().map(|v| (v.b, v.c, v.sum)).collect();
    (cert.verified == naive.is_empty() && got == naive, cert.verified)
}

pub fn certificate_exactness() -> anyhow::Result<CheckResult> {
    check("1", "certificate exactness", Some(10), || {
        const N: usize = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (mut cases, mut matches, mut valid) = (0usize, 0usize, 0usize);
        for s in 0..100u64 {
            let p = rng.random_range(0.7..0.95);
            let a = bernoulli(p, 1000 + s, N)?;
            let member = oracle::membership(&a);
            let base = find_bc_high_density(&a, HighDensityParams::new(6))?;
            for _ in 0..100 {
                let (mut b, mut c, mut k) = (base.b.clone(), base.c.clone(), 0i64);
                match rng.random_range(0..6) {
                    0 => {}
                    1 if !b.is_empty() => {
                        let i = rng.random_range(0..b.len());
                        b[i] = rng.random_range(1..=N / 2);
                    }
                    2 if !c.is_empty() => {
                        let i = rng.random_range(0..c.len());
                        c[i] = rng.random_range(1..=N / 2);
                    }
                    3 => k = rng.random_range(-5..=5),
                    4 => {
                        let nb = rng.random_range(1..=8);
                        let nc = rng.random_range(1..=8);
                        b = (0..nb).map(|_| rng.random_range(1..=N / 2)).collect();
                        c = (0..nc).map(|_| rng.random_range(1..=N / 2)).collect();
                    }
                    _ => b.push(N - rng.random_range(0..5)),
                }
                let (ok, verified) = agree(&a, &member, &b, &c, k);
                cases += 1;
                matches += ok as usize;
                valid += verified as usize;
            }
        }
        Ok(Outcome {
            measured: format!("{matches}/{cases} verdicts agree ({valid} valid, {} corrupted)", cases - valid),
            threshold: "10000/10000".into(),
            passed: cases == 10_000 && matches == cases,
        })
    })
}

pub fn block_transform_oracle() -> anyhow::Result<CheckResult> {
    check("2", "block transform oracle", Some(5), || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (mut cases, mut matches) = (0, 0);
        for s in 0..200u64 {
            let a = bernoulli(rng.random_range(0.02..0.9), 2000 + s, 512)?;
            let member = oracle::membership(&a);
            for n in 1..=8 {
                cases += 1;
                matches += (block_transform(&a, n)?.blocks.to_vec() == oracle::block_transform(&member, n)) as usize;
            }
        }
        Ok(Outcome {
            measured: format!("{matches}/{cases} exact matches"),
            threshold: "all".into(),
            passed: matches == cases,
        })
    })
}

pub fn fattening() -> anyhow::Result<CheckResult> {
    check("3", "fattening to block density 0.9", Some(30), || {
        const N: usize = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut hits = 0;
        let mut eligible = 0;
        for i in 0..50u64 {
            let a = if i < 25 {
                let modulus = rng.random_range(2..=20usize);
                let need = modulus.div_ceil(10);
                let count = rng.random_range(need..=modulus.min(need + 3));
                let all: Vec<usize> = (0..modulus).collect();
                let mut residues: Vec<usize> = all.choose_multiple(&mut rng, count).copied().collect();
                residues.sort_unstable();
                generate(&GeneratorSpec::periodic(modulus, &residues, N))?
            } else {
                bernoulli(0.1 + 0.4 * (i - 25) as f64 / 25.0, 3000 + i, N)?
            };
            if !exact::ge_f64(&default_banach_estimate(&a).density(), 0.1) {
                continue;
            }
            eligible += 1;
            let out = fatten(&a, 0.1, &default_n_schedule(N))?;
            if out.found().is_some_and(|r| exact::ge_f64(&r.achieved_density(), 0.9)) {
                hits += 1;
            }
        }
        Ok(Outcome {
            measured: format!("{hits}/{eligible} sets reach 0.9"),
            threshold: ">= 48/50".into(),
            passed: eligible == 50 && hits >= 48,
        })
    })
}

pub fn high_density_bc() -> anyhow::Result<CheckResult> {
    check("4", "high-density B + C", Some(60), || {
        let (mut verified, mut emitted_ok, mut emitted) = (0, 0, 0);
        for seed in 0..100u64 {
            let a = bernoulli(0.8, seed, 1_000_000)?;
            let cert = find_bc_high_density(&a, HighDensityParams::new(10))?;
            if cert.b.is_empty() {
                continue;
            }
            emitted += 1;
            let member = oracle::membership(&a);
            let clean = naive_violations(&member, &cert.b, &cert.c, 0).is_empty();
            emitted_ok += (clean == cert.verified) as usize;
            let in_a = cert.c.iter().all(|&c| member[c]);
            if cert.is_verified_at_size() && clean && in_a {
                verified += 1;
            }
        }
        Ok(Outcome {
            measured: format!("{verified}/100 verified with C ⊆ A; checker agrees on {emitted_ok}/{emitted}"),
            threshold: ">= 90/100; checker 100%".into(),
            passed: verified >= 90 && emitted_ok == emitted,
        })
    })
}

pub fn one_shift_bc() -> anyhow::Result<CheckResult> {
    check("5", "one-shift B + C ⊆ A ∪ (A + k)", Some(300), || {
        let m = 5;
        let (mut good, mut emitted, mut sound) = (0, 0, 0);
        for seed in 0..20u64 {
            let a = bernoulli(0.2, seed, 10_000_000)?;
            let out = one_shift(&a, OneShiftParams::new(m, 0.1))?;
            let cert = &out.certificate;
            if cert.b.is_empty() {
                continue;
            }
            emitted += 1;
            let member = oracle::membership(&a);
            let n = out.n.unwrap_or(0);
            let k = cert.k;
            let clean = naive_violations(&member, &cert.b, &cert.c, k).is_empty();
            let small_k = (k.unsigned_abs() as usize) < n;
            let table_complete = out.dichotomy.len() == m * m;
            let dichotomy = table_complete
                && out.dichotomy.iter().all(|d| {
                    let target = if d.i < d.j { d.sum as i64 } else { d.sum as i64 - k };
                    d.b + d.c == d.sum && target >= 1 && (target as usize) < member.len() && member[target as usize]
                });
            let ok = clean && small_k && dichotomy;
            sound += ok as usize;
            if ok && cert.is_verified_at_size() {
                good += 1;
            }
        }
        Ok(Outcome {
            measured: format!("{good}/20 verified with |k| < n and the order dichotomy; {sound}/{emitted} emitted pass"),
            threshold: ">= 15/20; emitted 100%".into(),
            passed: good >= 15 && sound == emitted,
        })
    })
}

pub fn mixing_analytics() -> anyhow::Result<CheckResult> {
    check("6", "mixing analytics", None, || {
        let quarter = num_rational::BigRational::new(1.into(), 4.into());
        let ev = mixing_report(&evens(100_000)?, &MixingParams::new(1000))?;
        let evens_ok = ev.alpha == Ratio::new(1, 2)
            && ev.r.iter().all(|r| r.0 == quarter)
            && *ev.final_cesaro() == quarter;
        let rnd = mixing_report(&bernoulli(0.5, 6, 1_000_000)?, &MixingParams::new(1000))?;
        let rnd_cesaro = exact::big_f64(rnd.final_cesaro());
        let rnd_ok = *rnd.final_cesaro() <= exact::decimal(0.01);
        let full = mixing_report(&WindowSet::full(100_000)?, &MixingParams::new(1000))?;
        let full_ok = full.cesaro.iter().all(|c| c.0 == num_rational::BigRational::from_integer(0.into()));
        Ok(Outcome {
            measured: format!(
                "evens alpha {} cesaro {} ({}); bernoulli(0.5) cesaro {rnd_cesaro:.6}; full set cesaro all zero: {full_ok}",
                exact::render(ev.alpha.numer(), ev.alpha.denom()),
                exact::render(ev.final_cesaro().numer(), ev.final_cesaro().denom()),
                if evens_ok { "exact" } else { "mismatch" },
            ),
            threshold: "evens 1/2, r = 1/4, cesaro 1/4; bernoulli <= 0.01; full 0".into(),
            passed: evens_ok && rnd_ok && full_ok,
        })
    })
}

pub fn cesaro_density_inequality() -> anyhow::Result<CheckResult> {
    check("7", "Cesàro/density inequality", None, || {
        const N: usize = 100_000;
        let mut sets = vec![evens(N)?, WindowSet::full(N)?];
        for (i, p) in [0.1, 0.3, 0.5, 0.8].into_iter().enumerate() {
            for s in 0..3u64 {
                sets.push(bernoulli(p, 7000 + 10 * i as u64 + s, N)?);
            }
        }
        sets.push(generate(&GeneratorSpec::periodic(7, &[0, 3], N))?);
        sets.push(generate(&GeneratorSpec::new(
            GeneratorKind::IntervalBlocks {
                block_len: 30,
                gap_len: 70,
            },
            0,
            N,
        ))?);
        let y = generate(&GeneratorSpec::periodic(5, &[1, 2], N))?;
        let (mut reports, mut holding) = (0, 0);
        let mut cross = 0f64;
        for a in &sets {
            for mode in [Mode::Cyclic, Mode::Truncated] {
                let mut p = MixingParams::new(500);
                p.eps = vec![0.001, 0.01, 0.05, 0.1, 0.25];
                p.mode = mode;
                let r = mixing_report(a, &p)?;
                reports += 1;
                holding += r.inequality_holds() as usize;
                if mode == Mode::Cyclic && r.classification == Classification::MixingLike && a.len() < N {
                    cross = cross.max(cross_deviation(a, &y, 500)?);
                }
            }
        }
        Ok(Outcome {
            measured: format!(
                "{holding}/{reports} reports satisfy it exactly; largest mixing cross deviation {cross:.5} (reported only)"
            ),
            threshold: "100%".into(),
            passed: holding == reports,
        })
    })
}

pub fn ramsey_soundness() -> anyhow::Result<CheckResult> {
    check("8", "Ramsey output soundness", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut sound = 0;
        for s in 0..1000u64 {
            let v = rng.random_range(2..=200usize);
            let colors = rng.random_range(1..=8u8);
            let target = rng.random_range(2..=8usize);
            let table = oracle::random_coloring(8000 + s, v, colors);
            let col = DenseColoring::from_fn(v, |i, j| table.get(&(i, j)).copied());
            let mono = mono_subset(&col, target)?;
            let ok = oracle::is_mono(&mono.indices, |i, j| table.get(&(i, j)).copied())
                && mono.complete == (mono.indices.len() >= target);
            sound += ok as usize;
        }
        let (mut planted_runs, mut recovered) = (0, 0);
        for s in 0..200u64 {
            let n = 2 + (s % 2) as usize;
            let m = 2 + (s / 2 % 4) as usize;
            let colors = (n * n) as u8;
            let v = n * n * 2 * m;
            let (table, _) = oracle::planted_coloring(9000 + s, v, colors, 2 * m);
            let col = DenseColoring::from_fn(v, |i, j| table.get(&(i, j)).copied());
            let mono = mono_subset(&col, 2 * m)?;
            planted_runs += 1;
            let ok = oracle::is_mono(&mono.indices, |i, j| table.get(&(i, j)).copied());
            if ok && mono.indices.len() >= 2 * m {
                recovered += 1;
            }
        }
        Ok(Outcome {
            measured: format!("{sound}/1000 monochromatic; planted recovery {recovered}/{planted_runs}"),
            threshold: "1000/1000; recovery >= 95%".into(),
            passed: sound == 1000 && recovered * 100 >= 95 * planted_runs,
        })
    })
}

/// Command lines replayed at 1 and 8 threads.
pub fn determinism_workload() -> Vec<Vec<String>> {
    let lines: [&str; 8] = [
        "density --gen bernoulli:0.3 --n 1000000 --seed 1",
        "fatten --gen bernoulli:0.15 --n 100000 --seed 2 --epsilon 0.1",
        "find-bc --gen bernoulli:0.8 --n 1000000 --seed 3 --size 10",
        "find-bc --gen bernoulli:0.8 --n 1000000 --seed 4 --size 10",
        "find-bc --pipeline pseudorandom --gen bernoulli:0.6 --n 1000000 --seed 5 --size 8",
        "one-shift --gen bernoulli:0.2 --n 10000000 --seed 6 --size 5",
        "mixing --gen bernoulli:0.5 --n 1000000 --seed 7 --n-max 1000 --eps 0.01 --eps 0.05",
        "harness --suite quick",
    ];
    lines
        .iter()
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect()
}

pub fn determinism() -> anyhow::Result<CheckResult> {
    check("9", "byte-identical output at 1 and 8 threads", None, || {
        let workload = determinism_workload();
        let mut same = 0;
        let mut first_diff = None;
        for args in &workload {
            let one = crate::run::execute(args, Some(1))?;
            let eight = crate::run::execute(args, Some(8))?;
            let again = crate::run::execute(args, Some(8))?;
            if one.body == eight.body && eight.body == again.body && one.code == eight.code {
                same += 1;
            } else if first_diff.is_none() {
                first_diff = Some(args[0].clone());
            }
        }
        Ok(Outcome {
            measured: format!(
                "{same}/{} runs identical{}",
                workload.len(),
                first_diff.map(|d| format!("; first difference in `{d}`")).unwrap_or_default()
            ),
            threshold: "all".into(),
            passed: same == workload.len(),
        })
    })
}

fn oracle_block_and_verify() -> anyhow::Result<CheckResult> {
    check("oracle-1", "block transform and verify_bc against brute force", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (mut cases, mut matches) = (0, 0);
        for s in 0..1000u64 {
            let n_win = rng.random_range(32..=512usize);
            let a = bernoulli(rng.random_range(0.05..0.95), 11_000 + s, n_win)?;
            let member = oracle::membership(&a);
            let n = rng.random_range(1..=(n_win / 4).min(8));
            let blocks_ok = block_transform(&a, n)?.blocks.to_vec() == oracle::block_transform(&member, n);
            let b: Vec<usize> = (0..rng.random_range(0..5)).map(|_| rng.random_range(1..=n_win)).collect();
            let c: Vec<usize> = (0..rng.random_range(0..5)).map(|_| rng.random_range(1..=n_win)).collect();
            let (verify_ok, _) = agree(&a, &member, &b, &c, rng.random_range(-3..=3));
            cases += 1;
            matches += (blocks_ok && verify_ok) as usize;
        }
        Ok(Outcome {
            measured: format!("{matches}/{cases} instances agree"),
            threshold: "all".into(),
            passed: matches == cases,
        })
    })
}

fn oracle_density_and_autocorrelation() -> anyhow::Result<CheckResult> {
    check("oracle-2", "window densities and autocorrelations against brute force", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (mut cases, mut matches) = (0, 0);
        for s in 0..1000u64 {
            let n_win = rng.random_range(16..=512usize);
            let a = bernoulli(rng.random_range(0.05..0.95), 12_000 + s, n_win)?;
            let member = oracle::membership(&a);
            let len = rng.random_range(1..=n_win);
            let w = window_banach_density(&a, len)?;
            let i = rng.random_range(0..n_win);
            let ok = (w.start, w.count) == oracle::window_max(&member, len)
                && autocorrelation(&a, i, Mode::Truncated)? == oracle::autocorrelation_truncated(&member, i)
                && autocorrelation(&a, i, Mode::Cyclic)? == oracle::autocorrelation_cyclic(&member, i);
            cases += 1;
            matches += ok as usize;
        }
        Ok(Outcome {
            measured: format!("{matches}/{cases} instances agree"),
            threshold: "all".into(),
            passed: matches == cases,
        })
    })
}

fn quick_density_and_fatten() -> anyhow::Result<CheckResult> {
    check("quick-1", "evens: density and fattening", None, || {
        let a = evens(10_000)?;
        let est = default_banach_estimate(&a).density();
        let fat = fatten(&a, 0.1, &default_n_schedule(10_000))?;
        let n = fat.found().map(|r| r.n);
        Ok(Outcome {
            measured: format!("estimate {}; fatten n = {n:?}", exact::render(est.numer(), est.denom())),
            threshold: "1/2; n = 2".into(),
            passed: est == Ratio::new(1, 2) && n == Some(2),
        })
    })
}

fn quick_certificates() -> anyhow::Result<CheckResult> {
    check("quick-2", "evens: certificates", None, || {
        let a = evens(100_000)?;
        let fixtures = verify_bc(&a, &[2, 4], &[2, 4], 0).verified
            && !verify_bc(&a, &[1], &[2], 0).verified
            && verify_bc(&a, &[1, 3], &[2, 4], 1).verified;
        let hd = find_bc_high_density(&a, HighDensityParams::new(5))?;
        let pr = find_bc_pseudorandom(&a, PseudorandomParams::new(5))?;
        let os = one_shift(&a, OneShiftParams::new(3, 0.1))?;
        let tagged = hd.tags.iter().any(|t| t == "hypothesis_unmet") && pr.tags.iter().any(|t| t == "hypothesis_unmet");
        let ok = fixtures
            && hd.is_verified_at_size()
            && pr.is_verified_at_size()
            && os.certificate.is_verified_at_size()
            && os.certificate.k == 0
            && tagged;
        Ok(Outcome {
            measured: format!(
                "fixtures {fixtures}; high-density {:?}; pseudorandom {:?}; one-shift {:?} k = {}; tagged {tagged}",
                hd.status, pr.status, os.certificate.status, os.certificate.k
            ),
            threshold: "all verified, k = 0, hypothesis_unmet tagged".into(),
            passed: ok,
        })
    })
}

fn quick_mixing() -> anyhow::Result<CheckResult> {
    check("quick-3", "evens: mixing diagnostics", None, || {
        let a = evens(20_000)?;
        let r = mixing_report(&a, &MixingParams::new(200))?;
        let wide = r_epsilon(&a, 0.3, 200, Mode::Cyclic)?.len();
        let narrow = r_epsilon(&a, 0.2, 200, Mode::Cyclic)?.len();
        let quarter = num_rational::BigRational::new(1.into(), 4.into());
        Ok(Outcome {
            measured: format!("{:?}; |R_0.3| = {wide}; |R_0.2| = {narrow}", r.classification),
            threshold: "structured, cesaro 1/4, 200, 0".into(),
            passed: r.classification == Classification::Structured
                && *r.final_cesaro() == quarter
                && wide == 200
                && narrow == 0,
        })
    })
}
