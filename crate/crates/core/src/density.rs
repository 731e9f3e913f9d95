//! Finite-window density estimates.
//!
//! Limits over growing lengths are replaced by a length schedule. The
//! lower and upper estimates are the min and max of prefix densities over
//! the tail (largest half) of the schedule. The scalar Banach estimate is
//! the min over the same tail of the per-length sliding-window maxima.
//! These are estimates only. A finite window cannot certify a limit.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Density};
use crate::windowset::WindowSet;

/// Shortest length the default schedule goes down to.
pub const MIN_SCHEDULE_LEN: usize = 16;

/// `{⌈N/2^k⌉ : k >= 0}` down to [`MIN_SCHEDULE_LEN`], ascending.
pub fn default_schedule(window_len: usize) -> Vec<usize> {
    let mut out = vec![window_len];
    let mut k = 1u32;
    while k < usize::BITS {
        let len = window_len.div_ceil(1usize << k);
        if len < MIN_SCHEDULE_LEN || len == *out.last().unwrap() {
            break;
        }
        out.push(len);
        k += 1;
    }
    out.reverse();
    out
}

pub fn prefix_density(set: &WindowSet, n: usize) -> Result<Density> {
    if n == 0 || n > set.window_len() {
        return Err(Error::range("n", n, 1, set.window_len()));
    }
    Ok(exact::density(set.count_range(1, n), n))
}

/// A maximizing interval `[start, start + length - 1]` holding `count` members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BanachWitness {
    pub length: usize,
    pub start: usize,
    pub count: usize,
}

impl BanachWitness {
    pub fn density(&self) -> Density {
        exact::density(self.count, self.length)
    }

    pub fn end(&self) -> usize {
        self.start + self.length - 1
    }
}

/// Max over `m` of `|A ∩ [m, m+L−1]| / L`, leftmost maximizer, by an O(N) sliding count.
pub fn window_banach_density(set: &WindowSet, length: usize) -> Result<BanachWitness> {
    let n = set.window_len();
    if length == 0 || length > n {
        return Err(Error::range("L", length, 1, n));
    }
    let mut count = set.count_range(1, length);
    let mut best = BanachWitness {
        length,
        start: 1,
        count,
    };
    if count == length {
        return Ok(best);
    }
    for m in 2..=n - length + 1 {
        count = count + set.contains(m + length - 1) as usize - set.contains(m - 1) as usize;
        if count > best.count {
            best.start = m;
            best.count = count;
            if count == length {
                break;
            }
        }
    }
    Ok(best)
}

fn validate_schedule(set: &WindowSet, schedule: &[usize]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::validation("schedule", "must not be empty"));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("schedule", "lengths must be strictly ascending"));
    }
    if schedule[0] == 0 {
        return Err(Error::validation("schedule", "lengths must be positive"));
    }
    let max = *schedule.last().unwrap();
    if max > set.window_len() {
        return Err(Error::validation(
            "schedule",
            format!("length {max} exceeds the window N={}", set.window_len()),
        ));
    }
    Ok(())
}

/// Largest half of the schedule (rounded up).
fn tail(schedule: &[usize]) -> &[usize] {
    &schedule[schedule.len() / 2..]
}

/// The Banach estimate over `schedule`: the smallest per-length maximum among
/// the tail lengths; on ties the longest length wins.
pub fn banach_estimate(set: &WindowSet, schedule: &[usize]) -> Result<BanachWitness> {
    validate_schedule(set, schedule)?;
    let witnesses = tail(schedule)
        .par_iter()
        .map(|&l| window_banach_density(set, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(min_witness(&witnesses))
}

fn min_witness(witnesses: &[BanachWitness]) -> BanachWitness {
    let mut best = witnesses[0];
    for w in &witnesses[1..] {
        if w.density() <= best.density() {
            best = *w;
        }
    }
    best
}

/// Banach estimate over [`default_schedule`].
pub fn default_banach_estimate(set: &WindowSet) -> BanachWitness {
    banach_estimate(set, &default_schedule(set.window_len()))
        .expect("the default schedule is always valid")
}

#[derive(Clone, Debug, Serialize)]
pub struct PrefixPoint {
    pub n: usize,
    #[serde(serialize_with = "exact::ser_density")]
    pub density: Density,
}

#[derive(Clone, Debug, Serialize)]
pub struct BanachPoint {
    pub length: usize,
    #[serde(serialize_with = "exact::ser_density")]
    pub density: Density,
    pub witness: [usize; 2],
    pub count: usize,
}

impl From<BanachWitness> for BanachPoint {
    fn from(w: BanachWitness) -> Self {
        Self {
            length: w.length,
            density: w.density(),
            witness: [w.start, w.end()],
            count: w.count,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub window_len: usize,
    pub cardinality: usize,
    pub schedule: Vec<usize>,
    pub tail: Vec<usize>,
    pub prefix_density_at: Vec<PrefixPoint>,
    #[serde(serialize_with = "exact::ser_density")]
    pub lower_estimate: Density,
    #[serde(serialize_with = "exact::ser_density")]
    pub upper_estimate: Density,
    pub banach_estimates: Vec<BanachPoint>,
    pub banach_estimate: BanachPoint,
    /// Always `"estimate"`: nothing here certifies a limit.
    pub status: &'static str,
}

pub fn density_report(set: &WindowSet, schedule: &[usize]) -> Result<DensityReport> {
    validate_schedule(set, schedule)?;
    let prefix: Vec<PrefixPoint> = schedule
        .iter()
        .map(|&n| PrefixPoint {
            n,
            density: exact::density(set.count_range(1, n), n),
        })
        .collect();
    let tail_from = schedule.len() / 2;
    let tail_prefix = &prefix[tail_from..];
    let lower = tail_prefix.iter().map(|p| p.density).min().unwrap();
    let upper = tail_prefix.iter().map(|p| p.density).max().unwrap();

    let witnesses = schedule
        .par_iter()
        .map(|&l| window_banach_density(set, l))
        .collect::<Result<Vec<_>>>()?;
    let estimate = min_witness(&witnesses[tail_from..]);

    Ok(DensityReport {
        window_len: set.window_len(),
        cardinality: set.len(),
        schedule: schedule.to_vec(),
        tail: tail(schedule).to_vec(),
        prefix_density_at: prefix,
        lower_estimate: lower,
        upper_estimate: upper,
        banach_estimates: witnesses.into_iter().map(BanachPoint::from).collect(),
        banach_estimate: estimate.into(),
        status: "estimate",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GeneratorSpec};
    use num_rational::Ratio;

    fn evens(n: usize) -> WindowSet {
        WindowSet::from_fn(n, |x| x % 2 == 0).unwrap()
    }

    #[test]
    fn default_schedule_shape() {
        let s = default_schedule(1_000_000);
        assert_eq!(*s.last().unwrap(), 1_000_000);
        assert_eq!(s[s.len() - 2], 500_000);
        assert!(s[0] >= MIN_SCHEDULE_LEN);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(default_schedule(10), vec![10]);
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(prefix_density(&evens(100), 10).unwrap(), Ratio::new(1, 2));
        let full = WindowSet::full(50).unwrap();
        for n in [1, 7, 50] {
            assert_eq!(prefix_density(&full, n).unwrap(), Ratio::new(1, 1));
        }
        let a = WindowSet::from_members(20, [1, 2, 3, 10]).unwrap();
        assert_eq!(prefix_density(&a, 10).unwrap(), Ratio::new(2, 5));
        assert!(prefix_density(&a, 0).is_err());
        assert!(prefix_density(&a, 21).is_err());
    }

    #[test]
    fn banach_examples() {
        let w = window_banach_density(&evens(10_000), 100).unwrap();
        assert_eq!(w.density(), Ratio::new(1, 2));
        let block = WindowSet::from_fn(10_000, |x| (500..=599).contains(&x)).unwrap();
        let w = window_banach_density(&block, 100).unwrap();
        assert_eq!((w.density(), w.start), (Ratio::new(1, 1), 500));
        assert!(window_banach_density(&block, 10_001).is_err());
    }

    #[test]
    fn banach_leftmost_witness() {
        let a = WindowSet::from_members(30, [3, 4, 20, 21]).unwrap();
        let w = window_banach_density(&a, 2).unwrap();
        assert_eq!((w.start, w.count), (3, 2));
    }

    #[test]
    fn report_evens() {
        let r = density_report(&evens(10_000), &[100, 1000, 10_000]).unwrap();
        let half = Ratio::new(1, 2);
        assert_eq!(r.lower_estimate, half);
        assert_eq!(r.upper_estimate, half);
        assert!(r.banach_estimates.iter().all(|b| b.density == half));
        assert_eq!(r.banach_estimate.density, half);
    }

    #[test]
    fn report_half_interval() {
        let n = 1000;
        let a = WindowSet::from_fn(n, |x| x <= n / 2).unwrap();
        let r = density_report(&a, &[n / 4, n]).unwrap();
        assert_eq!(r.prefix_density_at[0].density, Ratio::new(1, 1));
        assert_eq!(r.prefix_density_at[1].density, Ratio::new(1, 2));
        assert_eq!(r.banach_estimates[0].density, Ratio::new(1, 1));
    }

    #[test]
    fn report_bernoulli_concentrates() {
        let a = generate(&GeneratorSpec::bernoulli(0.3, 11, 1_000_000)).unwrap();
        let r = density_report(&a, &default_schedule(a.window_len())).unwrap();
        for est in [r.lower_estimate, r.upper_estimate] {
            assert!((exact::density_f64(&est) - 0.3).abs() < 0.01);
        }
    }

    #[test]
    fn report_validation() {
        let a = evens(100);
        assert!(density_report(&a, &[]).is_err());
        assert!(density_report(&a, &[10, 5]).is_err());
        assert!(density_report(&a, &[10, 101]).is_err());
    }

    #[test]
    fn evens_estimate_is_exactly_half() {
        assert_eq!(
            default_banach_estimate(&evens(10_000)).density(),
            Ratio::new(1, 2)
        );
    }
}
