//! Brute-force reference implementations for cross-checking.
//!
//! Nothing here touches the bitset internals. Sets come in as plain
//! membership vectors (`member[x]` for `x` in `0..=N`, index 0 unused) and
//! every answer is a direct scan. Slow on purpose.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::windowset::WindowSet;

/// Membership vector of length `N + 1`.
pub fn membership(set: &WindowSet) -> Vec<bool> {
    let mut m = vec![false; set.window_len() + 1];
    for x in set.iter() {
        m[x] = true;
    }
    m
}

fn window(member: &[bool]) -> usize {
    member.len() - 1
}

fn holds(member: &[bool], x: i64) -> bool {
    x >= 1 && (x as usize) < member.len() && member[x as usize]
}

/// All `(b, c, b + c)` with `b + c ∉ A ∪ (A + k)`.
pub fn bc_violations(member: &[bool], b: &[usize], c: &[usize], k: i64) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for &x in b {
        for &y in c {
            let s = (x + y) as i64;
            let ok = s as usize <= window(member) && (holds(member, s) || holds(member, s - k));
            if !ok {
                out.push((x, y, x + y));
            }
        }
    }
    out
}

/// Block indices `k ∈ [1, ⌊N/n⌋ − 1]` whose block `[kn, kn + n − 1]` meets `A`.
pub fn block_transform(member: &[bool], n: usize) -> Vec<usize> {
    let last = (window(member) / n).saturating_sub(1);
    (1..=last)
        .filter(|&k| (k * n..k * n + n).any(|x| member[x]))
        .collect()
}

pub fn prefix_density(member: &[bool], n: usize) -> Ratio<u64> {
    Ratio::new(member[1..=n].iter().filter(|&&m| m).count() as u64, n as u64)
}

/// Best window of length `len`: `(start, count)`, leftmost on ties.
pub fn window_max(member: &[bool], len: usize) -> (usize, usize) {
    let mut best = (1, 0);
    for start in 1..=window(member) - len + 1 {
        let count = member[start..start + len].iter().filter(|&&m| m).count();
        if count > best.1 || start == 1 {
            best = (start, count);
        }
    }
    best
}

pub fn autocorrelation_truncated(member: &[bool], i: usize) -> Ratio<u64> {
    let n = window(member);
    let hits = (1..=n - i).filter(|&x| member[x] && member[x + i]).count();
    Ratio::new(hits as u64, (n - i) as u64)
}

pub fn autocorrelation_cyclic(member: &[bool], i: usize) -> Ratio<u64> {
    let n = window(member);
    // Positions 1..=n map to residues 0..n via x - 1.
    let hits = (1..=n)
        .filter(|&x| member[x] && member[(x - 1 + i) % n + 1])
        .count();
    Ratio::new(hits as u64, n as u64)
}

/// Least `v < n` with `n·block + v ∈ A`.
pub fn first_offset(member: &[bool], n: usize, block: usize) -> Option<usize> {
    (0..n).find(|&v| holds(member, (n * block + v) as i64))
}

/// Largest monochromatic subset by exhaustive search over all subsets.
pub fn max_mono_size<C: PartialEq + Copy>(vertices: usize, color: impl Fn(usize, usize) -> Option<C>) -> usize {
    assert!(vertices <= 20, "exhaustive search is exponential");
    let mut best = vertices.min(1);
    for mask in 1u32..(1 << vertices) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let idx: Vec<usize> = (0..vertices).filter(|&v| mask >> v & 1 == 1).collect();
        let first = color(idx[0], idx[1]);
        let mono = first.is_some()
            && idx
                .iter()
                .enumerate()
                .all(|(s, &i)| idx[s + 1..].iter().all(|&j| color(i, j) == first));
        if mono {
            best = size;
        }
    }
    best
}

/// All pairs inside `indices` carry one defined color.
pub fn is_mono<C: PartialEq + Copy>(indices: &[usize], color: impl Fn(usize, usize) -> Option<C>) -> bool {
    let mut seen: Option<C> = None;
    for (s, &i) in indices.iter().enumerate() {
        for &j in &indices[s + 1..] {
            let (lo, hi) = (i.min(j), i.max(j));
            match (color(lo, hi), seen) {
                (None, _) => return false,
                (Some(c), None) => seen = Some(c),
                (Some(c), Some(p)) if c != p => return false,
                _ => {}
            }
        }
    }
    true
}

/// Uniform random coloring of pairs of `0..vertices` with `colors` colors.
pub fn random_coloring(seed: u64, vertices: usize, colors: u8) -> BTreeMap<(usize, usize), u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BTreeMap::new();
    for i in 0..vertices {
        for j in i + 1..vertices {
            out.insert((i, j), rng.random_range(0..colors));
        }
    }
    out
}

/// Random coloring with a monochromatic clique of size `clique` planted on
/// random vertices. Returns the coloring and the planted vertex set.
pub fn planted_coloring(
    seed: u64,
    vertices: usize,
    colors: u8,
    clique: usize,
) -> (BTreeMap<(usize, usize), u8>, Vec<usize>) {
    let mut out = random_coloring(seed, vertices, colors);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut all: Vec<usize> = (0..vertices).collect();
    all.shuffle(&mut rng);
    let mut planted = all[..clique].to_vec();
    planted.sort_unstable();
    let color = rng.random_range(0..colors);
    for (s, &i) in planted.iter().enumerate() {
        for &j in &planted[s + 1..] {
            out.insert((i, j), color);
        }
    }
    (out, planted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fixtures() {
        let a = WindowSet::from_members(12, [2, 4, 6, 8, 10, 12]).unwrap();
        let m = membership(&a);
        assert!(bc_violations(&m, &[2, 4], &[2, 4], 0).is_empty());
        assert_eq!(bc_violations(&m, &[1], &[2], 0), vec![(1, 2, 3)]);
        assert!(bc_violations(&m, &[1, 3], &[2, 4], 1).is_empty());
        assert_eq!(block_transform(&m, 2), vec![1, 2, 3, 4, 5]);
        assert_eq!(window_max(&m, 3), (2, 2));
        assert_eq!(autocorrelation_cyclic(&m, 2), Ratio::new(1, 2));
        assert_eq!(first_offset(&m, 3, 1), Some(1));
    }

    #[test]
    fn exhaustive_mono() {
        let col = |i: usize, j: usize| Some((i + j) % 2);
        assert_eq!(max_mono_size(6, col), 3);
        assert!(is_mono(&[0, 2, 4], col));
        assert!(!is_mono(&[0, 1, 2], col));
    }

    #[test]
    fn planted_clique_is_monochromatic() {
        let (col, planted) = planted_coloring(3, 40, 4, 6);
        assert!(is_mono(&planted, |i, j| col.get(&(i, j)).copied()));
    }
}
