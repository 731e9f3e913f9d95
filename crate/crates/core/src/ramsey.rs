//! Pair colorings of block indices, monochromatic subsets, and the
//! one-shift construction `B + C ⊆ A ∪ (A + k)`.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

use crate::construct::{
    find_bc_high_density, verify_bc, BcCertificate, CertificateStatus, HighDensityParams,
};
use crate::density::default_banach_estimate;
use crate::error::{Error, Result};
use crate::transform::{default_n_schedule, fatten, FattenOutcome};
use crate::windowset::WindowSet;

/// A coloring of the pairs `{i, j}`, `i < j`, of `0..vertex_count()`.
pub trait PairColoring: Sync {
    type Color: Copy + Ord + Hash + Debug + Send + Sync;

    fn vertex_count(&self) -> usize;

    /// Color of `{i, j}` for `i < j`; `None` when undefined.
    fn color(&self, i: usize, j: usize) -> Option<Self::Color>;
}

/// Upper-triangular table of colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseColoring<C> {
    vertices: usize,
    cells: Vec<Option<C>>,
}

impl<C: Copy> DenseColoring<C> {
    pub fn from_fn(vertices: usize, mut f: impl FnMut(usize, usize) -> Option<C>) -> Self {
        let mut cells = Vec::with_capacity(vertices * vertices.saturating_sub(1) / 2);
        for i in 0..vertices {
            for j in i + 1..vertices {
                cells.push(f(i, j));
            }
        }
        Self { vertices, cells }
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        // Row i starts after the rows 0..i, of lengths n-1, n-2, ...
        i * (2 * self.vertices - i - 1) / 2 + (j - i - 1)
    }

    pub fn set(&mut self, i: usize, j: usize, color: Option<C>) {
        let (i, j) = (i.min(j), i.max(j));
        let s = self.slot(i, j);
        self.cells[s] = color;
    }
}

impl<C: Copy + Ord + Hash + Debug + Send + Sync> PairColoring for DenseColoring<C> {
    type Color = C;

    fn vertex_count(&self) -> usize {
        self.vertices
    }

    fn color(&self, i: usize, j: usize) -> Option<C> {
        if i >= j || j >= self.vertices {
            return None;
        }
        self.cells[self.slot(i, j)]
    }
}

/// `(ν, ξ)`: first offsets of `A` in the blocks of `b_i + c_j` and `c_i + b_j`.
pub type OffsetPair = (usize, usize);

#[derive(Clone, Debug)]
pub struct ColoringTable {
    pub n: usize,
    pub b_idx: Vec<usize>,
    pub c_idx: Vec<usize>,
    pub colors: DenseColoring<OffsetPair>,
    /// Pairs with an empty block, i.e. an undefined color.
    pub undefined: Vec<(usize, usize)>,
}

impl PairColoring for ColoringTable {
    type Color = OffsetPair;

    fn vertex_count(&self) -> usize {
        self.colors.vertex_count()
    }

    fn color(&self, i: usize, j: usize) -> Option<OffsetPair> {
        self.colors.color(i, j)
    }
}

/// Least `v ∈ [0, n)` with `n·block + v ∈ A`.
pub fn first_offset(a: &WindowSet, n: usize, block: usize) -> Option<usize> {
    let start = n * block;
    a.next_member(start - 1)
        .filter(|&x| x < start + n)
        .map(|x| x - start)
}

fn check_increasing(field: &'static str, v: &[usize]) -> Result<()> {
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation(field, "must be strictly increasing"));
    }
    if v.first() == Some(&0) {
        return Err(Error::validation(field, "block indices start at 1"));
    }
    Ok(())
}

pub fn color_pairs(a: &WindowSet, n: usize, b_idx: &[usize], c_idx: &[usize]) -> Result<ColoringTable> {
    if n == 0 {
        return Err(Error::validation("n", "must be positive"));
    }
    if b_idx.len() != c_idx.len() {
        return Err(Error::validation("c_idx", "must have the same length as b_idx"));
    }
    check_increasing("b_idx", b_idx)?;
    check_increasing("c_idx", c_idx)?;
    let len = a.window_len();
    let count = b_idx.len();
    let in_window = |block: usize| (block + 1) * n - 1 <= len;
    let rows: Vec<Vec<Option<OffsetPair>>> = (0..count)
        .into_par_iter()
        .map(|i| {
            (i + 1..count)
                .map(|j| {
                    let (bc, cb) = (b_idx[i] + c_idx[j], c_idx[i] + b_idx[j]);
                    if !in_window(bc) || !in_window(cb) {
                        return Err(Error::BlockOutOfWindow { i, j });
                    }
                    Ok(first_offset(a, n, bc).zip(first_offset(a, n, cb)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut undefined = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for (off, cell) in row.iter().enumerate() {
            if cell.is_none() {
                undefined.push((i, i + 1 + off));
            }
        }
    }
    let colors = DenseColoring {
        vertices: count,
        cells: rows.into_iter().flatten().collect(),
    };
    Ok(ColoringTable {
        n,
        b_idx: b_idx.to_vec(),
        c_idx: c_idx.to_vec(),
        colors,
        undefined,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoSubset<C> {
    pub indices: Vec<usize>,
    pub color: Option<C>,
    pub target: usize,
    pub complete: bool,
    /// `"pigeonhole"` or `"clique"`: which search produced `indices`.
    pub method: &'static str,
}

/// Every pair inside `indices` has color `color`.
pub fn is_monochromatic<P: PairColoring>(col: &P, indices: &[usize], color: Option<P::Color>) -> bool {
    indices.iter().enumerate().all(|(s, &i)| {
        indices[s + 1..]
            .iter()
            .all(|&j| color.is_some() && col.color(i.min(j), i.max(j)) == color)
    })
}

/// Pick the most frequent key; ties go to the least.
fn majority<C: Ord + Copy>(counts: &BTreeMap<C, usize>) -> Option<C> {
    let mut best: Option<(C, usize)> = None;
    for (&c, &k) in counts {
        if best.is_none_or(|(_, bk)| k > bk) {
            best = Some((c, k));
        }
    }
    best.map(|(c, _)| c)
}

fn pigeonhole<P: PairColoring>(col: &P) -> (Vec<usize>, Option<P::Color>) {
    let mut remaining: Vec<usize> = (0..col.vertex_count()).collect();
    let mut steps: Vec<(usize, Option<P::Color>)> = Vec::new();
    while let Some((&v, rest)) = remaining.split_first() {
        let mut groups: BTreeMap<P::Color, Vec<usize>> = BTreeMap::new();
        for &u in rest {
            if let Some(c) = col.color(v, u) {
                groups.entry(c).or_default().push(u);
            }
        }
        let counts = groups.iter().map(|(&c, g)| (c, g.len())).collect();
        match majority(&counts) {
            Some(c) => {
                steps.push((v, Some(c)));
                remaining = groups.remove(&c).unwrap();
            }
            None => {
                steps.push((v, None));
                break;
            }
        }
    }
    // Vertex s sees every later vertex in its step color, so any one step
    // color gives a monochromatic set; the final vertex joins any of them.
    let mut counts: BTreeMap<P::Color, usize> = BTreeMap::new();
    for (_, c) in &steps {
        if let Some(c) = c {
            *counts.entry(*c).or_default() += 1;
        }
    }
    let Some(color) = majority(&counts) else {
        return (steps.first().map(|s| vec![s.0]).unwrap_or_default(), None);
    };
    let mut indices: Vec<usize> = steps
        .iter()
        .filter(|(_, c)| *c == Some(color))
        .map(|s| s.0)
        .collect();
    if let Some((last, None)) = steps.last() {
        indices.push(*last);
    }
    (indices, Some(color))
}

/// Dense adjacency rows, one bitset per (color, vertex).
struct ColorGraph<C> {
    colors: Vec<C>,
    vertices: usize,
    rows: Vec<Vec<u64>>,
}

impl<C: Copy + Ord> ColorGraph<C> {
    fn new<P: PairColoring<Color = C>>(col: &P) -> Self {
        let v = col.vertex_count();
        let words = v.div_ceil(64);
        let mut colors: Vec<C> = Vec::new();
        let mut edges: Vec<(usize, usize, C)> = Vec::new();
        for i in 0..v {
            for j in i + 1..v {
                if let Some(c) = col.color(i, j) {
                    edges.push((i, j, c));
                    colors.push(c);
                }
            }
        }
        colors.sort_unstable();
        colors.dedup();
        let mut rows = vec![vec![0u64; words]; colors.len() * v];
        for (i, j, c) in edges {
            let k = colors.binary_search(&c).unwrap();
            rows[k * v + i][j / 64] |= 1 << (j % 64);
            rows[k * v + j][i / 64] |= 1 << (i % 64);
        }
        Self {
            colors,
            vertices: v,
            rows,
        }
    }

    fn row(&self, color: usize, v: usize) -> &[u64] {
        &self.rows[color * self.vertices + v]
    }
}

fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                w * 64 + b
            })
        })
    })
}

fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// Per color and start vertex, grow a clique by the candidate with the most
/// same-colored neighbours among the remaining candidates.
fn clique_search<P: PairColoring>(col: &P, target: usize) -> (Vec<usize>, Option<P::Color>) {
    let v = col.vertex_count();
    let graph = ColorGraph::new(col);
    let mut best: (Vec<usize>, Option<P::Color>) = (Vec::new(), None);
    for (ci, &c) in graph.colors.iter().enumerate() {
        for start in 0..v {
            let mut clique = vec![start];
            let mut cand = graph.row(ci, start).to_vec();
            while cand.iter().any(|&w| w != 0) {
                let pick = bits(&cand)
                    .map(|u| (and_count(&cand, graph.row(ci, u)), std::cmp::Reverse(u)))
                    .max()
                    .map(|(_, std::cmp::Reverse(u))| u)
                    .unwrap();
                clique.push(pick);
                let row = graph.row(ci, pick);
                for (w, r) in cand.iter_mut().zip(row) {
                    *w &= r;
                }
            }
            if clique.len() > best.0.len() {
                clique.sort_unstable();
                best = (clique, Some(c));
                if best.0.len() >= target {
                    return best;
                }
            }
        }
    }
    best
}

/// A monochromatic index set of size `target` if the greedy searches find one.
///
/// Pigeonhole greedy runs first; if it falls short, a max-degree clique
/// search per color takes over. The result is checked pair by pair.
pub fn mono_subset<P: PairColoring>(col: &P, target: usize) -> Result<MonoSubset<P::Color>> {
    if target == 0 {
        return Err(Error::validation("target", "must be positive"));
    }
    let (mut indices, mut color) = pigeonhole(col);
    let mut method = "pigeonhole";
    if indices.len() < target && col.vertex_count() >= target {
        let (alt, alt_color) = clique_search(col, target);
        if alt.len() > indices.len() {
            indices = alt;
            color = alt_color;
            method = "clique";
        }
    }
    if indices.len() >= 2 && !is_monochromatic(col, &indices, color) {
        return Err(Error::Internal("greedy subset is not monochromatic".into()));
    }
    Ok(MonoSubset {
        complete: indices.len() >= target,
        indices,
        color,
        target,
        method,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyEntry {
    pub i: usize,
    pub j: usize,
    pub b: usize,
    pub c: usize,
    pub sum: usize,
    /// `"A"` when `i < j`, `"A+k"` when `i > j`.
    pub side: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneShiftCertificate {
    #[serde(flatten)]
    pub certificate: BcCertificate,
    pub n: Option<usize>,
    pub nu: Option<usize>,
    pub xi: Option<usize>,
    /// Positions in order; odd positions carry `B`, even ones carry `C`.
    pub j: Vec<usize>,
    pub route: &'static str,
    pub dichotomy: Vec<DichotomyEntry>,
    pub ramsey_attempts: Vec<RamseyAttempt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamseyAttempt {
    pub requested: usize,
    pub supplied: usize,
    pub mono_size: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct OneShiftParams {
    pub size: usize,
    pub epsilon: f64,
    /// Extra block indices requested beyond `2·size` on the first attempt.
    pub slack: usize,
    /// Largest block supply the doubling loop will request.
    pub max_supply: usize,
    /// Search nodes for the direct block construction.
    pub node_budget: usize,
}

impl OneShiftParams {
    pub fn new(size: usize, epsilon: f64) -> Self {
        Self {
            size,
            epsilon,
            slack: 2,
            max_supply: 16 * size,
            node_budget: 200_000,
        }
    }
}

const FATTEN_MARGIN: f64 = 0.05;

/// Blocks at each position, plus the color they realize.
struct Layout {
    roles: Vec<usize>,
    nu: usize,
    xi: usize,
}

fn assemble(a: &WindowSet, n: usize, layout: &Layout) -> (Vec<usize>, Vec<usize>, Vec<DichotomyEntry>) {
    let k = layout.nu as i64 - layout.xi as i64;
    let mut dichotomy = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    for (p, &blk) in layout.roles.iter().enumerate() {
        if p % 2 == 0 {
            b.push(n * blk + layout.nu);
        } else {
            c.push(n * blk);
        }
    }
    for (pi, &bb) in layout.roles.iter().enumerate().step_by(2) {
        for (pj, &cb) in layout.roles.iter().enumerate().skip(1).step_by(2) {
            let (bv, cv) = (n * bb + layout.nu, n * cb);
            let sum = bv + cv;
            let (side, target) = if pi < pj { ("A", sum as i64) } else { ("A+k", sum as i64 - k) };
            let holds = target >= 1 && (target as usize) <= a.window_len() && a.contains(target as usize);
            dichotomy.push(DichotomyEntry {
                i: pi + 1,
                j: pj + 1,
                b: bv,
                c: cv,
                sum,
                side,
                holds,
            });
        }
    }
    b.sort_unstable();
    c.sort_unstable();
    (b, c, dichotomy)
}

/// Direct construction: place block indices position by position so that
/// every cross pair already realizes the target color, with bounded DFS.
fn targeted_layout(
    a: &WindowSet,
    n: usize,
    block_window: usize,
    len: usize,
    (nu, xi): OffsetPair,
    budget: usize,
) -> Option<Vec<usize>> {
    let limit = block_window / 2;
    let mut roles: Vec<usize> = Vec::with_capacity(len);
    let mut nodes = 0usize;
    // Earlier positions always precede `p`: a new B meets earlier Cs on
    // the `ξ` side, a new C meets earlier Bs on the `ν` side.
    let fits = |roles: &[usize], p: usize, x: usize| {
        let want = if p.is_multiple_of(2) { xi } else { nu };
        roles
            .iter()
            .skip(1 - p % 2)
            .step_by(2)
            .all(|&y| first_offset(a, n, x + y) == Some(want))
    };
    let mut next_from = vec![0usize; len];
    while roles.len() < len {
        let p = roles.len();
        let floor = if p >= 2 { roles[p - 2] } else { 0 };
        let mut x = next_from[p].max(floor);
        let found = loop {
            x += 1;
            if x > limit {
                break None;
            }
            nodes += 1;
            if nodes > budget {
                return None;
            }
            if fits(&roles, p, x) {
                break Some(x);
            }
        };
        match found {
            Some(x) => {
                next_from[p] = x;
                roles.push(x);
                if p + 1 < len {
                    next_from[p + 1] = 0;
                }
            }
            None => {
                next_from[p] = 0;
                let back = roles.pop()?;
                next_from[p - 1] = back;
            }
        }
    }
    Some(roles)
}

/// `B + C ⊆ A ∪ (A + k)` with `|B| = |C| = size` via fattening and a
/// monochromatic index set of the `(ν, ξ)` coloring.
pub fn one_shift(a: &WindowSet, params: OneShiftParams) -> Result<OneShiftCertificate> {
    let m = params.size;
    if m == 0 {
        return Err(Error::validation("size", "must be positive"));
    }
    if !(params.epsilon > 0.0 && params.epsilon < 1.0) {
        return Err(Error::validation("epsilon", "must be in (0, 1)"));
    }
    if default_banach_estimate(a).count == 0 {
        return Err(Error::validation("A", "Banach estimate is zero"));
    }
    let len = a.window_len();
    let failed = |stage: &str, reason: String, n: Option<usize>, attempts: Vec<RamseyAttempt>| OneShiftCertificate {
        certificate: BcCertificate::failed(len, m, stage, reason),
        n,
        nu: None,
        xi: None,
        j: Vec::new(),
        route: "none",
        dichotomy: Vec::new(),
        ramsey_attempts: attempts,
    };

    let eps = params.epsilon.max(0.5 - FATTEN_MARGIN);
    let fat = match fatten(a, eps, &default_n_schedule(len))? {
        FattenOutcome::Found { result, .. } => result,
        FattenOutcome::NotFound { .. } => {
            return Ok(failed("fatten", format!("no n reaches block density 1 - {eps}"), None, Vec::new()))
        }
    };
    let n = fat.n;
    let blocks = &fat.blocks;

    let need = 2 * m;
    let mut attempts = Vec::new();
    let mut supply = need + params.slack;
    let mut palette: BTreeMap<OffsetPair, usize> = BTreeMap::new();
    let mut layout: Option<(Layout, &'static str, Vec<usize>)> = None;
    while supply <= params.max_supply.max(need + params.slack) {
        let cert = find_bc_high_density(blocks, HighDensityParams::new(supply))?;
        if cert.b.len() < need {
            attempts.push(RamseyAttempt {
                requested: supply,
                supplied: cert.b.len(),
                mono_size: 0,
            });
            break;
        }
        let count = cert.b.len().min(cert.c.len());
        let table = color_pairs(a, n, &cert.b[..count], &cert.c[..count])?;
        for i in 0..count {
            for j in i + 1..count {
                if let Some(c) = table.color(i, j) {
                    *palette.entry(c).or_default() += 1;
                }
            }
        }
        let mono = mono_subset(&table, need)?;
        attempts.push(RamseyAttempt {
            requested: supply,
            supplied: count,
            mono_size: mono.indices.len(),
        });
        if let (true, Some((nu, xi))) = (mono.complete, mono.color) {
            let picked = &mono.indices[..need];
            let roles = picked
                .iter()
                .enumerate()
                .map(|(p, &ix)| if p % 2 == 0 { table.b_idx[ix] } else { table.c_idx[ix] })
                .collect();
            layout = Some((Layout { roles, nu, xi }, "ramsey", picked.to_vec()));
            break;
        }
        if cert.status != CertificateStatus::Verified {
            break;
        }
        supply *= 2;
    }

    if layout.is_none() {
        // Most frequent observed color first, then the rest by frequency.
        let mut order: Vec<(OffsetPair, usize)> = palette.into_iter().collect();
        order.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        if order.is_empty() {
            order.push(((0, 0), 0));
        }
        for (color, _) in order.into_iter().take(4) {
            if let Some(roles) = targeted_layout(a, n, fat.block_window, need, color, params.node_budget) {
                layout = Some((
                    Layout {
                        roles,
                        nu: color.0,
                        xi: color.1,
                    },
                    "targeted",
                    (1..=need).collect(),
                ));
                break;
            }
        }
    }

    let Some((layout, route, j)) = layout else {
        return Ok(failed(
            "one_shift",
            "block supply exhausted before a monochromatic set of size 2m appeared".into(),
            Some(n),
            attempts,
        ));
    };
    let k = layout.nu as i64 - layout.xi as i64;
    let (b, c, dichotomy) = assemble(a, n, &layout);
    let mut certificate = verify_bc(a, &b, &c, k);
    certificate.requested_size = m;
    if !certificate.is_verified_at_size() {
        return Err(Error::Internal(format!(
            "one-shift certificate failed verification with {} violations",
            certificate.violations.len()
        )));
    }
    if let Some(bad) = dichotomy.iter().find(|d| !d.holds) {
        return Err(Error::Internal(format!(
            "dichotomy fails at positions ({}, {})",
            bad.i, bad.j
        )));
    }
    if k.unsigned_abs() as usize >= n {
        return Err(Error::Internal(format!("|k| = {} is not below n = {n}", k.abs())));
    }
    if route == "targeted" {
        certificate.failure = None;
        certificate.tags.push("direct_block_layout".into());
    }
    Ok(OneShiftCertificate {
        certificate,
        n: Some(n),
        nu: Some(layout.nu),
        xi: Some(layout.xi),
        j,
        route,
        dichotomy,
        ramsey_attempts: attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residue(n: usize, m: usize, r: usize) -> WindowSet {
        WindowSet::from_fn(n, |x| x % m == r).unwrap()
    }

    #[test]
    fn dense_coloring_slots() {
        let mut col = DenseColoring::from_fn(5, |i, j| Some(i * 10 + j));
        assert_eq!(col.color(1, 3), Some(13));
        assert_eq!(col.color(3, 4), Some(34));
        assert_eq!(col.color(3, 1), None);
        col.set(4, 0, Some(99));
        assert_eq!(col.color(0, 4), Some(99));
    }

    #[test]
    fn evens_color_everything_zero() {
        let a = residue(1000, 2, 0);
        let t = color_pairs(&a, 2, &[1, 5, 9, 30], &[2, 3, 40, 41]).unwrap();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_eq!(t.color(i, j), Some((0, 0)));
            }
        }
        assert!(t.undefined.is_empty());
    }

    #[test]
    fn three_mod_four() {
        let a = residue(4000, 4, 3);
        let t = color_pairs(&a, 4, &[1, 2, 3], &[10, 20, 30]).unwrap();
        assert!((0..3).all(|i| (i + 1..3).all(|j| t.color(i, j) == Some((3, 3)))));
    }

    #[test]
    fn block_out_of_window() {
        let a = residue(100, 2, 0);
        assert!(matches!(
            color_pairs(&a, 2, &[1, 2], &[10, 60]),
            Err(Error::BlockOutOfWindow { i: 0, j: 1 })
        ));
    }

    #[test]
    fn constant_coloring_takes_first_indices() {
        let col = DenseColoring::from_fn(10, |_, _| Some(7u8));
        let mono = mono_subset(&col, 4).unwrap();
        assert!(mono.complete);
        assert_eq!(&mono.indices[..4], &[0, 1, 2, 3]);
        assert_eq!(mono.color, Some(7));
    }

    #[test]
    fn parity_coloring() {
        let col = DenseColoring::from_fn(64, |i, j| Some(((i + j) % 2) as u8));
        let mono = mono_subset(&col, 4).unwrap();
        assert!(mono.complete);
        assert!(is_monochromatic(&col, &mono.indices, mono.color));
    }

    #[test]
    fn perfect_matching_classes_stay_partial() {
        // K4 split into three perfect matchings: no monochromatic triangle.
        let col = DenseColoring::from_fn(4, |i, j| {
            Some(match (i, j) {
                (0, 1) | (2, 3) => 0u8,
                (0, 2) | (1, 3) => 1,
                _ => 2,
            })
        });
        let mono = mono_subset(&col, 3).unwrap();
        assert!(!mono.complete);
        assert_eq!(mono.indices.len(), 2);
    }

    #[test]
    fn one_shift_evens() {
        let a = residue(100_000, 2, 0);
        let cert = one_shift(&a, OneShiftParams::new(3, 0.1)).unwrap();
        assert!(cert.certificate.is_verified_at_size());
        assert_eq!(cert.certificate.k, 0);
        assert_eq!((cert.nu, cert.xi), (Some(0), Some(0)));
        assert_eq!(cert.route, "ramsey");
        assert!(cert.dichotomy.iter().all(|d| d.holds));
        assert_eq!(cert.dichotomy.len(), 9);
    }

    #[test]
    fn one_shift_one_mod_three() {
        let a = residue(300_000, 3, 1);
        let cert = one_shift(&a, OneShiftParams::new(3, 0.1)).unwrap();
        let c = &cert.certificate;
        assert!(c.is_verified_at_size(), "{cert:?}");
        assert!((c.k.unsigned_abs() as usize) < cert.n.unwrap());
        for d in &cert.dichotomy {
            let target = if d.i < d.j { d.sum as i64 } else { d.sum as i64 - c.k };
            assert_eq!(target % 3, 1);
        }
    }
}
