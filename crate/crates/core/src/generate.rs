//! Seeded test-instance generators.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{read_set, ReadOptions};
use crate::windowset::WindowSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    Bernoulli { p: f64 },
    Periodic { modulus: usize, residues: Vec<usize> },
    IntervalBlocks { block_len: usize, gap_len: usize },
    Explicit { members: Vec<usize> },
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub seed: u64,
    pub window_len: usize,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, seed: u64, window_len: usize) -> Self {
        Self {
            kind,
            seed,
            window_len,
        }
    }

    pub fn bernoulli(p: f64, seed: u64, window_len: usize) -> Self {
        Self::new(GeneratorKind::Bernoulli { p }, seed, window_len)
    }

    pub fn periodic(modulus: usize, residues: &[usize], window_len: usize) -> Self {
        Self::new(
            GeneratorKind::Periodic {
                modulus,
                residues: residues.to_vec(),
            },
            0,
            window_len,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_len == 0 && !matches!(self.kind, GeneratorKind::File { .. }) {
            return Err(Error::validation("window_len", "window must be non-empty"));
        }
        match &self.kind {
            GeneratorKind::Bernoulli { p } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::validation("p", format!("{p} is not a probability")));
                }
            }
            GeneratorKind::Periodic { modulus, residues } => {
                if *modulus == 0 {
                    return Err(Error::validation("modulus", "must be positive"));
                }
                if let Some(r) = residues.iter().find(|&&r| r >= *modulus) {
                    return Err(Error::validation(
                        "residues",
                        format!("residue {r} is not in [0, {modulus})"),
                    ));
                }
            }
            GeneratorKind::IntervalBlocks { block_len, .. } => {
                if *block_len == 0 {
                    return Err(Error::validation("block_len", "must be positive"));
                }
            }
            GeneratorKind::Explicit { members } => {
                if members.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::validation("members", "must be strictly ascending"));
                }
                if let Some(&x) = members.iter().find(|&&x| x == 0 || x > self.window_len) {
                    return Err(Error::validation(
                        "members",
                        format!("{x} is outside [1, {}]", self.window_len),
                    ));
                }
            }
            GeneratorKind::File { .. } => {}
        }
        Ok(())
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| {
            xs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            GeneratorKind::Bernoulli { p } => write!(f, "bernoulli:{p}"),
            GeneratorKind::Periodic { modulus, residues } => {
                write!(f, "periodic:{modulus}:{}", join(residues))
            }
            GeneratorKind::IntervalBlocks { block_len, gap_len } => {
                write!(f, "blocks:{block_len}:{gap_len}")
            }
            GeneratorKind::Explicit { members } => write!(f, "explicit:{}", join(members)),
            GeneratorKind::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

/// Parses the compact command-line form, e.g. `bernoulli:0.8`,
/// `periodic:4:1,3`, `blocks:10:5`, `explicit:1,5,9`, `file:a.set`.
impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let list = |text: &str| -> Result<Vec<usize>> {
            text.split(',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::validation("generator", format!("bad integer `{t}`")))
                })
                .collect()
        };
        let int = |text: &str, field: &'static str| -> Result<usize> {
            text.trim()
                .parse()
                .map_err(|_| Error::validation(field, format!("bad integer `{text}`")))
        };
        match head {
            "bernoulli" => {
                let p = rest
                    .parse()
                    .map_err(|_| Error::validation("p", format!("bad probability `{rest}`")))?;
                Ok(GeneratorKind::Bernoulli { p })
            }
            "periodic" => {
                let (m, r) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::validation("generator", "expected periodic:M:r1,r2"))?;
                Ok(GeneratorKind::Periodic {
                    modulus: int(m, "modulus")?,
                    residues: list(r)?,
                })
            }
            "blocks" => {
                let (b, g) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::validation("generator", "expected blocks:LEN:GAP"))?;
                Ok(GeneratorKind::IntervalBlocks {
                    block_len: int(b, "block_len")?,
                    gap_len: int(g, "gap_len")?,
                })
            }
            "explicit" => Ok(GeneratorKind::Explicit {
                members: list(rest)?,
            }),
            "file" => Ok(GeneratorKind::File {
                path: PathBuf::from(rest),
            }),
            other => Err(Error::validation(
                "generator",
                format!("unknown kind `{other}`"),
            )),
        }
    }
}

fn bernoulli_threshold(p: f64) -> Option<u64> {
    // `None` means "always include"; the cast saturates exactly at 2^64.
    if p >= 1.0 {
        None
    } else {
        Some((p * 18_446_744_073_709_551_616.0) as u64)
    }
}

/// The draw that decides membership of `x` in `bernoulli(p)` under `seed`.
///
/// The stream is counter-based: draw `x` lives at a fixed position of the
/// ChaCha8 keystream, so it can be recomputed in any order.
pub fn bernoulli_draw(seed: u64, x: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * (x as u128 - 1));
    rng.next_u64()
}

pub fn generate(spec: &GeneratorSpec) -> Result<WindowSet> {
    spec.validate()?;
    let n = spec.window_len;
    let label = spec.kind.to_string();
    let set = match &spec.kind {
        GeneratorKind::Bernoulli { p } => {
            let threshold = bernoulli_threshold(*p);
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            WindowSet::from_fn(n, |_| {
                let draw = rng.next_u64();
                threshold.is_none_or(|t| draw < t)
            })?
        }
        GeneratorKind::Periodic { modulus, residues } => {
            let mut hit = vec![false; *modulus];
            residues.iter().for_each(|&r| hit[r] = true);
            WindowSet::from_fn(n, |x| hit[x % modulus])?
        }
        GeneratorKind::IntervalBlocks { block_len, gap_len } => {
            let period = block_len + gap_len;
            WindowSet::from_fn(n, |x| (x - 1) % period < *block_len)?
        }
        GeneratorKind::Explicit { members } => WindowSet::from_members(n, members.iter().copied())?,
        GeneratorKind::File { path } => {
            let set = read_set(path, ReadOptions::default())?;
            if spec.window_len != 0 && set.window_len() != spec.window_len {
                return Err(Error::validation(
                    "window_len",
                    format!(
                        "file declares N={} but {} was requested",
                        set.window_len(),
                        spec.window_len
                    ),
                ));
            }
            set
        }
    };
    Ok(set.with_label(label))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_evens() {
        let a = generate(&GeneratorSpec::periodic(2, &[0], 10)).unwrap();
        assert_eq!(a.to_vec(), vec![2, 4, 6, 8, 10]);
    }

    #[test]
    fn explicit_members() {
        let spec = GeneratorSpec::new(GeneratorKind::Explicit { members: vec![1, 5] }, 0, 6);
        assert_eq!(generate(&spec).unwrap().to_vec(), vec![1, 5]);
    }

    #[test]
    fn interval_blocks_layout() {
        let spec = GeneratorSpec::new(
            GeneratorKind::IntervalBlocks {
                block_len: 2,
                gap_len: 3,
            },
            0,
            12,
        );
        assert_eq!(generate(&spec).unwrap().to_vec(), vec![1, 2, 6, 7, 11, 12]);
    }

    #[test]
    fn bernoulli_concentration() {
        let a = generate(&GeneratorSpec::bernoulli(0.5, 7, 10_000)).unwrap();
        let dev = (a.len() as f64 - 5000.0).abs();
        assert!(dev <= 3.0 * (10_000.0f64 * 0.25).sqrt(), "|A| = {}", a.len());
    }

    #[test]
    fn bernoulli_extremes() {
        assert!(generate(&GeneratorSpec::bernoulli(0.0, 1, 500)).unwrap().is_empty());
        assert_eq!(generate(&GeneratorSpec::bernoulli(1.0, 1, 500)).unwrap().len(), 500);
    }

    #[test]
    fn bernoulli_membership_is_order_independent() {
        let seed = 99;
        let a = generate(&GeneratorSpec::bernoulli(0.3, seed, 2000)).unwrap();
        let t = bernoulli_threshold(0.3).unwrap();
        for x in [1, 2, 63, 64, 65, 1000, 1999, 2000] {
            assert_eq!(a.contains(x), bernoulli_draw(seed, x) < t, "x = {x}");
        }
    }

    #[test]
    fn malformed_specs_name_the_field() {
        let bad = GeneratorSpec::bernoulli(1.5, 0, 10);
        match generate(&bad) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "p"),
            other => panic!("unexpected {other:?}"),
        }
        match generate(&GeneratorSpec::bernoulli(0.5, 0, 0)) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "window_len"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(generate(&GeneratorSpec::periodic(3, &[3], 10)).is_err());
        let unsorted = GeneratorSpec::new(GeneratorKind::Explicit { members: vec![5, 1] }, 0, 6);
        assert!(generate(&unsorted).is_err());
    }

    #[test]
    fn compact_syntax_round_trips() {
        for text in ["bernoulli:0.8", "periodic:4:1,3", "blocks:10:5", "explicit:1,5,9"] {
            let kind: GeneratorKind = text.parse().unwrap();
            assert_eq!(kind.to_string(), text);
        }
        assert!("zipf:2".parse::<GeneratorKind>().is_err());
    }
}
