//! The plain-text set file format.
//!
//! ```text
//! N=20            # header: the window [1, N]
//! 2 4 6 8         # ascending members, whitespace separated
//! RLE: 11:3 17:2  # runs `start:len`, i.e. 11 12 13 17 18
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Members must be
//! strictly ascending across the whole file unless [`ReadOptions::lenient`]
//! is set, in which case duplicates are merged and order is free. Writers
//! emit at most 16 values (or runs) per line and end every line with `\n`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::windowset::WindowSet;

const PER_LINE: usize = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReadOptions {
    /// Accept duplicates and out-of-order members.
    pub lenient: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SetFormat {
    #[default]
    List,
    Rle,
}

pub fn read_set(path: impl AsRef<Path>, opts: ReadOptions) -> Result<WindowSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    Ok(parse_set(&text, opts)?.with_label(path.display().to_string()))
}

pub fn write_set(set: &WindowSet, path: impl AsRef<Path>, format: SetFormat) -> Result<()> {
    fs::write(path, format_set(set, format))?;
    Ok(())
}

pub fn parse_set(text: &str, opts: ReadOptions) -> Result<WindowSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing `N=<window_len>` header".into(),
    })?;
    let window_len: usize = header
        .strip_prefix("N=")
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse {
            line: header_line,
            reason: format!("expected `N=<positive integer>`, found `{header}`"),
        })?;

    let mut set = WindowSet::empty(window_len)?;
    let mut last = 0usize;
    let mut accept = |line: usize, x: u64, set: &mut WindowSet| -> Result<()> {
        if x == 0 {
            return Err(Error::Parse {
                line,
                reason: "0 is not a member of the natural numbers".into(),
            });
        }
        if x > window_len as u64 {
            return Err(Error::OutOfWindow {
                line,
                value: x,
                window_len,
            });
        }
        let x = x as usize;
        if !opts.lenient && x <= last {
            let reason = if x == last {
                format!("duplicate member {x}")
            } else {
                format!("member {x} is not ascending (after {last})")
            };
            return Err(Error::Parse { line, reason });
        }
        last = last.max(x);
        set.insert(x);
        Ok(())
    };

    for (line, content) in lines {
        if let Some(runs) = content.strip_prefix("RLE:") {
            for tok in runs.split_whitespace() {
                let (s, l) = tok.split_once(':').ok_or_else(|| Error::Parse {
                    line,
                    reason: format!("bad run `{tok}`, expected start:len"),
                })?;
                let start = parse_u64(s, line)?;
                let len = parse_u64(l, line)?;
                if len == 0 {
                    return Err(Error::Parse {
                        line,
                        reason: format!("empty run `{tok}`"),
                    });
                }
                for x in start..start.saturating_add(len) {
                    accept(line, x, &mut set)?;
                }
            }
        } else {
            for tok in content.split_whitespace() {
                accept(line, parse_u64(tok, line)?, &mut set)?;
            }
        }
    }
    Ok(set)
}

fn parse_u64(tok: &str, line: usize) -> Result<u64> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        reason: format!("`{tok}` is not a non-negative integer"),
    })
}

pub fn format_set(set: &WindowSet, format: SetFormat) -> String {
    let mut out = format!("N={}\n", set.window_len());
    let items: Vec<String> = match format {
        SetFormat::List => set.iter().map(|x| x.to_string()).collect(),
        SetFormat::Rle => runs(set)
            .into_iter()
            .map(|(s, l)| format!("{s}:{l}"))
            .collect(),
    };
    for chunk in items.chunks(PER_LINE) {
        if format == SetFormat::Rle {
            out.push_str("RLE: ");
        }
        out.push_str(&chunk.join(" "));
        out.push('\n');
    }
    out
}

fn runs(set: &WindowSet) -> Vec<(usize, usize)> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for x in set {
        match runs.last_mut() {
            Some((s, l)) if *s + *l == x => *l += 1,
            _ => runs.push((x, 1)),
        }
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_round_trip() {
        let a = WindowSet::from_members(10, [2, 4, 6]).unwrap();
        let text = format_set(&a, SetFormat::List);
        assert_eq!(text, "N=10\n2 4 6\n");
        assert_eq!(parse_set(&text, ReadOptions::default()).unwrap(), a);
    }

    #[test]
    fn rle_round_trip_and_exact_bytes() {
        let a = WindowSet::from_members(20, [1, 2, 3, 7, 10, 11]).unwrap();
        let text = format_set(&a, SetFormat::Rle);
        assert_eq!(text, "N=20\nRLE: 1:3 7:1 10:2\n");
        assert_eq!(parse_set(&text, ReadOptions::default()).unwrap(), a);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.set");
        let a = WindowSet::from_fn(500, |x| x % 3 == 0).unwrap();
        write_set(&a, &path, SetFormat::List).unwrap();
        assert_eq!(read_set(&path, ReadOptions::default()).unwrap(), a);
    }

    #[test]
    fn empty_set_is_just_a_header() {
        let a = WindowSet::empty(4).unwrap();
        assert_eq!(format_set(&a, SetFormat::List), "N=4\n");
        assert_eq!(parse_set("N=4\n", ReadOptions::default()).unwrap(), a);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a set\nN=9 # window\n\n1 3 # odd\n  5\nRLE: 7:2\n";
        let a = parse_set(text, ReadOptions::default()).unwrap();
        assert_eq!(a.to_vec(), vec![1, 3, 5, 7, 8]);
    }

    #[test]
    fn zero_is_rejected_with_line() {
        match parse_set("N=5\n\n0\n", ReadOptions::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicates_strict_vs_lenient() {
        assert!(matches!(
            parse_set("N=5\n3 3\n", ReadOptions::default()),
            Err(Error::Parse { line: 2, .. })
        ));
        let a = parse_set("N=5\n3 3 1\n", ReadOptions { lenient: true }).unwrap();
        assert_eq!(a.to_vec(), vec![1, 3]);
    }

    #[test]
    fn out_of_window_is_hard_error() {
        assert!(matches!(
            parse_set("N=5\n1\n6\n", ReadOptions { lenient: true }),
            Err(Error::OutOfWindow { line: 3, value: 6, .. })
        ));
        assert!(parse_set("N=5\nRLE: 4:3\n", ReadOptions::default()).is_err());
    }

    #[test]
    fn bad_header() {
        assert!(parse_set("", ReadOptions::default()).is_err());
        assert!(parse_set("M=3\n1\n", ReadOptions::default()).is_err());
        assert!(parse_set("N=0\n", ReadOptions::default()).is_err());
        assert!(parse_set("N=4\nx\n", ReadOptions::default()).is_err());
    }
}
