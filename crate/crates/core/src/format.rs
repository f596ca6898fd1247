//! Line-oriented text format for presentations and curve lists.
//!
//! ```text
//! degree 3
//! marked p1 p2 p3 p4
//! dynamics p1>p1 p2>p2 p3>p4 p4>p3
//! perm p1 (1 2)
//! rest p1 1: g2 G1
//! assign p1 = p1@(1 2)
//! multicurve
//! g1 g2
//! ```
//!
//! `#` starts a comment. The last marked point has no `perm` or `rest` lines.

use std::fmt::Write as _;
use std::path::Path;

use crate::cover::CoverPresentation;
use crate::error::{Error, Result};
use crate::perm::{format_cycle, parse_cycles, Perm};
use crate::sphere_group::{canonical_curve_class, CurveClass, MarkedSet, Word};

/// A parsed presentation file, with its optional `multicurve` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: CoverPresentation,
    /// Words of the `multicurve` block with their line numbers.
    pub multicurve: Option<Vec<(usize, Word)>>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

struct Builder {
    degree: Option<usize>,
    marked: Option<MarkedSet>,
    dynamics: Option<Vec<usize>>,
    perms: Vec<Option<Perm>>,
    rest: Vec<Vec<Option<Word>>>,
    assign: Vec<Option<Vec<usize>>>,
}

impl Builder {
    fn marked(&self, line: usize) -> Result<&MarkedSet> {
        self.marked.as_ref().ok_or_else(|| Error::parse(line, "`marked` must come first"))
    }

    fn point(&self, line: usize, label: &str) -> Result<usize> {
        self.marked(line)?.index_of(label).ok_or_else(|| Error::parse(line, format!("unknown marked point {label:?}")))
    }

    fn degree(&self, line: usize) -> Result<usize> {
        self.degree.ok_or_else(|| Error::parse(line, "`degree` must come first"))
    }

    fn stored_point(&self, line: usize, label: &str) -> Result<usize> {
        let i = self.point(line, label)?;
        if i + 1 == self.marked(line)?.len() {
            return Err(Error::parse(line, format!("data for the last point {label} is derived and must be omitted")));
        }
        Ok(i)
    }
}

fn parse_word(line: usize, s: &str) -> Result<Word> {
    s.parse::<Word>().map_err(|e| e.at_line(line))
}

pub fn parse_presentation(text: &str) -> Result<PresentationFile> {
    let mut b = Builder { degree: None, marked: None, dynamics: None, perms: Vec::new(), rest: Vec::new(), assign: Vec::new() };
    let mut multicurve: Option<Vec<(usize, Word)>> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let s = strip_comment(raw);
        if s.is_empty() {
            continue;
        }
        if let Some(curves) = multicurve.as_mut() {
            if s == "end" {
                continue;
            }
            curves.push((line, parse_word(line, s)?));
            continue;
        }
        let (key, body) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let body = body.trim();
        match key {
            "degree" => {
                let d: usize = body.parse().map_err(|_| Error::parse(line, format!("bad degree {body:?}")))?;
                if d < 2 {
                    return Err(Error::parse(line, "degree must be at least 2"));
                }
                b.degree = Some(d);
            }
            "marked" => {
                let m = MarkedSet::new(body.split_whitespace()).map_err(|e| e.at_line(line))?;
                let n = m.len();
                let d = b.degree(line)?;
                b.perms = vec![None; n - 1];
                b.rest = vec![vec![None; d]; n - 1];
                b.assign = vec![None; n];
                b.marked = Some(m);
            }
            "dynamics" => {
                let n = b.marked(line)?.len();
                let mut dynamics = vec![None; n];
                for tok in body.split_whitespace() {
                    let (from, to) = tok.split_once('>').ok_or_else(|| Error::parse(line, format!("expected a>b, got {tok:?}")))?;
                    let (i, j) = (b.point(line, from)?, b.point(line, to)?);
                    if dynamics[i].replace(j).is_some() {
                        return Err(Error::parse(line, format!("{from} mapped twice")));
                    }
                }
                let dynamics: Option<Vec<usize>> = dynamics.into_iter().collect();
                b.dynamics = Some(dynamics.ok_or_else(|| Error::parse(line, "dynamics must cover every marked point"))?);
            }
            "perm" => {
                let (label, cycles) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
                let i = b.stored_point(line, label)?;
                let d = b.degree(line)?;
                let cycles = if cycles.trim() == "()" { Vec::new() } else { parse_cycles(cycles).map_err(|e| e.at_line(line))? };
                let p = Perm::from_cycles(d, &cycles).map_err(|e| e.at_line(line))?;
                if b.perms[i].replace(p).is_some() {
                    return Err(Error::parse(line, format!("duplicate perm for {label}")));
                }
            }
            "rest" => {
                let (head, word) = body.split_once(':').ok_or_else(|| Error::parse(line, "expected `rest pX k: word`"))?;
                let mut parts = head.split_whitespace();
                let (Some(label), Some(sheet), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(Error::parse(line, "expected `rest pX k: word`"));
                };
                let i = b.stored_point(line, label)?;
                let d = b.degree(line)?;
                let k: usize = sheet.parse().ok().filter(|k| (1..=d).contains(k)).ok_or_else(|| Error::parse(line, format!("bad sheet {sheet:?}")))?;
                let w = parse_word(line, word)?;
                if b.rest[i][k - 1].replace(w).is_some() {
                    return Err(Error::parse(line, format!("duplicate rest for {label} sheet {k}")));
                }
            }
            "assign" => {
                let (lhs, rhs) = body.split_once('=').ok_or_else(|| Error::parse(line, "expected `assign pj = pi@(cycle)`"))?;
                let (img, cycle) = rhs.trim().split_once('@').ok_or_else(|| Error::parse(line, "expected `pi@(cycle)`"))?;
                let j = b.point(line, lhs.trim())?;
                let i = b.point(line, img.trim())?;
                let dynamics = b.dynamics.as_ref().ok_or_else(|| Error::parse(line, "`dynamics` must precede `assign`"))?;
                if dynamics[j] != i {
                    return Err(Error::parse(line, format!("{} maps to {}, not {}", lhs.trim(), b.marked(line)?.label(dynamics[j]), img.trim())));
                }
                let cycles = parse_cycles(cycle).map_err(|e| e.at_line(line))?;
                let [c] = cycles.as_slice() else {
                    return Err(Error::parse(line, "assignment needs exactly one cycle"));
                };
                if b.assign[j].replace(c.clone()).is_some() {
                    return Err(Error::parse(line, format!("duplicate assign for {}", lhs.trim())));
                }
            }
            "multicurve" => multicurve = Some(Vec::new()),
            other => return Err(Error::parse(line, format!("unknown keyword {other:?}"))),
        }
    }
    let end = last_line + 1;
    let degree = b.degree(end)?;
    let marked = b.marked(end)?.clone();
    let dynamics = b.dynamics.clone().ok_or_else(|| Error::parse(end, "missing `dynamics` line"))?;
    let mut perms = Vec::new();
    for (i, p) in b.perms.iter().enumerate() {
        perms.push(p.clone().ok_or_else(|| Error::parse(end, format!("missing `perm {}` line", marked.label(i))))?);
    }
    let mut restrictions = Vec::new();
    for (i, row) in b.rest.iter().enumerate() {
        let mut out = Vec::new();
        for (k, w) in row.iter().enumerate() {
            out.push(w.clone().ok_or_else(|| Error::parse(end, format!("missing `rest {} {}` line", marked.label(i), k + 1)))?);
        }
        restrictions.push(out);
    }
    let mut assignment = Vec::new();
    for (j, c) in b.assign.iter().enumerate() {
        assignment.push(c.clone().ok_or_else(|| Error::parse(end, format!("missing `assign {}` line", marked.label(j))))?);
    }
    let presentation = CoverPresentation::new(degree, marked, dynamics, perms, restrictions, assignment).map_err(|e| e.at_line(end))?;
    Ok(PresentationFile { presentation, multicurve })
}

pub fn save_string(p: &CoverPresentation) -> String {
    let m = p.marked();
    let n = p.n();
    let mut s = String::new();
    writeln!(s, "degree {}", p.degree()).unwrap();
    writeln!(s, "marked {}", m.labels().join(" ")).unwrap();
    let dyn_tokens: Vec<String> = (0..n).map(|j| format!("{}>{}", m.label(j), m.label(p.image(j)))).collect();
    writeln!(s, "dynamics {}", dyn_tokens.join(" ")).unwrap();
    for (i, sigma) in p.stored_perms().iter().enumerate() {
        writeln!(s, "perm {} {sigma}", m.label(i)).unwrap();
    }
    for (i, row) in p.stored_restrictions().iter().enumerate() {
        for (k, w) in row.iter().enumerate() {
            if w.is_empty() {
                writeln!(s, "rest {} {}:", m.label(i), k + 1).unwrap();
            } else {
                writeln!(s, "rest {} {}: {w}", m.label(i), k + 1).unwrap();
            }
        }
    }
    for j in 0..n {
        writeln!(s, "assign {} = {}@{}", m.label(j), m.label(p.image(j)), format_cycle(p.assignment(j))).unwrap();
    }
    s
}

/// Presentation text followed by a `multicurve` block.
pub fn save_string_with_curves(p: &CoverPresentation, curves: &[CurveClass]) -> String {
    let mut s = save_string(p);
    s.push_str("multicurve\n");
    s.push_str(&format_curves(curves));
    s
}

pub fn load_presentation(path: impl AsRef<Path>) -> Result<PresentationFile> {
    parse_presentation(&std::fs::read_to_string(path)?)
}

pub fn save_presentation(p: &CoverPresentation, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, save_string(p))?;
    Ok(())
}

/// One canonical word per line.
pub fn format_curves(curves: &[CurveClass]) -> String {
    curves.iter().map(|c| format!("{c}\n")).collect()
}

/// Curve words, one per line, with an optional leading `multicurve` keyword.
pub fn parse_curve_words(text: &str) -> Result<Vec<(usize, Word)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let s = strip_comment(raw);
        if s.is_empty() || s == "multicurve" || s == "end" {
            continue;
        }
        out.push((idx + 1, parse_word(idx + 1, s)?));
    }
    Ok(out)
}

/// Canonical classes of numbered words, with errors pointing at the line.
pub fn canonical_classes(words: &[(usize, Word)], m: &MarkedSet) -> Result<Vec<CurveClass>> {
    words
        .iter()
        .map(|(line, w)| {
            canonical_curve_class(w, m).map_err(|e| Error::parse(*line, format!("{w}: {e}")))
        })
        .collect()
}

pub fn load_curves(path: impl AsRef<Path>, m: &MarkedSet) -> Result<Vec<CurveClass>> {
    canonical_classes(&parse_curve_words(&std::fs::read_to_string(path)?)?, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z3: &str = "degree 3\nmarked p1 p2\ndynamics p1>p1 p2>p2\nperm p1 (1 2 3)\nrest p1 1: g1\nrest p1 2:\nrest p1 3:\nassign p1 = p1@(1 2 3)\nassign p2 = p2@(1 3 2)\n";

    #[test]
    fn z3_parses_and_round_trips() {
        let f = parse_presentation(Z3).unwrap();
        assert!(f.multicurve.is_none());
        let p = f.presentation;
        assert_eq!(p.degree(), 3);
        let again = parse_presentation(&save_string(&p)).unwrap().presentation;
        assert_eq!(again, p);
    }

    #[test]
    fn missing_assign_names_line() {
        let text = Z3.replace("assign p2 = p2@(1 3 2)\n", "");
        let err = parse_presentation(&text).unwrap_err();
        assert!(matches!(&err, Error::Parse { line: 9, message } if message.contains("assign p2")), "{err}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = Z3.replace("rest p1 2:", "rest p1 2: g7x");
        let err = parse_presentation(&text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 6, .. }), "{err}");
        let err = parse_presentation(&Z3.replace("perm p1", "perm p2")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn multicurve_block() {
        let m = MarkedSet::standard(4).unwrap();
        let words = parse_curve_words("multicurve\ng1 g2  # round\n\ng2 g3\n").unwrap();
        assert_eq!(words.iter().map(|(l, _)| *l).collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(canonical_classes(&words, &m).unwrap().len(), 2);
    }
}
