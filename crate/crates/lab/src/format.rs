//! Text formats.
//!
//! ```text
//! digraph 3          closure 2            coding 4 2 4
//! # comment          {} -> {}             0,0,1,1
//! 1 2                {1} -> {1}           ...
//! 2 3                {2} -> {1,2}
//!                    {1,2} -> {1,2}
//! ```
//!
//! Vertices are 1-indexed. Table files list every subset exactly once,
//! with sorted vertex lists; `setop` tables use the same layout and skip
//! the closure axioms.

use std::fmt::Write as _;

use closure_lab_core::closure::{validate_closure, ClosureOperator};
use closure_lab_core::coding::CodingFunction;
use closure_lab_core::constructors::Digraph;
use closure_lab_core::partition::Partition;
use closure_lab_core::reduction::{SetOperator, SETOP_MAX_N};
use closure_lab_core::subset::{all_subsets, Subset};
use closure_lab_core::Error as CoreError;

use crate::error::{LabError, Result};

/// Largest `n` written or read as a table.
pub const TABLE_FILE_MAX_N: usize = SETOP_MAX_N;

#[derive(Debug, Clone)]
pub enum Table {
    Closure(ClosureOperator),
    SetOp(SetOperator),
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    accepted: &[&str],
) -> Result<(usize, &'a str, usize)> {
    let (line, text) = lines
        .next()
        .ok_or_else(|| LabError::parse(1, "empty input"))?;
    let mut words = text.split_whitespace();
    let word = words.next().unwrap_or("");
    if !accepted.contains(&word) {
        return Err(LabError::parse(
            line,
            format!("expected header `{} <n>`, found {text:?}", accepted.join("|")),
        ));
    }
    let n = words
        .next()
        .and_then(|w| w.parse::<usize>().ok())
        .ok_or_else(|| LabError::parse(line, "header needs a vertex count"))?;
    if words.next().is_some() {
        return Err(LabError::parse(line, "trailing tokens after header"));
    }
    Ok((line, word, n))
}

/// The first word of the first content line.
pub fn sniff_header(text: &str) -> Option<&str> {
    content_lines(text)
        .next()
        .and_then(|(_, l)| l.split_whitespace().next())
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut lines = content_lines(text);
    let (hline, _, n) = parse_header(&mut lines, &["digraph"])?;
    let mut d = Digraph::new(n).map_err(|e| LabError::parse(hline, e.to_string()))?;
    for (line, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [u, v] = parts.as_slice() else {
            return Err(LabError::parse(line, format!("expected `u v`, found {l:?}")));
        };
        let vertex = |w: &str| {
            w.parse::<usize>()
                .map_err(|_| LabError::parse(line, format!("bad vertex {w:?}")))
        };
        let (u, v) = (vertex(u)?, vertex(v)?);
        if u == 0 || v == 0 || u > n || v > n {
            return Err(LabError::parse(line, format!("arc {u} {v} outside 1..={n}")));
        }
        if d.arcs().contains(&(u, v)) {
            return Err(LabError::parse(line, format!("duplicate arc {u} {v}")));
        }
        d.add_arc(u, v).map_err(|e| LabError::parse(line, e.to_string()))?;
    }
    Ok(d)
}

pub fn serialize_digraph(d: &Digraph) -> String {
    let mut out = format!("digraph {}\n", d.n());
    for (u, v) in d.arcs() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses `{}` or `{1,3,4}`; vertices strictly increasing, within `1..=n`.
pub fn parse_subset(text: &str, n: usize) -> std::result::Result<Subset, String> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| format!("malformed braces in {t:?}"))?
        .trim();
    if inner.is_empty() {
        return Ok(Subset::EMPTY);
    }
    let mut out = Subset::EMPTY;
    let mut last = 0;
    for w in inner.split(',') {
        let v: usize = w
            .trim()
            .parse()
            .map_err(|_| format!("bad vertex {:?} in {t:?}", w.trim()))?;
        if v == 0 || v > n {
            return Err(format!("vertex {v} outside 1..={n}"));
        }
        if v <= last {
            return Err(format!("vertex list {t:?} is not strictly increasing"));
        }
        last = v;
        out = out.with(v);
    }
    Ok(out)
}

/// Parses a `closure` or `setop` table. Closure tables are checked
/// against the axioms unless `validate` is false.
pub fn parse_table(text: &str, validate: bool) -> Result<Table> {
    let mut lines = content_lines(text);
    let (hline, word, n) = parse_header(&mut lines, &["closure", "setop"])?;
    if n > TABLE_FILE_MAX_N {
        return Err(LabError::parse(
            hline,
            format!("table files support n <= {TABLE_FILE_MAX_N}, got {n}"),
        ));
    }
    let size = 1usize << n;
    let mut table: Vec<Option<Subset>> = vec![None; size];
    let mut last_line = hline;
    for (line, l) in lines {
        last_line = line;
        let (lhs, rhs) = l
            .split_once("->")
            .ok_or_else(|| LabError::parse(line, format!("expected `{{..}} -> {{..}}`, found {l:?}")))?;
        let x = parse_subset(lhs, n).map_err(|m| LabError::parse(line, m))?;
        let y = parse_subset(rhs, n).map_err(|m| LabError::parse(line, m))?;
        let slot = &mut table[x.bits() as usize];
        if slot.is_some() {
            return Err(LabError::parse(line, format!("subset {x} listed twice")));
        }
        *slot = Some(y);
    }
    let table: Vec<Subset> = match table.iter().position(Option::is_none) {
        Some(missing) => {
            return Err(LabError::parse(
                last_line,
                format!("subset {} is missing", Subset::from_bits(missing as u64)),
            ))
        }
        None => table.into_iter().flatten().collect(),
    };
    if word == "setop" {
        return Ok(Table::SetOp(SetOperator::from_table(n, table, "setop")?));
    }
    let op = ClosureOperator::from_table(n, table, "closure")?;
    if validate {
        validate_closure(&op)?.into_result()?;
    }
    Ok(Table::Closure(op))
}

fn write_rows(out: &mut String, n: usize, f: impl Fn(Subset) -> Subset) {
    for x in all_subsets(n) {
        let _ = writeln!(out, "{x} -> {}", f(x));
    }
}

fn require_file_size(n: usize) -> Result<()> {
    if n > TABLE_FILE_MAX_N {
        Err(CoreError::TooLarge {
            what: "table file",
            n,
            cap: TABLE_FILE_MAX_N,
        }
        .into())
    } else {
        Ok(())
    }
}

pub fn serialize_closure(op: &ClosureOperator) -> Result<String> {
    require_file_size(op.n())?;
    let mut out = format!("closure {}\n", op.n());
    write_rows(&mut out, op.n(), |x| op.close(x));
    Ok(out)
}

pub fn serialize_setop(a: &SetOperator) -> Result<String> {
    require_file_size(a.n())?;
    let mut out = format!("setop {}\n", a.n());
    write_rows(&mut out, a.n(), |x| a.apply(x));
    Ok(out)
}

/// `coding <n> <q> <m>` followed by one restricted-growth string per vertex.
pub fn serialize_coding(f: &CodingFunction) -> String {
    let mut out = format!(
        "coding {} {} {}\n",
        f.op().n(),
        f.alphabet(),
        f.carrier()
    );
    for p in f.partitions() {
        let digits: Vec<String> = p.rgs().iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", digits.join(","));
    }
    out
}

/// Partitions and alphabet from a `coding` file.
pub fn parse_coding(text: &str) -> Result<(usize, Vec<Partition>)> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| LabError::parse(1, "empty input"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let nums: Option<Vec<usize>> = match words.as_slice() {
        ["coding", rest @ ..] if rest.len() == 3 => rest.iter().map(|w| w.parse().ok()).collect(),
        _ => None,
    };
    let Some(nums) = nums else {
        return Err(LabError::parse(hline, "expected header `coding <n> <q> <m>`"));
    };
    let (n, q, m) = (nums[0], nums[1], nums[2]);
    let mut parts = Vec::with_capacity(n);
    for (line, l) in lines {
        let rgs: Option<Vec<u32>> = l.split(',').map(|w| w.trim().parse().ok()).collect();
        let rgs = rgs.ok_or_else(|| LabError::parse(line, "expected comma-separated part indices"))?;
        if rgs.len() != m {
            return Err(LabError::parse(line, format!("{} entries for carrier {m}", rgs.len())));
        }
        parts.push(Partition::from_rgs(&rgs).map_err(|e| LabError::parse(line, e.to_string()))?);
    }
    if parts.len() != n {
        return Err(LabError::parse(hline, format!("{} partitions for {n} vertices", parts.len())));
    }
    Ok((q, parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use closure_lab_core::constructors::{chain, from_digraph, uniform};

    #[test]
    fn digraph_round_trip() {
        let d = parse_digraph("digraph 2\n1 2\n2 1\n").unwrap();
        assert_eq!(d.arcs(), &[(1, 2), (2, 1)]);
        assert_eq!(parse_digraph(&serialize_digraph(&d)).unwrap().arcs(), d.arcs());
        let op = from_digraph(&d).unwrap();
        assert!(op.same_map(&uniform(1, 2).unwrap()).unwrap());
    }

    #[test]
    fn digraph_errors_carry_lines() {
        let err = parse_digraph("digraph 2\n# c\n1 2\n1 2\n").unwrap_err();
        assert!(matches!(err, LabError::Parse { line: 4, .. }), "{err}");
        assert!(matches!(parse_digraph("graph 2\n"), Err(LabError::Parse { line: 1, .. })));
        assert!(matches!(parse_digraph("digraph 2\n1 3\n"), Err(LabError::Parse { line: 2, .. })));
    }

    #[test]
    fn loop_gives_u11() {
        let d = parse_digraph("digraph 1\n1 1\n").unwrap();
        assert!(from_digraph(&d).unwrap().same_map(&uniform(1, 1).unwrap()).unwrap());
    }

    #[test]
    fn chain_round_trip() {
        let op = chain(3).unwrap();
        let text = serialize_closure(&op).unwrap();
        let Table::Closure(back) = parse_table(&text, true).unwrap() else {
            panic!("expected a closure table")
        };
        assert!(back.same_map(&op).unwrap());
        assert_eq!(serialize_closure(&back).unwrap(), text);
    }

    #[test]
    fn extensivity_violation_names_witness() {
        let text = "closure 1\n{} -> {}\n{1} -> {}\n";
        match parse_table(text, true) {
            Err(LabError::Core(CoreError::NotClosure { axiom, witness })) => {
                assert_eq!(axiom, "extensive");
                assert_eq!(witness, Subset::singleton(1));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_table(text, false), Ok(Table::Closure(_))));
    }

    #[test]
    fn table_shape_errors() {
        assert!(parse_table("closure 1\n{} -> {}\n", true).is_err());
        assert!(parse_table("closure 1\n{} -> {}\n{} -> {1}\n", true).is_err());
        assert!(parse_table("closure 2\n{} -> {}\n{1} -> {1}\n{2} -> {2}\n{2,1} -> {1,2}\n", true).is_err());
        assert!(parse_table("closure 1\n{} -> {}\n1 -> {1}\n", true).is_err());
        assert!(matches!(
            parse_table("setop 1\n{} -> {1}\n{1} -> {}\n", true),
            Ok(Table::SetOp(_))
        ));
    }

    #[test]
    fn n4_parses_quickly() {
        let text = serialize_closure(&uniform(2, 4).unwrap()).unwrap();
        let start = std::time::Instant::now();
        parse_table(&text, true).unwrap();
        assert!(start.elapsed().as_millis() < 10);
    }
}
