//! Text formats for tournaments, coloured tournaments and oriented trees.
//!
//! Three line-oriented formats, all LF-terminated:
//!
//! * `TOUR 1 <n>` followed by n rows of n characters; char j of row i is
//!   `1` if the edge runs i -> j, `0` otherwise, `-` on the diagonal.
//! * `CTOUR 1 <n>`: the orientation block as in TOUR, a blank line, then
//!   n colour rows where position (i, j) of the pair's actual edge holds
//!   `r` or `b` and every other position holds `.`.
//! * `OTREE 1 <m>`: a line of m space-separated parent ids (`-1` for the
//!   root), then m direction characters, `+` for parent -> child, `-` for
//!   child -> parent, `.` at the root.
//!
//! Readers validate everything they can name a line for; errors carry the
//! 1-based line number.

use crate::coloring::{Color, ColoredTournament};
use crate::tournament::Tournament;
use crate::tree::{EdgeDir, OrientedTree};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct CodecError {
    pub line: usize,
    pub msg: String,
}

fn fail<T>(line: usize, msg: impl Into<String>) -> Result<T, CodecError> {
    Err(CodecError { line, msg: msg.into() })
}

// =========================================================================
// TOUR
// =========================================================================

pub fn write_tournament(t: &Tournament) -> String {
    let n = t.n();
    let mut out = String::with_capacity((n + 1) * (n + 10));
    out.push_str(&format!("TOUR 1 {n}\n"));
    write_orientation_rows(t, &mut out);
    out
}

fn write_orientation_rows(t: &Tournament, out: &mut String) {
    let n = t.n();
    for i in 0..n {
        for j in 0..n {
            out.push(if i == j {
                '-'
            } else if t.has_edge(i, j) {
                '1'
            } else {
                '0'
            });
        }
        out.push('\n');
    }
}

pub fn read_tournament(text: &str) -> Result<Tournament, CodecError> {
    let lines: Vec<&str> = text.lines().collect();
    let n = parse_header(lines.first().copied(), "TOUR")?;
    let rows = parse_orientation_rows(&lines, 1, n)?;
    expect_end(&lines, 1 + n)?;
    Ok(rows_to_tournament(n, &rows))
}

fn parse_header(line: Option<&str>, magic: &str) -> Result<usize, CodecError> {
    let Some(line) = line else {
        return fail(1, format!("missing {magic} header"));
    };
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != 3 || fields[0] != magic {
        return fail(1, format!("expected `{magic} 1 <n>`, got `{line}`"));
    }
    if fields[1] != "1" {
        return fail(1, format!("unsupported {magic} version `{}`", fields[1]));
    }
    match fields[2].parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => fail(1, format!("bad vertex count `{}`", fields[2])),
    }
}

/// Parses n orientation rows starting at `lines[start]`, checking the
/// alphabet, the diagonal and antisymmetry.
fn parse_orientation_rows(
    lines: &[&str],
    start: usize,
    n: usize,
) -> Result<Vec<Vec<bool>>, CodecError> {
    if lines.len() < start + n {
        let missing = lines.len() - start.min(lines.len());
        return fail(lines.len() + 1, format!("missing orientation row {missing}"));
    }
    let mut rows: Vec<Vec<bool>> = Vec::with_capacity(n);
    for i in 0..n {
        let lineno = start + i + 1;
        let row = &lines[start + i];
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != n {
            return fail(lineno, format!("row has {} characters, expected {n}", chars.len()));
        }
        let mut parsed = Vec::with_capacity(n);
        for (j, &c) in chars.iter().enumerate() {
            let forward = match (i == j, c) {
                (true, '-') => false,
                (true, c) => return fail(lineno, format!("diagonal must be `-`, got `{c}`")),
                (false, '1') => true,
                (false, '0') => false,
                (false, c) => return fail(lineno, format!("bad orientation char `{c}`")),
            };
            parsed.push(forward);
        }
        // Antisymmetry against all earlier rows.
        for (j, earlier) in rows.iter().enumerate() {
            if earlier[i] == parsed[j] {
                let what = if parsed[j] { "both directions" } else { "no direction" };
                return fail(lineno, format!("pair ({j}, {i}) has {what}"));
            }
        }
        rows.push(parsed);
    }
    Ok(rows)
}

fn rows_to_tournament(n: usize, rows: &[Vec<bool>]) -> Tournament {
    Tournament::from_fn(n, |i, j| rows[i][j])
}

fn expect_end(lines: &[&str], used: usize) -> Result<(), CodecError> {
    if lines.len() > used {
        return fail(used + 1, "unexpected trailing content");
    }
    Ok(())
}

// =========================================================================
// CTOUR
// =========================================================================

pub fn write_colored(c: &ColoredTournament) -> String {
    let n = c.n();
    let mut out = String::with_capacity(2 * (n + 2) * (n + 10));
    out.push_str(&format!("CTOUR 1 {n}\n"));
    write_orientation_rows(c.tournament(), &mut out);
    out.push('\n');
    for i in 0..n {
        for j in 0..n {
            out.push(match c.color_of(i, j) {
                Some(Color::Red) => 'r',
                Some(Color::Blue) => 'b',
                None => '.',
            });
        }
        out.push('\n');
    }
    out
}

pub fn read_colored(text: &str) -> Result<ColoredTournament, CodecError> {
    let lines: Vec<&str> = text.lines().collect();
    let n = parse_header(lines.first().copied(), "CTOUR")?;
    let rows = parse_orientation_rows(&lines, 1, n)?;
    let blank_line = 1 + n;
    match lines.get(blank_line) {
        Some(&"") => {}
        Some(other) => {
            return fail(blank_line + 1, format!("expected blank separator, got `{other}`"))
        }
        None => return fail(blank_line + 1, "missing blank separator"),
    }
    let color_start = blank_line + 1;
    let mut colors: Vec<Vec<char>> = Vec::with_capacity(n);
    for i in 0..n {
        let lineno = color_start + i + 1;
        let Some(row) = lines.get(color_start + i) else {
            return fail(lineno, format!("missing colour row {i}"));
        };
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != n {
            return fail(lineno, format!("row has {} characters, expected {n}", chars.len()));
        }
        for (j, &ch) in chars.iter().enumerate() {
            let on_edge = i != j && rows[i][j];
            match (on_edge, ch) {
                (true, 'r' | 'b') => {}
                (true, '.') => {
                    return fail(lineno, format!("edge ({i}, {j}) has no colour"))
                }
                (true, c) => return fail(lineno, format!("bad colour char `{c}`")),
                (false, '.') => {}
                (false, c) => {
                    return fail(
                        lineno,
                        format!("position ({i}, {j}) is not the pair's edge, expected `.`, got `{c}`"),
                    )
                }
            }
        }
        colors.push(chars);
    }
    expect_end(&lines, color_start + n)?;
    let t = rows_to_tournament(n, &rows);
    Ok(ColoredTournament::from_fn(t, |tail, head| {
        if colors[tail][head] == 'r' {
            Color::Red
        } else {
            Color::Blue
        }
    }))
}

// =========================================================================
// OTREE
// =========================================================================

pub fn write_tree(t: &OrientedTree) -> String {
    let m = t.m();
    let mut out = format!("OTREE 1 {m}\n");
    let parents: Vec<String> = (0..m)
        .map(|v| match t.parent_of(v) {
            Some((p, _)) => p.to_string(),
            None => "-1".to_string(),
        })
        .collect();
    out.push_str(&parents.join(" "));
    out.push('\n');
    for v in 0..m {
        out.push(match t.parent_of(v) {
            Some((_, EdgeDir::Away)) => '+',
            Some((_, EdgeDir::Toward)) => '-',
            None => '.',
        });
    }
    out.push('\n');
    out
}

pub fn read_tree(text: &str) -> Result<OrientedTree, CodecError> {
    let lines: Vec<&str> = text.lines().collect();
    let m = parse_header(lines.first().copied(), "OTREE")?;
    let Some(parent_line) = lines.get(1) else {
        return fail(2, "missing parent line");
    };
    let fields: Vec<&str> = parent_line.split(' ').collect();
    if fields.len() != m {
        return fail(2, format!("expected {m} parent ids, got {}", fields.len()));
    }
    let mut parents: Vec<Option<usize>> = Vec::with_capacity(m);
    for (v, f) in fields.iter().enumerate() {
        match f.parse::<i64>() {
            Ok(-1) => parents.push(None),
            Ok(p) if (0..m as i64).contains(&p) => parents.push(Some(p as usize)),
            _ => return fail(2, format!("bad parent id `{f}` for vertex {v}")),
        }
    }
    let Some(dir_line) = lines.get(2) else {
        return fail(3, "missing direction line");
    };
    let dirs: Vec<char> = dir_line.chars().collect();
    if dirs.len() != m {
        return fail(3, format!("expected {m} direction chars, got {}", dirs.len()));
    }
    let mut links: Vec<Option<(usize, EdgeDir)>> = Vec::with_capacity(m);
    for v in 0..m {
        let link = match (parents[v], dirs[v]) {
            (None, '.') => None,
            (None, c) => {
                return fail(3, format!("root vertex {v} must have `.`, got `{c}`"))
            }
            (Some(_), '.') => {
                return fail(3, format!("non-root vertex {v} has direction `.`"))
            }
            (Some(p), '+') => Some((p, EdgeDir::Away)),
            (Some(p), '-') => Some((p, EdgeDir::Toward)),
            (Some(_), c) => return fail(3, format!("bad direction char `{c}`")),
        };
        links.push(link);
    }
    expect_end(&lines, 3)?;
    OrientedTree::new(links).or_else(|e| fail(2, e.to_string()))
}
