//! LP text format (Minimize / Subject To / Bounds / End).
//!
//! Coefficients are written as exact decimals. A row holding a
//! non-integer value is preceded by a `\ exact` comment with its fractions;
//! a row whose values have no finite decimal expansion is multiplied by
//! the least common multiple of its denominators and announced by
//! `\ scaled <name> by <L>`, which [`parse_lp`] undoes. The Bounds section
//! lists every variable in declaration order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::system::{Coefficients, ConstraintSystem, Relation, SystemError, VarBound};
use crate::rational::{has_finite_decimal, parse_decimal, to_decimal, Rational};

const WRAP: usize = 200;

fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

struct Row<'a> {
    name: &'a str,
    coeffs: &'a Coefficients,
    tail: Option<(Relation, &'a Rational)>,
}

fn exact_terms(sys: &ConstraintSystem, coeffs: &Coefficients) -> String {
    let mut out = String::new();
    for (k, (&j, a)) in coeffs.iter().enumerate() {
        let name = &sys.variables()[j].name;
        match (k, a.is_negative()) {
            (0, false) => write!(out, "{a} {name}"),
            (0, true) => write!(out, "- {} {name}", -a),
            (_, false) => write!(out, " + {a} {name}"),
            (_, true) => write!(out, " - {} {name}", -a),
        }
        .expect("string sink");
    }
    out
}

fn write_row<W: Write>(sys: &ConstraintSystem, row: &Row<'_>, sink: &mut W) -> fmt::Result {
    let values: Vec<&Rational> = row.coeffs.values().chain(row.tail.map(|(_, b)| b)).collect();
    let mut scale = Rational::one();
    if values.iter().any(|v| !has_finite_decimal(v)) {
        let l = denominator_lcm(values.iter().copied());
        writeln!(sink, "\\ scaled {} by {l}", row.name)?;
        scale = Rational::from_integer(l);
    } else if values.iter().any(|v| !v.is_integer()) {
        write!(sink, "\\ exact {}: {}", row.name, exact_terms(sys, row.coeffs))?;
        if let Some((rel, rhs)) = row.tail {
            write!(sink, " {} {rhs}", rel.symbol())?;
        }
        writeln!(sink)?;
    }
    let decimal = |v: &Rational| to_decimal(&(v * &scale)).expect("scaled to a finite decimal");
    let mut line = format!(" {}:", row.name);
    let mut first = true;
    let push = |line: &mut String, piece: String, sink: &mut W| -> fmt::Result {
        if line.len() + piece.len() > WRAP {
            writeln!(sink, "{line}")?;
            line.clear();
            line.push_str("  ");
        }
        line.push_str(&piece);
        Ok(())
    };
    if row.coeffs.is_empty() && row.tail.is_some() {
        let first_var = sys.variables().first().ok_or(fmt::Error)?;
        push(&mut line, format!(" 0 {}", first_var.name), sink)?;
    }
    for (&j, a) in row.coeffs {
        let name = &sys.variables()[j].name;
        let magnitude = a.abs();
        let sign = if a.is_negative() { "-" } else { "+" };
        let body = if magnitude.is_one() && scale.is_one() { name.clone() } else { format!("{} {name}", decimal(&magnitude)) };
        let piece = match (first, a.is_negative()) {
            (true, false) => format!(" {body}"),
            _ => format!(" {sign} {body}"),
        };
        first = false;
        push(&mut line, piece, sink)?;
    }
    if let Some((rel, rhs)) = row.tail {
        push(&mut line, format!(" {} {}", rel.symbol(), decimal(rhs)), sink)?;
    }
    writeln!(sink, "{line}")
}

/// Writes `sys` in LP format. Fails only when the sink fails, or when a
/// constraint has no terms in a system without variables.
pub fn emit_lp<W: Write>(sys: &ConstraintSystem, sink: &mut W) -> fmt::Result {
    writeln!(sink, "\\ {} variables, {} constraints", sys.variable_count(), sys.constraint_count())?;
    writeln!(sink, "Minimize")?;
    match sys.objective() {
        Some(obj) => write_row(sys, &Row { name: "obj", coeffs: obj, tail: None }, sink)?,
        None => writeln!(sink, " obj:")?,
    }
    writeln!(sink, "Subject To")?;
    for c in sys.constraints() {
        write_row(sys, &Row { name: &c.name, coeffs: &c.coeffs, tail: Some((c.relation, &c.rhs)) }, sink)?;
    }
    writeln!(sink, "Bounds")?;
    for v in sys.variables() {
        match v.bound {
            VarBound::Free => writeln!(sink, " {} free", v.name)?,
            VarBound::NonNegative => writeln!(sink, " {} >= 0", v.name)?,
        }
    }
    writeln!(sink, "End")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LpParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for LpParseError {}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    End,
}

struct PendingRow {
    line: usize,
    name: String,
    terms: Vec<(String, Rational)>,
    tail: Option<(Relation, Rational)>,
}

fn relation_token(tok: &str) -> Option<Relation> {
    match tok {
        "<=" | "=<" | "<" => Some(Relation::Le),
        ">=" | "=>" | ">" => Some(Relation::Ge),
        "=" => Some(Relation::Eq),
        _ => None,
    }
}

fn is_name(tok: &str) -> bool {
    tok.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && tok.chars().all(|c| c.is_ascii_alphanumeric() || "_.[]()".contains(c))
}

/// Parses `name: [±] [coef] var ... [rel rhs]`.
fn parse_row(text: &str, line: usize, want_tail: bool) -> Result<PendingRow, LpParseError> {
    let err = |message: String| LpParseError { line, message };
    let (name, body) = text.split_once(':').ok_or_else(|| err("row without a name".into()))?;
    let name = name.trim();
    if !is_name(name) {
        return Err(err(format!("bad row name '{name}'")));
    }
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let mut terms = Vec::new();
    let mut tail = None;
    let mut i = 0;
    while i < tokens.len() {
        if let Some(rel) = relation_token(tokens[i]) {
            if !want_tail {
                return Err(err("relation in objective".into()));
            }
            let rhs = tokens.get(i + 1).ok_or_else(|| err("missing right-hand side".into()))?;
            if i + 2 != tokens.len() {
                return Err(err("trailing tokens after right-hand side".into()));
            }
            let rhs = parse_decimal(rhs).map_err(|e| err(e.to_string()))?;
            tail = Some((rel, rhs));
            break;
        }
        let mut coef = Rational::one();
        let mut tok: &str = tokens[i];
        if tok == "+" || tok == "-" {
            if tok == "-" {
                coef = -coef;
            }
            i += 1;
            tok = tokens.get(i).ok_or_else(|| err("dangling sign".into()))?;
        } else if let Some(rest) = tok.strip_prefix('-').filter(|r| is_name(r)) {
            coef = -coef;
            tok = rest;
        } else if let Some(rest) = tok.strip_prefix('+').filter(|r| is_name(r)) {
            tok = rest;
        }
        if !is_name(tok) {
            coef *= parse_decimal(tok).map_err(|e| err(e.to_string()))?;
            i += 1;
            tok = tokens.get(i).ok_or_else(|| err("coefficient without variable".into()))?;
        }
        let var = tok;
        if !is_name(var) {
            return Err(err(format!("expected a variable, found '{var}'")));
        }
        terms.push((String::from(var), coef));
        i += 1;
    }
    if want_tail && tail.is_none() {
        return Err(err("constraint without relation".into()));
    }
    Ok(PendingRow { line, name: String::from(name), terms, tail })
}

/// Reads a system written by [`emit_lp`] (and the same subset of the LP
/// format written by hand). Variables keep the order of the Bounds section;
/// variables that only appear in rows follow with the default bound `≥ 0`.
pub fn parse_lp(text: &str) -> Result<ConstraintSystem, LpParseError> {
    let mut section = Section::Start;
    let mut scales: BTreeMap<String, Rational> = BTreeMap::new();
    let mut objective: Option<PendingRow> = None;
    let mut rows: Vec<PendingRow> = Vec::new();
    let mut bounds: Vec<(String, VarBound, usize)> = Vec::new();
    let mut buffer = String::new();
    let mut buffer_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| LpParseError { line, message };
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('\\') {
            let words: Vec<&str> = comment.split_whitespace().collect();
            if let ["scaled", name, "by", factor] = words.as_slice() {
                let factor = parse_decimal(factor).map_err(|e| err(e.to_string()))?;
                if !factor.is_positive() {
                    return Err(err("scale factor must be positive".into()));
                }
                scales.insert(String::from(*name), factor);
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let keyword = trimmed.to_ascii_lowercase();
        let next = match keyword.as_str() {
            "minimize" | "minimum" | "min" => Some(Section::Objective),
            "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(next) = next {
            if !buffer.is_empty() {
                return Err(LpParseError { line: buffer_line, message: "unterminated row".into() });
            }
            section = next;
            continue;
        }
        match section {
            Section::Start => return Err(err("expected 'Minimize'".into())),
            Section::End => return Err(err("content after 'End'".into())),
            Section::Objective => {
                if objective.is_some() {
                    return Err(err("objective spans several rows".into()));
                }
                objective = Some(parse_row(trimmed, line, false)?);
            }
            Section::Constraints => {
                if buffer.is_empty() {
                    buffer_line = line;
                } else {
                    buffer.push(' ');
                }
                buffer.push_str(trimmed);
                if buffer.split_whitespace().any(|t| relation_token(t).is_some()) {
                    rows.push(parse_row(&buffer, buffer_line, true)?);
                    buffer.clear();
                }
            }
            Section::Bounds => {
                let words: Vec<&str> = trimmed.split_whitespace().collect();
                let bound = match words.as_slice() {
                    [name, free] if free.eq_ignore_ascii_case("free") && is_name(name) => (name, VarBound::Free),
                    [name, ">=", zero] if is_name(name) && parse_decimal(zero).is_ok_and(|z| z.is_zero()) => {
                        (name, VarBound::NonNegative)
                    }
                    _ => return Err(err(format!("unsupported bound '{trimmed}'"))),
                };
                bounds.push((String::from(*bound.0), bound.1, line));
            }
        }
    }
    if section != Section::End {
        return Err(LpParseError { line: text.lines().count(), message: "missing 'End'".into() });
    }

    let mut sys = ConstraintSystem::new();
    for (name, bound, line) in &bounds {
        sys.add_variable(name.clone(), *bound).map_err(|e| LpParseError { line: *line, message: e.to_string() })?;
    }
    let resolve = |sys: &mut ConstraintSystem, row: &PendingRow| -> Result<Vec<(usize, Rational)>, LpParseError> {
        let scale = scales.get(&row.name).cloned().unwrap_or_else(Rational::one);
        row.terms
            .iter()
            .map(|(name, a)| {
                let j = match sys.variable(name) {
                    Some(j) => j,
                    None => sys.add_variable(name.clone(), VarBound::NonNegative).expect("new name"),
                };
                Ok((j, a / &scale))
            })
            .collect()
    };
    if let Some(obj) = &objective {
        let terms = resolve(&mut sys, obj)?;
        sys.set_objective(terms).map_err(|e| LpParseError { line: obj.line, message: e.to_string() })?;
    }
    for row in &rows {
        let terms = resolve(&mut sys, row)?;
        let (relation, rhs) = row.tail.clone().expect("constraints carry a relation");
        let scale = scales.get(&row.name).cloned().unwrap_or_else(Rational::one);
        sys.add_constraint(row.name.clone(), terms, relation, rhs / scale)
            .map_err(|e: SystemError| LpParseError { line: row.line, message: e.to_string() })?;
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn small() -> ConstraintSystem {
        let mut s = ConstraintSystem::new();
        let x = s.add_variable("x", VarBound::NonNegative).unwrap();
        let y = s.add_variable("y", VarBound::Free).unwrap();
        s.add_constraint("c1", [(x, int(1)), (y, int(-2))], Relation::Le, int(4)).unwrap();
        s
    }

    #[test]
    fn golden_one_constraint() {
        let mut out = String::new();
        emit_lp(&small(), &mut out).unwrap();
        let expected =
            "\\ 2 variables, 1 constraints\nMinimize\n obj:\nSubject To\n c1: x - 2 y <= 4\nBounds\n x >= 0\n y free\nEnd\n";
        assert_eq!(out, expected);
        assert_eq!(parse_lp(&out).unwrap(), small());
    }

    #[test]
    fn fractions_round_trip() {
        let mut s = small();
        let x = s.variable("x").unwrap();
        let y = s.variable("y").unwrap();
        s.add_constraint("half", [(x, rat(-1, 2)), (y, rat(3, 4))], Relation::Ge, rat(-5, 2)).unwrap();
        s.add_constraint("third", [(x, rat(1, 3)), (y, rat(1, 6))], Relation::Eq, rat(7, 9)).unwrap();
        s.set_objective([(x, rat(2, 3)), (y, int(5))]).unwrap();
        let mut out = String::new();
        emit_lp(&s, &mut out).unwrap();
        assert!(out.contains("\\ exact half: - 1/2 x + 3/4 y >= -5/2\n half: - 0.5 x + 0.75 y >= -2.5\n"));
        assert!(out.contains("\\ scaled third by 18\n third: 6 x + 3 y = 14\n"));
        assert!(out.contains("\\ scaled obj by 3\n obj: 2 x + 15 y\n"));
        assert_eq!(parse_lp(&out).unwrap(), s);
    }

    #[test]
    fn long_rows_wrap() {
        let mut s = ConstraintSystem::new();
        let vars: Vec<usize> = (0..80).map(|i| s.add_variable(format!("variable_{i}"), VarBound::Free).unwrap()).collect();
        s.add_constraint("long", vars.iter().map(|&j| (j, int(j as i64 + 1))), Relation::Le, int(1)).unwrap();
        let mut out = String::new();
        emit_lp(&s, &mut out).unwrap();
        assert!(out.lines().all(|l| l.len() <= WRAP + 40));
        assert!(out.lines().count() > 10);
        assert_eq!(parse_lp(&out).unwrap(), s);
    }

    #[test]
    fn reader_errors() {
        assert_eq!(parse_lp("Subject To\n").unwrap_err().line, 1);
        let missing = "Minimize\n obj:\nSubject To\n c: x + y\nEnd\n";
        assert_eq!(parse_lp(missing).unwrap_err().message, "unterminated row");
        let bad = "Minimize\n obj:\nSubject To\n c: x + <= 3\nEnd\n";
        assert_eq!(parse_lp(bad).unwrap_err().line, 4);
        assert!(parse_lp("Minimize\n obj:\nSubject To\n").is_err());
        let bound = "Minimize\n obj:\nSubject To\nBounds\n x <= 4\nEnd\n";
        assert_eq!(parse_lp(bound).unwrap_err().line, 5);
    }

    #[test]
    fn hand_written_input() {
        let text = "Minimize\n obj: 3 a + b\nSubject To\n r1: a + b\n   >= 1\n r2: -a <= 0\nBounds\n b free\nEnd\n";
        let s = parse_lp(text).unwrap();
        assert_eq!(s.variables()[0].name, "b");
        assert_eq!(s.variables()[1].name, "a");
        assert_eq!(s.variables()[1].bound, VarBound::NonNegative);
        assert_eq!(s.constraint("r2").unwrap().coeffs.get(&1), Some(&int(-1)));
    }
}
