//! CPLEX LP text format, restricted to pure 0-1 programs.
//!
//! Supported sections: objective (`Maximize`/`Minimize`), `Subject To`,
//! `Bounds` (only pinning a binary to 0 or 1), `Binary`, `End`. Lines are
//! wrapped below 80 columns; `\` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{Cmp, IlpModel, Sense};
use crate::error::{Error, Result};

const WIDTH: usize = 78;

fn push_term(out: &mut Vec<String>, first: bool, coef: i64, name: &str) {
    let mag = coef.unsigned_abs();
    let body = if mag == 1 { name.to_string() } else { format!("{mag} {name}") };
    let tok = match (first, coef < 0) {
        (true, false) => body,
        (true, true) => format!("- {body}"),
        (false, false) => format!("+ {body}"),
        (false, true) => format!("- {body}"),
    };
    out.push(tok);
}

/// Writes `head` followed by `items`, wrapping onto indented continuation lines.
fn write_wrapped(text: &mut String, head: &str, items: &[String]) {
    let mut line = String::from(head);
    for (i, it) in items.iter().enumerate() {
        let sep = if i == 0 && head.ends_with(' ') { "" } else { " " };
        if line.len() + sep.len() + it.len() > WIDTH && line.trim().len() > head.trim().len() {
            text.push_str(&line);
            text.push('\n');
            line = String::from("   ");
            line.push_str(it);
        } else {
            line.push_str(sep);
            line.push_str(it);
        }
    }
    text.push_str(&line);
    text.push('\n');
}

/// Serializes `m` as LP text; output depends only on the model.
pub fn export_lp(m: &IlpModel) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "\\ Problem: {}", m.name());
    for c in m.comments() {
        for line in c.lines() {
            let _ = writeln!(text, "\\ {line}");
        }
    }
    text.push_str(match m.sense() {
        Sense::Maximize => "Maximize\n",
        Sense::Minimize => "Minimize\n",
    });
    let mut items = Vec::new();
    for (i, &(v, c)) in m.objective().iter().enumerate() {
        push_term(&mut items, i == 0, c, m.var_name(v));
    }
    write_wrapped(&mut text, " obj:", &items);

    text.push_str("Subject To\n");
    for (ci, c) in m.constraints().iter().enumerate() {
        items.clear();
        for (i, &(v, k)) in c.terms().iter().enumerate() {
            push_term(&mut items, i == 0, k, m.var_name(v));
        }
        items.push(c.cmp().symbol().to_string());
        items.push(c.rhs().to_string());
        write_wrapped(&mut text, &format!(" c{ci}:"), &items);
    }

    if !m.fixed().is_empty() {
        text.push_str("Bounds\n");
        for (&v, &b) in m.fixed() {
            let _ = writeln!(text, " {} = {}", m.var_name(v), b as u8);
        }
    }

    text.push_str("Binary\n");
    let names: Vec<String> = m.var_names().to_vec();
    if !names.is_empty() {
        write_wrapped(&mut text, "", &names);
    }
    text.push_str("End\n");
    text
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Plus,
    Minus,
    Colon,
    Cmp(Cmp),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::LpSyntax { line, column: col, message: message.into() }
}

fn tokenize_line(src: &str, line: usize) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = match c {
            '+' => (Tok::Plus, 1),
            '-' => (Tok::Minus, 1),
            ':' => (Tok::Colon, 1),
            '<' | '>' | '=' => {
                let next = bytes.get(i + 1).map(|&b| b as char);
                match (c, next) {
                    ('<', Some('=')) | ('=', Some('<')) => (Tok::Cmp(Cmp::Le), 2),
                    ('>', Some('=')) | ('=', Some('>')) => (Tok::Cmp(Cmp::Ge), 2),
                    ('<', _) => (Tok::Cmp(Cmp::Le), 1),
                    ('>', _) => (Tok::Cmp(Cmp::Ge), 1),
                    _ => (Tok::Cmp(Cmp::Eq), 1),
                }
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                let mut j = i;
                while j < bytes.len() {
                    let d = bytes[j] as char;
                    let exp_sign = (d == '+' || d == '-') && j > start && matches!(bytes[j - 1], b'e' | b'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let s = &src[start..j];
                let v: f64 = s.parse().map_err(|_| syntax(line, col, format!("bad number {s:?}")))?;
                (Tok::Num(v), j - start)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < bytes.len() {
                    let d = bytes[j] as char;
                    if d.is_ascii_alphanumeric() || "_.!\"#$%&(),;?@'{}~[]/".contains(d) {
                        j += 1;
                    } else {
                        break;
                    }
                }
                (Tok::Ident(src[start..j].to_string()), j - start)
            }
            _ => return Err(syntax(line, col, format!("unexpected character {c:?}"))),
        };
        out.push(Token { tok, line, col });
        i += len;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binary,
    Done,
}

/// Recognizes a section keyword at the start of a line; returns the section
/// and how many tokens it spans.
fn section_keyword(toks: &[Token]) -> Result<Option<(Section, usize)>> {
    let word = |i: usize| match toks.get(i).map(|t| &t.tok) {
        Some(Tok::Ident(s)) => Some(s.to_ascii_lowercase()),
        _ => None,
    };
    let Some(w0) = word(0) else { return Ok(None) };
    let t0 = &toks[0];
    // A keyword followed by ':' is a row name, not a header.
    if matches!(toks.get(1).map(|t| &t.tok), Some(Tok::Colon)) {
        return Ok(None);
    }
    let found = match w0.as_str() {
        "maximize" | "maximise" | "maximum" | "max" => Some((Section::Objective, 1)),
        "minimize" | "minimise" | "minimum" | "min" => Some((Section::Objective, 1)),
        "subject" | "such" if word(1).as_deref() == Some("to") || word(1).as_deref() == Some("that") => {
            Some((Section::Constraints, 2))
        }
        "st" | "s.t." | "st." => Some((Section::Constraints, 1)),
        "bounds" | "bound" => Some((Section::Bounds, 1)),
        "binary" | "binaries" | "bin" => Some((Section::Binary, 1)),
        "end" => Some((Section::Done, 1)),
        "general" | "generals" | "gen" => {
            return Err(Error::LpUnsupported(format!(
                "line {}: general integer section (only binary variables are supported)",
                t0.line
            )))
        }
        "semi" | "semis" | "semi-continuous" | "sos" => {
            return Err(Error::LpUnsupported(format!("line {}: section {w0:?}", t0.line)))
        }
        _ => None,
    };
    Ok(found)
}

fn sense_of(tok: &Token) -> Sense {
    match &tok.tok {
        Tok::Ident(s) if s.to_ascii_lowercase().starts_with("min") => Sense::Minimize,
        _ => Sense::Maximize,
    }
}

struct RawRow {
    terms: Vec<(String, i64, usize, usize)>,
    cmp: Cmp,
    rhs: i64,
}

fn integral(v: f64, t: &Token) -> Result<i64> {
    if v.fract() != 0.0 || v.abs() > 9.0e15 {
        return Err(Error::LpUnsupported(format!("line {}, column {}: non-integer coefficient {v}", t.line, t.col)));
    }
    Ok(v as i64)
}

/// Parses a linear expression starting at `*pos`; stops before a comparison
/// operator, a row name, or the end of the token list.
fn parse_expr(toks: &[Token], pos: &mut usize) -> Result<Vec<(String, i64, usize, usize)>> {
    let mut terms = Vec::new();
    loop {
        let start = *pos;
        let mut sign = 1i64;
        let mut saw_sign = false;
        while let Some(t) = toks.get(*pos) {
            match t.tok {
                Tok::Plus => {
                    saw_sign = true;
                    *pos += 1
                }
                Tok::Minus => {
                    saw_sign = true;
                    sign = -sign;
                    *pos += 1
                }
                _ => break,
            }
        }
        if !terms.is_empty() && !saw_sign {
            // A new row starts (or the expression ended).
            *pos = start;
            return Ok(terms);
        }
        let Some(t) = toks.get(*pos) else {
            if saw_sign {
                let last = &toks[*pos - 1];
                return Err(syntax(last.line, last.col, "dangling sign"));
            }
            return Ok(terms);
        };
        let mut coef = 1i64;
        if let Tok::Num(v) = t.tok {
            coef = integral(v, t)?;
            *pos += 1;
        }
        let Some(t2) = toks.get(*pos) else {
            let t = &toks[*pos - 1];
            return Err(Error::LpUnsupported(format!(
                "line {}, column {}: constant terms are not supported",
                t.line, t.col
            )));
        };
        match &t2.tok {
            Tok::Ident(name) => {
                if matches!(toks.get(*pos + 1).map(|t| &t.tok), Some(Tok::Colon)) {
                    // `name:` begins the next row
                    if saw_sign || coef != 1 || matches!(t.tok, Tok::Num(_)) {
                        return Err(syntax(t2.line, t2.col, "row name inside an expression"));
                    }
                    *pos = start;
                    return Ok(terms);
                }
                terms.push((name.clone(), sign * coef, t2.line, t2.col));
                *pos += 1;
            }
            Tok::Cmp(_) if !saw_sign && terms.is_empty() && !matches!(t.tok, Tok::Num(_)) => {
                return Ok(terms);
            }
            Tok::Cmp(_) if !saw_sign && !matches!(t.tok, Tok::Num(_)) => return Ok(terms),
            Tok::Cmp(_) => {
                return Err(Error::LpUnsupported(format!(
                    "line {}, column {}: constant terms are not supported",
                    t.line, t.col
                )))
            }
            _ => return Err(syntax(t2.line, t2.col, "expected a variable name")),
        }
    }
}

fn parse_rows(toks: &[Token]) -> Result<Vec<RawRow>> {
    let mut rows = Vec::new();
    let mut pos = 0;
    while pos < toks.len() {
        if let (Tok::Ident(_), Some(Tok::Colon)) = (&toks[pos].tok, toks.get(pos + 1).map(|t| &t.tok)) {
            pos += 2;
        }
        let terms = parse_expr(toks, &mut pos)?;
        let at = toks.get(pos).or(toks.last()).unwrap();
        if terms.is_empty() {
            return Err(syntax(at.line, at.col, "constraint without terms"));
        }
        let cmp = match toks.get(pos).map(|t| &t.tok) {
            Some(Tok::Cmp(c)) => *c,
            _ => return Err(syntax(at.line, at.col, "expected <=, >= or =")),
        };
        pos += 1;
        let mut sign = 1;
        while let Some(Tok::Plus | Tok::Minus) = toks.get(pos).map(|t| &t.tok) {
            if toks[pos].tok == Tok::Minus {
                sign = -sign;
            }
            pos += 1;
        }
        let rhs = match toks.get(pos) {
            Some(t @ Token { tok: Tok::Num(v), .. }) => sign * integral(*v, t)?,
            Some(t) => return Err(syntax(t.line, t.col, "expected a numeric right-hand side")),
            None => return Err(syntax(at.line, at.col, "missing right-hand side")),
        };
        pos += 1;
        rows.push(RawRow { terms, cmp, rhs });
    }
    Ok(rows)
}

fn parse_bounds(toks: &[Token]) -> Result<Vec<(String, bool, usize, usize)>> {
    // Each bound is one of: `x = v`, `x <= 1`, `x >= 0`, `x <= 0`, `x >= 1`,
    // `0 <= x <= 1`.
    let mut out = Vec::new();
    let mut pos = 0;
    let num = |t: Option<&Token>| match t.map(|t| &t.tok) {
        Some(Tok::Num(v)) => Some(*v),
        _ => None,
    };
    while pos < toks.len() {
        let t = &toks[pos];
        match &t.tok {
            Tok::Num(lo) => {
                // lo <= x <= hi
                let ok = matches!(toks.get(pos + 1).map(|t| &t.tok), Some(Tok::Cmp(Cmp::Le)))
                    && matches!(toks.get(pos + 3).map(|t| &t.tok), Some(Tok::Cmp(Cmp::Le)));
                let name = match toks.get(pos + 2).map(|t| &t.tok) {
                    Some(Tok::Ident(n)) => n.clone(),
                    _ => return Err(syntax(t.line, t.col, "malformed bound")),
                };
                let hi = num(toks.get(pos + 4));
                match (ok, *lo, hi) {
                    (true, lo, Some(hi)) if lo == 0.0 && hi == 1.0 => {}
                    (true, lo, Some(hi)) if lo == hi && (lo == 0.0 || lo == 1.0) => {
                        out.push((name, lo == 1.0, t.line, t.col))
                    }
                    _ => {
                        return Err(Error::LpUnsupported(format!(
                            "line {}: bound on {name} is not a 0-1 bound",
                            t.line
                        )))
                    }
                }
                pos += 5;
            }
            Tok::Ident(name) => {
                let cmp = match toks.get(pos + 1).map(|t| &t.tok) {
                    Some(Tok::Cmp(c)) => *c,
                    Some(Tok::Ident(w)) if w.eq_ignore_ascii_case("free") => {
                        return Err(Error::LpUnsupported(format!("line {}: free variable {name}", t.line)))
                    }
                    _ => return Err(syntax(t.line, t.col, "malformed bound")),
                };
                let mut sign = 1.0;
                let mut p = pos + 2;
                if toks.get(p).map(|t| &t.tok) == Some(&Tok::Minus) {
                    sign = -1.0;
                    p += 1;
                }
                let Some(v) = num(toks.get(p)).map(|v| v * sign) else {
                    return Err(Error::LpUnsupported(format!("line {}: bound on {name} is not a 0-1 bound", t.line)));
                };
                match (cmp, v) {
                    (Cmp::Eq, v) if v == 0.0 || v == 1.0 => out.push((name.clone(), v == 1.0, t.line, t.col)),
                    (Cmp::Le, v) if v == 1.0 => {}
                    (Cmp::Ge, v) if v == 0.0 => {}
                    (Cmp::Le, v) if v == 0.0 => out.push((name.clone(), false, t.line, t.col)),
                    (Cmp::Ge, v) if v == 1.0 => out.push((name.clone(), true, t.line, t.col)),
                    _ => {
                        return Err(Error::LpUnsupported(format!(
                            "line {}: bound on {name} is not a 0-1 bound",
                            t.line
                        )))
                    }
                }
                pos = p + 1;
            }
            _ => return Err(syntax(t.line, t.col, "malformed bound")),
        }
    }
    Ok(out)
}

/// Parses LP text produced by [`export_lp`] or written by hand in the same
/// subset. Variables are indexed in `Binary` declaration order.
pub fn parse_lp(text: &str) -> Result<IlpModel> {
    let mut section = Section::Preamble;
    let mut sense = None;
    let mut name = String::from("model");
    let mut comments = Vec::new();
    let mut obj_toks: Vec<Token> = Vec::new();
    let mut row_toks: Vec<Token> = Vec::new();
    let mut bound_toks: Vec<Token> = Vec::new();
    let mut binaries: Vec<Token> = Vec::new();
    let mut expect_more = false;

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let (body, comment) = match raw.find('\\') {
            Some(i) => (&raw[..i], Some(raw[i + 1..].trim())),
            None => (raw, None),
        };
        if let Some(c) = comment {
            let c = c.trim_start_matches('*').trim_end_matches('*').trim_end_matches('\\').trim();
            if let Some(p) = c.strip_prefix("Problem:") {
                name = p.trim().to_string();
            } else if !c.is_empty() && section == Section::Preamble && body.trim().is_empty() {
                comments.push(c.to_string());
            }
        }
        if section == Section::Done {
            continue;
        }
        let mut toks = tokenize_line(body, line)?;
        if toks.is_empty() {
            continue;
        }
        if let Some((s, skip)) = section_keyword(&toks)? {
            if s == Section::Objective {
                if sense.is_some() {
                    return Err(syntax(line, toks[0].col, "second objective section"));
                }
                sense = Some(sense_of(&toks[0]));
            }
            section = s;
            toks.drain(..skip);
            expect_more = false;
            if toks.is_empty() || section == Section::Done {
                continue;
            }
        } else {
            let bare = toks.iter().all(|t| matches!(t.tok, Tok::Ident(_)));
            let at_margin = !body.starts_with(char::is_whitespace);
            if bare && at_margin && !expect_more && section != Section::Binary {
                return Err(syntax(line, 1, format!("unknown section header {:?}", body.trim())));
            }
        }
        expect_more = matches!(toks.last().map(|t| &t.tok), Some(Tok::Plus | Tok::Minus | Tok::Cmp(_) | Tok::Colon));
        match section {
            Section::Preamble => {
                return Err(syntax(line, toks[0].col, "content before the objective section"));
            }
            Section::Objective => obj_toks.extend(toks),
            Section::Constraints => row_toks.extend(toks),
            Section::Bounds => bound_toks.extend(toks),
            Section::Binary => {
                for t in toks {
                    match t.tok {
                        Tok::Ident(_) => binaries.push(t),
                        _ => return Err(syntax(t.line, t.col, "expected a variable name")),
                    }
                }
            }
            Section::Done => {}
        }
    }
    let Some(sense) = sense else {
        return Err(syntax(1, 1, "missing Maximize/Minimize section"));
    };
    if section != Section::Done {
        return Err(syntax(text.lines().count().max(1), 1, "missing End"));
    }

    let mut model = IlpModel::new(name, sense);
    for c in comments {
        model.add_comment(c);
    }
    for t in &binaries {
        let Tok::Ident(n) = &t.tok else { unreachable!() };
        match model.add_binary_var(n.clone()) {
            Ok(_) | Err(Error::DuplicateVariable(_)) => {}
            Err(Error::InvalidVariableName(n)) => {
                return Err(syntax(t.line, t.col, format!("invalid variable name {n:?}")))
            }
            Err(e) => return Err(e),
        }
    }
    let resolve = |model: &IlpModel, n: &str, line: usize, col: usize| -> Result<usize> {
        model.var_index(n).ok_or_else(|| {
            Error::LpUnsupported(format!("line {line}, column {col}: variable {n:?} is not declared binary"))
        })
    };

    let mut pos = 0;
    if let (Some(Tok::Ident(_)), Some(Tok::Colon)) = (obj_toks.first().map(|t| &t.tok), obj_toks.get(1).map(|t| &t.tok))
    {
        pos = 2;
    }
    let obj_terms = parse_expr(&obj_toks, &mut pos)?;
    if let Some(t) = obj_toks.get(pos) {
        return Err(syntax(t.line, t.col, "unexpected token in objective"));
    }
    let mut objective = BTreeMap::new();
    for (n, c, l, col) in obj_terms {
        *objective.entry(resolve(&model, &n, l, col)?).or_insert(0) += c;
    }
    model.set_objective(objective)?;

    for row in parse_rows(&row_toks)? {
        let mut terms = Vec::with_capacity(row.terms.len());
        for (n, c, l, col) in row.terms {
            terms.push((resolve(&model, &n, l, col)?, c));
        }
        model.add_constraint(terms, row.cmp, row.rhs)?;
    }
    for (n, value, l, col) in parse_bounds(&bound_toks)? {
        let v = resolve(&model, &n, l, col)?;
        model.fix_var(v, value)?;
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = "\\ Problem: single\nMaximize\n obj: x\nSubject To\n c0: x <= 1\nBinary\n x\nEnd\n";

    fn single() -> IlpModel {
        let mut m = IlpModel::new("single", Sense::Maximize);
        let x = m.add_binary_var("x").unwrap();
        m.set_objective([(x, 1)]).unwrap();
        m.add_constraint([(x, 1)], Cmp::Le, 1).unwrap();
        m
    }

    #[test]
    fn golden_single_variable() {
        assert_eq!(export_lp(&single()), GOLDEN);
        assert_eq!(parse_lp(GOLDEN).unwrap(), single());
    }

    #[test]
    fn whitespace_and_comment_variants() {
        let variants = [
            "Maximize\nobj: x\nSubject To\nc0: x <= 1\nBinary\nx\nEnd\n",
            "\\ leading comment\nMAXIMIZE\n   obj:   x   \\ trailing\n\nsubject to\n  x<=1\nbinaries\n  x\nend",
            "Maximize\n x\nst\n x =< 1\nBin\n x\nEnd\n",
        ];
        for v in variants {
            assert_eq!(parse_lp(v).unwrap(), single(), "{v}");
        }
    }

    #[test]
    fn unknown_section_rejected() {
        let bad = "Maximize\n obj: x\nConstraints\n c0: x <= 1\nBinary\n x\nEnd\n";
        assert!(matches!(parse_lp(bad), Err(Error::LpSyntax { line: 3, .. })));
    }

    #[test]
    fn non_binary_rejected() {
        let gen = "Maximize\n obj: x\nSubject To\n c0: x <= 1\nGeneral\n x\nEnd\n";
        assert!(matches!(parse_lp(gen), Err(Error::LpUnsupported(_))));
        let undeclared = "Maximize\n obj: x + y\nSubject To\n c0: x <= 1\nBinary\n x\nEnd\n";
        assert!(matches!(parse_lp(undeclared), Err(Error::LpUnsupported(_))));
        let frac = "Maximize\n obj: 0.5 x\nSubject To\n c0: x <= 1\nBinary\n x\nEnd\n";
        assert!(matches!(parse_lp(frac), Err(Error::LpUnsupported(_))));
        let bound = "Maximize\n obj: x\nSubject To\n c0: x <= 1\nBounds\n x <= 3\nBinary\n x\nEnd\n";
        assert!(matches!(parse_lp(bound), Err(Error::LpUnsupported(_))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let bad = "Maximize\n obj: x\nSubject To\n c0: x <= \nBinary\n x\nEnd\n";
        match parse_lp(bad) {
            Err(Error::LpSyntax { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_lp("Maximize\n obj: x ?\nEnd\n"), Err(Error::LpSyntax { line: 2, column: 9, .. })));
        assert!(parse_lp("Maximize\n obj: x\nBinary\n x\n").is_err());
    }

    #[test]
    fn negative_coefficients_bounds_and_wrapping() {
        let mut m = IlpModel::new("wide", Sense::Minimize);
        for i in 0..40 {
            m.add_binary_var(format!("var_{i}")).unwrap();
        }
        m.set_objective((0..40).map(|i| (i, if i % 3 == 0 { -2 } else { 1 }))).unwrap();
        m.add_constraint((0..40).map(|i| (i, (i as i64 % 5) - 2)), Cmp::Ge, -3).unwrap();
        m.add_constraint([(0, 1), (1, -1)], Cmp::Eq, 0).unwrap();
        m.fix_var(7, true).unwrap();
        m.fix_var(3, false).unwrap();
        let text = export_lp(&m);
        assert!(text.lines().all(|l| l.len() <= 80), "{text}");
        assert!(text.contains("Bounds\n var_3 = 0\n var_7 = 1\n"));
        assert_eq!(parse_lp(&text).unwrap(), m);
    }

    #[test]
    fn empty_objective_round_trips() {
        let mut m = IlpModel::new("feas", Sense::Maximize);
        let a = m.add_binary_var("a").unwrap();
        let b = m.add_binary_var("b").unwrap();
        m.add_constraint([(a, 1), (b, 1)], Cmp::Eq, 1).unwrap();
        assert_eq!(parse_lp(&export_lp(&m)).unwrap(), m);
    }
}
