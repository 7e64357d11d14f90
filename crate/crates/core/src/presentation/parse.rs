//! Line-oriented input format.
//!
//! ```text
//! field Q            # or: field F 101
//! gens x y
//! N 2
//! rel y*x
//! rel y^2 - x*y
//! bimodule M         # optional finite bimodule blocks
//! component 0 1
//! component 1 1
//! laction x 0 1      # matrix M_0 -> M_1, rows separated by ';'
//! raction x 0 1
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::presentation::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F {p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawRelation {
    pub line: usize,
    pub terms: Vec<(BigRational, Word)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawAction {
    pub line: usize,
    pub side: Side,
    pub gen: usize,
    pub weight: i64,
    pub rows: Vec<Vec<BigRational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawBimodule {
    pub line: usize,
    pub label: String,
    pub components: Vec<(i64, usize)>,
    pub actions: Vec<RawAction>,
}

/// Parsed input before any field is fixed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub field: Option<FieldSpec>,
    pub gens: Vec<String>,
    pub n: Option<usize>,
    pub relations: Vec<RawRelation>,
    pub bimodules: Vec<RawBimodule>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(line: usize, s: &str, offset: usize) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = offset + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((col, Tok::Num(text.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((col, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^;,".contains(c) {
            out.push((col, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(perr(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    line: usize,
    toks: &'a [(usize, Tok)],
    pos: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end_col)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, self.col(), msg)
    }

    /// `[-] int [/ int]`
    fn rational(&mut self) -> Result<BigRational> {
        let neg = self.eat('-');
        let num = match self.next() {
            Some(Tok::Num(n)) => n,
            _ => {
                self.pos -= 1;
                return Err(self.err("expected a number"));
            }
        };
        let den = if self.eat('/') {
            match self.next() {
                Some(Tok::Num(d)) if !d.is_zero() => d,
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected a nonzero denominator"));
                }
            }
        } else {
            BigInt::one()
        };
        let r = BigRational::new(num, den);
        Ok(if neg { -r } else { r })
    }
}

fn parse_relation(line: usize, toks: &[(usize, Tok)], end_col: usize, gens: &[String]) -> Result<RawRelation> {
    let mut cur = Cursor {
        line,
        toks,
        pos: 0,
        end_col,
    };
    let mut terms = Vec::new();
    if cur.peek().is_none() {
        return Err(cur.err("empty relation"));
    }
    let mut first = true;
    while cur.peek().is_some() {
        let mut coeff = BigRational::one();
        if cur.eat('-') {
            coeff = -coeff;
        } else if !cur.eat('+') && !first {
            return Err(cur.err("expected `+` or `-` between terms"));
        }
        first = false;
        let mut word = Vec::new();
        let mut expect_factor = true;
        if let Some(Tok::Num(_)) = cur.peek() {
            coeff *= cur.rational()?;
            expect_factor = cur.eat('*');
        }
        while expect_factor {
            let col = cur.col();
            match cur.next() {
                Some(Tok::Ident(name)) => {
                    let g = gens.iter().position(|x| *x == name).ok_or(Error::UnknownGenerator {
                        line,
                        column: col,
                        name,
                    })?;
                    let mut k = 1usize;
                    if cur.eat('^') {
                        let c = cur.col();
                        match cur.next() {
                            Some(Tok::Num(n)) => {
                                k = n.try_into().map_err(|_| perr(line, c, "exponent too large"))?;
                            }
                            _ => return Err(perr(line, c, "expected an exponent")),
                        }
                    }
                    word.extend(std::iter::repeat(g).take(k));
                }
                _ => return Err(perr(line, col, "expected a generator")),
            }
            expect_factor = cur.eat('*');
        }
        terms.push((coeff, word));
    }
    Ok(RawRelation { line, terms })
}

fn parse_matrix_rows(line: usize, toks: &[(usize, Tok)], end_col: usize) -> Result<Vec<Vec<BigRational>>> {
    let mut cur = Cursor {
        line,
        toks,
        pos: 0,
        end_col,
    };
    let mut rows = vec![Vec::new()];
    while cur.peek().is_some() {
        if cur.eat(';') {
            rows.push(Vec::new());
            continue;
        }
        if cur.eat(',') {
            continue;
        }
        let x = cur.rational()?;
        rows.last_mut().unwrap().push(x);
    }
    if rows.len() == 1 && rows[0].is_empty() {
        rows.clear();
    }
    Ok(rows)
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut doc = Document::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = content.len() - trimmed.len();
        let (kw, rest) = match trimmed.find(char::is_whitespace) {
            Some(k) => (&trimmed[..k], &trimmed[k..]),
            None => (trimmed, ""),
        };
        let rest_offset = lead + kw.len();
        let end_col = content.trim_end().chars().count() + 1;
        let words: Vec<&str> = rest.split_whitespace().collect();
        let rest_col = |i: usize| -> usize {
            // Column of the i-th whitespace-separated argument.
            let mut count = 0;
            let mut in_word = false;
            for (k, ch) in rest.char_indices() {
                if !ch.is_whitespace() && !in_word {
                    if count == i {
                        return rest_offset + k + 1;
                    }
                    count += 1;
                }
                in_word = !ch.is_whitespace();
            }
            end_col
        };
        match kw {
            "field" => {
                let spec = match words.as_slice() {
                    ["Q"] => FieldSpec::Rationals,
                    ["F", p] => {
                        let p: u64 = p
                            .parse()
                            .map_err(|_| perr(line, rest_col(1), "expected a prime"))?;
                        if crate::linalg::PrimeField::new(p).is_none() {
                            return Err(perr(line, rest_col(1), format!("{p} is not a prime")));
                        }
                        FieldSpec::Prime(p)
                    }
                    _ => return Err(perr(line, rest_col(0), "expected `Q` or `F <prime>`")),
                };
                doc.field = Some(spec);
            }
            "gens" => {
                if !doc.gens.is_empty() {
                    return Err(perr(line, 1, "generators declared twice"));
                }
                for (i, g) in words.iter().enumerate() {
                    let ok = g.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                        && g.chars().all(|c| c.is_alphanumeric() || c == '_');
                    if !ok {
                        return Err(perr(line, rest_col(i), format!("invalid generator name `{g}`")));
                    }
                    if doc.gens.iter().any(|x| x == g) {
                        return Err(perr(line, rest_col(i), format!("duplicate generator `{g}`")));
                    }
                    doc.gens.push(g.to_string());
                }
                if doc.gens.is_empty() {
                    return Err(perr(line, end_col, "expected at least one generator"));
                }
            }
            "N" => {
                let n: usize = match words.as_slice() {
                    [x] => x.parse().map_err(|_| perr(line, rest_col(0), "expected an integer"))?,
                    _ => return Err(perr(line, rest_col(0), "expected a single integer")),
                };
                if n < 2 {
                    return Err(perr(line, rest_col(0), "N must be at least 2"));
                }
                doc.n = Some(n);
            }
            "rel" => {
                if doc.gens.is_empty() {
                    return Err(perr(line, 1, "relation before `gens`"));
                }
                let toks = tokenize(line, rest, rest_offset)?;
                let r = parse_relation(line, &toks, end_col, &doc.gens)?;
                doc.relations.push(r);
            }
            "bimodule" => {
                let label = match words.as_slice() {
                    [l] => l.to_string(),
                    _ => return Err(perr(line, rest_col(0), "expected a label")),
                };
                doc.bimodules.push(RawBimodule {
                    line,
                    label,
                    components: Vec::new(),
                    actions: Vec::new(),
                });
            }
            "component" => {
                let b = doc
                    .bimodules
                    .last_mut()
                    .ok_or_else(|| perr(line, 1, "`component` outside a bimodule block"))?;
                let (r, d) = match words.as_slice() {
                    [r, d] => (
                        r.parse::<i64>().map_err(|_| perr(line, rest_col(0), "expected a weight"))?,
                        d.parse::<usize>()
                            .map_err(|_| perr(line, rest_col(1), "expected a dimension"))?,
                    ),
                    _ => return Err(perr(line, rest_col(0), "expected `component <weight> <dim>`")),
                };
                b.components.push((r, d));
            }
            "laction" | "raction" => {
                if doc.bimodules.is_empty() {
                    return Err(perr(line, 1, "action outside a bimodule block"));
                }
                if words.len() < 2 {
                    return Err(perr(line, end_col, "expected `<gen> <weight> <rows>`"));
                }
                let gen = doc
                    .gens
                    .iter()
                    .position(|g| g == words[0])
                    .ok_or(Error::UnknownGenerator {
                        line,
                        column: rest_col(0),
                        name: words[0].to_string(),
                    })?;
                let weight: i64 = words[1]
                    .parse()
                    .map_err(|_| perr(line, rest_col(1), "expected a weight"))?;
                let skip = rest_col(2) - rest_offset - 1;
                let tail = rest.get(skip..).unwrap_or("");
                let toks = tokenize(line, tail, rest_offset + skip)?;
                let rows = parse_matrix_rows(line, &toks, end_col)?;
                let side = if kw == "laction" { Side::Left } else { Side::Right };
                doc.bimodules.last_mut().unwrap().actions.push(RawAction {
                    line,
                    side,
                    gen,
                    weight,
                    rows,
                });
            }
            other => return Err(perr(line, lead + 1, format!("unknown directive `{other}`"))),
        }
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_relations_with_coefficients() {
        let doc = parse_document("field F 7\ngens x y\nN 2\nrel 2*x*y - 1/3*y^2 # c\n").unwrap();
        assert_eq!(doc.field, Some(FieldSpec::Prime(7)));
        let r = &doc.relations[0];
        assert_eq!(r.terms.len(), 2);
        assert_eq!(r.terms[0], (BigRational::from_integer(2.into()), vec![0, 1]));
        assert_eq!(
            r.terms[1],
            (BigRational::new((-1).into(), 3.into()), vec![1, 1])
        );
    }

    #[test]
    fn unknown_generator_reports_position() {
        let err = parse_document("gens x y\nrel x*z").unwrap_err();
        assert_eq!(
            err,
            Error::UnknownGenerator {
                line: 2,
                column: 7,
                name: "z".into()
            }
        );
    }

    #[test]
    fn syntax_errors_carry_columns() {
        match parse_document("gens x\nrel x x") {
            Err(Error::Parse { line: 2, column: 7, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_document("field F 9"),
            Err(Error::Parse { line: 1, column: 9, .. })
        ));
    }

    #[test]
    fn bimodule_block() {
        let doc = parse_document(
            "gens x\nN 2\nrel x*x\nbimodule M\ncomponent 0 1\ncomponent 1 2\nlaction x 0 1; 0\n",
        )
        .unwrap();
        let b = &doc.bimodules[0];
        assert_eq!(b.components, vec![(0, 1), (1, 2)]);
        assert_eq!(b.actions[0].rows.len(), 2);
        assert_eq!(b.actions[0].side, Side::Left);
    }
}
