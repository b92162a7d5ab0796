//! Line-oriented instance format.
//!
//! ```text
//! # comment
//! meta family example
//! meta seed 7
//! var x 1..9
//! var y 1..9
//! var z {2,4,8}
//! var s 0..40
//! alldifferent(x, y, z)
//! linear([1, 1, 2], [x, y, z], <=, 12)
//! linear([3, 1, -1], [x, y, s], =, 0)
//! bound_or((x, <=, 2), (s, <=, 10))
//! ```
//!
//! Relations are `<=`, `>=`, `=`, `<` and `>` (`==` is read as `=`).
//! Variables must be declared before they are used. Everything after `#`
//! on a line is ignored.

use std::fmt::Write as _;

use crate::domain::VariableId;
use crate::error::ParseError;
use crate::linear::SourceRelation;
use crate::model::{Constraint, DomainSpec, ProblemInstance};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(i64),
    Rel(SourceRelation),
    Range,
    Punct(char),
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Tok>, ParseError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '-' && b.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            i += 1;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let n = s[start..i]
                .parse()
                .map_err(|_| ParseError::new(line, format!("integer out of range: {}", &s[start..i])))?;
            out.push(Tok::Int(n));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Word(s[start..i].to_string()));
        } else if s[i..].starts_with("..") {
            out.push(Tok::Range);
            i += 2;
        } else if "<>=".contains(c) {
            let len = if b.get(i + 1) == Some(&b'=') { 2 } else { 1 };
            let rel = SourceRelation::parse(&s[i..i + len])
                .ok_or_else(|| ParseError::new(line, format!("bad relation `{}`", &s[i..i + len])))?;
            out.push(Tok::Rel(rel));
            i += len;
        } else if "()[]{},".contains(c) {
            out.push(Tok::Punct(c));
            i += 1;
        } else {
            return Err(ParseError::new(line, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, msg)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos)
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.next() {
            Some(Tok::Punct(p)) if *p == c => Ok(()),
            other => Err(self.err(format!("expected `{c}`, found {}", describe(other)))),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(*n),
            other => Err(self.err(format!("expected integer, found {}", describe(other)))),
        }
    }

    fn word(&mut self) -> Result<&'a str, ParseError> {
        match self.next() {
            Some(Tok::Word(w)) => Ok(w),
            other => Err(self.err(format!("expected name, found {}", describe(other)))),
        }
    }

    fn relation(&mut self) -> Result<SourceRelation, ParseError> {
        match self.next() {
            Some(Tok::Rel(r)) => Ok(*r),
            other => Err(self.err(format!("expected relation, found {}", describe(other)))),
        }
    }

    /// Comma-separated items up to `close`; the opener is already consumed.
    fn list<T>(&mut self, close: char, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.peek() == Some(&Tok::Punct(close)) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.next() {
                Some(Tok::Punct(',')) => {}
                Some(Tok::Punct(p)) if *p == close => return Ok(out),
                other => return Err(self.err(format!("expected `,` or `{close}`, found {}", describe(other)))),
            }
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            t => Err(self.err(format!("trailing input: {}", describe(t)))),
        }
    }
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of line".into(),
        Some(Tok::Word(w)) => format!("`{w}`"),
        Some(Tok::Int(n)) => format!("`{n}`"),
        Some(Tok::Rel(r)) => format!("`{}`", r.symbol()),
        Some(Tok::Range) => "`..`".into(),
        Some(Tok::Punct(c)) => format!("`{c}`"),
    }
}

fn var_ref(p: &ProblemInstance, cur: &mut Cursor) -> Result<VariableId, ParseError> {
    let name = cur.word()?;
    p.var_by_name(name)
        .ok_or_else(|| cur.err(format!("unknown variable `{name}`")))
}

pub fn parse_instance(text: &str) -> Result<ProblemInstance, ParseError> {
    let mut p = ProblemInstance::new();
    let mut index = std::collections::HashMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("meta ") {
            let rest = rest.trim();
            let (key, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let value = value.trim().to_string();
            match key {
                "family" => p.meta.family = Some(value),
                "size" => p.meta.size = Some(value),
                "seed" => {
                    p.meta.seed = Some(
                        value
                            .parse()
                            .map_err(|_| ParseError::new(line, format!("bad seed `{value}`")))?,
                    )
                }
                _ => return Err(ParseError::new(line, format!("unknown meta key `{key}`"))),
            }
            continue;
        }

        let toks = tokenize(body, line)?;
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line,
        };
        let head = cur.word()?;
        match head {
            "var" => {
                let name = cur.word()?.to_string();
                let domain = match cur.next() {
                    Some(Tok::Int(lo)) => {
                        match cur.next() {
                            Some(Tok::Range) => {}
                            other => return Err(cur.err(format!("expected `..`, found {}", describe(other)))),
                        }
                        DomainSpec::Interval(*lo, cur.int()?)
                    }
                    Some(Tok::Punct('{')) => DomainSpec::Values(cur.list('}', |c| c.int())?),
                    other => return Err(cur.err(format!("expected domain, found {}", describe(other)))),
                };
                if index.insert(name.clone(), ()).is_some() {
                    return Err(cur.err(format!("variable `{name}` declared twice")));
                }
                p.add_var(name, domain);
            }
            "alldifferent" => {
                cur.expect('(')?;
                let vars = cur.list(')', |c| var_ref(&p, c))?;
                p.add_alldifferent(vars);
            }
            "linear" => {
                cur.expect('(')?;
                cur.expect('[')?;
                let coefs = cur.list(']', |c| c.int())?;
                cur.expect(',')?;
                cur.expect('[')?;
                let vars = cur.list(']', |c| var_ref(&p, c))?;
                cur.expect(',')?;
                let rel = cur.relation()?;
                cur.expect(',')?;
                let rhs = cur.int()?;
                cur.expect(')')?;
                if coefs.len() != vars.len() {
                    return Err(cur.err(format!(
                        "{} coefficients for {} variables",
                        coefs.len(),
                        vars.len()
                    )));
                }
                p.add_linear(coefs, vars, rel, rhs);
            }
            "bound_or" => {
                cur.expect('(')?;
                let disjuncts = cur.list(')', |c| {
                    c.expect('(')?;
                    let x = var_ref(&p, c)?;
                    c.expect(',')?;
                    if c.relation()? != SourceRelation::Le {
                        return Err(c.err("bound_or only supports `<=`"));
                    }
                    c.expect(',')?;
                    let k = c.int()?;
                    c.expect(')')?;
                    Ok((x, k))
                })?;
                if disjuncts.is_empty() {
                    return Err(cur.err("bound_or needs at least one disjunct"));
                }
                p.add_bound_or(disjuncts);
            }
            other => return Err(cur.err(format!("unknown statement `{other}`"))),
        }
        cur.finish()?;
    }
    p.validate().map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok(p)
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

pub fn write_instance(p: &ProblemInstance) -> String {
    let mut s = String::new();
    if let Some(f) = &p.meta.family {
        let _ = writeln!(s, "meta family {f}");
    }
    if let Some(seed) = p.meta.seed {
        let _ = writeln!(s, "meta seed {seed}");
    }
    if let Some(size) = &p.meta.size {
        let _ = writeln!(s, "meta size {size}");
    }
    for v in &p.variables {
        match &v.domain {
            DomainSpec::Interval(lo, hi) => {
                let _ = writeln!(s, "var {} {lo}..{hi}", v.name);
            }
            DomainSpec::Values(vals) => {
                let _ = writeln!(s, "var {} {{{}}}", v.name, join(vals, |x| x.to_string()).replace(' ', ""));
            }
        }
    }
    let name = |x: &VariableId| p.name(*x).to_string();
    for c in &p.constraints {
        match c {
            Constraint::AllDifferent(vars) => {
                let _ = writeln!(s, "alldifferent({})", join(vars, name));
            }
            Constraint::Linear(l) => {
                let _ = writeln!(
                    s,
                    "linear([{}], [{}], {}, {})",
                    join(&l.coefs, |a| a.to_string()),
                    join(&l.vars, name),
                    l.relation.symbol(),
                    l.rhs
                );
            }
            Constraint::BoundOr(bd) => {
                let _ = writeln!(
                    s,
                    "bound_or({})",
                    join(&bd.disjuncts, |(x, k)| format!("({}, <=, {k})", p.name(*x)))
                );
            }
        }
    }
    s
}
