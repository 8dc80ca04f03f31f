use std::fmt;

use crate::board::LabeledSwitchboard;
use crate::edge::{Edge, Element};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// `@<id>`, a named element of the structure.
    Const(Element),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `{t0,t1} < {t2,t3}`
    Lt([Term; 4]),
    /// `t0 ↑ {t1,t2}`
    Up([Term; 3]),
    /// `t0 ↓ {t1,t2}`
    Down([Term; 3]),
    Eq([Term; 2]),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Atom {
    pub fn terms(&self) -> &[Term] {
        match self {
            Atom::Lt(t) => t,
            Atom::Up(t) | Atom::Down(t) => t,
            Atom::Eq(t) => t,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Atom::Lt(_) => "lt",
            Atom::Up(_) => "up",
            Atom::Down(_) => "down",
            Atom::Eq(_) => "eq",
        }
    }
}

impl Formula {
    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        self.visit_terms(&mut |t| {
            if let Term::Var(v) = t {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
        });
        out
    }

    /// Constants in order of first occurrence.
    pub fn constants(&self) -> Vec<Element> {
        let mut out = Vec::new();
        self.visit_terms(&mut |t| {
            if let Term::Const(c) = t {
                if !out.contains(c) {
                    out.push(*c);
                }
            }
        });
        out
    }

    fn visit_terms<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match self {
            Formula::Atom(a) => a.terms().iter().for_each(f),
            Formula::Not(g) => g.visit_terms(f),
            Formula::And(g, h) | Formula::Or(g, h) => {
                g.visit_terms(f);
                h.visit_terms(f);
            }
        }
    }

    /// Evaluates under `env`; lt/up/down atoms with coinciding edge
    /// endpoints are false.
    pub fn eval(&self, m: &LabeledSwitchboard, env: &dyn Fn(&str) -> Option<Element>) -> Result<bool> {
        Ok(match self {
            Formula::Atom(a) => {
                let mut v = [0; 4];
                for (slot, t) in v.iter_mut().zip(a.terms()) {
                    *slot = match t {
                        Term::Var(x) => env(x).ok_or_else(|| Error::Precondition(format!("variable {x} is unbound")))?,
                        Term::Const(c) => *c,
                    };
                    if *slot >= m.n() {
                        return Err(Error::Precondition(format!("element {slot} out of range for n = {}", m.n())));
                    }
                }
                let edge = |a: Element, b: Element| (a != b).then(|| Edge::of(a, b));
                match a {
                    Atom::Lt(_) => matches!((edge(v[0], v[1]), edge(v[2], v[3])), (Some(e), Some(f)) if m.lt(e, f)),
                    Atom::Up(_) => edge(v[1], v[2]).is_some_and(|e| m.up(v[0], e)),
                    Atom::Down(_) => edge(v[1], v[2]).is_some_and(|e| m.down(v[0], e)),
                    Atom::Eq(_) => v[0] == v[1],
                }
            }
            Formula::Not(g) => !g.eval(m, env)?,
            Formula::And(g, h) => g.eval(m, env)? && h.eval(m, env)?,
            Formula::Or(g, h) => g.eval(m, env)? || h.eval(m, env)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 0,
            Formula::And(..) => 1,
            Formula::Not(_) | Formula::Atom(_) => 2,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "@{c}"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name())?;
        for (i, t) in self.terms().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Formula {
    /// Minimal parentheses; binary connectives associate to the left.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, g: &Formula, min: u8| {
            if g.precedence() < min {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        };
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => {
                f.write_str("!")?;
                wrap(f, g, 2)
            }
            Formula::And(g, h) | Formula::Or(g, h) => {
                let p = self.precedence();
                wrap(f, g, p)?;
                f.write_str(if p == 1 { " & " } else { " | " })?;
                wrap(f, h, p + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Const(Element),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Const(c) => format!("`@{c}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Not => "`!`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::End => "end of input".into(),
    }
}

fn syntax(col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { col, msg: msg.into() }
}

/// Tokens paired with their 1-based column.
fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (_, c) = chars[i];
        let col = i + 1;
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '@' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[start..j].iter().map(|&(_, c)| c).collect();
            let id = digits.parse().map_err(|_| syntax(col, "expected an element id after `@`"))?;
            out.push((Tok::Const(id), col));
            i = j;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            out.push((Tok::Ident(chars[i..j].iter().map(|&(_, c)| c).collect()), col));
            i = j;
        } else {
            return Err(syntax(col, format!("unexpected character `{c}`")));
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let (t, col) = self.next();
        if t == want {
            Ok(())
        } else {
            Err(syntax(col, format!("expected {}, found {}", describe(&want), describe(&t))))
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while *self.peek() == Tok::Or {
            self.next();
            f = Formula::Or(Box::new(f), Box::new(self.and()?));
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::And {
            self.next();
            f = Formula::And(Box::new(f), Box::new(self.unary()?));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        let (t, col) = self.next();
        match t {
            Tok::Not => Ok(Formula::Not(Box::new(self.unary()?))),
            Tok::LParen => {
                let f = self.or()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => self.atom(&name, col),
            other => Err(syntax(col, format!("expected a formula, found {}", describe(&other)))),
        }
    }

    fn atom(&mut self, name: &str, col: usize) -> Result<Formula> {
        let arity = match name {
            "lt" => 4,
            "up" | "down" => 3,
            "eq" => 2,
            _ => return Err(syntax(col, format!("unknown predicate `{name}` (expected lt, up, down or eq)"))),
        };
        self.expect(Tok::LParen)?;
        let mut terms = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.next();
            terms.push(self.term()?);
        }
        let close = self.col();
        self.expect(Tok::RParen)?;
        if terms.len() != arity {
            return Err(syntax(close, format!("`{name}` takes {arity} arguments, found {}", terms.len())));
        }
        let atom = match name {
            "lt" => Atom::Lt(terms.try_into().unwrap()),
            "up" => Atom::Up(terms.try_into().unwrap()),
            "down" => Atom::Down(terms.try_into().unwrap()),
            _ => Atom::Eq(terms.try_into().unwrap()),
        };
        Ok(Formula::Atom(atom))
    }

    fn term(&mut self) -> Result<Term> {
        match self.next() {
            (Tok::Ident(v), _) => Ok(Term::Var(v)),
            (Tok::Const(c), _) => Ok(Term::Const(c)),
            (other, col) => Err(syntax(col, format!("expected a variable or `@<id>`, found {}", describe(&other)))),
        }
    }
}

/// Parses `lt/up/down/eq` atoms joined by `!`, `&`, `|` and parentheses.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.or()?;
    match p.next() {
        (Tok::End, _) => Ok(f),
        (t, col) => Err(syntax(col, format!("unexpected {} after formula", describe(&t)))),
    }
}
