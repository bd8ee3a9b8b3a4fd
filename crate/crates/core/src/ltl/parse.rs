use std::fmt;

use super::Formula;

/// Syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    Eventually,
    Always,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("atom `{name}`"),
            Tok::Not => "`!`".into(),
            Tok::Eventually => "`F`".into(),
            Tok::Always => "`G`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const OPERAND: &[&str] = &["atom", "`!`", "`F`", "`G`", "`(`"];
const BINARY_OR_END: &[&str] = &["`&`", "`|`", "`->`", "`<->`", "`)`", "end of input"];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let tok = match c {
            'a'..='z' => {
                let mut name = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if c.is_ascii_alphanumeric() {
                        name.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Ident(name)));
                continue;
            }
            '!' | '¬' => Tok::Not,
            'F' | '◇' => Tok::Eventually,
            'G' | '□' => Tok::Always,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '→' | '⊃' => Tok::Implies,
            '↔' => Tok::Iff,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' => {
                it.next();
                match it.peek() {
                    Some(&(_, '>')) => Tok::Implies,
                    _ => return Err(unexpected(pos + 1, &["`>`"], src)),
                }
            }
            '<' => {
                it.next();
                let ok =
                    matches!(it.next(), Some((_, '-'))) && matches!(it.peek(), Some(&(_, '>')));
                if !ok {
                    return Err(unexpected(pos, &["`<->`"], src));
                }
                Tok::Iff
            }
            _ => return Err(unexpected(pos, OPERAND, src)),
        };
        it.next();
        out.push((pos, tok));
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

fn unexpected(offset: usize, expected: &[&'static str], src: &str) -> ParseError {
    let found = src[offset.min(src.len())..]
        .chars()
        .next()
        .map(|c| format!("`{c}`"))
        .unwrap_or_else(|| "end of input".into());
    ParseError {
        offset,
        expected: expected.to_vec(),
        found,
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().describe(),
        }
    }

    // iff := imp ( '<->' imp )?
    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            if *self.peek() == Tok::Iff {
                return Err(ParseError {
                    offset: self.offset(),
                    expected: vec!["`)`", "end of input"],
                    found: "`<->` (chained `<->` needs parentheses)".into(),
                });
            }
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    // imp := or ( '->' imp )?
    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Eventually => {
                self.bump();
                Ok(Formula::eventually(self.unary()?))
            }
            Tok::Always => {
                self.bump();
                Ok(Formula::always(self.unary()?))
            }
            Tok::Ident(_) => match self.bump() {
                Tok::Ident(name) => Ok(Formula::Atom(name)),
                _ => unreachable!(),
            },
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`", "`&`", "`|`", "`->`", "`<->`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(OPERAND)),
        }
    }
}

/// Parses formula text.
///
/// Precedence, tightest first: `!`/`F`/`G`, `&`, `|`, `->` (right
/// associative), `<->` (non-associative). `&` and `|` associate to the left.
/// The unicode connectives `¬ ∧ ∨ → ⊃ ↔ ◇ □` are accepted as aliases.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(BINARY_OR_END));
    }
    Ok(f)
}
