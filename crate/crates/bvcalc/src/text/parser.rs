//! Recursive-descent parser for expressions and functionals.

use crate::algebra::{Coefficient, Func, JetVar, MultiIndex, RawExpr};
use crate::jetcalc::BvModel;

use super::lexer::{lex, Tok, Token};
use super::ParseError;

/// Parse tree; `Int` marks an integral block and is only legal in functionals.
#[derive(Clone, Debug)]
pub enum Node {
    Leaf(RawExpr),
    Int(Box<Node>, usize),
    Sum(Vec<(bool, Node)>),
    Product(Vec<Node>),
    Div(Box<Node>, Box<Node>, usize),
    Pow(Box<Node>, i64, usize),
    Deriv(usize, Box<Node>),
}

pub struct Parser<'a> {
    toks: Vec<Token>,
    at: usize,
    model: &'a BvModel,
    end: usize,
}

impl<'a> Parser<'a> {
    pub fn new(model: &'a BvModel, src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, at: 0, model, end: src.chars().count() + 1 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.tok.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(ParseError::new(pos, format!("expected {what}, found {t:?}"))),
            None => Err(ParseError::new(pos, format!("expected {what}, found end of input"))),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<u64, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(n),
            _ => Err(ParseError::new(pos, format!("expected {what}"))),
        }
    }

    /// Parses the whole input.
    pub fn parse_all(mut self) -> Result<Node, ParseError> {
        let n = self.sum()?;
        if self.at < self.toks.len() {
            return Err(ParseError::new(self.pos(), "unexpected trailing input"));
        }
        Ok(n)
    }

    fn sum(&mut self) -> Result<Node, ParseError> {
        let mut items = Vec::new();
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                neg = true;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        items.push((neg, self.product()?));
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    items.push((false, self.product()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    items.push((true, self.product()?));
                }
                _ => break,
            }
        }
        if items.len() == 1 && !items[0].0 {
            return Ok(items.pop().unwrap().1);
        }
        Ok(Node::Sum(items))
    }

    fn product(&mut self) -> Result<Node, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.power()?;
                    acc = match acc {
                        Node::Product(mut v) => {
                            v.push(rhs);
                            Node::Product(v)
                        }
                        other => Node::Product(vec![other, rhs]),
                    };
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.power()?;
                    acc = Node::Div(Box::new(acc), Box::new(rhs), pos);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.unary()?;
        if self.peek() == Some(&Tok::Caret) {
            let pos = self.pos();
            self.bump();
            let neg = if self.peek() == Some(&Tok::Minus) {
                self.bump();
                true
            } else {
                false
            };
            let n = self.expect_int("an integer exponent")? as i64;
            return Ok(Node::Pow(Box::new(base), if neg { -n } else { n }, pos));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            let inner = self.power()?;
            return Ok(Node::Sum(vec![(true, inner)]));
        }
        self.primary()
    }

    fn site(&mut self) -> Result<u32, ParseError> {
        if self.peek() == Some(&Tok::At) {
            self.bump();
            let n = self.expect_int("a site number after `@`")?;
            return u32::try_from(n).map_err(|_| ParseError::new(self.pos(), "site number too large"));
        }
        Ok(0)
    }

    /// Derivative spec after `_` (or inside `fd[…]`): `xx`, `x1`, `{x1 x2}`.
    fn derivspec(&mut self) -> Result<MultiIndex, ParseError> {
        let dim = self.model.dim();
        let mut m = MultiIndex::zero(dim);
        let pos = self.pos();
        match self.bump() {
            Some(Tok::LBrace) => {
                loop {
                    let p = self.pos();
                    match self.bump() {
                        Some(Tok::RBrace) => break,
                        Some(Tok::Ident(s)) => {
                            for d in coord_word(&s, dim).ok_or_else(|| bad_coord(p, &s))? {
                                m = m.bump(d);
                            }
                        }
                        _ => return Err(ParseError::new(p, "expected a coordinate or `}`")),
                    }
                }
                Ok(m)
            }
            Some(Tok::Ident(s)) => {
                for d in coord_word(&s, dim).ok_or_else(|| bad_coord(pos, &s))? {
                    m = m.bump(d);
                }
                Ok(m)
            }
            _ => Err(ParseError::new(pos, "expected a derivative like `x`, `xx` or `{x1 x2}`")),
        }
    }

    fn jet_suffix(&mut self) -> Result<MultiIndex, ParseError> {
        let dim = self.model.dim();
        let mut m = MultiIndex::zero(dim);
        match self.peek() {
            Some(Tok::Underscore) => {
                self.bump();
                m = self.derivspec()?;
            }
            Some(Tok::Prime) => {
                if dim != 1 {
                    return Err(ParseError::new(self.pos(), "`'` derivatives need a one-dimensional base"));
                }
                while self.peek() == Some(&Tok::Prime) {
                    self.bump();
                    m = m.bump(0);
                }
            }
            _ => {}
        }
        Ok(m)
    }

    fn jet(&mut self, field: u16, dagger: bool) -> Result<Node, ParseError> {
        let index = self.jet_suffix()?;
        let site = self.site()?;
        let var: JetVar = self.model.var(field, dagger, index);
        Ok(Node::Leaf(RawExpr::Jet { site, var }))
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Node::Leaf(RawExpr::Scalar(Coefficient::from_int(n as i64)))),
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(s)) => self.ident(s, pos),
            Some(t) => Err(ParseError::new(pos, format!("unexpected {t:?}"))),
            None => Err(ParseError::new(pos, "unexpected end of input")),
        }
    }

    fn ident(&mut self, s: String, pos: usize) -> Result<Node, ParseError> {
        let dim = self.model.dim();
        match s.as_str() {
            "i" => return Ok(Node::Leaf(RawExpr::Scalar(Coefficient::i()))),
            "hbar" => return Ok(Node::Leaf(RawExpr::Scalar(Coefficient::hbar(1)))),
            "sin" | "cos" | "exp" => {
                let func = match s.as_str() {
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    _ => Func::Exp,
                };
                self.expect(Tok::LParen, "`(`")?;
                let arg = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                let site = self.site()?;
                let arg = to_raw(arg)?;
                return Ok(Node::Leaf(RawExpr::Trans { site, func, arg: Box::new(arg) }));
            }
            "dag" => {
                self.expect(Tok::LParen, "`(`")?;
                let p = self.pos();
                let name = match self.bump() {
                    Some(Tok::Ident(n)) => n,
                    _ => return Err(ParseError::new(p, "expected a field name inside dag(…)")),
                };
                let field = self.model.field_id(&name).ok_or_else(|| unknown(p, &name))?;
                self.expect(Tok::RParen, "`)`")?;
                return self.jet(field, true);
            }
            "int" => {
                self.expect(Tok::LParen, "`(`")?;
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(Node::Int(Box::new(e), pos));
            }
            "D" => {
                self.expect(Tok::LBracket, "`[`")?;
                let p = self.pos();
                let j = self.expect_int("a coordinate number")? as usize;
                if j == 0 || j > dim {
                    return Err(ParseError::new(p, format!("coordinate {j} is outside 1..={dim}")));
                }
                self.expect(Tok::RBracket, "`]`")?;
                self.expect(Tok::LParen, "`(`")?;
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(Node::Deriv(j - 1, Box::new(e)));
            }
            "fd" => {
                self.expect(Tok::LBracket, "`[`")?;
                let mut channels = Vec::new();
                loop {
                    let p = self.pos();
                    let label = self.expect_int("a channel label")?;
                    let label = u32::try_from(label).map_err(|_| ParseError::new(p, "channel label too large"))?;
                    self.expect(Tok::Colon, "`:`")?;
                    let m = self.derivspec()?;
                    if channels.iter().any(|(l, _)| *l == label) {
                        return Err(ParseError::new(p, format!("channel {label} listed twice")));
                    }
                    channels.push((label, m));
                    match self.bump() {
                        Some(Tok::Comma) => continue,
                        Some(Tok::RBracket) => break,
                        _ => return Err(ParseError::new(self.pos(), "expected `,` or `]`")),
                    }
                }
                self.expect(Tok::LParen, "`(`")?;
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                let site = self.site()?;
                let inner = to_raw(inner)?;
                return Ok(Node::Leaf(RawExpr::Frozen { site, channels, inner: Box::new(inner) }));
            }
            _ => {}
        }
        if let Some(coords) = coord_word(&s, dim) {
            if coords.len() == 1 && self.model.field_id(&s).is_none() {
                let site = self.site()?;
                return Ok(Node::Leaf(RawExpr::Base { site, coord: coords[0] as u8 }));
            }
        }
        let field = self.model.field_id(&s).ok_or_else(|| unknown(pos, &s))?;
        let dagger = if self.peek() == Some(&Tok::Dagger) {
            self.bump();
            true
        } else {
            false
        };
        self.jet(field, dagger)
    }
}

fn unknown(pos: usize, name: &str) -> ParseError {
    ParseError::new(pos, format!("unknown field `{name}`"))
}

fn bad_coord(pos: usize, s: &str) -> ParseError {
    ParseError::new(pos, format!("`{s}` is not a base coordinate"))
}

/// Reads `x`, `xx`, … (one-dimensional base) or `x1`, `x2`, … as directions.
fn coord_word(s: &str, dim: usize) -> Option<Vec<usize>> {
    if !s.is_empty() && s.chars().all(|c| c == 'x') {
        return (dim == 1).then(|| vec![0; s.len()]);
    }
    let k: usize = s.strip_prefix('x')?.parse().ok()?;
    (k >= 1 && k <= dim).then(|| vec![k - 1])
}

/// Converts a parse tree without integral blocks into a raw expression.
pub fn to_raw(n: Node) -> Result<RawExpr, ParseError> {
    Ok(match n {
        Node::Leaf(r) => r,
        Node::Int(_, pos) => return Err(ParseError::new(pos, "`int(…)` is only allowed at the top level of a functional")),
        Node::Sum(items) => RawExpr::Sum(
            items
                .into_iter()
                .map(|(neg, n)| {
                    let r = to_raw(n)?;
                    Ok(if neg {
                        RawExpr::Product(vec![RawExpr::Scalar(Coefficient::from_int(-1)), r])
                    } else {
                        r
                    })
                })
                .collect::<Result<_, ParseError>>()?,
        ),
        Node::Product(items) => RawExpr::Product(items.into_iter().map(to_raw).collect::<Result<_, _>>()?),
        Node::Div(a, b, pos) => {
            let inv = scalar_inverse(to_raw(*b)?, pos)?;
            RawExpr::Product(vec![to_raw(*a)?, RawExpr::Scalar(inv)])
        }
        Node::Pow(b, k, pos) => {
            let b = to_raw(*b)?;
            if k >= 0 {
                RawExpr::Power(Box::new(b), k as u32)
            } else {
                let inv = scalar_inverse(b, pos)?;
                RawExpr::Power(Box::new(RawExpr::Scalar(inv)), (-k) as u32)
            }
        }
        Node::Deriv(dir, inner) => RawExpr::Deriv { dir, inner: Box::new(to_raw(*inner)?) },
    })
}

/// Inverse of a scalar that is a single ℏ-monomial.
pub fn scalar_inverse(r: RawExpr, pos: usize) -> Result<Coefficient, ParseError> {
    let e = crate::algebra::normalize(&r).map_err(|e| ParseError::new(pos, e.to_string()))?;
    let c = match e.len() {
        0 => None,
        1 => {
            let (t, c) = e.iter().next().unwrap();
            t.is_one().then(|| c.clone())
        }
        _ => None,
    };
    c.and_then(|c| c.inv())
        .ok_or_else(|| ParseError::new(pos, "can only divide by a nonzero scalar monomial such as 2, i or hbar"))
}
