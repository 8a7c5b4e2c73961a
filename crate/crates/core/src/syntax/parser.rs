use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceSpan};
use crate::ast::{BuiltinKind, Expr, FunKind, Name, OpKind, OperatorNode};

const KEYWORDS: &[&str] = &[
    "let", "rec", "in", "if", "then", "else", "and", "or", "not", "true", "false", "nil", "ldestr", "tdestr", "tcons",
    "avg", "sum", "nan", "inf",
];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parses a complete term. Sugar (`let`, `let rec`, `not`) is kept as sugar
/// nodes; `e."l"` produces a tuple destructor directly.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.peek() != &Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            message: message.into(),
            span: self.span(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error_here(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = Name::from(s.as_str());
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("a variable name")),
        }
    }

    fn label(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Tok::Str(s) | Tok::Ident(s) if !s.is_empty() => {
                let l = Name::from(s.as_str());
                self.bump();
                Ok(l)
            }
            _ => Err(self.unexpected("a label")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let mut params = vec![self.name()?];
                while matches!(self.peek(), Tok::Ident(_)) {
                    params.push(self.name()?);
                }
                self.expect(Tok::Dot)?;
                let body = self.expr()?;
                Ok(params.into_iter().rev().fold(body, |b, x| Expr::lam(x, b)))
            }
            Tok::Ident(s) if s == "let" => {
                self.bump();
                let rec = self.is_kw("rec");
                if rec {
                    self.bump();
                }
                let name = self.name()?;
                let mut params = Vec::new();
                while matches!(self.peek(), Tok::Ident(s) if !is_keyword(s)) {
                    params.push(self.name()?);
                }
                self.expect(Tok::Eq)?;
                let def = self.expr()?;
                let def = params.into_iter().rev().fold(def, |b, x| Expr::lam(x, b));
                self.expect_kw("in")?;
                let body = self.expr()?;
                Ok(if rec {
                    Expr::let_rec(name, def, body)
                } else {
                    Expr::let_in(name, def, body)
                })
            }
            Tok::Ident(s) if s == "if" => {
                self.bump();
                let c = self.expr()?;
                self.expect_kw("then")?;
                let a = self.expr()?;
                self.expect_kw("else")?;
                let b = self.expr()?;
                Ok(Expr::if_then_else(c, a, b))
            }
            _ => self.or_expr(),
        }
    }

    fn or_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.and_expr()?;
        while self.is_kw("or") {
            self.bump();
            let r = self.and_expr()?;
            e = Expr::binop(FunKind::Or, e, r);
        }
        Ok(e)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.not_expr()?;
        while self.is_kw("and") {
            self.bump();
            let r = self.not_expr()?;
            e = Expr::binop(FunKind::And, e, r);
        }
        Ok(e)
    }

    fn not_expr(&mut self) -> Result<Expr, ParseError> {
        if self.is_kw("not") {
            self.bump();
            return Ok(Expr::not_sugar(self.not_expr()?));
        }
        self.cmp_expr()
    }

    fn cmp_expr(&mut self) -> Result<Expr, ParseError> {
        let e = self.cons_expr()?;
        let kind = match self.peek() {
            Tok::Eq => FunKind::Eq,
            Tok::Lt => FunKind::Lt,
            Tok::Gt => FunKind::Gt,
            _ => return Ok(e),
        };
        self.bump();
        let r = self.cons_expr()?;
        Ok(Expr::binop(kind, e, r))
    }

    fn cons_expr(&mut self) -> Result<Expr, ParseError> {
        let h = self.add_expr()?;
        if *self.peek() == Tok::ColonColon {
            self.bump();
            let t = self.cons_expr()?;
            return Ok(Expr::cons(h, t));
        }
        Ok(h)
    }

    fn add_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.mul_expr()?;
        loop {
            let kind = match self.peek() {
                Tok::Plus => FunKind::Add,
                Tok::Minus => FunKind::Sub,
                _ => return Ok(e),
            };
            self.bump();
            let r = self.mul_expr()?;
            e = Expr::binop(kind, e, r);
        }
    }

    fn mul_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            let kind = match self.peek() {
                Tok::Star => FunKind::Mul,
                Tok::Slash => FunKind::Div,
                _ => return Ok(e),
            };
            self.bump();
            let r = self.unary()?;
            e = Expr::binop(kind, e, r);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                // `-1` and `-inf` are literals, `-(e)` negates.
                let literal = match self.peek() {
                    Tok::Number(n) => Some(*n),
                    Tok::Ident(s) if s == "inf" => Some(f64::INFINITY),
                    Tok::Ident(s) if s == "nan" => Some(f64::NAN),
                    _ => None,
                };
                if let Some(n) = literal {
                    self.bump();
                    return self.postfix_rest(Expr::num(-n));
                }
                Ok(Expr::fun(FunKind::Neg, vec![self.unary()?]))
            }
            Tok::Bang => {
                self.bump();
                Ok(Expr::fun(FunKind::Not, vec![self.unary()?]))
            }
            _ => self.app(),
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s) || matches!(s.as_str(), "true" | "false" | "nil" | "nan" | "inf"),
            Tok::Number(_) | Tok::Str(_) | Tok::DataRef(_) | Tok::Truffle(_) | Tok::LParen | Tok::LBrace => true,
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.head()?;
        while self.starts_atom() {
            let arg = self.postfix()?;
            e = Expr::app(e, arg);
        }
        Ok(e)
    }

    /// An application head, including the keyword-prefixed forms.
    fn head(&mut self) -> Result<Expr, ParseError> {
        let Tok::Ident(s) = self.peek() else {
            return self.postfix();
        };
        match s.as_str() {
            "ldestr" => {
                self.bump();
                let s = self.postfix()?;
                let n = self.postfix()?;
                let c = self.postfix()?;
                Ok(Expr::ldestr(s, n, c))
            }
            "tdestr" => {
                self.bump();
                let s = self.postfix()?;
                let l = self.label()?;
                Ok(Expr::tdestr(s, l))
            }
            "tcons" => {
                self.bump();
                let l = self.label()?;
                let v = self.postfix()?;
                let t = self.postfix()?;
                Ok(Expr::tcons(l, v, t))
            }
            "avg" | "sum" => {
                let kind = if s == "avg" { BuiltinKind::Avg } else { BuiltinKind::Sum };
                self.bump();
                Ok(Expr::builtin(kind, self.postfix()?))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let e = self.atom()?;
        self.postfix_rest(e)
    }

    fn postfix_rest(&mut self, mut e: Expr) -> Result<Expr, ParseError> {
        while *self.peek() == Tok::Dot && matches!(self.peek_at(1), Tok::Str(_) | Tok::Ident(_)) {
            self.bump();
            let l = self.label()?;
            e = Expr::tdestr(e, l);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Number(n) => {
                self.bump();
                Ok(Expr::num(n))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::string(s))
            }
            Tok::DataRef(s) => {
                self.bump();
                Ok(Expr::data_ref(s))
            }
            Tok::Truffle(id) => {
                self.bump();
                Ok(Expr::truffle(id))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBrace => {
                self.bump();
                let mut fields = Vec::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        let l = self.label()?;
                        self.expect(Tok::Colon)?;
                        let v = self.expr()?;
                        fields.push((l, v));
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                Ok(Expr::tuple(fields))
            }
            Tok::Ident(s) => match s.as_str() {
                "true" | "false" => {
                    self.bump();
                    Ok(Expr::bool(s == "true"))
                }
                "nil" => {
                    self.bump();
                    Ok(Expr::nil())
                }
                "nan" => {
                    self.bump();
                    Ok(Expr::num(f64::NAN))
                }
                "inf" => {
                    self.bump();
                    Ok(Expr::num(f64::INFINITY))
                }
                _ if *self.peek_at(1) == Tok::LBracket => self.operator(&s, span),
                _ => Ok(Expr::var(self.name()?)),
            },
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn operator(&mut self, name: &str, span: SourceSpan) -> Result<Expr, ParseError> {
        let kind = OpKind::from_name(name).ok_or_else(|| ParseError {
            message: format!("unknown operator kind `{name}`"),
            span,
        })?;
        self.bump();
        self.expect(Tok::LBracket)?;
        let configs = self.list(Tok::Semi, Tok::RBracket)?;
        self.expect(Tok::LParen)?;
        let children = self.list(Tok::Comma, Tok::RParen)?;
        let end = self.tokens[self.pos.saturating_sub(1)].span;
        let op = OperatorNode::new(kind, configs, children).map_err(|e| ParseError {
            message: e.to_string(),
            span: SourceSpan {
                end_line: end.end_line,
                end_col: end.end_col,
                ..span
            },
        })?;
        Ok(Expr::operator(op))
    }

    fn list(&mut self, sep: Tok, close: Tok) -> Result<Vec<Expr>, ParseError> {
        let mut out = Vec::new();
        if *self.peek() == close {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if *self.peek() == sep {
                self.bump();
            } else {
                self.expect(close)?;
                return Ok(out);
            }
        }
    }
}
