use std::fmt::Write;

use super::lexer::{is_ident_continue, is_ident_start};
use super::parser::is_keyword;
use crate::ast::{BuiltinKind, Expr, ExprKind, FunKind, Sugar, Value};

// Precedence levels, loosest first.
const OPEN: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const NOT: u8 = 3;
const CMP: u8 = 4;
const CONS: u8 = 5;
const ADD: u8 = 6;
const MUL: u8 = 7;
const UNARY: u8 = 8;
const APP: u8 = 9;
const ATOM: u8 = 10;

/// Renders `e` in the surface syntax accepted by [`super::parse`].
pub fn print(e: &Expr) -> String {
    let mut out = String::new();
    Printer { out: &mut out }.expr(e, OPEN);
    out
}

struct Printer<'a> {
    out: &'a mut String,
}

fn level(e: &Expr) -> u8 {
    use ExprKind::*;
    match e.kind() {
        Lam(..) => OPEN,
        App(..) | ListDestr(..) | Builtin(..) => APP,
        ListCons(..) => CONS,
        TupCons(..) if !tuple_literal(e) => APP,
        Const(Value::Number(n)) if n.is_sign_negative() && !n.is_nan() => UNARY,
        ValueFun(k, _) => match k {
            FunKind::Or => OR,
            FunKind::And => AND,
            FunKind::Eq | FunKind::Lt | FunKind::Gt => CMP,
            FunKind::Add | FunKind::Sub => ADD,
            FunKind::Mul | FunKind::Div => MUL,
            FunKind::Neg | FunKind::Not => UNARY,
            FunKind::IfThenElse => OPEN,
        },
        Sugar(s) => match &**s {
            self::Sugar::Let(..) | self::Sugar::LetRec(..) => OPEN,
            self::Sugar::Not(_) => NOT,
            self::Sugar::Dot(..) => ATOM,
        },
        _ => ATOM,
    }
}

fn tuple_literal(e: &Expr) -> bool {
    let mut cur = e;
    loop {
        match cur.kind() {
            ExprKind::TupNil => return true,
            ExprKind::TupCons(_, _, t) => cur = t,
            _ => return false,
        }
    }
}

fn format_number(n: f64) -> String {
    if n.is_nan() {
        "nan".to_string()
    } else if n.is_infinite() {
        if n > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{n}")
    } else {
        format!("{n:?}")
    }
}

fn format_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '\0' => out.push_str("\\0"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{{{:x}}}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn plain_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(is_ident_start) && cs.all(is_ident_continue) && !is_keyword(s)
}

impl Printer<'_> {
    fn s(&mut self, s: &str) {
        self.out.push_str(s);
    }

    fn expr(&mut self, e: &Expr, min: u8) {
        let paren = level(e) < min;
        if paren {
            self.s("(");
        }
        self.bare(e);
        if paren {
            self.s(")");
        }
    }

    fn label(&mut self, l: &str) {
        let l = format_string(l);
        self.s(&l);
    }

    fn binary(&mut self, op: &str, a: &Expr, b: &Expr, left: u8, right: u8) {
        self.expr(a, left);
        self.s(" ");
        self.s(op);
        self.s(" ");
        self.expr(b, right);
    }

    fn bare(&mut self, e: &Expr) {
        use ExprKind::*;
        match e.kind() {
            Var(x) => self.s(x),
            Lam(..) => {
                self.s("\\");
                let mut cur = e;
                let mut first = true;
                while let Lam(x, b) = cur.kind() {
                    if !first {
                        self.s(" ");
                    }
                    first = false;
                    self.s(x);
                    cur = b;
                }
                self.s(". ");
                self.expr(cur, OPEN);
            }
            App(f, a) => {
                self.expr(f, APP);
                self.s(" ");
                self.expr(a, ATOM);
            }
            Const(v) => match v {
                Value::Number(n) => self.s(&format_number(*n)),
                Value::String(s) => self.s(&format_string(s)),
                Value::Bool(b) => self.s(if *b { "true" } else { "false" }),
            },
            ListNil => self.s("nil"),
            ListCons(h, t) => {
                self.expr(h, CONS + 1);
                self.s(" :: ");
                self.expr(t, CONS);
            }
            TupNil => self.s("{}"),
            TupCons(l, v, t) => {
                if tuple_literal(e) {
                    self.s("{ ");
                    self.label(l);
                    self.s(": ");
                    self.expr(v, OPEN);
                    let mut cur = t;
                    while let TupCons(l, v, t) = cur.kind() {
                        self.s(", ");
                        self.label(l);
                        self.s(": ");
                        self.expr(v, OPEN);
                        cur = t;
                    }
                    self.s(" }");
                } else {
                    self.s("tcons ");
                    self.label(l);
                    self.s(" ");
                    self.expr(v, ATOM);
                    self.s(" ");
                    self.expr(t, ATOM);
                }
            }
            ListDestr(s, n, c) => {
                self.s("ldestr ");
                self.expr(s, ATOM);
                self.s(" ");
                self.expr(n, ATOM);
                self.s(" ");
                self.expr(c, ATOM);
            }
            TupDestr(s, l) => {
                self.expr(s, ATOM);
                self.s(".");
                self.label(l);
            }
            ValueFun(k, args) => self.value_fun(*k, args),
            Builtin(k, a) => {
                self.s(match k {
                    BuiltinKind::Avg => "avg ",
                    BuiltinKind::Sum => "sum ",
                });
                self.expr(a, ATOM);
            }
            DataRef(t) => {
                self.s("@");
                self.s(t);
            }
            TruffleRef(id) => {
                let _ = write!(self.out, "#{id}");
            }
            Operator(op) => {
                self.s(op.kind().name());
                self.s("[");
                for (i, c) in op.configs().iter().enumerate() {
                    if i > 0 {
                        self.s("; ");
                    }
                    self.expr(c, OPEN);
                }
                self.s("](");
                for (i, c) in op.children().iter().enumerate() {
                    if i > 0 {
                        self.s(", ");
                    }
                    self.expr(c, OPEN);
                }
                self.s(")");
            }
            Sugar(s) => match &**s {
                self::Sugar::Let(x, d, b) | self::Sugar::LetRec(x, d, b) => {
                    self.s(if matches!(&**s, self::Sugar::Let(..)) {
                        "let "
                    } else {
                        "let rec "
                    });
                    self.s(x);
                    self.s(" = ");
                    self.expr(d, OPEN);
                    self.s(" in ");
                    self.expr(b, OPEN);
                }
                self::Sugar::Dot(t, l) => {
                    self.expr(t, ATOM);
                    self.s(".");
                    if plain_ident(l) {
                        self.s(l);
                    } else {
                        self.label(l);
                    }
                }
                self::Sugar::Not(c) => {
                    self.s("not ");
                    self.expr(c, NOT);
                }
            },
        }
    }

    fn value_fun(&mut self, k: FunKind, args: &[Expr]) {
        let bin = |k| match k {
            FunKind::Or => Some(("or", OR, AND)),
            FunKind::And => Some(("and", AND, NOT)),
            FunKind::Eq => Some(("=", CONS, CONS)),
            FunKind::Lt => Some(("<", CONS, CONS)),
            FunKind::Gt => Some((">", CONS, CONS)),
            FunKind::Add => Some(("+", ADD, MUL)),
            FunKind::Sub => Some(("-", ADD, MUL)),
            FunKind::Mul => Some(("*", MUL, UNARY)),
            FunKind::Div => Some(("/", MUL, UNARY)),
            _ => None,
        };
        if let Some((op, left, right)) = bin(k) {
            return self.binary(op, &args[0], &args[1], left, right);
        }
        match k {
            FunKind::Neg => {
                self.s("-(");
                self.expr(&args[0], OPEN);
                self.s(")");
            }
            FunKind::Not => {
                self.s("!");
                self.expr(&args[0], UNARY);
            }
            FunKind::IfThenElse => {
                self.s("if ");
                self.expr(&args[0], OPEN);
                self.s(" then ");
                self.expr(&args[1], OPEN);
                self.s(" else ");
                self.expr(&args[2], OPEN);
            }
            _ => unreachable!(),
        }
    }
}
