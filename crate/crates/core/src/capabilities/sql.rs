//! A SQL backend: the supported configuration shapes and their translation.

use super::Capabilities;
use crate::ast::{BuiltinKind, Expr, ExprKind, FunKind, Name, OpKind, Path, Value};
use crate::error::Error;
use crate::sugar::desugar;

/// Supports all seven operators. A configuration is supported when it has
/// one of the following shapes, where a scalar is built from constants,
/// `p."c"` on a parameter `p` and primitive functions:
///
/// | operator | configuration |
/// |----------|---------------|
/// | Scan     | `@table` |
/// | TopK     | a non-negative integer |
/// | Select   | `\p. scalar` |
/// | Project  | `\p. { "l": scalar, ... }` with at least one field |
/// | Sort     | `\p. scalar :: ... :: nil` |
/// | Group    | `\p. p."c" :: ... :: nil` (at least one key) and `\p. { "l": agg, ... }` where `agg` scalars may apply `sum`/`avg` |
/// | Join     | `\a b. scalar` |
///
/// None of these shapes contains a redex other than a primitive function
/// application, so reduction keeps a supported configuration supported.
#[derive(Clone, Copy, Debug, Default)]
pub struct SqlCapabilities;

impl Capabilities for SqlCapabilities {
    fn supports_operator(&self, _: OpKind) -> bool {
        true
    }

    fn supports_config(&self, kind: OpKind, configs: &[Expr]) -> bool {
        config_violation(kind, configs).is_none()
    }

    fn emit_fragment(&self, root: &Expr) -> Result<String, Error> {
        let root = desugar(root);
        Emitter::default().query(&root, &Path::root())
    }
}

type Violation = (Path, &'static str);

/// The first position, relative to the operator, at which `configs` leaves
/// the supported shapes.
pub(crate) fn config_violation(kind: OpKind, configs: &[Expr]) -> Option<Violation> {
    if configs.len() != kind.config_arity() {
        return Some((Path::root(), "wrong number of configurations"));
    }
    let configs: Vec<Expr> = configs.iter().map(desugar).collect();
    let at = |i: usize, r: Result<(), Violation>| r.err().map(|(p, why)| (Path::new(vec![i]).join(&p), why));
    match kind {
        OpKind::Scan => match configs[0].kind() {
            ExprKind::DataRef(_) => None,
            _ => Some((Path::new(vec![0]), "Scan needs a table reference")),
        },
        OpKind::TopK => match configs[0].kind() {
            ExprKind::Const(Value::Number(n)) if *n >= 0.0 && n.fract() == 0.0 && n.is_finite() => None,
            _ => Some((Path::new(vec![0]), "TopK needs a non-negative integer")),
        },
        OpKind::Select => at(0, lambdas(&configs[0], 1, &mut |b, ps, p| scalar(b, ps, false, p))),
        OpKind::Project => at(0, lambdas(&configs[0], 1, &mut |b, ps, p| tuple(b, ps, false, p))),
        OpKind::Sort => at(
            0,
            lambdas(&configs[0], 1, &mut |b, ps, p| {
                list(b, p, &mut |e, p| scalar(e, ps, false, p))
            }),
        ),
        OpKind::Group => at(
            0,
            lambdas(&configs[0], 1, &mut |b, ps, p| {
                if matches!(b.kind(), ExprKind::ListNil) {
                    return Err((p.clone(), "Group needs at least one key"));
                }
                list(b, p, &mut |e, p| column(e, ps, p).map(|_| ()))
            }),
        )
        .or_else(|| at(1, lambdas(&configs[1], 1, &mut |b, ps, p| tuple(b, ps, true, p)))),
        OpKind::Join => at(0, lambdas(&configs[0], 2, &mut |b, ps, p| scalar(b, ps, false, p))),
    }
}

type Check<'a> = dyn FnMut(&Expr, &[Name], &Path) -> Result<(), Violation> + 'a;

fn lambdas(e: &Expr, n: usize, body: &mut Check<'_>) -> Result<(), Violation> {
    let mut params = Vec::new();
    let mut cur = e;
    let mut path = Path::root();
    while params.len() < n {
        let ExprKind::Lam(x, b) = cur.kind() else {
            return Err((path, "expected a lambda"));
        };
        params.push(x.clone());
        cur = b;
        path.push(0);
    }
    body(cur, &params, &path)
}

fn list(e: &Expr, path: &Path, item: &mut dyn FnMut(&Expr, &Path) -> Result<(), Violation>) -> Result<(), Violation> {
    match e.kind() {
        ExprKind::ListNil => Ok(()),
        ExprKind::ListCons(h, t) => {
            item(h, &path.child(0))?;
            list(t, &path.child(1), item)
        }
        _ => Err((path.clone(), "expected a list literal")),
    }
}

fn tuple(e: &Expr, params: &[Name], agg: bool, path: &Path) -> Result<(), Violation> {
    if !agg && matches!(e.kind(), ExprKind::TupNil) {
        return Err((path.clone(), "empty projection"));
    }
    let mut cur = e;
    let mut path = path.clone();
    loop {
        match cur.kind() {
            ExprKind::TupNil => return Ok(()),
            ExprKind::TupCons(_, v, t) => {
                scalar(v, params, agg, &path.child(0))?;
                cur = t;
                path.push(1);
            }
            _ => return Err((path, "expected a tuple literal")),
        }
    }
}

/// `p."c"` for a parameter `p`; returns the column name.
fn column<'e>(e: &'e Expr, params: &[Name], path: &Path) -> Result<&'e Name, Violation> {
    match e.kind() {
        ExprKind::TupDestr(s, l) => match s.as_var() {
            Some(v) if params.contains(v) => Ok(l),
            _ => Err((path.clone(), "field access on something other than a parameter")),
        },
        _ => Err((path.clone(), "expected a column")),
    }
}

fn scalar(e: &Expr, params: &[Name], agg: bool, path: &Path) -> Result<(), Violation> {
    match e.kind() {
        ExprKind::Const(_) => Ok(()),
        ExprKind::TupDestr(..) => column(e, params, path).map(|_| ()),
        ExprKind::ValueFun(_, args) => args
            .iter()
            .enumerate()
            .try_for_each(|(i, a)| scalar(a, params, agg, &path.child(i))),
        ExprKind::Builtin(_, a) if agg => scalar(a, params, false, &path.child(0)),
        ExprKind::Builtin(..) => Err((path.clone(), "aggregate outside a Group aggregation")),
        ExprKind::TruffleRef(_) => Err((path.clone(), "host language reference")),
        ExprKind::DataRef(_) => Err((path.clone(), "table reference in an expression")),
        ExprKind::Operator(_) => Err((path.clone(), "nested operator")),
        ExprKind::Var(_) => Err((path.clone(), "variable")),
        ExprKind::App(f, _) if matches!(f.kind(), ExprKind::TruffleRef(_)) => {
            Err((path.child(0), "host language reference"))
        }
        ExprKind::App(..) => Err((path.clone(), "function application")),
        _ => Err((path.clone(), "unsupported expression")),
    }
}

#[derive(Default)]
struct Emitter {
    next_alias: usize,
}

struct Source {
    from: String,
    qualifier: String,
}

impl Emitter {
    fn alias(&mut self) -> String {
        let a = format!("t{}", self.next_alias);
        self.next_alias += 1;
        a
    }

    fn query(&mut self, e: &Expr, path: &Path) -> Result<String, Error> {
        let op = e.as_operator().ok_or_else(|| emit_err(path, "not an operator"))?;
        if let Some((p, why)) = config_violation(op.kind(), op.configs()) {
            return Err(emit_err(&path.join(&p), why));
        }
        let configs = op.configs();
        let child = |i: usize| path.child(configs.len() + i);
        let sql = match op.kind() {
            OpKind::Scan => {
                let ExprKind::DataRef(t) = configs[0].kind() else {
                    unreachable!()
                };
                format!("SELECT * FROM {}", ident(t))
            }
            OpKind::Join => {
                let (la, ra) = (self.alias(), self.alias());
                let l = self.source(&op.children()[0], &child(0), Some(la))?;
                let r = self.source(&op.children()[1], &child(1), Some(ra))?;
                let (a, b, body) = lambda2(&configs[0]);
                let env = [(a, l.qualifier.as_str()), (b, r.qualifier.as_str())];
                format!(
                    "SELECT * FROM {} JOIN {} ON {}",
                    l.from,
                    r.from,
                    self.scalar(body, &env, path)?
                )
            }
            OpKind::TopK if op.children()[0].as_operator().is_some_and(|c| c.kind() == OpKind::Sort) => {
                // A subquery's ORDER BY does not bind the enclosing LIMIT.
                let ExprKind::Const(Value::Number(n)) = configs[0].kind() else {
                    unreachable!()
                };
                format!("{} LIMIT {}", self.query(&op.children()[0], &child(0))?, *n as u64)
            }
            kind => {
                let src = self.source(&op.children()[0], &child(0), None)?;
                let q = src.qualifier.as_str();
                match kind {
                    OpKind::Select => {
                        let (p, body) = lambda1(&configs[0]);
                        format!(
                            "SELECT * FROM {} WHERE {}",
                            src.from,
                            self.scalar(body, &[(p, q)], path)?
                        )
                    }
                    OpKind::Project => {
                        let (p, body) = lambda1(&configs[0]);
                        let items = self.fields(body, &[(p, q)], path)?;
                        format!("SELECT {} FROM {}", items.join(", "), src.from)
                    }
                    OpKind::Sort => {
                        let (p, body) = lambda1(&configs[0]);
                        let keys = list_items(body)
                            .into_iter()
                            .map(|k| self.scalar(k, &[(p, q)], path))
                            .collect::<Result<Vec<_>, _>>()?;
                        if keys.is_empty() {
                            format!("SELECT * FROM {}", src.from)
                        } else {
                            format!("SELECT * FROM {} ORDER BY {}", src.from, keys.join(", "))
                        }
                    }
                    OpKind::TopK => {
                        let ExprKind::Const(Value::Number(n)) = configs[0].kind() else {
                            unreachable!()
                        };
                        format!("SELECT * FROM {} LIMIT {}", src.from, *n as u64)
                    }
                    OpKind::Group => {
                        let (p, keys) = lambda1(&configs[0]);
                        let env = [(p, q)];
                        let mut items = Vec::new();
                        let mut group_by = Vec::new();
                        for k in list_items(keys) {
                            let ExprKind::TupDestr(_, col) = k.kind() else {
                                unreachable!()
                            };
                            let sql = self.scalar(k, &env, path)?;
                            items.push(format!("{sql} AS {}", ident(col)));
                            group_by.push(sql);
                        }
                        let (p, aggs) = lambda1(&configs[1]);
                        items.extend(self.fields(aggs, &[(p, q)], path)?);
                        format!(
                            "SELECT {} FROM {} GROUP BY {}",
                            items.join(", "),
                            src.from,
                            group_by.join(", ")
                        )
                    }
                    OpKind::Scan | OpKind::Join => unreachable!(),
                }
            }
        };
        Ok(sql)
    }

    fn source(&mut self, e: &Expr, path: &Path, alias: Option<String>) -> Result<Source, Error> {
        let op = e
            .as_operator()
            .ok_or_else(|| emit_err(path, "operator input is not an operator"))?;
        if op.kind() == OpKind::Scan {
            if let ExprKind::DataRef(t) = op.configs()[0].kind() {
                let table = ident(t);
                return Ok(match alias {
                    Some(a) => Source {
                        from: format!("{table} {a}"),
                        qualifier: a,
                    },
                    None => Source {
                        from: table.clone(),
                        qualifier: table,
                    },
                });
            }
        }
        let alias = alias.unwrap_or_else(|| self.alias());
        let sub = self.query(e, path)?;
        Ok(Source {
            from: format!("({sub}) {alias}"),
            qualifier: alias,
        })
    }

    fn fields(&mut self, e: &Expr, env: &[(&Name, &str)], path: &Path) -> Result<Vec<String>, Error> {
        let mut out = Vec::new();
        let mut cur = e;
        while let ExprKind::TupCons(l, v, t) = cur.kind() {
            out.push(format!("{} AS {}", self.scalar(v, env, path)?, ident(l)));
            cur = t;
        }
        Ok(out)
    }

    fn scalar(&mut self, e: &Expr, env: &[(&Name, &str)], path: &Path) -> Result<String, Error> {
        Ok(match e.kind() {
            ExprKind::Const(v) => literal(v),
            ExprKind::TupDestr(s, col) => {
                let v = s.as_var().expect("checked column");
                let q = env.iter().rev().find(|(n, _)| *n == v).expect("checked parameter").1;
                format!("{q}.{}", ident(col))
            }
            ExprKind::ValueFun(k, args) => {
                let a: Vec<String> = args
                    .iter()
                    .map(|x| self.scalar(x, env, path))
                    .collect::<Result<_, _>>()?;
                match k {
                    FunKind::Neg => format!("(-{})", a[0]),
                    FunKind::Not => format!("(NOT {})", a[0]),
                    FunKind::And => format!("({} AND {})", a[0], a[1]),
                    FunKind::Or => format!("({} OR {})", a[0], a[1]),
                    FunKind::Eq => format!("({} = {})", a[0], a[1]),
                    FunKind::Lt => format!("({} < {})", a[0], a[1]),
                    FunKind::Gt => format!("({} > {})", a[0], a[1]),
                    FunKind::Add => format!("({} + {})", a[0], a[1]),
                    FunKind::Sub => format!("({} - {})", a[0], a[1]),
                    FunKind::Mul => format!("({} * {})", a[0], a[1]),
                    FunKind::Div => format!("(CAST({} AS REAL) / {})", a[0], a[1]),
                    FunKind::IfThenElse => format!("CASE WHEN {} THEN {} ELSE {} END", a[0], a[1], a[2]),
                }
            }
            ExprKind::Builtin(k, x) => {
                let x = self.scalar(x, env, path)?;
                match k {
                    BuiltinKind::Sum => format!("SUM({x})"),
                    BuiltinKind::Avg => format!("AVG({x})"),
                }
            }
            _ => return Err(emit_err(path, "unsupported expression")),
        })
    }
}

fn emit_err(path: &Path, reason: &str) -> Error {
    Error::Emit {
        path: path.clone(),
        reason: reason.into(),
    }
}

fn lambda1(e: &Expr) -> (&Name, &Expr) {
    match e.kind() {
        ExprKind::Lam(p, b) => (p, b),
        _ => unreachable!("checked configuration"),
    }
}

fn lambda2(e: &Expr) -> (&Name, &Name, &Expr) {
    let (a, b) = lambda1(e);
    let (bn, body) = lambda1(b);
    (a, bn, body)
}

fn list_items(e: &Expr) -> Vec<&Expr> {
    let mut out = Vec::new();
    let mut cur = e;
    while let ExprKind::ListCons(h, t) = cur.kind() {
        out.push(h);
        cur = t;
    }
    out
}

fn literal(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_nan() => "NULL".into(),
        Value::Number(n) if n.is_infinite() => if *n > 0.0 { "9e999" } else { "-9e999" }.into(),
        Value::Number(n) if n.fract() == 0.0 && n.abs() < 1e15 => format!("{}", *n as i64),
        Value::Number(n) => format!("{n:?}"),
        Value::String(s) => format!("'{}'", s.replace('\'', "''")),
        Value::Bool(true) => "TRUE".into(),
        Value::Bool(false) => "FALSE".into(),
    }
}

const RESERVED: &[&str] = &[
    "all", "and", "as", "asc", "avg", "by", "case", "count", "desc", "distinct", "else", "end", "false", "from",
    "group", "having", "in", "is", "join", "limit", "not", "null", "on", "or", "order", "select", "sum", "table",
    "then", "true", "union", "when", "where",
];

fn ident(s: &str) -> String {
    let plain = s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&s.to_ascii_lowercase().as_str());
    if plain {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('"', "\"\""))
    }
}
