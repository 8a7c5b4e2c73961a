#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::HashMap;
use std::path::PathBuf;
use std::rc::Rc;

use qir::{desugar, parse, BuiltinKind, Expr, ExprKind, FunKind, OpKind, Value};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub mod suites;

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/corpus")
        .join(format!("{name}.qir"))
}

pub fn corpus(name: &str) -> Expr {
    let src = std::fs::read_to_string(corpus_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    parse(&src).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn q(src: &str) -> Expr {
    desugar(&parse(src).unwrap_or_else(|e| panic!("{src}: {e}")))
}

// ---------------------------------------------------------------------------
// Random terms
// ---------------------------------------------------------------------------

const NAMES: [&str; 3] = ["x", "y", "f"];

/// Random terms of at most `max_nodes` nodes. Binder names come from a small
/// pool so that shadowing and capture situations are frequent.
pub struct TermGen {
    rng: StdRng,
    pub with_operators: bool,
}

impl TermGen {
    pub fn new(seed: u64) -> TermGen {
        TermGen {
            rng: StdRng::seed_from_u64(seed),
            with_operators: true,
        }
    }

    pub fn term(&mut self, max_nodes: usize) -> Expr {
        let mut budget = max_nodes.max(1);
        let mut scope = Vec::new();
        self.go(&mut budget, &mut scope)
    }

    fn leaf(&mut self, scope: &[&'static str]) -> Expr {
        match self.rng.random_range(0..6) {
            0 | 1 if !scope.is_empty() => Expr::var(scope[self.rng.random_range(0..scope.len())]),
            0 => Expr::var("z"),
            1 | 2 => Expr::num(self.rng.random_range(0..4) as f64),
            3 => Expr::bool(self.rng.random()),
            4 => Expr::nil(),
            _ => Expr::string(["a", "b"][self.rng.random_range(0..2)]),
        }
    }

    fn go(&mut self, budget: &mut usize, scope: &mut Vec<&'static str>) -> Expr {
        if *budget <= 1 {
            *budget = budget.saturating_sub(1);
            return self.leaf(scope);
        }
        *budget -= 1;
        let choice = self.rng.random_range(0..14);
        match choice {
            0 | 1 => {
                let x = NAMES[self.rng.random_range(0..NAMES.len())];
                scope.push(x);
                let body = self.go(budget, scope);
                scope.pop();
                Expr::lam(x, body)
            }
            2..=4 => {
                let f = if self.rng.random_bool(0.6) && *budget >= 2 {
                    let x = NAMES[self.rng.random_range(0..NAMES.len())];
                    *budget -= 1;
                    scope.push(x);
                    let body = self.go(budget, scope);
                    scope.pop();
                    Expr::lam(x, body)
                } else {
                    self.go(budget, scope)
                };
                let a = self.go(budget, scope);
                Expr::app(f, a)
            }
            5 => {
                let h = self.go(budget, scope);
                let t = self.go(budget, scope);
                Expr::cons(h, t)
            }
            6 => {
                let s = self.go(budget, scope);
                let n = self.go(budget, scope);
                let c = self.go(budget, scope);
                Expr::ldestr(s, n, c)
            }
            7 => {
                let v = self.go(budget, scope);
                let t = if self.rng.random_bool(0.5) {
                    Expr::tnil()
                } else {
                    self.go(budget, scope)
                };
                Expr::tcons(["a", "b"][self.rng.random_range(0..2)], v, t)
            }
            8 => {
                let s = self.go(budget, scope);
                Expr::tdestr(s, ["a", "b"][self.rng.random_range(0..2)])
            }
            9 => {
                let c = self.go(budget, scope);
                let a = self.go(budget, scope);
                let b = self.go(budget, scope);
                Expr::if_then_else(c, a, b)
            }
            10 => {
                let kind = [
                    FunKind::Add,
                    FunKind::Mul,
                    FunKind::And,
                    FunKind::Or,
                    FunKind::Eq,
                    FunKind::Lt,
                ][self.rng.random_range(0..6)];
                let a = self.go(budget, scope);
                let b = self.go(budget, scope);
                Expr::binop(kind, a, b)
            }
            11 => {
                let a = self.go(budget, scope);
                Expr::fun([FunKind::Not, FunKind::Neg][self.rng.random_range(0..2)], vec![a])
            }
            _ if self.with_operators => {
                if self.rng.random_bool(0.4) || *budget < 3 {
                    Expr::scan(Expr::data_ref(["t", "u"][self.rng.random_range(0..2)]))
                } else {
                    *budget -= 1;
                    scope.push("x");
                    let pred = self.go(budget, scope);
                    scope.pop();
                    let child = self.go(budget, scope);
                    Expr::select(Expr::lam("x", pred), child)
                }
            }
            _ => self.leaf(scope),
        }
    }
}

pub fn omega() -> Expr {
    let w = Expr::lam("w", Expr::app(Expr::var("w"), Expr::var("w")));
    Expr::app(w.clone(), w)
}

// ---------------------------------------------------------------------------
// Reference evaluator
// ---------------------------------------------------------------------------

/// A tabular value as seen by both the reference evaluator and SQLite.
#[derive(Clone, Debug)]
pub enum Cell {
    Num(f64),
    Str(String),
    Null,
}

impl Cell {
    fn key(&self) -> String {
        match self {
            Cell::Num(n) => format!("n{:.6}", n),
            Cell::Str(s) => format!("s{s}"),
            Cell::Null => "null".into(),
        }
    }

    pub fn close_to(&self, other: &Cell) -> bool {
        match (self, other) {
            (Cell::Num(a), Cell::Num(b)) => (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs())),
            (Cell::Str(a), Cell::Str(b)) => a == b,
            (Cell::Null, Cell::Null) => true,
            _ => false,
        }
    }
}

pub type Row = Vec<Cell>;

#[derive(Clone, Debug)]
enum V {
    Num(f64),
    Str(Rc<str>),
    Bool(bool),
    List(Rc<Vec<V>>),
    Tup(Rc<Vec<(Rc<str>, V)>>),
    Closure(Rc<str>, Expr, Env),
    Table(Rc<str>),
}

#[derive(Clone, Debug, Default)]
struct Env(Option<Rc<(Rc<str>, V, Env)>>);

impl Env {
    fn bind(&self, x: &str, v: V) -> Env {
        Env(Some(Rc::new((x.into(), v, self.clone()))))
    }

    fn get(&self, x: &str) -> V {
        let mut cur = &self.0;
        while let Some(node) = cur {
            if &*node.0 == x {
                return node.1.clone();
            }
            cur = &node.2 .0;
        }
        panic!("unbound variable {x}")
    }
}

/// An in-memory database of tables with fixed column order.
pub struct Db {
    pub tables: Vec<(String, Vec<String>, Vec<Row>)>,
}

impl Db {
    fn table(&self, name: &str) -> &(String, Vec<String>, Vec<Row>) {
        self.tables
            .iter()
            .find(|t| t.0 == name)
            .unwrap_or_else(|| panic!("no table {name}"))
    }

    pub fn sqlite(&self) -> rusqlite::Connection {
        let conn = rusqlite::Connection::open_in_memory().unwrap();
        for (name, cols, rows) in &self.tables {
            let decl: Vec<String> = cols.iter().map(|c| format!("\"{c}\"")).collect();
            conn.execute(&format!("CREATE TABLE {name} ({})", decl.join(", ")), [])
                .unwrap();
            let marks = vec!["?"; cols.len()].join(", ");
            let mut stmt = conn.prepare(&format!("INSERT INTO {name} VALUES ({marks})")).unwrap();
            for row in rows {
                let params: Vec<rusqlite::types::Value> = row
                    .iter()
                    .map(|c| match c {
                        Cell::Num(n) => rusqlite::types::Value::Real(*n),
                        Cell::Str(s) => rusqlite::types::Value::Text(s.clone()),
                        Cell::Null => rusqlite::types::Value::Null,
                    })
                    .collect();
                stmt.execute(rusqlite::params_from_iter(params)).unwrap();
            }
        }
        conn
    }

    /// Evaluates a closed QIR term denoting a table.
    pub fn eval(&self, e: &Expr) -> Vec<Row> {
        let v = self.ev(&desugar(e), &Env::default());
        let V::List(rows) = v else { panic!("not a table: {v:?}") };
        rows.iter()
            .map(|r| match r {
                V::Tup(fields) => fields.iter().map(|(_, v)| to_cell(v)).collect(),
                other => panic!("not a row: {other:?}"),
            })
            .collect()
    }

    fn apply(&self, f: V, a: V) -> V {
        match f {
            V::Closure(x, body, env) => self.ev(&body, &env.bind(&x, a)),
            other => panic!("not a function: {other:?}"),
        }
    }

    fn ev(&self, e: &Expr, env: &Env) -> V {
        match e.kind() {
            ExprKind::Var(x) => env.get(x),
            ExprKind::Lam(x, b) => V::Closure(x.as_ref().into(), b.clone(), env.clone()),
            ExprKind::App(f, a) => {
                let f = self.ev(f, env);
                let a = self.ev(a, env);
                self.apply(f, a)
            }
            ExprKind::Const(Value::Number(n)) => V::Num(*n),
            ExprKind::Const(Value::String(s)) => V::Str(s.as_ref().into()),
            ExprKind::Const(Value::Bool(b)) => V::Bool(*b),
            ExprKind::ListNil => V::List(Rc::new(vec![])),
            ExprKind::ListCons(h, t) => {
                let h = self.ev(h, env);
                let V::List(t) = self.ev(t, env) else {
                    panic!("improper list")
                };
                let mut items = vec![h];
                items.extend(t.iter().cloned());
                V::List(Rc::new(items))
            }
            ExprKind::TupNil => V::Tup(Rc::new(vec![])),
            ExprKind::TupCons(l, v, t) => {
                let v = self.ev(v, env);
                let V::Tup(t) = self.ev(t, env) else {
                    panic!("improper tuple")
                };
                let mut fields = vec![(l.as_ref().into(), v)];
                fields.extend(t.iter().filter(|(k, _)| **k != **l).cloned());
                V::Tup(Rc::new(fields))
            }
            ExprKind::ListDestr(s, n, c) => match self.ev(s, env) {
                V::List(items) if items.is_empty() => self.ev(n, env),
                V::List(items) => {
                    let c = self.ev(c, env);
                    let c = self.apply(c, items[0].clone());
                    self.apply(c, V::List(Rc::new(items[1..].to_vec())))
                }
                other => panic!("ldestr on {other:?}"),
            },
            ExprKind::TupDestr(s, l) => match self.ev(s, env) {
                V::Tup(fields) => fields
                    .iter()
                    .find(|(k, _)| **k == **l)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_else(|| panic!("no field {l}")),
                other => panic!("tdestr on {other:?}"),
            },
            ExprKind::ValueFun(FunKind::IfThenElse, args) => match self.ev(&args[0], env) {
                V::Bool(true) => self.ev(&args[1], env),
                V::Bool(false) => self.ev(&args[2], env),
                other => panic!("if on {other:?}"),
            },
            ExprKind::ValueFun(k, args) => {
                let vs: Vec<V> = args.iter().map(|a| self.ev(a, env)).collect();
                prim(*k, &vs)
            }
            ExprKind::Builtin(..) => panic!("aggregate outside of a group"),
            ExprKind::DataRef(t) => V::Table(t.as_ref().into()),
            ExprKind::TruffleRef(_) => panic!("host reference"),
            ExprKind::Operator(op) => self.operator(op.kind(), op.configs(), op.children(), env),
            ExprKind::Sugar(_) => unreachable!("desugared"),
        }
    }

    fn rows(&self, e: &Expr, env: &Env) -> Vec<V> {
        match self.ev(e, env) {
            V::List(items) => items.to_vec(),
            other => panic!("not a table: {other:?}"),
        }
    }

    fn operator(&self, kind: OpKind, cfg: &[Expr], children: &[Expr], env: &Env) -> V {
        let f = |i: usize| self.ev(&cfg[i], env);
        let out = match kind {
            OpKind::Scan => {
                let V::Table(name) = f(0) else {
                    panic!("scan of a non-table")
                };
                let (_, cols, rows) = self.table(&name);
                rows.iter()
                    .map(|r| {
                        V::Tup(Rc::new(
                            cols.iter()
                                .zip(r)
                                .map(|(c, v)| (c.as_str().into(), from_cell(v)))
                                .collect(),
                        ))
                    })
                    .collect()
            }
            OpKind::Select => {
                let p = f(0);
                self.rows(&children[0], env)
                    .into_iter()
                    .filter(|r| matches!(self.apply(p.clone(), r.clone()), V::Bool(true)))
                    .collect()
            }
            OpKind::Project => {
                let p = f(0);
                self.rows(&children[0], env)
                    .into_iter()
                    .map(|r| self.apply(p.clone(), r))
                    .collect()
            }
            OpKind::Sort => {
                let p = f(0);
                let mut keyed: Vec<(V, V)> = self
                    .rows(&children[0], env)
                    .into_iter()
                    .map(|r| (self.apply(p.clone(), r.clone()), r))
                    .collect();
                keyed.sort_by(|a, b| cmp_values(&a.0, &b.0));
                keyed.into_iter().map(|(_, r)| r).collect()
            }
            OpKind::TopK => {
                let V::Num(k) = f(0) else { panic!("limit") };
                self.rows(&children[0], env).into_iter().take(k as usize).collect()
            }
            OpKind::Group => self.group(&cfg[0], &cfg[1], self.rows(&children[0], env), env),
            OpKind::Join => {
                let p = f(0);
                let left = self.rows(&children[0], env);
                let right = self.rows(&children[1], env);
                let mut out = Vec::new();
                for l in &left {
                    for r in &right {
                        let pl = self.apply(p.clone(), l.clone());
                        if matches!(self.apply(pl, r.clone()), V::Bool(true)) {
                            let (V::Tup(a), V::Tup(b)) = (l, r) else {
                                panic!("join of non-rows")
                            };
                            let mut merged = a.to_vec();
                            merged.extend(b.iter().cloned());
                            out.push(V::Tup(Rc::new(merged)));
                        }
                    }
                }
                out
            }
        };
        V::List(Rc::new(out))
    }

    /// Groups by the columns `p."c"` listed by `eq`; each output row holds
    /// the key columns followed by the fields of `agg`.
    fn group(&self, eq: &Expr, agg: &Expr, rows: Vec<V>, env: &Env) -> Vec<V> {
        let ExprKind::Lam(_, spine) = eq.kind() else {
            panic!("group key")
        };
        let mut key_cols = Vec::new();
        let mut cur = spine;
        while let ExprKind::ListCons(h, t) = cur.kind() {
            let ExprKind::TupDestr(_, c) = h.kind() else {
                panic!("group key column")
            };
            key_cols.push(c.clone());
            cur = t;
        }
        let eqf = self.ev(eq, env);
        let mut groups: Vec<(V, Vec<V>)> = Vec::new();
        for r in rows {
            let k = self.apply(eqf.clone(), r.clone());
            match groups.iter_mut().find(|(g, _)| cmp_values(g, &k) == Ordering::Equal) {
                Some((_, members)) => members.push(r),
                None => groups.push((k, vec![r])),
            }
        }
        let ExprKind::Lam(p, body) = agg.kind() else {
            panic!("group aggregate")
        };
        groups
            .into_iter()
            .map(|(k, members)| {
                let V::List(kv) = k else { panic!("key") };
                let mut fields: Vec<(Rc<str>, V)> = key_cols
                    .iter()
                    .map(|c| c.as_ref().into())
                    .zip(kv.iter().cloned())
                    .collect();
                let mut cur = body;
                while let ExprKind::TupCons(l, v, t) = cur.kind() {
                    fields.push((l.as_ref().into(), self.aggregate(p, v, &members, env)));
                    cur = t;
                }
                V::Tup(Rc::new(fields))
            })
            .collect()
    }

    fn aggregate(&self, p: &str, e: &Expr, members: &[V], env: &Env) -> V {
        match e.kind() {
            ExprKind::Builtin(kind, arg) => {
                let xs: Vec<f64> = members
                    .iter()
                    .map(|r| match self.ev(arg, &env.bind(p, r.clone())) {
                        V::Num(n) => n,
                        other => panic!("aggregate of {other:?}"),
                    })
                    .collect();
                let sum: f64 = xs.iter().sum();
                match kind {
                    BuiltinKind::Sum => V::Num(sum),
                    BuiltinKind::Avg => V::Num(sum / xs.len() as f64),
                }
            }
            ExprKind::ValueFun(k, args) => {
                let vs: Vec<V> = args.iter().map(|a| self.aggregate(p, a, members, env)).collect();
                prim(*k, &vs)
            }
            _ => self.ev(e, &env.bind(p, members[0].clone())),
        }
    }
}

fn prim(k: FunKind, vs: &[V]) -> V {
    use FunKind::*;
    match (k, vs) {
        (Neg, [V::Num(a)]) => V::Num(-a),
        (Not, [V::Bool(a)]) => V::Bool(!a),
        (And, [V::Bool(a), V::Bool(b)]) => V::Bool(*a && *b),
        (Or, [V::Bool(a), V::Bool(b)]) => V::Bool(*a || *b),
        (Add, [V::Num(a), V::Num(b)]) => V::Num(a + b),
        (Sub, [V::Num(a), V::Num(b)]) => V::Num(a - b),
        (Mul, [V::Num(a), V::Num(b)]) => V::Num(a * b),
        (Div, [V::Num(a), V::Num(b)]) => V::Num(a / b),
        (Eq, [a, b]) => V::Bool(cmp_values(a, b) == Ordering::Equal),
        (Lt, [a, b]) => V::Bool(cmp_values(a, b) == Ordering::Less),
        (Gt, [a, b]) => V::Bool(cmp_values(a, b) == Ordering::Greater),
        _ => panic!("ill-typed primitive {k:?} on {vs:?}"),
    }
}

fn cmp_values(a: &V, b: &V) -> Ordering {
    match (a, b) {
        (V::Num(a), V::Num(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
        (V::Str(a), V::Str(b)) => a.as_bytes().cmp(b.as_bytes()),
        (V::Bool(a), V::Bool(b)) => a.cmp(b),
        (V::List(a), V::List(b)) => {
            for (x, y) in a.iter().zip(b.iter()) {
                let o = cmp_values(x, y);
                if o != Ordering::Equal {
                    return o;
                }
            }
            a.len().cmp(&b.len())
        }
        _ => panic!("incomparable {a:?} and {b:?}"),
    }
}

fn from_cell(c: &Cell) -> V {
    match c {
        Cell::Num(n) => V::Num(*n),
        Cell::Str(s) => V::Str(s.as_str().into()),
        Cell::Null => panic!("null in a table"),
    }
}

fn to_cell(v: &V) -> Cell {
    match v {
        V::Num(n) if n.is_nan() => Cell::Null,
        V::Num(n) => Cell::Num(*n),
        V::Str(s) => Cell::Str(s.to_string()),
        V::Bool(b) => Cell::Num(if *b { 1.0 } else { 0.0 }),
        other => panic!("not a scalar: {other:?}"),
    }
}

pub fn run_sql(conn: &rusqlite::Connection, sql: &str) -> Vec<Row> {
    let mut stmt = conn.prepare(sql).unwrap_or_else(|e| panic!("{sql}: {e}"));
    let n = stmt.column_count();
    let rows = stmt
        .query_map([], |r| {
            (0..n)
                .map(|i| {
                    Ok(match r.get_ref(i)? {
                        rusqlite::types::ValueRef::Null => Cell::Null,
                        rusqlite::types::ValueRef::Integer(i) => Cell::Num(i as f64),
                        rusqlite::types::ValueRef::Real(x) => Cell::Num(x),
                        rusqlite::types::ValueRef::Text(t) => Cell::Str(String::from_utf8_lossy(t).into()),
                        rusqlite::types::ValueRef::Blob(_) => panic!("blob"),
                    })
                })
                .collect::<Result<Row, _>>()
        })
        .unwrap();
    rows.collect::<Result<_, _>>().unwrap()
}

pub fn same_rows_ordered(a: &[Row], b: &[Row]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.len() == y.len() && x.iter().zip(y).all(|(c, d)| c.close_to(d)))
}

pub fn same_rows_unordered(a: &[Row], b: &[Row]) -> bool {
    let sorted = |rs: &[Row]| {
        let mut v: Vec<Row> = rs.to_vec();
        v.sort_by_key(|r| r.iter().map(Cell::key).collect::<Vec<_>>().join("|"));
        v
    };
    same_rows_ordered(&sorted(a), &sorted(b))
}

// ---------------------------------------------------------------------------
// Test databases
// ---------------------------------------------------------------------------

fn s(x: &str) -> Cell {
    Cell::Str(x.into())
}

fn n(x: f64) -> Cell {
    Cell::Num(x)
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|c| c.to_string()).collect()
}

/// The analytics listing with the table and grouping column names of the
/// QIR program.
pub const ANALYTICS_SQL: &str = "
SELECT
  l_returnflag AS return_flag, l_linestatus AS line_status,
  SUM(l_extended_price) AS sum_base_price,
  SUM(l_extended_price * (1 - l_discount)) AS sum_disc_price,
  SUM(l_extended_price * (1 - l_discount) * (1 + l_tax)) AS sum_charge,
  SUM(l_extended_price) * 0.75 AS sum_real_cost,
  SUM(l_extended_price) * 0.25 AS sum_margin,
  AVG(l_extended_price) AS avg_base_price,
  AVG(l_extended_price * (1 - l_discount)) AS avg_disc_price,
  AVG(l_extended_price * (1 - l_discount) * (1 + l_tax)) AS avg_charge,
  AVG(l_extended_price) * 0.75 AS avg_real_cost,
  AVG(l_extended_price) * 0.25 AS avg_margin
FROM lineitem
GROUP BY l_returnflag, l_linestatus
ORDER BY l_returnflag, l_linestatus";

pub fn lineitem_db() -> Db {
    let data: [(&str, &str, f64, f64, f64); 10] = [
        ("A", "F", 100.0, 0.05, 0.02),
        ("A", "F", 250.5, 0.10, 0.00),
        ("A", "O", 80.0, 0.00, 0.08),
        ("N", "O", 300.0, 0.07, 0.05),
        ("N", "O", 120.25, 0.02, 0.01),
        ("N", "F", 55.0, 0.00, 0.00),
        ("R", "F", 999.99, 0.09, 0.04),
        ("R", "F", 10.0, 0.01, 0.06),
        ("A", "F", 42.0, 0.03, 0.03),
        ("N", "O", 700.0, 0.10, 0.08),
    ];
    Db {
        tables: vec![(
            "lineitem".into(),
            cols(&[
                "l_returnflag",
                "l_linestatus",
                "l_extended_price",
                "l_discount",
                "l_tax",
            ]),
            data.iter()
                .map(|&(f, st, p, d, t)| vec![s(f), s(st), n(p), n(d), n(t)])
                .collect(),
        )],
    }
}

pub const USERS_COLS: [&str; 4] = ["uid", "name", "age", "city"];
pub const ADS_COLS: [&str; 7] = [
    "ad_id",
    "owner",
    "price",
    "category",
    "title",
    "description",
    "timestamp",
];

/// Two 10-row tables with disjoint column names.
pub fn market_db() -> Db {
    let names = ["ann", "bob", "cid", "dee", "eve", "fay", "gus", "hal", "ivy", "jon"];
    let cities = ["paris", "lyon", "nice"];
    let cats = ["cars", "housing", "toys"];
    let users = (0..10)
        .map(|i| {
            vec![
                n(i as f64),
                s(names[i]),
                n(18.0 + ((i * 7) % 23) as f64),
                s(cities[i % 3]),
            ]
        })
        .collect();
    let ads = (0..10)
        .map(|i| {
            vec![
                n(100.0 + i as f64),
                n(((i * 3) % 10) as f64),
                n(5.0 + ((i * 37) % 50) as f64 + if i % 2 == 0 { 0.5 } else { 0.0 }),
                s(cats[(i * 2) % 3]),
                s(&format!("ad {}", (i * 7) % 10)),
                s(&format!("about ad {i}")),
                n(1000.0 + ((i * 13) % 10) as f64),
            ]
        })
        .collect();
    Db {
        tables: vec![
            ("users".into(), cols(&USERS_COLS), users),
            ("ads".into(), cols(&ADS_COLS), ads),
        ],
    }
}

// ---------------------------------------------------------------------------
// Random compatible plans
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ty {
    Num,
    Str,
}

pub type Schema = Vec<(String, Ty)>;

pub fn users_schema() -> Schema {
    vec![
        ("uid".into(), Ty::Num),
        ("name".into(), Ty::Str),
        ("age".into(), Ty::Num),
        ("city".into(), Ty::Str),
    ]
}

pub fn ads_schema() -> Schema {
    vec![
        ("ad_id".into(), Ty::Num),
        ("owner".into(), Ty::Num),
        ("price".into(), Ty::Num),
        ("category".into(), Ty::Str),
        ("title".into(), Ty::Str),
        ("description".into(), Ty::Str),
        ("timestamp".into(), Ty::Num),
    ]
}

/// Random operator trees over [`market_db`] whose every operator is
/// compatible with the SQL capabilities.
pub struct PlanGen {
    rng: StdRng,
    next_label: usize,
}

impl PlanGen {
    pub fn new(seed: u64) -> PlanGen {
        PlanGen {
            rng: StdRng::seed_from_u64(seed),
            next_label: 0,
        }
    }

    /// Returns the plan, its schema and whether SQL fixes its row order,
    /// which holds when the root sorts.
    pub fn plan(&mut self, depth: usize) -> (Expr, Schema, bool) {
        let choice = if depth == 0 { 0 } else { self.rng.random_range(0..8) };
        match choice {
            0 => {
                if self.rng.random_bool(0.5) {
                    (Expr::scan(Expr::data_ref("users")), users_schema(), false)
                } else {
                    (Expr::scan(Expr::data_ref("ads")), ads_schema(), false)
                }
            }
            1 | 2 => {
                let (c, sch, _) = self.plan(depth - 1);
                let p = self.pred(&sch, 2);
                (Expr::select(Expr::lam("t", p), c), sch, false)
            }
            3 => {
                let (c, sch, _) = self.plan(depth - 1);
                let width = self.rng.random_range(1..=3);
                let mut fields = Vec::new();
                let mut out = Vec::new();
                for _ in 0..width {
                    let label = format!("c{}", self.next_label);
                    self.next_label += 1;
                    let (e, ty) = self.scalar(&sch, 1);
                    fields.push((label.clone(), e));
                    out.push((label, ty));
                }
                (Expr::project(Expr::lam("t", Expr::tuple(fields)), c), out, false)
            }
            4 | 5 => {
                let (c, sch, _) = self.plan(depth - 1);
                // Sorting on every column makes the order total up to
                // identical rows.
                let mut keys: Vec<Expr> = sch.iter().map(|(c, _)| col(c)).collect();
                let k = self.rng.random_range(0..keys.len());
                keys.rotate_left(k);
                let sorted = Expr::sort(Expr::lam("t", Expr::list(keys)), c);
                if choice == 5 {
                    let limit = self.rng.random_range(0..8) as f64;
                    (Expr::topk(Expr::num(limit), sorted), sch, true)
                } else {
                    (sorted, sch, true)
                }
            }
            6 => {
                let (c, sch, _) = self.plan(depth - 1);
                let Some((key, _)) = sch.iter().find(|(_, t)| *t == Ty::Str).cloned() else {
                    return (c, sch, false);
                };
                let Some((val, _)) = sch.iter().find(|(_, t)| *t == Ty::Num).cloned() else {
                    return (c, sch, false);
                };
                let s_label = format!("c{}", self.next_label);
                let a_label = format!("c{}", self.next_label + 1);
                self.next_label += 2;
                let agg = Expr::lam(
                    "t",
                    Expr::tuple([
                        (s_label.clone(), Expr::builtin(qir::BuiltinKind::Sum, col(&val))),
                        (a_label.clone(), Expr::builtin(qir::BuiltinKind::Avg, col(&val))),
                    ]),
                );
                let eq = Expr::lam("t", Expr::list([col(&key)]));
                (
                    Expr::group(eq, agg, c),
                    vec![(key, Ty::Str), (s_label, Ty::Num), (a_label, Ty::Num)],
                    false,
                )
            }
            _ => {
                let users = Expr::select(
                    Expr::lam("t", self.pred(&users_schema(), 1)),
                    Expr::scan(Expr::data_ref("users")),
                );
                let ads = Expr::scan(Expr::data_ref("ads"));
                let cond = match self.rng.random_range(0..2) {
                    0 => Expr::binop(FunKind::Eq, dot("a", "uid"), dot("b", "owner")),
                    _ => Expr::binop(
                        FunKind::And,
                        Expr::binop(FunKind::Eq, dot("a", "uid"), dot("b", "owner")),
                        Expr::binop(FunKind::Gt, dot("b", "price"), dot("a", "age")),
                    ),
                };
                let mut sch = users_schema();
                sch.extend(ads_schema());
                (Expr::join(Expr::lam("a", Expr::lam("b", cond)), users, ads), sch, false)
            }
        }
    }

    fn scalar(&mut self, sch: &Schema, depth: usize) -> (Expr, Ty) {
        let (c, ty) = sch[self.rng.random_range(0..sch.len())].clone();
        if ty == Ty::Num && depth > 0 && self.rng.random_bool(0.5) {
            let k = [FunKind::Add, FunKind::Sub, FunKind::Mul][self.rng.random_range(0..3)];
            let (rhs, _) = self.num_operand(sch);
            return (Expr::binop(k, col(&c), rhs), Ty::Num);
        }
        (col(&c), ty)
    }

    fn num_operand(&mut self, sch: &Schema) -> (Expr, Ty) {
        let nums: Vec<&String> = sch.iter().filter(|(_, t)| *t == Ty::Num).map(|(c, _)| c).collect();
        if nums.is_empty() || self.rng.random_bool(0.5) {
            (Expr::num(self.rng.random_range(0..40) as f64 / 2.0), Ty::Num)
        } else {
            (col(nums[self.rng.random_range(0..nums.len())]), Ty::Num)
        }
    }

    fn pred(&mut self, sch: &Schema, depth: usize) -> Expr {
        if depth > 0 && self.rng.random_bool(0.4) {
            let a = self.pred(sch, depth - 1);
            return match self.rng.random_range(0..3) {
                0 => Expr::binop(FunKind::And, a, self.pred(sch, depth - 1)),
                1 => Expr::binop(FunKind::Or, a, self.pred(sch, depth - 1)),
                _ => Expr::fun(FunKind::Not, vec![a]),
            };
        }
        let (lhs, ty) = self.scalar(sch, 1);
        match ty {
            Ty::Num => {
                let (rhs, _) = self.num_operand(sch);
                let k = [FunKind::Eq, FunKind::Lt, FunKind::Gt][self.rng.random_range(0..3)];
                Expr::binop(k, lhs, rhs)
            }
            Ty::Str => {
                let lit = ["paris", "cars", "ann", "ad 3", "toys", "zzz"][self.rng.random_range(0..6)];
                let k = [FunKind::Eq, FunKind::Lt, FunKind::Gt][self.rng.random_range(0..3)];
                Expr::binop(k, lhs, Expr::string(lit))
            }
        }
    }
}

fn col(c: &str) -> Expr {
    dot("t", c)
}

fn dot(v: &str, c: &str) -> Expr {
    Expr::tdestr(Expr::var(v), c)
}

/// Every distinct term reachable from `e` in at most `depth` steps, capped
/// at `cap` terms.
pub fn reachable(e: &Expr, depth: usize, cap: usize) -> HashMap<u128, Expr> {
    let mut seen = HashMap::from([(qir::fingerprint(e), e.clone())]);
    let mut frontier = vec![e.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for t in &frontier {
            for (_, _, r) in qir::reduce::one_step_reducts(t) {
                if seen.len() >= cap {
                    return seen;
                }
                if seen.insert(qir::fingerprint(&r), r.clone()).is_none() {
                    next.push(r);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}
