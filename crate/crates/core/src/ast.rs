//! The term algebra: values, expressions, operators and addressing paths.
//!
//! Terms are immutable and reference counted, so cloning an [`Expr`] is cheap
//! and subterms are shared between a term and its reducts. Every node may
//! carry a provenance identifier, which is only meaningful for occurrence
//! tracking (see [`crate::reduce::annotate`]).

use std::fmt;
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};

use crate::error::Error;

/// Variable names and tuple labels.
pub type Name = Arc<str>;

/// Provenance identifier attached to a node of an annotated term.
pub type NodeId = u32;

/// A QIR data object.
#[derive(Clone, Debug)]
pub enum Value {
    Number(f64),
    String(Arc<str>),
    Bool(bool),
}

impl Value {
    /// Structural identity: numbers compare by bit pattern, so `NaN` is
    /// identical to itself. Used by term comparison, never by evaluation.
    pub fn identical(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Number(a), Value::Number(b)) => a.to_bits() == b.to_bits(),
            (Value::String(a), Value::String(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            _ => false,
        }
    }
}

/// IEEE equality on numbers (`NaN != NaN`).
impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Number(a), Value::Number(b)) => a == b,
            (Value::String(a), Value::String(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            _ => false,
        }
    }
}

/// Primitive functions on values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunKind {
    Neg,
    And,
    Or,
    Not,
    Eq,
    Lt,
    Gt,
    Add,
    Sub,
    Mul,
    Div,
    IfThenElse,
}

impl FunKind {
    pub const ALL: [FunKind; 12] = [
        FunKind::Neg,
        FunKind::And,
        FunKind::Or,
        FunKind::Not,
        FunKind::Eq,
        FunKind::Lt,
        FunKind::Gt,
        FunKind::Add,
        FunKind::Sub,
        FunKind::Mul,
        FunKind::Div,
        FunKind::IfThenElse,
    ];

    pub fn arity(self) -> usize {
        match self {
            FunKind::Neg | FunKind::Not => 1,
            FunKind::IfThenElse => 3,
            _ => 2,
        }
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(self, FunKind::Add | FunKind::Sub | FunKind::Mul | FunKind::Div)
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, FunKind::Eq | FunKind::Lt | FunKind::Gt)
    }
}

/// Aggregation builtins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinKind {
    Avg,
    Sum,
}

/// The seven querying primitives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    Scan,
    Select,
    Project,
    Sort,
    TopK,
    Group,
    Join,
}

impl OpKind {
    pub const ALL: [OpKind; 7] = [
        OpKind::Scan,
        OpKind::Select,
        OpKind::Project,
        OpKind::Sort,
        OpKind::TopK,
        OpKind::Group,
        OpKind::Join,
    ];

    pub fn config_arity(self) -> usize {
        match self {
            OpKind::Group => 2,
            _ => 1,
        }
    }

    pub fn child_arity(self) -> usize {
        match self {
            OpKind::Scan => 0,
            OpKind::Join => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Scan => "Scan",
            OpKind::Select => "Select",
            OpKind::Project => "Project",
            OpKind::Sort => "Sort",
            OpKind::TopK => "TopK",
            OpKind::Group => "Group",
            OpKind::Join => "Join",
        }
    }

    pub fn from_name(name: &str) -> Option<OpKind> {
        OpKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An operator with its configuration and child expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorNode {
    kind: OpKind,
    configs: Vec<Expr>,
    children: Vec<Expr>,
}

impl OperatorNode {
    pub fn new(kind: OpKind, configs: Vec<Expr>, children: Vec<Expr>) -> Result<Self, Error> {
        if configs.len() != kind.config_arity() || children.len() != kind.child_arity() {
            return Err(Error::Arity {
                kind,
                configs: configs.len(),
                children: children.len(),
            });
        }
        Ok(OperatorNode {
            kind,
            configs,
            children,
        })
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn configs(&self) -> &[Expr] {
        &self.configs
    }

    pub fn children(&self) -> &[Expr] {
        &self.children
    }
}

/// Surface-only constructs, removed by [`crate::sugar::desugar`].
#[derive(Clone, Debug, PartialEq)]
pub enum Sugar {
    Let(Name, Expr, Expr),
    LetRec(Name, Expr, Expr),
    Dot(Expr, Name),
    Not(Expr),
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Var(Name),
    Lam(Name, Expr),
    App(Expr, Expr),
    Const(Value),
    ListNil,
    ListCons(Expr, Expr),
    TupNil,
    TupCons(Name, Expr, Expr),
    ListDestr(Expr, Expr, Expr),
    TupDestr(Expr, Name),
    ValueFun(FunKind, Vec<Expr>),
    Builtin(BuiltinKind, Expr),
    DataRef(Name),
    TruffleRef(u64),
    Operator(OperatorNode),
    Sugar(Box<Sugar>),
}

impl PartialEq for ExprKind {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (self, other) {
            (Var(a), Var(b)) => a == b,
            (Lam(x, a), Lam(y, b)) => x == y && a == b,
            (App(f, a), App(g, b)) => f == g && a == b,
            (Const(a), Const(b)) => a.identical(b),
            (ListNil, ListNil) | (TupNil, TupNil) => true,
            (ListCons(h, t), ListCons(h2, t2)) => h == h2 && t == t2,
            (TupCons(l, v, t), TupCons(l2, v2, t2)) => l == l2 && v == v2 && t == t2,
            (ListDestr(a, b, c), ListDestr(a2, b2, c2)) => a == a2 && b == b2 && c == c2,
            (TupDestr(a, l), TupDestr(b, l2)) => a == b && l == l2,
            (ValueFun(k, a), ValueFun(k2, b)) => k == k2 && a == b,
            (Builtin(k, a), Builtin(k2, b)) => k == k2 && a == b,
            (DataRef(a), DataRef(b)) => a == b,
            (TruffleRef(a), TruffleRef(b)) => a == b,
            (Operator(a), Operator(b)) => a == b,
            (Sugar(a), Sugar(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Debug)]
struct Node {
    kind: ExprKind,
    id: Option<NodeId>,
    sugared: bool,
}

impl Node {
    fn new(kind: ExprKind, id: Option<NodeId>) -> Node {
        let sugared = matches!(kind, ExprKind::Sugar(_)) || children_of(&kind).iter().any(|c| c.0.sugared);
        Node { kind, id, sugared }
    }
}

/// The direct subterms of a node.
pub type Children<'a> = SmallVec<[&'a Expr; 3]>;

fn children_of(kind: &ExprKind) -> Children<'_> {
    use ExprKind::*;
    match kind {
        Var(_) | Const(_) | ListNil | TupNil | DataRef(_) | TruffleRef(_) => smallvec![],
        Lam(_, b) => smallvec![b],
        App(f, a) => smallvec![f, a],
        ListCons(h, t) => smallvec![h, t],
        TupCons(_, v, t) => smallvec![v, t],
        ListDestr(s, n, c) => smallvec![s, n, c],
        TupDestr(s, _) => smallvec![s],
        ValueFun(_, args) => args.iter().collect(),
        Builtin(_, a) => smallvec![a],
        Operator(op) => op.configs.iter().chain(op.children.iter()).collect(),
        Sugar(s) => match &**s {
            self::Sugar::Let(_, d, b) | self::Sugar::LetRec(_, d, b) => smallvec![d, b],
            self::Sugar::Dot(e, _) | self::Sugar::Not(e) => smallvec![e],
        },
    }
}

/// A QIR term. Equality is exact structural equality, identifiers included;
/// use [`crate::alpha::alpha_eq`] to compare up to bound-variable renaming.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.id == other.0.id && self.0.kind == other.0.kind)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print(self))
    }
}

impl From<ExprKind> for Expr {
    fn from(kind: ExprKind) -> Self {
        Expr(Arc::new(Node::new(kind, None)))
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        kind.into()
    }

    pub fn with_id(kind: ExprKind, id: Option<NodeId>) -> Self {
        Expr(Arc::new(Node::new(kind, id)))
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0.kind
    }

    pub fn id(&self) -> Option<NodeId> {
        self.0.id
    }

    /// Same node with a different identifier.
    pub fn set_id(&self, id: Option<NodeId>) -> Expr {
        Expr::with_id(self.0.kind.clone(), id)
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    // Constructors.

    pub fn var(name: impl Into<Name>) -> Expr {
        ExprKind::Var(name.into()).into()
    }

    pub fn lam(param: impl Into<Name>, body: Expr) -> Expr {
        ExprKind::Lam(param.into(), body).into()
    }

    pub fn app(f: Expr, arg: Expr) -> Expr {
        ExprKind::App(f, arg).into()
    }

    /// Left-nested application `f a1 a2 ...`.
    pub fn apps(f: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
        args.into_iter().fold(f, Expr::app)
    }

    pub fn constant(v: Value) -> Expr {
        ExprKind::Const(v).into()
    }

    pub fn num(n: f64) -> Expr {
        Expr::constant(Value::Number(n))
    }

    pub fn string(s: impl Into<Arc<str>>) -> Expr {
        Expr::constant(Value::String(s.into()))
    }

    pub fn bool(b: bool) -> Expr {
        Expr::constant(Value::Bool(b))
    }

    pub fn nil() -> Expr {
        ExprKind::ListNil.into()
    }

    pub fn cons(head: Expr, tail: Expr) -> Expr {
        ExprKind::ListCons(head, tail).into()
    }

    /// A `ListCons` chain ending in `ListNil`.
    pub fn list(items: impl IntoIterator<Item = Expr, IntoIter: DoubleEndedIterator>) -> Expr {
        items.into_iter().rev().fold(Expr::nil(), |t, h| Expr::cons(h, t))
    }

    pub fn tnil() -> Expr {
        ExprKind::TupNil.into()
    }

    pub fn tcons(label: impl Into<Name>, value: Expr, tail: Expr) -> Expr {
        ExprKind::TupCons(label.into(), value, tail).into()
    }

    /// A `TupCons` chain ending in `TupNil`.
    pub fn tuple<L: Into<Name>>(fields: impl IntoIterator<Item = (L, Expr), IntoIter: DoubleEndedIterator>) -> Expr {
        fields
            .into_iter()
            .rev()
            .fold(Expr::tnil(), |t, (l, v)| Expr::tcons(l, v, t))
    }

    pub fn ldestr(scrutinee: Expr, nil_case: Expr, cons_case: Expr) -> Expr {
        ExprKind::ListDestr(scrutinee, nil_case, cons_case).into()
    }

    pub fn tdestr(scrutinee: Expr, label: impl Into<Name>) -> Expr {
        ExprKind::TupDestr(scrutinee, label.into()).into()
    }

    /// Panics when the argument count does not match the kind's arity.
    pub fn fun(kind: FunKind, args: Vec<Expr>) -> Expr {
        assert_eq!(args.len(), kind.arity(), "arity mismatch for {kind:?}");
        ExprKind::ValueFun(kind, args).into()
    }

    pub fn binop(kind: FunKind, a: Expr, b: Expr) -> Expr {
        Expr::fun(kind, vec![a, b])
    }

    pub fn if_then_else(c: Expr, a: Expr, b: Expr) -> Expr {
        Expr::fun(FunKind::IfThenElse, vec![c, a, b])
    }

    pub fn builtin(kind: BuiltinKind, arg: Expr) -> Expr {
        ExprKind::Builtin(kind, arg).into()
    }

    pub fn data_ref(table: impl Into<Name>) -> Expr {
        ExprKind::DataRef(table.into()).into()
    }

    pub fn truffle(id: u64) -> Expr {
        ExprKind::TruffleRef(id).into()
    }

    pub fn operator(op: OperatorNode) -> Expr {
        ExprKind::Operator(op).into()
    }

    /// Panics on arity mismatch; use [`OperatorNode::new`] for checked input.
    pub fn op(kind: OpKind, configs: Vec<Expr>, children: Vec<Expr>) -> Expr {
        match OperatorNode::new(kind, configs, children) {
            Ok(op) => Expr::operator(op),
            Err(e) => panic!("{e}"),
        }
    }

    pub fn scan(table: Expr) -> Expr {
        Expr::op(OpKind::Scan, vec![table], vec![])
    }

    pub fn select(filter: Expr, input: Expr) -> Expr {
        Expr::op(OpKind::Select, vec![filter], vec![input])
    }

    pub fn project(format: Expr, input: Expr) -> Expr {
        Expr::op(OpKind::Project, vec![format], vec![input])
    }

    pub fn sort(comp: Expr, input: Expr) -> Expr {
        Expr::op(OpKind::Sort, vec![comp], vec![input])
    }

    pub fn topk(limit: Expr, input: Expr) -> Expr {
        Expr::op(OpKind::TopK, vec![limit], vec![input])
    }

    pub fn group(eq: Expr, agg: Expr, input: Expr) -> Expr {
        Expr::op(OpKind::Group, vec![eq, agg], vec![input])
    }

    pub fn join(filter: Expr, left: Expr, right: Expr) -> Expr {
        Expr::op(OpKind::Join, vec![filter], vec![left, right])
    }

    pub fn let_in(name: impl Into<Name>, def: Expr, body: Expr) -> Expr {
        ExprKind::Sugar(Box::new(Sugar::Let(name.into(), def, body))).into()
    }

    pub fn let_rec(name: impl Into<Name>, def: Expr, body: Expr) -> Expr {
        ExprKind::Sugar(Box::new(Sugar::LetRec(name.into(), def, body))).into()
    }

    pub fn dot(e: Expr, label: impl Into<Name>) -> Expr {
        ExprKind::Sugar(Box::new(Sugar::Dot(e, label.into()))).into()
    }

    pub fn not_sugar(e: Expr) -> Expr {
        ExprKind::Sugar(Box::new(Sugar::Not(e))).into()
    }

    // Structure.

    pub fn as_var(&self) -> Option<&Name> {
        match self.kind() {
            ExprKind::Var(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_operator(&self) -> Option<&OperatorNode> {
        match self.kind() {
            ExprKind::Operator(op) => Some(op),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self.kind() {
            ExprKind::Const(Value::Bool(b)) => Some(*b),
            _ => None,
        }
    }

    pub fn is_operator(&self) -> bool {
        matches!(self.kind(), ExprKind::Operator(_))
    }

    /// Immediate subterms in the canonical child order. Operators list their
    /// configurations first, then their children.
    pub fn children(&self) -> Children<'_> {
        children_of(self.kind())
    }

    pub fn child(&self, index: usize) -> Option<&Expr> {
        use ExprKind::*;
        match self.kind() {
            Lam(_, b) => (index == 0).then_some(b),
            App(f, a) => match index {
                0 => Some(f),
                1 => Some(a),
                _ => None,
            },
            ValueFun(_, args) => args.get(index),
            Operator(op) => {
                let n = op.configs.len();
                if index < n {
                    op.configs.get(index)
                } else {
                    op.children.get(index - n)
                }
            }
            _ => self.children().get(index).copied(),
        }
    }

    /// Rebuilds this node with new children (same count and order as
    /// [`Expr::children`]), keeping its identifier.
    pub fn with_children(&self, mut new: Vec<Expr>) -> Expr {
        use ExprKind::*;
        let expected = self.children().len();
        assert_eq!(new.len(), expected, "child count mismatch");
        let kind = match self.kind() {
            k @ (Var(_) | Const(_) | ListNil | TupNil | DataRef(_) | TruffleRef(_)) => k.clone(),
            Lam(x, _) => Lam(x.clone(), new.pop().unwrap()),
            App(..) => {
                let a = new.pop().unwrap();
                App(new.pop().unwrap(), a)
            }
            ListCons(..) => {
                let t = new.pop().unwrap();
                ListCons(new.pop().unwrap(), t)
            }
            TupCons(l, ..) => {
                let t = new.pop().unwrap();
                TupCons(l.clone(), new.pop().unwrap(), t)
            }
            ListDestr(..) => {
                let c = new.pop().unwrap();
                let n = new.pop().unwrap();
                ListDestr(new.pop().unwrap(), n, c)
            }
            TupDestr(_, l) => TupDestr(new.pop().unwrap(), l.clone()),
            ValueFun(k, _) => ValueFun(*k, new),
            Builtin(k, _) => Builtin(*k, new.pop().unwrap()),
            Operator(op) => {
                let children = new.split_off(op.configs.len());
                Operator(OperatorNode {
                    kind: op.kind,
                    configs: new,
                    children,
                })
            }
            Sugar(s) => {
                let s = match &**s {
                    self::Sugar::Let(x, ..) => {
                        let b = new.pop().unwrap();
                        self::Sugar::Let(x.clone(), new.pop().unwrap(), b)
                    }
                    self::Sugar::LetRec(x, ..) => {
                        let b = new.pop().unwrap();
                        self::Sugar::LetRec(x.clone(), new.pop().unwrap(), b)
                    }
                    self::Sugar::Dot(_, l) => self::Sugar::Dot(new.pop().unwrap(), l.clone()),
                    self::Sugar::Not(_) => self::Sugar::Not(new.pop().unwrap()),
                };
                Sugar(Box::new(s))
            }
        };
        Expr::with_id(kind, self.id())
    }

    /// Number of nodes in the term.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Expr::size).sum::<usize>()
    }

    pub fn contains_sugar(&self) -> bool {
        self.0.sugared
    }

    /// The subterm addressed by `path`, if any.
    pub fn at(&self, path: &Path) -> Option<&Expr> {
        let mut cur = self;
        for &i in path.iter() {
            cur = cur.child(i)?;
        }
        Some(cur)
    }

    pub fn at_checked(&self, path: &Path) -> Result<&Expr, Error> {
        self.at(path).ok_or_else(|| Error::NoSuchSubexpression(path.clone()))
    }

    /// Replaces the subterm at `path` by `new`, rebuilding the spine.
    pub fn replace_at(&self, path: &Path, new: Expr) -> Result<Expr, Error> {
        fn go(e: &Expr, path: &[usize], new: Expr) -> Option<Expr> {
            let Some((&first, rest)) = path.split_first() else {
                return Some(new);
            };
            let children = e.children();
            let replaced = go(children.get(first)?, rest, new)?;
            let mut owned: Vec<Expr> = children.into_iter().cloned().collect();
            owned[first] = replaced;
            Some(e.with_children(owned))
        }
        go(self, path.as_slice(), new).ok_or_else(|| Error::NoSuchSubexpression(path.clone()))
    }

    /// Removes every provenance identifier.
    pub fn strip_ids(&self) -> Expr {
        let children: Vec<Expr> = self.children().into_iter().map(Expr::strip_ids).collect();
        self.with_children(children).set_id(None)
    }

    /// Visits every node in pre-order (node, then children left to right).
    pub fn for_each_node<'a>(&'a self, f: &mut impl FnMut(&Path, &'a Expr)) {
        fn go<'a>(e: &'a Expr, path: &mut Path, f: &mut impl FnMut(&Path, &'a Expr)) {
            f(path, e);
            for (i, c) in e.children().into_iter().enumerate() {
                path.push(i);
                go(c, path, f);
                path.pop();
            }
        }
        go(self, &mut Path::root(), f);
    }

    /// Paths of every node, pre-order.
    pub fn paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        self.for_each_node(&mut |p, _| out.push(p.clone()));
        out
    }

    /// Paths of every operator node, depth-first left-to-right.
    pub fn operator_paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        self.for_each_node(&mut |p, e| {
            if e.is_operator() {
                out.push(p.clone())
            }
        });
        out
    }
}

/// Address of a subterm: child indices from the root, in the order of
/// [`Expr::children`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn new(steps: Vec<usize>) -> Path {
        Path(steps)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, i: usize) {
        self.0.push(i)
    }

    pub fn pop(&mut self) -> Option<usize> {
        self.0.pop()
    }

    pub fn child(&self, i: usize) -> Path {
        let mut p = self.clone();
        p.push(i);
        p
    }

    /// Parent path and the index of this node within it.
    pub fn split_last(&self) -> Option<(Path, usize)> {
        let (&last, init) = self.0.split_last()?;
        Some((Path(init.to_vec()), last))
    }

    pub fn join(&self, rest: &Path) -> Path {
        let mut p = self.clone();
        p.0.extend_from_slice(&rest.0);
        p
    }

    pub fn starts_with(&self, prefix: &Path) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// The remainder of this path below `prefix`.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Path(s.to_vec()))
    }
}

impl From<Vec<usize>> for Path {
    fn from(v: Vec<usize>) -> Self {
        Path(v)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}
