//! Splitting a term into database queries and a residual host program.

use std::collections::{HashMap, HashSet};

use super::Capabilities;
use crate::ast::{Expr, ExprKind, Name, Sugar};
use crate::measure::operator_compatible;
use crate::reduce::fresh_name;

/// A fragment the backend translated to a query.
#[derive(Clone, Debug, PartialEq)]
pub struct SqlPart {
    pub name: Name,
    pub sql: String,
    pub fragment: Expr,
}

/// `residual` refers to every fragment through a fresh variable. Fragments
/// that bottom out in scans become queries; the others, which read host
/// values, stay as QIR bindings.
#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    pub bindings: Vec<(Name, Expr)>,
    pub sql_parts: Vec<SqlPart>,
    pub residual: Expr,
}

impl Plan {
    /// Plugs every part back into the residual.
    pub fn compose(&self) -> Expr {
        let parts: HashMap<&str, &Expr> = self
            .bindings
            .iter()
            .map(|(n, e)| (&**n, e))
            .chain(self.sql_parts.iter().map(|p| (&*p.name, &p.fragment)))
            .collect();
        plug(&self.residual, &parts)
    }
}

/// Replaces plan variables by their parts without renaming binders: plan
/// variables are never bound.
fn plug(t: &Expr, parts: &HashMap<&str, &Expr>) -> Expr {
    match t.kind() {
        ExprKind::Var(x) => match parts.get(&**x) {
            Some(e) => plug(e, parts),
            None => t.clone(),
        },
        _ => {
            let children = t.children();
            if children.is_empty() {
                return t.clone();
            }
            t.with_children(children.into_iter().map(|c| plug(c, parts)).collect())
        }
    }
}

pub fn emit_plan(caps: &dyn Capabilities, e: &Expr) -> Plan {
    let mut names = HashSet::new();
    e.for_each_node(&mut |_, n| match n.kind() {
        ExprKind::Var(x) | ExprKind::Lam(x, _) => {
            names.insert(x.clone());
        }
        ExprKind::Sugar(s) => {
            if let Sugar::Let(x, ..) | Sugar::LetRec(x, ..) = &**s {
                names.insert(x.clone());
            }
        }
        _ => {}
    });
    let mut b = Builder {
        caps,
        names,
        counter: 0,
        bindings: Vec::new(),
        sql_parts: Vec::new(),
    };
    let residual = b.rewrite(e, false, false);
    Plan {
        bindings: b.bindings,
        sql_parts: b.sql_parts,
        residual,
    }
}

struct Builder<'a> {
    caps: &'a dyn Capabilities,
    names: HashSet<Name>,
    counter: usize,
    bindings: Vec<(Name, Expr)>,
    sql_parts: Vec<SqlPart>,
}

impl Builder<'_> {
    fn fresh(&mut self) -> Name {
        let base = format!("q{}", self.counter);
        self.counter += 1;
        let name: Name = if self.names.contains(base.as_str()) {
            fresh_name(&base, |c| self.names.contains(c))
        } else {
            base.into()
        };
        self.names.insert(name.clone());
        name
    }

    fn compatible(&self, e: &Expr) -> bool {
        e.as_operator().is_some_and(|op| operator_compatible(self.caps, op))
    }

    /// A compatible operator whose child slots all hold such operators.
    fn closed(&self, e: &Expr) -> bool {
        self.compatible(e) && e.as_operator().unwrap().children().iter().all(|c| self.closed(c))
    }

    fn rewrite(&mut self, e: &Expr, joined: bool, in_config: bool) -> Expr {
        let compat = self.compatible(e);
        if compat && !joined && !in_config {
            let name = self.fresh();
            if self.closed(e) {
                if let Ok(sql) = self.caps.emit_fragment(e) {
                    self.sql_parts.push(SqlPart {
                        name: name.clone(),
                        sql,
                        fragment: e.clone(),
                    });
                    return Expr::var(name);
                }
            }
            let inner = self.descend(e, compat, in_config);
            self.bindings.push((name.clone(), inner));
            return Expr::var(name);
        }
        self.descend(e, compat, in_config)
    }

    fn descend(&mut self, e: &Expr, compat: bool, in_config: bool) -> Expr {
        let children = e.children();
        if children.is_empty() {
            return e.clone();
        }
        let n_configs = e.as_operator().map(|op| op.configs().len());
        let new = children
            .into_iter()
            .enumerate()
            .map(|(i, c)| match n_configs {
                Some(n) if i < n => self.rewrite(c, false, true),
                Some(_) => self.rewrite(c, compat, in_config),
                None => self.rewrite(c, false, in_config),
            })
            .collect();
        e.with_children(new)
    }
}
