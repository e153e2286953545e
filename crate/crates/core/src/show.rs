//! Display with source variable names.
//!
//! Variables have no names of their own; a [`VarNames`] table maps ids to
//! the names they had in the input (or that canonical renaming gave them).

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use crate::subst::Substitution;
use crate::terms::{Atom, Term, Var};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarNames {
    names: BTreeMap<Var, String>,
}

impl VarNames {
    pub fn new() -> Self {
        VarNames::default()
    }

    pub fn insert(&mut self, v: Var, name: impl Into<String>) {
        self.names.insert(v, name.into());
    }

    pub fn get(&self, v: Var) -> Option<&str> {
        self.names.get(&v).map(String::as_str)
    }

    pub fn extend(&mut self, other: &VarNames) {
        for (v, n) in &other.names {
            self.names.insert(*v, n.clone());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &str)> {
        self.names.iter().map(|(v, n)| (*v, n.as_str()))
    }

    fn write_var(&self, f: &mut fmt::Formatter<'_>, v: Var) -> fmt::Result {
        match self.get(v) {
            Some(n) => f.write_str(n),
            None if v.is_reserved() => write!(f, "_U{}", v.id()),
            None => write!(f, "_G{}", v.id()),
        }
    }
}

/// Pairs a value with the name table used to print it.
pub struct Show<'a, T: ?Sized> {
    item: &'a T,
    names: &'a VarNames,
}

pub fn show<'a, T: ?Sized>(item: &'a T, names: &'a VarNames) -> Show<'a, T> {
    Show { item, names }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, names: &VarNames) -> fmt::Result {
    match t {
        Term::Var(v) => names.write_var(f, *v),
        Term::App(g, args) => {
            f.write_str(g.name())?;
            write_args(f, args, names)
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term], names: &VarNames) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write_term(f, a, names)?;
    }
    f.write_str(")")
}

impl fmt::Display for Show<'_, Term> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.item, self.names)
    }
}

impl fmt::Display for Show<'_, Atom> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.item.predicate().name())?;
        write_args(f, self.item.args(), self.names)
    }
}

impl fmt::Display for Show<'_, Var> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.names.write_var(f, *self.item)
    }
}

/// `{X/t, Y/s}` with bindings in variable-id order, `id` when empty.
impl fmt::Display for Show<'_, Substitution> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bindings(f, self.item.iter(), self.names)
    }
}

pub(crate) fn write_bindings<'b>(
    f: &mut fmt::Formatter<'_>,
    bindings: impl Iterator<Item = (Var, &'b Term)>,
    names: &VarNames,
) -> fmt::Result {
    let mut first = true;
    for (v, t) in bindings {
        f.write_str(if first { "{" } else { ", " })?;
        first = false;
        names.write_var(f, v)?;
        f.write_str("/")?;
        write_term(f, t, names)?;
    }
    if first {
        f.write_str("id")
    } else {
        f.write_str("}")
    }
}

static NO_NAMES: VarNames = VarNames {
    names: BTreeMap::new(),
};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, &NO_NAMES)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        show(self, &NO_NAMES).fmt(f)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bindings(f, self.iter(), &NO_NAMES)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::build::*;
    use crate::terms::Namespace;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn prints_with_and_without_names() {
        let mut names = VarNames::new();
        let x = Var::new(0, Namespace::Ordinary);
        names.insert(x, "X");
        let t = f("f", vec![v(0), f("g", vec![c("b")]), u(3), v(4)]);
        assert_eq!(show(&t, &names).to_string(), "f(X,g(b),_U3,_G4)");
        assert_eq!(atom("p", vec![]).to_string(), "p");
        assert_eq!(Substitution::new().to_string(), "id");
    }
}
