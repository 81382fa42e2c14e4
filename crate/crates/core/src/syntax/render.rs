//! Surface-syntax rendering. `{}` is compact (`@aver(0.7,0.5)`), `{:#}`
//! separates arguments with `", "`. Both reparse to the same AST.

use core::fmt::{self, Display, Formatter, Write};

use super::{Atom, Body, ConnName, Expr, Program, Rule, Term, Weight};

fn sep(f: &Formatter<'_>) -> &'static str {
    if f.alternate() {
        ", "
    } else {
        ","
    }
}

fn list<T: Display>(f: &mut Formatter<'_>, items: &[T]) -> fmt::Result {
    let sep = sep(f);
    let alt = f.alternate();
    f.write_char('(')?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        if alt {
            write!(f, "{item:#}")?;
        } else {
            write!(f, "{item}")?;
        }
    }
    f.write_char(')')
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) => {
                f.write_str(name)?;
                if args.is_empty() {
                    Ok(())
                } else {
                    list(f, args)
                }
            }
        }
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if self.args.is_empty() {
            Ok(())
        } else {
            list(f, &self.args)
        }
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Value(v) => write!(f, "{v}"),
            Expr::SymValue(s) => write!(f, "#{s}"),
            Expr::Atom(a) => {
                if f.alternate() {
                    write!(f, "{a:#}")
                } else {
                    write!(f, "{a}")
                }
            }
            Expr::App { kind, name, args } => {
                match name {
                    ConnName::Concrete(l) => write!(f, "{}{l}", kind.sigil())?,
                    ConnName::Symbolic(s) => write!(f, "#{}{s}", kind.sigil())?,
                }
                list(f, args)
            }
        }
    }
}

impl Display for Weight {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Value(v) => write!(f, "{v}"),
            Weight::Symbolic(s) => write!(f, "#{s}"),
        }
    }
}

impl Display for Body {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.implication {
            ConnName::Concrete(l) => write!(f, "<{l}| ")?,
            ConnName::Symbolic(s) => write!(f, "<#{s}| ")?,
        }
        if f.alternate() {
            write!(f, "{:#}", self.expr)
        } else {
            write!(f, "{}", self.expr)
        }
    }
}

impl Display for Rule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if f.alternate() {
            write!(f, "{:#}", self.head)?;
        } else {
            write!(f, "{}", self.head)?;
        }
        if let Some(body) = &self.body {
            if f.alternate() {
                write!(f, " {body:#}")?;
            } else {
                write!(f, " {body}")?;
            }
        }
        write!(f, " with {}.", self.weight)
    }
}

impl Display for Program {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            if f.alternate() {
                writeln!(f, "{rule:#}")?;
            } else {
                writeln!(f, "{rule}")?;
            }
        }
        Ok(())
    }
}
