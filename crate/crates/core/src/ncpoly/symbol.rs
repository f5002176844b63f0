use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

struct Interner {
    names: Vec<String>,
    constant: Vec<bool>,
    index: HashMap<String, u32>,
}

static INTERNER: Lazy<RwLock<Interner>> =
    Lazy::new(|| RwLock::new(Interner { names: Vec::new(), constant: Vec::new(), index: HashMap::new() }));

/// Interned letter name. Constant symbols have vanishing x- and t-derivatives.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

impl Symbol {
    /// Interns `name`, keeping any earlier constant declaration.
    pub fn new(name: &str) -> Symbol {
        if let Some(&i) = INTERNER.read().expect("interner lock").index.get(name) {
            return Symbol(i);
        }
        let mut g = INTERNER.write().expect("interner lock");
        if let Some(&i) = g.index.get(name) {
            return Symbol(i);
        }
        let i = g.names.len() as u32;
        g.names.push(name.to_string());
        g.constant.push(false);
        g.index.insert(name.to_string(), i);
        Symbol(i)
    }

    /// Interns `name` and marks it constant.
    pub fn constant(name: &str) -> Symbol {
        let s = Symbol::new(name);
        INTERNER.write().expect("interner lock").constant[s.0 as usize] = true;
        s
    }

    pub fn name(self) -> String {
        INTERNER.read().expect("interner lock").names[self.0 as usize].clone()
    }

    pub fn is_constant(self) -> bool {
        INTERNER.read().expect("interner lock").constant[self.0 as usize]
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A symbol with `xorder` x-derivatives applied.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub sym: Symbol,
    pub xorder: u32,
}

impl Letter {
    pub fn new(sym: Symbol, xorder: u32) -> Letter {
        Letter { sym, xorder }
    }

    /// Checked constructor rejecting derivatives of constants.
    pub fn checked(sym: Symbol, xorder: u32) -> Result<Letter> {
        if xorder > 0 && sym.is_constant() {
            return Err(Error::ConstantDerivative(sym.name()));
        }
        Ok(Letter { sym, xorder })
    }

    /// Parses `u2`, `q_xx`, `r_t2_x`: a trailing `_x…x` group is the x-order.
    pub fn parse(s: &str) -> Result<Letter> {
        let s = s.trim();
        let valid = |n: &str| {
            !n.is_empty()
                && n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        let (name, xorder) = match s.rsplit_once('_') {
            Some((base, suffix)) if !suffix.is_empty() && suffix.chars().all(|c| c == 'x') => {
                (base, suffix.len() as u32)
            }
            _ => (s, 0),
        };
        if !valid(name) {
            return Err(Error::parse(0, format!("invalid letter `{s}`")));
        }
        Letter::checked(Symbol::new(name), xorder)
    }

    pub(crate) fn sort_key(&self) -> (String, u32) {
        (self.sym.name(), self.xorder)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.xorder == 0 {
            write!(f, "{}", self.sym)
        } else {
            write!(f, "{}_{}", self.sym, "x".repeat(self.xorder as usize))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_text_forms() {
        let l = Letter::parse("q_xxx").unwrap();
        assert_eq!(l.sym.name(), "q");
        assert_eq!(l.xorder, 3);
        assert_eq!(l.to_string(), "q_xxx");
        let t = Letter::parse("r_t2_x").unwrap();
        assert_eq!(t.sym.name(), "r_t2");
        assert_eq!(t.xorder, 1);
        assert_eq!(Letter::parse("u2").unwrap().xorder, 0);
        assert!(Letter::parse("2u").is_err());
        Symbol::constant("J");
        assert_eq!(Letter::parse("J_x"), Err(Error::ConstantDerivative("J".into())));
    }
}
