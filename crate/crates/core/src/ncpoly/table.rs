use std::collections::BTreeMap;
use std::sync::RwLock;

use super::{Letter, NCPoly, Symbol};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Declared `t_n`-derivatives of the generators for one flow.
///
/// The derivative of a letter with x-order k is the k-th x-derivative of the
/// generator's entry, so `∂_{t_n}` and `∂_x` commute structurally. Constants
/// map to zero.
pub struct DerivationTable<S: Scalar> {
    flow: usize,
    entries: BTreeMap<Symbol, NCPoly<S>>,
    cache: RwLock<BTreeMap<Letter, NCPoly<S>>>,
}

impl<S: Scalar> Clone for DerivationTable<S> {
    fn clone(&self) -> Self {
        DerivationTable { flow: self.flow, entries: self.entries.clone(), cache: RwLock::new(BTreeMap::new()) }
    }
}

impl<S: Scalar> std::fmt::Debug for DerivationTable<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DerivationTable").field("flow", &self.flow).field("entries", &self.entries).finish()
    }
}

impl<S: Scalar> DerivationTable<S> {
    pub fn new(flow: usize) -> Self {
        DerivationTable { flow, entries: BTreeMap::new(), cache: RwLock::new(BTreeMap::new()) }
    }

    pub fn from_entries<'a, I>(flow: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, NCPoly<S>)>,
    {
        let mut t = DerivationTable::new(flow);
        for (name, p) in entries {
            t.insert(Symbol::new(name), p);
        }
        t
    }

    pub fn flow(&self) -> usize {
        self.flow
    }

    pub fn insert(&mut self, sym: Symbol, p: NCPoly<S>) {
        self.entries.insert(sym, p);
        self.cache.get_mut().expect("cache lock").clear();
    }

    pub fn get(&self, sym: Symbol) -> Option<&NCPoly<S>> {
        self.entries.get(&sym)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Symbol, &NCPoly<S>)> {
        self.entries.iter()
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        self.entries.contains_key(&sym)
    }

    /// `∂_{t_n}` of a single letter.
    pub fn letter_derivative(&self, l: Letter) -> Result<NCPoly<S>> {
        if l.sym.is_constant() {
            return Ok(NCPoly::zero());
        }
        if let Some(p) = self.cache.read().expect("cache lock").get(&l) {
            return Ok(p.clone());
        }
        let base = self
            .entries
            .get(&l.sym)
            .ok_or_else(|| Error::MissingTableEntry { symbol: l.sym.name(), flow: self.flow })?;
        let p = base.ddx_n(l.xorder);
        self.cache.write().expect("cache lock").insert(l, p.clone());
        Ok(p)
    }

    /// `∂_{t_n}` extended to polynomials by the Leibniz rule.
    pub fn ddt(&self, p: &NCPoly<S>) -> Result<NCPoly<S>> {
        let mut out = p.zero_like_poly();
        for (w, c) in p.terms() {
            for i in 0..w.len() {
                let d = self.letter_derivative(w[i])?;
                if d.is_zero() {
                    continue;
                }
                let left = NCPoly::from_word(&w[..i], c.clone()).with_rules(p.rules());
                let right = NCPoly::from_word(&w[i + 1..], S::one()).with_rules(p.rules());
                out.add_assign(&left.mul(&d).mul(&right));
            }
        }
        Ok(out)
    }
}

impl<S: Scalar> NCPoly<S> {
    fn zero_like_poly(&self) -> Self {
        NCPoly::zero().with_rules(self.rules())
    }
}

/// `∂_{t_n}` of `p` through `table`.
pub fn ddt<S: Scalar>(p: &NCPoly<S>, table: &DerivationTable<S>) -> Result<NCPoly<S>> {
    table.ddt(p)
}

/// Simultaneous letter substitution.
///
/// A rule for a bare symbol also covers its x-derivatives (the image of
/// `s^{(k)}` is the k-th x-derivative of the image of `s`); explicit rules for
/// derivative letters must agree with that.
#[derive(Clone, Debug, Default)]
pub struct Substitution<S: Scalar> {
    rules: BTreeMap<Letter, NCPoly<S>>,
}

impl<S: Scalar> Substitution<S> {
    pub fn new<'a, I>(rules: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, NCPoly<S>)>,
    {
        let mut out = BTreeMap::new();
        for (k, v) in rules {
            out.insert(Letter::parse(k)?, v);
        }
        Self::from_letters(out)
    }

    pub fn from_letters(rules: BTreeMap<Letter, NCPoly<S>>) -> Result<Self> {
        for (a, pa) in &rules {
            for (b, pb) in &rules {
                if a.sym == b.sym && a.xorder < b.xorder && pa.ddx_n(b.xorder - a.xorder) != *pb {
                    return Err(Error::InconsistentRules(b.to_string()));
                }
            }
        }
        Ok(Substitution { rules })
    }

    pub fn insert(&mut self, l: Letter, p: NCPoly<S>) -> Result<()> {
        let mut next = self.rules.clone();
        next.insert(l, p);
        *self = Self::from_letters(next)?;
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Image of one letter, `None` when the letter is left alone.
    pub fn image(&self, l: Letter) -> Result<Option<NCPoly<S>>> {
        if let Some(p) = self.rules.get(&l) {
            return Ok(Some(p.clone()));
        }
        let lower = self.rules.range(Letter::new(l.sym, 0)..Letter::new(l.sym, l.xorder)).next_back();
        match lower {
            Some((base, p)) => Ok(Some(p.ddx_n(l.xorder - base.xorder))),
            None => Ok(None),
        }
    }
}
