//! Noncommutative differential polynomials.
//!
//! An [`NCPoly`] is a finite combination of words in derivative-indexed
//! letters `name^{(k)}`. The empty word is the unit `I`. Products are
//! normalized by a pluggable [`Rules`] set, which is how the reduced algebras
//! (H² = I with H anticommuting, or a fully commutative coefficient ring)
//! are realized without a general rewriting engine.

mod emit;
mod parse;
mod symbol;
mod table;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ring::RingElem;
use crate::scalar::Scalar;

pub use emit::{JsonPoly, JsonTerm};
pub use parse::parse_poly;
pub use symbol::{Letter, Symbol};
pub use table::{ddt, DerivationTable, Substitution};

pub type Word = SmallVec<[Letter; 6]>;

/// Word-rewrite context applied after every product.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum Rules {
    /// No relations: the free associative algebra.
    #[default]
    Free,
    /// All letters commute; words are kept sorted.
    Commutative,
    /// `h² = I` and `h` anticommutes with every other letter; words are kept
    /// with at most one trailing `h`.
    Involution(Symbol),
}

impl Rules {
    /// Common context of two operands; `Free` defers to the other side.
    pub fn join(self, other: Rules) -> Rules {
        match (self, other) {
            (a, b) if a == b => a,
            (Rules::Free, b) => b,
            (a, Rules::Free) => a,
            (a, b) => panic!("incompatible rewrite contexts {a:?} and {b:?}"),
        }
    }

    /// Normal form of a word: `None` never occurs for the implemented rule
    /// sets, the boolean is true when the word picked up a sign.
    pub fn normalize(self, w: &mut Word) -> bool {
        match self {
            Rules::Free => false,
            Rules::Commutative => {
                w.sort_unstable();
                false
            }
            Rules::Involution(h) => {
                let hl = Letter::new(h, 0);
                if !w.contains(&hl) {
                    return false;
                }
                let mut negate = false;
                let mut hs = 0usize;
                let mut out: Word = SmallVec::with_capacity(w.len());
                // each h travels to the end past the non-h letters to its right
                let mut after = w.iter().filter(|l| **l != hl).count();
                for l in w.iter() {
                    if *l == hl {
                        hs += 1;
                        if after % 2 == 1 {
                            negate = !negate;
                        }
                    } else {
                        after -= 1;
                        out.push(*l);
                    }
                }
                if hs % 2 == 1 {
                    out.push(hl);
                }
                *w = out;
                negate
            }
        }
    }
}

/// Noncommutative polynomial over the scalar field `S`.
///
/// Equality compares normal forms only; the rewrite context is not part of
/// the value.
#[derive(Clone)]
pub struct NCPoly<S: Scalar> {
    terms: BTreeMap<Word, S>,
    rules: Rules,
}

impl<S: Scalar> PartialEq for NCPoly<S> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<S: Scalar> Eq for NCPoly<S> {}

impl<S: Scalar> std::hash::Hash for NCPoly<S> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

impl<S: Scalar> Default for NCPoly<S> {
    fn default() -> Self {
        NCPoly { terms: BTreeMap::new(), rules: Rules::Free }
    }
}

impl<S: Scalar> NCPoly<S> {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        let mut p = NCPoly::zero();
        p.add_word(Word::new(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(S::from_int(n))
    }

    pub fn letter(l: Letter) -> Self {
        let mut p = NCPoly::zero();
        p.add_word(smallvec::smallvec![l], S::one());
        p
    }

    /// Single letter by name, with no x-derivatives.
    pub fn sym(name: &str) -> Self {
        Self::letter(Letter::new(Symbol::new(name), 0))
    }

    /// Single letter by name carrying `xorder` x-derivatives.
    pub fn sym_x(name: &str, xorder: u32) -> Self {
        Self::letter(Letter::new(Symbol::new(name), xorder))
    }

    pub fn from_word(w: &[Letter], c: S) -> Self {
        let mut p = NCPoly::zero();
        p.add_word(w.iter().copied().collect(), c);
        p
    }

    pub fn rules(&self) -> Rules {
        self.rules
    }

    /// Reinterpret in a rewrite context, renormalizing every word.
    pub fn with_rules(&self, rules: Rules) -> Self {
        let rules = self.rules.join(rules);
        if rules == self.rules {
            return self.clone();
        }
        let mut out = NCPoly { terms: BTreeMap::new(), rules };
        for (w, c) in &self.terms {
            out.push_normalized(w.clone(), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[Letter]) -> S {
        let key: Word = w.iter().copied().collect();
        self.terms.get(&key).cloned().unwrap_or_else(S::zero)
    }

    /// The scalar value when the polynomial is a multiple of the unit.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&Word::new()).cloned(),
            _ => None,
        }
    }

    /// Largest number of letters in any word.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Distinct symbols occurring in the polynomial.
    pub fn symbols(&self) -> Vec<Symbol> {
        self.terms.keys().flat_map(|w| w.iter().map(|l| l.sym)).sorted().dedup().collect()
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.terms.keys().flat_map(|w| w.iter().copied()).sorted().dedup().collect()
    }

    pub fn contains_symbol(&self, s: Symbol) -> bool {
        self.terms.keys().any(|w| w.iter().any(|l| l.sym == s))
    }

    /// Adds `c·w` for a word that is already in normal form.
    fn add_word(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn push_normalized(&mut self, mut w: Word, c: S) {
        if self.rules.normalize(&mut w) {
            self.add_word(w, c.neg_ref());
        } else {
            self.add_word(w, c);
        }
    }

    /// Adds `c·w` after normalizing `w` under the active rules.
    pub fn add_term(&mut self, w: &[Letter], c: S) {
        self.push_normalized(w.iter().copied().collect(), c);
    }

    pub fn add(&self, other: &Self) -> Self {
        let rules = self.rules.join(other.rules);
        let mut out = self.with_rules(rules);
        let other = other.with_rules(rules);
        for (w, c) in other.terms {
            out.add_word(w, c);
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        let rules = self.rules.join(other.rules);
        if rules != self.rules {
            *self = self.with_rules(rules);
        }
        if other.rules == rules {
            for (w, c) in &other.terms {
                self.add_word(w.clone(), c.clone());
            }
        } else {
            for (w, c) in &other.terms {
                self.push_normalized(w.clone(), c.clone());
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg_ref())).collect(),
            rules: self.rules,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return NCPoly { terms: BTreeMap::new(), rules: self.rules };
        }
        NCPoly {
            terms: self.terms.iter().map(|(w, d)| (w.clone(), d.mul_ref(c))).collect(),
            rules: self.rules,
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&S::from_int(n))
    }

    /// Product in ℬ: concatenation followed by normalization.
    pub fn mul(&self, other: &Self) -> Self {
        let rules = self.rules.join(other.rules);
        let mut out = NCPoly { terms: BTreeMap::new(), rules };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut w: Word = SmallVec::with_capacity(a.len() + b.len());
                w.extend_from_slice(a);
                w.extend_from_slice(b);
                out.push_normalized(w, ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = NCPoly::one().with_rules(self.rules);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `ab + ba`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// Derivative in x by the Leibniz rule; constant letters are annihilated.
    pub fn ddx(&self) -> Self {
        let mut out = NCPoly { terms: BTreeMap::new(), rules: self.rules };
        for (w, c) in &self.terms {
            for (i, l) in w.iter().enumerate() {
                if l.sym.is_constant() {
                    continue;
                }
                let mut nw = w.clone();
                nw[i] = Letter::new(l.sym, l.xorder + 1);
                out.push_normalized(nw, c.clone());
            }
        }
        out
    }

    pub fn ddx_n(&self, n: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.ddx();
        }
        p
    }

    /// Replace every letter by the polynomial `f` returns for it (or keep it
    /// when `f` returns `None`), multiplying out in the joint context.
    pub fn map_letters<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(Letter) -> Result<Option<NCPoly<S>>>,
    {
        let mut cache: BTreeMap<Letter, Option<NCPoly<S>>> = BTreeMap::new();
        let mut out = NCPoly { terms: BTreeMap::new(), rules: self.rules };
        for (w, c) in &self.terms {
            let mut prod = NCPoly::constant(c.clone()).with_rules(self.rules);
            for l in w.iter() {
                let img = match cache.get(l) {
                    Some(v) => v.clone(),
                    None => {
                        let v = f(*l)?;
                        cache.insert(*l, v.clone());
                        v
                    }
                };
                prod = match img {
                    Some(p) => prod.mul(&p),
                    None => prod.mul(&NCPoly::letter(*l)),
                };
                if prod.is_zero() {
                    break;
                }
            }
            out.add_assign(&prod);
        }
        Ok(out)
    }

    /// Simultaneous substitution of letters, then renormalization.
    pub fn substitute(&self, rules: &Substitution<S>) -> Result<Self> {
        self.map_letters(|l| rules.image(l))
    }

    /// Keep only the terms accepted by `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Word) -> bool) -> Self {
        NCPoly {
            terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect(),
            rules: self.rules,
        }
    }

    /// Terms in canonical print order: word length, then (name, xorder).
    pub fn sorted_terms(&self) -> Vec<(&Word, &S)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            a.len().cmp(&b.len()).then_with(|| {
                a.iter().map(|l| l.sort_key()).cmp(b.iter().map(|l| l.sort_key()))
            })
        });
        v
    }
}

/// `{a₁,…,a_k} = Σ_{σ∈S_k} a_{σ(1)}⋯a_{σ(k)}`.
pub fn symmetrize<S: Scalar>(args: &[NCPoly<S>]) -> Result<NCPoly<S>> {
    if args.is_empty() {
        return Err(Error::InvalidArgument("symmetrize needs at least one argument".into()));
    }
    let mut out = NCPoly::zero();
    for perm in (0..args.len()).permutations(args.len()) {
        let mut prod = args[perm[0]].clone();
        for &i in &perm[1..] {
            prod = prod.mul(&args[i]);
        }
        out.add_assign(&prod);
    }
    Ok(out)
}

impl<S: Scalar> fmt::Debug for NCPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for NCPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit::to_text(self))
    }
}

impl<S: Scalar> RingElem for NCPoly<S> {
    type Scalar = S;

    fn zero_like(&self) -> Self {
        NCPoly { terms: BTreeMap::new(), rules: self.rules }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn scale(&self, c: &S) -> Self {
        NCPoly::scale(self, c)
    }
    fn ddx(&self) -> Self {
        NCPoly::ddx(self)
    }
    fn map_polys(&self, f: &mut dyn FnMut(&NCPoly<S>) -> Result<NCPoly<S>>) -> Result<Self> {
        f(self)
    }
    fn for_each_poly(&self, f: &mut dyn FnMut(&NCPoly<S>)) {
        f(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    type P = NCPoly<Rational>;

    fn p(s: &str) -> P {
        parse_poly(s, Rules::Free).unwrap()
    }

    #[test]
    fn mul_examples() {
        let u2 = P::sym("u2");
        let u3 = P::sym("u3");
        let prod = u2.mul(&u3);
        assert_eq!(prod.len(), 1);
        assert_eq!(prod.to_string(), "u2*u3");
        assert_eq!(P::one().mul(&prod), prod);
        assert_eq!(prod.mul(&P::one()), prod);
        assert!(P::zero().mul(&prod).is_zero());
    }

    #[test]
    fn involution_rules_anticommute() {
        let h = Symbol::constant("H");
        let rules = Rules::Involution(h);
        let hp = P::letter(Letter::new(h, 0)).with_rules(rules);
        let u = P::sym("u");
        assert_eq!(hp.mul(&u), u.mul(&hp).neg());
        assert_eq!(hp.mul(&hp), P::one().with_rules(rules));
        let ux = P::sym_x("u", 1);
        // H u_x H = −u_x
        assert_eq!(hp.mul(&ux).mul(&hp), ux.neg().with_rules(rules));
    }

    #[test]
    fn involution_rules_are_confluent_on_small_words() {
        let h = Symbol::constant("H");
        let rules = Rules::Involution(h);
        let alphabet = [Letter::new(h, 0), Letter::new(Symbol::new("u"), 0), Letter::new(Symbol::new("u"), 1)];
        let mut words: Vec<Vec<Letter>> = vec![vec![]];
        for _ in 0..4 {
            let next: Vec<Vec<Letter>> = words
                .iter()
                .flat_map(|w| alphabet.iter().map(move |l| w.iter().copied().chain([*l]).collect()))
                .collect();
            words.extend(next);
            words.sort();
            words.dedup();
        }
        for a in &words {
            for b in &words {
                let pa = P::from_word(a, Rational::one()).with_rules(rules);
                let pb = P::from_word(b, Rational::one()).with_rules(rules);
                let direct = P::from_word(&[a.clone(), b.clone()].concat(), Rational::one()).with_rules(rules);
                assert_eq!(pa.mul(&pb), direct, "{a:?} {b:?}");
                assert_eq!(direct.with_rules(rules), direct);
            }
        }
    }

    #[test]
    fn ddx_examples() {
        assert_eq!(P::sym("u2").ddx(), P::sym_x("u2", 1));
        assert_eq!(p("q*r").ddx(), p("q_x*r + q*r_x"));
        Symbol::constant("H");
        assert!(p("H").ddx().is_zero());
        assert!(P::int(5).ddx().is_zero());
    }

    #[test]
    fn symmetrize_examples() {
        Symbol::constant("J");
        assert_eq!(symmetrize(&[p("J"), p("v3")]).unwrap(), p("J*v3 + v3*J"));
        assert_eq!(symmetrize(&[p("a")]).unwrap(), p("a"));
        assert_eq!(
            symmetrize(&[p("J"), p("v2"), p("v2")]).unwrap(),
            p("2*J*v2*v2 + 2*v2*J*v2 + 2*v2*v2*J")
        );
        assert!(symmetrize::<Rational>(&[]).is_err());
    }

    #[test]
    fn substitute_examples() {
        let one = Substitution::new([("r", P::one())]).unwrap();
        assert_eq!(p("q*r").substitute(&one).unwrap(), p("q"));
        assert!(p("r_x").substitute(&one).unwrap().is_zero());
        let q_to_r = Substitution::new([("q", p("r"))]).unwrap();
        assert_eq!(p("q_x*r*q").substitute(&q_to_r).unwrap(), p("r_x*r*r"));
    }

    #[test]
    fn commutator_examples() {
        assert!(p("u2").commutator(&p("u2")).is_zero());
        let (a, b) = (p("a + 2*b*c"), p("c_x - a*b"));
        assert!(a.commutator(&b).add(&b.commutator(&a)).is_zero());
    }

    #[test]
    fn commutative_rules_collapse_orderings() {
        let a = p("q*r").with_rules(Rules::Commutative);
        let b = p("r*q").with_rules(Rules::Commutative);
        assert_eq!(a, b);
        assert!(a.commutator(&p("r_x")).is_zero());
    }

    fn letter_strategy() -> impl Strategy<Value = Letter> {
        (prop::sample::select(vec!["a", "b", "c"]), 0u32..3).prop_map(|(n, d)| Letter::new(Symbol::new(n), d))
    }

    pub(crate) fn poly_strategy() -> impl Strategy<Value = P> {
        prop::collection::vec((-3i64..4, prop::collection::vec(letter_strategy(), 0..4)), 0..5).prop_map(|terms| {
            let mut out = P::zero();
            for (c, w) in terms {
                out.add_term(&w, Rational::integer(c));
            }
            out
        })
    }

    proptest! {
        #[test]
        fn ddx_is_a_derivation(a in poly_strategy(), b in poly_strategy()) {
            prop_assert_eq!(a.mul(&b).ddx(), a.ddx().mul(&b).add(&a.mul(&b.ddx())));
        }

        #[test]
        fn mul_is_associative(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn normalization_is_idempotent(a in poly_strategy()) {
            let h = Symbol::constant("H");
            let once = a.with_rules(Rules::Involution(h));
            prop_assert_eq!(once.with_rules(Rules::Involution(h)), once.clone());
            let c = a.with_rules(Rules::Commutative);
            prop_assert_eq!(c.with_rules(Rules::Commutative), c);
        }

        #[test]
        fn symmetrize_ignores_argument_order(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            let s1 = symmetrize(&[a.clone(), b.clone(), c.clone()]).unwrap();
            let s2 = symmetrize(&[c, a, b]).unwrap();
            prop_assert_eq!(s1, s2);
        }

        #[test]
        fn text_round_trip(a in poly_strategy()) {
            prop_assert_eq!(parse_poly::<Rational>(&a.to_string(), Rules::Free).unwrap(), a);
        }
    }
}
