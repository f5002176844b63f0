//! The single-generator algebra 𝒜(P).
//!
//! Every element is a finite combination of compositions `(n₁,…,n_k)`, the
//! word `P^{•n₁} ≺ … ≺ P^{•n_k}`. Concatenation realizes `≺`, merging the
//! touching letters realizes `•`, and the quasi-shuffle `∘` is the stuffle
//! product on compositions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Basis word of 𝒜(P). Parts are positive and the word is nonempty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("a composition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("composition parts must be positive".into()));
        }
        Ok(Composition(parts))
    }

    /// Panicking constructor for literals.
    pub fn of(parts: &[u32]) -> Self {
        Composition::new(parts.to_vec()).expect("valid composition")
    }

    /// The letter `P^{•n}`.
    pub fn letter(n: u32) -> Self {
        Composition::of(&[n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Grade in 𝒜 = ⊕𝒜ʳ: every letter lies in 𝒜¹, so the grade is the length.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// All compositions of `weight`.
    pub fn all_of_weight(weight: u32) -> Vec<Composition> {
        fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition(cur.clone()));
                return;
            }
            for first in 1..=rest {
                cur.push(first);
                rec(rest - first, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if weight > 0 {
            rec(weight, &mut Vec::new(), &mut out);
        }
        out.sort();
        out
    }

    /// All compositions with weight in `1..=max_weight`, canonically ordered.
    pub fn all_up_to_weight(max_weight: u32) -> Vec<Composition> {
        (1..=max_weight).flat_map(Composition::all_of_weight).collect()
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then(self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, format!("composition `{t}` must be parenthesized")))?;
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::parse(0, format!("bad part `{p}`"))))
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

/// Finite linear combination of compositions with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgElement {
    terms: BTreeMap<Composition, Rational>,
}

impl AlgElement {
    pub fn zero() -> Self {
        AlgElement::default()
    }

    pub fn basis(w: Composition) -> Self {
        Self::term(Rational::one(), w)
    }

    pub fn term(c: Rational, w: Composition) -> Self {
        let mut e = AlgElement::zero();
        e.add_term(w, c);
        e
    }

    /// The generator P.
    pub fn p() -> Self {
        Self::basis(Composition::letter(1))
    }

    /// `P^{•n}`.
    pub fn p_pow(n: u32) -> Self {
        Self::basis(Composition::letter(n))
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Composition)>>(it: I) -> Self {
        let mut e = AlgElement::zero();
        for (c, w) in it {
            e.add_term(w, Rational::integer(c));
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Composition, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Composition) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, w: Composition, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::integer(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = AlgElement::zero();
        if c.is_zero() {
            return out;
        }
        for (w, d) in &self.terms {
            out.add_term(w.clone(), d.mul_ref(c));
        }
        out
    }

    /// Maximum weight among the terms (0 for the zero element).
    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(Composition::weight).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self, weight: u32) -> bool {
        self.terms.keys().all(|w| w.weight() == weight)
    }

    fn bilinear(&self, other: &Self, f: impl Fn(&[u32], &[u32], &Rational, &mut AlgElement)) -> Self {
        let mut out = AlgElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                f(a.parts(), b.parts(), &ca.mul_ref(cb), &mut out);
            }
        }
        out
    }
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgElement {
    /// Canonical form `c1*(..) + c2*(..)`, unit coefficients omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for AlgElement {
    type Err = Error;

    /// Parses the canonical form printed by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "0" {
            return Ok(AlgElement::zero());
        }
        let mut out = AlgElement::zero();
        let mut rest = t;
        let mut sign = 1;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        }
        loop {
            let close = rest.find(')').ok_or_else(|| Error::parse(0, "unterminated term"))?;
            let (head, tail) = rest.split_at(close + 1);
            let (coeff, comp) = match head.split_once('*') {
                Some((c, w)) => (c.trim().parse::<Rational>()?, w.trim().parse::<Composition>()?),
                None => (Rational::one(), head.trim().parse::<Composition>()?),
            };
            out.add_term(comp, coeff.mul_ref(&Rational::integer(sign)));
            let tail = tail.trim_start();
            if tail.is_empty() {
                break;
            }
            if let Some(r) = tail.strip_prefix('+') {
                sign = 1;
                rest = r.trim_start();
            } else if let Some(r) = tail.strip_prefix('-') {
                sign = -1;
                rest = r.trim_start();
            } else {
                return Err(Error::parse(t.len() - tail.len(), "expected `+` or `-`"));
            }
        }
        Ok(out)
    }
}

fn concat(a: &[u32], b: &[u32]) -> Composition {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    Composition(v)
}

/// `a ≺ b`: concatenation of words.
pub fn prec(a: &AlgElement, b: &AlgElement) -> AlgElement {
    a.bilinear(b, |x, y, c, out| out.add_term(concat(x, y), c.clone()))
}

/// `a • b`: merge the last letter of the left word with the first of the right.
pub fn bullet(a: &AlgElement, b: &AlgElement) -> AlgElement {
    a.bilinear(b, |x, y, c, out| out.add_term(merge(x, y), c.clone()))
}

fn merge(x: &[u32], y: &[u32]) -> Composition {
    let mut v = Vec::with_capacity(x.len() + y.len() - 1);
    v.extend_from_slice(&x[..x.len() - 1]);
    v.push(x[x.len() - 1] + y[0]);
    v.extend_from_slice(&y[1..]);
    Composition(v)
}

/// `a ≻ b = a ≺ b + a • b`.
pub fn succ(a: &AlgElement, b: &AlgElement) -> AlgElement {
    prec(a, b).add(&bullet(a, b))
}

/// Quasi-shuffle `a ∘ b`.
pub fn qshuffle(a: &AlgElement, b: &AlgElement) -> AlgElement {
    // integer multiplicities per distinct coefficient, converted once at the end
    let mut groups: HashMap<Rational, HashMap<Vec<u32>, i64>> = HashMap::new();
    for (x, ca) in &a.terms {
        for (y, cb) in &b.terms {
            let acc = groups.entry(ca.mul_ref(cb)).or_default();
            stuffle_words(x.parts(), y.parts(), &mut Vec::new(), acc);
        }
    }
    let mut out = AlgElement::zero();
    for (c, words) in groups {
        for (w, n) in words {
            out.add_term(Composition(w), c.mul_ref(&Rational::integer(n)));
        }
    }
    out
}

/// First-letter recursion: with x = A≺α and y = B≺β the product is
/// A≺(α∘y) + B≺(x∘β) + (A•B)≺(α∘β); the empty word is the unit.
fn stuffle_words(x: &[u32], y: &[u32], prefix: &mut Vec<u32>, acc: &mut HashMap<Vec<u32>, i64>) {
    if x.is_empty() || y.is_empty() {
        let mut w = Vec::with_capacity(prefix.len() + x.len() + y.len());
        w.extend_from_slice(prefix);
        w.extend_from_slice(x);
        w.extend_from_slice(y);
        *acc.entry(w).or_insert(0) += 1;
        return;
    }
    prefix.push(x[0]);
    stuffle_words(&x[1..], y, prefix, acc);
    prefix.pop();
    prefix.push(y[0]);
    stuffle_words(x, &y[1..], prefix, acc);
    prefix.pop();
    prefix.push(x[0] + y[0]);
    stuffle_words(&x[1..], &y[1..], prefix, acc);
    prefix.pop();
}

/// `a ×̂ b = −a ≺ P ≻ b`, by the closed two-term formula on words.
pub fn hat_times(a: &AlgElement, b: &AlgElement) -> AlgElement {
    a.bilinear(b, |x, y, c, out| {
        let neg = c.neg_ref();
        let mut w1 = Vec::with_capacity(x.len() + y.len() + 1);
        w1.extend_from_slice(x);
        w1.push(1);
        w1.extend_from_slice(y);
        out.add_term(Composition(w1), neg.clone());
        let mut w2 = Vec::with_capacity(x.len() + y.len());
        w2.extend_from_slice(x);
        w2.push(1 + y[0]);
        w2.extend_from_slice(&y[1..]);
        out.add_term(Composition(w2), neg);
    })
}

/// `[a, b]_{×̂} = a ×̂ b − b ×̂ a`.
pub fn hat_commutator(a: &AlgElement, b: &AlgElement) -> AlgElement {
    hat_times(a, b).sub(&hat_times(b, a))
}

/// `P^{∘n}`.
pub fn qshuffle_power(n: u32) -> Result<AlgElement> {
    if n == 0 {
        return Err(Error::InvalidArgument("qshuffle_power needs n ≥ 1".into()));
    }
    let p = AlgElement::p();
    let mut acc = p.clone();
    for _ in 1..n {
        acc = qshuffle(&acc, &p);
    }
    Ok(acc)
}

/// Independent stuffle oracle through monomial quasi-symmetric polynomials.
///
/// `M_a · M_b` is expanded in `nvars` commuting variables and read back in the
/// M basis: the coefficient of `M_c` is the coefficient of the packed monomial
/// `x₁^{c₁}⋯x_k^{c_k}`.
pub fn qsym_oracle_product(a: &Composition, b: &Composition, nvars: usize) -> Result<AlgElement> {
    let needed = a.len() + b.len();
    if nvars < needed {
        return Err(Error::TooFewVariables { nvars, needed });
    }
    let ma = monomial_qsym(a, nvars);
    let mb = monomial_qsym(b, nvars);
    let mut prod: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for (ea, ca) in &ma {
        for (eb, cb) in &mb {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *prod.entry(e).or_insert(0) += ca * cb;
        }
    }
    let mut out = AlgElement::zero();
    for (e, c) in prod {
        let k = e.iter().take_while(|&&x| x > 0).count();
        if k > 0 && e[k..].iter().all(|&x| x == 0) {
            out.add_term(Composition(e[..k].to_vec()), Rational::integer(c));
        }
    }
    Ok(out)
}

/// Exponent vectors of `M_α = Σ_{i₁<…<i_k} x_{i₁}^{α₁}⋯x_{i_k}^{α_k}`.
fn monomial_qsym(alpha: &Composition, nvars: usize) -> Vec<(Vec<u32>, i64)> {
    use itertools::Itertools;
    (0..nvars)
        .combinations(alpha.len())
        .map(|idx| {
            let mut e = vec![0u32; nvars];
            for (&i, &p) in idx.iter().zip(alpha.parts()) {
                e[i] = p;
            }
            (e, 1)
        })
        .collect()
}

/// `qshuffle(a, b)` against the oracle for every pair of total weight ≤ `max_weight`.
/// Returns the first disagreeing pair, if any, and the number of pairs compared.
pub fn oracle_sweep(max_weight: u32) -> Result<(Option<(Composition, Composition)>, usize)> {
    let all = Composition::all_up_to_weight(max_weight.saturating_sub(1));
    let mut count = 0;
    for a in &all {
        for b in &all {
            if a.weight() + b.weight() > max_weight {
                continue;
            }
            count += 1;
            let oracle = qsym_oracle_product(a, b, a.len() + b.len())?;
            if qshuffle(&AlgElement::basis(a.clone()), &AlgElement::basis(b.clone())) != oracle {
                return Ok((Some((a.clone(), b.clone())), count));
            }
        }
    }
    Ok((None, count))
}

/// Names of the algebra laws violated by the triple `(a, b, c)`: associativity
/// of `≺`, `•`, `∘`, `×̂`, mixed associativity of `≺` and `•`, commutativity of `∘`.
pub fn law_violations(a: &AlgElement, b: &AlgElement, c: &AlgElement) -> Vec<&'static str> {
    type Op = fn(&AlgElement, &AlgElement) -> AlgElement;
    let ops: [(&'static str, Op); 4] = [
        ("assoc prec", prec),
        ("assoc bullet", bullet),
        ("assoc qshuffle", qshuffle),
        ("assoc hat_times", hat_times),
    ];
    let mut bad = Vec::new();
    for (name, f) in ops {
        if f(&f(a, b), c) != f(a, &f(b, c)) {
            bad.push(name);
        }
    }
    if bullet(&prec(a, b), c) != prec(a, &bullet(b, c)) {
        bad.push("mixed (a.b)@c");
    }
    if prec(&bullet(a, b), c) != bullet(a, &prec(b, c)) {
        bad.push("mixed (a@b).c");
    }
    if qshuffle(a, b) != qshuffle(b, a) {
        bad.push("commutative qshuffle");
    }
    bad
}

/// Uniformly random composition of the given weight.
pub fn random_composition<R: rand::Rng>(rng: &mut R, weight: u32) -> Composition {
    let mut parts = Vec::new();
    let mut run = 1;
    for _ in 1..weight {
        if rng.gen::<bool>() {
            parts.push(run);
            run = 1;
        } else {
            run += 1;
        }
    }
    parts.push(run);
    Composition(parts)
}

/// Both sides of `4 P^{•3}∘P − P^{∘4} − 6 P∘(P×̂P) = 6[P^{•2},P]_{×̂} + 3 P^{•2}∘P^{•2}`.
pub fn kp_identity_lhs_rhs() -> (AlgElement, AlgElement) {
    let terms = kp_identity_terms();
    let mut lhs = AlgElement::zero();
    let mut rhs = AlgElement::zero();
    for t in &terms {
        let v = t.value.scale(&Rational::integer(t.coeff));
        if t.left {
            lhs = lhs.add(&v);
        } else {
            rhs = rhs.add(&v);
        }
    }
    (lhs, rhs)
}

/// One summand of the KP identity, kept unexpanded so its images can be
/// compared term by term.
#[derive(Clone, Debug)]
pub struct IdentityTerm {
    pub label: &'static str,
    pub coeff: i64,
    pub left: bool,
    pub value: AlgElement,
}

pub fn kp_identity_terms() -> Vec<IdentityTerm> {
    let p = AlgElement::p();
    let p2 = AlgElement::p_pow(2);
    let p3 = AlgElement::p_pow(3);
    vec![
        IdentityTerm { label: "P^3 o P", coeff: 4, left: true, value: qshuffle(&p3, &p) },
        IdentityTerm { label: "P o P o P o P", coeff: -1, left: true, value: qshuffle_power(4).expect("n ≥ 1") },
        IdentityTerm { label: "P o (P x P)", coeff: -6, left: true, value: qshuffle(&p, &hat_times(&p, &p)) },
        IdentityTerm { label: "[P^2, P]_x", coeff: 6, left: false, value: hat_commutator(&p2, &p) },
        IdentityTerm { label: "P^2 o P^2", coeff: 3, left: false, value: qshuffle(&p2, &p2) },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> AlgElement {
        s.parse().unwrap()
    }

    fn w(p: &[u32]) -> AlgElement {
        AlgElement::basis(Composition::of(p))
    }

    #[test]
    fn prec_examples() {
        assert_eq!(prec(&w(&[1]), &w(&[1])), w(&[1, 1]));
        assert_eq!(prec(&w(&[2]), &w(&[1, 3])), w(&[2, 1, 3]));
        assert_eq!(prec(&w(&[1]).scale(&Rational::integer(2)), &w(&[1])), e("2*(1,1)"));
    }

    #[test]
    fn bullet_examples() {
        assert_eq!(bullet(&w(&[1]), &w(&[1])), w(&[2]));
        assert_eq!(bullet(&w(&[1, 1]), &w(&[1])), w(&[1, 2]));
        assert_eq!(bullet(&w(&[2, 1]), &w(&[1, 3])), w(&[2, 2, 3]));
    }

    #[test]
    fn qshuffle_examples() {
        assert_eq!(qshuffle(&w(&[1]), &w(&[1])), e("(2) + 2*(1,1)"));
        assert_eq!(qshuffle(&w(&[1]), &w(&[1, 1])), e("3*(1,1,1) + (1,2) + (2,1)"));
        assert_eq!(qshuffle(&w(&[2]), &w(&[3])), e("(2,3) + (3,2) + (5)"));
    }

    #[test]
    fn qshuffle_matches_the_four_defining_rules() {
        // with A = P^{•2}, B = P, α = (1,3), β = (2)
        let a = w(&[2]);
        let b = w(&[1]);
        let alpha = w(&[1, 3]);
        let beta = w(&[2]);
        let rule1 = prec(&a, &b).add(&prec(&b, &a)).add(&bullet(&a, &b));
        assert_eq!(qshuffle(&a, &b), rule1);
        let rule2 = prec(&prec(&a, &b), &alpha)
            .add(&prec(&b, &qshuffle(&a, &alpha)))
            .add(&prec(&bullet(&a, &b), &alpha));
        assert_eq!(qshuffle(&a, &prec(&b, &alpha)), rule2);
        let rule3 = prec(&a, &qshuffle(&alpha, &b))
            .add(&prec(&prec(&b, &a), &alpha))
            .add(&prec(&bullet(&a, &b), &alpha));
        assert_eq!(qshuffle(&prec(&a, &alpha), &b), rule3);
        let x = prec(&a, &alpha);
        let y = prec(&b, &beta);
        let rule4 = prec(&a, &qshuffle(&alpha, &y))
            .add(&prec(&b, &qshuffle(&x, &beta)))
            .add(&prec(&bullet(&a, &b), &qshuffle(&alpha, &beta)));
        assert_eq!(qshuffle(&x, &y), rule4);
    }

    #[test]
    fn hat_times_examples() {
        assert_eq!(hat_times(&w(&[1]), &w(&[1])), e("-(1,2) - (1,1,1)"));
        assert_eq!(hat_times(&w(&[2]), &w(&[1])), e("-(2,2) - (2,1,1)"));
        assert_eq!(hat_times(&w(&[1]), &w(&[3])), e("-(1,4) - (1,1,3)"));
    }

    #[test]
    fn hat_times_equals_literal_succ_expansion() {
        let p = AlgElement::p();
        for a in Composition::all_up_to_weight(3) {
            for b in Composition::all_up_to_weight(3) {
                let (a, b) = (AlgElement::basis(a.clone()), AlgElement::basis(b.clone()));
                let literal = succ(&prec(&a, &p), &b).scale(&Rational::integer(-1));
                assert_eq!(hat_times(&a, &b), literal);
            }
        }
    }

    #[test]
    fn qshuffle_powers() {
        assert_eq!(qshuffle_power(1).unwrap(), w(&[1]));
        assert_eq!(qshuffle_power(2).unwrap(), e("(2) + 2*(1,1)"));
        assert_eq!(qshuffle_power(3).unwrap(), e("(3) + 3*(1,2) + 3*(2,1) + 6*(1,1,1)"));
        assert!(qshuffle_power(0).is_err());
    }

    #[test]
    fn oracle_examples() {
        let c = Composition::of;
        assert_eq!(qsym_oracle_product(&c(&[1]), &c(&[1]), 4).unwrap(), e("(2) + 2*(1,1)"));
        assert_eq!(qsym_oracle_product(&c(&[2]), &c(&[1]), 4).unwrap(), e("(3) + (1,2) + (2,1)"));
        assert_eq!(
            qsym_oracle_product(&c(&[1]), &c(&[1]), 1),
            Err(Error::TooFewVariables { nvars: 1, needed: 2 })
        );
    }

    #[test]
    fn kp_identity_holds_in_the_algebra() {
        let (lhs, rhs) = kp_identity_lhs_rhs();
        // golden normal form of both sides
        let golden = e("3*(4) + 6*(1,3) - 6*(2,1,1) + 6*(1,1,2)");
        assert_eq!(lhs, golden);
        assert_eq!(rhs, golden);
        assert!(lhs.sub(&rhs).is_zero());
        assert!(lhs.is_homogeneous(4) && rhs.is_homogeneous(4));
        let four_p3_p = qshuffle(&AlgElement::p_pow(3), &AlgElement::p()).scale(&Rational::integer(4));
        assert_eq!(four_p3_p.coeff(&Composition::of(&[4])), Rational::integer(4));
        assert_eq!(four_p3_p.len(), 3);
    }

    #[test]
    fn canonical_text() {
        let x = e("2*(1,1) + (2) - 3/2*(1,2,1)");
        assert_eq!(x.to_string(), "(2) + 2*(1,1) - 3/2*(1,2,1)");
        assert_eq!(x.to_string().parse::<AlgElement>().unwrap(), x);
        assert_eq!(AlgElement::zero().to_string(), "0");
        assert!(Composition::new(vec![]).is_err());
        assert!(Composition::new(vec![1, 0]).is_err());
    }

    #[test]
    fn laws_hold_exhaustively_to_weight_three() {
        let all = Composition::all_up_to_weight(3);
        for a in &all {
            for b in &all {
                for c in &all {
                    let (x, y, z) = (AlgElement::basis(a.clone()), AlgElement::basis(b.clone()), AlgElement::basis(c.clone()));
                    assert!(law_violations(&x, &y, &z).is_empty(), "{a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn law_checker_detects_noncommutative_product() {
        let (a, b) = (w(&[1]), w(&[2]));
        assert!(law_violations(&a, &b, &a).is_empty());
        assert_ne!(prec(&a, &b), prec(&b, &a));
    }

    #[test]
    fn oracle_agrees_to_weight_four() {
        let (bad, n) = oracle_sweep(4).unwrap();
        assert_eq!(bad, None);
        // pairs (a, b) with |a| + |b| ≤ 4: Σ_{s=2..4} Σ_{i=1..s-1} 2^{i-1}·2^{s-i-1}
        assert_eq!(n, 1 + 4 + 12);
    }

    #[test]
    fn random_compositions_have_the_right_weight() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for wt in 1..=8 {
            for _ in 0..20 {
                assert_eq!(random_composition(&mut rng, wt).weight(), wt);
            }
        }
    }

    #[test]
    fn enumerates_compositions() {
        assert_eq!(Composition::all_of_weight(4).len(), 8);
        assert_eq!(Composition::all_up_to_weight(4).len(), 15);
    }
}
