//! Textual expressions over 𝒜(P).
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := [integer '*'] factor (op factor)*
//! factor := 'P' ['^' integer] | '(' expr ')'
//! op     := 'o' | '.' | '@' | 'x'
//! ```
//!
//! Operators in one chain must all be the same; `P o P . P` is rejected.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qshuffle::{bullet, hat_times, prec, qshuffle, AlgElement};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    /// `o`, the quasi-shuffle `∘`.
    Circ,
    /// `.`, `≺`.
    Prec,
    /// `@`, `•`.
    Bullet,
    /// `x`, `×̂`.
    HatTimes,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Circ => 'o',
            BinOp::Prec => '.',
            BinOp::Bullet => '@',
            BinOp::HatTimes => 'x',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        Some(match c {
            'o' => BinOp::Circ,
            '.' => BinOp::Prec,
            '@' => BinOp::Bullet,
            'x' => BinOp::HatTimes,
            _ => return None,
        })
    }

    fn latex(self) -> &'static str {
        match self {
            BinOp::Circ => "\\circ",
            BinOp::Prec => "\\prec",
            BinOp::Bullet => "\\bullet",
            BinOp::HatTimes => "\\hat{\\times}",
        }
    }

    pub fn apply(self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        match self {
            BinOp::Circ => qshuffle(a, b),
            BinOp::Prec => prec(a, b),
            BinOp::Bullet => bullet(a, b),
            BinOp::HatTimes => hat_times(a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    /// `P^{•n}`; `P` is `Power(1)`.
    Power(u32),
    /// Left-associated chain of one operator, at least two operands.
    Chain(BinOp, Vec<ExprAst>),
    Scaled(u64, Box<ExprAst>),
    /// Terms with their signs; the first term is never negated.
    Sum(Vec<(bool, ExprAst)>),
}

impl ExprAst {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { src: text, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(Error::parse(p.pos, format!("unexpected `{}`", p.peek().unwrap_or(' '))));
        }
        Ok(e)
    }

    pub fn eval(&self) -> AlgElement {
        match self {
            ExprAst::Power(n) => AlgElement::p_pow(*n),
            ExprAst::Chain(op, xs) => {
                let mut it = xs.iter();
                let first = it.next().expect("chain has operands").eval();
                it.fold(first, |acc, x| op.apply(&acc, &x.eval()))
            }
            ExprAst::Scaled(n, x) => x.eval().scale(&Rational::integer(*n as i64)),
            ExprAst::Sum(ts) => ts.iter().fold(AlgElement::zero(), |acc, (neg, t)| {
                let v = t.eval();
                if *neg {
                    acc.sub(&v)
                } else {
                    acc.add(&v)
                }
            }),
        }
    }

    pub fn to_latex(&self) -> String {
        match self {
            ExprAst::Power(1) => "P".into(),
            ExprAst::Power(n) => format!("P^{{\\bullet {n}}}"),
            ExprAst::Chain(op, xs) => xs
                .iter()
                .map(|x| if x.is_compound() { format!("({})", x.to_latex()) } else { x.to_latex() })
                .collect::<Vec<_>>()
                .join(&format!(" {} ", op.latex())),
            ExprAst::Scaled(n, x) => match **x {
                ExprAst::Chain(..) | ExprAst::Sum(_) => format!("{n} \\, ({})", x.to_latex()),
                _ => format!("{n} \\, {}", x.to_latex()),
            },
            ExprAst::Sum(ts) => {
                let mut s = String::new();
                for (i, (neg, t)) in ts.iter().enumerate() {
                    let body = if matches!(t, ExprAst::Sum(_)) { format!("({})", t.to_latex()) } else { t.to_latex() };
                    match (i, neg) {
                        (0, _) => s.push_str(&body),
                        (_, true) => s.push_str(&format!(" - {body}")),
                        (_, false) => s.push_str(&format!(" + {body}")),
                    }
                }
                s
            }
        }
    }

    fn is_compound(&self) -> bool {
        !matches!(self, ExprAst::Power(_))
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Power(1) => write!(f, "P"),
            ExprAst::Power(n) => write!(f, "P^{n}"),
            ExprAst::Chain(op, xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {} ", op.symbol())?;
                    }
                    if x.is_compound() {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            ExprAst::Scaled(n, x) => {
                if x.is_compound() {
                    write!(f, "{n}*({x})")
                } else {
                    write!(f, "{n}*{x}")
                }
            }
            ExprAst::Sum(ts) => {
                for (i, (neg, t)) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {} ", if *neg { '-' } else { '+' })?;
                    }
                    if matches!(t, ExprAst::Sum(_)) {
                        write!(f, "({t})")?;
                    } else {
                        write!(f, "{t}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ExprAst {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExprAst::parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<Option<u64>> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        match self.src[start..self.pos].parse::<u64>() {
            Ok(n) if n <= i64::MAX as u64 => Ok(Some(n)),
            _ => Err(Error::parse(start, "integer out of range")),
        }
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut terms = vec![(false, self.term()?)];
        loop {
            let neg = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                break;
            };
            terms.push((neg, self.term()?));
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one term").1 } else { ExprAst::Sum(terms) })
    }

    fn term(&mut self) -> Result<ExprAst> {
        let scalar = match self.integer()? {
            Some(n) => {
                if !self.eat('*') {
                    return Err(Error::parse(self.pos, "expected `*` after integer"));
                }
                Some(n)
            }
            None => None,
        };
        let mut operands = vec![self.factor()?];
        let mut op: Option<(BinOp, usize)> = None;
        loop {
            self.skip_ws();
            let at = self.pos;
            let Some(next) = self.peek().and_then(BinOp::from_char) else { break };
            if let Some((first, _)) = op {
                if first != next {
                    return Err(Error::Ambiguous { pos: at, first: first.symbol(), second: next.symbol() });
                }
            } else {
                op = Some((next, at));
            }
            self.pos += 1;
            operands.push(self.factor()?);
        }
        let body = match op {
            Some((o, _)) => ExprAst::Chain(o, operands),
            None => operands.pop().expect("one operand"),
        };
        Ok(match scalar {
            Some(n) => ExprAst::Scaled(n, Box::new(body)),
            None => body,
        })
    }

    fn factor(&mut self) -> Result<ExprAst> {
        self.skip_ws();
        let at = self.pos;
        if self.eat('(') {
            let e = self.expr()?;
            if !self.eat(')') {
                return Err(Error::parse(self.pos, "expected `)`"));
            }
            return Ok(e);
        }
        if self.eat('P') {
            if self.eat('^') {
                let at = self.pos;
                return match self.integer()? {
                    Some(n) if n >= 1 && n <= u32::MAX as u64 => Ok(ExprAst::Power(n as u32)),
                    Some(_) => Err(Error::parse(at, "exponent must be a positive integer")),
                    None => Err(Error::parse(at, "expected exponent after `^`")),
                };
            }
            return Ok(ExprAst::Power(1));
        }
        Err(match self.peek() {
            Some(c) => Error::parse(at, format!("expected `P` or `(`, found `{c}`")),
            None => Error::parse(at, "unexpected end of input"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qshuffle::{kp_identity_terms, qshuffle_power, Composition};
    use proptest::prelude::*;

    fn e(s: &str) -> ExprAst {
        s.parse().unwrap()
    }

    #[test]
    fn single_operator() {
        let a = e("P o P");
        assert_eq!(a, ExprAst::Chain(BinOp::Circ, vec![ExprAst::Power(1), ExprAst::Power(1)]));
        assert_eq!(a.eval(), qshuffle(&AlgElement::p(), &AlgElement::p()));
    }

    #[test]
    fn kp_terms() {
        let a = e("4*(P^3 o P) - (P o P o P o P)");
        let terms = kp_identity_terms();
        let want = terms[0].value.scale(&Rational::integer(4)).sub(&qshuffle_power(4).unwrap());
        assert_eq!(a.eval(), want);
        assert_eq!(a.to_string(), "4*(P^3 o P) - P o P o P o P");
    }

    #[test]
    fn mixing_is_ambiguous() {
        assert_eq!(ExprAst::parse("P o P . P"), Err(Error::Ambiguous { pos: 6, first: 'o', second: '.' }));
        assert!(ExprAst::parse("(P o P) . P").is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(ExprAst::parse("P o"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(ExprAst::parse("P^0"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(ExprAst::parse("2 P"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(ExprAst::parse("(P"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(ExprAst::parse("P P"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(ExprAst::parse("-P"), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn operators_evaluate() {
        let w = |p: &[u32]| AlgElement::basis(Composition::of(p));
        assert_eq!(e("P . P^2").eval(), w(&[1, 2]));
        assert_eq!(e("P @ P @ P").eval(), w(&[3]));
        assert_eq!(e("P x P").eval(), "-(1,2) - (1,1,1)".parse().unwrap());
        assert_eq!(e("2*P - P + P^2").eval(), "(1) + (2)".parse().unwrap());
    }

    #[test]
    fn latex() {
        assert_eq!(e("4*(P^3 o P) - P x P").to_latex(), "4 \\, (P^{\\bullet 3} \\circ P) - P \\hat{\\times} P");
    }

    fn arb_ast() -> impl Strategy<Value = ExprAst> {
        let leaf = (1u32..4).prop_map(ExprAst::Power);
        leaf.prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                (prop_oneof![Just(BinOp::Circ), Just(BinOp::Prec), Just(BinOp::Bullet), Just(BinOp::HatTimes)],
                 prop::collection::vec(inner.clone(), 2..4))
                    .prop_map(|(op, xs)| ExprAst::Chain(op, xs)),
                (1u64..5, inner.clone()).prop_map(|(n, x)| ExprAst::Scaled(n, Box::new(x))),
                (inner.clone(), prop::collection::vec((any::<bool>(), inner), 1..3)).prop_map(|(first, rest)| {
                    let mut ts = vec![(false, first)];
                    ts.extend(rest);
                    ExprAst::Sum(ts)
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_is_stable(a in arb_ast()) {
            let text = a.to_string();
            let b = ExprAst::parse(&text).unwrap();
            prop_assert_eq!(&b, &a);
            prop_assert_eq!(b.to_string(), text.clone());
            prop_assert_eq!(ExprAst::parse(&b.to_string()).unwrap(), b.clone());
            prop_assert_eq!(a.eval(), b.eval());
        }
    }
}
