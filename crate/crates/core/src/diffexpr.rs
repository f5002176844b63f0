//! Unevaluated differential expressions over a coefficient algebra.
//!
//! Equations such as the potential KP equation are built from named atoms
//! (`φ_x`, `v2`, …) with x- and t-derivatives left symbolic, then evaluated
//! through a [`Derivations`] provider that knows the flow tables.

use std::fmt;

use crate::error::{Error, Result};
use crate::qshuffle::{kp_identity_terms, AlgElement, IdentityTerm};
use crate::ring::RingElem;

/// Resolves `∂_x` and `∂_{t_n}` on a coefficient algebra.
pub trait Derivations<C> {
    fn dx(&self, c: &C) -> Result<C>;
    fn dt(&self, flow: usize, c: &C) -> Result<C>;
}

/// Provider with no flow tables: x-derivatives only.
pub struct NoFlows;

impl<C: RingElem> Derivations<C> for NoFlows {
    fn dx(&self, c: &C) -> Result<C> {
        Ok(c.ddx())
    }
    fn dt(&self, flow: usize, _c: &C) -> Result<C> {
        Err(Error::Unresolved(format!("no table for t{flow}")))
    }
}

#[derive(Clone, Debug)]
pub enum DiffExpr<C> {
    Atom { label: String, value: C },
    Dx(Box<DiffExpr<C>>),
    Dt(usize, Box<DiffExpr<C>>),
    Sum(Vec<(i64, DiffExpr<C>)>),
    Product(Vec<DiffExpr<C>>),
    Commutator(Box<DiffExpr<C>>, Box<DiffExpr<C>>),
}

impl<C: RingElem> DiffExpr<C> {
    pub fn atom(label: impl Into<String>, value: C) -> Self {
        DiffExpr::Atom { label: label.into(), value }
    }

    pub fn dx(self) -> Self {
        DiffExpr::Dx(Box::new(self))
    }

    pub fn dx_n(self, n: usize) -> Self {
        (0..n).fold(self, |e, _| e.dx())
    }

    pub fn dt(self, flow: usize) -> Self {
        DiffExpr::Dt(flow, Box::new(self))
    }

    pub fn times(self, other: DiffExpr<C>) -> Self {
        match self {
            DiffExpr::Product(mut v) => {
                v.push(other);
                DiffExpr::Product(v)
            }
            e => DiffExpr::Product(vec![e, other]),
        }
    }

    pub fn commutator(self, other: DiffExpr<C>) -> Self {
        DiffExpr::Commutator(Box::new(self), Box::new(other))
    }

    pub fn sum(terms: Vec<(i64, DiffExpr<C>)>) -> Self {
        DiffExpr::Sum(terms)
    }

    pub fn scaled(self, c: i64) -> Self {
        DiffExpr::Sum(vec![(c, self)])
    }

    pub fn eval(&self, d: &dyn Derivations<C>) -> Result<C> {
        match self {
            DiffExpr::Atom { value, .. } => Ok(value.clone()),
            DiffExpr::Dx(e) => d.dx(&e.eval(d)?),
            DiffExpr::Dt(n, e) => d.dt(*n, &e.eval(d)?),
            DiffExpr::Sum(ts) => {
                let mut acc: Option<C> = None;
                for (c, e) in ts {
                    let v = e.eval(d)?.scale_int(*c);
                    acc = Some(match acc {
                        Some(a) => a.add_ref(&v),
                        None => v,
                    });
                }
                acc.ok_or_else(|| Error::InvalidArgument("empty sum".into()))
            }
            DiffExpr::Product(fs) => {
                let mut it = fs.iter();
                let first = it.next().ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
                let mut acc = first.eval(d)?;
                for f in it {
                    acc = acc.mul_ref(&f.eval(d)?);
                }
                Ok(acc)
            }
            DiffExpr::Commutator(a, b) => Ok(a.eval(d)?.commutator(&b.eval(d)?)),
        }
    }

    /// True when the expression contains an unresolved t-derivative.
    pub fn has_flow_derivative(&self) -> bool {
        match self {
            DiffExpr::Atom { .. } => false,
            DiffExpr::Dt(..) => true,
            DiffExpr::Dx(e) => e.has_flow_derivative(),
            DiffExpr::Sum(ts) => ts.iter().any(|(_, e)| e.has_flow_derivative()),
            DiffExpr::Product(fs) => fs.iter().any(|e| e.has_flow_derivative()),
            DiffExpr::Commutator(a, b) => a.has_flow_derivative() || b.has_flow_derivative(),
        }
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        match self {
            DiffExpr::Atom { label, .. } if !top && label.contains(' ') => write!(f, "({label})"),
            DiffExpr::Atom { label, .. } => f.write_str(label),
            DiffExpr::Dx(e) => {
                let mut k = 1;
                let mut inner = e.as_ref();
                while let DiffExpr::Dx(next) = inner {
                    k += 1;
                    inner = next;
                }
                write!(f, "(")?;
                inner.fmt_inner(f, true)?;
                write!(f, ")_{}", "x".repeat(k))
            }
            DiffExpr::Dt(n, e) => {
                write!(f, "(")?;
                e.fmt_inner(f, true)?;
                write!(f, ")_t{n}")
            }
            DiffExpr::Sum(ts) => {
                if !top {
                    write!(f, "(")?;
                }
                for (i, (c, e)) in ts.iter().enumerate() {
                    let mag = c.abs();
                    match (i, *c < 0) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    if mag != 1 {
                        write!(f, "{mag} ")?;
                    }
                    e.fmt_inner(f, false)?;
                }
                if !top {
                    write!(f, ")")?;
                }
                Ok(())
            }
            DiffExpr::Product(fs) => {
                for (i, e) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    e.fmt_inner(f, false)?;
                }
                Ok(())
            }
            DiffExpr::Commutator(a, b) => {
                write!(f, "[")?;
                a.fmt_inner(f, true)?;
                write!(f, ", ")?;
                b.fmt_inner(f, true)?;
                write!(f, "]")
            }
        }
    }
}

impl<C: RingElem> fmt::Display for DiffExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f, true)
    }
}

/// One summand of an identity image: the algebra term and the differential
/// expression it is claimed to map to. `sign` is +1 for terms of the left
/// side and −1 for terms moved over from the right side.
#[derive(Clone, Debug)]
pub struct ImageTerm<C> {
    pub term: IdentityTerm,
    pub sign: i64,
    pub expr: DiffExpr<C>,
}

impl<C: RingElem> ImageTerm<C> {
    /// The signed algebra element `±coeff·value`.
    pub fn algebra_value(&self) -> AlgElement {
        self.term.value.scale(&crate::scalar::Rational::integer(self.sign * self.term.coeff))
    }

    /// The signed differential expression `±coeff·expr`.
    pub fn signed_expr(&self) -> DiffExpr<C> {
        self.expr.clone().scaled(self.sign * self.term.coeff)
    }
}

/// The jets `φ_x`, `φ_{t₂}`, `φ_{t₃}` of a potential.
#[derive(Clone, Debug)]
pub struct PotentialJets<C> {
    pub phi_x: C,
    pub phi_t2: C,
    pub phi_t3: C,
}

fn identity_term(label: &str) -> IdentityTerm {
    kp_identity_terms().into_iter().find(|t| t.label == label).expect("known identity term")
}

/// Image of the KP identity in potential form:
/// `(4φ_{t₃} − φ_{xxx} − 6(φ_x)²)_x − 6[φ_{t₂}, φ_x] − 3φ_{t₂t₂}`, split by
/// the algebra term each summand comes from.
pub fn potential_kp_terms<C: RingElem>(jets: &PotentialJets<C>) -> Vec<ImageTerm<C>> {
    let px = || DiffExpr::atom("phi_x", jets.phi_x.clone());
    let pt2 = || DiffExpr::atom("phi_t2", jets.phi_t2.clone());
    let pt3 = || DiffExpr::atom("phi_t3", jets.phi_t3.clone());
    vec![
        ImageTerm { term: identity_term("P^3 o P"), sign: 1, expr: pt3().dx() },
        ImageTerm { term: identity_term("P o P o P o P"), sign: 1, expr: px().dx_n(3) },
        ImageTerm { term: identity_term("P o (P x P)"), sign: 1, expr: px().times(px()).dx() },
        ImageTerm { term: identity_term("[P^2, P]_x"), sign: -1, expr: pt2().commutator(px()) },
        ImageTerm { term: identity_term("P^2 o P^2"), sign: -1, expr: pt2().dt(2) },
    ]
}

/// Sum of the signed image terms.
pub fn residual_expr<C: RingElem>(terms: &[ImageTerm<C>]) -> DiffExpr<C> {
    DiffExpr::Sum(terms.iter().map(|t| (t.sign * t.term.coeff, t.expr.clone())).collect())
}

/// The potential KP equation as a single residual expression.
pub fn potential_kp_residual<C: RingElem>(jets: &PotentialJets<C>) -> DiffExpr<C> {
    residual_expr(&potential_kp_terms(jets))
}

/// Outcome of comparing an identity's Φ-image with its claimed differential form.
#[derive(Clone, Debug)]
pub struct ImageReport<C> {
    /// Per algebra term: label and whether Φ(term) equals the evaluated expression.
    pub termwise: Vec<(String, bool)>,
    /// Φ(LHS − RHS), computed directly.
    pub direct: C,
    /// The evaluated residual of the differential form.
    pub residual: C,
}

impl<C: RingElem> ImageReport<C> {
    pub fn passed(&self) -> bool {
        self.termwise.iter().all(|(_, ok)| *ok) && self.direct.is_zero() && self.residual.is_zero()
    }
}

/// Compare each `Φ(±coeff·term)` with the evaluated `±coeff·expr`, and evaluate
/// both the direct image and the residual.
pub fn check_image<C: RingElem>(
    terms: &[ImageTerm<C>],
    phi: &dyn Fn(&AlgElement) -> Result<C>,
    derivations: &dyn Derivations<C>,
) -> Result<ImageReport<C>> {
    let mut termwise = Vec::new();
    let mut direct: Option<C> = None;
    for t in terms {
        let lhs = phi(&t.algebra_value())?;
        let rhs = t.signed_expr().eval(derivations)?;
        termwise.push((t.term.label.to_string(), lhs == rhs));
        direct = Some(match direct {
            Some(d) => d.add_ref(&lhs),
            None => lhs,
        });
    }
    let residual = residual_expr(terms).eval(derivations)?;
    let direct = direct.ok_or_else(|| Error::InvalidArgument("no identity terms".into()))?;
    Ok(ImageReport { termwise, direct, residual })
}
