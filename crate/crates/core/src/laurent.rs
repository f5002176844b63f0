//! Laurent series in λ^{−1} with coefficients in ℬ, the series V, the maps ℓ
//! and 𝐫, Φ_AKNS and the generalized AKNS flow tables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::diffexpr::{check_image, DiffExpr, Derivations, ImageReport, ImageTerm};
use crate::error::{Error, Result};
use crate::ncpoly::{symmetrize, DerivationTable, NCPoly, Symbol};
use crate::psido::EXACT;
use crate::qshuffle::{hat_times, kp_identity_terms, qshuffle, AlgElement, Composition};
use crate::ring::RingElem;
use crate::scalar::Rational;

/// `Σ_{m ≤ M} λ^m X_m`, accurate at every exponent `m ≥ floor`.
#[derive(Clone, PartialEq)]
pub struct LaurentSeries<C: RingElem> {
    coeffs: BTreeMap<i32, C>,
    floor: i32,
    zero: C,
}

impl<C: RingElem> LaurentSeries<C> {
    pub fn zero(zero: C) -> Self {
        LaurentSeries { coeffs: BTreeMap::new(), floor: EXACT, zero: zero.zero_like() }
    }

    pub fn monomial(c: C, e: i32) -> Self {
        let z = c.zero_like();
        LaurentSeries::from_coeffs(z, [(e, c)], EXACT)
    }

    pub fn from_coeffs(zero: C, coeffs: impl IntoIterator<Item = (i32, C)>, floor: i32) -> Self {
        let mut out = LaurentSeries { coeffs: BTreeMap::new(), floor, zero };
        for (e, c) in coeffs {
            out.add_at(e, c);
        }
        out
    }

    fn add_at(&mut self, e: i32, c: C) {
        if e < self.floor || c.is_zero() {
            return;
        }
        match self.coeffs.remove(&e) {
            Some(x) => {
                let s = x.add_ref(&c);
                if !s.is_zero() {
                    self.coeffs.insert(e, s);
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor <= EXACT
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn ord(&self) -> i32 {
        self.coeffs.keys().next_back().copied().unwrap_or(self.floor.saturating_sub(1).max(EXACT))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &C)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, e: i32) -> C {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn coeff_exact(&self, e: i32) -> Result<C> {
        if e < self.floor {
            return Err(Error::InsufficientDepth { needed: e, floor: self.floor, depth: 0 });
        }
        Ok(self.coeff(e))
    }

    fn combine(&self, o: &Self, neg: bool) -> Self {
        let mut out = LaurentSeries { coeffs: BTreeMap::new(), floor: self.floor.max(o.floor), zero: self.zero.clone() };
        for (e, c) in &self.coeffs {
            out.add_at(*e, c.clone());
        }
        for (e, c) in &o.coeffs {
            out.add_at(*e, if neg { c.neg_ref() } else { c.clone() });
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.neg_ref())).collect(),
            floor: self.floor,
            zero: self.zero.clone(),
        }
    }

    pub fn scale(&self, s: &C::Scalar) -> Self {
        LaurentSeries::from_coeffs(self.zero.clone(), self.coeffs.iter().map(|(e, c)| (*e, c.scale(s))), self.floor)
    }

    pub fn truncate(&self, cutoff: i32) -> Self {
        let floor = self.floor.max(cutoff);
        LaurentSeries {
            coeffs: self.coeffs.range(floor..).map(|(e, c)| (*e, c.clone())).collect(),
            floor,
            zero: self.zero.clone(),
        }
    }

    /// `X_{≥0}`; exact once the floor reaches exponent 0.
    pub fn proj_geq0(&self) -> Self {
        LaurentSeries {
            coeffs: self.coeffs.range(0..).map(|(e, c)| (*e, c.clone())).collect(),
            floor: if self.floor <= 0 { EXACT } else { self.floor },
            zero: self.zero.clone(),
        }
    }

    /// `X_{<0} = X − X_{≥0}`.
    pub fn proj_lt0(&self) -> Self {
        LaurentSeries {
            coeffs: self.coeffs.range(..0).map(|(e, c)| (*e, c.clone())).collect(),
            floor: self.floor,
            zero: self.zero.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_to(o, EXACT)
    }

    /// Cauchy product at exponents `≥ cutoff`, floor tracked as for ΨDOs.
    pub fn mul_to(&self, o: &Self, cutoff: i32) -> Self {
        let from_a = if self.is_exact() { EXACT } else { self.floor + o.ord() };
        let from_b = if o.is_exact() { EXACT } else { o.floor + self.ord() };
        let floor = from_a.max(from_b).max(cutoff);
        let mut out = LaurentSeries { coeffs: BTreeMap::new(), floor, zero: self.zero.clone() };
        for (&i, a) in &self.coeffs {
            for (&j, b) in o.coeffs.range(floor - i..) {
                out.add_at(i + j, a.mul_ref(b));
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Every coefficient multiplied on the right by `c`.
    pub fn mul_right(&self, c: &C) -> Self {
        LaurentSeries::from_coeffs(self.zero.clone(), self.coeffs.iter().map(|(e, x)| (*e, x.mul_ref(c))), self.floor)
    }
}

impl<C: RingElem> fmt::Display for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "({c})")?,
                1 => write!(f, "lambda ({c})")?,
                e => write!(f, "lambda^{e} ({c})")?,
            }
        }
        if !self.is_exact() {
            write!(f, " + O(lambda^{})", self.floor - 1)?;
        }
        Ok(())
    }
}

impl<C: RingElem> fmt::Debug for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Derivations shared between threads.
pub type SharedDerivations<C> = Arc<dyn Derivations<C> + Send + Sync>;

type Rebuild<C> = Arc<dyn Fn(usize) -> Result<AknsContext<C>> + Send + Sync>;

/// The series `V = J + Σ_{m=1}^{D} λ^{−m}v_m` with its flows and a Φ cache.
pub struct AknsContext<C: RingElem> {
    depth: usize,
    flows: usize,
    j: C,
    v: Vec<C>,
    lam_v: LaurentSeries<C>,
    /// `images[n−1][m−1]` = λ^{−m} coefficient of `[(λⁿVⁿ)_{≥0}, V]`.
    images: Vec<Vec<C>>,
    derivations: Option<SharedDerivations<C>>,
    rebuild: Option<Rebuild<C>>,
    phi_cache: RwLock<BTreeMap<Composition, C>>,
    deeper: OnceLock<Box<AknsContext<C>>>,
}

impl<C: RingElem> fmt::Debug for AknsContext<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AknsContext").field("depth", &self.depth).field("flows", &self.flows).finish()
    }
}

pub const DEFAULT_DEPTH: usize = 6;

/// Flow images `δ_n v_m` for `m ≤ D − n`, with both commutator forms compared.
fn build_flow_images<C: RingElem>(lam_v: &LaurentSeries<C>, v: &LaurentSeries<C>, n: usize) -> Result<Vec<C>> {
    let mut pow = lam_v.clone();
    for _ in 1..n {
        pow = pow.mul(lam_v);
    }
    let plus = pow.proj_geq0().commutator(v);
    let minus = pow.proj_lt0().commutator(v).neg();
    let floor = plus.floor().max(minus.floor());
    if plus.truncate(floor) != minus.truncate(floor) {
        return Err(Error::mismatch(format!("t{n} AKNS table"), "the two commutator forms differ"));
    }
    for (e, c) in plus.terms() {
        if *e >= 0 {
            return Err(Error::mismatch(format!("t{n} AKNS table"), format!("nonzero lambda^{e} coefficient {c}")));
        }
    }
    let mut out = Vec::new();
    let mut m = 1;
    while -m >= floor {
        out.push(plus.coeff(-m));
        m += 1;
    }
    Ok(out)
}

impl<C: RingElem> AknsContext<C> {
    /// Context over explicit coefficients `J = v₀` and `v₁…v_D`.
    pub fn from_coefficients(j: C, v: Vec<C>, flows: usize) -> Result<Self> {
        let depth = v.len();
        let z = j.zero_like();
        let vser = LaurentSeries::from_coeffs(
            z.clone(),
            std::iter::once((0, j.clone())).chain(v.iter().enumerate().map(|(i, c)| (-(i as i32) - 1, c.clone()))),
            -(depth as i32),
        );
        let lam_v = LaurentSeries::from_coeffs(z, vser.terms().map(|(e, c)| (e + 1, c.clone())), 1 - depth as i32);
        let images = (1..=flows).map(|n| build_flow_images(&lam_v, &vser, n)).collect::<Result<Vec<_>>>()?;
        Ok(AknsContext {
            depth,
            flows,
            j,
            v,
            lam_v,
            images,
            derivations: None,
            rebuild: None,
            phi_cache: RwLock::new(BTreeMap::new()),
            deeper: OnceLock::new(),
        })
    }

    pub fn with_derivations(mut self, d: SharedDerivations<C>) -> Self {
        self.derivations = Some(d);
        self
    }

    /// How to build the same context at another depth (used for the retry).
    pub fn with_rebuild(mut self, f: impl Fn(usize) -> Result<AknsContext<C>> + Send + Sync + 'static) -> Self {
        self.rebuild = Some(Arc::new(f));
        self
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn flows(&self) -> usize {
        self.flows
    }

    pub fn j(&self) -> &C {
        &self.j
    }

    /// `v_m` for `1 ≤ m ≤ D`.
    pub fn v(&self, m: usize) -> &C {
        &self.v[m - 1]
    }

    pub fn lam_v(&self) -> &LaurentSeries<C> {
        &self.lam_v
    }

    /// `δ_n v_m`, when the depth makes it exact.
    pub fn flow_image(&self, n: usize, m: usize) -> Result<&C> {
        self.images
            .get(n.wrapping_sub(1))
            .and_then(|t| t.get(m.wrapping_sub(1)))
            .ok_or(Error::MissingTableEntry { symbol: format!("v{m}"), flow: n })
    }

    pub fn derivations(&self) -> Result<&(dyn Derivations<C> + Send + Sync)> {
        self.derivations.as_deref().ok_or_else(|| Error::Unresolved("no derivations installed".into()))
    }

    /// The same context at depth `D + 2`.
    pub fn deeper(&self) -> Result<&AknsContext<C>> {
        if let Some(d) = self.deeper.get() {
            return Ok(d);
        }
        let f = self
            .rebuild
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("context cannot be rebuilt deeper".into()))?;
        let d = f(self.depth + 2)?;
        Ok(self.deeper.get_or_init(|| Box::new(d)))
    }

    fn tag(&self, e: Error) -> Error {
        match e {
            Error::InsufficientDepth { needed, floor, .. } => {
                Error::InsufficientDepth { needed, floor, depth: self.depth }
            }
            e => e,
        }
    }

    fn ell_to(&self, w: &Composition, target: i32) -> LaurentSeries<C> {
        let mut remaining = w.weight() as i32 - 1;
        let cut = |r: i32| if target <= EXACT { EXACT } else { target - r };
        let mut x = self.lam_v.truncate(cut(remaining));
        for (pi, &part) in w.parts().iter().enumerate() {
            for unit in 0..part {
                if pi == 0 && unit == 0 {
                    continue;
                }
                remaining -= 1;
                x = if unit == 0 {
                    x.proj_lt0().neg().mul_to(&self.lam_v, cut(remaining))
                } else {
                    x.mul_to(&self.lam_v, cut(remaining))
                };
            }
        }
        x
    }

    fn r_to(&self, w: &Composition, target: i32) -> LaurentSeries<C> {
        let mut remaining = w.weight() as i32 - 1;
        let cut = |r: i32| if target <= EXACT { EXACT } else { target - r };
        let mut x = self.lam_v.truncate(cut(remaining));
        let parts = w.parts();
        for (pi, &part) in parts.iter().enumerate().rev() {
            for unit in 0..part {
                if pi == parts.len() - 1 && unit == 0 {
                    continue;
                }
                remaining -= 1;
                x = if unit == 0 {
                    self.lam_v.mul_to(&x.proj_geq0(), cut(remaining)).neg()
                } else {
                    self.lam_v.mul_to(&x, cut(remaining))
                };
            }
        }
        x
    }

    /// ℓ(w): `ℓ(P) = λV`, `ℓ(α≺P) = −ℓ(α)_{<0}λV`, `ℓ(α•P) = ℓ(α)λV`.
    pub fn ell(&self, w: &Composition) -> LaurentSeries<C> {
        self.ell_to(w, EXACT)
    }

    /// 𝐫(w): `𝐫(P) = λV`, `𝐫(P≺α) = −λV𝐫(α)_{≥0}`, `𝐫(P•α) = λV𝐫(α)`.
    pub fn r(&self, w: &Composition) -> LaurentSeries<C> {
        self.r_to(w, EXACT)
    }

    /// `ℓ(w)_{−1}·J` and `𝐫(w)_{−1}·J`.
    pub fn phi_both(&self, w: &Composition) -> Result<(C, C)> {
        let l = self.ell_to(w, -1).coeff_exact(-1).map_err(|e| self.tag(e))?;
        let r = self.r_to(w, -1).coeff_exact(-1).map_err(|e| self.tag(e))?;
        Ok((l.mul_ref(&self.j), r.mul_ref(&self.j)))
    }

    /// Φ(w) = ℓ(w)_{−1}J, cross-checked against 𝐫(w)_{−1}J.
    pub fn phi_word(&self, w: &Composition) -> Result<C> {
        if let Some(p) = self.phi_cache.read().expect("phi cache").get(w) {
            return Ok(p.clone());
        }
        let (l, r) = self.phi_both(w)?;
        if l != r {
            return Err(Error::mismatch(format!("Phi({w}) via l and r"), format!("{l} != {r}")));
        }
        self.phi_cache.write().expect("phi cache").insert(w.clone(), l.clone());
        Ok(l)
    }

    pub fn phi(&self, a: &AlgElement) -> Result<C> {
        let mut out = self.j.zero_like();
        for (w, c) in a.terms() {
            let s = <C::Scalar as crate::scalar::Scalar>::from_rational(c.clone());
            out = out.add_ref(&self.phi_word(w)?.scale(&s));
        }
        Ok(out)
    }

    pub fn ddt(&self, n: usize, c: &C) -> Result<C> {
        self.derivations()?.dt(n, c).map_err(|e| self.tag(e))
    }
}

/// Letter names of the abstract mode.
pub fn v_name(m: usize) -> String {
    format!("v{m}")
}

pub fn j_letter() -> NCPoly<Rational> {
    NCPoly::letter(crate::ncpoly::Letter::new(Symbol::constant("J"), 0))
}

/// Flow tables of the abstract mode; `∂_x` is the t₁ flow.
pub struct AbstractDerivations {
    tables: Vec<DerivationTable<Rational>>,
}

impl AbstractDerivations {
    pub fn table(&self, n: usize) -> Result<&DerivationTable<Rational>> {
        self.tables.get(n.wrapping_sub(1)).ok_or(Error::MissingTableEntry { symbol: "v".into(), flow: n })
    }
}

impl Derivations<NCPoly<Rational>> for AbstractDerivations {
    fn dx(&self, c: &NCPoly<Rational>) -> Result<NCPoly<Rational>> {
        self.table(1)?.ddt(c)
    }
    fn dt(&self, flow: usize, c: &NCPoly<Rational>) -> Result<NCPoly<Rational>> {
        self.table(flow)?.ddt(c)
    }
}

pub type AbstractAkns = AknsContext<NCPoly<Rational>>;

impl AknsContext<NCPoly<Rational>> {
    /// Free letters `J, v₁, …, v_D` with `J` constant; tables from the flows.
    pub fn abstract_mode(depth: usize, flows: usize) -> Result<Self> {
        if depth < 2 {
            return Err(Error::InvalidArgument("AKNS depth must be at least 2".into()));
        }
        let v = (1..=depth).map(|m| NCPoly::sym(&v_name(m))).collect();
        let ctx = AknsContext::from_coefficients(j_letter(), v, flows)?;
        let tables = ctx
            .images
            .iter()
            .enumerate()
            .map(|(i, imgs)| {
                let mut t = DerivationTable::new(i + 1);
                for (k, p) in imgs.iter().enumerate() {
                    t.insert(Symbol::new(&v_name(k + 1)), p.clone());
                }
                t
            })
            .collect();
        Ok(ctx
            .with_derivations(Arc::new(AbstractDerivations { tables }))
            .with_rebuild(move |d| AknsContext::abstract_mode(d, flows)))
    }

    /// True iff the t₁ images are `[J, v_{m+1}] + [v₁, v_m]`.
    pub fn t1_is_gakns1(&self) -> bool {
        let imgs = &self.images[0];
        !imgs.is_empty()
            && imgs.iter().enumerate().all(|(i, p)| {
                let m = i + 1;
                *p == self.j.commutator(self.v(m + 1)).add(&self.v(1).commutator(self.v(m)))
            })
    }
}

/// Run `f`, retrying once at depth `D + 2` on insufficient depth.
pub fn with_retry<C: RingElem, T>(ctx: &AknsContext<C>, f: impl Fn(&AknsContext<C>) -> Result<T>) -> Result<T> {
    match f(ctx) {
        Err(e) if e.is_depth() => f(ctx.deeper()?),
        r => r,
    }
}

pub fn ell_akns<C: RingElem>(w: &Composition, ctx: &AknsContext<C>) -> LaurentSeries<C> {
    ctx.ell(w)
}

pub fn r_akns<C: RingElem>(w: &Composition, ctx: &AknsContext<C>) -> LaurentSeries<C> {
    ctx.r(w)
}

pub fn phi_akns<C: RingElem>(a: &AlgElement, ctx: &AknsContext<C>) -> Result<C> {
    ctx.phi(a)
}

/// `Φ(a ×̂ b) = Φ(a)Φ(b)`.
pub fn verify_akns_hom<C: RingElem>(a: &AlgElement, b: &AlgElement, ctx: &AknsContext<C>) -> Result<bool> {
    with_retry(ctx, |c| Ok(c.phi(&hat_times(a, b))? == c.phi(a)?.mul_ref(&c.phi(b)?)))
}

/// `Φ(w)_{t_n} = Φ(P^{•n} ∘ w)`.
pub fn verify_akns_flow<C: RingElem>(w: &Composition, n: usize, ctx: &AknsContext<C>) -> Result<bool> {
    let pn = AlgElement::p_pow(n as u32);
    with_retry(ctx, |c| {
        let lhs = c.ddt(n, &c.phi_word(w)?)?;
        let rhs = c.phi(&qshuffle(&pn, &AlgElement::basis(w.clone())))?;
        Ok(lhs == rhs)
    })
}

/// `(Φ(P^{•n}))_{t_k} = (Φ(P^{•k}))_{t_n}`.
pub fn verify_flow_symmetry<C: RingElem>(n: usize, k: usize, ctx: &AknsContext<C>) -> Result<bool> {
    with_retry(ctx, |c| {
        let a = c.ddt(k, &c.phi(&AlgElement::p_pow(n as u32))?)?;
        let b = c.ddt(n, &c.phi(&AlgElement::p_pow(k as u32))?)?;
        Ok(a == b)
    })
}

/// `Φ(P) = v₂J`, `Φ(P^{•2})` and `Φ(P^{•3})` written with symmetrized products
/// of the abstract letters, as usually displayed.
pub fn displayed_phi_powers() -> Result<[NCPoly<Rational>; 3]> {
    let l = |s: &str| NCPoly::<Rational>::sym(s);
    let j = j_letter();
    let (v1, v2, v3, v4) = (l("v1"), l("v2"), l("v3"), l("v4"));
    let half = Rational::new(1, 2)?;
    let s2 = j.anticommutator(&v3).add(&v1.anticommutator(&v2));
    let s3 = symmetrize(&[j.clone(), j.clone(), v4])?
        .scale(&half)
        .add(&symmetrize(&[j.clone(), v1.clone(), v3])?)
        .add(&symmetrize(&[j.clone(), v2.clone(), v2.clone()])?.scale(&half))
        .add(&symmetrize(&[v1.clone(), v1, v2.clone()])?.scale(&half));
    Ok([v2.mul(&j), s2.mul(&j), s3.mul(&j)])
}

/// `{J,v₃} + {v₁,v₂}`, the coefficient with `Φ(P^{•2}) = (…)J`.
pub fn s2<C: RingElem>(j: &C, v1: &C, v2: &C, v3: &C) -> C {
    let anti = |a: &C, b: &C| a.mul_ref(b).add_ref(&b.mul_ref(a));
    anti(j, v3).add_ref(&anti(v1, v2))
}

pub const S2_LABEL: &str = "{J,v3} + {v1,v2}";

/// The KP identity in the displayed AKNS form
/// `(4v₂,_{t₃} − v₂,_{xxx} − 3S_{t₂} − 6(v₂Jv₂)_x)J + 6[v₂J, SJ]`, `S = {J,v₃}+{v₁,v₂}`,
/// one summand per algebra term (the commutator appears as `−6[SJ, v₂J]`).
pub fn akns_kp_terms<C: RingElem>(j: &C, v1: &C, v2: &C, v3: &C) -> Vec<ImageTerm<C>> {
    let jj = || DiffExpr::atom("J", j.clone());
    let vv2 = || DiffExpr::atom("v2", v2.clone());
    let s = || DiffExpr::atom(S2_LABEL, s2(j, v1, v2, v3));
    let terms = kp_identity_terms();
    let find = |label: &str| terms.iter().find(|t| t.label == label).expect("known identity term").clone();
    vec![
        ImageTerm { term: find("P^3 o P"), sign: 1, expr: vv2().dt(3).times(jj()) },
        ImageTerm { term: find("P o P o P o P"), sign: 1, expr: vv2().dx_n(3).times(jj()) },
        ImageTerm { term: find("P o (P x P)"), sign: 1, expr: vv2().times(jj()).times(vv2()).dx().times(jj()) },
        ImageTerm { term: find("[P^2, P]_x"), sign: -1, expr: s().times(jj()).commutator(vv2().times(jj())) },
        ImageTerm { term: find("P^2 o P^2"), sign: -1, expr: s().dt(2).times(jj()) },
    ]
}

/// Φ of the KP identity against its displayed AKNS form.
#[derive(Clone, Debug)]
pub struct AknsIdentityReport<C> {
    pub depth: usize,
    /// The displayed form, unevaluated.
    pub equation: String,
    pub image: ImageReport<C>,
}

impl<C: RingElem> AknsIdentityReport<C> {
    pub fn passed(&self) -> bool {
        self.image.passed()
    }
}

/// Term-by-term comparison of Φ applied to the KP identity with the displayed
/// AKNS equation, then evaluation of the whole equation through the flows.
pub fn akns_image_of_kp_identity<C: RingElem>(ctx: &AknsContext<C>) -> Result<AknsIdentityReport<C>> {
    with_retry(ctx, |c| {
        let terms = akns_kp_terms(c.j(), c.v(1), c.v(2), c.v(3));
        let equation = crate::diffexpr::residual_expr(&terms).to_string();
        let image = check_image(&terms, &|a| c.phi(a), c.derivations()?)?;
        Ok(AknsIdentityReport { depth: c.depth(), equation, image })
    })
}

/// The displayed AKNS equation with no flows resolved.
pub fn akns_kp_equation_unevaluated<C: RingElem>(ctx: &AknsContext<C>) -> DiffExpr<C> {
    crate::diffexpr::residual_expr(&akns_kp_terms(ctx.j(), ctx.v(1), ctx.v(2), ctx.v(3)))
}
