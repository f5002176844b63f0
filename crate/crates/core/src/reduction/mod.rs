//! The V²=V and V³=I reductions, PDE extraction, and the AKNS → KP check.

use std::collections::BTreeMap;

use crate::diffexpr::Derivations;
use crate::error::{Error, Result};
use crate::laurent::AknsContext;
use crate::matrix::Matrix;
use crate::ncpoly::{parse_poly, DerivationTable, Letter, NCPoly, Rules, Symbol};
use crate::ring::RingElem;
use crate::scalar::Scalar;

mod pde;
mod v2;
mod v3;

pub use pde::{Equation, JsonEquation, JsonPde, PdeSystem, Provenance, PDE_SCHEMA};
pub use v2::*;
pub use v3::*;

/// Flows given by evolution rules `s_{t_n} ↦ p` on the entry symbols.
#[derive(Clone, Debug, Default)]
pub struct EvolutionRules<S: Scalar> {
    tables: BTreeMap<usize, DerivationTable<S>>,
}

impl<S: Scalar> EvolutionRules<S> {
    pub fn new() -> Self {
        EvolutionRules { tables: BTreeMap::new() }
    }

    /// Install `∂_{t_n} symbol = p`.
    pub fn insert(&mut self, flow: usize, symbol: &str, p: NCPoly<S>) {
        self.tables.entry(flow).or_insert_with(|| DerivationTable::new(flow)).insert(Symbol::new(symbol), p);
    }

    /// Rules given as text, parsed under `rules`.
    pub fn parse(entries: &[(usize, &str, &str)], rules: Rules) -> Result<Self> {
        let mut out = Self::new();
        for (n, s, p) in entries {
            out.insert(*n, s, parse_poly(p, rules)?);
        }
        Ok(out)
    }

    pub fn rule(&self, flow: usize, symbol: &str) -> Option<&NCPoly<S>> {
        self.tables.get(&flow).and_then(|t| t.get(Symbol::new(symbol)))
    }

    pub fn table(&self, flow: usize) -> Result<&DerivationTable<S>> {
        self.tables.get(&flow).ok_or_else(|| Error::Unresolved(format!("no evolution rules for t{flow}")))
    }

    pub fn ddt_poly(&self, flow: usize, p: &NCPoly<S>) -> Result<NCPoly<S>> {
        self.table(flow)?.ddt(p).map_err(|e| match e {
            Error::MissingTableEntry { symbol, flow } => Error::Unresolved(format!("{symbol}_t{flow}")),
            e => e,
        })
    }
}

impl<S: Scalar> Derivations<Matrix<S>> for EvolutionRules<S> {
    fn dx(&self, c: &Matrix<S>) -> Result<Matrix<S>> {
        Ok(c.ddx())
    }
    fn dt(&self, flow: usize, c: &Matrix<S>) -> Result<Matrix<S>> {
        c.map_polys(&mut |p| self.ddt_poly(flow, p))
    }
}

impl<S: Scalar> Derivations<NCPoly<S>> for EvolutionRules<S> {
    fn dx(&self, c: &NCPoly<S>) -> Result<NCPoly<S>> {
        Ok(c.ddx())
    }
    fn dt(&self, flow: usize, c: &NCPoly<S>) -> Result<NCPoly<S>> {
        self.ddt_poly(flow, c)
    }
}

/// Table sending each listed symbol `s` to a fresh unknown letter `s_{suffix}`.
pub fn unknown_rates<S: Scalar>(flow: usize, symbols: &[&str], suffix: &str, rules: Rules) -> EvolutionRules<S> {
    let mut out = EvolutionRules::new();
    for s in symbols {
        out.insert(flow, s, NCPoly::sym(&format!("{s}_{suffix}")).with_rules(rules));
    }
    out
}

/// Image of a polynomial under a letter-to-matrix assignment.
pub fn poly_to_matrix<S: Scalar>(
    p: &NCPoly<S>,
    dim: usize,
    image: &dyn Fn(Letter) -> Result<Matrix<S>>,
) -> Result<Matrix<S>> {
    let mut out = Matrix::zero(dim);
    for (w, c) in p.terms() {
        let mut prod = Matrix::identity(dim).scale(c);
        for l in w.iter() {
            prod = prod.mul_ref(&image(*l)?);
        }
        out = out.add_ref(&prod);
    }
    Ok(out)
}

/// The polynomial constraint imposed on `V`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// `V² = V`.
    Idempotent,
    /// `V³ = I`.
    CubeRootOfUnity,
}

impl Constraint {
    pub fn label(self) -> &'static str {
        match self {
            Constraint::Idempotent => "V^2 = V",
            Constraint::CubeRootOfUnity => "V^3 = I",
        }
    }
}

/// Explicit matrix realization of a reduced `V = J + Σ λ^{−m} v_m`.
#[derive(Clone, Debug)]
pub struct MatrixInstance<S: Scalar> {
    pub constraint: Constraint,
    pub rules: Rules,
    pub j: Matrix<S>,
    /// `v[m−1] = v_m`, `v₁ = u`.
    pub v: Vec<Matrix<S>>,
}

impl<S: Scalar> MatrixInstance<S> {
    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    pub fn depth(&self) -> usize {
        self.v.len()
    }

    /// `v_m` with `v₀ = J`.
    pub fn vm(&self, m: usize) -> &Matrix<S> {
        if m == 0 {
            &self.j
        } else {
            &self.v[m - 1]
        }
    }

    pub fn u(&self) -> &Matrix<S> {
        &self.v[0]
    }

    /// `v_{m,x} = [J, v_{m+1}] + [v₁, v_m]` for every `m < depth`.
    pub fn gakns1_holds(&self) -> bool {
        (1..self.depth()).all(|m| {
            self.vm(m).ddx() == self.j.commutator(self.vm(m + 1)).add_ref(&self.u().commutator(self.vm(m)))
        })
    }

    /// Orders `m ≤ depth` at which the constraint fails.
    pub fn constraint_failures(&self) -> Vec<usize> {
        (0..=self.depth()).filter(|&m| !constraint_coefficient(self, m, &|i| self.vm(i).clone()).is_zero()).collect()
    }

    /// The context of the AKNS maps on this instance, with `flows` resolving `∂_{t_n}`.
    pub fn akns_context(
        &self,
        nflows: usize,
        flows: EvolutionRules<S>,
    ) -> Result<AknsContext<Matrix<S>>> {
        Ok(AknsContext::from_coefficients(self.j.clone(), self.v.clone(), nflows)?
            .with_derivations(std::sync::Arc::new(flows)))
    }

    /// `∂_{t_n} v_m` by the evolution rules equals the flow image `δ_n v_m`
    /// for every `m` the context resolves.
    pub fn flow_consistent(&self, ctx: &AknsContext<Matrix<S>>, n: usize) -> Result<bool> {
        let mut m = 1;
        let mut checked = 0;
        while let Ok(img) = ctx.flow_image(n, m) {
            if ctx.ddt(n, self.vm(m))? != *img {
                return Ok(false);
            }
            checked += 1;
            m += 1;
        }
        Ok(checked > 0)
    }

    /// `δ_n` applied to the constraint vanishes at every order it resolves.
    pub fn constraint_preserved(&self, ctx: &AknsContext<Matrix<S>>, n: usize) -> Result<bool> {
        let mut m = 1;
        let mut checked = 0;
        while ctx.flow_image(n, m).is_ok() {
            let d = |i: usize| -> Matrix<S> {
                if i == 0 {
                    self.j.zero_like()
                } else {
                    ctx.flow_image(n, i).expect("resolved order").clone()
                }
            };
            if !constraint_variation(self, m, &d).is_zero() {
                return Ok(false);
            }
            checked += 1;
            m += 1;
        }
        Ok(checked > 0)
    }
}

/// λ^{−m} coefficient of `V² − V` or `V³ − I` with coefficients from `v`.
fn constraint_coefficient<S: Scalar>(inst: &MatrixInstance<S>, m: usize, v: &dyn Fn(usize) -> Matrix<S>) -> Matrix<S> {
    let dim = inst.dim();
    match inst.constraint {
        Constraint::Idempotent => {
            let mut acc = v(m).neg_ref();
            for i in 0..=m {
                acc = acc.add_ref(&v(i).mul_ref(&v(m - i)));
            }
            acc
        }
        Constraint::CubeRootOfUnity => {
            let mut acc = if m == 0 { Matrix::identity(dim).neg_ref() } else { Matrix::zero(dim) };
            for a in 0..=m {
                for b in 0..=m - a {
                    acc = acc.add_ref(&v(a).mul_ref(&v(b)).mul_ref(&v(m - a - b)));
                }
            }
            acc
        }
    }
}

/// λ^{−m} coefficient of the variation of the constraint along `δv`.
fn constraint_variation<S: Scalar>(inst: &MatrixInstance<S>, m: usize, dv: &dyn Fn(usize) -> Matrix<S>) -> Matrix<S> {
    let v = |i: usize| inst.vm(i).clone();
    match inst.constraint {
        Constraint::Idempotent => {
            let mut acc = dv(m).neg_ref();
            for i in 0..=m {
                acc = acc.add_ref(&dv(i).mul_ref(&v(m - i))).add_ref(&v(i).mul_ref(&dv(m - i)));
            }
            acc
        }
        Constraint::CubeRootOfUnity => {
            let mut acc = Matrix::zero(inst.dim());
            for a in 0..=m {
                for b in 0..=m - a {
                    let c = m - a - b;
                    acc = acc
                        .add_ref(&dv(a).mul_ref(&v(b)).mul_ref(&v(c)))
                        .add_ref(&v(a).mul_ref(&dv(b)).mul_ref(&v(c)))
                        .add_ref(&v(a).mul_ref(&v(b)).mul_ref(&dv(c)));
                }
            }
            acc
        }
    }
}
