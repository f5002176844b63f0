//! Emitted PDE systems.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ncpoly::{JsonPoly, NCPoly, Rules, Substitution};
use crate::scalar::Scalar;

pub const PDE_SCHEMA: &str = "quasishuffle.pde/1";

/// Which identity and which reduction produced a system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub identity: String,
    pub reduction: String,
}

/// `body · right_factor = 0`; the factor is kept apart so it can be printed
/// the way the equation is usually written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation<S: Scalar> {
    pub body: NCPoly<S>,
    pub right_factor: Option<NCPoly<S>>,
}

impl<S: Scalar> Equation<S> {
    pub fn new(body: NCPoly<S>) -> Self {
        Equation { body, right_factor: None }
    }

    pub fn with_factor(body: NCPoly<S>, factor: NCPoly<S>) -> Self {
        Equation { body, right_factor: Some(factor) }
    }

    /// The left-hand side multiplied out.
    pub fn expanded(&self) -> NCPoly<S> {
        match &self.right_factor {
            Some(f) => self.body.mul(f),
            None => self.body.clone(),
        }
    }

    pub fn substitute(&self, s: &Substitution<S>) -> Result<Self> {
        Ok(Equation {
            body: self.body.substitute(s)?,
            right_factor: self.right_factor.as_ref().map(|f| f.substitute(s)).transpose()?,
        })
    }

    pub fn to_text(&self) -> String {
        match &self.right_factor {
            Some(f) => format!("({})*{} = 0", self.body, f),
            None => format!("{} = 0", self.body),
        }
    }

    pub fn to_latex(&self) -> String {
        match &self.right_factor {
            Some(f) => format!("\\left({}\\right) {} = 0", self.body.to_latex(), f.to_latex()),
            None => format!("{} = 0", self.body.to_latex()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeSystem<S: Scalar> {
    pub name: String,
    pub provenance: Provenance,
    pub equations: Vec<Equation<S>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonEquation {
    pub body: JsonPoly,
    pub right_factor: Option<JsonPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonPde {
    pub schema: String,
    pub name: String,
    pub provenance: Provenance,
    pub equations: Vec<JsonEquation>,
}

impl<S: Scalar> PdeSystem<S> {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} [{}; {}]\n", self.name, self.provenance.identity, self.provenance.reduction);
        for e in &self.equations {
            out.push_str("  ");
            out.push_str(&e.to_text());
            out.push('\n');
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let eqs: Vec<String> = self.equations.iter().map(|e| e.to_latex()).collect();
        format!("\\begin{{aligned}} {} \\end{{aligned}}", eqs.join(" \\\\ "))
    }

    pub fn to_json(&self) -> JsonPde {
        JsonPde {
            schema: PDE_SCHEMA.into(),
            name: self.name.clone(),
            provenance: self.provenance.clone(),
            equations: self
                .equations
                .iter()
                .map(|e| JsonEquation { body: e.body.to_json(), right_factor: e.right_factor.as_ref().map(|f| f.to_json()) })
                .collect(),
        }
    }

    pub fn from_json(j: &JsonPde, rules: Rules) -> Result<Self> {
        let equations = j
            .equations
            .iter()
            .map(|e| {
                Ok(Equation {
                    body: NCPoly::from_json(&e.body, rules)?,
                    right_factor: e.right_factor.as_ref().map(|f| NCPoly::from_json(f, rules)).transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PdeSystem { name: j.name.clone(), provenance: j.provenance.clone(), equations })
    }
}
