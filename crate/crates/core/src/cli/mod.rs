//! Command-line plumbing: output formats, `expand`, `phi` and the case runner.

mod cases;

pub use cases::*;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::ExprAst;
use crate::laurent::{self, AknsContext};
use crate::matrix::{JsonMatrix, Matrix};
use crate::ncpoly::{JsonPoly, NCPoly, Rules};
use crate::psido::{self, LaxContext};
use crate::qshuffle::AlgElement;
use crate::reduction::{akns_context_2x2, akns_context_3x3, akns_evolution, JsonPde, PdeSystem};
use crate::scalar::Scalar;

pub const EXPR_SCHEMA: &str = "quasishuffle.expr/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}`"))),
        }
    }
}

/// Where the AKNS map is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Letters `J, v₁, v₂, …` in a free algebra.
    Abstract,
    /// The 2×2 instance of `V² = V`.
    Matrix2,
    /// The 3×3 instance of `V³ = I` over ℚ(ζ).
    Matrix3,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Abstract => "abstract",
            Mode::Matrix2 => "matrix2",
            Mode::Matrix3 => "matrix3",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abstract" => Ok(Mode::Abstract),
            "matrix2" => Ok(Mode::Matrix2),
            "matrix3" => Ok(Mode::Matrix3),
            _ => Err(Error::InvalidArgument(format!("unknown mode `{s}`"))),
        }
    }
}

/// Coefficient field of a rendered value, so readers know which scalar parser applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "Q(z)")]
    Cyclotomic,
}

impl Field {
    pub fn of<S: Scalar>() -> Self {
        if S::zeta().is_some() {
            Field::Cyclotomic
        } else {
            Field::Rational
        }
    }
}

/// A rendered value in every output format at once.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArtifactValue {
    Poly { field: Field, text: String, latex: String, ast: JsonPoly },
    Matrix { field: Field, text: String, latex: String, ast: JsonMatrix },
    Pde { field: Field, text: String, latex: String, ast: JsonPde },
    Algebra { text: String, latex: String, ast: JsonAlg },
    Text { text: String },
}

impl ArtifactValue {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (ArtifactValue::Text { text }, _) => text.clone(),
            (_, Format::Json) => serde_json::to_string_pretty(self).expect("artifact serializes"),
            (
                ArtifactValue::Poly { text, latex, .. }
                | ArtifactValue::Matrix { text, latex, .. }
                | ArtifactValue::Pde { text, latex, .. }
                | ArtifactValue::Algebra { text, latex, .. },
                f,
            ) => {
                if f == Format::Latex {
                    latex.clone()
                } else {
                    text.clone()
                }
            }
        }
    }
}

/// Values that can be attached to a report.
pub trait Emit {
    fn emit(&self) -> ArtifactValue;
}

impl<S: Scalar> Emit for NCPoly<S> {
    fn emit(&self) -> ArtifactValue {
        ArtifactValue::Poly { field: Field::of::<S>(), text: self.to_string(), latex: self.to_latex(), ast: self.to_json() }
    }
}

impl<S: Scalar> Emit for Matrix<S> {
    fn emit(&self) -> ArtifactValue {
        ArtifactValue::Matrix { field: Field::of::<S>(), text: self.to_string(), latex: self.to_latex(), ast: self.to_json() }
    }
}

impl<S: Scalar> Emit for PdeSystem<S> {
    fn emit(&self) -> ArtifactValue {
        ArtifactValue::Pde {
            field: Field::of::<S>(),
            text: self.to_text().trim_end().to_string(),
            latex: self.to_latex(),
            ast: self.to_json(),
        }
    }
}

impl Emit for AlgElement {
    fn emit(&self) -> ArtifactValue {
        ArtifactValue::Algebra { text: self.to_string(), latex: alg_latex(self), ast: JsonAlg::from(self) }
    }
}

/// JSON form of an element of 𝒜(P): a term list of `{coeff, composition}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonAlg {
    pub terms: Vec<JsonAlgTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonAlgTerm {
    pub coeff: String,
    pub composition: Vec<u32>,
}

impl From<&AlgElement> for JsonAlg {
    fn from(a: &AlgElement) -> Self {
        JsonAlg {
            terms: a
                .terms()
                .map(|(w, c)| JsonAlgTerm { coeff: c.to_string(), composition: w.parts().to_vec() })
                .collect(),
        }
    }
}

/// `c P^{•n₁} ≺ … ≺ P^{•n_k}` per term.
pub fn alg_latex(a: &AlgElement) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (w, c)) in a.terms().enumerate() {
        let word = w
            .parts()
            .iter()
            .map(|&n| if n == 1 { "P".to_string() } else { format!("P^{{\\bullet {n}}}") })
            .collect::<Vec<_>>()
            .join(" \\prec ");
        let neg = c.is_negative();
        let abs = if neg { c.neg_ref() } else { c.clone() };
        let sign = match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        let coeff = if abs.is_one() { String::new() } else { format!("{} \\, ", abs.latex()) };
        out.push_str(&format!("{sign}{coeff}{word}"));
    }
    out
}

/// `expand`: parse, print canonically and normalize in the composition basis.
pub fn expand(input: &str, format: Format) -> Result<String> {
    let ast = ExprAst::parse(input)?;
    let value = ast.eval();
    Ok(match format {
        Format::Text => value.to_string(),
        Format::Latex => alg_latex(&value),
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "schema": EXPR_SCHEMA,
            "input": ast.to_string(),
            "value": JsonAlg::from(&value),
        }))
        .expect("json"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Kp,
    Akns,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kp" => Ok(Target::Kp),
            "akns" => Ok(Target::Akns),
            _ => Err(Error::InvalidArgument(format!("unknown target `{s}`"))),
        }
    }
}

/// Truncation depth and flow count shared by `phi` and the cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthConfig {
    pub depth: usize,
    pub flows: usize,
}

/// `phi`: the image of an expression under `Φ_KP` or `Φ_AKNS`.
pub fn phi(input: &str, target: Target, mode: Mode, cfg: DepthConfig, format: Format) -> Result<String> {
    let ast = ExprAst::parse(input)?;
    let a = ast.eval();
    let value = match (target, mode) {
        (Target::Kp, Mode::Abstract) => {
            let ctx = LaxContext::new(cfg.depth, cfg.flows)?;
            psido::with_retry(&ctx, |c| c.phi(&a))?.emit()
        }
        (Target::Kp, _) => return Err(Error::InvalidArgument("the KP map has no matrix mode".into())),
        (Target::Akns, Mode::Abstract) => {
            let ctx = AknsContext::abstract_mode(cfg.depth, cfg.flows)?;
            laurent::with_retry(&ctx, |c| c.phi(&a))?.emit()
        }
        (Target::Akns, Mode::Matrix2) => {
            let ctx = akns_context_2x2(cfg.depth, Rules::Free, akns_evolution(Rules::Free)?)?;
            laurent::with_retry(&ctx, |c| c.phi(&a))?.emit()
        }
        (Target::Akns, Mode::Matrix3) => {
            let ctx = akns_context_3x3(cfg.depth, Rules::Free)?;
            laurent::with_retry(&ctx, |c| c.phi(&a))?.emit()
        }
    };
    Ok(value.render(format))
}

/// Process exit status for an error: 2 for resource limits, 3 for bad
/// input, 1 for a genuine mismatch.
pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_depth() {
        2
    } else if matches!(
        e,
        Error::Parse { .. } | Error::Ambiguous { .. } | Error::UnknownCase(_) | Error::InvalidArgument(_)
    ) {
        3
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFG: DepthConfig = DepthConfig { depth: 6, flows: 3 };

    #[test]
    fn expand_formats() {
        assert_eq!(expand("P o P", Format::Text).unwrap(), "(2) + 2*(1,1)");
        assert_eq!(expand("P o P", Format::Latex).unwrap(), "P^{\\bullet 2} + 2 \\, P \\prec P");
        let j: serde_json::Value = serde_json::from_str(&expand("P x P", Format::Json).unwrap()).unwrap();
        assert_eq!(j["schema"], EXPR_SCHEMA);
        assert_eq!(j["input"], "P x P");
        assert_eq!(j["value"]["terms"][0]["coeff"], "-1");
        assert!(matches!(expand("P o P . P", Format::Text), Err(Error::Ambiguous { .. })));
    }

    #[test]
    fn phi_targets() {
        assert_eq!(phi("P", Target::Kp, Mode::Abstract, CFG, Format::Text).unwrap(), "u2");
        assert_eq!(phi("P", Target::Akns, Mode::Abstract, CFG, Format::Text).unwrap(), "v2*J");
        let m = phi("P", Target::Akns, Mode::Matrix2, CFG, Format::Text).unwrap();
        assert_eq!(m, "[-q*r, 0; -r_x, 0]");
        let j = phi("P^2", Target::Akns, Mode::Matrix3, DepthConfig { depth: 4, flows: 2 }, Format::Json).unwrap();
        let v: ArtifactValue = serde_json::from_str(&j).unwrap();
        assert!(matches!(v, ArtifactValue::Matrix { field: Field::Cyclotomic, .. }));
        assert!(phi("P", Target::Kp, Mode::Matrix2, CFG, Format::Text).is_err());
    }

    #[test]
    fn phi_is_deterministic() {
        let a = phi("P o (P x P)", Target::Kp, Mode::Abstract, CFG, Format::Json).unwrap();
        let b = phi("P o (P x P)", Target::Kp, Mode::Abstract, CFG, Format::Json).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(&Error::UnknownCase("x".into())), 3);
        assert_eq!(exit_code_for(&Error::InsufficientDepth { needed: -3, floor: -2, depth: 2 }), 2);
        assert_eq!(exit_code_for(&Error::mismatch("a", "b")), 1);
    }
}
