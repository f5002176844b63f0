//! Text, LaTeX and JSON renderings.

use serde::{Deserialize, Serialize};

use super::{Letter, NCPoly, Rules, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn render<S: Scalar>(
    p: &NCPoly<S>,
    letter: impl Fn(&Letter) -> String,
    scalar: impl Fn(&S) -> String,
    sep: &str,
) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (w, c)) in p.sorted_terms().into_iter().enumerate() {
        let neg = c.is_negative_rational();
        let mag = if neg { c.neg_ref() } else { c.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let word: Vec<String> = w.iter().map(&letter).collect();
        if w.is_empty() {
            out.push_str(&scalar(&mag));
        } else if mag.is_one() {
            out.push_str(&word.join(sep));
        } else {
            out.push_str(&scalar(&mag));
            out.push_str(sep);
            out.push_str(&word.join(sep));
        }
    }
    out
}

pub(super) fn to_text<S: Scalar>(p: &NCPoly<S>) -> String {
    render(p, |l| l.to_string(), |c| c.to_string(), "*")
}

/// LaTeX name of a letter: `u2_x` → `u_{2,x}`, `q_xx` → `q_{xx}`, `phi` → `\phi`.
pub fn letter_latex(l: &Letter) -> String {
    let name = l.sym.name();
    let (base, mut sub) = match name.split_once('_') {
        Some((b, s)) => (b.to_string(), s.replace('_', ",")),
        None => {
            let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
            (name[..split].to_string(), name[split..].to_string())
        }
    };
    let base = match base.as_str() {
        "phi" | "zeta" | "lambda" | "psi" | "alpha" | "beta" => format!("\\{base}"),
        _ => base,
    };
    if l.xorder > 0 {
        if !sub.is_empty() {
            sub.push(',');
        }
        sub.push_str(&"x".repeat(l.xorder as usize));
    }
    if sub.is_empty() {
        base
    } else {
        format!("{base}_{{{sub}}}")
    }
}

impl<S: Scalar> NCPoly<S> {
    pub fn to_latex(&self) -> String {
        render(self, letter_latex, |c| c.latex(), " ")
    }

    pub fn to_json(&self) -> JsonPoly {
        JsonPoly {
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(w, c)| JsonTerm { coeff: c.to_string(), word: w.iter().map(|l| l.to_string()).collect() })
                .collect(),
        }
    }

    pub fn from_json(j: &JsonPoly, rules: Rules) -> Result<Self> {
        let mut out = NCPoly::zero().with_rules(rules);
        for t in &j.terms {
            let c = S::parse_scalar(&t.coeff)?;
            let w: Word = t.word.iter().map(|s| Letter::parse(s)).collect::<Result<_>>()?;
            out.add_term(&w, c);
        }
        Ok(out)
    }

    pub fn from_json_str(s: &str, rules: Rules) -> Result<Self> {
        let j: JsonPoly = serde_json::from_str(s).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        Self::from_json(&j, rules)
    }
}

/// JSON AST of a polynomial: a term list of `{coeff, word}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonPoly {
    pub terms: Vec<JsonTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub word: Vec<String>,
}
