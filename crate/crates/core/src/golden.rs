//! Frozen KP flow tables and residues.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpoly::{JsonPoly, NCPoly, Rules};
use crate::psido::LaxContext;
use crate::scalar::Rational;

pub const GOLDEN_SCHEMA: &str = "quasishuffle.golden/1";

/// File name of the golden values at depth `K`.
pub fn golden_file_name(depth: usize) -> String {
    format!("kp_tables_k{depth}.json")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenValues {
    pub schema: String,
    pub depth: usize,
    pub flows: usize,
    /// `"t<n>" → "u<m>" → δ_n u_m`.
    pub tables: BTreeMap<String, BTreeMap<String, JsonPoly>>,
    /// `"L^<n>" → res(Lⁿ)` for `n ≤ flows + 1`.
    pub residues: BTreeMap<String, JsonPoly>,
}

impl GoldenValues {
    pub fn compute(depth: usize, flows: usize) -> Result<Self> {
        let ctx = LaxContext::new(depth, flows)?;
        let mut tables = BTreeMap::new();
        for n in 1..=flows {
            let t = ctx.table(n)?;
            let entries = t.entries().map(|(s, p)| (s.name(), p.to_json())).collect();
            tables.insert(format!("t{n}"), entries);
        }
        let mut residues = BTreeMap::new();
        let mut ln = ctx.l().clone();
        for n in 1..=flows + 1 {
            if n > 1 {
                ln = ln.mul(ctx.l());
            }
            residues.insert(format!("L^{n}"), ln.residue()?.to_json());
        }
        Ok(GoldenValues { schema: GOLDEN_SCHEMA.into(), depth, flows, tables, residues })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        let g: GoldenValues = serde_json::from_str(&text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        if g.schema != GOLDEN_SCHEMA {
            return Err(Error::InvalidArgument(format!("unsupported golden schema `{}`", g.schema)));
        }
        Ok(g)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("golden values serialize");
        std::fs::write(path, text + "\n")
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
    }

    pub fn table_entry(&self, n: usize, symbol: &str) -> Result<NCPoly<Rational>> {
        let p = self
            .tables
            .get(&format!("t{n}"))
            .and_then(|t| t.get(symbol))
            .ok_or_else(|| Error::MissingTableEntry { symbol: symbol.into(), flow: n })?;
        NCPoly::from_json(p, Rules::Free)
    }

    pub fn residue(&self, n: usize) -> Result<NCPoly<Rational>> {
        let p = self
            .residues
            .get(&format!("L^{n}"))
            .ok_or_else(|| Error::InvalidArgument(format!("no residue of L^{n}")))?;
        NCPoly::from_json(p, Rules::Free)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse_poly;

    #[test]
    fn residues_of_low_powers() {
        let g = GoldenValues::compute(6, 3).unwrap();
        let p = |s: &str| parse_poly::<Rational>(s, Rules::Free).unwrap();
        assert_eq!(g.residue(1).unwrap(), p("u2"));
        // L² = ∂² + 2u2 + (2u3 + u2_x)∂^{−1} + …
        assert_eq!(g.residue(2).unwrap(), p("2*u3 + u2_x"));
        assert_eq!(g.table_entry(1, "u2").unwrap(), p("u2_x"));
        assert!(g.table_entry(4, "u2").is_err());
    }
}
