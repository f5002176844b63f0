//! The V³ = I reduction over ℚ(ζ) and the coupled Burgers system.

use super::*;
use crate::laurent::AknsContext;
use crate::ncpoly::Substitution;
use crate::qshuffle::AlgElement;
use crate::scalar::CycScalar;

type P = NCPoly<CycScalar>;
type M = Matrix<CycScalar>;

fn zeta() -> CycScalar {
    CycScalar::from_ints(0, 1)
}

/// Eigenvalues `1, ζ, ζ²` of `J`.
pub fn j_eigenvalues() -> [CycScalar; 3] {
    let z = zeta();
    [CycScalar::from_ints(1, 0), z.clone(), z.mul_ref(&z)]
}

/// `J = diag(1, ζ, ζ²)`, `u = (1+2ζ)·(0, r, q; q, 0, r; r, q, 0)`.
pub fn j_u_3x3(rules: Rules) -> Result<(M, M)> {
    let j = Matrix::diag(j_eigenvalues().into_iter().map(|c| P::constant(c).with_rules(rules)).collect());
    let u = Matrix::parse(&[&["0", "r", "q"], &["q", "0", "r"], &["r", "q", "0"]], rules)?
        .scale(&CycScalar::from_ints(1, 2));
    Ok((j, u))
}

/// Off-diagonal parts of `v_{m+1}` from `[J, v_{m+1}] = v_{m,x} − [v₁, v_m]`,
/// diagonal parts from the λ^{−(m+1)} coefficient of `V³ = I`; the remaining
/// entries of both equations are checked.
pub fn derive_v_chain_v3(depth: usize, rules: Rules) -> Result<MatrixInstance<CycScalar>> {
    if depth < 2 {
        return Err(Error::InvalidArgument("chain depth must be at least 2".into()));
    }
    let (j, u) = j_u_3x3(rules)?;
    let ev = j_eigenvalues();
    let mut inst = MatrixInstance { constraint: Constraint::CubeRootOfUnity, rules, j, v: vec![u] };
    for m in 1..depth {
        let rhs = inst.vm(m).ddx().sub_ref(&inst.u().commutator(inst.vm(m)));
        let mut rest = Matrix::zero(3);
        for a in 0..=m {
            for b in 0..=m {
                let c = (m + 1).checked_sub(a + b);
                if let Some(c) = c.filter(|c| *c <= m) {
                    rest = rest.add_ref(&inst.vm(a).mul_ref(inst.vm(b)).mul_ref(inst.vm(c)));
                }
            }
        }
        let mut x = Matrix::zero(3);
        for i in 0..3 {
            for k in 0..3 {
                if i == k {
                    if !rhs.get(i, i).is_zero() {
                        return Err(Error::mismatch(format!("V^3 = I order {}", m + 1), "ad_J image has a diagonal part"));
                    }
                    let d = ev[i].mul_ref(&ev[i]).mul_ref(&CycScalar::from_ints(3, 0)).inv()?;
                    x.set(i, i, rest.get(i, i).scale(&d).neg());
                } else {
                    if !rest.get(i, k).is_zero() {
                        return Err(Error::mismatch(
                            format!("V^3 = I order {}", m + 1),
                            format!("off-diagonal entry ({},{}) of the cubic equation is {}", i + 1, k + 1, rest.get(i, k)),
                        ));
                    }
                    let d = ev[i].sub_ref(&ev[k]).inv()?;
                    x.set(i, k, rhs.get(i, k).scale(&d));
                }
            }
        }
        inst.v.push(x);
    }
    Ok(inst)
}

const Q_TEXT: &str = "(q_xx + 9*q^2*r - 3*r*r_x)";
const R_TEXT: &str = "(r_xx + 9*q*r^2 + 3*q*q_x)";
const D_TEXT: &str = "(q^3 + r^3 + q*r_x - q_x*r)";

/// `v₂` and `v₃` of the 3×3 instance as usually displayed, with
/// `Q = q_xx + 9q²r − 3rr_x`, `R = r_xx + 9qr² + 3qq_x`, `D = q³ + r³ + qr_x − q_xr`.
pub fn displayed_3x3(rules: Rules) -> Result<Vec<M>> {
    let v2 = Matrix::parse(
        &[
            &["3*q*r", "z*r_x", "z/(1+z)*q_x"],
            &["-z*q_x", "-3*(1+z)*q*r", "r_x"],
            &["-z/(1+z)*r_x", "-q_x", "-3/(1+z)*q*r"],
        ],
        rules,
    )?;
    let rows = [
        ["(z-1)*D/(1+z)", "-R/(2+z)", "z*Q/(1+2*z)"],
        ["-Q/(2+z)", "-(1+2*z)*D/(1+z)", "(1+z)*R/(z-1)"],
        ["z*R/(1+2*z)", "(1+z)*Q/(z-1)", "(1-z)*D"],
    ];
    let expand = |s: &str| s.replace('Q', Q_TEXT).replace('R', R_TEXT).replace('D', D_TEXT);
    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| expand(s)).collect()).collect();
    let refs: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(|s| s.as_str()).collect()).collect();
    let refs: Vec<&[&str]> = refs.iter().map(|r| r.as_slice()).collect();
    Ok(vec![v2, Matrix::parse(&refs, rules)?])
}

/// `x`-flow rules `q ↦ q_x`, `r ↦ r_x`.
fn t1_rules(rules: Rules) -> Result<EvolutionRules<CycScalar>> {
    EvolutionRules::parse(&[(1, "q", "q_x"), (1, "r", "r_x")], rules)
}

/// Everything derived from the V³ = I flow identity at n = 1, k = 2.
#[derive(Clone, Debug)]
pub struct BurgersDerivation {
    /// `q_{t₂}`, `r_{t₂}` as read off the identity.
    pub t2_rules: EvolutionRules<CycScalar>,
    /// The system in the rescaled time `∂_t = (1+2ζ)∂_{t₂}`.
    pub system: PdeSystem<CycScalar>,
}

/// Form `v_{2,t₂}J = (Φ(P^{•2}))_x` with `q_{t₂}, r_{t₂}` unknown, read the
/// rates off the entries where `v₂` is a multiple of `q_x` or `r_x`, check
/// every entry against them, and rescale time so that `∂_t = (1+2ζ)∂_{t₂}`.
pub fn extract_burgers(inst: &MatrixInstance<CycScalar>) -> Result<BurgersDerivation> {
    if inst.constraint != Constraint::CubeRootOfUnity || inst.dim() != 3 {
        return Err(Error::InvalidArgument("extract_burgers needs the 3x3 V^3 = I instance".into()));
    }
    let rules = inst.rules;
    let ctx = AknsContext::from_coefficients(inst.j.clone(), inst.v.clone(), 1)?;
    let phi2 = ctx.phi(&AlgElement::p_pow(2))?;
    let unknown = unknown_rates::<CycScalar>(2, &["q", "r"], "t2", rules);
    let v2 = inst.vm(2);
    let lhs = Derivations::<M>::dt(&unknown, 2, v2)?.mul_ref(&inst.j);
    let e = lhs.sub_ref(&phi2.ddx());
    let ev = j_eigenvalues();

    let mut found: BTreeMap<String, P> = BTreeMap::new();
    for i in 0..3 {
        for k in 0..3 {
            let entry = v2.get(i, k);
            if entry.len() != 1 {
                continue;
            }
            let (w, c) = entry.terms().next().expect("one term");
            if w.len() != 1 || w[0].xorder != 1 {
                continue;
            }
            let s = w[0].sym.name();
            let scale = c.mul_ref(&ev[k]);
            let unknown_letter = P::sym(&format!("{s}_t2")).with_rules(rules);
            // e_ik = ∂_x(scale·s_t2 − Φ_ik): integrate with zero constant
            let integrand = unknown_letter.scale(&scale).sub(phi2.get(i, k));
            if *e.get(i, k) != integrand.ddx() {
                return Err(Error::mismatch(format!("Burgers entry ({},{})", i + 1, k + 1), "not an x-derivative"));
            }
            let rate = phi2.get(i, k).scale(&scale.inv()?);
            if let Some(prev) = found.get(&s) {
                if *prev != rate {
                    return Err(Error::mismatch("Burgers system", format!("entries disagree on {s}_t2")));
                }
            } else {
                found.insert(s, rate);
            }
        }
    }
    let mut t2_rules = t1_rules(rules)?;
    for s in ["q", "r"] {
        let rate = found.get(s).ok_or_else(|| Error::Unresolved(format!("{s}_t2")))?;
        t2_rules.insert(2, s, rate.clone());
    }
    let resolved = Derivations::<M>::dt(&t2_rules, 2, v2)?.mul_ref(&inst.j).sub_ref(&phi2.ddx());
    if !resolved.is_zero() {
        return Err(Error::mismatch("Burgers system", format!("overdetermined entries disagree: {resolved}")));
    }
    let rescale = CycScalar::from_ints(1, 2);
    let equations = ["q", "r"]
        .iter()
        .map(|s| {
            let rate = t2_rules.rule(2, s).expect("installed").scale(&rescale);
            Equation::new(P::sym(&format!("{s}_t")).with_rules(rules).sub(&rate))
        })
        .collect();
    Ok(BurgersDerivation {
        t2_rules,
        system: PdeSystem {
            name: "coupled Burgers".into(),
            provenance: Provenance {
                identity: "Phi(P o P^2) = Phi(P^2 o P): (v2)_t2 J = (Phi(P^2))_x, d/dt = (1+2z) d/dt2".into(),
                reduction: "V^3 = I, J = diag(1,z,z^2), u = (1+2z) circulant(0,r,q)".into(),
            },
            equations,
        },
    })
}

pub fn displayed_burgers(rules: Rules) -> Result<Vec<P>> {
    Ok(vec![parse_poly("q_t - q_xx + 6*r*r_x", rules)?, parse_poly("r_t + r_xx + 6*q*q_x", rules)?])
}

/// `r ↦ 0` in a Burgers system.
pub fn burgers_without_r(system: &PdeSystem<CycScalar>) -> Result<Vec<P>> {
    let s = Substitution::new([("r", P::zero()), ("r_t", P::zero())])?;
    system.equations.iter().map(|e| Ok(e.substitute(&s)?.expanded())).collect()
}

/// The 3×3 context with the derived t₂ rules, for flow checks.
pub fn burgers_context(inst: &MatrixInstance<CycScalar>, d: &BurgersDerivation) -> Result<AknsContext<M>> {
    inst.akns_context(2, d.t2_rules.clone())
}

/// Matrix AKNS context on the 3×3 instance with `t₁` and the derived `t₂`
/// rules, rebuilt at other depths on demand.
pub fn akns_context_3x3(depth: usize, rules: Rules) -> Result<AknsContext<M>> {
    let inst = derive_v_chain_v3(depth, rules)?;
    let d = extract_burgers(&inst)?;
    Ok(burgers_context(&inst, &d)?.with_rebuild(move |k| akns_context_3x3(k, rules)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_matches_display_commutatively() {
        let inst = derive_v_chain_v3(4, Rules::Commutative).unwrap();
        assert!(inst.gakns1_holds());
        assert!(inst.constraint_failures().is_empty());
        let shown = displayed_3x3(Rules::Commutative).unwrap();
        assert_eq!(*inst.vm(2), shown[0]);
        assert_eq!(*inst.vm(3), shown[1]);
    }

    #[test]
    fn free_chain_reduces_to_display() {
        let inst = derive_v_chain_v3(4, Rules::Free).unwrap();
        assert!(inst.gakns1_holds());
        assert!(inst.constraint_failures().is_empty());
        let shown = displayed_3x3(Rules::Commutative).unwrap();
        assert_ne!(*inst.vm(2), displayed_3x3(Rules::Free).unwrap()[0]);
        assert_eq!(inst.vm(2).with_rules(Rules::Commutative), shown[0]);
        assert_eq!(inst.vm(3).with_rules(Rules::Commutative), shown[1]);
    }

    #[test]
    fn v2_oracle() {
        // (1,2) of [J, v2] = u_x − [u, u]: (1 − ζ)·x = (1+2ζ) r_x
        let inst = derive_v_chain_v3(3, Rules::Free).unwrap();
        let lhs = inst.vm(2).get(0, 1).scale(&CycScalar::from_ints(1, -1));
        assert_eq!(lhs, parse_poly("(1+2*z)*r_x", Rules::Free).unwrap());
    }

    #[test]
    fn burgers_system() {
        let inst = derive_v_chain_v3(4, Rules::Commutative).unwrap();
        let d = extract_burgers(&inst).unwrap();
        let shown = displayed_burgers(Rules::Commutative).unwrap();
        let got: Vec<P> = d.system.equations.iter().map(|e| e.expanded()).collect();
        assert_eq!(got, shown);
        let ctx = burgers_context(&inst, &d).unwrap();
        for n in 1..=2 {
            assert!(inst.flow_consistent(&ctx, n).unwrap());
            assert!(inst.constraint_preserved(&ctx, n).unwrap());
        }
    }

    #[test]
    fn burgers_free_mode_keeps_cubic_terms() {
        let inst = derive_v_chain_v3(4, Rules::Free).unwrap();
        let d = extract_burgers(&inst).unwrap();
        let got: Vec<P> = d.system.equations.iter().map(|e| e.expanded()).collect();
        assert_ne!(got, displayed_burgers(Rules::Free).unwrap());
        let reduced: Vec<P> = got.iter().map(|p| p.with_rules(Rules::Commutative)).collect();
        assert_eq!(reduced, displayed_burgers(Rules::Commutative).unwrap());
        let ctx = burgers_context(&inst, &d).unwrap();
        assert!(inst.flow_consistent(&ctx, 2).unwrap());
    }

    #[test]
    fn dropping_r() {
        let inst = derive_v_chain_v3(4, Rules::Commutative).unwrap();
        let d = extract_burgers(&inst).unwrap();
        let eqs = burgers_without_r(&d.system).unwrap();
        assert_eq!(eqs[0], parse_poly("q_t - q_xx", Rules::Commutative).unwrap());
        assert_eq!(eqs[1], parse_poly("6*q*q_x", Rules::Commutative).unwrap());
    }
}
