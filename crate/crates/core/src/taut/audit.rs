//! Evaluating candidate relations in bundle models.

use serde::{Deserialize, Serialize};

use super::expr::{KappaExpr, Leaf};
use num_traits::One;

use crate::arith::{int, pow_signed, ExactScalar};
use crate::charclass::{enumerate_basis, BasisMonomial};
use crate::error::{Error, Result};
use crate::models::BundleModel;
use crate::poly::GradedPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub relation: KappaExpr,
    pub model: String,
    pub n: u32,
    pub g: u32,
    pub verdict: Verdict,
    /// The relation evaluated in the model; zero iff verified.
    pub witness: GradedPoly,
    /// Which family of relations this instance belongs to (empty for ad hoc audits).
    pub family: String,
    pub note: Option<String>,
}

/// Serialized form of an [`AuditReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub relation: String,
    pub model: String,
    pub n: u32,
    pub g: u32,
    pub verdict: Verdict,
    pub witness: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl AuditReport {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    pub fn record(&self) -> AuditRecord {
        AuditRecord {
            relation: self.relation.to_string(),
            model: self.model.clone(),
            n: self.n,
            g: self.g,
            verdict: self.verdict,
            witness: self.witness.to_string(),
            family: self.family.clone(),
            note: self.note.clone(),
        }
    }
}

/// Substitutes the model's value for every leaf of `relation` and reports
/// the residual.
pub fn audit(relation: &KappaExpr, model: &BundleModel) -> Result<AuditReport> {
    if relation.has_class_leaf() && !model.is_pointed() {
        return Err(Error::ModelMismatch(format!(
            "relation has section classes but {} is not pointed",
            model.label()
        )));
    }
    let witness = relation.evaluate(model.target(), None, |leaf| match leaf {
        Leaf::Kappa(c) => model.kappa(c),
        Leaf::Class(c) => model.class(c),
    })?;
    Ok(AuditReport {
        relation: relation.clone(),
        model: model.label().to_string(),
        n: model.n(),
        g: model.genus(),
        verdict: if witness.is_zero() {
            Verdict::Verified
        } else {
            Verdict::Refuted
        },
        witness,
        family: String::new(),
        note: None,
    })
}

fn k(c: &BasisMonomial) -> KappaExpr {
    KappaExpr::kappa(c.clone())
}

fn cls(c: &BasisMonomial) -> KappaExpr {
    KappaExpr::cls(c.clone())
}

fn num(q: ExactScalar) -> KappaExpr {
    KappaExpr::constant(q)
}

/// All exponent vectors of length `len` with entry sum between 1 and `max`.
fn multi_indices(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![];
    let mut cur = vec![0u32; len];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            if cur.iter().any(|&x| x > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..=left {
            cur[i] = x;
            rec(i + 1, left - x, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max, &mut cur, &mut out);
    out.sort_by_key(|v| (v.iter().sum::<u32>(), std::cmp::Reverse(v.clone())));
    out
}

pub const EULER_NOT_NILPOTENT: &str = "at g = 0 the Euler class of the vertical tangent bundle \
     is not nilpotent: in the pointed sphere model e pulls back to e, and κ_{e^{2k+1}} = 2 p_n^k";

/// Instantiates the standard relations for every basis monomial `c` of
/// degree at most `max_degree` and audits them in the models for genus `g`
/// (sphere models for `g = 0`, Lie-group models otherwise).
///
/// Families:
/// * `eq1`: `χ² c - χ κ_{ec} - χ e κ_c + κ_{e²} κ_c`;
/// * `eq2`: `(χ - 2) χ e + κ_{e²}`;
/// * `class-rewrite`: `χ c - κ_{ec}`;
/// * `kappa-product-exp-|I|` and `kappa-product-exp-|I|-1`:
///   `χ^m κ_{e p_I} - Π κ_{e p_j}^{i_j}` for `1 <= |I| <= 4`.
pub fn builtin_relation_suite(n: u32, g: u32, max_degree: u32) -> Result<Vec<AuditReport>> {
    let (closed, pointed) = if g == 0 {
        (BundleModel::sphere(n)?, BundleModel::pointed_sphere(n)?)
    } else {
        (BundleModel::liegroup(n, g)?, BundleModel::pointed_liegroup(n, g)?)
    };
    let chi = int(2 - 2 * g as i64);
    let e = BasisMonomial::euler_power(n, 1);
    let e2 = BasisMonomial::euler_power(n, 2);
    let mut out = vec![];
    let mut push = |rel: KappaExpr, model: &BundleModel, family: &str| -> Result<()> {
        let mut r = audit(&rel, model)?;
        r.family = family.to_string();
        if g == 0 && family == "class-rewrite" && !r.is_verified() {
            r.note = Some(EULER_NOT_NILPOTENT.to_string());
        }
        out.push(r);
        Ok(())
    };

    let basis = enumerate_basis(n, max_degree);
    for c in &basis {
        let rel = num(&chi * &chi) * cls(c)
            - num(chi.clone()) * k(&c.times_euler(1))
            - num(chi.clone()) * cls(&e) * k(c)
            + k(&e2) * k(c);
        push(rel, &pointed, "eq1")?;
    }
    push(
        num((&chi - int(2)) * &chi) * cls(&e) + k(&e2),
        &pointed,
        "eq2",
    )?;
    for c in &basis {
        push(num(chi.clone()) * cls(c) - k(&c.times_euler(1)), &pointed, "class-rewrite")?;
    }

    // κ_{e p_n} = κ_{e^3} is nilpotent for g >= 1, so p_n only enters at g = 0
    let len = if g == 0 { n } else { n - 1 } as usize;
    for exps in multi_indices(len, 4) {
        let c = BasisMonomial::from_pontryagin(n, 1, &exps)?;
        let length: u32 = exps.iter().sum();
        let mut product: Option<KappaExpr> = None;
        for (j, &i) in exps.iter().enumerate() {
            if i > 0 {
                let f = k(&BasisMonomial::e_times_p(n, j as u32 + 1)?);
                let f = if i == 1 { f } else { f.pow(i) };
                product = Some(match product {
                    None => f,
                    Some(p) => p * f,
                });
            }
        }
        let product = product.expect("|I| >= 1");
        for (m, family) in [(length, "kappa-product-exp-|I|"), (length - 1, "kappa-product-exp-|I|-1")] {
            let coeff = pow_signed(&chi, m as i64);
            let lhs = if coeff.is_one() { k(&c) } else { num(coeff) * k(&c) };
            push(lhs - product.clone(), &closed, family)?;
        }
    }
    Ok(out)
}
