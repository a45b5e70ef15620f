//! Presentations of the tautological rings of `W_g` modulo nilpotents and
//! a normal-form rewriter for κ-expressions.
//!
//! With `χ = 2 - 2g` and `c = e^a p_I` (`p_I` over `p_1..p_{n-1}`), each
//! leaf is rewritten independently:
//!
//! * `κ_c = 0` below degree `2n`, `κ_e = χ`;
//! * `a` even: `κ_c = 0`;
//! * `a >= 3` odd: zero for `g >= 1`; for `g = 0` fold `e^{a-1}` into
//!   `p_n^{(a-1)/2}` and continue with `a = 1`;
//! * `a = 1`: `κ_{e p_I} = χ^{1-|I|} Π κ_{e p_j}^{i_j}` (and `0` if `g = 1`);
//! * pointed, `g > 1`: `c = χ^{-1} κ_{e c}`; pointed, `g = 1`: `c = p_I` if
//!   `a = 0`, else `0`;
//! * disc: every leaf of positive degree vanishes.

mod audit;
mod expr;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{int, pow_signed, ExactScalar};
use crate::charclass::BasisMonomial;
use crate::error::{Error, Result};
use crate::poly::{GeneratorTable, GradedPoly, TableRef};

pub use audit::{audit, builtin_relation_suite, AuditRecord, AuditReport, Verdict};
pub use expr::{KappaExpr, Leaf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Closed,
    Pointed,
    Disc,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Closed => "closed",
            Flavor::Pointed => "pointed",
            Flavor::Disc => "disc",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Flavor::Closed),
            "pointed" => Ok(Flavor::Pointed),
            "disc" => Ok(Flavor::Disc),
            _ => Err(Error::domain(format!("unknown flavor `{s}`"))),
        }
    }
}

/// Name of the free generator `κ_{e p_i}`.
pub fn kappa_generator_name(i: u32) -> String {
    format!("K[e*p{i}]")
}

/// Name of the free generator `c = p_i` (pointed, genus one).
pub fn class_generator_name(i: u32) -> String {
    format!("C[p{i}]")
}

/// A free polynomial presentation of `R*(W_g, -)/√0` together with the
/// rewrite rules onto it.
#[derive(Debug, Clone)]
pub struct TautPresentation {
    n: u32,
    g: u32,
    flavor: Flavor,
    chi: ExactScalar,
    table: TableRef,
    degree_bound: u32,
}

impl TautPresentation {
    pub fn new(n: u32, g: u32, flavor: Flavor) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("half-dimension must be positive"));
        }
        let odd_only = |what: &str| {
            if n % 2 == 0 {
                Err(Error::UnsupportedParity(format!(
                    "{what} is only available for n odd (got n = {n})"
                )))
            } else {
                Ok(())
            }
        };
        let gens: Vec<(String, u32)> = match (flavor, g) {
            (Flavor::Closed, 0) => (1..=n).map(|i| (kappa_generator_name(i), 4 * i)).collect(),
            (Flavor::Closed, 1) => {
                odd_only("the genus-one presentation")?;
                vec![]
            }
            (Flavor::Closed, _) => {
                odd_only("the presentation for g > 1")?;
                (1..n).map(|i| (kappa_generator_name(i), 4 * i)).collect()
            }
            (Flavor::Pointed, 0) => {
                return Err(Error::UnsupportedCase(
                    "no pointed presentation at g = 0: the relation χc = κ_{ec} fails for c = e \
                     in the pointed sphere model (run the g = 0 audit to see the witness)"
                        .into(),
                ))
            }
            (Flavor::Pointed, 1) => {
                odd_only("the pointed genus-one presentation")?;
                (1..n).map(|i| (class_generator_name(i), 4 * i)).collect()
            }
            (Flavor::Pointed, _) => {
                odd_only("the pointed presentation for g > 1")?;
                (1..n).map(|i| (kappa_generator_name(i), 4 * i)).collect()
            }
            (Flavor::Disc, _) => {
                odd_only("the disc presentation")?;
                vec![]
            }
        };
        Ok(TautPresentation {
            n,
            g,
            flavor,
            chi: int(2 - 2 * g as i64),
            table: GeneratorTable::new(gens)?,
            degree_bound: 24 * n,
        })
    }

    /// Replaces the default degree bound (`24n`) used while expanding.
    pub fn with_degree_bound(mut self, bound: u32) -> Self {
        self.degree_bound = bound;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn chi(&self) -> &ExactScalar {
        &self.chi
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    /// The free generators; their names re-parse as κ-expressions.
    pub fn table(&self) -> &TableRef {
        &self.table
    }

    pub fn krull_dimension(&self) -> usize {
        self.table.len()
    }

    fn zero(&self) -> GradedPoly {
        GradedPoly::zero(&self.table)
    }

    fn gen(&self, name: &str) -> GradedPoly {
        GradedPoly::generator(&self.table, name).expect("generator of this presentation")
    }

    fn check_n(&self, c: &BasisMonomial) -> Result<()> {
        if c.n() != self.n {
            return Err(Error::ModelMismatch(format!(
                "leaf for n = {} in a presentation with n = {}",
                c.n(),
                self.n
            )));
        }
        Ok(())
    }

    /// The image of a single leaf `κ_c`.
    pub fn kappa_rule(&self, c: &BasisMonomial) -> Result<GradedPoly> {
        self.check_n(c)?;
        let n = self.n;
        let deg = c.degree();
        if deg < 2 * n {
            return Ok(self.zero());
        }
        if deg == 2 * n && c.euler_exponent() == 1 {
            return Ok(GradedPoly::constant(&self.table, self.chi.clone()));
        }
        let a = c.euler_exponent();
        if self.flavor == Flavor::Disc || self.g == 1 || a % 2 == 0 {
            return Ok(self.zero());
        }
        let mut exps: Vec<u32> = c.pontryagin_exponents().to_vec();
        if a >= 3 {
            if self.g >= 1 {
                return Ok(self.zero());
            }
            exps.push((a - 1) / 2);
        }
        // κ_{e p_I} = χ^{1-|I|} Π κ_{e p_j}^{i_j}
        let length: u32 = exps.iter().sum();
        let mut out = GradedPoly::constant(&self.table, pow_signed(&self.chi, 1 - length as i64));
        for (j, &k) in exps.iter().enumerate() {
            if k > 0 {
                out = &out * &self.gen(&kappa_generator_name(j as u32 + 1)).pow(k);
            }
        }
        Ok(out)
    }

    /// The image of a single section leaf `c`.
    pub fn class_rule(&self, c: &BasisMonomial) -> Result<GradedPoly> {
        self.check_n(c)?;
        match self.flavor {
            Flavor::Closed => Err(Error::ModelMismatch(
                "section classes need a pointed or disc flavor".into(),
            )),
            Flavor::Disc => Ok(if c.degree() == 0 {
                GradedPoly::one(&self.table)
            } else {
                self.zero()
            }),
            Flavor::Pointed if self.g == 1 => {
                if c.euler_exponent() != 0 {
                    return Ok(self.zero());
                }
                let mut out = GradedPoly::one(&self.table);
                for (j, &k) in c.pontryagin_exponents().iter().enumerate() {
                    if k > 0 {
                        out = &out * &self.gen(&class_generator_name(j as u32 + 1)).pow(k);
                    }
                }
                Ok(out)
            }
            Flavor::Pointed => {
                let inv = ExactScalar::one() / &self.chi;
                Ok(self.kappa_rule(&c.times_euler(1))?.scale(&inv))
            }
        }
    }

    pub fn normal_form(&self, x: &KappaExpr) -> Result<GradedPoly> {
        x.evaluate(&self.table, Some(self.degree_bound), |leaf| match leaf {
            Leaf::Kappa(c) => self.kappa_rule(c),
            Leaf::Class(c) => self.class_rule(c),
        })
    }

    /// Reads a polynomial in the free generators back as a κ-expression.
    pub fn reread(&self, x: &GradedPoly) -> Result<KappaExpr> {
        if x.table() != &self.table {
            return Err(Error::TableMismatch);
        }
        KappaExpr::parse(&x.to_string(), self.n, self.flavor)
    }
}

pub fn normal_form(x: &KappaExpr, pres: &TautPresentation) -> Result<GradedPoly> {
    pres.normal_form(x)
}

pub fn krull_dimension(pres: &TautPresentation) -> usize {
    pres.krull_dimension()
}

/// Degree of `κ_c`, which may be negative.
pub fn kappa_degree(c: &BasisMonomial) -> i64 {
    c.degree() as i64 - 2 * c.n() as i64
}

/// Homogeneous degree of an expression, if every summand agrees.
/// Zero constants carry no degree.
pub fn expr_degree(x: &KappaExpr) -> Option<Option<i64>> {
    use KappaExpr::*;
    Some(match x {
        Const(c) if c.is_zero() => None,
        Const(_) => Some(0),
        Kappa(c) => Some(kappa_degree(c)),
        Class(c) => Some(c.degree() as i64),
        Add(a, b) | Sub(a, b) => match (expr_degree(a)?, expr_degree(b)?) {
            (Some(p), Some(q)) if p != q => return None,
            (p, q) => p.or(q),
        },
        Mul(a, b) => match (expr_degree(a)?, expr_degree(b)?) {
            (Some(p), Some(q)) => Some(p + q),
            _ => None,
        },
        Neg(a) => expr_degree(a)?,
        Pow(a, k) => expr_degree(a)?.map(|d| d * *k as i64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(s: &str, n: u32, g: u32, flavor: Flavor) -> String {
        let pres = TautPresentation::new(n, g, flavor).unwrap();
        let x = KappaExpr::parse(s, n, flavor).unwrap();
        pres.normal_form(&x).unwrap().to_string()
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(nf("k[e*p1*p2]", 3, 2, Flavor::Closed), "-1/2*K[e*p1]*K[e*p2]");
        assert_eq!(nf("k[e*p1]", 3, 1, Flavor::Closed), "0");
        assert_eq!(nf("k[e^3]", 3, 0, Flavor::Closed), "K[e*p3]");
        assert_eq!(nf("c[p1]", 3, 5, Flavor::Pointed), "-1/8*K[e*p1]");
        assert_eq!(nf("k[p1]^5 + k[e*p1]", 3, 2, Flavor::Closed), "K[e*p1]");
        assert_eq!(nf("c[e]", 3, 1, Flavor::Pointed), "0");
    }

    #[test]
    fn more_rules() {
        assert_eq!(nf("k[e]", 3, 4, Flavor::Closed), "-6");
        assert_eq!(nf("k[e] + k[1] + k[p1]", 3, 0, Flavor::Closed), "2");
        assert_eq!(nf("k[e^5*p1]", 3, 0, Flavor::Closed), "1/4*K[e*p1]*K[e*p3]^2");
        assert_eq!(nf("k[e^5]", 3, 2, Flavor::Closed), "0");
        assert_eq!(nf("k[e*p3]", 3, 2, Flavor::Closed), "0");
        assert_eq!(nf("c[p1*p2^2] + c[e*p1] + c[p3]", 3, 1, Flavor::Pointed), "C[p1]*C[p2]^2");
        assert_eq!(nf("c[1] + c[e] + k[e] + k[e]*k[e*p1]", 5, 3, Flavor::Disc), "-3");
        assert_eq!(nf("c[1]", 3, 2, Flavor::Pointed), "1");
        // g = 0 works for n even too
        assert_eq!(nf("k[e*p1^2] + k[p1]", 2, 0, Flavor::Closed), "1/2*K[e*p1]^2");
        assert_eq!(nf("k[e^3]", 2, 0, Flavor::Closed), "K[e*p2]");
    }

    #[test]
    fn presentation_errors() {
        assert!(matches!(
            TautPresentation::new(2, 2, Flavor::Closed),
            Err(Error::UnsupportedParity(_))
        ));
        assert!(matches!(
            TautPresentation::new(4, 1, Flavor::Pointed),
            Err(Error::UnsupportedParity(_))
        ));
        assert!(matches!(
            TautPresentation::new(3, 0, Flavor::Pointed),
            Err(Error::UnsupportedCase(_))
        ));
        assert!(TautPresentation::new(4, 0, Flavor::Closed).is_ok());
        let pres = TautPresentation::new(3, 2, Flavor::Closed).unwrap();
        let x = KappaExpr::parse("k[e*p1]", 5, Flavor::Closed).unwrap();
        assert!(pres.normal_form(&x).is_err());
    }

    #[test]
    fn krull_dimensions() {
        for n in [3u32, 5] {
            let k = |g| krull_dimension(&TautPresentation::new(n, g, Flavor::Closed).unwrap());
            assert_eq!((k(0), k(1), k(2), k(7)), (n as usize, 0, n as usize - 1, n as usize - 1));
            let p = |g| TautPresentation::new(n, g, Flavor::Pointed).unwrap().krull_dimension();
            assert_eq!((p(1), p(2)), (n as usize - 1, n as usize - 1));
            assert_eq!(TautPresentation::new(n, 4, Flavor::Disc).unwrap().krull_dimension(), 0);
        }
    }

    #[test]
    fn degree_bound_is_enforced() {
        let pres = TautPresentation::new(3, 0, Flavor::Closed).unwrap();
        let x = KappaExpr::parse("k[e*p1]^19", 3, Flavor::Closed).unwrap();
        assert!(matches!(pres.normal_form(&x), Err(Error::DegreeBound { .. })));
        let x = KappaExpr::parse("k[e*p1]^18", 3, Flavor::Closed).unwrap();
        assert!(pres.normal_form(&x).is_ok());
    }

    #[test]
    fn reread_round_trip() {
        let pres = TautPresentation::new(3, 1, Flavor::Pointed).unwrap();
        let x = KappaExpr::parse("(c[p1] - 2/3*c[p2])^2", 3, Flavor::Pointed).unwrap();
        let y = pres.normal_form(&x).unwrap();
        assert_eq!(pres.normal_form(&pres.reread(&y).unwrap()).unwrap(), y);
    }

    #[test]
    fn expression_degrees() {
        let d = |s: &str| expr_degree(&KappaExpr::parse(s, 3, Flavor::Pointed).unwrap());
        assert_eq!(d("k[e*p1]*c[e] + 0"), Some(Some(10)));
        assert_eq!(d("k[e*p1] + 1"), None);
        assert_eq!(d("0*k[e]"), Some(None));
        assert_eq!(kappa_degree(&BasisMonomial::one(3)), -6);
    }
}
