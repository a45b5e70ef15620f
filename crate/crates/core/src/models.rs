//! Concrete bundles on which every κ class (and, for pointed variants,
//! every class `c` pulled back along the section) can be evaluated exactly.
//!
//! * `sphere(n)`: the unit sphere bundle `S^{2n} -> BSO(2n) -> BSO(2n+1)`.
//!   Its vertical tangent bundle is the tautological bundle over `BSO(2n)`,
//!   so `κ_c = π_!(c)` where `π_!` kills `F` and sends `e * G` to `2 G`
//!   for the decomposition `x = F + e * G` over the free basis `{1, e}`.
//! * `liegroup(n, g)`: a bundle with fibre `W_g` over `BSO(n) x BSO(n)`
//!   whose vertical tangent bundle is stably `V1 ⊕ V2`, so that
//!   `κ_{e p_I} = χ p_I(V1 ⊕ V2)` and `κ_{p_I} = 0`.
//! * the pointed variants add a section; `c` pulls back to `c` itself over
//!   `BSO(2n)` (sphere) or to `c(V1 ⊕ V2)` (Lie group).

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{int, ExactScalar};
use crate::charclass::{bso_ring, whitney_p, BSORing, BasisMonomial};
use crate::error::{Error, Result};
use crate::poly::{GradedPoly, RingMap, TableRef};

/// The fibre integration `H*(BSO(2n)) -> H*(BSO(2n+1))` of the sphere bundle.
#[derive(Debug, Clone)]
pub struct GysinContext {
    n: u32,
    total: BSORing,
    base: BSORing,
    pullback: RingMap,
}

impl GysinContext {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("half-dimension must be positive"));
        }
        let total = bso_ring(2 * n)?;
        let base = bso_ring(2 * n + 1)?;
        let images = (1..=n).map(|i| total.pontryagin(i)).collect();
        let pullback = RingMap::new(base.table().clone(), total.table().clone(), images)?;
        Ok(GysinContext {
            n,
            total,
            base,
            pullback,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn total(&self) -> &BSORing {
        &self.total
    }

    pub fn base(&self) -> &BSORing {
        &self.base
    }

    /// `p_i -> p_i`, `p_n -> e^2`.
    pub fn pullback(&self) -> &RingMap {
        &self.pullback
    }

    pub fn push(&self, x: &GradedPoly) -> Result<GradedPoly> {
        gysin_push(self, x)
    }
}

/// Writes `x = F + e G` and returns `2 G` with `e^2` renamed to `p_n`.
pub fn gysin_push(ctx: &GysinContext, x: &GradedPoly) -> Result<GradedPoly> {
    if x.table() != ctx.total.table() {
        return Err(Error::TableMismatch);
    }
    let (_, odd) = x.parity_split("e")?;
    let base = ctx.base.table();
    let mut out = GradedPoly::zero(base);
    for (exps, c) in odd.terms() {
        // exps = (b_1..b_{n-1}, a) with a even; a/2 becomes the p_n exponent
        let mut base_exps = exps.to_vec();
        let a = base_exps.pop().unwrap();
        debug_assert!(a % 2 == 0);
        base_exps.push(a / 2);
        out = &out + &GradedPoly::monomial(base, base_exps, c * int(2));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Sphere,
    LieGroup,
    PointedSphere,
    PointedLieGroup,
}

impl ModelKind {
    pub fn is_pointed(self) -> bool {
        matches!(self, ModelKind::PointedSphere | ModelKind::PointedLieGroup)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelLabel {
    pub kind: ModelKind,
    pub n: u32,
    pub g: u32,
}

impl fmt::Display for ModelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModelKind::Sphere => write!(f, "sphere({})", self.n),
            ModelKind::PointedSphere => write!(f, "pointed_sphere({})", self.n),
            ModelKind::LieGroup => write!(f, "liegroup({},{})", self.n, self.g),
            ModelKind::PointedLieGroup => write!(f, "pointed_liegroup({},{})", self.n, self.g),
        }
    }
}

#[derive(Debug, Clone)]
enum Geometry {
    Sphere(GysinContext),
    LieGroup { sum: BSORing, restriction: RingMap },
}

/// An evaluation target for κ classes and (pointed) section classes.
#[derive(Debug, Clone)]
pub struct BundleModel {
    label: ModelLabel,
    chi: ExactScalar,
    target: TableRef,
    geometry: Geometry,
}

impl BundleModel {
    pub fn new(kind: ModelKind, n: u32, g: u32) -> Result<Self> {
        match kind {
            ModelKind::Sphere | ModelKind::PointedSphere => {
                if g != 0 {
                    return Err(Error::domain("the sphere model has genus 0"));
                }
                let ctx = GysinContext::new(n)?;
                let target = if kind == ModelKind::Sphere {
                    ctx.base.table().clone()
                } else {
                    ctx.total.table().clone()
                };
                Ok(BundleModel {
                    label: ModelLabel { kind, n, g },
                    chi: int(2),
                    target,
                    geometry: Geometry::Sphere(ctx),
                })
            }
            ModelKind::LieGroup | ModelKind::PointedLieGroup => {
                if n < 2 {
                    return Err(Error::domain("the Lie group model needs n >= 2"));
                }
                let factor = bso_ring(n)?;
                let restriction = whitney_p(&factor, &factor)?;
                Ok(BundleModel {
                    label: ModelLabel { kind, n, g },
                    chi: int(2 - 2 * g as i64),
                    target: restriction.target().clone(),
                    geometry: Geometry::LieGroup {
                        sum: bso_ring(2 * n)?,
                        restriction,
                    },
                })
            }
        }
    }

    pub fn sphere(n: u32) -> Result<Self> {
        Self::new(ModelKind::Sphere, n, 0)
    }

    pub fn pointed_sphere(n: u32) -> Result<Self> {
        Self::new(ModelKind::PointedSphere, n, 0)
    }

    pub fn liegroup(n: u32, g: u32) -> Result<Self> {
        Self::new(ModelKind::LieGroup, n, g)
    }

    pub fn pointed_liegroup(n: u32, g: u32) -> Result<Self> {
        Self::new(ModelKind::PointedLieGroup, n, g)
    }

    pub fn label(&self) -> ModelLabel {
        self.label
    }

    pub fn n(&self) -> u32 {
        self.label.n
    }

    pub fn genus(&self) -> u32 {
        self.label.g
    }

    pub fn chi(&self) -> &ExactScalar {
        &self.chi
    }

    pub fn target(&self) -> &TableRef {
        &self.target
    }

    pub fn is_pointed(&self) -> bool {
        self.label.kind.is_pointed()
    }

    fn check_n(&self, c: &BasisMonomial) -> Result<()> {
        if c.n() != self.n() {
            return Err(Error::ModelMismatch(format!(
                "class for n = {} evaluated in a model with n = {}",
                c.n(),
                self.n()
            )));
        }
        Ok(())
    }

    /// `κ_c` evaluated in the model; homogeneous of degree `deg c - 2n`.
    pub fn kappa(&self, c: &BasisMonomial) -> Result<GradedPoly> {
        self.check_n(c)?;
        match &self.geometry {
            Geometry::Sphere(ctx) => {
                let pushed = ctx.push(&c.to_poly(&ctx.total))?;
                if self.label.kind == ModelKind::Sphere {
                    Ok(pushed)
                } else {
                    ctx.pullback.apply(&pushed)
                }
            }
            Geometry::LieGroup { sum, restriction } => {
                if c.euler_exponent() % 2 == 0 {
                    // pushforward of a class pulled back from the base
                    return Ok(GradedPoly::zero(&self.target));
                }
                // e^{2k+1} p_I = e * (p_n^k p_I) with p_n^k p_I pulled back
                let rest = BasisMonomial::new(
                    c.n(),
                    c.euler_exponent() - 1,
                    c.pontryagin_exponents().to_vec(),
                )?;
                Ok(restriction.apply(&rest.to_poly(sum))?.scale(&self.chi))
            }
        }
    }

    /// The section class `s^* c(T_π)`; only defined for pointed models.
    pub fn class(&self, c: &BasisMonomial) -> Result<GradedPoly> {
        self.check_n(c)?;
        if !self.is_pointed() {
            return Err(Error::ModelMismatch(format!(
                "model {} has no section",
                self.label
            )));
        }
        match &self.geometry {
            Geometry::Sphere(ctx) => Ok(c.to_poly(&ctx.total)),
            Geometry::LieGroup { sum, restriction } => restriction.apply(&c.to_poly(sum)),
        }
    }
}

pub fn sphere_kappa(n: u32, c: &BasisMonomial) -> Result<GradedPoly> {
    BundleModel::sphere(n)?.kappa(c)
}

pub fn liegroup_kappa(n: u32, g: u32, c: &BasisMonomial) -> Result<GradedPoly> {
    BundleModel::liegroup(n, g)?.kappa(c)
}

pub fn pointed_class(model: &BundleModel, c: &BasisMonomial) -> Result<GradedPoly> {
    model.class(c)
}

/// True if `x` is homogeneous of degree `deg c - 2n` (zero for negative).
pub fn kappa_degree_ok(x: &GradedPoly, c: &BasisMonomial) -> bool {
    let d = c.degree() as i64 - 2 * c.n() as i64;
    if d < 0 {
        x.is_zero()
    } else {
        x.is_homogeneous_of(d as u32)
    }
}

impl BundleModel {
    /// Euler characteristic of the fibre as a rational.
    pub fn chi_is_zero(&self) -> bool {
        self.chi.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charclass::enumerate_basis;

    fn mono(n: u32, a: u32, p: &[u32]) -> BasisMonomial {
        BasisMonomial::from_pontryagin(n, a, p).unwrap()
    }

    #[test]
    fn gysin_examples() {
        let ctx = GysinContext::new(3).unwrap();
        let t = ctx.total().table().clone();
        let base = ctx.base().table().clone();
        let x = |s: &str| GradedPoly::parse(s, &t).unwrap();
        let b = |s: &str| GradedPoly::parse(s, &base).unwrap();
        assert_eq!(gysin_push(&ctx, &x("e")).unwrap(), b("2"));
        assert!(gysin_push(&ctx, &x("1")).unwrap().is_zero());
        assert_eq!(gysin_push(&ctx, &x("e*p1")).unwrap(), b("2*p1"));
        assert_eq!(gysin_push(&ctx, &x("e^3")).unwrap(), b("2*p3"));
        assert!(gysin_push(&ctx, &x("e^2*p1")).unwrap().is_zero());
    }

    #[test]
    fn sphere_kappa_examples() {
        let base = crate::charclass::pontryagin_table(3);
        assert_eq!(
            sphere_kappa(3, &mono(3, 1, &[1])).unwrap(),
            GradedPoly::parse("2*p1", &base).unwrap()
        );
        assert!(sphere_kappa(3, &mono(3, 0, &[2, 1])).unwrap().is_zero());
        assert_eq!(
            sphere_kappa(3, &mono(3, 3, &[])).unwrap(),
            GradedPoly::parse("2*p3", &base).unwrap()
        );
    }

    #[test]
    fn liegroup_kappa_examples() {
        let m = BundleModel::liegroup(3, 2).unwrap();
        let t = m.target().clone();
        assert_eq!(
            m.kappa(&mono(3, 1, &[1])).unwrap(),
            GradedPoly::parse("-2*p1' - 2*p1''", &t).unwrap()
        );
        for g in 0..4 {
            let m = BundleModel::liegroup(3, g).unwrap();
            assert_eq!(
                m.kappa(&mono(3, 1, &[])).unwrap(),
                GradedPoly::constant(m.target(), int(2 - 2 * g as i64))
            );
        }
        assert!(m.kappa(&mono(3, 0, &[1])).unwrap().is_zero());
        // n odd: e(V1 ⊕ V2) = 0 kills every e^a with a != 1
        assert!(m.kappa(&mono(3, 3, &[])).unwrap().is_zero());
    }

    #[test]
    fn liegroup_even_n_has_euler_image() {
        let m = BundleModel::liegroup(2, 2).unwrap();
        let t = m.target().clone();
        // κ_{e^3} = χ p_2(V1 ⊕ V2) = χ (e' e'')^2
        assert_eq!(
            m.kappa(&mono(2, 3, &[])).unwrap(),
            GradedPoly::parse("-2*e'^2*e''^2", &t).unwrap()
        );
    }

    #[test]
    fn pointed_class_examples() {
        let ps = BundleModel::pointed_sphere(3).unwrap();
        assert_eq!(
            pointed_class(&ps, &mono(3, 1, &[])).unwrap(),
            GradedPoly::parse("e", ps.target()).unwrap()
        );
        let pl = BundleModel::pointed_liegroup(3, 2).unwrap();
        assert!(pointed_class(&pl, &mono(3, 1, &[])).unwrap().is_zero());
        assert_eq!(
            pointed_class(&pl, &mono(3, 0, &[1])).unwrap(),
            GradedPoly::parse("p1' + p1''", pl.target()).unwrap()
        );
        let closed = BundleModel::sphere(3).unwrap();
        assert!(matches!(
            pointed_class(&closed, &mono(3, 1, &[])),
            Err(Error::ModelMismatch(_))
        ));
    }

    #[test]
    fn degree_contract() {
        for n in [1u32, 2, 3, 4, 5] {
            let mut models = vec![
                BundleModel::sphere(n).unwrap(),
                BundleModel::pointed_sphere(n).unwrap(),
            ];
            if n >= 2 {
                models.push(BundleModel::liegroup(n, 2).unwrap());
                models.push(BundleModel::pointed_liegroup(n, 3).unwrap());
            }
            for m in &models {
                for c in enumerate_basis(n, 24) {
                    assert!(kappa_degree_ok(&m.kappa(&c).unwrap(), &c), "{} {c}", m.label());
                    if m.is_pointed() {
                        assert!(m.class(&c).unwrap().is_homogeneous_of(c.degree()));
                    }
                }
            }
        }
    }

    #[test]
    fn liegroup_odd_n_kills_non_unit_euler_exponents() {
        for n in [3u32, 5] {
            let m = BundleModel::liegroup(n, 2).unwrap();
            for c in enumerate_basis(n, 30) {
                if c.euler_exponent() != 1 {
                    assert!(m.kappa(&c).unwrap().is_zero(), "{c}");
                }
            }
        }
    }

    #[test]
    fn model_rejects_foreign_n() {
        let m = BundleModel::sphere(3).unwrap();
        assert!(m.kappa(&mono(5, 1, &[])).is_err());
        assert!(BundleModel::sphere(0).is_err());
        assert!(BundleModel::liegroup(1, 2).is_err());
    }

    mod props {
        use super::*;
        use crate::arith::rat;
        use proptest::prelude::*;

        fn poly_over(t: TableRef) -> impl Strategy<Value = GradedPoly> {
            let arity = t.len();
            prop::collection::vec((prop::collection::vec(0u32..3, arity), -5i64..5, 1i64..3), 0..5)
                .prop_map(move |terms| {
                    terms.into_iter().fold(GradedPoly::zero(&t), |acc, (e, n, d)| {
                        &acc + &GradedPoly::monomial(&t, e, rat(n, d))
                    })
                })
        }

        proptest! {
            #[test]
            fn projection_formula(
                x in poly_over(bso_ring(7).unwrap().table().clone()),
                y in poly_over(bso_ring(6).unwrap().table().clone()),
            ) {
                let ctx = GysinContext::new(3).unwrap();
                let lhs = ctx.push(&(&ctx.pullback().apply(&x).unwrap() * &y)).unwrap();
                let rhs = &x * &ctx.push(&y).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
