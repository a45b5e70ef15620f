//! Degree-truncated kernels of graded ring maps, used to certify that the
//! free generators of a presentation stay algebraically independent in a
//! bundle model.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::ExactScalar;
use crate::charclass::BasisMonomial;
use crate::error::{Error, Result};
use crate::linalg::{bareiss, integer_rows, is_zero_vec, mat_vec, null_space};
use crate::models::BundleModel;
use crate::poly::{GeneratorTable, GradedPoly, RingMap};
use crate::taut::{kappa_generator_name, Flavor};

/// Default cap on the number of source monomials in a single degree.
pub const DEFAULT_MONOMIAL_CAP: usize = 20_000;

#[derive(Debug, Clone)]
pub struct DegreeKernel {
    pub degree: u32,
    pub source_dim: usize,
    pub rank: usize,
    pub basis: Vec<GradedPoly>,
}

#[derive(Debug, Clone)]
pub struct TruncatedKernelResult {
    pub map: RingMap,
    pub max_degree: u32,
    /// One entry per even degree `0..=max_degree`.
    pub degrees: Vec<DegreeKernel>,
}

impl TruncatedKernelResult {
    pub fn is_injective(&self) -> bool {
        self.degrees.iter().all(|d| d.basis.is_empty())
    }

    pub fn kernel_basis(&self) -> impl Iterator<Item = (u32, &GradedPoly)> {
        self.degrees
            .iter()
            .flat_map(|d| d.basis.iter().map(move |p| (d.degree, p)))
    }

    pub fn kernel_at(&self, degree: u32) -> &[GradedPoly] {
        self.degrees
            .iter()
            .find(|d| d.degree == degree)
            .map(|d| d.basis.as_slice())
            .unwrap_or(&[])
    }

    pub fn report(&self, n: u32, g: u32, flavor: Flavor) -> IndependenceReport {
        IndependenceReport {
            n,
            g,
            flavor,
            max_degree: self.max_degree,
            generators: self.map.source().names().to_vec(),
            kernel: self
                .degrees
                .iter()
                .filter(|d| !d.basis.is_empty())
                .map(|d| KernelEntry {
                    degree: d.degree,
                    basis: d.basis.iter().map(|p| p.to_string()).collect(),
                })
                .collect(),
            verdict: if self.is_injective() {
                "independent".into()
            } else {
                "dependent".into()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub degree: u32,
    pub basis: Vec<String>,
}

/// Serialized result of an independence check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub n: u32,
    pub g: u32,
    pub flavor: Flavor,
    pub max_degree: u32,
    pub generators: Vec<String>,
    pub kernel: Vec<KernelEntry>,
    pub verdict: String,
}

pub fn kernel_up_to_degree(f: &RingMap, max_degree: u32) -> Result<TruncatedKernelResult> {
    kernel_up_to_degree_capped(f, max_degree, DEFAULT_MONOMIAL_CAP)
}

/// Kernel of `f` in every even degree up to `max_degree`, computed by exact
/// elimination; each basis element is checked to map to zero and each rank
/// is recomputed with the rows in reverse order.
pub fn kernel_up_to_degree_capped(f: &RingMap, max_degree: u32, cap: usize) -> Result<TruncatedKernelResult> {
    if max_degree % 2 != 0 {
        return Err(Error::domain(format!("max_degree must be even, got {max_degree}")));
    }
    let source = f.source();
    let mut degrees = vec![];
    for d in (0..=max_degree).step_by(2) {
        let monos = source.monomials_of_degree(d);
        if monos.len() > cap {
            return Err(Error::Resource(format!(
                "{} source monomials in degree {d} exceed the cap of {cap}",
                monos.len()
            )));
        }
        let images: Vec<GradedPoly> = monos
            .iter()
            .map(|m| f.apply(&GradedPoly::monomial(source, m.clone(), ExactScalar::from_integer(1.into()))))
            .collect::<Result<_>>()?;
        // rows: target monomials; columns: source monomials
        let mut row_of: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for img in &images {
            for (exps, _) in img.terms() {
                let next = row_of.len();
                row_of.entry(exps.to_vec()).or_insert(next);
            }
        }
        let zero = ExactScalar::from_integer(0.into());
        let mut rows = vec![vec![zero; monos.len()]; row_of.len()];
        for (col, img) in images.iter().enumerate() {
            for (exps, c) in img.terms() {
                rows[row_of[exps]][col] = c.clone();
            }
        }
        let ech = bareiss(integer_rows(&rows), monos.len());
        let mut reversed = rows.clone();
        reversed.reverse();
        let rank_check = bareiss(integer_rows(&reversed), monos.len()).rank();
        if rank_check != ech.rank() {
            return Err(Error::domain(format!(
                "elimination disagreed in degree {d}: rank {} vs {rank_check}",
                ech.rank()
            )));
        }
        let mut basis = vec![];
        for v in null_space(&ech) {
            if !is_zero_vec(&mat_vec(&rows, &v)) {
                return Err(Error::domain(format!("kernel vector in degree {d} failed to verify")));
            }
            let mut p = GradedPoly::zero(source);
            for (m, c) in monos.iter().zip(&v) {
                p = &p + &GradedPoly::monomial(source, m.clone(), c.clone());
            }
            if !f.apply(&p)?.is_zero() {
                return Err(Error::domain(format!("kernel element {p} does not map to zero")));
            }
            basis.push(p);
        }
        degrees.push(DegreeKernel {
            degree: d,
            source_dim: monos.len(),
            rank: ech.rank(),
            basis,
        });
    }
    Ok(TruncatedKernelResult {
        map: f.clone(),
        max_degree,
        degrees,
    })
}

/// The ring map sending a free generator `K[c]` (one per `c` in `gens`) to
/// `κ_c` evaluated in `model`.
pub fn model_generator_map(model: &BundleModel, gens: &[BasisMonomial]) -> Result<RingMap> {
    let mut names = vec![];
    let mut images = vec![];
    for c in gens {
        let deg = c.degree() as i64 - 2 * model.n() as i64;
        if deg <= 0 {
            return Err(Error::domain(format!("κ_{{{c}}} has non-positive degree {deg}")));
        }
        names.push((format!("K[{c}]"), deg as u32));
        images.push(model.kappa(c)?);
    }
    let table = GeneratorTable::new(names)?;
    RingMap::new(table, model.target().clone(), images)
}

/// `κ_{e p_1}, ..., κ_{e p_{n-ε}}`, with `ε = 1` for `n` odd and `g > 1`
/// and `ε = 0` otherwise.
pub fn independence_generators(n: u32, g: u32) -> Vec<BasisMonomial> {
    let top = if g > 1 && n % 2 == 1 { n - 1 } else { n };
    (1..=top)
        .map(|i| BasisMonomial::e_times_p(n, i).expect("1 <= i <= n"))
        .collect()
}

/// Checks that the free generators of the `(n, g, flavor)` presentation have
/// no polynomial relation up to `max_degree` (default `8n`) in the sphere
/// model (`g = 0`) or the Lie-group model (`g > 1`).
pub fn check_presentation_independence(
    n: u32,
    g: u32,
    flavor: Flavor,
    max_degree: Option<u32>,
) -> Result<TruncatedKernelResult> {
    if n == 0 {
        return Err(Error::domain("half-dimension must be positive"));
    }
    match (flavor, g) {
        (_, 1) => {
            return Err(Error::domain(
                "g = 1: the presentation has no generators, independence is vacuous",
            ))
        }
        (Flavor::Disc, _) => {
            return Err(Error::domain("the disc presentation has no generators"));
        }
        (Flavor::Pointed, 0) => {
            return Err(Error::UnsupportedCase("no pointed presentation at g = 0".into()));
        }
        _ => {}
    }
    let model = if g == 0 {
        BundleModel::sphere(n)?
    } else {
        BundleModel::liegroup(n, g)?
    };
    let gens = independence_generators(n, g);
    let mut f = model_generator_map(&model, &gens)?;
    // name the source like the presentation does
    let names: Vec<(String, u32)> = (1..=gens.len() as u32)
        .zip(f.source().degrees().to_vec())
        .map(|(i, d)| (kappa_generator_name(i), d))
        .collect();
    f = RingMap::new(GeneratorTable::new(names)?, f.target().clone(), f.images().to_vec())?;
    kernel_up_to_degree(&f, max_degree.unwrap_or(8 * n))
}
