//! Rational cohomology of `BSO(d)`, the monomial basis of `H*(BSO(2n))`,
//! Whitney sums, and the modified Hirzebruch classes.
//!
//! `H*(BSO(d); Q)` is `Q[p_1, ..., p_{(d-1)/2}]` for odd `d` and
//! `Q[p_1, ..., p_{d/2-1}, e]` for even `d`, with `p_{d/2} = e^2`. That
//! alias is always folded on input, so `p_{d/2}` is never a stored
//! generator for even `d`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{bernoulli, factorial, hirzebruch_series, int, tanh_quotient_series, ExactScalar};
use crate::error::{Error, Result};
use crate::poly::{GeneratorTable, GradedPoly, RingMap, TableRef};
use crate::symmetric::{product_expand, to_elementary};

/// The polynomial ring `H*(BSO(d); Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSORing {
    d: u32,
    table: TableRef,
}

impl BSORing {
    pub fn rank(&self) -> u32 {
        self.d
    }

    pub fn table(&self) -> &TableRef {
        &self.table
    }

    pub fn has_euler(&self) -> bool {
        self.d % 2 == 0
    }

    /// Highest stored Pontryagin index.
    pub fn top_pontryagin(&self) -> u32 {
        if self.d % 2 == 0 {
            self.d / 2 - 1
        } else {
            (self.d - 1) / 2
        }
    }

    /// `p_k` as an element of the ring: `e^2` for `k = d/2` (even `d`),
    /// zero above the rank.
    pub fn pontryagin(&self, k: u32) -> GradedPoly {
        if k == 0 {
            return GradedPoly::one(&self.table);
        }
        if k <= self.top_pontryagin() {
            return GradedPoly::var(&self.table, (k - 1) as usize);
        }
        if self.has_euler() && k == self.d / 2 {
            return self.euler().pow(2);
        }
        GradedPoly::zero(&self.table)
    }

    /// The Euler class (zero for odd rank, where it is rationally trivial).
    pub fn euler(&self) -> GradedPoly {
        match self.table.index_of("e") {
            Some(idx) => GradedPoly::var(&self.table, idx),
            None => GradedPoly::zero(&self.table),
        }
    }

    /// Total Pontryagin class `1 + p_1 + p_2 + ...` (including `e^2` on top
    /// for even rank).
    pub fn total_pontryagin(&self) -> GradedPoly {
        let top = if self.has_euler() { self.d / 2 } else { self.top_pontryagin() };
        (1..=top).fold(GradedPoly::one(&self.table), |acc, k| &acc + &self.pontryagin(k))
    }
}

pub fn bso_ring(d: u32) -> Result<BSORing> {
    if d < 2 {
        return Err(Error::domain(format!("BSO({d}) needs rank at least 2")));
    }
    let mut gens: Vec<(String, u32)> = Vec::new();
    let top = if d % 2 == 0 { d / 2 - 1 } else { (d - 1) / 2 };
    for i in 1..=top {
        gens.push((format!("p{i}"), 4 * i));
    }
    if d % 2 == 0 {
        gens.push(("e".to_string(), d));
    }
    Ok(BSORing {
        d,
        table: GeneratorTable::new(gens)?,
    })
}

/// `p_1..p_n`, the ring `H*(BSO(2n+1); Q)` in which the modified
/// Hirzebruch classes are written.
pub fn pontryagin_table(n: u32) -> TableRef {
    GeneratorTable::new((1..=n).map(|i| (format!("p{i}"), 4 * i))).unwrap()
}

/// A monomial `e^a p_1^{b_1} ... p_{n-1}^{b_{n-1}}` in `H*(BSO(2n); Q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisMonomial {
    n: u32,
    euler: u32,
    pontryagin: Vec<u32>,
}

impl BasisMonomial {
    /// `e^euler * p^pontryagin`, where `pontryagin` has `n - 1` entries.
    pub fn new(n: u32, euler: u32, pontryagin: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("half-dimension must be positive"));
        }
        if pontryagin.len() != n as usize - 1 {
            return Err(Error::domain(format!(
                "basis monomial for n = {n} needs {} Pontryagin exponents, got {}",
                n - 1,
                pontryagin.len()
            )));
        }
        Ok(BasisMonomial {
            n,
            euler,
            pontryagin,
        })
    }

    pub fn one(n: u32) -> Self {
        BasisMonomial::new(n, 0, vec![0; n as usize - 1]).unwrap()
    }

    pub fn euler_power(n: u32, a: u32) -> Self {
        BasisMonomial::new(n, a, vec![0; n as usize - 1]).unwrap()
    }

    /// `e^a * p_1^{b_1} ... p_n^{b_n}` with `p_n` folded to `e^2`.
    /// `exps` may have up to `n` entries.
    pub fn from_pontryagin(n: u32, a: u32, exps: &[u32]) -> Result<Self> {
        if exps.len() > n as usize {
            return Err(Error::domain(format!(
                "p_{} is out of range for n = {n}",
                exps.len()
            )));
        }
        let mut p = vec![0; n as usize - 1];
        let mut euler = a;
        for (i, &b) in exps.iter().enumerate() {
            if i + 1 == n as usize {
                euler += 2 * b;
            } else {
                p[i] = b;
            }
        }
        BasisMonomial::new(n, euler, p)
    }

    /// `e * p_i` (so `e^3` when `i = n`).
    pub fn e_times_p(n: u32, i: u32) -> Result<Self> {
        let mut exps = vec![0; i as usize];
        if i > 0 {
            exps[i as usize - 1] = 1;
        }
        Self::from_pontryagin(n, 1, &exps)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn euler_exponent(&self) -> u32 {
        self.euler
    }

    pub fn pontryagin_exponents(&self) -> &[u32] {
        &self.pontryagin
    }

    /// Sum of the Pontryagin exponents.
    pub fn pontryagin_length(&self) -> u32 {
        self.pontryagin.iter().sum()
    }

    pub fn degree(&self) -> u32 {
        2 * self.n * self.euler
            + self
                .pontryagin
                .iter()
                .enumerate()
                .map(|(i, b)| 4 * (i as u32 + 1) * b)
                .sum::<u32>()
    }

    pub fn times_euler(&self, k: u32) -> Self {
        BasisMonomial {
            n: self.n,
            euler: self.euler + k,
            pontryagin: self.pontryagin.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        BasisMonomial {
            n: self.n,
            euler: self.euler + other.euler,
            pontryagin: self
                .pontryagin
                .iter()
                .zip(&other.pontryagin)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Exponent vector over the table of `bso_ring(2n)` (`p_1..p_{n-1}, e`).
    pub fn total_ring_exponents(&self) -> Vec<u32> {
        let mut v = self.pontryagin.clone();
        v.push(self.euler);
        v
    }

    /// The monomial as an element of `H*(BSO(2n); Q)`.
    pub fn to_poly(&self, ring: &BSORing) -> GradedPoly {
        assert_eq!(ring.rank(), 2 * self.n, "ring rank must be 2n");
        GradedPoly::monomial(ring.table(), self.total_ring_exponents(), ExactScalar::one())
    }

    /// Evaluates the monomial on a bundle given its Pontryagin classes
    /// `p_1..p_{n-1}` and Euler class.
    pub fn evaluate(&self, pontryagin: &[GradedPoly], euler: &GradedPoly) -> GradedPoly {
        let mut acc = euler.pow(self.euler);
        for (p, &b) in pontryagin.iter().zip(&self.pontryagin) {
            if b > 0 {
                acc = &acc * &p.pow(b);
            }
        }
        acc
    }
}

impl fmt::Display for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.euler {
            0 => {}
            1 => parts.push("e".to_string()),
            a => parts.push(format!("e^{a}")),
        }
        for (i, &b) in self.pontryagin.iter().enumerate() {
            match b {
                0 => {}
                1 => parts.push(format!("p{}", i + 1)),
                b => parts.push(format!("p{}^{b}", i + 1)),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// All basis monomials of degree at most `max_degree`, ordered by degree
/// and then by exponent vector.
pub fn enumerate_basis(n: u32, max_degree: u32) -> Vec<BasisMonomial> {
    let ring = bso_ring(2 * n).expect("2n >= 2");
    let mut out: Vec<(u32, Vec<u32>)> = Vec::new();
    for d in (0..=max_degree).step_by(2) {
        for exps in ring.table().monomials_of_degree(d) {
            out.push((d, exps));
        }
    }
    out.sort();
    out.into_iter()
        .map(|(_, mut exps)| {
            let euler = exps.pop().unwrap();
            BasisMonomial::new(n, euler, exps).unwrap()
        })
        .collect()
}

/// A modified Hirzebruch class in `H^{4i}(BSO(2n); Q)`, written in
/// `p_1..p_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LTildeClass {
    pub i: u32,
    pub n: u32,
    pub poly: GradedPoly,
}

/// Degree-`4i` component of a multiplicative sequence, written in the
/// Pontryagin classes `p_1..p_m` of `m` expansion variables.
fn multiplicative_component(series_weight: u32, m: u32, half_argument: bool) -> Result<GradedPoly> {
    let order = 2 * series_weight;
    let series = if half_argument {
        tanh_quotient_series(order)?
    } else {
        hirzebruch_series(order)?
    };
    let expanded = product_expand(&series, m, 4 * series_weight)?;
    let component = expanded.homogeneous_component(4 * series_weight);
    to_elementary(&component)?.relabel(&pontryagin_table(m))
}

/// Re-expresses a polynomial in `p_1..p_m` over `p_1..p_n`, setting the
/// classes above the smaller of the two ranges to zero.
pub fn change_pontryagin_rank(x: &GradedPoly, n: u32) -> Result<GradedPoly> {
    let target = pontryagin_table(n);
    let m = x.table().len() as u32;
    let images: Vec<GradedPoly> = (1..=m)
        .map(|j| {
            if j <= n {
                GradedPoly::var(&target, (j - 1) as usize)
            } else {
                GradedPoly::zero(&target)
            }
        })
        .collect();
    x.substitute(&images, &target)
}

/// `L~_i` for `BSO(2n)`: the degree `4i` part of `prod_j x_j / tanh(x_j/2)`.
///
/// Only `min(n, 2i)` expansion variables are used; the remaining factors
/// each contribute their constant term 2, applied as a power of two.
pub fn l_tilde(i: u32, n: u32) -> Result<LTildeClass> {
    if n == 0 {
        return Err(Error::domain("half-dimension must be positive"));
    }
    let table = pontryagin_table(n);
    if i == 0 {
        let c = num_traits::pow(int(2), n as usize);
        return Ok(LTildeClass {
            i,
            n,
            poly: GradedPoly::constant(&table, c),
        });
    }
    let m = n.min(2 * i);
    let component = multiplicative_component(i, m, true)?;
    let scaled = component.scale(&num_traits::pow(int(2), (n - m) as usize));
    Ok(LTildeClass {
        i,
        n,
        poly: change_pontryagin_rank(&scaled, n)?,
    })
}

/// The classical Hirzebruch polynomial `L_i` in `p_1..p_i`.
pub fn l_classical(i: u32) -> Result<GradedPoly> {
    if i == 0 {
        return Err(Error::domain("L_i is defined for i >= 1"));
    }
    multiplicative_component(i, i, false)
}

/// `2^n (2^{2i-1} - 1) B_i / (2i)!`, the coefficient of `p_i` in `L~_i`.
pub fn l_tilde_leading_coefficient(i: u32, n: u32) -> Result<ExactScalar> {
    let two = int(2);
    let factor = num_traits::pow(two.clone(), (2 * i - 1) as usize) - ExactScalar::one();
    Ok(num_traits::pow(two, n as usize) * factor * bernoulli(i)?
        / ExactScalar::from_integer(factorial(2 * i)))
}

/// Generators `L1..Lk` standing for `L~_1..L~_k`.
pub fn ltilde_table(k: u32) -> TableRef {
    GeneratorTable::new((1..=k).map(|i| (format!("L{i}"), 4 * i))).unwrap()
}

/// Writes `p_1..p_{max_i}` as polynomials in `L~_1..L~_{max_i}` by
/// inverting `L~_i = c_i p_i + (lower terms)` one index at a time.
pub fn p_to_ltilde_basis(n: u32, max_i: u32) -> Result<RingMap> {
    if max_i > n {
        return Err(Error::domain(format!("max_i = {max_i} exceeds n = {n}")));
    }
    let source = pontryagin_table(max_i);
    let target = ltilde_table(max_i);
    let mut images: Vec<GradedPoly> = Vec::with_capacity(max_i as usize);
    for i in 1..=max_i {
        let lt = change_pontryagin_rank(&l_tilde(i, n)?.poly, i)?;
        let mut lead_exps = vec![0; i as usize];
        lead_exps[i as usize - 1] = 1;
        let lead = lt.coeff(&lead_exps);
        assert!(!lead.is_zero(), "leading coefficient of L~_{i} vanished");
        let rest = &lt - &GradedPoly::monomial(lt.table(), lead_exps, lead.clone());
        // `rest` only involves p_1..p_{i-1}; p_i gets a zero placeholder.
        let mut known = images.clone();
        known.push(GradedPoly::zero(&target));
        let rest_in_l = rest.substitute(&known, &target)?;
        let li = GradedPoly::var(&target, i as usize - 1);
        images.push((&li - &rest_in_l).scale(&lead.recip()));
    }
    RingMap::new(source, target, images)
}

/// Table of `H*(BSO(d1) x BSO(d2); Q)`: generators of the first factor
/// primed, of the second double-primed.
pub fn product_table(f1: &BSORing, f2: &BSORing) -> TableRef {
    let gens = f1
        .table()
        .names()
        .iter()
        .zip(f1.table().degrees())
        .map(|(n, &d)| (format!("{n}'"), d))
        .chain(
            f2.table()
                .names()
                .iter()
                .zip(f2.table().degrees())
                .map(|(n, &d)| (format!("{n}''"), d)),
        );
    GeneratorTable::new(gens).unwrap()
}

/// Includes a factor's generators into the product table.
fn factor_inclusion(f: &BSORing, target: &TableRef, offset: usize) -> RingMap {
    let images = (0..f.table().len())
        .map(|i| GradedPoly::var(target, offset + i))
        .collect();
    RingMap::new(f.table().clone(), target.clone(), images).unwrap()
}

/// Restriction along the block sum `BSO(d1) x BSO(d2) -> BSO(d1 + d2)`:
/// `p_k` goes to the degree `4k` part of `p(V1) p(V2)`, and `e` goes to
/// `e(V1) e(V2)`, which is zero as soon as one rank is odd.
pub fn whitney_p(f1: &BSORing, f2: &BSORing) -> Result<RingMap> {
    let sum = bso_ring(f1.rank() + f2.rank())?;
    let target = product_table(f1, f2);
    let inc1 = factor_inclusion(f1, &target, 0);
    let inc2 = factor_inclusion(f2, &target, f1.table().len());
    let total = &inc1.apply(&f1.total_pontryagin())? * &inc2.apply(&f2.total_pontryagin())?;
    let mut images = Vec::with_capacity(sum.table().len());
    for k in 1..=sum.top_pontryagin() {
        images.push(total.homogeneous_component(4 * k));
    }
    if sum.has_euler() {
        let e = &inc1.apply(&f1.euler())? * &inc2.apply(&f2.euler())?;
        images.push(e);
    }
    RingMap::new(sum.table().clone(), target, images)
}

/// Exponent of two in the ratio `L~_i / L_i = 2^{n-2i}` (may be negative).
pub fn ltilde_classical_ratio(i: u32, n: u32) -> ExactScalar {
    crate::arith::pow_signed(&int(2), n as i64 - 2 * i as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(n: u32, s: &str) -> GradedPoly {
        GradedPoly::parse(s, &pontryagin_table(n)).unwrap()
    }

    #[test]
    fn bso_ring_generators() {
        let r5 = bso_ring(5).unwrap();
        assert_eq!(r5.table().names(), ["p1", "p2"]);
        assert_eq!(r5.table().degrees(), [4, 8]);
        let r6 = bso_ring(6).unwrap();
        assert_eq!(r6.table().names(), ["p1", "p2", "e"]);
        assert_eq!(r6.table().degrees(), [4, 8, 6]);
        let r2 = bso_ring(2).unwrap();
        assert_eq!(r2.table().names(), ["e"]);
        assert_eq!(r2.table().degrees(), [2]);
        assert!(bso_ring(1).is_err());
        assert_eq!(r6.pontryagin(3), r6.euler().pow(2));
        assert!(r5.pontryagin(3).is_zero());
    }

    #[test]
    fn l_tilde_examples() {
        for n in 1..=4 {
            let l0 = l_tilde(0, n).unwrap();
            assert_eq!(l0.poly.constant_term(), int(1 << n));
        }
        assert_eq!(l_tilde(1, 1).unwrap().poly, p(1, "1/6*p1"));
        assert_eq!(l_tilde(2, 2).unwrap().poly, p(2, "7/180*p2 - 1/180*p1^2"));
        assert_eq!(
            l_tilde(1, 1).unwrap().poly.coeff(&[1]),
            l_tilde_leading_coefficient(1, 1).unwrap()
        );
    }

    #[test]
    fn classical_examples() {
        assert_eq!(l_classical(1).unwrap(), p(1, "1/3*p1"));
        assert_eq!(l_classical(2).unwrap(), p(2, "7/45*p2 - 1/45*p1^2"));
        assert_eq!(
            l_classical(3).unwrap(),
            p(3, "62/945*p3 - 13/945*p1*p2 + 2/945*p1^3")
        );
    }

    #[test]
    fn few_variables_match_full_expansion() {
        // min(n, 2i) variables plus the power of two agrees with expanding
        // over all n variables.
        for (i, n) in [(1, 3), (1, 4), (2, 5), (1, 5)] {
            let full = multiplicative_component(i, n, true).unwrap();
            assert_eq!(l_tilde(i, n).unwrap().poly, full, "i = {i}, n = {n}");
        }
    }

    #[test]
    fn stability_in_n() {
        for i in 1..=3u32 {
            let base = l_tilde(i, 2 * i).unwrap().poly.scale(&rat(1, 1 << (2 * i)));
            for n in 2 * i..=2 * i + 2 {
                let scaled = l_tilde(i, n).unwrap().poly.scale(&rat(1, 1 << n));
                assert_eq!(change_pontryagin_rank(&scaled, 2 * i).unwrap(), base);
            }
        }
    }

    #[test]
    fn p_to_ltilde_examples() {
        let f = p_to_ltilde_basis(1, 1).unwrap();
        assert_eq!(f.images()[0], GradedPoly::parse("6*L1", f.target()).unwrap());
        let f = p_to_ltilde_basis(2, 2).unwrap();
        assert_eq!(f.images()[0], GradedPoly::parse("3*L1", f.target()).unwrap());
        assert!(p_to_ltilde_basis(2, 3).is_err());
    }

    #[test]
    fn p_to_ltilde_round_trip() {
        for n in 1..=4u32 {
            for max_i in 1..=n {
                let f = p_to_ltilde_basis(n, max_i).unwrap();
                let back: Vec<GradedPoly> = (1..=max_i)
                    .map(|j| change_pontryagin_rank(&l_tilde(j, n).unwrap().poly, max_i).unwrap())
                    .collect();
                let back = RingMap::new(f.target().clone(), f.source().clone(), back).unwrap();
                let composed = f.then(&back).unwrap();
                assert_eq!(composed, RingMap::identity(f.source()), "n = {n}, max_i = {max_i}");
            }
        }
    }

    #[test]
    fn whitney_examples() {
        let r3 = bso_ring(3).unwrap();
        let w = whitney_p(&r3, &r3).unwrap();
        let t = w.target().clone();
        assert_eq!(t.names(), ["p1'", "p1''"]);
        let q = |s: &str| GradedPoly::parse(s, &t).unwrap();
        assert_eq!(w.image("p1").unwrap(), &q("p1' + p1''"));
        assert!(w.image("e").unwrap().is_zero());
        assert_eq!(w.image("p2").unwrap(), &q("p1'*p1''"));

        let r4 = bso_ring(4).unwrap();
        let w = whitney_p(&r4, &r4).unwrap();
        let t = w.target().clone();
        let q = |s: &str| GradedPoly::parse(s, &t).unwrap();
        assert_eq!(w.image("e").unwrap(), &q("e'*e''"));
        assert_eq!(w.image("p2").unwrap(), &q("e'^2 + p1'*p1'' + e''^2"));
        assert_eq!(w.image("p3").unwrap(), &q("e'^2*p1'' + p1'*e''^2"));
    }

    #[test]
    fn whitney_mixed_parity() {
        let w = whitney_p(&bso_ring(3).unwrap(), &bso_ring(2).unwrap()).unwrap();
        // rank 5: p1, p2 only
        let t = w.target().clone();
        assert_eq!(
            w.image("p1").unwrap(),
            &GradedPoly::parse("p1' + e''^2", &t).unwrap()
        );
        assert_eq!(
            w.image("p2").unwrap(),
            &GradedPoly::parse("p1'*e''^2", &t).unwrap()
        );
    }

    #[test]
    fn basis_enumeration() {
        let b = enumerate_basis(3, 8);
        let mut names: Vec<String> = b.iter().map(|m| m.to_string()).collect();
        names.sort();
        let mut expect = vec!["1", "p1", "e", "p1^2", "p2"];
        expect.sort();
        assert_eq!(names, expect);
        assert_eq!(enumerate_basis(3, 3), vec![BasisMonomial::one(3)]);
        let b1: Vec<String> = enumerate_basis(1, 4).iter().map(|m| m.to_string()).collect();
        assert_eq!(b1, ["1", "e", "e^2"]);
        assert!(b.windows(2).all(|w| w[0].degree() <= w[1].degree()));
    }

    #[test]
    fn basis_monomial_folding() {
        let m = BasisMonomial::from_pontryagin(3, 0, &[0, 0, 1]).unwrap();
        assert_eq!(m, BasisMonomial::euler_power(3, 2));
        assert_eq!(BasisMonomial::e_times_p(3, 3).unwrap().to_string(), "e^3");
        assert!(BasisMonomial::from_pontryagin(3, 0, &[0, 0, 0, 1]).is_err());
        let m = BasisMonomial::from_pontryagin(3, 1, &[1, 1]).unwrap();
        assert_eq!(m.to_string(), "e*p1*p2");
        assert_eq!(m.degree(), 6 + 4 + 8);
    }
}
