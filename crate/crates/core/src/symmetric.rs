//! Products of an even series over several variables, and conversion of
//! symmetric polynomials in `x_1^2, ..., x_n^2` into elementary symmetric
//! coordinates.

use num_traits::{One, Zero};

use crate::arith::{EvenPowerSeries, ExactScalar};
use crate::error::{Error, Result};
use crate::poly::{GeneratorTable, GradedPoly, TableRef};

/// Variables `x1..xn`, each of degree 2.
pub fn variable_table(n_vars: u32) -> TableRef {
    GeneratorTable::new((1..=n_vars).map(|i| (format!("x{i}"), 2))).unwrap()
}

/// Elementary symmetric generators `sigma1..sigman`, `sigma_i` of degree `4i`.
pub fn elementary_table(n_vars: u32) -> TableRef {
    GeneratorTable::new((1..=n_vars).map(|i| (format!("sigma{i}"), 4 * i))).unwrap()
}

/// A symmetric polynomial in `x_1, ..., x_n` involving only even powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricEvenPoly {
    n_vars: u32,
    poly: GradedPoly,
}

impl SymmetricEvenPoly {
    /// Validates symmetry (on the adjacent transpositions, which generate the
    /// symmetric group) and evenness.
    pub fn new(poly: GradedPoly) -> Result<Self> {
        let n_vars = poly.table().len() as u32;
        if poly.table().degrees().iter().any(|&d| d != 2) {
            return Err(Error::domain("symmetric polynomials live in degree-2 variables"));
        }
        if let Some((exps, _)) = poly.terms().find(|(e, _)| e.iter().any(|x| x % 2 != 0)) {
            return Err(Error::domain(format!(
                "odd exponent in monomial {exps:?}; not a polynomial in the squares"
            )));
        }
        for i in 0..n_vars.saturating_sub(1) as usize {
            let swapped = swap_variables(&poly, i, i + 1);
            if swapped != poly {
                return Err(Error::domain(format!(
                    "not symmetric: transposition (x{} x{}) changes the polynomial",
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(SymmetricEvenPoly { n_vars, poly })
    }

    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    pub fn poly(&self) -> &GradedPoly {
        &self.poly
    }

    pub fn homogeneous_component(&self, degree: u32) -> SymmetricEvenPoly {
        SymmetricEvenPoly {
            n_vars: self.n_vars,
            poly: self.poly.homogeneous_component(degree),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> SymmetricEvenPoly {
        SymmetricEvenPoly {
            n_vars: self.n_vars,
            poly: self.poly.scale(c),
        }
    }
}

fn swap_variables(p: &GradedPoly, i: usize, j: usize) -> GradedPoly {
    let t = p.table();
    p.terms().fold(GradedPoly::zero(t), |acc, (exps, c)| {
        let mut e = exps.to_vec();
        e.swap(i, j);
        &acc + &GradedPoly::monomial(t, e, c.clone())
    })
}

/// Expands `prod_i f(x_i)` keeping all terms of degree at most `max_weight`
/// (each `x_i` has degree 2, so `x^{2k}` has degree `4k`).
pub fn product_expand(
    f: &EvenPowerSeries,
    n_vars: u32,
    max_weight: u32,
) -> Result<SymmetricEvenPoly> {
    // x^{2k} has degree 4k, so weight w needs the series through x^{2 floor(w/4)}.
    let needed = 2 * (max_weight / 4);
    if f.order() < needed {
        return Err(Error::domain(format!(
            "series of order {} is too short for weight {max_weight} (needs order {needed})",
            f.order()
        )));
    }
    let table = variable_table(n_vars);
    let mut acc = GradedPoly::one(&table);
    for var in 0..n_vars as usize {
        let mut factor = GradedPoly::zero(&table);
        for k in 0..=(max_weight / 4) as usize {
            let c = f.coeff(k);
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0; n_vars as usize];
            exps[var] = 2 * k as u32;
            factor = &factor + &GradedPoly::monomial(&table, exps, c);
        }
        acc = (&acc * &factor).truncate_degree(max_weight);
    }
    Ok(SymmetricEvenPoly {
        n_vars,
        poly: acc,
    })
}

/// `sigma_k(x_1^2, ..., x_n^2)` as a polynomial in the `x_i`.
pub fn elementary_in_squares(n_vars: u32, k: u32) -> GradedPoly {
    let table = variable_table(n_vars);
    let mut out = GradedPoly::zero(&table);
    let n = n_vars as usize;
    let mut chosen = vec![0u32; n];
    fn rec(
        start: usize,
        left: u32,
        chosen: &mut Vec<u32>,
        table: &TableRef,
        out: &mut GradedPoly,
    ) {
        if left == 0 {
            *out = &*out + &GradedPoly::monomial(table, chosen.clone(), ExactScalar::one());
            return;
        }
        for i in start..chosen.len() {
            chosen[i] = 2;
            rec(i + 1, left - 1, chosen, table, out);
            chosen[i] = 0;
        }
    }
    rec(0, k, &mut chosen, &table, &mut out);
    out
}

/// Rewrites a symmetric even polynomial in the elementary symmetric
/// polynomials of the squared variables, by repeatedly subtracting the
/// product of `sigma`s matching the lexicographically leading term.
pub fn to_elementary(s: &SymmetricEvenPoly) -> Result<GradedPoly> {
    let n = s.n_vars;
    let target = elementary_table(n);
    let sigmas: Vec<GradedPoly> = (1..=n).map(|k| elementary_in_squares(n, k)).collect();
    // sigma_powers[k][e] = sigma_{k+1}^e, grown on demand
    let mut sigma_powers: Vec<Vec<GradedPoly>> = sigmas
        .iter()
        .map(|_| vec![GradedPoly::one(&variable_table(n))])
        .collect();
    let mut remaining = s.poly.clone();
    let mut out = GradedPoly::zero(&target);
    let mut guard = 0usize;
    loop {
        let next = remaining.terms().next_back().map(|(e, c)| (e.to_vec(), c.clone()));
        let Some((lead, c)) = next else { break };
        guard += 1;
        if guard > 1_000_000 {
            return Err(Error::domain("symmetric reduction failed to terminate"));
        }
        let halves: Vec<u32> = lead.iter().map(|e| e / 2).collect();
        if halves.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!(
                "not symmetric: leading monomial {lead:?} is not a partition"
            )));
        }
        // sigma exponents: a_k - a_{k+1}
        let sigma_exps: Vec<u32> = (0..n as usize)
            .map(|k| halves[k] - halves.get(k + 1).copied().unwrap_or(0))
            .collect();
        let mut product = GradedPoly::constant(&variable_table(n), c.clone());
        for (k, &e) in sigma_exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while sigma_powers[k].len() <= e as usize {
                let next = sigma_powers[k].last().unwrap() * &sigmas[k];
                sigma_powers[k].push(next);
            }
            product = &product * &sigma_powers[k][e as usize];
        }
        remaining = &remaining - &product;
        if !remaining.coeff(&lead).is_zero() {
            return Err(Error::domain("symmetric reduction did not cancel the leading term"));
        }
        out = &out + &GradedPoly::monomial(&target, sigma_exps, c);
    }
    Ok(out)
}

/// Substitutes `sigma_i -> sigma_i(x_1^2, ..., x_n^2)`; the inverse of
/// [`to_elementary`].
pub fn from_elementary(x: &GradedPoly, n_vars: u32) -> Result<GradedPoly> {
    let images: Vec<GradedPoly> = (1..=n_vars).map(|k| elementary_in_squares(n_vars, k)).collect();
    x.substitute(&images, &variable_table(n_vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn x(n: u32, s: &str) -> GradedPoly {
        GradedPoly::parse(s, &variable_table(n)).unwrap()
    }

    fn sigma(n: u32, s: &str) -> GradedPoly {
        GradedPoly::parse(s, &elementary_table(n)).unwrap()
    }

    fn sym(p: GradedPoly) -> SymmetricEvenPoly {
        SymmetricEvenPoly::new(p).unwrap()
    }

    #[test]
    fn product_expand_examples() {
        let f = EvenPowerSeries::from_coeffs(vec![int(2), rat(1, 6)]).unwrap();
        assert_eq!(product_expand(&f, 1, 4).unwrap().poly(), &x(1, "2 + 1/6*x1^2"));
        assert_eq!(
            product_expand(&f, 2, 4).unwrap().poly(),
            &x(2, "4 + 1/3*x1^2 + 1/3*x2^2")
        );
        let one = EvenPowerSeries::from_coeffs(vec![int(1)]).unwrap();
        for n in 1..4 {
            assert_eq!(product_expand(&one, n, 0).unwrap().poly(), &x(n, "1"));
        }
    }

    #[test]
    fn product_expand_rejects_short_series() {
        let f = EvenPowerSeries::from_coeffs(vec![int(2), rat(1, 6)]).unwrap();
        assert!(matches!(product_expand(&f, 2, 8), Err(Error::Domain(_))));
    }

    #[test]
    fn product_expand_output_is_symmetric() {
        let f = crate::arith::tanh_quotient_series(8).unwrap();
        let s = product_expand(&f, 3, 16).unwrap();
        assert!(SymmetricEvenPoly::new(s.poly().clone()).is_ok());
    }

    #[test]
    fn to_elementary_examples() {
        assert_eq!(to_elementary(&sym(x(2, "x1^2 + x2^2"))).unwrap(), sigma(2, "sigma1"));
        assert_eq!(
            to_elementary(&sym(x(2, "x1^4 + x2^4"))).unwrap(),
            sigma(2, "sigma1^2 - 2*sigma2")
        );
        assert_eq!(to_elementary(&sym(x(2, "x1^2*x2^2"))).unwrap(), sigma(2, "sigma2"));
    }

    #[test]
    fn rejects_non_symmetric_input() {
        let err = SymmetricEvenPoly::new(x(2, "x1^2")).unwrap_err();
        assert!(err.to_string().contains("(x1 x2)"), "{err}");
        assert!(SymmetricEvenPoly::new(x(2, "x1*x2")).is_err());
    }

    /// Power sums `sum_j y_j^k` via Newton's identities, written in the
    /// elementary symmetric basis.
    fn newton_power_sum(n: u32, k: u32) -> GradedPoly {
        let t = elementary_table(n);
        let e = |i: u32| {
            if i <= n {
                GradedPoly::generator(&t, &format!("sigma{i}")).unwrap()
            } else {
                GradedPoly::zero(&t)
            }
        };
        let mut p: Vec<GradedPoly> = vec![GradedPoly::constant(&t, int(n as i64))];
        for m in 1..=k {
            let mut acc = e(m).scale(&int(if m % 2 == 1 { m as i64 } else { -(m as i64) }));
            for i in 1..m {
                let sign = if i % 2 == 1 { 1 } else { -1 };
                acc = &acc + &(&e(i) * &p[(m - i) as usize]).scale(&int(sign));
            }
            p.push(acc);
        }
        p.pop().unwrap()
    }

    #[test]
    fn agrees_with_newton_identities() {
        for n in 1..=5u32 {
            for k in 1..=5u32 {
                let t = variable_table(n);
                let ps = (0..n as usize).fold(GradedPoly::zero(&t), |acc, j| {
                    let mut exps = vec![0; n as usize];
                    exps[j] = 2 * k;
                    &acc + &GradedPoly::monomial(&t, exps, int(1))
                });
                let got = to_elementary(&sym(ps)).unwrap();
                assert_eq!(got, newton_power_sum(n, k), "n = {n}, k = {k}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Random symmetric even polynomials, built as random combinations of
        /// products of elementary symmetric polynomials in the squares.
        fn symmetric(n: u32) -> impl Strategy<Value = SymmetricEvenPoly> {
            prop::collection::vec((prop::collection::vec(0u32..3, n as usize), -5i64..5), 1..4)
                .prop_map(move |terms| {
                    let t = elementary_table(n);
                    let s = terms.into_iter().fold(GradedPoly::zero(&t), |acc, (exps, c)| {
                        &acc + &GradedPoly::monomial(&t, exps, int(c))
                    });
                    SymmetricEvenPoly::new(from_elementary(&s, n).unwrap()).unwrap()
                })
        }

        proptest! {
            #[test]
            fn round_trip(s in symmetric(3)) {
                let e = to_elementary(&s).unwrap();
                prop_assert_eq!(&from_elementary(&e, 3).unwrap(), s.poly());
            }

            #[test]
            fn ring_homomorphism(a in symmetric(3), b in symmetric(3)) {
                let ea = to_elementary(&a).unwrap();
                let eb = to_elementary(&b).unwrap();
                let prod = SymmetricEvenPoly::new(a.poly() * b.poly()).unwrap();
                let sum = SymmetricEvenPoly::new(a.poly() + b.poly()).unwrap();
                prop_assert_eq!(to_elementary(&prod).unwrap(), &ea * &eb);
                prop_assert_eq!(to_elementary(&sum).unwrap(), &ea + &eb);
            }
        }
    }
}
