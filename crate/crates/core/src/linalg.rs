//! Exact null spaces via fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::ExactScalar;

/// Row echelon form of an integer matrix computed without fractions.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Scales each rational row by the lcm of its denominators.
pub fn integer_rows(rows: &[Vec<ExactScalar>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Bareiss elimination with pivot-column skipping. Every division is exact;
/// entries stay bounded by minors of the input.
pub fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let m = a.len();
    let mut pivots = vec![];
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..m {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots, cols }
}

/// A basis of `{x : A x = 0}` read off an echelon form, one vector per free
/// column, each scaled to a primitive integer vector with positive entry at
/// its free column.
pub fn null_space(ech: &Echelon) -> Vec<Vec<ExactScalar>> {
    let cols = ech.cols;
    let is_pivot: Vec<bool> = (0..cols).map(|c| ech.pivots.contains(&c)).collect();
    let mut out = vec![];
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![ExactScalar::zero(); cols];
        x[free] = ExactScalar::one();
        for (k, &pc) in ech.pivots.iter().enumerate().rev() {
            let row = &ech.rows[k];
            let mut s = ExactScalar::zero();
            for j in pc + 1..cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    s += ExactScalar::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = -s / ExactScalar::from_integer(row[pc].clone());
        }
        out.push(primitive(x));
    }
    out
}

fn primitive(x: Vec<ExactScalar>) -> Vec<ExactScalar> {
    let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return x;
    }
    ints.into_iter()
        .map(|v| ExactScalar::from_integer(v / &g))
        .collect()
}

/// `A x` for a rational matrix.
pub fn mat_vec(rows: &[Vec<ExactScalar>], x: &[ExactScalar]) -> Vec<ExactScalar> {
    rows.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn is_zero_vec(x: &[ExactScalar]) -> bool {
    x.iter().all(|v| v.is_zero())
}
