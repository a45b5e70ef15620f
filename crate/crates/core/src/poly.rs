//! Sparse multivariate polynomials over the rationals with graded generators.
//!
//! Terms are kept in a `BTreeMap` keyed by `(total degree, exponent vector)`,
//! which gives the canonical graded-lexicographic order used for printing:
//! lower degrees first, and within a degree the exponent vectors in
//! ascending lexicographic order (so `p2` comes before `p1^2`).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::arith::{format_scalar, ExactScalar};
use crate::error::{Error, Result};

/// Ordered list of named generators, each with a positive even degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorTable {
    names: Vec<String>,
    degrees: Vec<u32>,
}

pub type TableRef = Arc<GeneratorTable>;

impl GeneratorTable {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, u32)>) -> Result<TableRef> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for (name, degree) in gens {
            let name = name.into();
            if degree == 0 || degree % 2 != 0 {
                return Err(Error::domain(format!(
                    "generator `{name}` has degree {degree}; degrees must be positive and even"
                )));
            }
            if names.contains(&name) {
                return Err(Error::domain(format!("duplicate generator `{name}`")));
            }
            names.push(name);
            degrees.push(degree);
        }
        Ok(Arc::new(GeneratorTable { names, degrees }))
    }

    pub fn empty() -> TableRef {
        Arc::new(GeneratorTable {
            names: Vec::new(),
            degrees: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn degree(&self, idx: usize) -> u32 {
        self.degrees[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn monomial_degree(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    /// All exponent vectors of total degree exactly `degree`, in canonical
    /// (ascending lexicographic) order.
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut current = vec![0u32; self.len()];
        self.fill_monomials(0, degree, &mut current, &mut out);
        out.sort();
        out
    }

    fn fill_monomials(&self, idx: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx == self.len() {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = self.degrees[idx];
        for e in 0..=remaining / d {
            cur[idx] = e;
            self.fill_monomials(idx + 1, remaining - e * d, cur, out);
        }
        cur[idx] = 0;
    }
}

fn same_table(a: &TableRef, b: &TableRef) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

/// Arithmetic operations accepted by [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedPoly {
    table: TableRef,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl GradedPoly {
    pub fn zero(table: &TableRef) -> Self {
        GradedPoly {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &TableRef) -> Self {
        Self::constant(table, ExactScalar::one())
    }

    pub fn constant(table: &TableRef, c: ExactScalar) -> Self {
        Self::monomial(table, vec![0; table.len()], c)
    }

    /// `c * x^exps`. Panics if `exps` does not match the table arity.
    pub fn monomial(table: &TableRef, exps: Vec<u32>, c: ExactScalar) -> Self {
        assert_eq!(exps.len(), table.len(), "exponent vector arity");
        let mut p = Self::zero(table);
        if !c.is_zero() {
            let degree = table.monomial_degree(&exps);
            p.terms.insert(Monomial { degree, exps }, c);
        }
        p
    }

    pub fn var(table: &TableRef, idx: usize) -> Self {
        let mut exps = vec![0; table.len()];
        exps[idx] = 1;
        Self::monomial(table, exps, ExactScalar::one())
    }

    pub fn generator(table: &TableRef, name: &str) -> Result<Self> {
        let idx = table
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(Self::var(table, idx))
    }

    pub fn table(&self) -> &TableRef {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order as `(exponents, coefficient)`.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &ExactScalar)> {
        self.terms.iter().map(|(m, c)| (m.exps.as_slice(), c))
    }

    /// Coefficient of the monomial with the given exponents (zero if absent).
    pub fn coeff(&self, exps: &[u32]) -> ExactScalar {
        let key = Monomial {
            degree: self.table.monomial_degree(exps),
            exps: exps.to_vec(),
        };
        self.terms.get(&key).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> ExactScalar {
        self.coeff(&vec![0; self.table.len()])
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree)
    }

    /// `Some(d)` if every term has degree `d`; the zero polynomial is
    /// homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let first = self.terms.keys().next()?.degree;
        let last = self.terms.keys().next_back()?.degree;
        (first == last).then_some(first)
    }

    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.is_zero() || self.homogeneous_degree() == Some(degree)
    }

    fn add_term(&mut self, key: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_table(&self, other: &Self) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = Self::zero(&self.table);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps = ma.exps.iter().zip(&mb.exps).map(|(a, b)| a + b).collect();
                let key = Monomial {
                    degree: ma.degree + mb.degree,
                    exps,
                };
                out.add_term(key, ca * cb);
            }
        }
        Ok(out)
    }

    /// Product that refuses to produce terms above `bound`.
    pub fn mul_bounded(&self, other: &Self, bound: u32) -> Result<Self> {
        if let (Some(a), Some(b)) = (self.max_degree(), other.max_degree()) {
            if a + b > bound {
                return Err(Error::DegreeBound { degree: a + b, bound });
            }
        }
        self.try_mul(other)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(&self.table);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn pow_bounded(&self, k: u32, bound: u32) -> Result<Self> {
        if let Some(d) = self.max_degree() {
            if d.saturating_mul(k) > bound {
                return Err(Error::DegreeBound {
                    degree: d.saturating_mul(k),
                    bound,
                });
            }
        }
        Ok(self.pow(k))
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        GradedPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Ring homomorphism determined by `images[i]` for generator `i`.
    /// All images must live over `target`.
    pub fn substitute(&self, images: &[GradedPoly], target: &TableRef) -> Result<Self> {
        if images.len() != self.table.len() {
            return Err(Error::TableMismatch);
        }
        if images.iter().any(|img| !same_table(img.table(), target)) {
            return Err(Error::TableMismatch);
        }
        // powers[i][k] = images[i]^k, grown on demand
        let mut powers: Vec<Vec<GradedPoly>> = images
            .iter()
            .map(|_| vec![GradedPoly::one(target)])
            .collect();
        let mut out = GradedPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = GradedPoly::constant(target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Splits `self = even + g * odd` where neither part has odd powers of `g`.
    pub fn parity_split(&self, gen: &str) -> Result<(GradedPoly, GradedPoly)> {
        let idx = self
            .table
            .index_of(gen)
            .ok_or_else(|| Error::UnknownGenerator(gen.to_string()))?;
        let gdeg = self.table.degree(idx);
        let mut even = GradedPoly::zero(&self.table);
        let mut odd = GradedPoly::zero(&self.table);
        for (m, c) in &self.terms {
            if m.exps[idx] % 2 == 0 {
                even.terms.insert(m.clone(), c.clone());
            } else {
                let mut exps = m.exps.clone();
                exps[idx] -= 1;
                odd.terms.insert(
                    Monomial {
                        degree: m.degree - gdeg,
                        exps,
                    },
                    c.clone(),
                );
            }
        }
        Ok((even, odd))
    }

    /// Sum of the terms of exactly the given total degree.
    pub fn homogeneous_component(&self, degree: u32) -> GradedPoly {
        GradedPoly {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of degree at most `degree`.
    pub fn truncate_degree(&self, degree: u32) -> GradedPoly {
        GradedPoly {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree <= degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reinterprets the polynomial over a table with the same degrees
    /// (for instance renaming `sigma_i` to `p_i`).
    pub fn relabel(&self, table: &TableRef) -> Result<GradedPoly> {
        if table.degrees() != self.table.degrees() {
            return Err(Error::TableMismatch);
        }
        Ok(GradedPoly {
            table: table.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Parses the canonical text form (and anything with the same grammar:
    /// sums, products, `^` powers, parentheses, rational constants).
    pub fn parse(src: &str, table: &TableRef) -> Result<GradedPoly> {
        text::PolyParser::new(src, table).parse()
    }
}

pub fn poly_arith(a: &GradedPoly, b: &GradedPoly, op: ArithOp) -> Result<GradedPoly> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

pub fn homogeneous_component(x: &GradedPoly, degree: u32) -> GradedPoly {
    x.homogeneous_component(degree)
}

pub fn parity_split(x: &GradedPoly, gen: &str) -> Result<(GradedPoly, GradedPoly)> {
    x.parity_split(gen)
}

// Operator forms panic on mismatched tables; use the `try_*` methods when
// the tables are not known to agree.
impl std::ops::Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.try_add(rhs).expect("generator tables differ")
    }
}

impl std::ops::Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.try_sub(rhs).expect("generator tables differ")
    }
}

impl std::ops::Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.try_mul(rhs).expect("generator tables differ")
    }
}

impl std::ops::Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        self.scale(&-ExactScalar::one())
    }
}

fn write_monomial(f: &mut impl fmt::Write, table: &GeneratorTable, exps: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(table.name(i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.degree == 0 && m.exps.iter().all(|&e| e == 0) {
                f.write_str(&format_scalar(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", format_scalar(&abs))?;
                }
                write_monomial(f, &self.table, &m.exps)?;
            }
        }
        Ok(())
    }
}

/// A graded ring homomorphism between two polynomial rings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMap {
    source: TableRef,
    target: TableRef,
    images: Vec<GradedPoly>,
}

impl RingMap {
    pub fn new(source: TableRef, target: TableRef, images: Vec<GradedPoly>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::domain(format!(
                "ring map needs {} images, got {}",
                source.len(),
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if !same_table(img.table(), &target) {
                return Err(Error::TableMismatch);
            }
            if !img.is_homogeneous_of(source.degree(i)) {
                return Err(Error::domain(format!(
                    "image of `{}` is not homogeneous of degree {}",
                    source.name(i),
                    source.degree(i)
                )));
            }
        }
        Ok(RingMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(table: &TableRef) -> Self {
        let images = (0..table.len()).map(|i| GradedPoly::var(table, i)).collect();
        RingMap {
            source: table.clone(),
            target: table.clone(),
            images,
        }
    }

    pub fn source(&self) -> &TableRef {
        &self.source
    }

    pub fn target(&self) -> &TableRef {
        &self.target
    }

    pub fn images(&self) -> &[GradedPoly] {
        &self.images
    }

    pub fn image(&self, name: &str) -> Option<&GradedPoly> {
        self.source.index_of(name).map(|i| &self.images[i])
    }

    pub fn apply(&self, x: &GradedPoly) -> Result<GradedPoly> {
        if !same_table(x.table(), &self.source) {
            return Err(Error::TableMismatch);
        }
        x.substitute(&self.images, &self.target)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingMap) -> Result<RingMap> {
        let images = self
            .images
            .iter()
            .map(|img| other.apply(img))
            .collect::<Result<Vec<_>>>()?;
        RingMap::new(self.source.clone(), other.target.clone(), images)
    }
}

pub fn apply_map(f: &RingMap, x: &GradedPoly) -> Result<GradedPoly> {
    f.apply(x)
}

mod text {
    use super::*;
    use crate::arith::parse_scalar;

    pub(super) struct PolyParser<'a> {
        src: &'a str,
        pos: usize,
        table: &'a TableRef,
    }

    impl<'a> PolyParser<'a> {
        pub(super) fn new(src: &'a str, table: &'a TableRef) -> Self {
            PolyParser { src, pos: 0, table }
        }

        pub(super) fn parse(mut self) -> Result<GradedPoly> {
            let p = self.expr()?;
            self.skip_ws();
            if self.pos != self.src.len() {
                return Err(Error::parse(self.pos, "unexpected trailing input"));
            }
            Ok(p)
        }

        fn skip_ws(&mut self) {
            while let Some(c) = self.peek() {
                if c.is_whitespace() {
                    self.pos += c.len_utf8();
                } else {
                    break;
                }
            }
        }

        fn peek(&self) -> Option<char> {
            self.src[self.pos..].chars().next()
        }

        fn eat(&mut self, c: char) -> bool {
            self.skip_ws();
            if self.peek() == Some(c) {
                self.pos += c.len_utf8();
                true
            } else {
                false
            }
        }

        fn expr(&mut self) -> Result<GradedPoly> {
            let negate = self.eat('-');
            let mut acc = self.term()?;
            if negate {
                acc = -&acc;
            }
            loop {
                if self.eat('+') {
                    acc = &acc + &self.term()?;
                } else if self.eat('-') {
                    acc = &acc - &self.term()?;
                } else {
                    return Ok(acc);
                }
            }
        }

        fn term(&mut self) -> Result<GradedPoly> {
            let mut acc = self.factor()?;
            while self.eat('*') {
                acc = &acc * &self.factor()?;
            }
            Ok(acc)
        }

        fn factor(&mut self) -> Result<GradedPoly> {
            let base = self.atom()?;
            if self.eat('^') {
                let k = self.natural()?;
                return Ok(base.pow(k));
            }
            Ok(base)
        }

        fn natural(&mut self) -> Result<u32> {
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            self.src[start..self.pos]
                .parse()
                .map_err(|_| Error::parse(start, "expected a natural number"))
        }

        fn atom(&mut self) -> Result<GradedPoly> {
            self.skip_ws();
            let start = self.pos;
            match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    if !self.eat(')') {
                        return Err(Error::parse(self.pos, "expected `)`"));
                    }
                    Ok(inner)
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = self.natural()?;
                    let mut text = num.to_string();
                    let save = self.pos;
                    if self.eat('/') {
                        let den = self.natural()?;
                        text = format!("{num}/{den}");
                    } else {
                        self.pos = save;
                    }
                    let c = parse_scalar(&text)
                        .ok_or_else(|| Error::parse(start, "invalid rational constant"))?;
                    Ok(GradedPoly::constant(self.table, c))
                }
                Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                    let name = self.name()?;
                    GradedPoly::generator(self.table, &name)
                        .map_err(|_| Error::parse(start, format!("unknown generator `{name}`")))
                }
                _ => Err(Error::parse(start, "expected a constant, generator or `(`")),
            }
        }

        fn name(&mut self) -> Result<String> {
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                self.pos += 1;
            }
            if self.peek() == Some('[') {
                let mut depth = 0usize;
                while let Some(c) = self.peek() {
                    self.pos += c.len_utf8();
                    match c {
                        '[' => depth += 1,
                        ']' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                if depth != 0 {
                    return Err(Error::parse(start, "unbalanced `[` in generator name"));
                }
            }
            while self.peek() == Some('\'') {
                self.pos += 1;
            }
            Ok(self.src[start..self.pos].to_string())
        }
    }
}
