//! κ-expressions: an AST over `κ_c` and (pointed) `c` leaves, its text
//! grammar and evaluation into a polynomial ring.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | primary ('^' nat)*
//! primary:= rational | ('k' | 'K') '[' mono ']' | ('c' | 'C') '[' mono ']' | '(' expr ')'
//! mono   := '1' | atom ('*' atom)*
//! atom   := 'e' ('^' nat)? | 'p' nat ('^' nat)?
//! ```
//!
//! Uppercase `K[..]` / `C[..]` are accepted so normal forms re-parse.

use std::collections::HashMap;
use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Flavor;
use crate::arith::{format_scalar, ExactScalar};
use crate::charclass::BasisMonomial;
use crate::error::{Error, Result};
use crate::poly::{GradedPoly, TableRef};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KappaExpr {
    Const(ExactScalar),
    Kappa(BasisMonomial),
    Class(BasisMonomial),
    Add(Box<KappaExpr>, Box<KappaExpr>),
    Sub(Box<KappaExpr>, Box<KappaExpr>),
    Mul(Box<KappaExpr>, Box<KappaExpr>),
    Neg(Box<KappaExpr>),
    Pow(Box<KappaExpr>, u32),
}

/// A leaf handed to an evaluation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Leaf<'a> {
    Kappa(&'a BasisMonomial),
    Class(&'a BasisMonomial),
}

impl KappaExpr {
    pub fn parse(src: &str, n: u32, flavor: Flavor) -> Result<KappaExpr> {
        if n == 0 {
            return Err(Error::domain("half-dimension must be positive"));
        }
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            n,
            flavor,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(Error::parse(p.pos, "unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn constant(c: ExactScalar) -> Self {
        KappaExpr::Const(c)
    }

    pub fn kappa(c: BasisMonomial) -> Self {
        KappaExpr::Kappa(c)
    }

    pub fn cls(c: BasisMonomial) -> Self {
        KappaExpr::Class(c)
    }

    pub fn pow(self, k: u32) -> Self {
        KappaExpr::Pow(Box::new(self), k)
    }

    /// Visits every leaf, left to right.
    pub fn for_each_leaf<'a>(&'a self, f: &mut impl FnMut(Leaf<'a>)) {
        match self {
            KappaExpr::Const(_) => {}
            KappaExpr::Kappa(c) => f(Leaf::Kappa(c)),
            KappaExpr::Class(c) => f(Leaf::Class(c)),
            KappaExpr::Add(a, b) | KappaExpr::Sub(a, b) | KappaExpr::Mul(a, b) => {
                a.for_each_leaf(f);
                b.for_each_leaf(f);
            }
            KappaExpr::Neg(a) | KappaExpr::Pow(a, _) => a.for_each_leaf(f),
        }
    }

    pub fn has_class_leaf(&self) -> bool {
        let mut found = false;
        self.for_each_leaf(&mut |l| found |= matches!(l, Leaf::Class(_)));
        found
    }

    /// Expands the expression over `table`, replacing each distinct leaf by
    /// `rule(leaf)` exactly once. With `bound`, products and powers whose
    /// degree would exceed it are rejected.
    pub fn evaluate<F>(&self, table: &TableRef, bound: Option<u32>, mut rule: F) -> Result<GradedPoly>
    where
        F: FnMut(Leaf<'_>) -> Result<GradedPoly>,
    {
        let mut cache: HashMap<(bool, BasisMonomial), GradedPoly> = HashMap::new();
        self.eval_inner(table, bound, &mut rule, &mut cache)
    }

    fn eval_inner<F>(
        &self,
        table: &TableRef,
        bound: Option<u32>,
        rule: &mut F,
        cache: &mut HashMap<(bool, BasisMonomial), GradedPoly>,
    ) -> Result<GradedPoly>
    where
        F: FnMut(Leaf<'_>) -> Result<GradedPoly>,
    {
        let leaf = |is_kappa: bool, c: &BasisMonomial, rule: &mut F, cache: &mut HashMap<_, _>| {
            let key = (is_kappa, c.clone());
            if let Some(v) = cache.get(&key) {
                return Ok::<GradedPoly, Error>(GradedPoly::clone(v));
            }
            let v = rule(if is_kappa { Leaf::Kappa(c) } else { Leaf::Class(c) })?;
            if v.table() != table {
                return Err(Error::TableMismatch);
            }
            cache.insert(key, v.clone());
            Ok(v)
        };
        Ok(match self {
            KappaExpr::Const(c) => GradedPoly::constant(table, c.clone()),
            KappaExpr::Kappa(c) => leaf(true, c, rule, cache)?,
            KappaExpr::Class(c) => leaf(false, c, rule, cache)?,
            KappaExpr::Add(a, b) => {
                &a.eval_inner(table, bound, rule, cache)? + &b.eval_inner(table, bound, rule, cache)?
            }
            KappaExpr::Sub(a, b) => {
                &a.eval_inner(table, bound, rule, cache)? - &b.eval_inner(table, bound, rule, cache)?
            }
            KappaExpr::Mul(a, b) => {
                let x = a.eval_inner(table, bound, rule, cache)?;
                let y = b.eval_inner(table, bound, rule, cache)?;
                match bound {
                    Some(d) => x.mul_bounded(&y, d)?,
                    None => &x * &y,
                }
            }
            KappaExpr::Neg(a) => -&a.eval_inner(table, bound, rule, cache)?,
            KappaExpr::Pow(a, k) => {
                let x = a.eval_inner(table, bound, rule, cache)?;
                match bound {
                    Some(d) => x.pow_bounded(*k, d)?,
                    None => x.pow(*k),
                }
            }
        })
    }

    fn level(&self) -> u8 {
        match self {
            KappaExpr::Add(..) | KappaExpr::Sub(..) => 0,
            KappaExpr::Mul(..) => 1,
            KappaExpr::Neg(..) => 2,
            KappaExpr::Const(c) if c < &ExactScalar::zero() => 2,
            KappaExpr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            KappaExpr::Const(c) => f.write_str(&format_scalar(c)),
            KappaExpr::Kappa(c) => write!(f, "k[{c}]"),
            KappaExpr::Class(c) => write!(f, "c[{c}]"),
            KappaExpr::Add(a, b) => {
                a.fmt_at(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_at(f, 1)
            }
            KappaExpr::Sub(a, b) => {
                a.fmt_at(f, 0)?;
                f.write_str(" - ")?;
                b.fmt_at(f, 1)
            }
            KappaExpr::Mul(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str("*")?;
                b.fmt_at(f, 2)
            }
            KappaExpr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_at(f, 2)
            }
            KappaExpr::Pow(a, k) => {
                a.fmt_at(f, 3)?;
                write!(f, "^{k}")
            }
        }
    }
}

impl fmt::Display for KappaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl ops::Add for KappaExpr {
    type Output = KappaExpr;
    fn add(self, rhs: Self) -> Self {
        KappaExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for KappaExpr {
    type Output = KappaExpr;
    fn sub(self, rhs: Self) -> Self {
        KappaExpr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for KappaExpr {
    type Output = KappaExpr;
    fn mul(self, rhs: Self) -> Self {
        KappaExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for KappaExpr {
    type Output = KappaExpr;
    fn neg(self) -> Self {
        KappaExpr::Neg(Box::new(self))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: u32,
    flavor: Flavor,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{}`", b as char)))
        }
    }

    fn expr(&mut self) -> Result<KappaExpr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<KappaExpr> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<KappaExpr> {
        if self.eat(b'-') {
            return Ok(match self.factor()? {
                KappaExpr::Const(c) if c >= ExactScalar::zero() => KappaExpr::Const(-c),
                other => -other,
            });
        }
        let mut base = self.primary()?;
        while self.eat(b'^') {
            base = base.pow(self.nat()?);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<KappaExpr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.eat(b'/') {
                    let at = self.pos;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(Error::parse(at, "zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(KappaExpr::Const(ExactScalar::new(num, den)))
            }
            Some(b @ (b'k' | b'K' | b'c' | b'C')) => {
                self.pos += 1;
                if self.peek() != Some(b'[') {
                    return Err(Error::parse(self.pos, "expected `[`"));
                }
                self.pos += 1;
                let is_kappa = b.eq_ignore_ascii_case(&b'k');
                if !is_kappa && self.flavor == Flavor::Closed {
                    return Err(Error::parse(start, "section classes c[..] need a pointed or disc flavor"));
                }
                let m = self.mono()?;
                self.expect(b']')?;
                Ok(if is_kappa {
                    KappaExpr::Kappa(m)
                } else {
                    KappaExpr::Class(m)
                })
            }
            Some(_) => Err(Error::parse(self.pos, "expected a number, k[..], c[..] or `(`")),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn mono(&mut self) -> Result<BasisMonomial> {
        let n = self.n;
        let mut euler = 0u32;
        let mut p = vec![0u32; n as usize];
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(BasisMonomial::one(n));
        }
        loop {
            let at = self.pos;
            match self.peek() {
                Some(b'e') => {
                    self.pos += 1;
                    let k = if self.eat(b'^') { self.nat()? } else { 1 };
                    euler = euler
                        .checked_add(k)
                        .ok_or_else(|| Error::parse(at, "exponent overflow"))?;
                }
                Some(b'p') => {
                    self.pos += 1;
                    let at_idx = self.pos;
                    let i = self.nat()?;
                    if i == 0 || i > n {
                        return Err(Error::parse(at_idx, format!("p{i} is out of range for n = {n}")));
                    }
                    let k = if self.eat(b'^') { self.nat()? } else { 1 };
                    p[i as usize - 1] = p[i as usize - 1]
                        .checked_add(k)
                        .ok_or_else(|| Error::parse(at, "exponent overflow"))?;
                }
                _ => return Err(Error::parse(self.pos, "expected `1`, `e` or `p<i>`")),
            }
            if !self.eat(b'*') {
                break;
            }
        }
        BasisMonomial::from_pontryagin(n, euler, &p)
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn integer(&mut self) -> Result<BigInt> {
        Ok(self.digits()?.parse().unwrap())
    }

    fn nat(&mut self) -> Result<u32> {
        let start = self.pos;
        self.digits()?
            .parse()
            .map_err(|_| Error::parse(start, "exponent too large"))
    }
}
