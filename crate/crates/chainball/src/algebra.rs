//! Exact arithmetic: rationals, Laurent polynomials over Z, polynomial
//! matrices, exact division and univariate root finding.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable-arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("non-square matrix {0}x{1}")]
    NonSquare(usize, usize),
    #[error("matrix shape mismatch")]
    ShapeMismatch,
    #[error("leading coefficient of the divisor is not a unit")]
    NonUnitLeading,
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("no real root")]
    NoRealRoot,
    #[error("bad rational literal {0:?}")]
    BadRational(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// parses "a", "-a" or "a/b"
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let bad = || AlgebraError::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// "num/den", or just "num" for integers
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub type Monomial = Vec<i32>;

/// Laurent polynomial with integer coefficients in a fixed number of variables.
/// Terms are kept in a BTreeMap so iteration is lexicographic on exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

/// serialized form of one term
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<i32>,
    pub coefficient: String,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// the variable with index `i`, raised to `e`
    pub fn var_pow(nvars: usize, i: usize, e: i32) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Self::monomial(nvars, exps, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::var_pow(nvars, i, 1)
    }

    pub fn monomial(nvars: usize, exps: Monomial, c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// builds from arbitrary (exponents, coefficient) pairs, merging duplicates
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    /// a unit of the Laurent ring is ±monomial
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    fn check_arity(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.nvars != other.nvars {
            Err(AlgebraError::ArityMismatch(self.nvars, other.nvars))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_arity(other)?;
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LaurentPoly { nvars: self.nvars, terms })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// multiplies by a monomial with coefficient `c`
    pub fn shift(&self, exps: &[i32], c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// largest exponent of variable `var`, None for zero
    pub fn degree_in(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// smallest exponent of variable `var`, None for zero
    pub fn low_degree_in(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[var]).min()
    }

    /// coefficient of var^k, as a polynomial with var's exponent zeroed
    pub fn coeff_in(&self, var: usize, k: i32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] == k)
            .map(|(e, c)| {
                let mut e = e.clone();
                e[var] = 0;
                (e, c.clone())
            })
            .collect();
        LaurentPoly { nvars: self.nvars, terms }
    }

    /// substitutes var ↦ 1
    pub fn eval_var_one(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[var] = 0;
            out.add_term(e, c.clone());
        }
        out
    }

    /// substitutes var ↦ 0; errors if a negative power of var is present
    pub fn eval_var_zero(&self, var: usize) -> Result<Self, AlgebraError> {
        if self.low_degree_in(var).is_some_and(|d| d < 0) {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.coeff_in(var, 0))
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(e, c)| TermRecord { exponents: e.clone(), coefficient: c.to_string() })
            .collect()
    }

    pub fn from_records(nvars: usize, records: &[TermRecord]) -> Result<Self, AlgebraError> {
        let mut p = Self::zero(nvars);
        for r in records {
            if r.exponents.len() != nvars {
                return Err(AlgebraError::ArityMismatch(nvars, r.exponents.len()));
            }
            let c: BigInt = r
                .coefficient
                .parse()
                .map_err(|_| AlgebraError::BadRational(r.coefficient.clone()))?;
            p.add_term(r.exponents.clone(), c);
        }
        Ok(p)
    }

    /// human-readable rendering with the given variable names
    pub fn render(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k != 0)
                .map(|(k, v)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        f.write_str(&self.render(&refs))
    }
}

/// exact ring operation; the result is canonical
pub fn poly_arith(
    a: &LaurentPoly,
    b: &LaurentPoly,
    kind: ArithKind,
) -> Result<LaurentPoly, AlgebraError> {
    match kind {
        ArithKind::Add => a.checked_add(b),
        ArithKind::Sub => a.checked_sub(b),
        ArithKind::Mul => a.checked_mul(b),
    }
}

// operator forms panic on arity mismatch; use poly_arith for a fallible call
impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("arity mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("arity mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("arity mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// exact quotient num/den by long division in `var`
pub fn poly_divide_exact(
    num: &LaurentPoly,
    den: &LaurentPoly,
    var: usize,
) -> Result<LaurentPoly, AlgebraError> {
    num.check_arity(den)?;
    let nv = num.nvars;
    if den.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    let dlead = den.degree_in(var).unwrap();
    let dlow = den.low_degree_in(var).unwrap();
    let lc = den.coeff_in(var, dlead);
    if !lc.is_unit() {
        return Err(AlgebraError::NonUnitLeading);
    }
    let (lc_exps, lc_coeff) = lc.terms().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
    let mut rem = num.clone();
    let mut quot = LaurentPoly::zero(nv);
    let floor = match num.low_degree_in(var) {
        Some(l) => l - dlow,
        None => return Ok(quot),
    };
    while let Some(top) = rem.degree_in(var) {
        let d = top - dlead;
        if d < floor {
            return Err(AlgebraError::InexactDivision);
        }
        // divide the top coefficient by the unit lc
        let c = rem.coeff_in(var, top);
        let mut qexps: Monomial = lc_exps.iter().map(|e| -e).collect();
        qexps[var] = d;
        let q = c.shift(&qexps, &lc_coeff);
        rem = &rem - &(&q * den);
        quot = &quot + &q;
    }
    Ok(quot)
}

/// dense matrix of Laurent polynomials, row-major
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix { rows, cols, nvars, entries: vec![LaurentPoly::zero(nvars); rows * cols] }
    }

    pub fn identity(size: usize, nvars: usize) -> Self {
        let mut m = Self::zero(size, size, nvars);
        for i in 0..size {
            m.set(i, i, LaurentPoly::one(nvars));
        }
        m
    }

    pub fn diagonal(diag: &[LaurentPoly], nvars: usize) -> Self {
        let mut m = Self::zero(diag.len(), diag.len(), nvars);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>, nvars: usize) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(AlgebraError::ShapeMismatch);
            }
            for e in row {
                if e.nvars != nvars {
                    return Err(AlgebraError::ArityMismatch(nvars, e.nvars));
                }
                entries.push(e);
            }
        }
        Ok(PolyMatrix { rows: r, cols: c, nvars, entries })
    }

    /// assembles [[a, b], [c, d]]
    pub fn block(
        a: &PolyMatrix,
        b: &PolyMatrix,
        c: &PolyMatrix,
        d: &PolyMatrix,
    ) -> Result<Self, AlgebraError> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(AlgebraError::ShapeMismatch);
        }
        let mut m = Self::zero(a.rows + c.rows, a.cols + b.cols, a.nvars);
        for (src, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for i in 0..src.rows {
                for j in 0..src.cols {
                    m.set(r0 + i, c0 + j, src.get(i, j).clone());
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::ShapeMismatch);
        }
        let mut out = Self::zero(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LaurentPoly::zero(self.nvars);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, AlgebraError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::ShapeMismatch);
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, nvars: self.nvars, entries })
    }

    /// self - s·I
    pub fn sub_scalar_identity(&self, s: &LaurentPoly) -> Result<PolyMatrix, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NonSquare(self.rows, self.cols));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = self.get(i, i) - s;
            out.set(i, i, v);
        }
        Ok(out)
    }

    /// determinant by Laplace expansion over column subsets
    pub fn det(&self) -> Result<LaurentPoly, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NonSquare(self.rows, self.cols));
        }
        let m = self.rows;
        assert!(m <= 24, "matrix too large for the subset expansion");
        // layer[mask] = signed sum over assignments of the first k rows to columns in mask
        let mut layer: HashMap<u32, LaurentPoly> = HashMap::new();
        layer.insert(0, LaurentPoly::one(self.nvars));
        for row in 0..m {
            let mut next: HashMap<u32, LaurentPoly> = HashMap::new();
            for (mask, acc) in &layer {
                for col in 0..m {
                    let bit = 1u32 << col;
                    if mask & bit != 0 {
                        continue;
                    }
                    let a = self.get(row, col);
                    if a.is_zero() {
                        continue;
                    }
                    // inversions: previously used columns to the right of col
                    let inv = (mask >> (col + 1)).count_ones();
                    let mut term = acc * a;
                    if inv % 2 == 1 {
                        term = -term;
                    }
                    let slot = next.entry(mask | bit).or_insert_with(|| LaurentPoly::zero(self.nvars));
                    *slot = &*slot + &term;
                }
            }
            next.retain(|_, v| !v.is_zero());
            layer = next;
        }
        let full = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        Ok(layer.remove(&full).unwrap_or_else(|| LaurentPoly::zero(self.nvars)))
    }
}

pub fn det(m: &PolyMatrix) -> Result<LaurentPoly, AlgebraError> {
    m.det()
}

/// integer polynomial in one variable t, coefficients by ascending degree
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// tᵈ·f(1/t) with d = degree
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_rational(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + Rational::from_integer(c.clone()))
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = BigInt::zero();
        IntPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = BigInt::zero();
        IntPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - rhs.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

/// result of substituting v_i ↦ t^{w_i}; the polynomial was multiplied by t^shift
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub poly: IntPoly,
    pub shift: i64,
}

pub fn specialize(p: &LaurentPoly, weights: &[i64]) -> Result<Specialization, AlgebraError> {
    if weights.len() != p.nvars() {
        return Err(AlgebraError::ArityMismatch(p.nvars(), weights.len()));
    }
    let mut by_deg: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (e, c) in p.terms() {
        let d: i64 = e.iter().zip(weights).map(|(&a, &w)| a as i64 * w).sum();
        *by_deg.entry(d).or_insert_with(BigInt::zero) += c;
    }
    by_deg.retain(|_, c| !c.is_zero());
    let low = by_deg.keys().next().copied().unwrap_or(0);
    let shift = if low < 0 { -low } else { 0 };
    let top = by_deg.keys().last().copied().unwrap_or(0) + shift;
    let mut coeffs = vec![BigInt::zero(); (top + 1).max(0) as usize];
    for (d, c) in by_deg {
        coeffs[(d + shift) as usize] = c;
    }
    Ok(Specialization { poly: IntPoly::new(coeffs), shift })
}

pub const DEFAULT_TOL: f64 = 1e-12;

/// largest real root, isolated exactly with a Sturm sequence and bisected to width tol
pub fn largest_real_root(p: &IntPoly, tol: f64) -> Result<f64, AlgebraError> {
    match p.degree() {
        Some(d) if d >= 1 => {}
        _ => return Err(AlgebraError::NoRealRoot),
    }
    let f: Vec<Rational> = p.coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect();
    let chain = sturm_chain(&f);
    let lead = f.last().unwrap().abs();
    let bound = f.iter().map(|c| c.abs() / &lead).fold(Rational::zero(), |a, b| a.max(b)) + Rational::one();
    let changes = |x: &Rational| sign_changes_at(&chain, x);
    let mut lo = -bound.clone();
    let mut hi = bound;
    let v_hi = changes(&hi);
    if changes(&lo) == v_hi {
        return Err(AlgebraError::NoRealRoot);
    }
    let width = Rational::from_float(tol.max(f64::EPSILON)).unwrap_or_else(|| rat(1, 1 << 40));
    let two = Rational::from_integer(BigInt::from(2));
    // invariant: the largest root lies in (lo, hi]
    while &hi - &lo > width {
        let m = (&lo + &hi) / &two;
        if changes(&m) > v_hi {
            lo = m;
        } else {
            hi = m;
        }
    }
    if eval_rat(&chain[0], &hi).is_zero() {
        return Ok(hi.to_f64().unwrap_or(f64::NAN));
    }
    Ok(((lo + hi) / two).to_f64().unwrap_or(f64::NAN))
}

fn trim_rat(mut a: Vec<Rational>) -> Vec<Rational> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn eval_rat(a: &[Rational], x: &Rational) -> Rational {
    a.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn rem_rat(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = trim_rat(a.to_vec());
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let q = r.last().unwrap() / b.last().unwrap();
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= &q * c;
        }
        r = trim_rat(r);
    }
    r
}

fn quo_rat(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = trim_rat(a.to_vec());
    let db = b.len() - 1;
    if r.len() <= db {
        return vec![];
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / b.last().unwrap();
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        q[k] = c;
        r = trim_rat(r);
    }
    trim_rat(q)
}

fn derivative_rat(a: &[Rational]) -> Vec<Rational> {
    trim_rat(a.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
}

/// Sturm sequence of the square-free part of f
fn sturm_chain(f: &[Rational]) -> Vec<Vec<Rational>> {
    let df = derivative_rat(f);
    let mut g = f.to_vec();
    let mut h = df.clone();
    while !h.is_empty() {
        let r = rem_rat(&g, &h);
        g = h;
        h = r;
    }
    let p0 = quo_rat(f, &g);
    let mut chain = vec![p0.clone(), derivative_rat(&p0)];
    while chain.last().is_some_and(|c| !c.is_empty()) {
        let k = chain.len();
        let r: Vec<Rational> = rem_rat(&chain[k - 2], &chain[k - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        chain.push(r);
    }
    chain.retain(|c| !c.is_empty());
    chain
}

fn sign_changes_at(chain: &[Vec<Rational>], x: &Rational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|c| eval_rat(c, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// gcd with gcd(0,k) = |k| and gcd(0,0) = 0
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_even_multiplicity() {
        // (t-3)^2 (t-1)
        let f = &IntPoly::from_i64(&[-3, 1]).pow(2) * &IntPoly::from_i64(&[-1, 1]);
        assert!((largest_real_root(&f, 1e-12).unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn close_roots_and_negative_roots() {
        let f = &IntPoly::from_i64(&[-1000, 1]) * &IntPoly::from_i64(&[-1001, 1]);
        assert!((largest_real_root(&f, 1e-12).unwrap() - 1001.0).abs() < 1e-9);
        let g = IntPoly::from_i64(&[4, 1]);
        assert!((largest_real_root(&g, 1e-12).unwrap() + 4.0).abs() < 1e-10);
        assert_eq!(largest_real_root(&IntPoly::from_i64(&[1, 0, 1]), 1e-12), Err(AlgebraError::NoRealRoot));
    }

    fn x1(nv: usize) -> LaurentPoly {
        LaurentPoly::var(nv, 0)
    }

    fn u(nv: usize) -> LaurentPoly {
        LaurentPoly::var(nv, nv - 1)
    }

    fn c(nv: usize, k: i64) -> LaurentPoly {
        LaurentPoly::constant(nv, k)
    }

    #[test]
    fn add_cancels() {
        let a = &x1(2) - &u(2);
        assert_eq!(&a + &u(2), x1(2));
    }

    #[test]
    fn unit_inverse() {
        let inv = LaurentPoly::var_pow(2, 0, -1);
        assert_eq!(&inv * &x1(2), LaurentPoly::one(2));
    }

    #[test]
    fn hand_expansion() {
        let nv = 2;
        let inv = LaurentPoly::var_pow(nv, 0, -1);
        let lhs = &(&c(nv, 1) - &u(nv)) * &(&inv - &u(nv));
        let uu = u(nv).pow(2);
        let rhs = &(&(&inv - &u(nv)) - &(&inv * &u(nv))) + &uu;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn arity_mismatch() {
        let r = poly_arith(&x1(2), &x1(3), ArithKind::Add);
        assert_eq!(r, Err(AlgebraError::ArityMismatch(2, 3)));
    }

    #[test]
    fn canonical_term_order() {
        let p = LaurentPoly::from_terms(
            2,
            vec![(vec![1, 0], BigInt::from(1)), (vec![-1, 2], BigInt::from(3)), (vec![0, 0], BigInt::from(2))],
        );
        let exps: Vec<_> = p.terms().map(|(e, _)| e.clone()).collect();
        assert_eq!(exps, vec![vec![-1, 2], vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn det_identity() {
        assert_eq!(PolyMatrix::identity(3, 2).det().unwrap(), LaurentPoly::one(2));
    }

    #[test]
    fn det_rank_one() {
        let nv = 2;
        let m = PolyMatrix::from_rows(
            vec![vec![x1(nv), c(nv, 1)], vec![c(nv, 1), LaurentPoly::var_pow(nv, 0, -1)]],
            nv,
        )
        .unwrap();
        assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn det_diagonal() {
        let nv = 3;
        let a2 = LaurentPoly::var_pow(nv, 0, -1);
        let a3 = LaurentPoly::monomial(nv, vec![-1, -1, 0], 1);
        let d = PolyMatrix::diagonal(&[c(nv, 1), a2.clone(), a3.clone()], nv);
        let got = d.sub_scalar_identity(&u(nv)).unwrap().det().unwrap();
        let want = &(&(&c(nv, 1) - &u(nv)) * &(&a2 - &u(nv))) * &(&a3 - &u(nv));
        assert_eq!(got, want);
    }

    #[test]
    fn det_small_sign() {
        let nv = 1;
        let m = PolyMatrix::from_rows(
            vec![
                vec![c(nv, 0), c(nv, 1), c(nv, 0)],
                vec![c(nv, 0), c(nv, 0), c(nv, 1)],
                vec![c(nv, 1), c(nv, 0), c(nv, 0)],
            ],
            nv,
        )
        .unwrap();
        assert_eq!(m.det().unwrap(), c(nv, 1));
        let swap = PolyMatrix::from_rows(
            vec![vec![c(nv, 0), c(nv, 1)], vec![c(nv, 1), c(nv, 0)]],
            nv,
        )
        .unwrap();
        assert_eq!(swap.det().unwrap(), c(nv, -1));
    }

    #[test]
    fn det_non_square() {
        let m = PolyMatrix::zero(2, 3, 1);
        assert_eq!(m.det(), Err(AlgebraError::NonSquare(2, 3)));
    }

    #[test]
    fn divide_examples() {
        let nv = 2;
        let one_u = &c(nv, 1) - &u(nv);
        let x_u = &x1(nv) - &u(nv);
        let num = &one_u * &x_u;
        assert_eq!(poly_divide_exact(&num, &one_u, 1).unwrap(), x_u);
        assert!(poly_divide_exact(&LaurentPoly::zero(nv), &one_u, 1).unwrap().is_zero());
    }

    #[test]
    fn divide_inexact() {
        let nv = 2;
        let one_u = &c(nv, 1) - &u(nv);
        let num = &x1(nv) + &u(nv);
        assert_eq!(poly_divide_exact(&num, &one_u, 1), Err(AlgebraError::InexactDivision));
    }

    #[test]
    fn divide_non_unit() {
        let nv = 2;
        let den = &c(nv, 1) - &u(nv).scale(&BigInt::from(2));
        assert_eq!(poly_divide_exact(&u(nv), &den, 1), Err(AlgebraError::NonUnitLeading));
    }

    #[test]
    fn divide_laurent_in_var() {
        let nv = 2;
        let den = &LaurentPoly::var_pow(nv, 1, -1) - &x1(nv);
        let q = &LaurentPoly::var_pow(nv, 1, 2) + &c(nv, 3);
        let num = &q * &den;
        assert_eq!(poly_divide_exact(&num, &den, 1).unwrap(), q);
    }

    #[test]
    fn specialize_constant() {
        let s = specialize(&c(3, 5), &[1, -2, 7]).unwrap();
        assert_eq!(s.poly, IntPoly::from_i64(&[5]));
        assert_eq!(s.shift, 0);
    }

    #[test]
    fn specialize_shift_reported() {
        let p = &LaurentPoly::var_pow(2, 0, -2) + &u(2);
        let s = specialize(&p, &[1, 1]).unwrap();
        assert_eq!(s.shift, 2);
        assert_eq!(s.poly, IntPoly::from_i64(&[1, 0, 0, 1]));
    }

    #[test]
    fn roots() {
        let r = largest_real_root(&IntPoly::from_i64(&[1, -5, 1]), DEFAULT_TOL).unwrap();
        assert!((r - (5.0 + 21f64.sqrt()) / 2.0).abs() < 1e-10);
        assert!((r - 4.7912878475).abs() < 1e-10);
        let r = largest_real_root(&IntPoly::from_i64(&[-1, 1]), DEFAULT_TOL).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let r = largest_real_root(&IntPoly::from_i64(&[1, -6, 1]), DEFAULT_TOL).unwrap();
        assert!((r - (3.0 + 2f64.sqrt() * 2.0)).abs() < 1e-10);
    }

    #[test]
    fn no_root() {
        assert_eq!(
            largest_real_root(&IntPoly::from_i64(&[1, 0, 1]), DEFAULT_TOL),
            Err(AlgebraError::NoRealRoot)
        );
        assert_eq!(largest_real_root(&IntPoly::from_i64(&[3]), DEFAULT_TOL), Err(AlgebraError::NoRealRoot));
    }

    #[test]
    fn rationals_round_trip() {
        for s in ["0", "1/2", "-3/7", "5"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn records_round_trip() {
        let p = &(&x1(3) - &u(3).pow(2)) + &LaurentPoly::monomial(3, vec![-1, 2, 0], -7);
        let back = LaurentPoly::from_records(3, &p.to_records()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn gcd_convention() {
        assert_eq!(gcd_i64(0, -3), 3);
        assert_eq!(gcd_i64(0, 0), 0);
        assert_eq!(gcd_i64(-4, 6), 2);
    }
}
