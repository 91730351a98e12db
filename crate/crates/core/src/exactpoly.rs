//! Exact arithmetic for multivariate polynomials and polynomial-coefficient
//! differential operators.
//!
//! Polynomials are sparse maps from exponent vectors to arbitrary-precision
//! rationals; operators are canonical (normal-ordered) maps from derivative
//! multi-indices to polynomial coefficients. All operations are exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

/// Exponent vector of a monomial `t1^e1 * ... * td^ed`.
///
/// Ordered graded-lexicographically (total degree first, then raw exponents),
/// which fixes a deterministic term order for printing and hashing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zeros(dim: usize) -> Self {
        ExponentVector(vec![0; dim])
    }

    pub fn unit(dim: usize, var: usize) -> Self {
        let mut e = vec![0; dim];
        e[var] = 1;
        ExponentVector(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise sum (monomial product).
    pub fn mul(&self, other: &Self) -> Self {
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Derivative multi-index: order of `d/dt_i` per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivativeIndex(pub Vec<u32>);

impl DerivativeIndex {
    pub fn zeros(dim: usize) -> Self {
        DerivativeIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, var: usize) -> Self {
        let mut e = vec![0; dim];
        e[var] = 1;
        DerivativeIndex(e)
    }

    /// `d²/dt_i dt_j` (second partial; `i == j` gives `d²/dt_i²`).
    pub fn second(dim: usize, i: usize, j: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] += 1;
        e[j] += 1;
        DerivativeIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total_order(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariant: no stored zero coefficients; all keys have length `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(ExponentVector::zeros(dim), c);
        }
        p
    }

    /// The variable `t_{var+1}` as a polynomial.
    pub fn var(dim: usize, var: usize) -> Self {
        Self::monomial(dim, ExponentVector::unit(dim, var), Rational::one())
    }

    pub fn monomial(dim: usize, exps: ExponentVector, c: Rational) -> Self {
        assert_eq!(exps.dim(), dim, "exponent vector has wrong length");
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &ExponentVector) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.total_degree()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: ExponentVector, c: Rational) {
        assert_eq!(exps.dim(), self.dim, "exponent vector has wrong length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
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

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Exact partial-derivative `∂^didx self`.
    pub fn derivative(&self, didx: &DerivativeIndex) -> Self {
        assert_eq!(didx.dim(), self.dim, "derivative index has wrong length");
        let mut out = Self::zero(self.dim);
        'term: for (exps, c) in &self.terms {
            let mut factor = Rational::one();
            let mut new_exps = exps.0.clone();
            for i in 0..self.dim {
                let order = didx.0[i];
                if exps.0[i] < order {
                    continue 'term;
                }
                // falling factorial e (e-1) ... (e-order+1)
                for k in 0..order {
                    factor *= Rational::from_integer((exps.0[i] - k).into());
                }
                new_exps[i] = exps.0[i] - order;
            }
            out.add_term(ExponentVector(new_exps), c * &factor);
        }
        out
    }

    /// Substitutes the point-values `vals` (one per variable), exactly.
    pub fn eval(&self, vals: &[Rational]) -> Rational {
        assert_eq!(vals.len(), self.dim);
        let mut acc = Rational::zero();
        for (exps, c) in &self.terms {
            let mut m = c.clone();
            for (i, &e) in exps.0.iter().enumerate() {
                for _ in 0..e {
                    m *= &vals[i];
                }
            }
            acc += m;
        }
        acc
    }

    /// Substitutes polynomials for the variables (composition).
    pub fn compose(&self, subs: &[Polynomial]) -> Polynomial {
        assert_eq!(subs.len(), self.dim);
        let out_dim = if subs.is_empty() { 0 } else { subs[0].dim() };
        let mut acc = Polynomial::zero(out_dim);
        for (exps, c) in &self.terms {
            let mut m = Polynomial::constant(out_dim, c.clone());
            for (i, &e) in exps.0.iter().enumerate() {
                for _ in 0..e {
                    m = &m * &subs[i];
                }
            }
            acc = &acc + &m;
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.dim);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.mul(eb), ca * cb);
            }
        }
        out
    }
}

/// Exact product of two polynomials of the same dimension.
pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(p * q)
}

/// Differential operator: canonical sum of `coefficient(t) * ∂^α` terms.
///
/// Canonical form keeps exactly one polynomial per derivative multi-index,
/// with all derivatives acting to the right of the coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    dim: usize,
    terms: BTreeMap<DerivativeIndex, Polynomial>,
}

impl DiffOp {
    pub fn zero(dim: usize) -> Self {
        DiffOp { dim, terms: BTreeMap::new() }
    }

    /// A single `coeff * ∂^didx` term.
    pub fn term(coeff: Polynomial, didx: DerivativeIndex) -> Self {
        assert_eq!(coeff.dim(), didx.dim(), "coefficient/derivative dimension mismatch");
        let mut op = Self::zero(coeff.dim());
        op.add_assign_term(coeff, didx);
        op
    }

    /// Builds an operator from raw (coefficient, index) pairs, canonicalizing.
    pub fn from_terms(dim: usize, terms: Vec<(Polynomial, DerivativeIndex)>) -> Self {
        let mut op = Self::zero(dim);
        for (c, d) in terms {
            op.add_assign_term(c, d);
        }
        op
    }

    /// `c * identity` as an operator (multiplication by a polynomial).
    pub fn mult(coeff: Polynomial) -> Self {
        let d = coeff.dim();
        Self::term(coeff, DerivativeIndex::zeros(d))
    }

    /// First-order `coeff * d/dt_var`.
    pub fn first_order(coeff: Polynomial, var: usize) -> Self {
        let d = coeff.dim();
        Self::term(coeff, DerivativeIndex::unit(d, var))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivativeIndex, &Polynomial)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Maximum total derivative order over all terms.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|d| d.total_order()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, didx: &DerivativeIndex) -> Polynomial {
        self.terms
            .get(didx)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.dim))
    }

    fn add_assign_term(&mut self, coeff: Polynomial, didx: DerivativeIndex) {
        assert_eq!(didx.dim(), self.dim, "derivative index has wrong length");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(didx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        DiffOp {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(d, p)| (d.clone(), p.scale(c)))
                .collect(),
        }
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let mut out = self.clone();
        for (d, p) in &rhs.terms {
            out.add_assign_term(p.clone(), d.clone());
        }
        out
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let mut out = self.clone();
        for (d, p) in &rhs.terms {
            out.add_assign_term(-p, d.clone());
        }
        out
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        self.scale(&-Rational::one())
    }
}

/// Applies an operator to a polynomial, exactly.
pub fn diffop_apply(op: &DiffOp, p: &Polynomial) -> Result<Polynomial> {
    if op.dim() != p.dim() {
        return Err(Error::DimensionMismatch(op.dim(), p.dim()));
    }
    let mut out = Polynomial::zero(p.dim());
    for (didx, coeff) in &op.terms {
        let dp = p.derivative(didx);
        if !dp.is_zero() {
            out = &out + &(coeff * &dp);
        }
    }
    Ok(out)
}

fn binom(n: u32, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= Rational::from_integer((n - i).into());
        acc /= Rational::from_integer((i + 1).into());
    }
    acc
}

/// Normal-ordered composition `L∘M`: applying the result to any polynomial
/// equals applying `M` then `L`. Uses the generalized Leibniz rule
/// `∂^α (q f) = Σ_{γ≤α} C(α,γ) (∂^γ q)(∂^{α−γ} f)`.
pub fn diffop_compose(l: &DiffOp, m: &DiffOp) -> Result<DiffOp> {
    if l.dim() != m.dim() {
        return Err(Error::DimensionMismatch(l.dim(), m.dim()));
    }
    let dim = l.dim();
    let mut out = DiffOp::zero(dim);
    for (alpha, p) in &l.terms {
        for (beta, q) in &m.terms {
            // enumerate γ ≤ α componentwise
            let mut gamma = vec![0u32; dim];
            loop {
                let gidx = DerivativeIndex(gamma.clone());
                let dq = q.derivative(&gidx);
                if !dq.is_zero() {
                    let mut cb = Rational::one();
                    for i in 0..dim {
                        cb *= binom(alpha.0[i], gamma[i]);
                    }
                    let coeff = (p * &dq).scale(&cb);
                    let didx = DerivativeIndex(
                        (0..dim)
                            .map(|i| alpha.0[i] - gamma[i] + beta.0[i])
                            .collect(),
                    );
                    out.add_assign_term(coeff, didx);
                }
                // increment γ in the box [0, α]
                let mut i = 0;
                loop {
                    if i == dim {
                        break;
                    }
                    if gamma[i] < alpha.0[i] {
                        gamma[i] += 1;
                        break;
                    }
                    gamma[i] = 0;
                    i += 1;
                }
                if i == dim {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Commutator `[L, M] = L∘M − M∘L` in canonical form.
pub fn diffop_commutator(l: &DiffOp, m: &DiffOp) -> Result<DiffOp> {
    Ok(&diffop_compose(l, m)? - &diffop_compose(m, l)?)
}

/// True iff the canonical forms coincide term by term.
pub fn diffop_equal(l: &DiffOp, m: &DiffOp) -> bool {
    l == m
}

// ---------------------------------------------------------------------------
// Textual serialization: coefficients as "p/q", monomials as "t1^a*t2^b",
// derivative indices as "d1^a d2^b". Round-trip exact.
// ---------------------------------------------------------------------------

fn fmt_monomial(e: &ExponentVector) -> String {
    if e.is_constant() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    for (i, &k) in e.0.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("t{}", i + 1)),
            _ => parts.push(format!("t{}^{}", i + 1, k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e.is_constant() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", fmt_monomial(e))?;
            } else {
                write!(f, "{}*{}", mag, fmt_monomial(e))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (didx, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({p})")?;
            if didx.total_order() > 0 {
                let mut parts = Vec::new();
                for (i, &k) in didx.0.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => parts.push(format!("d{}", i + 1)),
                        _ => parts.push(format!("d{}^{}", i + 1, k)),
                    }
                }
                write!(f, " {}", parts.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Parses a polynomial in the `Display` format. The dimension must be given
/// because sparse strings do not determine it.
pub fn poly_from_str(s: &str, dim: usize) -> Result<Polynomial> {
    let s = s.trim();
    let mut out = Polynomial::zero(dim);
    if s == "0" || s.is_empty() {
        return Ok(out);
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut started = false;
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !started {
            if c == '-' {
                neg = true;
            } else if !c.is_whitespace() {
                cur.push(c);
            }
            if !c.is_whitespace() && c != '-' && c != '+' {
                started = true;
            }
            i += 1;
            continue;
        }
        if (c == '+' || c == '-') && i > 0 && chars[i - 1].is_whitespace() {
            terms.push((neg, cur.trim().to_string()));
            cur = String::new();
            neg = c == '-';
            i += 1;
            continue;
        }
        cur.push(c);
        i += 1;
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur.trim().to_string()));
    }
    for (is_neg, term) in terms {
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; dim];
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                continue;
            }
            if let Some(rest) = factor.strip_prefix('t') {
                let (var_s, exp_s) = match rest.split_once('^') {
                    Some((v, e)) => (v, Some(e)),
                    None => (rest, None),
                };
                let var: usize = var_s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
                if var == 0 || var > dim {
                    return Err(Error::Parse(format!("variable t{var} out of range")));
                }
                let e: u32 = match exp_s {
                    Some(e) => e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent {factor:?}")))?,
                    None => 1,
                };
                exps[var - 1] += e;
            } else {
                coeff *= crate::rational_from_str(factor)?;
            }
        }
        if is_neg {
            coeff = -coeff;
        }
        out.add_term(ExponentVector(exps), coeff);
    }
    Ok(out)
}

/// Parses an operator in the `Display` format.
pub fn diffop_from_str(s: &str, dim: usize) -> Result<DiffOp> {
    let s = s.trim();
    let mut out = DiffOp::zero(dim);
    if s == "0" || s.is_empty() {
        return Ok(out);
    }
    let mut rest = s;
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| Error::Parse("expected '('".into()))?;
        let close = rest[open..]
            .find(')')
            .map(|k| open + k)
            .ok_or_else(|| Error::Parse("unbalanced parentheses".into()))?;
        let poly = poly_from_str(&rest[open + 1..close], dim)?;
        rest = &rest[close + 1..];
        let end = rest.find('(').unwrap_or(rest.len());
        let dpart = rest[..end].trim().trim_end_matches('+').trim();
        rest = &rest[end..];
        let mut didx = vec![0u32; dim];
        for tok in dpart.split_whitespace() {
            if let Some(r) = tok.strip_prefix('d') {
                let (var_s, exp_s) = match r.split_once('^') {
                    Some((v, e)) => (v, Some(e)),
                    None => (r, None),
                };
                let var: usize = var_s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad derivative {tok:?}")))?;
                if var == 0 || var > dim {
                    return Err(Error::Parse(format!("derivative d{var} out of range")));
                }
                let e: u32 = match exp_s {
                    Some(e) => e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad order {tok:?}")))?,
                    None => 1,
                };
                didx[var - 1] += e;
            } else {
                return Err(Error::Parse(format!("unexpected token {tok:?}")));
            }
        }
        out.add_assign_term(poly, DerivativeIndex(didx));
    }
    Ok(out)
}
