//! Exact rational linear algebra: elimination, nullspaces, characteristic
//! polynomials, rational-root extraction and real-root isolation.

use num_traits::{One, Signed, Zero};

use crate::{Integer, Rational};

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                *m.at_mut(i, j) = f(i, j);
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.at(i, i).clone()).sum()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // pick the pivot with the smallest representation to tame growth
            let mut pick: Option<usize> = None;
            for r in row..self.rows {
                if !self.at(r, col).is_zero() {
                    pick = match pick {
                        None => Some(r),
                        Some(p) => {
                            let cur = self.at(r, col);
                            let best = self.at(p, col);
                            let cur_sz = cur.numer().bits() + cur.denom().bits();
                            let best_sz = best.numer().bits() + best.denom().bits();
                            if cur_sz < best_sz {
                                Some(r)
                            } else {
                                Some(p)
                            }
                        }
                    };
                }
            }
            let Some(p) = pick else { continue };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(row * self.cols + j, p * self.cols + j);
                }
            }
            let inv = {
                let piv = self.at(row, col).clone();
                Rational::one() / piv
            };
            for j in col..self.cols {
                let v = self.at(row, j) * &inv;
                *self.at_mut(row, j) = v;
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for j in col..self.cols {
                        let v = self.at(r, j) - &(self.at(row, j) * &factor);
                        *self.at_mut(r, j) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, each vector with its first nonzero
    /// coordinate equal to one.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.at(r, free).clone();
            }
            // normalize: first nonzero coordinate = 1
            if let Some(k) = v.iter().position(|x| !x.is_zero()) {
                let inv = Rational::one() / v[k].clone();
                for x in v.iter_mut() {
                    *x *= &inv;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `A x = b` exactly. Returns one solution or `None` if
    /// inconsistent; the second element is the affine solution-space
    /// dimension (number of free columns).
    pub fn solve(&self, b: &[Rational]) -> Option<(Vec<Rational>, usize)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RatMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(r, self.cols).clone();
        }
        Some((x, self.cols - pivots.len()))
    }
}

/// Monic characteristic polynomial `det(λI − A)` by the Faddeev–LeVerrier
/// recurrence, exact over the rationals. Returned as coefficients
/// `[c_0, c_1, ..., c_n]` with `c_n = 1`.
pub fn charpoly(a: &RatMat) -> Vec<Rational> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = RatMat::identity(n);
    for k in 1..=n {
        m = a.mul(&m);
        let c = -(m.trace() / Rational::from_integer(Integer::from(k)));
        for i in 0..n {
            *m.at_mut(i, i) += &c;
        }
        coeffs[n - k] = c;
    }
    coeffs
}

/// Evaluates a coefficient-list polynomial at `x`.
pub fn poly_eval(coeffs: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Divides `p` by `(λ − r)`; returns the quotient if the division is exact.
pub fn deflate(coeffs: &[Rational], r: &Rational) -> Option<Vec<Rational>> {
    let n = coeffs.len();
    if n < 2 {
        return None;
    }
    let mut q = vec![Rational::zero(); n - 1];
    let mut carry = Rational::zero();
    for k in (1..n).rev() {
        carry = &coeffs[k] + &(&carry * r);
        q[k - 1] = carry.clone();
    }
    let rem = &coeffs[0] + &(&carry * r);
    if rem.is_zero() {
        Some(q)
    } else {
        None
    }
}

fn divisors(n: &Integer, cap: usize) -> Option<Vec<Integer>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Some(vec![]);
    }
    let mut primes: Vec<(Integer, u32)> = Vec::new();
    let mut d = Integer::from(2);
    let limit = Integer::from(1_000_000u64);
    while &d * &d <= n && d <= limit {
        if (&n % &d).is_zero() {
            let mut e = 0;
            while (&n % &d).is_zero() {
                n /= &d;
                e += 1;
            }
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if n > Integer::one() {
        if n > Integer::from(u64::MAX) {
            return None; // give up: a huge unfactored part remains
        }
        primes.push((n, 1));
    }
    let mut divs = vec![Integer::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = Integer::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
        if divs.len() > cap {
            return None;
        }
    }
    Some(divs)
}

/// Extracts all rational roots (with multiplicity) of an exact-coefficient
/// polynomial. Returns the roots and the root-free remaining factor.
///
/// `hints` are candidate roots tried first (e.g. matrix diagonal entries);
/// the divisor search then completes the extraction.
pub fn rational_roots(
    coeffs: &[Rational],
    hints: &[Rational],
) -> (Vec<Rational>, Vec<Rational>) {
    let mut p: Vec<Rational> = coeffs.to_vec();
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    let mut roots = Vec::new();
    if p.is_empty() {
        return (roots, p);
    }
    // strip zero roots
    while p.len() > 1 && p[0].is_zero() {
        roots.push(Rational::zero());
        p.remove(0);
    }
    // hinted candidates, repeated to multiplicity
    let mut hinted: Vec<Rational> = hints.to_vec();
    hinted.sort();
    hinted.dedup();
    for h in &hinted {
        while p.len() > 1 {
            match deflate(&p, h) {
                Some(q) => {
                    roots.push(h.clone());
                    p = q;
                }
                None => break,
            }
        }
    }
    // rational root theorem on the integer-cleared polynomial
    loop {
        if p.len() <= 1 {
            break;
        }
        let mut den_lcm = Integer::one();
        for c in &p {
            let g = num::Integer::gcd(&den_lcm, c.denom());
            den_lcm = den_lcm / g * c.denom();
        }
        let ints: Vec<Integer> = p
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let (Some(d0), Some(dn)) = (
            divisors(&ints[0], 4096),
            divisors(ints.last().unwrap(), 4096),
        ) else {
            break;
        };
        let mut found = None;
        'outer: for num_d in &d0 {
            for den_d in &dn {
                for sign in [1i32, -1] {
                    let cand = Rational::new(num_d * Integer::from(sign), den_d.clone());
                    if poly_eval(&p, &cand).is_zero() {
                        found = Some(cand);
                        break 'outer;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                while let Some(q) = deflate(&p, &r) {
                    roots.push(r.clone());
                    p = q;
                    if p.len() <= 1 {
                        break;
                    }
                }
            }
            None => break,
        }
    }
    roots.sort();
    (roots, p)
}

// ---------------------------------------------------------------------------
// Real-root isolation by Sturm chains with exact bisection.
// ---------------------------------------------------------------------------

fn poly_derivative(p: &[Rational]) -> Vec<Rational> {
    (1..p.len())
        .map(|k| &p[k] * Rational::from_integer(Integer::from(k)))
        .collect()
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r: Vec<Rational> = a.to_vec();
    while r.last().map(|c| c.is_zero()).unwrap_or(false) {
        r.pop();
    }
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = r.last().unwrap() / lb;
        for k in 0..=db {
            let idx = dr - db + k;
            let v = &r[idx] - &(&b[k] * &factor);
            r[idx] = v;
        }
        while r.last().map(|c| c.is_zero()).unwrap_or(false) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r
}

fn sturm_chain(p: &[Rational]) -> Vec<Vec<Rational>> {
    let mut chain = vec![p.to_vec(), poly_derivative(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() || chain[n - 1].len() <= 1 && chain[n - 1].iter().all(|c| c.is_zero()) {
            break;
        }
        let r = poly_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(chain: &[Vec<Rational>], x: &Rational) -> usize {
    let mut changes = 0;
    let mut last: Option<bool> = None;
    for p in chain {
        if p.is_empty() {
            continue;
        }
        let v = poly_eval(p, x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(l) = last {
            if l != s {
                changes += 1;
            }
        }
        last = Some(s);
    }
    changes
}

/// Isolates every real root of `p` in disjoint rational intervals, each
/// refined by bisection until narrower than `width`. Roots exactly at
/// produced endpoints are nudged into open intervals.
pub fn isolate_real_roots(p: &[Rational], width: &Rational) -> Vec<(Rational, Rational)> {
    let mut p: Vec<Rational> = p.to_vec();
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    if p.len() <= 1 {
        return vec![];
    }
    // Cauchy bound: 1 + max |c_i| / |c_n|
    let lead = p.last().unwrap().clone();
    let mut bound = Rational::zero();
    for c in &p[..p.len() - 1] {
        let v = (c / &lead).abs();
        if v > bound {
            bound = v;
        }
    }
    bound += Rational::one();
    let chain = sturm_chain(&p);
    let count = |a: &Rational, b: &Rational| -> usize {
        sign_changes(&chain, a).saturating_sub(sign_changes(&chain, b))
    };
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound.clone())];
    while let Some((a, b)) = stack.pop() {
        let n = count(&a, &b);
        if n == 0 {
            continue;
        }
        let w = &b - &a;
        if n == 1 && w < *width {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / Rational::from_integer(2.into());
        // keep endpoints off the roots
        let mid = if poly_eval(&p, &mid).is_zero() {
            // exact root at midpoint: emit a tight interval around it
            if n == 1 || count(&a, &mid) + count(&mid, &b) < n {
                let eps = width / Rational::from_integer(4.into());
                out.push((&mid - &eps, &mid + &eps));
                let lo = &mid - &eps;
                let hi = &mid + &eps;
                stack.push((a, lo));
                stack.push((hi, b));
                continue;
            }
            mid
        } else {
            mid
        };
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}
