//! Dense univariate polynomials over the exact rationals, with the root
//! machinery needed by the zero-residue solver: gcd, square-free parts,
//! rational roots, Sturm-sequence real-root isolation, and factorization
//! into irreducibles by Kronecker interpolation.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qr(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Coefficient vector, index = degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPoly {
    pub coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        QPoly::new(vec![c])
    }

    /// c * x^k
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); k + 1];
        coeffs[k] = c;
        QPoly::new(coeffs)
    }

    /// x - a
    pub fn linear_root(a: &Q) -> Self {
        QPoly::new(vec![-a.clone(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        QPoly::new(out)
    }

    pub fn sub(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - rhs.coeff(k));
        }
        QPoly::new(out)
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &Q) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * q(i as i64 + 1))
                .collect(),
        )
    }

    /// Euclidean division; `rhs` must be nonzero.
    pub fn divrem(&self, rhs: &QPoly) -> (QPoly, QPoly) {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let d = rhs.degree().unwrap();
        let lead = rhs.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let f = &rem[k] / &lead;
            quot[k - d] = f.clone();
            for j in 0..=d {
                let t = &rhs.coeffs[j] * &f;
                rem[k - d + j] -= t;
            }
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    /// Division known to be exact; panics on a nonzero remainder.
    pub fn exact_div(&self, rhs: &QPoly) -> QPoly {
        let (quot, rem) = self.divrem(rhs);
        assert!(rem.is_zero(), "inexact polynomial division");
        quot
    }

    pub fn divides(&self, other: &QPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => self.scale(&(Q::one() / l)),
        }
    }

    pub fn gcd(&self, rhs: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// p(x + c), by repeated synthetic division.
    pub fn shift(&self, c: &Q) -> QPoly {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut rest = self.coeffs.clone();
        while !rest.is_empty() {
            // divide by (x - (-c)) i.e. evaluate remainder at -(-c)... we
            // want p(x+c) = sum r_k x^k with r_k from division by (x + c)
            let mut carry = Q::zero();
            for coef in rest.iter_mut().rev() {
                carry = carry * c + coef.clone();
                *coef = carry.clone();
            }
            out.push(rest.remove(0));
        }
        QPoly::new(out)
    }

    /// Largest square-free divisor.
    pub fn square_free_part(&self) -> QPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let d = self.gcd(&self.derivative());
        self.exact_div(&d).monic()
    }

    /// Scales to a primitive integer-coefficient polynomial with positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut denom = BigInt::one();
        for c in &self.coeffs {
            denom = lcm(&denom, c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = gcd_int(&g, c);
        }
        if !g.is_zero() {
            for c in &mut ints {
                *c /= &g;
            }
        }
        if ints.last().unwrap().is_negative() {
            for c in &mut ints {
                *c = -c.clone();
            }
        }
        ints
    }

    /// Distinct rational roots (the polynomial need not be square-free).
    pub fn rational_roots(&self) -> Vec<Q> {
        let mut p = self.square_free_part();
        let mut roots = Vec::new();
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        // factor out x^k
        while p.coeff(0).is_zero() && p.degree() > Some(0) {
            roots.push(Q::zero());
            p = p.exact_div(&QPoly::monomial(Q::one(), 1));
        }
        roots.dedup();
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let ints = p.primitive_integer();
        let a0 = ints.first().unwrap().clone();
        let ad = ints.last().unwrap().clone();
        for num in divisors(&a0.abs()) {
            for den in divisors(&ad.abs()) {
                for sign in [1i64, -1] {
                    let cand = Q::new(&num * BigInt::from(sign), den.clone());
                    if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Upper bound on the absolute value of every real root.
    pub fn root_bound(&self) -> Q {
        let lead = self.leading().expect("nonzero polynomial").abs();
        let mut m = Q::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = c.abs() / &lead;
            if r > m {
                m = r;
            }
        }
        m + Q::one()
    }

    fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                return seq;
            }
            let r = seq[n - 2].divrem(&seq[n - 1]).1;
            if r.is_zero() {
                return seq;
            }
            seq.push(r.neg());
        }
    }

    fn sign_changes(seq: &[QPoly], x: &Q) -> usize {
        let mut last = 0i8;
        let mut changes = 0;
        for p in seq {
            let v = p.eval(x);
            let s = if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    /// Requires a square-free polynomial.
    pub fn count_real_roots_between(&self, a: &Q, b: &Q) -> usize {
        let seq = self.sturm_sequence();
        Self::sign_changes(&seq, a) - Self::sign_changes(&seq, b)
    }

    /// Isolating intervals `(a, b)` for the distinct real roots, one root
    /// per interval, endpoints not roots. Requires square-free input with
    /// no rational roots (so endpoints are never roots).
    pub fn isolate_real_roots(&self) -> Vec<(Q, Q)> {
        let deg = self.degree().unwrap_or(0);
        if deg == 0 {
            return vec![];
        }
        let seq = self.sturm_sequence();
        let bound = self.root_bound();
        let mut work = vec![(-bound.clone(), bound)];
        let mut out = Vec::new();
        while let Some((a, b)) = work.pop() {
            let n = Self::sign_changes(&seq, &a) - Self::sign_changes(&seq, &b);
            match n {
                0 => {}
                1 => out.push((a, b)),
                _ => {
                    let mid = (&a + &b) / q(2);
                    debug_assert!(!self.eval(&mid).is_zero(), "rational root not stripped");
                    work.push((a, mid.clone()));
                    work.push((mid, b));
                }
            }
        }
        out.sort();
        out
    }

    /// Number of real roots, counted without multiplicity. Requires
    /// square-free input.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let b = self.root_bound();
        self.count_real_roots_between(&(-b.clone()), &b)
    }

    /// Monic irreducible factors of the square-free part, by Kronecker
    /// interpolation. Exponential in the degree, fine for the small
    /// eliminants arising here.
    pub fn irreducible_factors(&self) -> Vec<QPoly> {
        let p = self.square_free_part();
        let mut out = Vec::new();
        let mut rest = p;
        // strip rational roots first
        for r in rest.clone().rational_roots() {
            let lin = QPoly::linear_root(&r);
            rest = rest.exact_div(&lin);
            out.push(lin);
        }
        if rest.degree().unwrap_or(0) >= 1 {
            kronecker(&rest, &mut out);
        }
        out.sort();
        out
    }
}

/// Recursively splits `p` (square-free, no rational roots, degree >= 1)
/// into monic irreducible factors.
fn kronecker(p: &QPoly, out: &mut Vec<QPoly>) {
    let d = p.degree().unwrap();
    if d <= 2 {
        // no rational roots: degree 2 is irreducible, degree 1 impossible here
        out.push(p.monic());
        return;
    }
    let ints = QPoly::new(
        p.primitive_integer()
            .into_iter()
            .map(Q::from_integer)
            .collect(),
    );
    // evaluation points 0, 1, -1, 2, -2, ...
    let mut points: Vec<Q> = Vec::new();
    let mut k = 0i64;
    while points.len() <= d / 2 {
        let x = q(if k % 2 == 0 { k / 2 } else { -(k / 2 + 1) });
        k += 1;
        if !ints.eval(&x).is_zero() {
            points.push(x);
        }
    }
    for deg in 2..=d / 2 {
        let pts = &points[..=deg];
        let value_divisors: Vec<Vec<BigInt>> = pts
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let v = ints.eval(x).to_integer().abs();
                let divs = divisors(&v);
                let mut all = Vec::with_capacity(divs.len() * 2);
                for dv in divs {
                    if i > 0 {
                        all.push(-dv.clone());
                    }
                    all.push(dv);
                }
                all
            })
            .collect();
        let mut choice = vec![0usize; deg + 1];
        'combo: loop {
            let values: Vec<Q> = choice
                .iter()
                .enumerate()
                .map(|(i, &c)| Q::from_integer(value_divisors[i][c].clone()))
                .collect();
            if let Some(g) = lagrange(pts, &values) {
                if g.degree() == Some(deg) && g.divides(&ints) {
                    let rest = ints.exact_div(&g);
                    kronecker(&g, out);
                    kronecker(&rest, out);
                    return;
                }
            }
            // advance the odometer
            let mut i = 0;
            loop {
                if i > deg {
                    break 'combo;
                }
                choice[i] += 1;
                if choice[i] < value_divisors[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
    out.push(p.monic());
}

fn lagrange(xs: &[Q], ys: &[Q]) -> Option<QPoly> {
    let mut acc = QPoly::zero();
    for (i, y) in ys.iter().enumerate() {
        let mut term = QPoly::constant(y.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = &xs[i] - xj;
            if denom.is_zero() {
                return None;
            }
            term = term.mul(&QPoly::linear_root(xj)).scale(&(Q::one() / denom));
        }
        acc = acc.add(&term);
    }
    Some(acc)
}

fn gcd_int(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b).abs() / gcd_int(a, b)
}

/// Positive divisors, by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    loop {
        let dd = &d * &d;
        if dd > n {
            break;
        }
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

// ---------------------------------------------------------------------------
// Truncated power series over Q
// ---------------------------------------------------------------------------

/// Product of two series, truncated to `n` coefficients.
pub fn series_mul(a: &[Q], b: &[Q], n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Multiplicative inverse of a series with nonzero constant term,
/// truncated to `n` coefficients.
pub fn series_inv(a: &[Q], n: usize) -> Vec<Q> {
    assert!(!a.is_empty() && !a[0].is_zero(), "series is not invertible");
    let mut out = vec![Q::zero(); n];
    out[0] = Q::one() / &a[0];
    for k in 1..n {
        let mut acc = Q::zero();
        for j in 1..=k {
            if j < a.len() {
                acc += &a[j] * &out[k - j];
            }
        }
        out[k] = -acc / &a[0];
    }
    out
}

/// Integer power of a series (negative exponents via the inverse),
/// truncated to `n` coefficients.
pub fn series_pow(a: &[Q], e: i64, n: usize) -> Vec<Q> {
    let base = if e < 0 { series_inv(a, n) } else { a.to_vec() };
    let mut acc = vec![Q::zero(); n];
    acc[0] = Q::one();
    for _ in 0..e.unsigned_abs() {
        acc = series_mul(&acc, &base, n);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> QPoly {
        QPoly::new(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        let a = poly(&[-1, 0, 1]); // x^2 - 1
        let b = poly(&[-1, 1]); // x - 1
        let (quot, rem) = a.divrem(&b);
        assert_eq!(quot, poly(&[1, 1]));
        assert!(rem.is_zero());
        assert_eq!(a.gcd(&b), b.monic());
    }

    #[test]
    fn shift_works() {
        // (x+1)^2 = x^2 + 2x + 1
        let p = poly(&[0, 0, 1]);
        assert_eq!(p.shift(&q(1)), poly(&[1, 2, 1]));
        let p = poly(&[1, 2, 3]);
        for x in [-2i64, 0, 5] {
            assert_eq!(p.shift(&q(3)).eval(&q(x)), p.eval(&q(x + 3)));
        }
    }

    #[test]
    fn rational_roots_found() {
        // (x - 1/2)(x + 3)(x^2 + 1)
        let p = poly(&[-1, 2])
            .scale(&qr(1, 2))
            .mul(&poly(&[3, 1]))
            .mul(&poly(&[1, 0, 1]));
        let roots = p.rational_roots();
        assert_eq!(roots, vec![q(-3), qr(1, 2)]);
    }

    #[test]
    fn sturm_isolation() {
        // x^2 - 2: two real roots
        let p = poly(&[-2, 0, 1]);
        let iv = p.isolate_real_roots();
        assert_eq!(iv.len(), 2);
        for (a, b) in &iv {
            assert!(a < b);
            assert!((p.eval(a) * p.eval(b)).is_negative());
        }
        // x^2 + 1: none
        assert_eq!(poly(&[1, 0, 1]).isolate_real_roots().len(), 0);
        // x^2 + 4x + 1: roots -2 +- sqrt(3)
        assert_eq!(poly(&[1, 4, 1]).count_real_roots(), 2);
    }

    #[test]
    fn kronecker_factors() {
        // (x^2 - 2)(x^2 - 3)
        let p = poly(&[-2, 0, 1]).mul(&poly(&[-3, 0, 1]));
        let f = p.irreducible_factors();
        assert_eq!(f.len(), 2);
        assert!(f.contains(&poly(&[-2, 0, 1]).monic()));
        assert!(f.contains(&poly(&[-3, 0, 1]).monic()));
        // x^4 + 1 is irreducible over Q
        let p = poly(&[1, 0, 0, 0, 1]);
        assert_eq!(p.irreducible_factors(), vec![p.monic()]);
        // (x - 2)(x^3 - 2)
        let p = poly(&[-2, 1]).mul(&poly(&[-2, 0, 0, 1]));
        let f = p.irreducible_factors();
        assert_eq!(f.len(), 2);
        assert!(f.contains(&poly(&[-2, 1]).monic()));
        assert!(f.contains(&poly(&[-2, 0, 0, 1]).monic()));
    }

    #[test]
    fn series_ops() {
        // 1/(1 - x) = 1 + x + x^2 + ...
        let inv = series_inv(&[q(1), q(-1)], 5);
        assert_eq!(inv, vec![q(1); 5]);
        // (1 + x)^-2 = 1 - 2x + 3x^2 - 4x^3 ...
        let p = series_pow(&[q(1), q(1)], -2, 4);
        assert_eq!(p, vec![q(1), q(-2), q(3), q(-4)]);
    }
}
