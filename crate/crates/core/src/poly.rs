//! Integer polynomials: exact arithmetic, Sturm sequences, real-root
//! isolation in `(0,1)`, a modular irreducibility diagnostic and a
//! floating-point root finder.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::{Complex64, Integer, Rational};

/// `c_0 + c_1 t + … + c_d t^d` with integer coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `c·t^k`.
    pub fn monomial(k: usize, c: Integer) -> Self {
        let mut v = vec![Integer::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Integer {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Integer {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Integer::from(i)).collect())
    }

    pub fn content(&self) -> Integer {
        self.coeffs.iter().fold(Integer::zero(), |g, c| g.gcd(c))
    }

    /// Division by the (positive) content.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    }

    /// Sign of `p(a/b)` from the homogenized integer Horner scheme.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        let (p, q) = (x.numer(), x.denom());
        let Some(d) = self.degree() else { return 0 };
        let mut acc = self.coeffs[d].clone();
        let mut qpow = Integer::one();
        for i in (0..d).rev() {
            qpow *= q;
            acc = acc * p + &self.coeffs[i] * &qpow;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// `r` with `|lc(b)|^{δ+1}·a = q·b + r`, `δ = deg a − deg b`.
    pub fn pseudo_remainder(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-division by zero");
        if self.is_zero() || self.deg() < b.deg() {
            return self.clone();
        }
        let lb = b.leading();
        let delta = self.deg() - b.deg();
        let mut r = self.coeffs.clone();
        let db = b.deg();
        for k in (0..=delta).rev() {
            let top = r[k + db].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[k + i] -= &top * bc;
            }
        }
        let mut out = Self::new(r);
        if lb.is_negative() && (delta + 1) % 2 == 1 {
            out = -&out;
        }
        out
    }

    /// Exact quotient over the integers, if `b` divides `self`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.deg() < b.deg() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let db = b.deg();
        let lb = b.leading();
        let mut q = vec![Integer::zero(); self.deg() - db + 1];
        for k in (0..q.len()).rev() {
            let (quot, rem) = r[k + db].div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[k + i] -= &quot * bc;
            }
            q[k] = quot;
        }
        r.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() || a.is_zero() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_remainder(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.leading().is_negative() {
            a = -&a;
        }
        a
    }

    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        let q = self.div_exact(&g).expect("gcd divides the polynomial").primitive_part();
        if q.leading().is_negative() {
            -&q
        } else {
            q
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![Integer::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = match (first, c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let abs = c.abs();
            let mag = if abs.is_one() && k > 0 { String::new() } else { abs.to_string() };
            let var = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            write!(f, "{sign}{mag}{var}")?;
            first = false;
        }
        Ok(())
    }
}

/// Sturm sequence of `p` with positive rescalings of the remainders.
pub fn sturm_sequence(p: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut seq = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let r = seq[n - 2].pseudo_remainder(&seq[n - 1]);
        if r.is_zero() {
            return seq;
        }
        seq.push((-&r).primitive_part());
    }
}

fn sign_changes(seq: &[IntPolynomial], x: &Rational) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of `p` in `(a, b]`; `a` must not be a root.
pub fn count_roots(p: &IntPolynomial, a: &Rational, b: &Rational) -> usize {
    let seq = sturm_sequence(&p.squarefree_part());
    sign_changes(&seq, a).saturating_sub(sign_changes(&seq, b))
}

/// Distinct real roots of `p` in the open interval `(0, 1)`.
pub fn roots_in_unit_interval(p: &IntPolynomial) -> usize {
    let one = Rational::one();
    let at_one = usize::from(p.sign_at(&one) == 0);
    count_roots(p, &Rational::zero(), &one) - at_one
}

/// Isolating interval of width at most `eps` for the smallest root of `p`
/// in `(0,1)`: Sturm counting, then bisection.
pub fn smallest_root(p: &IntPolynomial, eps: &Rational) -> Result<Interval> {
    if p.is_zero() || p.sign_at(&Rational::zero()) == 0 {
        return Err(Error::Domain("polynomial vanishes at 0".into()));
    }
    if !eps.is_positive() {
        return Err(Error::Domain("precision must be positive".into()));
    }
    let sqf = p.squarefree_part();
    let seq = sturm_sequence(&sqf);
    if roots_in_unit_interval(p) == 0 {
        return Err(Error::NoRootInUnitInterval);
    }
    let (mut lo, mut hi) = (Rational::zero(), Rational::one());
    let v_lo = sign_changes(&seq, &lo);
    let two = Rational::from_integer(2.into());
    while &hi - &lo > *eps {
        let mid = (&lo + &hi) / &two;
        if v_lo - sign_changes(&seq, &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Interval::new(lo, hi))
}

/// Outcome of [`irreducibility`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Degree 0.
    Constant,
    /// Degree patterns modulo the listed primes admit no proper factor.
    Irreducible { primes: Vec<u64> },
    /// Degrees of possible proper factors over the integers.
    Inconclusive { degrees: Vec<usize>, primes: Vec<u64> },
}

impl fmt::Display for Irreducibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        match self {
            Irreducibility::Constant => write!(f, "constant"),
            Irreducibility::Irreducible { primes } => write!(f, "irreducible (degree patterns mod {})", list(primes)),
            Irreducibility::Inconclusive { degrees, primes } => {
                let d: Vec<String> = degrees.iter().map(usize::to_string).collect();
                write!(f, "inconclusive: factor degrees {} not excluded mod {}", d.join(" "), list(primes))
            }
        }
    }
}

const DIAGNOSTIC_PRIMES: usize = 16;

/// Irreducibility over the integers from distinct-degree factorizations
/// modulo small primes. A primitive input is assumed.
pub fn irreducibility(p: &IntPolynomial) -> Irreducibility {
    let Some(n) = p.degree() else { return Irreducibility::Constant };
    if n == 0 {
        return Irreducibility::Constant;
    }
    let mut possible = vec![true; n + 1];
    let mut used = Vec::new();
    for q in (3u64..2000).filter(|&q| is_prime(q)) {
        if used.len() == DIAGNOSTIC_PRIMES {
            break;
        }
        let Some(degs) = modp::factor_degrees(p, q) else { continue };
        used.push(q);
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in degs {
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for (x, s) in possible.iter_mut().zip(sums) {
            *x &= s;
        }
        if (1..n).all(|d| !possible[d]) {
            return Irreducibility::Irreducible { primes: used };
        }
    }
    Irreducibility::Inconclusive { degrees: (1..n).filter(|&d| possible[d]).collect(), primes: used }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

mod modp {
    use super::*;

    type P = Vec<u64>;

    fn trim(mut a: P) -> P {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }

    fn rem(a: &P, b: &P, p: u64) -> P {
        let mut r = a.clone();
        let db = b.len() - 1;
        let il = inv(b[db], p);
        while r.len() > db {
            let top = r[r.len() - 1] * il % p;
            let k = r.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                r[k + i] = (r[k + i] + p - top * bc % p) % p;
            }
            r = trim(r);
        }
        r
    }

    fn divide(a: &P, b: &P, p: u64) -> P {
        let mut r = a.clone();
        let db = b.len() - 1;
        let il = inv(b[db], p);
        let mut q = vec![0; a.len() - db];
        while r.len() > db {
            let top = r[r.len() - 1] * il % p;
            let k = r.len() - 1 - db;
            q[k] = top;
            for (i, &bc) in b.iter().enumerate() {
                r[k + i] = (r[k + i] + p - top * bc % p) % p;
            }
            r.pop();
            while r.len() > db && r.last() == Some(&0) {
                r.pop();
            }
        }
        q
    }

    fn mulmod(a: &P, b: &P, f: &P, p: u64) -> P {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&trim(out), f, p)
    }

    fn gcd(a: &P, b: &P, p: u64) -> P {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn sub(a: &P, b: &P, p: u64) -> P {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + p - b.get(i).unwrap_or(&0)) % p).collect())
    }

    /// Multiset of irreducible factor degrees of `f mod p`, or `None` when
    /// `p` divides the leading coefficient or `f mod p` has a square factor.
    pub fn factor_degrees(f: &IntPolynomial, p: u64) -> Option<Vec<usize>> {
        let pi = Integer::from(p);
        let mut g: P = trim(f.coeffs().iter().map(|c| c.mod_floor(&pi).to_u64().expect("reduced mod p")).collect());
        if g.len() != f.coeffs().len() {
            return None;
        }
        let deriv: P = trim(g.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % p) % p).collect());
        if deriv.is_empty() || gcd(&g, &deriv, p).len() > 1 {
            return None;
        }
        let mut out = Vec::new();
        let x: P = vec![0, 1];
        let mut h = rem(&x, &g, p);
        let mut d = 0;
        while g.len() > 1 {
            d += 1;
            if 2 * d > g.len() - 1 {
                out.push(g.len() - 1);
                break;
            }
            // h ← h^p mod g
            let mut acc: P = vec![1];
            let mut base = h.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(&acc, &base, &g, p);
                }
                base = mulmod(&base, &base, &g, p);
                e >>= 1;
            }
            h = acc;
            let common = gcd(&g, &sub(&h, &x, p), p);
            let k = common.len() - 1;
            if k > 0 {
                out.extend(std::iter::repeat_n(d, k / d));
                g = divide(&g, &common, p);
                h = rem(&h, &g, p);
            }
        }
        Some(out)
    }
}

/// All complex roots: companion-matrix eigenvalues refined by Newton steps.
/// Floating point, not certified.
pub fn complex_roots(p: &IntPolynomial) -> Vec<Complex64> {
    let Some(d) = p.degree() else { return Vec::new() };
    if d == 0 {
        return Vec::new();
    }
    let c = p.to_f64();
    let lead = c[d];
    let companion = DMatrix::<f64>::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            dv = dv * z + v;
            v = v * z + Complex64::new(a, 0.0);
        }
        (v, dv)
    };
    let mut roots: Vec<Complex64> = companion
        .complex_eigenvalues()
        .iter()
        .map(|&z| {
            let mut z = z;
            for _ in 0..8 {
                let (v, dv) = eval(z);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = v / dv;
                z -= step;
                if step.norm() < 1e-15 * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect();
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
    roots
}
