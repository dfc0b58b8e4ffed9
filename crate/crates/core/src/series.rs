//! Truncated power series, the growth series of a store, embedding series
//! of configurations and the growth partition function `Z(t)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::config::{self, Configuration};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::ElementStore;
use crate::Rational;

/// Power series `c_0 + c_1 t + … + c_N t^N + O(t^{N+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Series<T> {
    /// Series of truncation order `order`; missing coefficients are zero and
    /// surplus ones are dropped.
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![T::one()], order)
    }

    /// `c·t^k`.
    pub fn monomial(k: usize, c: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_counts(counts: &[usize], order: usize) -> Self {
        Self::new(counts.iter().map(|&c| T::from_count(c as u64)).collect(), order)
    }

    /// Expansion of `num(t)/den(t)` for polynomial coefficient lists.
    pub fn from_rational_function(num: &[T], den: &[T], order: usize) -> Result<Self> {
        Series::new(num.to_vec(), order).div(&Series::new(den.to_vec(), order))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &T) -> Self {
        Series { coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![T::zero(); n + 1];
        for i in 0..=n.saturating_sub(k) {
            if i + k <= n {
                coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        Series { coeffs }
    }

    /// Division by `1 - t`: the running sums of the coefficients.
    pub fn partial_sums(&self) -> Self {
        let mut acc = T::zero();
        Series {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    acc = acc.clone() + c.clone();
                    acc.clone()
                })
                .collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.order();
        let mut inv: Vec<T> = Vec::with_capacity(n + 1);
        inv.push(T::one() / c0.clone());
        for k in 1..=n {
            let mut s = T::zero();
            for j in 1..=k {
                s = s + self.coeffs[j].clone() * inv[k - j].clone();
            }
            inv.push(-(s / c0.clone()));
        }
        Ok(Series { coeffs: inv })
    }

    /// `self / other`, truncated to the smaller order.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let c0 = other.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.order().min(other.order());
        let mut q: Vec<T> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut s = self.coeffs[k].clone();
            for j in 1..=k {
                s = s - other.coeffs[j].clone() * q[k - j].clone();
            }
            q.push(s / c0.clone());
        }
        Ok(Series { coeffs: q })
    }

    /// Sum of the truncated polynomial at `x`.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Series<U> {
        Series { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl<T: Scalar> Add for &Series<T> {
    type Output = Series<T>;
    fn add(self, rhs: &Series<T>) -> Series<T> {
        let n = self.order().min(rhs.order());
        Series { coeffs: (0..=n).map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone()).collect() }
    }
}

impl<T: Scalar> Sub for &Series<T> {
    type Output = Series<T>;
    fn sub(self, rhs: &Series<T>) -> Series<T> {
        let n = self.order().min(rhs.order());
        Series { coeffs: (0..=n).map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone()).collect() }
    }
}

impl<T: Scalar> Mul for &Series<T> {
    type Output = Series<T>;
    fn mul(self, rhs: &Series<T>) -> Series<T> {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series { coeffs }
    }
}

impl<T: Scalar> Neg for &Series<T> {
    type Output = Series<T>;
    fn neg(self) -> Series<T> {
        Series { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl fmt::Display for Series<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let mag = if abs.is_one() && k > 0 { String::new() } else { abs.to_string() };
            let var = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            write!(f, "{sign}{mag}{var}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

/// Coefficients of a [`LieSeries`]: the φ-basis coordinate of each
/// configuration is a series in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieSeries {
    pub order: usize,
    pub max_deg: usize,
    pub terms: BTreeMap<Configuration, Series<Rational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthKind {
    Ball,
    Sphere,
}

/// `Σ #Γ_n t^n` (ball) or `Σ #(Γ_n \ Γ_{n-1}) t^n` (sphere).
pub fn growth_series(store: &ElementStore, kind: GrowthKind, order: usize) -> Result<Series<Rational>> {
    if order > store.horizon() {
        return Err(Error::HorizonExceeded { requested: order, horizon: store.horizon() });
    }
    let counts = match kind {
        GrowthKind::Ball => store.ball_sizes(),
        GrowthKind::Sphere => store.sphere_sizes(),
    };
    Ok(Series::from_counts(&counts[..=order], order))
}

/// `Σ A(S, Γ_n) t^n`.
pub fn embedding_series(store: &ElementStore, s: &Configuration, order: usize) -> Result<Series<Rational>> {
    let counts = config::embedding_counts_by_radius(store, s, order)?;
    Ok(Series::from_counts(&counts, order))
}

/// `Z(S,t) = PA(S,t)/P(t)` for every connected configuration with at most
/// `max_deg` vertices occurring in `Γ_order`.
pub fn partition_function(store: &ElementStore, max_deg: usize, order: usize) -> Result<LieSeries> {
    let ball = growth_series(store, GrowthKind::Ball, order)?;
    let configs = config::enumerate_connected(&crate::cayley::CayleyBall::new(store, order)?, max_deg);
    let terms = configs
        .par_iter()
        .map(|c| {
            let pa = embedding_series(store, &c.config, order)?;
            Ok((c.config.clone(), pa.div(&ball)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LieSeries { order, max_deg, terms: terms.into_iter().collect() })
}

/// Per-configuration outcome of [`verify_class_c`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClassCEntry {
    pub config: Configuration,
    pub radius_l: usize,
    pub first_radius: usize,
    pub embedding_matches: bool,
    pub partition_matches: bool,
}

impl ClassCEntry {
    pub fn passed(&self) -> bool {
        self.embedding_matches && self.partition_matches && self.radius_l == self.first_radius
    }
}

/// Checks `PA(S,t) = t^{L(S)} P(t)` and `Z(S,t) = t^{L(S)}` to order `order`,
/// together with `L(S)` = first-occurrence radius.
pub fn verify_class_c(store: &ElementStore, max_deg: usize, order: usize) -> Result<Vec<ClassCEntry>> {
    let ball = growth_series(store, GrowthKind::Ball, order)?;
    let configs = config::enumerate_connected(&crate::cayley::CayleyBall::new(store, order)?, max_deg);
    configs
        .par_iter()
        .map(|c| {
            let l = config::radius_l(store, &c.config)?;
            let pa = embedding_series(store, &c.config, order)?;
            let expected = ball.shift(l);
            let z = pa.div(&ball)?;
            Ok(ClassCEntry {
                config: c.config.clone(),
                radius_l: l,
                first_radius: c.first_radius,
                embedding_matches: pa == expected,
                partition_matches: z == Series::monomial(l, Rational::one(), order),
            })
        })
        .collect()
}

/// Which closed form of the free-group example to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeGroupForm {
    /// `A(S, Γ_n)`.
    Count { n: usize },
    /// `P_A(S, t)`.
    EmbeddingSeries { order: usize },
    /// `Z(S, t)`.
    Partition { order: usize },
}

/// Closed forms for the free group of rank `f` for a configuration of
/// diameter `d`: `A(S,Γ_n)`, `P_A(S,t)` and `Z(S,t)`. `d = 0` gives `#Γ_n`
/// and `P(t)`.
pub fn free_group_closed_form(f: usize, d: usize, form: FreeGroupForm) -> Result<Series<Rational>> {
    if f < 2 {
        return Err(Error::Domain("closed forms need f >= 2".into()));
    }
    let q = Rational::from_count(2 * f as u64 - 1);
    let half = d / 2;
    let odd = d % 2 == 1;
    let int = |x: i64| Rational::from_int(x);
    match form {
        FreeGroupForm::Count { n } => {
            if n < half {
                return Err(Error::Domain(format!("n = {n} below ⌈d/2⌉-window {half}")));
            }
            let e = (n - half) as u32;
            let lead = if odd { q.powu(e) } else { Rational::from_count(f as u64) * q.powu(e) };
            let v = (lead - Rational::one()) / Rational::from_count(f as u64 - 1);
            Ok(Series::new(vec![v], 0))
        }
        FreeGroupForm::EmbeddingSeries { order } => {
            let num = if odd { vec![int(0), int(2)] } else { vec![int(1), int(1)] };
            // (1 - t)(1 - q t) = 1 - (1+q) t + q t^2
            let den = vec![int(1), -(int(1) + q.clone()), q];
            Ok(Series::from_rational_function(&num, &den, order)?.shift(half))
        }
        FreeGroupForm::Partition { order } => {
            let base = if odd {
                Series::from_rational_function(&[int(0), int(2)], &[int(1), int(1)], order)?
            } else {
                Series::one(order)
            };
            Ok(base.shift(half))
        }
    }
}

/// CSV rows `label,n,numerator,denominator`.
pub fn series_csv_rows(label: &str, s: &Series<Rational>) -> String {
    let mut out = String::new();
    for (n, c) in s.coeffs().iter().enumerate() {
        out.push_str(&format!("{label},{n},{},{}\n", c.numer(), c.denom()));
    }
    out
}
