//! Truncated configuration algebra: `A(T)`, `M(T) = log A(T)`, the kabi
//! coefficients `K(T,S)` and the φ-basis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cayley::{CayleyBall, Host, LabeledGraph};
use crate::config::{self, Configuration, Pattern};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::ElementStore;
use crate::Rational;

/// Multiset of connected configurations (sorted); the empty monomial is 1.
pub type Monomial = Vec<Configuration>;

/// Total vertex count of a monomial.
pub fn degree(m: &Monomial) -> usize {
    m.iter().map(Configuration::size).sum()
}

/// Finite linear combination of monomials, truncated above `deg_cut`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfPoly<T> {
    deg_cut: usize,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> ConfPoly<T> {
    pub fn zero(deg_cut: usize) -> Self {
        ConfPoly { deg_cut, terms: BTreeMap::new() }
    }

    pub fn one(deg_cut: usize) -> Self {
        Self::monomial(Vec::new(), T::one(), deg_cut)
    }

    /// `c·m`, dropped when `m` exceeds the truncation degree.
    pub fn monomial(mut m: Monomial, c: T, deg_cut: usize) -> Self {
        let mut p = Self::zero(deg_cut);
        m.sort();
        p.add_term(m, c);
        p
    }

    pub fn config(s: &Configuration, deg_cut: usize) -> Self {
        Self::monomial(vec![s.clone()], T::one(), deg_cut)
    }

    pub fn deg_cut(&self) -> usize {
        self.deg_cut
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, T> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    /// Coefficient of the single connected monomial `[s]`.
    pub fn coeff_of(&self, s: &Configuration) -> T {
        self.coeff(&vec![s.clone()])
    }

    fn add_term(&mut self, m: Monomial, c: T) {
        if degree(&m) > self.deg_cut || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(T::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(self.deg_cut.min(other.deg_cut));
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.deg_cut);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cut = self.deg_cut.min(other.deg_cut);
        let mut out = Self::zero(cut);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if degree(m1) + degree(m2) > cut {
                    continue;
                }
                let mut m = m1.clone();
                m.extend(m2.iter().cloned());
                m.sort();
                out.add_term(m, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn truncate(&self, deg_cut: usize) -> Self {
        let mut out = Self::zero(deg_cut);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// `log(self)` for `self = 1 + x` with `x` of positive degree.
    pub fn log(&self) -> Result<Self> {
        if self.coeff(&Vec::new()) != T::one() {
            return Err(Error::Domain("logarithm needs constant term 1".into()));
        }
        let x = self.sub(&Self::one(self.deg_cut));
        let mut out = Self::zero(self.deg_cut);
        let mut power = x.clone();
        for k in 1..=self.deg_cut {
            let c = T::from_int(if k % 2 == 1 { 1 } else { -1 }) / T::from_count(k as u64);
            out = out.add(&power.scale(&c));
            power = power.mul(&x);
            if power.is_zero() {
                break;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ConfPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut ordered: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| (degree(a.0), a.0).cmp(&(degree(b.0), b.0)));
        for (m, c) in ordered {
            let sign = if c.is_negative() { "-" } else { "+" };
            if !first || c.is_negative() {
                write!(f, "{}{sign} ", if first { "" } else { " " })?;
            }
            let abs = c.abs();
            let mono: Vec<String> = m.iter().map(|s| s.to_string()).collect();
            match (abs.is_one(), mono.is_empty()) {
                (_, true) => write!(f, "{abs}")?,
                (true, false) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{abs}*{}", mono.join("*"))?,
            }
            first = false;
        }
        Ok(())
    }
}

const SUBSET_BUDGET: u64 = 1 << 24;

/// `A(T)`: the sum over all full subgraphs of `T` with at most `deg_cut`
/// vertices of the product of their components' classes.
pub fn a_poly<H: Host>(t: &H, deg_cut: usize) -> Result<ConfPoly<Rational>> {
    let n = t.vertex_count();
    let subsets: u64 = (0..=deg_cut.min(n)).map(|k| binomial(n as u64, k as u64)).sum();
    if subsets > SUBSET_BUDGET {
        return Err(Error::BudgetExceeded { cap: SUBSET_BUDGET as usize, length: n });
    }
    let graph = {
        let verts: Vec<usize> = (0..n).collect();
        let mut edges = Vec::new();
        for v in &verts {
            for l in 0..t.label_count() {
                if let Some(w) = t.succ(*v, l) {
                    edges.push((*v, l, w));
                }
            }
        }
        LabeledGraph::from_edges(n, t.label_count(), &edges)?
    };
    let mut out = ConfPoly::one(deg_cut);
    let mut chosen = Vec::new();
    subsets_upto(n, deg_cut, 0, &mut chosen, &mut |set| {
        if set.is_empty() {
            return;
        }
        let sub = graph.induced(set);
        let mono: Monomial = sub
            .components()
            .iter()
            .map(|c| config::canonicalize(&sub.induced(c)).expect("component is connected").config)
            .collect();
        out.add_term(sorted(mono), Rational::one());
    });
    Ok(out)
}

fn sorted(mut m: Monomial) -> Monomial {
    m.sort();
    m
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn subsets_upto(n: usize, k: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    f(chosen);
    if chosen.len() == k {
        return;
    }
    for v in start..n {
        chosen.push(v);
        subsets_upto(n, k, v + 1, chosen, f);
        chosen.pop();
    }
}

/// `M(T) = log A(T)`.
pub fn m_poly<H: Host>(t: &H, deg_cut: usize) -> Result<ConfPoly<Rational>> {
    a_poly(t, deg_cut)?.log()
}

/// Unitriangular matrix `A(S,T)`, its inverse and `K(T,S)` over connected
/// configurations of size at most `max_deg`, ordered by (size, form).
#[derive(Clone, Debug)]
pub struct KabiTable {
    pub max_deg: usize,
    pub generators: usize,
    pub configs: Vec<Configuration>,
    index: BTreeMap<Configuration, usize>,
    /// `a[s][t] = A(S,T)`.
    pub a: Vec<Vec<u64>>,
    /// `k[t][s] = K(T,S)`.
    pub k: Vec<Vec<Rational>>,
}

fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn sign_diff(a: usize, b: usize) -> Rational {
    sign(a.abs_diff(b))
}

/// Builds the table from the configurations occurring in `Γ_ball_radius`.
/// Fails when one more radius (if enumerated) reveals further
/// configurations of size at most `max_deg`.
pub fn kabi_table(store: &ElementStore, max_deg: usize, ball_radius: usize) -> Result<KabiTable> {
    let ball = CayleyBall::new(store, ball_radius)?;
    let configs: Vec<Configuration> = config::enumerate_connected(&ball, max_deg).into_iter().map(|e| e.config).collect();
    if ball_radius < store.horizon() {
        let wider = config::enumerate_connected(&CayleyBall::new(store, ball_radius + 1)?, max_deg);
        if wider.len() != configs.len() {
            return Err(Error::MissingConfigurations { max_deg, radius: ball_radius });
        }
    }
    Ok(KabiTable::from_configs(configs, max_deg, store.letter_count()))
}

impl KabiTable {
    /// Table over an explicit list of connected configurations.
    pub fn from_configs(mut configs: Vec<Configuration>, max_deg: usize, generators: usize) -> Self {
        configs.sort();
        configs.dedup();
        configs.retain(|c| c.size() <= max_deg);
        let n = configs.len();
        let index = configs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let patterns: Vec<Pattern> = configs.iter().map(Pattern::new).collect();
        let columns: Vec<Vec<u64>> = configs
            .par_iter()
            .map(|t| {
                let g = t.graph();
                patterns
                    .iter()
                    .map(|p| if p.size() <= t.size() { config::count_embeddings(p, &g) as u64 } else { 0 })
                    .collect()
            })
            .collect();
        let a: Vec<Vec<u64>> = (0..n).map(|s| (0..n).map(|t| columns[t][s]).collect()).collect();
        let inv = invert_unitriangular(&a);
        let k = (0..n)
            .map(|t| (0..n).map(|s| sign_diff(configs[s].size(), configs[t].size()) * inv[t][s].clone()).collect())
            .collect();
        KabiTable { max_deg, generators, configs, index, a, k }
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn position(&self, s: &Configuration) -> Result<usize> {
        self.index.get(s).copied().ok_or(Error::OutOfTable { size: s.size(), max_deg: self.max_deg })
    }

    /// `K(T,S)`.
    pub fn kabi(&self, t: &Configuration, s: &Configuration) -> Result<Rational> {
        Ok(self.k[self.position(t)?][self.position(s)?].clone())
    }

    /// Pairs `(S,U)` violating `Σ_U (−1)^{#U−#S} K(S,U) A(U,T) = δ(S,T)`.
    pub fn inversion_failures(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let rows: Vec<Vec<(usize, usize)>> = (0..n)
            .into_par_iter()
            .map(|s| {
                let mut bad = Vec::new();
                for t in 0..n {
                    let mut sum = Rational::zero();
                    for u in 0..n {
                        if self.a[u][t] != 0 && !self.k[s][u].is_zero() {
                            sum += sign_diff(self.configs[u].size(), self.configs[s].size())
                                * self.k[s][u].clone()
                                * Rational::from_count(self.a[u][t]);
                        }
                    }
                    let want = if s == t { Rational::one() } else { Rational::zero() };
                    if sum != want {
                        bad.push((s, t));
                    }
                }
                bad
            })
            .collect();
        rows.into_iter().flatten().collect()
    }

    /// Entries with `K(T,S) ≠ 0` although `#S > #T·(q−1) + 2`.
    pub fn vanishing_violations(&self, q: usize) -> Vec<(Configuration, Configuration, Rational)> {
        let mut out = Vec::new();
        for (t, row) in self.k.iter().enumerate() {
            for (s, v) in row.iter().enumerate() {
                let (ts, ss) = (self.configs[t].size(), self.configs[s].size());
                if !v.is_zero() && ss > ts * q.saturating_sub(1) + 2 {
                    out.push((self.configs[t].clone(), self.configs[s].clone(), v.clone()));
                }
            }
        }
        out
    }

    /// Entries with `K(T,S) < 0`.
    pub fn negative_entries(&self) -> Vec<(Configuration, Configuration)> {
        let mut out = Vec::new();
        for (t, row) in self.k.iter().enumerate() {
            for (s, v) in row.iter().enumerate() {
                if v.is_negative() {
                    out.push((self.configs[t].clone(), self.configs[s].clone()));
                }
            }
        }
        out
    }

    /// Pairs with `K(T,S) ≠ 0` where `T` does not embed in `S`.
    pub fn support_violations(&self) -> Vec<(Configuration, Configuration)> {
        let mut out = Vec::new();
        for t in 0..self.len() {
            for s in 0..self.len() {
                if !self.k[t][s].is_zero() && self.a[t][s] == 0 {
                    out.push((self.configs[t].clone(), self.configs[s].clone()));
                }
            }
        }
        out
    }

    /// `φ(S) = Σ_T M(T)·(−1)^{#T−#S} K(T,S)`, truncated at `deg_cut`.
    pub fn phi(&self, s: &Configuration, deg_cut: usize) -> Result<ConfPoly<Rational>> {
        if deg_cut > self.max_deg {
            return Err(Error::OutOfTable { size: deg_cut, max_deg: self.max_deg });
        }
        let si = self.position(s)?;
        let mut out = ConfPoly::zero(deg_cut);
        for (ti, t) in self.configs.iter().enumerate() {
            let k = &self.k[ti][si];
            if k.is_zero() || t.size() > deg_cut {
                continue;
            }
            let c = sign_diff(t.size(), s.size()) * k.clone();
            out = out.add(&m_poly(&t.graph(), deg_cut)?.scale(&c));
        }
        Ok(out)
    }

    /// `φ(S)` for every configuration of the table, sharing the `M(T)`.
    pub fn phi_basis(&self, deg_cut: usize) -> Result<Vec<ConfPoly<Rational>>> {
        if deg_cut > self.max_deg {
            return Err(Error::OutOfTable { size: deg_cut, max_deg: self.max_deg });
        }
        let ms = self.configs.par_iter().map(|t| m_poly(&t.graph(), deg_cut)).collect::<Result<Vec<_>>>()?;
        Ok((0..self.len())
            .into_par_iter()
            .map(|si| {
                let mut out = ConfPoly::zero(deg_cut);
                for (ti, t) in self.configs.iter().enumerate() {
                    let k = &self.k[ti][si];
                    if !k.is_zero() && t.size() <= deg_cut {
                        out = out.add(&ms[ti].scale(&(sign_diff(t.size(), self.configs[si].size()) * k.clone())));
                    }
                }
                out
            })
            .collect())
    }

    /// Configurations `T` for which `Σ_S φ(S) A(S,T) ≠ M(T)` up to `deg_cut`.
    pub fn reconstruction_failures(&self, deg_cut: usize) -> Result<Vec<Configuration>> {
        let phis = self.phi_basis(deg_cut)?;
        let bad = (0..self.len())
            .into_par_iter()
            .map(|ti| {
                let mut rebuilt = ConfPoly::zero(deg_cut);
                for (si, phi) in phis.iter().enumerate() {
                    if self.a[si][ti] != 0 {
                        rebuilt = rebuilt.add(&phi.scale(&Rational::from_count(self.a[si][ti])));
                    }
                }
                Ok((rebuilt != m_poly(&self.configs[ti].graph(), deg_cut)?).then(|| self.configs[ti].clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(bad.into_iter().flatten().collect())
    }

    /// Coordinates of `m` in the φ-basis plus the part outside its span.
    pub fn lie_coordinates(&self, m: &ConfPoly<Rational>) -> Result<(BTreeMap<Configuration, Rational>, ConfPoly<Rational>)> {
        let cut = m.deg_cut().min(self.max_deg);
        let mut residual = m.truncate(cut);
        let mut coords = BTreeMap::new();
        for s in &self.configs {
            if s.size() > cut {
                break;
            }
            let c = residual.coeff_of(s);
            if c.is_zero() {
                continue;
            }
            residual = residual.sub(&self.phi(s, cut)?.scale(&c));
            coords.insert(s.clone(), c);
        }
        Ok((coords, residual))
    }

    /// CSV `T,S,K` over nonzero entries.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("T,S,K\n");
        for (t, row) in self.k.iter().enumerate() {
            for (s, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    out.push_str(&format!("{},{},{}\n", self.configs[t], self.configs[s], render_rational(v)));
                }
            }
        }
        out
    }
}

/// `p/q`, or `p` for integers.
pub fn render_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Inverse of an upper unitriangular integer matrix by back substitution.
fn invert_unitriangular(a: &[Vec<u64>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let cols: Vec<Vec<Rational>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut col = vec![Rational::zero(); n];
            col[j] = Rational::one();
            for i in (0..j).rev() {
                let mut s = Rational::zero();
                for k in i + 1..=j {
                    if a[i][k] != 0 && !col[k].is_zero() {
                        s += Rational::from_count(a[i][k]) * col[k].clone();
                    }
                }
                col[i] = -s;
            }
            col
        })
        .collect();
    (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    fn pt() -> Configuration {
        Configuration::point()
    }

    #[test]
    fn a_and_m_polynomials() {
        let point = pt().graph();
        let a = a_poly(&point, 2).unwrap();
        assert_eq!(a, ConfPoly::one(2).add(&ConfPoly::config(&pt(), 2)));
        let m = m_poly(&point, 2).unwrap();
        assert_eq!(m.coeff_of(&pt()), r(1));
        assert_eq!(m.coeff(&vec![pt(), pt()]), -half());

        let edge = Configuration::edge(0);
        let a = a_poly(&edge.graph(), 2).unwrap();
        assert_eq!(a.coeff_of(&pt()), r(2));
        assert_eq!(a.coeff_of(&edge), r(1));
        assert_eq!(a.coeff(&vec![pt(), pt()]), r(0));
        let m = m_poly(&edge.graph(), 2).unwrap();
        assert_eq!(m.coeff_of(&pt()), r(2));
        assert_eq!(m.coeff_of(&edge), r(1));
        assert_eq!(m.coeff(&vec![pt(), pt()]), r(-2));

        let g1 = Configuration::from_edges(3, &[(0, 0, 1), (0, 1, 2)]).unwrap();
        let a = a_poly(&g1.graph(), 2).unwrap();
        assert_eq!(a.coeff_of(&pt()), r(3));
        assert_eq!(a.coeff(&vec![pt(), pt()]), r(1));
        assert_eq!(m_poly(&g1.graph(), 3).unwrap().coeff_of(&pt()), r(3));
    }

    #[test]
    fn log_inverts_exp_on_small_input() {
        let x = ConfPoly::<Rational>::config(&pt(), 3);
        let one_plus = ConfPoly::one(3).add(&x);
        let l = one_plus.log().unwrap();
        assert_eq!(l.coeff(&vec![pt(), pt(), pt()]), Rational::new(1.into(), 3.into()));
    }

    #[test]
    fn a2_table() {
        let s = ElementStore::build(&Presentation::catalog("A2").unwrap(), 5).unwrap();
        let t = kabi_table(&s, 3, 4).unwrap();
        assert!(t.inversion_failures().is_empty());
        assert!(t.support_violations().is_empty());
        assert!(t.negative_entries().is_empty());
        for i in 0..t.len() {
            assert_eq!(t.k[i][i], r(1));
        }
        assert_eq!(t.kabi(&Configuration::edge(0), &pt()).unwrap(), r(0));
        let phi = t.phi(&pt(), 2).unwrap();
        assert_eq!(phi, m_poly(&pt().graph(), 2).unwrap());
        for c in &t.configs {
            let phi = t.phi(c, 3).unwrap();
            let low = phi.terms().keys().map(degree).min().unwrap();
            assert_eq!(low, c.size());
            assert_eq!(phi.coeff_of(c), r(1));
        }
        for target in &t.configs {
            let m = m_poly(&target.graph(), 3).unwrap();
            let mut rebuilt = ConfPoly::zero(3);
            for s in &t.configs {
                let a = config::count_in_config(s, target) as u64;
                rebuilt = rebuilt.add(&t.phi(s, 3).unwrap().scale(&Rational::from_count(a)));
            }
            assert_eq!(rebuilt, m);
            let (coords, residual) = t.lie_coordinates(&m).unwrap();
            assert!(residual.is_zero());
            for (s, c) in coords {
                assert_eq!(c, Rational::from_count(config::count_in_config(&s, target) as u64));
            }
        }
        let sq = ConfPoly::monomial(vec![pt(), pt()], r(1), 2);
        let (coords, residual) = t.lie_coordinates(&sq).unwrap();
        assert!(coords.is_empty());
        assert!(!residual.is_zero());
        assert!(t.reconstruction_failures(3).unwrap().is_empty());
        let basis = t.phi_basis(3).unwrap();
        assert_eq!(basis[1], t.phi(&t.configs[1], 3).unwrap());
        assert!(t.kabi(&Configuration::from_edges(5, &[(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 0, 4)]).unwrap(), &pt()).is_err());
    }

    #[test]
    fn missing_configurations_detected() {
        let s = ElementStore::build(&Presentation::catalog("A2").unwrap(), 3).unwrap();
        assert_eq!(kabi_table(&s, 3, 1).unwrap_err(), Error::MissingConfigurations { max_deg: 3, radius: 1 });
    }
}
