//! Finite-`n` approximants of the limit partition function: free energies,
//! opposite polynomials, the τ maps and the closed form `ω = Σ φ(S) r^{L(S)}`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cayley::CayleyBall;
use crate::confalg::{render_rational, KabiTable};
use crate::config::{self, Configuration, Pattern};
use crate::coxeter;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::presentation::CoxeterMatrix;
use crate::scalar::Scalar;
use crate::words::ElementStore;
use crate::Rational;

fn ratio(a: usize, b: usize) -> Rational {
    Rational::new(a.into(), b.into())
}

/// `{S ↦ A(S,Γ_n)/#Γ_n}` for the connected `S` with `#S ≤ max_deg` that
/// occur in `Γ_n`.
pub fn free_energy_coefficients(store: &ElementStore, n: usize, max_deg: usize) -> Result<BTreeMap<Configuration, Rational>> {
    let ball = CayleyBall::new(store, n)?;
    let total = store.ball_size(n)?;
    Ok(config::enumerate_connected(&ball, max_deg)
        .par_iter()
        .map(|e| (e.config.clone(), ratio(config::count_embeddings(&Pattern::new(&e.config), &ball), total)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect())
}

/// `X_n(s) = Σ_k (#Γ_{n−k}/#Γ_n) s^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OppositePoly {
    pub n: usize,
    pub coeffs: Vec<Rational>,
}

pub fn opposite_polynomial(store: &ElementStore, n: usize) -> Result<OppositePoly> {
    let total = store.ball_size(n)?;
    let coeffs = (0..=n).map(|k| Ok(ratio(store.ball_size(n - k)?, total))).collect::<Result<_>>()?;
    Ok(OppositePoly { n, coeffs })
}

impl OppositePoly {
    /// `τ_Ω: a_k ↦ a_{k+1}/a_1`.
    pub fn tau(&self) -> Result<OppositePoly> {
        let a1 = self.coeffs.get(1).ok_or(Error::ZeroPivot)?;
        if a1.is_zero() {
            return Err(Error::ZeroPivot);
        }
        Ok(OppositePoly { n: self.n - 1, coeffs: self.coeffs[1..].iter().map(|a| a / a1).collect() })
    }
}

/// `τ̃_Ω` on the free energies at `n`: `S ↦ a_{SΓ_1}/a_{Γ_1}`, for the given
/// configurations (each `SΓ_1` computed from a representative of `S`).
pub fn tau_tilde(store: &ElementStore, n: usize, configs: &[Configuration]) -> Result<BTreeMap<Configuration, Rational>> {
    let ball = CayleyBall::new(store, n)?;
    let g1 = CayleyBall::new(store, 1)?.as_subgraph().configuration()?;
    let pivot = config::count_embeddings(&Pattern::new(&g1), &ball);
    if pivot == 0 {
        return Err(Error::ZeroPivot);
    }
    let top = CayleyBall::new(store, store.horizon())?;
    configs
        .par_iter()
        .map(|s| {
            let rep = config::first_representative(&top, &Pattern::new(s)).ok_or(Error::NoRepresentativeInHorizon)?;
            let rep = top.subgraph(rep)?;
            let outer = CayleyBall::new(store, rep.radius() + 1)?;
            let ext = rep.right_extend(&outer)?.configuration()?;
            Ok((s.clone(), ratio(config::count_embeddings(&Pattern::new(&ext), &ball), pivot)))
        })
        .collect()
}

/// One configuration of an [`OmegaEstimate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaEntry {
    pub config: Configuration,
    pub l: usize,
    /// `A(S,Γ_n)/#Γ_n`.
    pub ratio: Rational,
    /// `r^{L(S)}`.
    pub target: Interval,
    /// `|ratio − r^{L(S)}|`.
    pub gap: Interval,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaEstimate {
    pub n: usize,
    pub r: Interval,
    pub entries: Vec<OmegaEntry>,
}

impl OmegaEstimate {
    pub fn entry(&self, s: &Configuration) -> Option<&OmegaEntry> {
        self.entries.iter().find(|e| &e.config == s)
    }

    /// CSV `S,L,ratio,target_lo,target_hi,gap_lo,gap_hi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("S,L,ratio,target_lo,target_hi,gap_lo,gap_hi\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                e.config,
                e.l,
                render_rational(&e.ratio),
                render_rational(e.target.lo()),
                render_rational(e.target.hi()),
                render_rational(e.gap.lo()),
                render_rational(e.gap.hi())
            ));
        }
        out
    }
}

fn smallest_root_of(m: &CoxeterMatrix, eps: &Rational) -> Result<Interval> {
    let kind = coxeter::classify(m);
    if !kind.is_finite() {
        return Err(Error::NotFiniteType);
    }
    if kind.components().len() != 1 {
        return Err(Error::Decomposable);
    }
    coxeter::smallest_root(&coxeter::reduced_denominator(m)?, eps)
}

/// Pairs `A(S,Γ_n)/#Γ_n` with `r^{L(S)}` for all connected `S`, `#S ≤ max_deg`,
/// occurring in `Γ_n`, where `r` is the smallest root of `Ñ_M` in `(0,1)`.
pub fn omega_closed(store: &ElementStore, m: &CoxeterMatrix, max_deg: usize, n: usize, eps: &Rational) -> Result<OmegaEstimate> {
    let r = smallest_root_of(m, eps)?;
    let ball = CayleyBall::new(store, n)?;
    let entries = config::enumerate_connected(&ball, max_deg)
        .par_iter()
        .map(|e| omega_entry(store, &e.config, n, &r))
        .collect::<Result<Vec<_>>>()?;
    Ok(OmegaEstimate { n, r, entries })
}

/// Ratio, target and gap for one configuration at radius `n`.
pub fn omega_entry(store: &ElementStore, s: &Configuration, n: usize, r: &Interval) -> Result<OmegaEntry> {
    let ball = CayleyBall::new(store, n)?;
    let l = config::radius_l(store, s)?;
    let ratio = ratio(config::count_embeddings(&Pattern::new(s), &ball), store.ball_size(n)?);
    let target = r.powu(l as u32);
    let gap = target.distance_to(&ratio);
    Ok(OmegaEntry { config: s.clone(), l, ratio, target, gap })
}

/// φ-coordinates `{S ↦ α^{L(S)}}` of `ω_{M,α}` for the connected `S` with
/// `#S ≤ max_deg` occurring in the enumerated ball. `α` is not checked to
/// be a root.
pub fn omega_at_root<T: Scalar + Send + Sync>(store: &ElementStore, alpha: &T, max_deg: usize) -> Result<BTreeMap<Configuration, T>> {
    let ball = CayleyBall::new(store, store.horizon())?;
    config::enumerate_connected(&ball, max_deg)
        .par_iter()
        .map(|e| Ok((e.config.clone(), alpha.powu(config::radius_l(store, &e.config)? as u32))))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().collect())
}

/// Truncated kabi sum `Σ_{#S ≤ maxDeg} (−1)^{#T−#S} K(T,S) r^{L(S)}`.
pub fn kabi_residual(store: &ElementStore, table: &KabiTable, t: &Configuration, r: &Interval) -> Result<Interval> {
    let ti = table.position(t)?;
    let mut sum = Interval::point(Rational::zero());
    for (si, s) in table.configs.iter().enumerate() {
        let k = &table.k[ti][si];
        if k.is_zero() {
            continue;
        }
        let sign = if (t.size() + s.size()).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        let l = config::radius_l(store, s)?;
        sum = &sum + &(&r.powu(l as u32) * &(sign * k.clone()));
    }
    Ok(sum)
}

/// The smallest root of `Ñ_M` used by [`omega_closed`].
pub fn root_interval(m: &CoxeterMatrix, eps: &Rational) -> Result<Interval> {
    smallest_root_of(m, eps)
}

/// `[Γ_k]`, the class of the ball of radius `k`.
pub fn ball_configuration(store: &ElementStore, k: usize) -> Result<Configuration> {
    CayleyBall::new(store, k)?.as_subgraph().configuration()
}
