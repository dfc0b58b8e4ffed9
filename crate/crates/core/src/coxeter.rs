//! Finite-type classification of Coxeter matrices, lengths of longest
//! elements, the denominator `N_M(t)` and the conjecture diagnostics.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::{self, IntPolynomial, Irreducibility};
use crate::presentation::CoxeterMatrix;
use crate::{Integer, Rational};

/// Connected finite-type Coxeter diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    H(usize),
    I2(u32),
}

impl Component {
    pub fn rank(&self) -> usize {
        match *self {
            Component::A(l) | Component::B(l) | Component::D(l) | Component::E(l) | Component::H(l) => l,
            Component::F4 => 4,
            Component::G2 | Component::I2(_) => 2,
        }
    }

    /// `ℓ(w_0)`, the number of positive roots.
    pub fn longest_length(&self) -> usize {
        match *self {
            Component::A(l) => l * (l + 1) / 2,
            Component::B(l) => l * l,
            Component::D(l) => l * (l - 1),
            Component::E(6) => 36,
            Component::E(7) => 63,
            Component::E(8) => 120,
            Component::E(l) => unreachable!("E{l} is not finite type"),
            Component::F4 => 24,
            Component::G2 => 6,
            Component::H(3) => 15,
            Component::H(4) => 60,
            Component::H(l) => unreachable!("H{l} is not finite type"),
            Component::I2(p) => p as usize,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::A(l) => write!(f, "A{l}"),
            Component::B(l) => write!(f, "B{l}"),
            Component::D(l) => write!(f, "D{l}"),
            Component::E(l) => write!(f, "E{l}"),
            Component::F4 => write!(f, "F4"),
            Component::G2 => write!(f, "G2"),
            Component::H(l) => write!(f, "H{l}"),
            Component::I2(p) => write!(f, "I2({p})"),
        }
    }
}

/// Classification of a Coxeter matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoxeterType {
    /// Components sorted; empty for the empty matrix.
    Finite(Vec<Component>),
    NotFinite,
}

impl CoxeterType {
    pub fn is_finite(&self) -> bool {
        matches!(self, CoxeterType::Finite(_))
    }

    pub fn components(&self) -> &[Component] {
        match self {
            CoxeterType::Finite(c) => c,
            CoxeterType::NotFinite => &[],
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::NotFinite => write!(f, "not finite type"),
            CoxeterType::Finite(c) if c.is_empty() => write!(f, "trivial"),
            CoxeterType::Finite(c) => {
                let parts: Vec<String> = c.iter().map(Component::to_string).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

/// Decomposes the Coxeter graph into components and matches each against
/// the finite-type diagrams.
pub fn classify(m: &CoxeterMatrix) -> CoxeterType {
    let n = m.size();
    // bond label: None = no edge, Some(None) = ∞
    let bond = |i: usize, j: usize| -> Option<Option<u32>> {
        match m.get(i, j) {
            Some(2) => None,
            other => Some(other),
        }
    };
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut verts = vec![s];
        let mut i = 0;
        while i < verts.len() {
            let v = verts[i];
            i += 1;
            for w in 0..n {
                if w != v && !seen[w] && bond(v, w).is_some() {
                    seen[w] = true;
                    verts.push(w);
                }
            }
        }
        match classify_component(&verts, &bond) {
            Some(c) => comps.push(c),
            None => return CoxeterType::NotFinite,
        }
    }
    comps.sort();
    CoxeterType::Finite(comps)
}

fn classify_component(verts: &[usize], bond: &dyn Fn(usize, usize) -> Option<Option<u32>>) -> Option<Component> {
    let k = verts.len();
    let mut edges = Vec::new();
    for (a, &i) in verts.iter().enumerate() {
        for &j in &verts[a + 1..] {
            if let Some(label) = bond(i, j) {
                edges.push((i, j, label?));
            }
        }
    }
    match k {
        1 => return Some(Component::A(1)),
        2 => {
            return Some(match edges[0].2 {
                3 => Component::A(2),
                4 => Component::B(2),
                6 => Component::G2,
                p => Component::I2(p),
            })
        }
        _ => {}
    }
    if edges.len() != k - 1 || edges.iter().any(|e| e.2 > 5) {
        return None;
    }
    let degree = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    let label = |a: usize, b: usize| edges.iter().find(|e| (e.0 == a && e.1 == b) || (e.0 == b && e.1 == a)).map(|e| e.2);
    let neighbours = |v: usize| -> Vec<usize> {
        edges.iter().filter_map(|e| if e.0 == v { Some(e.1) } else if e.1 == v { Some(e.0) } else { None }).collect()
    };
    let branch: Vec<usize> = verts.iter().copied().filter(|&v| degree(v) >= 3).collect();
    if branch.is_empty() {
        let start = *verts.iter().find(|&&v| degree(v) == 1)?;
        let mut path = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = neighbours(cur).iter().find(|&&w| w != prev) {
            path.push(next);
            prev = cur;
            cur = next;
        }
        let mut labels: Vec<u32> = path.windows(2).map(|w| label(w[0], w[1]).expect("path edge")).collect();
        if labels.last() > labels.first() {
            labels.reverse();
        }
        let special: Vec<(usize, u32)> = labels.iter().copied().enumerate().filter(|&(_, l)| l != 3).collect();
        return match special.as_slice() {
            [] => Some(Component::A(k)),
            [(0, 4)] => Some(Component::B(k)),
            [(1, 4)] if k == 4 => Some(Component::F4),
            [(0, 5)] if k == 3 || k == 4 => Some(Component::H(k)),
            _ => None,
        };
    }
    if branch.len() != 1 || degree(branch[0]) != 3 || edges.iter().any(|e| e.2 != 3) {
        return None;
    }
    let centre = branch[0];
    let mut arms: Vec<usize> = neighbours(centre)
        .into_iter()
        .map(|start| {
            let (mut prev, mut cur, mut len) = (centre, start, 1);
            while let Some(&next) = neighbours(cur).iter().find(|&&w| w != prev) {
                prev = cur;
                cur = next;
                len += 1;
            }
            len
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, c] => Some(Component::D(c + 3)),
        [1, 2, 2] => Some(Component::E(6)),
        [1, 2, 3] => Some(Component::E(7)),
        [1, 2, 4] => Some(Component::E(8)),
        _ => None,
    }
}

/// `deg Δ_J`, summed over components.
pub fn longest_length(t: &CoxeterType) -> Result<usize> {
    match t {
        CoxeterType::NotFinite => Err(Error::NotFiniteType),
        CoxeterType::Finite(c) => Ok(c.iter().map(Component::longest_length).sum()),
    }
}

/// `N_M(t) = Σ_{J finite type} (−1)^{#J} t^{deg Δ_J}`.
pub fn denominator(m: &CoxeterMatrix) -> IntPolynomial {
    let n = m.size();
    let terms: Vec<Option<(usize, bool)>> = (0u64..1 << n)
        .into_par_iter()
        .map(|mask| {
            let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let t = classify(&m.restrict(&subset));
            longest_length(&t).ok().map(|l| (l, subset.len() % 2 == 1))
        })
        .collect();
    let top = terms.iter().flatten().map(|t| t.0).max().unwrap_or(0);
    let mut coeffs = vec![Integer::zero(); top + 1];
    for (deg, odd) in terms.into_iter().flatten() {
        if odd {
            coeffs[deg] -= 1;
        } else {
            coeffs[deg] += 1;
        }
    }
    IntPolynomial::new(coeffs)
}

/// `Ñ_M(t) = N_M(t)/(1−t)`.
pub fn reduced_denominator(m: &CoxeterMatrix) -> Result<IntPolynomial> {
    denominator(m)
        .div_exact(&IntPolynomial::from_i64(&[1, -1]))
        .ok_or_else(|| Error::Domain("N_M(1) != 0".into()))
}

/// Smallest root of `n` in `(0,1)` to width `eps`.
pub fn smallest_root(n: &IntPolynomial, eps: &Rational) -> Result<Interval> {
    poly::smallest_root(n, eps)
}

/// Floating-point dominance check of the smallest positive root.
#[derive(Clone, Debug, PartialEq)]
pub struct Dominance {
    /// Smallest modulus among the other complex roots of `Ñ`.
    pub other_min_modulus: Option<f64>,
    pub margin: Option<f64>,
    pub passed: bool,
}

/// Diagnostics for one indecomposable finite-type matrix.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub kind: CoxeterType,
    pub rank: usize,
    pub n: IntPolynomial,
    pub n_tilde: IntPolynomial,
    pub irreducible: Irreducibility,
    pub roots_in_unit: usize,
    pub root: Option<Interval>,
    pub dominance: Dominance,
}

impl ConjectureReport {
    pub fn root_count_matches(&self) -> bool {
        self.roots_in_unit + 1 == self.rank
    }

    /// Structured text; rationals as `p/q`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("type: {}\n", self.kind));
        s.push_str(&format!("N: {}\n", self.n));
        s.push_str(&format!("N_tilde: {}\n", self.n_tilde));
        s.push_str(&format!("conjecture_1: {}\n", self.irreducible));
        s.push_str(&format!(
            "conjecture_2: {} distinct roots in (0,1), expected {}: {}\n",
            self.roots_in_unit,
            self.rank - 1,
            if self.root_count_matches() { "pass" } else { "fail" }
        ));
        match &self.root {
            Some(r) => s.push_str(&format!("smallest_root: {r}\n")),
            None => s.push_str("smallest_root: none\n"),
        }
        match (self.dominance.other_min_modulus, self.dominance.margin) {
            (Some(m), Some(g)) => s.push_str(&format!(
                "conjecture_3: other roots have modulus >= {m:.9}, margin {g:.3e}: {} (numeric, not certified)\n",
                if self.dominance.passed { "pass" } else { "fail" }
            )),
            _ => s.push_str("conjecture_3: no other roots: pass (numeric, not certified)\n"),
        }
        s
    }
}

/// Conjectures (1)–(3) for an indecomposable finite-type matrix.
pub fn conjecture_report(m: &CoxeterMatrix, eps: &Rational) -> Result<ConjectureReport> {
    let kind = classify(m);
    match kind.components().len() {
        _ if !kind.is_finite() => return Err(Error::NotFiniteType),
        1 => {}
        _ => return Err(Error::Decomposable),
    }
    let n = denominator(m);
    let n_tilde = reduced_denominator(m)?;
    let irreducible = poly::irreducibility(&n_tilde);
    let roots_in_unit = poly::roots_in_unit_interval(&n_tilde);
    let root = match poly::smallest_root(&n_tilde, eps) {
        Ok(r) => Some(r),
        Err(Error::NoRootInUnitInterval) => None,
        Err(e) => return Err(e),
    };
    let dominance = match &root {
        None => Dominance { other_min_modulus: None, margin: None, passed: true },
        Some(r) => {
            let mid = num_traits::ToPrimitive::to_f64(&r.midpoint()).unwrap_or(f64::NAN);
            let roots = poly::complex_roots(&n_tilde);
            let closest = roots
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - mid).norm().total_cmp(&(b.1 - mid).norm()))
                .map(|(i, _)| i);
            let others = roots.iter().enumerate().filter(|(i, _)| Some(*i) != closest).map(|(_, z)| z.norm());
            let min = others.fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.min(x))));
            match min {
                None => Dominance { other_min_modulus: None, margin: None, passed: true },
                Some(m) => Dominance { other_min_modulus: Some(m), margin: Some(m - mid), passed: m - mid > 1e-9 },
            }
        }
    };
    Ok(ConjectureReport { rank: m.size(), kind, n, n_tilde, irreducible, roots_in_unit, root, dominance })
}

/// `1/N_M(t)` to order `order`.
pub fn inverse_denominator_series(m: &CoxeterMatrix, order: usize) -> Result<crate::RationalSeries> {
    let n = denominator(m);
    let num = vec![Rational::one()];
    let den: Vec<Rational> = n.coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect();
    crate::RationalSeries::from_rational_function(&num, &den, order)
}
