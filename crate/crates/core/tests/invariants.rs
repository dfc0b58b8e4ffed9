//! Module invariants checked across catalog presentations, most of them as
//! property tests over sampled elements, words and matrices.

#![allow(clippy::needless_range_loop)]

use std::sync::OnceLock;

use growth_core::cayley::CayleyBall;
use growth_core::confalg;
use growth_core::config::{self, Configuration, Pattern};
use growth_core::coxeter;
use growth_core::poly::IntPolynomial;
use growth_core::presentation::{artin_presentation, CoxeterMatrix, Presentation, Word};
use growth_core::series::{self, GrowthKind};
use growth_core::words::{ElementId, ElementStore};
use growth_core::{Rational, RationalSeries};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn build(name: &str, n: usize) -> ElementStore {
    ElementStore::build(&Presentation::catalog(name).unwrap(), n).unwrap()
}

fn a3() -> &'static ElementStore {
    static S: OnceLock<ElementStore> = OnceLock::new();
    S.get_or_init(|| build("A3", 6))
}

fn b2() -> &'static ElementStore {
    static S: OnceLock<ElementStore> = OnceLock::new();
    S.get_or_init(|| build("B2", 8))
}

fn pick(s: &ElementStore, radius: usize, i: prop::sample::Index) -> ElementId {
    ElementId(i.index(s.ball_size(radius).unwrap()) as u32)
}

const FINITE: [&str; 16] = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "D5", "E6", "F4", "G2", "H3", "H4", "I2:5", "I2:9"];

proptest! {
    #[test]
    fn lengths_add(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        for s in [a3(), b2()] {
            let half = s.horizon() / 2;
            let (u, v) = (pick(s, half, i), pick(s, half, j));
            let uv = s.product(u, v).unwrap();
            prop_assert_eq!(s.length(uv), s.length(u) + s.length(v));
        }
    }

    #[test]
    fn gcd_is_greatest_common_left_divisor(idx in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let s = a3();
        let set: Vec<ElementId> = idx.into_iter().map(|i| pick(s, 4, i)).collect();
        let g = s.gcd_l(&set).unwrap();
        for &u in &set {
            prop_assert!(s.left_quotient(g, u).is_ok());
        }
        let common: Vec<ElementId> = s
            .left_divisors(set[0])
            .into_iter()
            .filter(|&d| set.iter().all(|&u| s.left_quotient(d, u).is_ok()))
            .collect();
        for d in common {
            prop_assert!(s.left_quotient(d, g).is_ok());
        }
    }

    #[test]
    fn free_monoid_words_are_normal(letters in prop::collection::vec(0u8..3, 0..7)) {
        static S: OnceLock<ElementStore> = OnceLock::new();
        let s = S.get_or_init(|| build("Free:3", 6));
        let w = Word(letters.iter().map(|&l| l as _).collect());
        prop_assert_eq!(s.normalize(&w).unwrap(), w);
    }

    #[test]
    fn artin_relations_are_canonical_and_balanced(entries in prop::collection::vec(prop::sample::select(vec![0u32, 2, 3, 4, 5, 6]), 6)) {
        let mut rows = vec![vec![1u32; 4]; 4];
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                rows[i][j] = entries[k];
                rows[j][i] = entries[k];
                k += 1;
            }
        }
        let m = CoxeterMatrix::from_rows(&rows).unwrap();
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let p = artin_presentation(&m, &names).unwrap();
        prop_assert_eq!(&p, &artin_presentation(&m, &names).unwrap());
        prop_assert!(p.validate().passed());
        let pairs: Vec<(u32, u32)> = p.relations.iter().map(|(l, r)| (l.letters()[0] as u32, r.letters()[0] as u32)).collect();
        let mut sorted = pairs.clone();
        sorted.sort();
        prop_assert_eq!(pairs, sorted);
        for (l, r) in &p.relations {
            prop_assert_eq!(l.len(), r.len());
        }
    }

    #[test]
    fn dihedral_roots_change_sign(p in 3u32..20) {
        let m = CoxeterMatrix::catalog(&format!("I2:{p}")).unwrap();
        let nt = coxeter::reduced_denominator(&m).unwrap();
        let eps = Rational::new(1.into(), 1_000_000_000.into());
        let r = coxeter::smallest_root(&nt, &eps).unwrap();
        prop_assert!(r.width() <= eps);
        let (lo, hi) = (nt.eval(r.lo()), nt.eval(r.hi()));
        prop_assert!(!(lo * hi).is_positive());
    }
}

fn ints(v: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(v)
}

#[test]
fn denominators_vanish_at_one() {
    for name in FINITE {
        let n = coxeter::denominator(&CoxeterMatrix::catalog(name).unwrap());
        assert!(n.eval(&Rational::one()).is_zero(), "{name}");
    }
    assert_eq!(coxeter::denominator(&CoxeterMatrix::catalog("A2").unwrap()), ints(&[1, -2, 0, 1]));
}

#[test]
fn a2_spheres_follow_the_recurrence() {
    let s = build("A2", 12);
    let c = s.sphere_sizes();
    assert_eq!(c, vec![1, 2, 4, 7, 12, 20, 33, 54, 88, 143, 232, 376, 609]);
    for n in 3..=12 {
        assert_eq!(c[n] + c[n - 3], 2 * c[n - 1]);
    }
}

#[test]
fn ball_series_is_sphere_over_one_minus_t() {
    for (name, n) in [("A2", 8), ("B3", 5), ("Free:2", 6), ("FreeGroup:2", 5), ("I2:7", 7)] {
        let s = build(name, n);
        let ball = series::growth_series(&s, GrowthKind::Ball, n).unwrap();
        let sphere = series::growth_series(&s, GrowthKind::Sphere, n).unwrap();
        assert_eq!(sphere.partial_sums(), ball, "{name}");
        let one_minus_t = RationalSeries::new(vec![Rational::one(), -Rational::one()], n);
        assert_eq!(&ball * &one_minus_t, sphere, "{name}");
    }
}

#[test]
fn stores_are_cancellative() {
    for name in ["A2", "A3", "B2", "G2", "I2:5", "Free:2", "FreeGroup:2"] {
        assert!(build(name, 5).cancellativity_violations().is_empty(), "{name}");
    }
}

#[test]
fn partition_times_growth_is_embedding_series() {
    for name in ["A2", "B2", "FreeGroup:2"] {
        let s = build(name, 5);
        let ball = series::growth_series(&s, GrowthKind::Ball, 5).unwrap();
        let lie = series::partition_function(&s, 3, 5).unwrap();
        for (c, z) in &lie.terms {
            assert_eq!(&(z * &ball), &series::embedding_series(&s, c, 5).unwrap(), "{name} {c}");
        }
    }
}

#[test]
fn right_extension_of_a_ball_is_the_next_ball() {
    let s = build("B2", 5);
    for k in 0..4 {
        let inner = CayleyBall::new(&s, k).unwrap().as_subgraph();
        let outer = CayleyBall::new(&s, k + 1).unwrap();
        assert_eq!(inner.right_extend(&outer).unwrap().vertices(), outer.as_subgraph().vertices());
    }
}

#[test]
fn no_embedding_below_first_radius() {
    let s = build("A2", 6);
    let top = CayleyBall::new(&s, 6).unwrap();
    for e in config::enumerate_connected(&top, 4) {
        let p = Pattern::new(&e.config);
        for r in 0..e.first_radius {
            assert_eq!(config::count_embeddings(&p, &CayleyBall::new(&s, r).unwrap()), 0);
        }
        assert!(config::count_embeddings(&p, &CayleyBall::new(&s, e.first_radius).unwrap()) > 0);
    }
}

#[test]
fn point_coefficient_of_m_is_vertex_count() {
    let s = build("A2", 5);
    let pt = Configuration::point();
    for e in config::enumerate_connected(&CayleyBall::new(&s, 4).unwrap(), 4) {
        let m = confalg::m_poly(&e.config.graph(), 4).unwrap();
        assert_eq!(m.coeff_of(&pt), Rational::from_integer(e.config.size().into()));
    }
}

#[test]
fn homogeneous_inputs_satisfy_formula_f_with_equality() {
    for name in ["A2", "B2", "Free:2"] {
        let s = build(name, 6);
        for e in config::enumerate_connected(&CayleyBall::new(&s, 4).unwrap(), 4) {
            for n in e.first_radius + 1..=5 {
                let f = growth_core::cayley::check_formula_f(&s, &e.config, n).unwrap();
                assert!(f.equality(), "{name} {} n={n}", e.config);
            }
        }
    }
}

#[test]
fn cache_bytes_round_trip() {
    for name in ["A3", "FreeGroup:3", "G2"] {
        let s = build(name, 4);
        let bytes = s.to_cache_bytes();
        let back = ElementStore::from_cache_bytes(&bytes).unwrap();
        assert_eq!(back.to_cache_bytes(), bytes);
        assert_eq!(back.sphere_sizes(), s.sphere_sizes());
    }
}
