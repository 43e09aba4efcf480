mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use ratlin::json::{self, PencilJson};
use ratlin::pencils::{fiedler_pencil, gfpr, Path};
use ratlin::polymat::structure_check;
use ratlin::random;
use ratlin::realize::{big_j, system_matrix};
use ratlin::structured::{self, find_quasi_identity};
use ratlin::tuples::{total_consecutions, total_inversions, IndexTuple};
use ratlin::verify::{det_proportionality, Tolerances};
use ratlin::RealizationKind;

fn permutation(max_m: usize) -> impl Strategy<Value = IndexTuple> {
    (1..=max_m).prop_flat_map(|m| Just((0..m as i64).collect::<Vec<_>>()).prop_shuffle()).prop_map(IndexTuple::new)
}

fn kind() -> impl Strategy<Value = RealizationKind> {
    prop::sample::select(RealizationKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn consecutions_plus_inversions(alpha in permutation(10)) {
        let s = total_consecutions(&alpha).unwrap() + total_inversions(&alpha).unwrap();
        prop_assert_eq!(s as usize, alpha.len() - 1);
    }

    #[test]
    fn fiedler_paths_agree(sigma in permutation(5), n in 1usize..=3, r in 1usize..=3, seed in any::<u64>()) {
        let m = sigma.len();
        let re = random::realization(&mut random::rng(seed), None, m, n, r, false).unwrap();
        let a = fiedler_pencil(&sigma, &re, Path::Product).unwrap();
        let b = fiedler_pencil(&sigma, &re, Path::Bordered).unwrap();
        prop_assert_eq!(a.x, b.x);
        prop_assert_eq!(a.y, b.y);
    }

    #[test]
    fn fiedler_determinant_is_proportional(sigma in permutation(4), n in 1usize..=2, seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let re = random::realization(&mut g, None, sigma.len(), n, 2, true).unwrap();
        let l = fiedler_pencil(&sigma, &re, Path::Both).unwrap().to_c64();
        let s = system_matrix(&re.to_c64()).poly;
        let p = det_proportionality(&l.as_poly(), &s, &Tolerances::default()).unwrap();
        prop_assert!(p.deviation <= 1e-8, "deviation {}", p.deviation);
        prop_assert!((p.c.norm() - 1.0).abs() < 1e-8, "c = {}", p.c);
    }

    #[test]
    fn gfpr_paths_agree(m in 1usize..=4, n in 1usize..=2, seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let h = g.random_range(0..m);
        let recipes = gfpr_recipes(m, h, 1);
        let k = g.random_range(0..recipes.len());
        let rec = assign(&mut g, &recipes[k], n);
        let re = random::realization(&mut g, None, m, n, 2, false).unwrap();
        let a = gfpr(&rec, &re, Path::Product).unwrap();
        let b = gfpr(&rec, &re, Path::Bordered).unwrap();
        prop_assert_eq!(a.x, b.x);
        prop_assert_eq!(a.y, b.y);
    }

    #[test]
    fn structured_outputs_are_exactly_structured(kind in kind(), m in 2usize..=6, seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let r = if needs_even_r(kind) { 2 } else { 1 };
        let re = random::realization(&mut g, Some(kind), m, 2, r, true).unwrap();
        let sl = structured_instance(&mut g, &re).unwrap();
        let f = sl.structured_form().unwrap();
        prop_assert!(structure_check(&f.as_poly(), sl.tag, 0.0).is_ok());
    }

    #[test]
    fn quasi_identity_is_unique(kind in kind(), m in 2usize..=6, seed in any::<u64>()) {
        prop_assume!(kind != RealizationKind::Symmetric);
        let mut g = random::rng(seed);
        let r = if needs_even_r(kind) { 2 } else { 1 };
        let re = random::realization(&mut g, Some(kind), m, 2, r, true).unwrap();
        let sl = structured_instance(&mut g, &re).unwrap();
        let raw = gfpr(&sl.recipe, &re, Path::Both).unwrap();
        let raw = if sl.through_j { raw.left_mul(&big_j(raw.m * raw.n, raw.r).unwrap()) } else { raw };
        let q = find_quasi_identity(&raw, sl.tag, 0.0).unwrap();
        prop_assert_eq!(q.scaled(sl.q.sign(1)), sl.q);
    }

    #[test]
    fn j_form_linearizes_the_premultiplied_system(skew in any::<bool>(), m in 2usize..=4, seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let kind = if skew { RealizationKind::SkewHamiltonian } else { RealizationKind::Hamiltonian };
        let re = random::realization(&mut g, Some(kind), m, 2, 2, true).unwrap();
        let sl = structured_instance(&mut g, &re).unwrap();
        let jre = structured::j_premultiplied(&re).unwrap();
        let f = sl.structured_form().unwrap();
        let s = system_matrix(&jre.to_c64()).poly;
        prop_assert!(structure_check(&s, sl.tag, 0.0).is_ok());
        let p = det_proportionality(&f.to_c64().as_poly(), &s, &Tolerances::default()).unwrap();
        prop_assert!(p.deviation <= 1e-8, "deviation {}", p.deviation);
    }

    #[test]
    fn pencil_json_round_trip(sigma in permutation(4), n in 1usize..=2, seed in any::<u64>()) {
        let re = random::realization(&mut random::rng(seed), None, sigma.len(), n, 2, false).unwrap();
        let l = fiedler_pencil(&sigma, &re, Path::Both).unwrap();
        let text = json::render(&PencilJson::of(&l), false).unwrap();
        let back: PencilJson = json::parse(&text).unwrap();
        let l2 = back.to_exact().unwrap().unwrap();
        prop_assert_eq!(l2.x, l.x);
        prop_assert_eq!(l2.y, l.y);
        prop_assert_eq!(json::render(&back, false).unwrap(), text);
    }
}
