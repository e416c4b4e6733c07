mod common;

use common::{betti_tuple, big};
use hilbert_core::decision::{aut_shape, decide, InvariantKind, Outcome, Rule, Verdict};
use hilbert_core::invariants::poincare_polynomial_tuple;
use hilbert_core::partitions::{enumerate_partitions, majorizes, partitions_by_length};
use hilbert_core::{Catalog, Error, Majorization, Partition, StructuralClass, SurfaceInvariants};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn named(name: &str) -> SurfaceInvariants {
    Catalog::builtin().lookup(name, &BTreeMap::new()).unwrap()
}

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn surfaces() -> Vec<SurfaceInvariants> {
    let mut out = Catalog::builtin().sample_instances(1).unwrap();
    out.push(SurfaceInvariants::synthetic(2, 0, 3));
    out.push(SurfaceInvariants::synthetic(3, 2, 1));
    out
}

/// Orients a same-length pair so the first has the smaller part at the
/// first index where they differ.
fn orient<'a>(x: &'a Partition, y: &'a Partition) -> (&'a Partition, &'a Partition) {
    let (u, v) = x.parts().iter().zip(y.parts()).find(|(u, v)| u != v).unwrap();
    if u < v { (x, y) } else { (y, x) }
}

fn pair_strategy() -> impl Strategy<Value = (usize, Partition, Partition)> {
    (0..surfaces().len(), 2u32..=8).prop_flat_map(|(si, n)| {
        let all = enumerate_partitions(n, None).unwrap();
        let len = all.len();
        (Just(si), Just(all), 0..len, 0..len)
            .prop_map(|(si, all, i, j)| (si, all[i].clone(), all[j].clone()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decide_is_symmetric((si, a, b) in pair_strategy()) {
        let s = &surfaces()[si];
        let ab = decide(s, &a, &b).unwrap();
        let ba = decide(s, &b, &a).unwrap();
        prop_assert_eq!(ab.outcome, ba.outcome);
        prop_assert_eq!(&ab.rules_fired, &ba.rules_fired);
        prop_assert_eq!(ab.witness.as_ref().map(|w| w.swapped()), ba.witness);
    }

    #[test]
    fn decide_is_reflexive((si, a, _b) in pair_strategy()) {
        let v = decide(&surfaces()[si], &a, &a).unwrap();
        prop_assert_eq!(v.outcome, Outcome::Isomorphic);
        prop_assert!(v.witness.is_none());
        prop_assert!(v.rules_fired.is_empty());
    }

    #[test]
    fn verdict_json_round_trips((si, a, b) in pair_strategy()) {
        let v = decide(&surfaces()[si], &a, &b).unwrap();
        prop_assert_eq!(Verdict::from_json(&v.to_json()).unwrap(), v);
    }

    #[test]
    fn witnesses_are_genuine((si, a, b) in pair_strategy()) {
        let s = &surfaces()[si];
        if let Some(w) = decide(s, &a, &b).unwrap().witness {
            prop_assert_ne!(&w.value_a, &w.value_b);
            if w.invariant == InvariantKind::Betti {
                let i = w.index.unwrap() as usize;
                prop_assert_eq!(&betti_tuple(s.b0, s.b1, s.b2, a.parts())[i], &w.value_a);
                prop_assert_eq!(&betti_tuple(s.b0, s.b1, s.b2, b.parts())[i], &w.value_b);
            }
        }
    }
}

#[test]
fn disconnected_surfaces_separate_same_length_pairs() {
    for s in surfaces().into_iter().filter(|s| s.b0 > 1) {
        for n in 4..=10 {
            for (_, group) in partitions_by_length(n).unwrap() {
                for i in 0..group.len() {
                    for j in i + 1..group.len() {
                        let (a, b) = orient(&group[i], &group[j]);
                        let v = decide(&s, a, b).unwrap();
                        assert_eq!(v.outcome, Outcome::NonIsomorphic, "{} {a} {b}", s.label());
                        assert!(v.fired(Rule::SameLengthDisconnected));
                        let b0a = poincare_polynomial_tuple(&s, a).unwrap().betti(0);
                        let b0b = poincare_polynomial_tuple(&s, b).unwrap().betti(0);
                        assert!(b0a < b0b, "{} {a} {b}: b0 {b0a} vs {b0b}", s.label());
                    }
                }
            }
        }
    }
}

#[test]
fn euler_witness_grows_along_majorization() {
    for s in surfaces().into_iter().filter(|s| s.chi >= 3 && s.structural_class == StructuralClass::Generic) {
        for n in 4..=10 {
            for (_, group) in partitions_by_length(n).unwrap() {
                for a in &group {
                    for b in &group {
                        if majorizes(b, a).unwrap() != Majorization::StrictlyMajorizes {
                            continue;
                        }
                        let v = decide(&s, a, b).unwrap();
                        assert!(v.fired(Rule::MajorizationEuler));
                        let w = v.witness.expect("Euler witness");
                        assert_eq!(w.invariant, InvariantKind::Euler, "{} {a} {b}", s.label());
                        assert!(w.value_b > w.value_a, "{} {a} {b}", s.label());
                    }
                }
            }
        }
    }
}

#[test]
fn second_betti_gap_matches_unit_part_count() {
    let simply_connected: Vec<_> = surfaces().into_iter().filter(|s| s.b0 == 1 && s.b1 == 0).collect();
    assert!(!simply_connected.is_empty());
    for s in simply_connected {
        for n in 2..=8 {
            let by_len = partitions_by_length(n).unwrap();
            for (&r, shorter) in &by_len {
                for (&len_b, longer) in by_len.range(r + 1..) {
                    for a in shorter {
                        for b in longer {
                            let (k, l) = (a.ones() as i64, b.ones() as i64);
                            let gap = (len_b - r) as i64 * (s.b2 as i64 + 1);
                            if k < l && l - k == gap {
                                continue;
                            }
                            let v = decide(&s, a, b).unwrap();
                            assert!(v.fired(Rule::DiffLengthUnitParts), "{} {a} {b}", s.label());
                            let b2a = &betti_tuple(s.b0, s.b1, s.b2, a.parts())[2];
                            let b2b = &betti_tuple(s.b0, s.b1, s.b2, b.parts())[2];
                            let expected = big(gap + k - l);
                            assert_eq!(b2b - b2a, expected, "{} {a} {b}", s.label());
                            assert_ne!(expected, big(0));
                            assert_eq!(v.outcome, Outcome::NonIsomorphic);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn bielliptic_fixture_is_separated_by_second_betti_number() {
    let s = named("bielliptic");
    let (a, b) = (p(&[1, 4, 5]), p(&[2, 2, 6]));
    let v = decide(&s, &a, &b).unwrap();
    assert_eq!(v.outcome, Outcome::NonIsomorphic);
    let w = v.witness.unwrap();
    assert_eq!((w.invariant, w.index), (InvariantKind::Betti, Some(2)));
    let (oa, ob) = (betti_tuple(1, 2, 2, a.parts()), betti_tuple(1, 2, 2, b.parts()));
    assert_eq!(oa[..2], ob[..2]);
    assert_eq!((w.value_a, w.value_b), (oa[2].clone(), ob[2].clone()));
    assert_eq!((oa[2].clone(), ob[2].clone()), (big(22), big(24)));
}

#[test]
fn k3_pairs_cite_the_structural_rule() {
    let v = decide(&named("k3"), &p(&[1, 3]), &p(&[2, 2])).unwrap();
    assert_eq!(v.outcome, Outcome::NonIsomorphic);
    assert!(v.fired(Rule::K3Structural));
}

#[test]
fn kummer_mode_applies_only_the_structural_rule() {
    let mut a = named("abelian");
    a.structural_class = StructuralClass::AbelianForKummer;
    let v = decide(&a, &p(&[1, 3]), &p(&[2, 2])).unwrap();
    assert_eq!(v.outcome, Outcome::NonIsomorphic);
    let ids: Vec<&str> = v.rules_fired.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["kummer-structural"]);
    assert!(v.witness.is_none());
}

#[test]
fn different_sizes_are_rejected() {
    let r = decide(&named("k3"), &p(&[1, 2]), &p(&[4]));
    assert!(matches!(r, Err(Error::DimensionMismatch { a: 3, b: 4 })));
}

#[test]
fn rule_ids_round_trip() {
    for r in Rule::ALL {
        assert_eq!(Rule::from_id(r.id()), Some(r));
        assert!(!r.citation().is_empty());
    }
    assert_eq!(Rule::from_id("nope"), None);
}

#[test]
fn aut_shapes() {
    assert_eq!(aut_shape(&p(&[5])).render(), "Aut(S^[5])");
    assert_eq!(aut_shape(&p(&[2, 2])).render(), "Aut(S^[2])^2 ⋊ S_2");
    let shape = aut_shape(&p(&[1, 1, 2, 3, 3, 3]));
    let runs: Vec<(u32, u32)> = shape.factors.iter().map(|f| (f.part, f.multiplicity)).collect();
    assert_eq!(runs, [(1, 2), (2, 1), (3, 3)]);
    assert_eq!(shape.render(), "Aut(S^[1])^2 ⋊ S_2 × Aut(S^[2]) × Aut(S^[3])^3 ⋊ S_3");
}
