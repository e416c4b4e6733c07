use hilbert_core::surfaces::{validate, Catalog, Diagnostic};
use hilbert_core::{Error, StructuralClass, SurfaceInvariants};
use proptest::prelude::*;
use std::collections::BTreeMap;

#[test]
fn builtin_rows_validate() {
    let cat = Catalog::builtin();
    assert!(cat.names().count() >= 12);
    for s in cat.sample_instances(3).unwrap() {
        assert!(validate(&s).is_empty(), "{}: {:?}", s.label(), validate(&s));
        assert_eq!(s.chi, 2 * s.b0 as i64 - 2 * s.b1 as i64 + s.b2 as i64, "{}", s.label());
    }
}

#[test]
fn table_values() {
    let get = |n: &str| Catalog::builtin().lookup(n, &BTreeMap::new()).unwrap();
    let k3 = get("k3");
    assert_eq!((k3.b1, k3.b2, k3.chi, k3.structural_class), (0, 22, 24, StructuralClass::K3));
    let e = get("enriques");
    assert_eq!((e.b1, e.b2, e.chi), (0, 10, 12));
    let a = get("abelian");
    assert_eq!((a.b1, a.b2, a.chi, a.hodge_data()), (4, 6, 0, Some((2, 1))));
}

#[test]
fn family_parameters_are_checked() {
    let cat = Catalog::builtin();
    assert!(cat.lookup("ruled", &BTreeMap::new()).is_err());
    assert!(cat.lookup("del_pezzo", &BTreeMap::from([("d".into(), 10)])).is_err());
    let dp = cat.lookup("del_pezzo", &BTreeMap::from([("d".into(), 3)])).unwrap();
    assert_eq!((dp.b2, dp.chi), (7, 9));
    assert!(matches!(cat.lookup("nope", &BTreeMap::new()), Err(Error::UnknownSurface(_))));
}

#[test]
fn inconsistent_records_are_diagnosed() {
    let mut s = SurfaceInvariants::synthetic(1, 2, 3);
    s.chi = 7;
    s.h10 = Some(3);
    let d = validate(&s);
    assert!(d.iter().any(|x| matches!(x, Diagnostic::ChiMismatch { .. })));
    assert!(d.iter().any(|x| matches!(x, Diagnostic::B1NotTwiceH10 { .. })));
    assert!(matches!(s.validated(), Err(Error::Validation { .. })));
}

#[test]
fn catalog_files_parse() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    std::fs::write(&path, "schema_version = 1\n[[surface]]\nname = \"toy\"\nb0 = 1\nb1 = 0\nb2 = 1\nchi = 3\n").unwrap();
    let cat = Catalog::from_path(&path).unwrap();
    assert_eq!(cat.names().collect::<Vec<_>>(), ["toy"]);
    assert!(Catalog::parse("schema_version = 99\n").is_err());
    assert!(Catalog::parse("not toml").is_err());
}

proptest! {
    #[test]
    fn surface_toml_round_trips(b0 in 1u32..4, h10 in 0u32..5, h20 in 0u32..4, extra in 0u32..10) {
        let s = SurfaceInvariants::synthetic(b0, 2 * h10, 2 * h20 + 1 + extra).with_hodge(h10, h20);
        prop_assert_eq!(SurfaceInvariants::from_toml(&s.to_toml()).unwrap(), s);
    }
}
