use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use eqindex::assembler::{assemble_index, beta_term, FineEntry, IndexData, IndexDataSpec, Mode, StratumRecord};
use eqindex::gcomplex::ComplexSpec;
use eqindex::grouprep::{GroupLimits, GroupSpec};
use eqindex::lefschetz::equivariant_multiplicities;
use eqindex::strataformula::verify_strata_vs_oracle;
use num::{BigInt, BigRational};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn entry(n_b: u64, rank: u64, eta: BigRational, h: u64, a: BigRational) -> FineEntry {
    FineEntry { n_b, rank, eta, h, integrals: BTreeMap::from([(0, a)]) }
}

fn record(entries: Vec<FineEntry>) -> StratumRecord {
    StratumRecord { id: "S0".into(), entries }
}

#[test]
fn worked_beta() {
    let r = record(vec![entry(1, 1, q(1, 2), 1, q(2, 1))]);
    assert_eq!(beta_term(&r, 0, 1, Mode::Equivariant).unwrap(), q(1, 2));
    assert_eq!(beta_term(&r, 0, 1, Mode::Basic).unwrap(), q(1, 2));
    let zero = record(vec![entry(3, 2, q(0, 1), 0, q(7, 3))]);
    assert_eq!(beta_term(&zero, 0, 2, Mode::Equivariant).unwrap(), q(0, 1));
}

#[test]
fn two_entries_with_different_denominators() {
    let r = record(vec![entry(2, 3, q(1, 3), 0, q(5, 1)), entry(1, 4, q(-1, 2), 2, q(1, 7))]);
    // 1/4 · ((-1/3)·5/6 + (5/2)·(1/7)/4) = 1/4 · (-140/504 + 45/504)
    let (num, den): (i64, i64) = (-140 + 45, 504 * 4);
    assert_eq!(beta_term(&r, 0, 2, Mode::Equivariant).unwrap(), q(num, den));
}

#[test]
fn invalid_entries() {
    let r = record(vec![entry(0, 1, q(0, 1), 0, q(1, 1))]);
    assert!(beta_term(&r, 0, 1, Mode::Equivariant).is_err());
    let r = record(vec![entry(1, 1, q(0, 1), 0, q(1, 1))]);
    assert!(beta_term(&r, 1, 1, Mode::Equivariant).is_err());
    assert!(beta_term(&r, 0, 2, Mode::Basic).is_err());
}

#[test]
fn assembling() {
    let data = IndexData {
        mode: Mode::Equivariant,
        dims: BTreeMap::from([(0, 1)]),
        principal: BTreeMap::from([(0, q(3, 1))]),
        strata: vec![],
    };
    assert_eq!(assemble_index(&data, 0).unwrap().total, q(3, 1));
    assert!(assemble_index(&data, 1).is_err());

    let text = r#"{"mode": "equivariant", "dims": {"0": 1}, "principal": {"0": 0},
        "strata": [{"id": "S0", "entries": [{"n_b": 1, "rank": 1, "eta": [1, 2], "h": 1, "integrals": {"0": 2}}]}]}"#;
    let data = IndexDataSpec::from_json(text).unwrap().build().unwrap();
    let b = assemble_index(&data, 0).unwrap();
    assert_eq!(b.total, q(1, 2));
    assert!(b.warning.is_some());

    let basic = text.replace("equivariant", "basic").replace(r#""dims": {"0": 1}"#, r#""dims": {"0": 2}"#);
    assert!(IndexDataSpec::from_json(&basic).unwrap().build().is_err());
}

fn corpus(name: &str) -> (eqindex::gcomplex::GComplex, eqindex::grouprep::CharacterTable) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    let (group, table) = GroupSpec::from_json(&fs::read_to_string(dir.join("group.json")).unwrap())
        .unwrap()
        .build(GroupLimits::default())
        .unwrap();
    let x = ComplexSpec::from_json(&fs::read_to_string(dir.join("complex.json")).unwrap())
        .unwrap()
        .build(&group)
        .unwrap()
        .regularize()
        .unwrap();
    (x, table)
}

#[test]
fn de_rham_round_trip() {
    for name in ["octahedron-rotation2", "octahedron-klein4", "torus-involution", "octahedron-antipodal"] {
        let (x, table) = corpus(name);
        let report = verify_strata_vs_oracle(&x, &table).unwrap();
        let degrees: Vec<u64> = table.characters().iter().map(|c| c.degree()).collect();
        let data = IndexData::from_breakdowns(&report.breakdowns, &degrees).unwrap();
        let reparsed = IndexDataSpec::from_json(&serde_json::to_string(&data.to_spec()).unwrap()).unwrap().build().unwrap();
        assert_eq!(reparsed, data);
        let oracle = equivariant_multiplicities(&x, &table).unwrap();
        for rho in 0..table.len() {
            let b = assemble_index(&data, rho).unwrap();
            assert_eq!(b.total, q(oracle.multiplicities[rho], 1), "{name} ρ = {rho}");
            assert!(b.warning.is_none());
        }
        let mut perturbed = data.clone();
        if let Some(s) = perturbed.strata.first_mut() {
            *s.entries[0].integrals.get_mut(&0).unwrap() += q(1, 3);
            assert!(assemble_index(&perturbed, 0).unwrap().warning.is_some());
        }
    }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..50, 1i64..12).prop_map(|(n, d)| q(n, d))
}

fn fine_entry() -> impl Strategy<Value = FineEntry> {
    (1u64..5, 1u64..5, rational(), 0u64..4, rational()).prop_map(|(n_b, rank, eta, h, a)| entry(n_b, rank, eta, h, a))
}

proptest! {
    #[test]
    fn splitting_an_entry_leaves_beta_unchanged(e in fine_entry(), part in rational(), dim in 1u64..4) {
        let whole = record(vec![e.clone()]);
        let mut first = e.clone();
        let mut second = e.clone();
        first.integrals.insert(0, part.clone());
        second.integrals.insert(0, &e.integrals[&0] - &part);
        let split = record(vec![first, second]);
        prop_assert_eq!(
            beta_term(&whole, 0, dim, Mode::Equivariant).unwrap(),
            beta_term(&split, 0, dim, Mode::Equivariant).unwrap()
        );
    }

    #[test]
    fn assembly_is_linear_in_the_integrands(
        entries in proptest::collection::vec(fine_entry(), 0..4),
        shifts in proptest::collection::vec(rational(), 4),
        a0 in rational(),
        b0 in rational(),
        dim in 1u64..4,
    ) {
        let make = |p: BigRational, es: Vec<FineEntry>| IndexData {
            mode: Mode::Equivariant,
            dims: BTreeMap::from([(0, dim)]),
            principal: BTreeMap::from([(0, p)]),
            strata: vec![record(es)],
        };
        let d1 = make(a0, entries.clone());
        let shifted: Vec<FineEntry> = entries
            .iter()
            .zip(&shifts)
            .map(|(e, s)| FineEntry { integrals: BTreeMap::from([(0, s.clone())]), ..e.clone() })
            .collect();
        let d2 = make(b0, shifted);
        let sum = d1.add(&d2).unwrap();
        prop_assert_eq!(
            assemble_index(&sum, 0).unwrap().total,
            assemble_index(&d1, 0).unwrap().total + assemble_index(&d2, 0).unwrap().total
        );
    }

    #[test]
    fn basic_and_equivariant_agree_in_dimension_one(entries in proptest::collection::vec(fine_entry(), 0..4)) {
        let r = record(entries);
        prop_assert_eq!(beta_term(&r, 0, 1, Mode::Basic).unwrap(), beta_term(&r, 0, 1, Mode::Equivariant).unwrap());
    }
}
