use std::collections::BTreeMap;

use eqindex::finedecomp::{
    canonical_isotropy_bundle, fine_decomposition, fixed_component_action, is_adapted, twist_irrep, BundleComponent,
    BundleData, BundleSpec,
};
use eqindex::gcomplex::{ComplexSpec, GComplex};
use eqindex::grouprep::{CharacterTable, FiniteGroup, Subgroup};
use eqindex::Error;

fn s3() -> FiniteGroup {
    FiniteGroup::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]], 100).unwrap()
}

fn id_of(g: &FiniteGroup, perm: &[usize]) -> usize {
    g.permutations().unwrap().iter().position(|p| p == perm).unwrap()
}

fn single(h: &Subgroup, m: &[(usize, u64)]) -> BundleData {
    let comp = BundleComponent { id: "a".into(), multiplicities: m.iter().copied().collect() };
    BundleData::new(h.clone(), vec![comp], &BTreeMap::new()).unwrap()
}

fn rotations(g: &FiniteGroup) -> Subgroup {
    Subgroup::generated_by(g, &[id_of(g, &[1, 2, 0])]).unwrap()
}

#[test]
fn twisting() {
    let g = s3();
    let h = rotations(&g);
    let b = single(&h, &[]);
    let t = b.isotropy_table();
    let reflection = id_of(&g, &[1, 0, 2]);
    let rotation = id_of(&g, &[1, 2, 0]);
    for sigma in t.characters() {
        assert_eq!(twist_irrep(&h, t, sigma, rotation).unwrap().index(), sigma.index());
    }
    assert_eq!(twist_irrep(&h, t, &t.characters()[0], reflection).unwrap().index(), Some(0));
    assert_eq!(twist_irrep(&h, t, &t.characters()[1], reflection).unwrap().index(), Some(2));
    assert_eq!(twist_irrep(&h, t, &t.characters()[2], reflection).unwrap().index(), Some(1));

    let k = Subgroup::generated_by(&g, &[reflection]).unwrap();
    let bk = single(&k, &[]);
    assert!(matches!(
        twist_irrep(&k, bk.isotropy_table(), &bk.isotropy_table().characters()[1], rotation),
        Err(Error::NotInNormalizer { .. })
    ));

    let c4 = FiniteGroup::cyclic(4);
    let h = Subgroup::generated_by(&c4, &[c4.pow(c4.generators()[0], 2)]).unwrap();
    let b = single(&h, &[]);
    for n in 0..4 {
        for sigma in b.isotropy_table().characters() {
            assert_eq!(twist_irrep(&h, b.isotropy_table(), sigma, n).unwrap().index(), sigma.index());
        }
    }
}

#[test]
fn decompositions() {
    let g = s3();
    let trivial = Subgroup::trivial(&g);
    let fine = fine_decomposition(&single(&trivial, &[(0, 3)]), 0).unwrap();
    assert_eq!(fine.len(), 1);
    assert_eq!(fine[0].rank, 3);

    let h = rotations(&g);
    let b = single(&h, &[(1, 1), (2, 1)]);
    let fine = fine_decomposition(&b, 0).unwrap();
    assert_eq!(fine.len(), 1);
    assert_eq!((fine[0].orbit.clone(), fine[0].n_b, fine[0].rank), (vec![1, 2], 2, 2));

    let b = single(&h, &[(0, 2), (1, 1), (2, 1)]);
    let fine = fine_decomposition(&b, 0).unwrap();
    assert_eq!(fine.len(), 2);
    assert_eq!(fine[0].orbit, [0]);
    assert_eq!(fine[1].orbit, [1, 2]);
    assert_eq!(fine.iter().map(|f| f.rank).sum::<u64>(), b.rank(0));

    let bad = single(&h, &[(1, 1)]);
    match fine_decomposition(&bad, 0) {
        Err(Error::EquivarianceViolation(witness)) => assert!(witness.contains("σ")),
        other => panic!("expected an equivariance violation, got {other:?}"),
    }
}

#[test]
fn decomposing_a_fine_component_is_idempotent() {
    let g = s3();
    let h = rotations(&g);
    let b = single(&h, &[(0, 2), (1, 1), (2, 1)]);
    for f in fine_decomposition(&b, 0).unwrap() {
        let own = b.with_multiplicities(vec![f.orbit.iter().map(|&s| (s, f.multiplicity)).collect()]).unwrap();
        assert_eq!(fine_decomposition(&own, 0).unwrap(), vec![f]);
    }
}

#[test]
fn adapted_bundles() {
    let g = s3();
    let h = rotations(&g);
    let b = single(&h, &[(1, 1), (2, 1)]);
    let e = fine_decomposition(&b, 0).unwrap().remove(0);
    assert!(is_adapted(&b, &e).unwrap());
    assert!(is_adapted(&single(&h, &[(1, 5), (2, 5)]), &e).unwrap());
    assert!(!is_adapted(&single(&h, &[(0, 1), (1, 1), (2, 1)]), &e).unwrap());

    let table = CharacterTable::compute(&g).unwrap();
    let w = canonical_isotropy_bundle(&table, &b, 0, 1).unwrap();
    assert!(is_adapted(&w.bundle, &e).unwrap());
}

#[test]
fn canonical_bundles() {
    let g = s3();
    let table = CharacterTable::compute(&g).unwrap();
    let h = rotations(&g);
    let b = single(&h, &[]);
    let w = canonical_isotropy_bundle(&table, &b, 0, 1).unwrap();
    assert_eq!(w.j0, 2);
    assert_eq!(w.character.degree(), 2);
    assert_eq!((w.fine.orbit.clone(), w.fine.rank, w.fine.n_b), (vec![1, 2], 2, 2));

    let whole = Subgroup::whole(&g);
    let b = single(&whole, &[]);
    for sigma in 0..3 {
        let w = canonical_isotropy_bundle(&table, &b, 0, sigma).unwrap();
        assert_eq!(w.j0, sigma);
        assert_eq!(w.fine.n_b, 1);
        assert_eq!(w.fine.rank, table.characters()[sigma].degree());
    }

    let c2 = FiniteGroup::cyclic(2);
    let t2 = CharacterTable::compute(&c2).unwrap();
    let w = canonical_isotropy_bundle(&t2, &single(&Subgroup::trivial(&c2), &[]), 0, 0).unwrap();
    assert_eq!((w.j0, w.fine.rank), (0, 1));
}

#[test]
fn bundle_files() {
    let c2 = FiniteGroup::cyclic(2);
    let text = r#"{"H": {"elements": [0]},
        "components": [{"id": "a", "multiplicities": {"0": 2}}, {"id": "b", "multiplicities": {"0": 2}}],
        "component_action": {"1": {"a": "b", "b": "a"}}}"#;
    let b = BundleSpec::from_json(text).unwrap().build(&c2).unwrap();
    assert_eq!(b.act(1, 0).unwrap(), 1);
    assert_eq!(b.component_stabilizer(0).order(), 1);
    assert_eq!(fine_decomposition(&b, 1).unwrap()[0].rank, 2);

    let uneven = text.replace(r#"{"0": 2}}]"#, r#"{"0": 1}}]"#);
    let b = BundleSpec::from_json(&uneven).unwrap().build(&c2).unwrap();
    assert!(matches!(fine_decomposition(&b, 0), Err(Error::EquivarianceViolation(_))));

    let unknown = r#"{"H": {"elements": [0]}, "components": [], "extra": 1}"#;
    assert!(matches!(BundleSpec::from_json(unknown), Err(Error::Parse(_))));
}

#[test]
fn component_action_from_fixed_set() {
    let spec: ComplexSpec = serde_json::from_str(
        r#"{"vertices": ["+x","-x","+y","-y","+z","-z"],
            "maximal_simplices": [["+x","+y","+z"],["+x","+y","-z"],["+x","-y","+z"],["+x","-y","-z"],
                                  ["-x","+y","+z"],["-x","+y","-z"],["-x","-y","+z"],["-x","-y","-z"]],
            "action": {"generator_images": [["+y","-y","-x","+x","+z","-z"]]}}"#,
    )
    .unwrap();
    let c4 = FiniteGroup::cyclic(4);
    let x: GComplex = spec.build(&c4).unwrap().regularize().unwrap();
    let h = Subgroup::generated_by(&c4, &[c4.pow(c4.generators()[0], 2)]).unwrap();
    let (ids, action) = fixed_component_action(&x, &h).unwrap();
    assert_eq!(ids, ["c0", "c1"]);
    assert!(action.values().all(|p| p == &[0, 1]));
}
