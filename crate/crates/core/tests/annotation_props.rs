mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::{seven_terms, id, instance, random_dag, random_subset};
use govsg_core::annotations::{binary_vector, load_annotations, true_path_closure, AnnotationRow};
use govsg_core::TermId;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn seven_terms_closure() {
    let g = seven_terms();
    let (ds, _) = load_annotations("worm", &[AnnotationRow::new("g1", "GO:0009894")], g.clone()).unwrap();
    let expected: BTreeSet<TermId> = ["GO:0009894", "GO:0019222", "GO:0050789"].map(id).into();
    assert_eq!(ds.instances()[0].annotations, expected);
    let direct = true_path_closure(&[id("GO:0009894")].into(), &g).unwrap();
    assert!(direct.contains(&id("GO:0050789")));
}

#[test]
fn random_leaf_annotations_match_bfs_union() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let dag = random_dag(&mut rng, 12, 0.3);
        let g = Arc::new(dag.graph());
        let leaves = dag.leaves();
        let mut rows = Vec::new();
        let mut expected = Vec::new();
        for gene in 0..20 {
            let picks: BTreeSet<usize> = (0..rng.gen_range(1..=3))
                .map(|_| *leaves.choose(&mut rng).unwrap())
                .collect();
            let mut closure: BTreeSet<TermId> = BTreeSet::new();
            for &p in &picks {
                rows.push(AnnotationRow::new(&format!("g{gene:02}"), dag.ids[p].as_str()));
                closure.insert(dag.ids[p].clone());
                closure.extend(dag.bfs_ancestor_ids(p));
            }
            expected.push(closure);
        }
        let (ds, report) = load_annotations("synthetic", &rows, g.clone()).unwrap();
        assert!(report.is_clean());
        for (inst, exp) in ds.instances().iter().zip(&expected) {
            assert_eq!(&inst.annotations, exp);
            for t in &inst.annotations {
                assert!(g.ancestors(t).unwrap().is_subset(&inst.annotations));
            }
        }
    }
}

/// Idempotence, monotonicity and vector consistency over 1,000 instances.
#[test]
fn closure_properties_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 1000 {
        let n = rng.gen_range(2..=12);
        let dag = random_dag(&mut rng, n, 0.3);
        let g = dag.graph();
        let universe: Vec<TermId> = g.topo_order().cloned().collect();
        for _ in 0..20 {
            let n = dag.ids.len();
            let small = random_subset(&mut rng, n, 0.3);
            let mut large = small.clone();
            large.extend(random_subset(&mut rng, n, 0.3));
            let to_ids = |s: &BTreeSet<usize>| s.iter().map(|&i| dag.ids[i].clone()).collect::<BTreeSet<_>>();

            let c_small = true_path_closure(&to_ids(&small), &g).unwrap();
            let c_large = true_path_closure(&to_ids(&large), &g).unwrap();
            assert_eq!(true_path_closure(&c_small, &g).unwrap(), c_small);
            assert!(c_small.is_subset(&c_large));
            assert_eq!(c_small, to_ids(&dag.fixed_point_closure(&small)));

            let inst = instance("g", c_small.clone());
            let vector = binary_vector(&inst, &universe);
            assert_eq!(vector.iter().filter(|&&b| b).count(), c_small.len());
            for (child, parents) in dag.parents.iter().enumerate() {
                let ci = universe.iter().position(|t| *t == dag.ids[child]).unwrap();
                for &p in parents {
                    let pi = universe.iter().position(|t| *t == dag.ids[p]).unwrap();
                    assert!(!vector[ci] || vector[pi]);
                }
            }
            checked += 1;
        }
    }
}

proptest! {
    #[test]
    fn load_is_order_insensitive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dag = random_dag(&mut rng, 10, 0.3);
        let g = Arc::new(dag.graph());
        let mut rows: Vec<AnnotationRow> = (0..30)
            .map(|k| {
                let t = &dag.ids[rng.gen_range(0..dag.ids.len())];
                AnnotationRow::new(&format!("g{}", k % 7), t.as_str())
            })
            .collect();
        let (a, _) = load_annotations("o", &rows, g.clone()).unwrap();
        rows.shuffle(&mut rng);
        let (b, _) = load_annotations("o", &rows, g).unwrap();
        prop_assert_eq!(a.instances(), b.instances());
        prop_assert_eq!(a.feature_universe(), b.feature_universe());
    }
}
