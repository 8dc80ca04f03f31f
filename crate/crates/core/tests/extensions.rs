use switchboard::amalg::is_freely_amalgamated;
use switchboard::generic::{free_copy, random_labeled, OneTypeSpec};
use switchboard::types::qf_type;

#[test]
fn random_structures_on_three_points_have_no_order() {
    for seed in 0..50 {
        let l = random_labeled(3, seed, 1.0);
        assert_eq!(l.base().order_size(), 0);
        assert!(l.is_valid());
    }
}

#[test]
fn random_structures_validate() {
    for seed in 0..1000u64 {
        let n = (seed % 11) as usize;
        let d = (seed % 7) as f64 / 6.0;
        assert!(random_labeled(n, seed, d).is_valid(), "n={n} seed={seed}");
    }
}

#[test]
fn free_copy_of_an_existing_type() {
    for seed in 0..60u64 {
        let m = random_labeled(6, seed, 0.35);
        let (base, a, a2) = (vec![2, 3, 5], 0, 4);
        let mut ids = base.clone();
        ids.push(a2);
        let spec = OneTypeSpec::new(m.induced(&ids).unwrap(), base.len()).unwrap();
        let (out, e2) = free_copy(&m, &base, a, &spec).unwrap();
        assert_eq!(e2, m.n());
        assert!(out.is_valid());
        assert_eq!(qf_type(&out, &[e2], &base).unwrap(), qf_type(&m, &[a2], &base).unwrap());
        assert!(is_freely_amalgamated(&out, &base, a, e2).unwrap(), "seed {seed}");
        let old: Vec<usize> = (0..m.n()).collect();
        assert!(out.induced(&old).unwrap().same_facts(&m));
    }
}

#[test]
fn free_copy_rejects_a_foreign_base() {
    let m = random_labeled(5, 7, 0.5);
    let other = random_labeled(3, 8, 0.5);
    let spec = OneTypeSpec::new(other, 2).unwrap();
    let agrees = m.induced(&[1, 2]).unwrap().same_facts(&spec.structure.induced(&[0, 1]).unwrap());
    assert_eq!(free_copy(&m, &[1, 2], 0, &spec).is_ok(), agrees);
    assert!(free_copy(&m, &[1, 2, 3], 0, &spec).is_err());
}
