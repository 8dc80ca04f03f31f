use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use switchboard::board::label_canonical;
use switchboard::order::{chain_switchboard, edge_poset, parse_formula, phi_poset, FinitePoset};

// Longest path ending at each node, by enumerating every path.
fn longest_paths(n: usize, pairs: &BTreeSet<(usize, usize)>) -> Vec<usize> {
    fn walk(node: usize, len: usize, n: usize, pairs: &BTreeSet<(usize, usize)>, best: &mut [usize]) {
        best[node] = best[node].max(len);
        for next in 0..n {
            if pairs.contains(&(node, next)) {
                walk(next, len + 1, n, pairs, best);
            }
        }
    }
    let mut best = vec![0; n];
    for start in 0..n {
        walk(start, 0, n, pairs, &mut best);
    }
    best
}

fn random_closed_dag(rng: &mut ChaCha8Rng) -> (usize, BTreeSet<(usize, usize)>) {
    let n = rng.gen_range(0..=10);
    let mut pairs = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.25) {
                pairs.insert((i, j));
            }
        }
    }
    loop {
        let extra: Vec<(usize, usize)> = pairs
            .iter()
            .flat_map(|&(a, b)| pairs.iter().filter(move |&&(c, _)| c == b).map(move |&(_, d)| (a, d)))
            .filter(|p| !pairs.contains(p))
            .collect();
        if extra.is_empty() {
            break;
        }
        pairs.extend(extra);
    }
    (n, pairs)
}

#[test]
fn heights_match_longest_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let (n, pairs) = random_closed_dag(&mut rng);
        let p = FinitePoset::new((0..n).collect(), pairs.iter().copied()).unwrap();
        let h = p.heights().unwrap();
        let oracle = longest_paths(n, &pairs);
        for (k, v) in &h.of {
            assert_eq!(*v, oracle[*k]);
        }
        assert_eq!(h.height, oracle.iter().max().map_or(0, |m| m + 1));
        for (a, b) in &pairs {
            assert!(h.of[a] < h.of[b]);
        }
    }
}

#[test]
fn chain_heights() {
    for k in 0..=10 {
        assert_eq!(edge_poset(&chain_switchboard(k)).unwrap().heights().unwrap().height, k);
    }
}

#[test]
fn phi_sets_on_the_short_chain() {
    let m = label_canonical(&chain_switchboard(2)).unwrap();
    let f = parse_formula("lt(x1,x2,y1,y2)").unwrap();
    let p = phi_poset(&m, &f, &["x1", "x2"], &["y1", "y2"]).unwrap();
    assert_eq!(p.poset.carrier().len(), 16);
    p.poset.validate().unwrap();
    assert_eq!(p.poset.heights().unwrap().height, 2);
    let text = p.poset.to_text();
    assert!(text.starts_with("node (0,0)\nnode (0,1)\n"));
    assert!(text.contains("lt (0,1) (2,3)\n"));
}
