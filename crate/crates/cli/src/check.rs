//! Property suites behind `swb check`. Each suite is deterministic for a
//! given seed and reports the first counterexample it meets.

use switchboard::amalg::{free_amalgam_one_point, is_freely_amalgamated};
use switchboard::apsearch::search_failures;
use switchboard::generic::{random_labeled, random_two_type, witness_down, witness_up};
use switchboard::labeling::{enumerate_labelings, EnumerationCap};
use switchboard::order::{chain_switchboard, edge_poset, parse_formula};
use switchboard::triangle::{from_triangle, to_triangle};
use switchboard::types::{
    build_core_sequence, check_core_conclusions, is_distinguished, is_half_symmetric, same_one_type, two_stage_symmetry,
};
use switchboard::{Edge, Switchboard};

pub struct SuiteResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: Option<String>,
}

type Outcome = Result<(), String>;
type Suite = (&'static str, fn(u64) -> Outcome);

pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    let suites: [Suite; 9] = [
        ("labelings", labelings),
        ("triangle-roundtrip", triangle_roundtrip),
        ("free-amalgam", free_amalgam),
        ("witnesses", witnesses),
        ("distinguished-half-symmetric", distinguished_half_symmetric),
        ("core-sequence", core_sequence),
        ("heights", heights),
        ("formula-roundtrip", formula_roundtrip),
        ("ap-failure", ap_failure),
    ];
    suites
        .iter()
        .map(|&(name, f)| {
            let r = f(seed);
            SuiteResult { name, pass: r.is_ok(), detail: r.err() }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn labelings(_: u64) -> Outcome {
    let n = enumerate_labelings(&Switchboard::empty(3), EnumerationCap::default()).map_err(|e| e.to_string())?.len();
    ensure(n == 8, || format!("3-element switchboard has {n} labelings"))
}

fn triangle_roundtrip(seed: u64) -> Outcome {
    for i in 0..100 {
        let l = random_labeled(2 + (i % 7) as usize, seed.wrapping_add(i), 0.3);
        let back = to_triangle(&l).and_then(|t| from_triangle(&t)).map_err(|e| e.to_string())?;
        ensure(back == l, || format!("round trip changed sample {i}"))?;
    }
    Ok(())
}

fn free_amalgam(seed: u64) -> Outcome {
    for i in 0..100u64 {
        let k = (i % 5) as usize;
        let a1 = random_labeled(k + 1, seed.wrapping_mul(31).wrapping_add(i), 0.4);
        // A second extension of the same base: double a1 and keep the copy.
        let base = a1.induced(&(0..k).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
        let a2 = a1.clone();
        let m = free_amalgam_one_point(&base, &a1, &a2).map_err(|e| e.to_string())?;
        let b: Vec<usize> = (0..k).collect();
        ensure(m.is_valid(), || format!("sample {i}: invalid amalgam"))?;
        ensure(is_freely_amalgamated(&m, &b, k, k + 1).unwrap_or(false), || format!("sample {i}: not free"))?;
    }
    Ok(())
}

fn witnesses(seed: u64) -> Outcome {
    for i in 0..60u64 {
        let m = random_labeled(4 + (i % 4) as usize, seed.wrapping_add(1000 + i), 0.3);
        let (x, e) = (0, Edge::of(1, 2));
        let (ext, w) = if m.up(x, e) { witness_up(&m, x, e) } else { witness_down(&m, x, e) }.map_err(|e| e.to_string())?;
        let ok = if m.up(x, e) { ext.lt(Edge::of(x, w), e) } else { ext.lt(e, Edge::of(x, w)) };
        ensure(ok && ext.is_valid(), || format!("sample {i}: witness missing"))?;
        let old: Vec<usize> = (0..m.n()).collect();
        ensure(ext.induced(&old).map(|r| r.same_facts(&m)).unwrap_or(false), || format!("sample {i}: base changed"))?;
    }
    Ok(())
}

fn distinguished_half_symmetric(seed: u64) -> Outcome {
    for i in 0..200u64 {
        let q = random_two_type(1 + (i % 5) as usize, seed.wrapping_add(2000 + i), 0.5);
        let b = q.base_ids();
        let m = &q.structure;
        if same_one_type(m, &b, q.s, q.t).is_ok() && is_distinguished(m, &b, q.s, q.t).unwrap_or(false) {
            ensure(is_half_symmetric(m, &b, q.s, q.t).unwrap_or(false), || format!("sample {i}: not half-symmetric"))?;
            let cross = b.iter().any(|&x| b.iter().any(|&y| m.base().comparable(Edge::of(q.s, x), Edge::of(q.t, y))));
            ensure(!cross, || format!("sample {i}: cross relation despite distinguished"))?;
        }
    }
    Ok(())
}

fn core_sequence(seed: u64) -> Outcome {
    for i in 0..12u64 {
        let nb = 1 + (i % 4) as usize;
        let q = random_two_type(nb, seed.wrapping_add(3000 + i), 0.5);
        let report = build_core_sequence(&q, nb + 2).map_err(|e| e.to_string())?;
        let v = check_core_conclusions(&report).map_err(|e| e.to_string())?;
        ensure(report.construction_verdict().pass() && v.pass(), || format!("q {i}: {}", v.notes.join("; ")))?;
        let t = two_stage_symmetry(&q, nb, nb + 1).map_err(|e| e.to_string())?;
        ensure(t.verdict.pass(), || format!("q {i} two-stage: {}", t.verdict.notes.join("; ")))?;
    }
    Ok(())
}

fn heights(_: u64) -> Outcome {
    for k in 0..=10 {
        let h = edge_poset(&chain_switchboard(k)).and_then(|p| p.heights()).map_err(|e| e.to_string())?.height;
        ensure(h == k, || format!("chain {k} has height {h}"))?;
    }
    Ok(())
}

fn formula_roundtrip(_: u64) -> Outcome {
    let corpus = [
        "lt(x1,x2,y1,y2)",
        "!up(x1,@0,@1) & down(y1,x1,@2)",
        "eq(x1,y1) | eq(x2,y1) & !eq(x1,x2)",
        "!(lt(x1,@0,y1,@1) | up(x1,y1,@2))",
    ];
    for text in corpus {
        let f = parse_formula(text).map_err(|e| e.to_string())?;
        let again = parse_formula(&f.to_string()).map_err(|e| e.to_string())?;
        ensure(again == f, || format!("`{text}` printed as `{f}`"))?;
    }
    Ok(())
}

fn ap_failure(_: u64) -> Outcome {
    let found = search_failures(5, 1).map_err(|e| e.to_string())?;
    ensure(found.first().is_some_and(|c| c.is_failure() && c.replay().unwrap_or(false)), || "no certified failure".into())
}
