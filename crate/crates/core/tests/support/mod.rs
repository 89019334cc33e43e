//! Randomized property suites shared by the `properties` and `acceptance`
//! targets. Every oracle here is computed independently of the engine.

#![allow(dead_code)]

use std::collections::BTreeMap;

use chrono::{Duration, TimeZone, Utc};
use infoarch::lexicon::Lexicon;
use infoarch::measurement::DistributionModel;
use infoarch::memory::{AttributeValue, Memory, MemoryGraph, Tts};
use infoarch::spm::{Direction, Spm};
use infoarch::tasks::{strip_to_description, to_verification, TaskSentence, TaskType};
use infoarch::NodeId;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub const CASES: u32 = 1000;

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

fn node(i: usize) -> NodeId {
    NodeId::new(format!("n{i}"))
}

/// Depth-first reachability over an explicit edge list.
fn reaches(edges: &[(usize, usize)], from: usize, to: usize) -> bool {
    let mut stack = vec![from];
    let mut seen = [false; 64];
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            if a == x && !seen[b] {
                if b == to {
                    return true;
                }
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    false
}

/// Solid edges never form a cycle: an edge is accepted exactly when the
/// child cannot already reach the parent, and the final graph has a
/// topological order consistent with every edge.
pub fn acyclicity() -> Result<(), String> {
    let strategy = (2usize..=20).prop_flat_map(|n| prop::collection::vec((0..n, 0..n), 0..60));
    runner()
        .run(&strategy, |ops| {
            let mut g = MemoryGraph::default();
            let mut accepted: Vec<(usize, usize)> = Vec::new();
            for (p, c) in ops {
                let expect_ok = p != c && !reaches(&accepted, c, p);
                let got = g.assert_inclusion(node(p), "s", node(c));
                prop_assert_eq!(got.is_ok(), expect_ok, "edge {} -> {}", p, c);
                if expect_ok {
                    accepted.push((p, c));
                }
            }
            let order = g.topological_order();
            prop_assert!(order.is_some());
            let order = order.unwrap();
            let pos = |i: usize| order.iter().position(|x| *x == node(i)).unwrap();
            for &(p, c) in &accepted {
                prop_assert!(pos(p) < pos(c));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `query_inclusion` agrees with a Floyd-Warshall transitive closure.
pub fn inclusion_matches_reachability() -> Result<(), String> {
    let strategy = (1usize..=50).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n), 0..(2 * n)),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
    });
    runner()
        .run(&strategy, |(n, raw, labels)| {
            // Orient every edge from lower to higher rank, then relabel so
            // the hierarchy is not aligned with node names.
            let mut g = MemoryGraph::default();
            let mut closure = vec![vec![false; n]; n];
            for &label in &labels {
                g.add_node(node(label), None);
            }
            for (a, b) in raw {
                if a == b {
                    continue;
                }
                let (lo, hi) = (a.min(b), a.max(b));
                g.assert_inclusion(node(labels[lo]), "s", node(labels[hi])).unwrap();
                closure[labels[lo]][labels[hi]] = true;
            }
            for k in 0..n {
                for i in 0..n {
                    if closure[i][k] {
                        let via = closure[k].clone();
                        for (j, reach) in via.into_iter().enumerate() {
                            closure[i][j] |= reach;
                        }
                    }
                }
            }
            for (i, row) in closure.iter().enumerate() {
                for (j, &expected) in row.iter().enumerate() {
                    prop_assert_eq!(g.query_inclusion(&node(i), &node(j)), expected, "{} ⊃ {}", i, j);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn opposite(d: Direction) -> Direction {
    match d {
        Direction::Left => Direction::Right,
        Direction::Right => Direction::Left,
        Direction::Front => Direction::Back,
        Direction::Back => Direction::Front,
        Direction::Up => Direction::Down,
        Direction::Down => Direction::Up,
    }
}

fn direction() -> impl Strategy<Value = Direction> {
    prop::sample::select(Direction::ALL.to_vec())
}

/// After any sequence of `set_direction` calls, M[a][d] = b exactly when
/// M[b][opposite d] = a, and accepted calls leave both cells written.
pub fn adjacency_symmetry() -> Result<(), String> {
    let strategy = (2usize..=8).prop_flat_map(|n| prop::collection::vec((0..n, direction(), 0..n), 0..40).prop_map(move |ops| (n, ops)));
    runner()
        .run(&strategy, |(n, ops)| {
            let mut spm = Spm::new();
            spm.add_sapp("root", 1, None).unwrap();
            let root = NodeId::new("root");
            for i in 0..n {
                spm.add_sapp(node(i), 0, Some(&root)).unwrap();
            }
            for (a, d, b) in ops {
                if spm.set_direction(&node(a), d, &node(b)).is_ok() {
                    prop_assert_eq!(spm.cell(&node(a), d), Some(&node(b)));
                    prop_assert_eq!(spm.cell(&node(b), opposite(d)), Some(&node(a)));
                }
                for i in 0..n {
                    for d in Direction::ALL {
                        if let Some(j) = spm.cell(&node(i), d) {
                            prop_assert_eq!(spm.cell(j, opposite(d)), Some(&node(i)));
                        }
                    }
                }
            }
            prop_assert!(spm.validate().is_ok());
            // Cross-layer relations are always refused.
            prop_assert!(spm.set_direction(&node(0), Direction::Left, &root).is_err());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Records of one (entity, space) never overlap and at most one is open,
/// whatever order updates arrive in.
pub fn interval_disjointness() -> Result<(), String> {
    let strategy = prop::collection::vec((0usize..3, 0usize..2, 0usize..4, 0i64..500, prop::option::of(0u64..5)), 0..40);
    let base = Utc.with_ymd_and_hms(2020, 10, 1, 0, 0, 0).unwrap();
    let spaces = ["color", "spatial-position"];
    let words = ["red", "black", "green", "blue"];
    runner()
        .run(&strategy, |ops| {
            let mut m = Memory::new();
            for (e, s, w, minute, qty) in ops {
                let _ = m.update_attribute(
                    node(e),
                    spaces[s],
                    AttributeValue::word(words[w]),
                    qty,
                    base + Duration::minutes(minute),
                );
            }
            for sheet in m.sheets() {
                let mut by_space: BTreeMap<&str, Vec<_>> = BTreeMap::new();
                for r in &sheet.records {
                    by_space.entry(r.space.as_str()).or_default().push(r);
                }
                for records in by_space.values() {
                    let open = records.iter().filter(|r| r.tts == Tts::Open).count();
                    prop_assert!(open <= 1);
                    let end = |t: &Tts| match t {
                        Tts::Open => None,
                        Tts::At(t) => Some(*t),
                    };
                    for r in records {
                        if let Some(e) = end(&r.tts) {
                            prop_assert!(r.cts < e);
                        }
                    }
                    for (i, a) in records.iter().enumerate() {
                        for b in &records[i + 1..] {
                            let a_before_b = end(&a.tts).is_some_and(|e| e <= b.cts);
                            let b_before_a = end(&b.tts).is_some_and(|e| e <= a.cts);
                            prop_assert!(a_before_b || b_before_a, "overlap {:?} {:?}", a, b);
                        }
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn pick(words: &'static [&'static str]) -> impl Strategy<Value = &'static str> {
    prop::sample::select(words)
}

/// Generated description sentences across the three reading modes.
pub fn description() -> impl Strategy<Value = String> {
    let drm = (
        pick(&["This apple", "The dog", "That cat", "Queen", "The dog's name", "The cat's tail", "Charles"]),
        pick(&["red", "black", "sweet", "furry", "Wirete"]),
    )
        .prop_map(|(s, v)| format!("{s} is {v} ."));
    let drm_plural = (pick(&["They", "We", "The apples"]), pick(&["red", "sweet", "round"]))
        .prop_map(|(s, v)| format!("{s} are {v} ."));
    let srm = (
        pick(&["Queen", "The cat", "Charles", "The dog"]),
        pick(&["a", "one"]),
        prop::option::of(pick(&["black", "red", "round"])),
        pick(&["crown", "tail", "book", "ball"]),
    )
        .prop_map(|(s, q, adj, n)| match adj {
            Some(a) => format!("{s} has {q} {a} {n} ."),
            None => format!("{s} has {q} {n} ."),
        });
    let srm_plural = (
        pick(&["They", "We", "Queen"]),
        pick(&["two", "twelve", "some", "many"]),
        pick(&["crowns", "books", "apples"]),
    )
        .prop_map(|(s, q, n)| {
            let have = if s == "Queen" { "has" } else { "have" };
            format!("{s} {have} {q} {n} .")
        });
    let prm = (
        pick(&["Queen", "Charles", "Wirete", "They"]),
        pick(&["read", "like", "eat", "write"]),
        pick(&["the book", "coffee and tea", "an apple", "the apple", "two apples"]),
    )
        .prop_map(|(s, v, o)| format!("{s} {v} {o} ."));
    prop_oneof![drm, drm_plural, srm, srm_plural, prm]
}

/// Stripping the verification form of a description gives it back.
pub fn strip_verify_round_trip() -> Result<(), String> {
    let lex = Lexicon::seed();
    runner()
        .run(&description(), |text| {
            let d = TaskSentence::parse(&text, &lex).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
            prop_assert_eq!(d.task, TaskType::Description, "{}", text);
            let v = to_verification(&d, &lex).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
            prop_assert_eq!(v.task, TaskType::Verification);
            let back = strip_to_description(&v, &lex).map_err(|e| TestCaseError::fail(format!("{}: {e}", v.render())))?;
            prop_assert_eq!(back.render(), text);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Larger values never fall in lower bands, and the curve's two sides
/// mirror each other.
pub fn band_monotonic_and_mirrored() -> Result<(), String> {
    let strategy = (-100.0f64..100.0, 0.1f64..50.0, -500.0f64..500.0, -500.0f64..500.0, 0.0f64..10.0);
    runner()
        .run(&strategy, |(mu, sigma, x, y, z)| {
            let m = DistributionModel::temperature(mu, sigma).unwrap();
            let (lo, hi) = (x.min(y), x.max(y));
            prop_assert!(m.measure(lo).band <= m.measure(hi).band);
            prop_assert_eq!(m.band_for_z(-z), -m.band_for_z(z));
            prop_assert!((-3..=3).contains(&m.band_for_z(z)));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Name and runner of every property suite.
pub type Property = fn() -> Result<(), String>;

pub fn all() -> Vec<(&'static str, Property)> {
    vec![
        ("solid-edge acyclicity", acyclicity),
        ("query_inclusion equals brute-force reachability", inclusion_matches_reachability),
        ("adjacency symmetry under set_direction", adjacency_symmetry),
        ("per-space interval disjointness", interval_disjointness),
        ("strip after verify is identity", strip_verify_round_trip),
        ("band monotonicity and mirror symmetry", band_monotonic_and_mirrored),
    ]
}
