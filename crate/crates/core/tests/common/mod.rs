#![allow(dead_code)]

use afstable::generators::{random_af, GenSpec};
use afstable::io::parse_apx;
use afstable::label_enum::{Label, Snapshot};
use afstable::{ArgId, Framework};

pub const SIX_APX: &str = include_str!("../fixtures/six.apx");
pub const SIX_TGF: &str = include_str!("../fixtures/six.tgf");

pub fn six() -> Framework {
    parse_apx(SIX_APX).unwrap()
}

pub fn names(f: &Framework, exts: &[afstable::Extension]) -> Vec<Vec<String>> {
    exts.iter()
        .map(|e| e.names(f).into_iter().map(String::from).collect())
        .collect()
}

fn label(s: &str) -> Label {
    match s {
        "blank" => Label::Blank,
        "in" => Label::In,
        "out" => Label::Out,
        "must" => Label::MustOut,
        _ => panic!("{s}"),
    }
}

fn snap(f: &Framework, mu: [&str; 6], pi: [u32; 6], gamma: &[&str]) -> Snapshot {
    Snapshot {
        mu: mu.iter().map(|s| label(s)).collect(),
        pi: pi.to_vec(),
        gamma: gamma.iter().map(|n| f.id(n).unwrap()).collect::<Vec<ArgId>>(),
    }
}

/// The ten labelled states of the six-argument walk-through, in order, as
/// (name, snapshot).
pub fn walkthrough_states(f: &Framework) -> Vec<(&'static str, Snapshot)> {
    let b = "blank";
    vec![
        ("root", snap(f, [b, b, b, b, b, b], [2, 2, 2, 1, 1, 2], &[])),
        ("pick a", snap(f, [b, b, b, b, b, b], [2, 2, 2, 1, 1, 2], &["a"])),
        (
            "a in",
            snap(f, ["in", "out", b, b, "must", "must"], [0, 2, 0, 0, 1, 1], &["c", "d"]),
        ),
        (
            "{a,c,d} stable",
            snap(f, ["in", "out", "in", "in", "out", "out"], [0, 2, 0, 0, 1, 1], &[]),
        ),
        ("a excluded", snap(f, ["must", b, b, b, b, b], [2, 1, 2, 1, 1, 2], &[])),
        ("pick b", snap(f, ["must", b, b, b, b, b], [2, 1, 2, 1, 1, 2], &["b"])),
        (
            "b in",
            snap(f, ["must", "in", "out", "out", b, b], [2, 0, 2, 1, 0, 1], &["e"]),
        ),
        (
            "{b,e} stable",
            snap(f, ["out", "in", "out", "out", "in", "out"], [1, 0, 2, 1, 0, 1], &[]),
        ),
        (
            "b excluded",
            snap(f, ["must", "must", b, b, b, b], [2, 1, 1, 0, 1, 2], &["d"]),
        ),
        (
            "d in, dead end",
            snap(f, ["must", "out", b, "in", "out", "out"], [0, 1, 0, 0, 1, 1], &["c", "f"]),
        ),
    ]
}

/// Seeded instances covering n in 1..=12, four attack densities, and
/// self-loops on and off.
pub fn random_instances(count: usize, max_n: usize) -> Vec<(GenSpec, Framework)> {
    const DENSITIES: [f64; 4] = [0.1, 0.2, 0.3, 0.5];
    (0..count)
        .map(|i| {
            let spec = GenSpec {
                n: 1 + i % max_n,
                p: DENSITIES[(i / max_n) % 4],
                allow_self_loops: (i / (4 * max_n)) % 2 == 1,
                seed: 1000 + i as u64,
            };
            let f = random_af(&spec).unwrap();
            (spec, f)
        })
        .collect()
}
