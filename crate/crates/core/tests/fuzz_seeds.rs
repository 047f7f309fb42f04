//! Replays the fuzz targets' round-trip checks over the checked-in seeds so
//! that a broken seed or parser regression shows up without a fuzzer.

use std::fs;
use std::path::PathBuf;

use realizability::auxpda::Machine;
use realizability::format::{parse_digraph, parse_instance, write_digraph, write_instance};
use realizability::grammar::LabelString;
use realizability::reductions::ReductionCert;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| (p.display().to_string(), fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn instance_seeds_parse_and_round_trip() {
    for (name, text) in seeds("parse_instance") {
        let f = parse_instance(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = parse_instance(&write_instance(&f.graph, f.variant, f.pair)).unwrap();
        assert_eq!(again.graph, f.graph, "{name}");
        assert_eq!(again.pair, f.pair, "{name}");
    }
}

#[test]
fn digraph_seeds_parse_and_round_trip() {
    for (name, text) in seeds("parse_digraph") {
        let f = parse_digraph(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = parse_digraph(&write_digraph(&f.digraph, f.pair)).unwrap();
        assert_eq!(again.digraph.arcs, f.digraph.arcs, "{name}");
    }
}

#[test]
fn machine_seeds_parse_and_round_trip() {
    for (name, text) in seeds("parse_machine") {
        let m = Machine::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let back = Machine::from_json(&m.to_json()).unwrap();
        assert_eq!(back.to_json(), m.to_json(), "{name}");
    }
}

#[test]
fn label_string_seeds_parse_and_round_trip() {
    for (name, text) in seeds("parse_label_string") {
        let s: LabelString = text.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(s.to_string().parse::<LabelString>().unwrap(), s, "{name}");
    }
}

#[test]
fn certificate_seeds_parse_and_round_trip() {
    for (name, text) in seeds("parse_certificate") {
        let c = ReductionCert::from_jsonl(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(ReductionCert::from_jsonl(&c.to_jsonl()).unwrap(), c, "{name}");
    }
}
