#![no_main]
use libfuzzer_sys::fuzz_target;
use realizability::format::{parse_digraph, write_digraph};

fuzz_target!(|data: &str| {
    let Ok(file) = parse_digraph(data) else { return };
    let text = write_digraph(&file.digraph, file.pair);
    let again = parse_digraph(&text).expect("canonical output reparses");
    assert_eq!(again.digraph.n, file.digraph.n);
});
