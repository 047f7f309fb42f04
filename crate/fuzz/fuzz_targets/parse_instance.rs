#![no_main]
use libfuzzer_sys::fuzz_target;
use realizability::closure::closure_auto;
use realizability::format::{parse_instance, write_instance};
use realizability::instance::initialize;

fuzz_target!(|data: &str| {
    let Ok(file) = parse_instance(data) else { return };
    // Canonical output must parse back to the same graph.
    let text = write_instance(&file.graph, file.variant, file.pair);
    let again = parse_instance(&text).expect("canonical output reparses");
    assert_eq!(again.graph.n, file.graph.n);
    if file.graph.n <= 8 {
        if let Ok(inst) = initialize(&file.graph, file.variant) {
            let _ = closure_auto(&inst);
        }
    }
});
