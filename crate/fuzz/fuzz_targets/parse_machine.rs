#![no_main]
use libfuzzer_sys::fuzz_target;
use realizability::auxpda::{config_graph_with, ConfigGraphOptions, Machine};

fuzz_target!(|data: &str| {
    let Ok(m) = Machine::from_json(data) else { return };
    let back = Machine::from_json(&m.to_json()).expect("serialized machine reparses");
    assert_eq!(back.is_symmetric(), m.is_symmetric());
    let opts = ConfigGraphOptions { budget: 4096, ..Default::default() };
    let word: String = m.input_alphabet.iter().take(3).map(String::as_str).collect();
    let _ = config_graph_with(&m, &word, &opts);
});
