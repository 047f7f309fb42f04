#![no_main]
use libfuzzer_sys::fuzz_target;
use realizability::reductions::ReductionCert;

fuzz_target!(|data: &str| {
    let Ok(cert) = ReductionCert::from_jsonl(data) else { return };
    let again = ReductionCert::from_jsonl(&cert.to_jsonl()).expect("certificate reparses");
    assert_eq!(again.vertex_map, cert.vertex_map);
});
