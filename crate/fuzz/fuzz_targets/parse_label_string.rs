#![no_main]
use libfuzzer_sys::fuzz_target;
use realizability::grammar::{is_realizable_string, GrammarVariant, LabelString};

fuzz_target!(|data: &str| {
    let Ok(s) = data.parse::<LabelString>() else { return };
    let again: LabelString = s.to_string().parse().expect("display output reparses");
    assert_eq!(again, s);
    if s.edges().len() <= 64 {
        for g in [GrammarVariant::Standard, GrammarVariant::SymmetricGap, GrammarVariant::One, GrammarVariant::OneSymmetricGap] {
            let _ = is_realizable_string(&s, g);
        }
    }
});
