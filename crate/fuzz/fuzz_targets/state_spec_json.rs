#![no_main]

use hosphere::format::StateSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = StateSpec::from_json(text) {
        // Anything accepted must survive its own serialization.
        let again = StateSpec::from_json(&spec.to_json()).expect("re-parse");
        assert_eq!(again, spec);
    }
});
