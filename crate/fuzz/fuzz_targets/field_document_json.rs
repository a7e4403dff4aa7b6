#![no_main]

use hosphere::format::FieldDocument;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 20 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = FieldDocument::from_json(text) {
        let json = doc.to_json();
        let again = FieldDocument::from_json(&json).expect("re-parse");
        assert_eq!(again.to_json(), json);
    }
});
