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
    if let Ok(doc) = FieldDocument::from_csv(text) {
        let csv = doc.to_csv();
        let again = FieldDocument::from_csv(&csv).expect("re-parse");
        assert_eq!(again.to_csv(), csv);
    }
});
