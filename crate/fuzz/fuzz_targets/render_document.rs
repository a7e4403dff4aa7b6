#![no_main]

use hosphere::format::FieldDocument;
use hosphere::render::{render_svg, GlyphStyle};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((doc, _)) = FieldDocument::parse_any(text) {
        for style in [GlyphStyle::Arrows, GlyphStyle::Ellipses] {
            render_svg(&doc, style).expect("validated documents render");
        }
    }
});
