#![no_main]

use hdx_core::parse_complex;
use libfuzzer_sys::fuzz_target;

// Anything the parser accepts must build and survive a write/read cycle.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_complex(text) else { return };
    let (wc, partition) = doc.build().expect("validated document builds");
    if let Some(p) = &partition {
        p.validate(wc.complex()).expect("validated partition");
    }
    let again = parse_complex(&doc.to_json()).expect("written document parses");
    assert_eq!(again, doc);
});
