#![no_main]

use hdx_core::TheoremId;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = text.parse::<TheoremId>() {
        assert_eq!(t.as_str(), text);
    }
});
