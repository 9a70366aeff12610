#![no_main]

use hdx_core::generators::GeneratorSpec;
use libfuzzer_sys::fuzz_target;

// Decoding only; generating from arbitrary sizes is unbounded work.
fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = serde_json::from_slice::<GeneratorSpec>(data) {
        let text = serde_json::to_string(&spec).unwrap();
        let back: GeneratorSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
});
