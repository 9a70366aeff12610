#![no_main]

use hdx_cli::parse_simplex;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_simplex(text) {
        let joined: Vec<String> = s.vertices().iter().map(|v| v.to_string()).collect();
        let back = parse_simplex(&joined.join(",")).ok().expect("canonical form parses");
        assert_eq!(back, s);
    }
});
