#![no_main]

use antilinear_cli::config::parse_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = parse_json(text) {
        let _ = cfg.x0();
        let _ = cfg.steps();
        let _ = cfg.check_keys(&["f", "u0"]);
    }
});
