#![no_main]

use antilinear_cli::output::{parse_csv, plot_script};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((header, _rows)) = parse_csv(text) {
        let _ = plot_script("data.csv", &header);
    }
});
