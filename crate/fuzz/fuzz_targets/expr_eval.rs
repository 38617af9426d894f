#![no_main]

use antilinear::expr::{evaluate, parse};
use antilinear::numerics::{CoefficientFunction, Grid};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(tree) = parse(text) else { return };
    for x in [0.0, 0.5, 1.0, -2.5, 1e300] {
        if let Ok(v) = evaluate(&tree, x) {
            assert!(v.re.is_finite() && v.im.is_finite());
        }
    }
    let grid = Grid::new(1.0, 4).unwrap();
    let _ = CoefficientFunction::from_expr(tree).sample(&grid);
});
