#![no_main]

use libfuzzer_sys::fuzz_target;
use pgn::exponents::LinearMap;
use pgn::Point;

fuzz_target!(|data: &[u8]| {
    if data.len() > 2048 {
        return;
    }
    let Ok(t) = serde_json::from_slice::<LinearMap>(data) else { return };
    if t.check().is_ok() {
        let x = Point::ints(&vec![1; t.cols()]);
        let _ = t.apply(&x);
    }
});
