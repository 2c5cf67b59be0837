#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(table) = mobius_pairs::io::parse_ztable(data) {
        // evaluating a valid table anywhere in its domain must not panic
        let _ = mobius_pairs::construct::ZFunction::Table(table).eval(2.0);
    }
});
