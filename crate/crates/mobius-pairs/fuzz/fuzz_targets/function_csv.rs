#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Arbitrary bytes must parse or error, never panic.
    let _ = mobius_pairs::io::parse_function_csv(data);
});
