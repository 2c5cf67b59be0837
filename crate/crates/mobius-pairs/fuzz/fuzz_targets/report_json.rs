#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(report) = mobius_pairs::io::report_from_json(data) {
        // a report that deserializes must support verdict recomputation
        let _ = mobius_pairs::experiment::recompute_verdict(&report);
    }
});
