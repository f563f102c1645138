//! Holds the `acceptance` test target, which prints one PASS/FAIL line per
//! criterion and exits non-zero when any criterion fails.
