// Benchmarks live in benches/; see advdiff for the library under test.
