#include <benchmark/benchmark.h>

// Local entry point instead of benchmark::benchmark_main: the distro's
// static libbenchmark_main.a ships LTO bytecode tied to one compiler
// patchlevel, while the shared libbenchmark.so links everywhere.
BENCHMARK_MAIN();
