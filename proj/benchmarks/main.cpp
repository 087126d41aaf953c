#include <benchmark/benchmark.h>

// The distro's static benchmark_main carries LTO objects from another
// compiler release, so the entry point is provided here.
BENCHMARK_MAIN();
