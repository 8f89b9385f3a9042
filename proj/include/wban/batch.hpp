#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wban/simulator.hpp"

namespace wban {

/// Runs one simulation per seed on the calling thread, in seed order.
std::vector<RunResult> run_sweep_serial(const Scenario& scenario, std::span<const std::uint64_t> seeds,
                                        const RunOptions& options = {});

/// Same results as run_sweep_serial, with seeds spread over OpenMP threads.
/// Runs share nothing but the read-only scenario, so the output is identical
/// for any thread count.
std::vector<RunResult> run_sweep_parallel(const Scenario& scenario, std::span<const std::uint64_t> seeds,
                                          const RunOptions& options = {}, int threads = 0);

/// Ledger merged over all runs, in seed order, with latencies sorted.
MetricsLedger aggregate(std::span<const RunResult> runs);

}  // namespace wban
