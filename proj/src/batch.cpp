#include "wban/batch.hpp"

#include <exception>

#include <omp.h>

namespace wban {

std::vector<RunResult> run_sweep_serial(const Scenario& scenario, std::span<const std::uint64_t> seeds,
                                        const RunOptions& options) {
  std::vector<RunResult> out;
  out.reserve(seeds.size());
  for (std::uint64_t seed : seeds) out.push_back(run(scenario, seed, options));
  return out;
}

std::vector<RunResult> run_sweep_parallel(const Scenario& scenario, std::span<const std::uint64_t> seeds,
                                          const RunOptions& options, int threads) {
  std::vector<RunResult> out(seeds.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(seeds.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();

  // Each slot is written by exactly one iteration; exceptions cannot cross
  // the parallel region so the first one is parked and rethrown after it.
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = run(scenario, seeds[static_cast<std::size_t>(i)], options);
    } catch (...) {
#pragma omp critical(wban_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

MetricsLedger aggregate(std::span<const RunResult> runs) {
  MetricsLedger total;
  bool first = true;
  for (const auto& r : runs) {
    if (first) {
      total = r.ledger;
      first = false;
    } else {
      total.merge(r.ledger);
    }
  }
  total.normalize();
  return total;
}

}  // namespace wban
