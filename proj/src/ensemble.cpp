#include "qgraph/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "qgraph/rng.hpp"

namespace qgraph {

MetricGraph ensemble_member(const EnsembleSpec& spec, int index) {
  QuasarShape shape = spec.shape;
  shape.seed = realization_seed(spec.base_seed, static_cast<std::uint64_t>(index));
  if (spec.topology == Topology::star) return build_star(shape.v1, shape.seed);
  return build_quasar(shape);
}

std::vector<Spectrum> ensemble_spectra(const EnsembleSpec& spec) {
  std::vector<Spectrum> out(std::max(0, spec.realizations));
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, out.size()));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < static_cast<int>(out.size()); i = next++) {
      try {
        const MetricGraph g = ensemble_member(spec, i);
        const double lo = lambda_for_levels(g, spec.skip_levels, 0.0);
        const double hi = lambda_for_levels(g, spec.skip_levels + spec.levels, 0.0) +
                          (lambda_for_levels(g, spec.levels) - lambda_for_levels(g, spec.levels, 0.0));
        out[i] = find_eigenvalues_by_counting(g, lo, hi);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace qgraph
