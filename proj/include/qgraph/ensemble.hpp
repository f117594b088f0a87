#pragma once

#include <cstdint>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

// Default band offset per edge: skipping 2000 V levels puts the band at
// lambda ~ 2000 pi, far above V / n for every tau = n / V >= 0.01.
inline constexpr long kSkipLevelsPerEdge = 2000;

struct EnsembleSpec {
  Topology topology = Topology::quasar;
  // Seed of the shape is ignored; realization i uses realization_seed(base_seed, i).
  QuasarShape shape;
  int realizations = 20;
  // Target level count in the band; lambda_max comes from lambda_for_levels.
  long levels = 2000;
  // Smooth count of levels below the band. Periodic-orbit statistics need
  // lambda well above V / n for orbits of period 2n to dephase.
  long skip_levels = 0;
  std::uint64_t base_seed = 1;
  // 0 means hardware concurrency.
  unsigned threads = 0;
};

MetricGraph ensemble_member(const EnsembleSpec& spec, int index);

// Spectra of every realization with the counting solver, returned in index
// order regardless of which worker finished first.
std::vector<Spectrum> ensemble_spectra(const EnsembleSpec& spec);

}  // namespace qgraph
