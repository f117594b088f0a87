#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

// det(I - D(lambda) S) with D = diag(exp(i lambda l_b)) over directed bonds.
// Real zeros of this function are the Laplacian eigenvalues.
std::complex<double> secular_value(const MetricGraph& g, double lambda);

// Eigenphases of the unitary D(lambda) S, each in (-pi, pi].
std::vector<double> eigenphases(const MetricGraph& g, double lambda);

struct Spectrum {
  // Strictly increasing distinct eigenvalues in (lambda_min, lambda_max].
  std::vector<double> values;
  // Multiplicity of each value; > 1 only where roots were merged.
  std::vector<int> multiplicity;

  double lambda_min = 0.0;
  double lambda_max = 0.0;
  // Eigenvalues in (0, lambda_min], counted but not listed.
  long levels_below = 0;
  double grid_step = 0.0;
  double tolerance = 0.0;
  double merge_tolerance = 0.0;
  std::string solver;

  // Completeness certificate: number of 0 (mod 2pi) crossings accumulated by
  // the tracked eigenphases (tracking solver) or the counting function at
  // lambda_max (counting solver). Includes levels_below.
  long winding_count = 0;
  // Clusters of two or more roots closer than the merge tolerance.
  int unresolved_clusters = 0;

  QuasarShape shape;
  Topology topology = Topology::quasar;

  long level_count() const;
  // Values expanded by multiplicity.
  std::vector<double> levels() const;
};

struct TrackingOptions {
  double tolerance = 1e-10;
  // Relative: roots closer than merge_tolerance * lambda are merged.
  double merge_tolerance = 1e-8;
};

// Eigenphase tracking on the full bond unitary. Each eigenphase advances by
// between min_length * h and max_length * h per grid step h; a crossing of
// 0 (mod 2pi) is an eigenvalue and is refined by bisection. Requires
// grid_step <= pi / (10 * undirected length). Throws std::runtime_error when a
// phase step violates the monotonicity bound.
Spectrum find_eigenvalues(const MetricGraph& g, double lambda_max, double grid_step,
                          const TrackingOptions& options = {});

// Number of eigenvalues in (0, lambda), with multiplicity, for star and
// quasar graphs. Uses the two-center Dirichlet-to-Neumann reduction:
// N(lambda) = N_Dirichlet(lambda) + n_+(Lambda(lambda)) - components.
long count_eigenvalues_below(const MetricGraph& g, double lambda);

// Same eigenvalues as find_eigenvalues, isolated with the counting function
// and bisected to `tolerance`. Cost is O(E) per evaluation instead of a
// dense eigendecomposition, which makes large ensembles feasible.
Spectrum find_eigenvalues_by_counting(const MetricGraph& g, double lambda_max,
                                      const TrackingOptions& options = {});
// Only the band (lambda_min, lambda_max]; levels below are counted, not found.
Spectrum find_eigenvalues_by_counting(const MetricGraph& g, double lambda_min, double lambda_max,
                                      const TrackingOptions& options = {});

// lambda such that the smooth (Weyl) count lambda * L / pi equals `levels`,
// padded by `margin` (relative).
double lambda_for_levels(const MetricGraph& g, long levels, double margin = 0.02);

inline double weyl_count(const MetricGraph& g, double lambda) {
  return lambda * g.undirected_length() / 3.14159265358979323846;
}

// x_n = lambda_n * N / lambda_max with N the number of levels in
// (0, lambda_max], including levels_below, so the mean spacing is 1. Needs
// >= 100 listed levels.
std::vector<double> unfold(const Spectrum& s);

enum class CurveMethod { spectral, orbit, expansion };
std::string to_string(CurveMethod method);

struct FormFactorPoint {
  double tau;
  double k;
  double stderr_k;
};

struct FormFactorCurve {
  std::vector<FormFactorPoint> points;
  CurveMethod method = CurveMethod::spectral;
  int realizations = 0;
  int window = 0;
  double bin_width = 0.0;
  std::vector<std::string> warnings;
};

struct FormFactorOptions {
  // Levels per window.
  int window = 256;
  // Width of the tau bin averaged around each grid point; 0 means 1/V of the
  // first spectrum's shape.
  double bin_width = 0.0;
  // tau samples per bin.
  int bin_samples = 9;
  // Warn when stderr / K exceeds this at any tau.
  double max_relative_stderr = 0.2;
};

// Windowed estimator of K(tau) on unfolded levels. Each window of `window`
// consecutive levels (50% overlap, Hann taper w) contributes
// |sum_n w_n exp(2 pi i x_n tau)|^2 / sum_n w_n^2; windows, tau samples within
// the bin and realizations are averaged. tau = 0 is rejected.
FormFactorCurve spectral_form_factor(std::span<const Spectrum> spectra,
                                     std::span<const double> tau_grid,
                                     const FormFactorOptions& options = {});

}  // namespace qgraph
