#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qgraph/ensemble.hpp"
#include "qgraph/expansions.hpp"
#include "qgraph/io.hpp"

using namespace qgraph;

namespace {

std::vector<Spectrum> star_ensemble(int v, int realizations, std::uint64_t seed, long levels = 2000) {
  EnsembleSpec spec;
  spec.topology = Topology::star;
  spec.shape = {v, 0, 0, 0};
  spec.realizations = realizations;
  spec.levels = levels;
  spec.skip_levels = kSkipLevelsPerEdge * v;
  spec.base_seed = seed;
  return ensemble_spectra(spec);
}

std::vector<double> tau_range(double from, double to, double step) {
  std::vector<double> t;
  for (double x = from; x <= to + 1e-12; x += step) t.push_back(x);
  return t;
}

}  // namespace

TEST_CASE("form factor grid validation") {
  const auto spectra = star_ensemble(10, 1, 3);
  const std::vector<double> with_zero{0.0, 0.1};
  CHECK_THROWS_AS(spectral_form_factor(spectra, with_zero), std::invalid_argument);
  const std::vector<double> unsorted{0.2, 0.1};
  CHECK_THROWS_AS(spectral_form_factor(spectra, unsorted), std::invalid_argument);
  CHECK_THROWS_AS(spectral_form_factor(std::span<const Spectrum>{}, unsorted), std::invalid_argument);
}

TEST_CASE("a band high in the spectrum") {
  const MetricGraph g = build_quasar({6, 4, 3, 2});
  const double lo = 5000.0;
  const Spectrum band = find_eigenvalues_by_counting(g, lo, lo + 30.0);
  CHECK(band.levels_below == count_eigenvalues_below(g, lo));
  CHECK(band.winding_count == count_eigenvalues_below(g, lo + 30.0));
  CHECK(band.level_count() == band.winding_count - band.levels_below);
  CHECK(band.values.front() > lo);
  // Each level is a zero eigenphase of the bond unitary.
  for (std::size_t i = 0; i < band.values.size(); i += 7) {
    double closest = 4.0;
    for (double p : eigenphases(g, band.values[i])) closest = std::min(closest, std::abs(p));
    CHECK(closest < 1e-7);
  }
  // Unfolding uses the full count below lambda_max.
  const auto x = unfold(band);
  CHECK(x.back() == doctest::Approx(static_cast<double>(band.winding_count)).epsilon(0.01));
}

TEST_CASE("ensemble order does not depend on scheduling") {
  EnsembleSpec spec;
  spec.shape = {4, 3, 2, 0};
  spec.realizations = 6;
  spec.levels = 150;
  spec.threads = 1;
  const auto serial = ensemble_spectra(spec);
  spec.threads = 4;
  const auto parallel = ensemble_spectra(spec);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].values == parallel[i].values);
    CHECK(serial[i].shape.seed == ensemble_member(spec, static_cast<int>(i)).shape().seed);
  }
  CHECK(serial[0].shape.seed != serial[1].shape.seed);
}

TEST_CASE("single star calibration against the small-tau series") {
  // The acceptance suite covers tau down to 0.02 with a larger ensemble.
  const auto spectra = star_ensemble(100, 20, 11, 10000);
  const auto taus = tau_range(0.06, 0.15, 0.03);
  const FormFactorCurve curve = spectral_form_factor(spectra, taus);
  CHECK(curve.realizations == 20);
  CHECK(curve.window == 256);
  CHECK(curve.bin_width == doctest::Approx(0.01));
  CHECK(curve.warnings.empty());
  for (const auto& p : curve.points) {
    CAPTURE(p.tau);
    CAPTURE(p.k);
    CHECK(std::abs(p.k - star_expansion(p.tau)) < 0.1);
  }
}

TEST_CASE("doubling the ensemble stays within twice the standard error") {
  const auto spectra = star_ensemble(60, 40, 5, 4000);
  const auto taus = tau_range(0.03, 0.3, 0.03);
  const std::span<const Spectrum> all(spectra);
  const FormFactorCurve half = spectral_form_factor(all.first(20), taus);
  const FormFactorCurve full = spectral_form_factor(all, taus);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    CAPTURE(taus[i]);
    CHECK(std::abs(full.points[i].k - half.points[i].k) < 2.0 * half.points[i].stderr_k);
  }
}

TEST_CASE("a single realization reports window-based errors and warns when noisy") {
  const auto spectra = star_ensemble(30, 1, 9);
  const std::vector<double> taus{0.05, 0.5, 1.0};
  FormFactorOptions opts;
  opts.max_relative_stderr = 1e-3;
  const FormFactorCurve curve = spectral_form_factor(spectra, taus, opts);
  for (const auto& p : curve.points) CHECK(std::isfinite(p.stderr_k));
  CHECK(curve.warnings.size() == taus.size());
}

TEST_CASE("curve CSV") {
  FormFactorCurve curve;
  curve.points = {{0.1, 0.7, 0.01}, {0.2, 0.6, 0.02}};
  curve.realizations = 3;
  std::ostringstream out;
  write_curve_csv(out, curve, {"shape=(1,1,1)"});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# shape=(1,1,1)");
  std::getline(in, line);
  CHECK(line == "# method=spectral");
  std::getline(in, line);
  CHECK(line == "tau,K,stderr,n_realizations");
  double tau, k, err;
  int n;
  char c1, c2, c3;
  in >> tau >> c1 >> k >> c2 >> err >> c3 >> n;
  CHECK(tau == 0.1);
  CHECK(k == 0.7);
  CHECK(err == 0.01);
  CHECK(n == 3);
}
