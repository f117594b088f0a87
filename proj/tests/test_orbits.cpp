#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "qgraph/families.hpp"
#include "qgraph/orbits.hpp"
#include "support/oracles.hpp"

using namespace qgraph;

namespace {

// Number of maximal runs of consecutive bonds on one edge, cyclically.
int edge_runs(const MetricGraph& g, const std::vector<int>& word) {
  int runs = 0;
  for (std::size_t i = 0; i < word.size(); ++i)
    if (g.bond(word[i]).edge != g.bond(word[(i + 1) % word.size()]).edge) ++runs;
  return runs == 0 ? 1 : runs;
}

// W per visit vector from brute-force orbits, optionally restricted to orbits
// with a single run per visited edge on at most two edges.
std::map<std::vector<int>, double> brute_weights(const MetricGraph& g, int period,
                                                 bool single_blocks) {
  std::map<std::vector<int>, double> w;
  for (const auto& o : oracle::all_orbits_brute(g, period)) {
    int touched = 0;
    for (int c : o.visits) touched += c > 0;
    if (single_blocks && (touched > 2 || edge_runs(g, o.word) != touched)) continue;
    w[o.visits] += oracle::amplitude_brute(g, o.word) / o.repetition;
  }
  return w;
}

}  // namespace

TEST_CASE("least rotation and repetition number against brute force") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng.next() % 10);
    const int alphabet = 1 + static_cast<int>(rng.next() % 3);
    std::vector<int> w(n);
    for (int& c : w) c = static_cast<int>(rng.next() % alphabet);
    // Make some words periodic.
    if (trial % 3 == 0 && n % 2 == 0)
      for (int i = n / 2; i < n; ++i) w[i] = w[i - n / 2];
    CAPTURE(trial);
    CHECK(least_rotation(w) == oracle::least_rotation_brute(w));
    CHECK(repetition_number(w) == oracle::repetition_brute(w));
  }
  CHECK(repetition_number(std::vector<int>{3, 1, 3, 1, 3, 1}) == 3);
  CHECK(Orbit::from_sequence(std::vector<int>{2, 0, 1}).bonds == std::vector<int>{0, 1, 2});
}

TEST_CASE("amplitudes") {
  const MetricGraph g = build_star(3, 4);
  const auto s = scattering_matrix(g);
  // Bonds 0/1 on edge 0, 2/3 on edge 1: out 0, back 1, out 2, back 3.
  const std::vector<int> two_edges{0, 1, 2, 3};
  CHECK(is_closed_walk(g, two_edges));
  CHECK(amplitude(s, two_edges) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(amplitude_exact(g, two_edges) == Rational(4, 9));
  const std::vector<int> backscatter{0, 1};
  CHECK(amplitude(s, backscatter) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(amplitude_exact(g, backscatter) == Rational(-1, 3));
  CHECK_FALSE(is_closed_walk(g, std::vector<int>{0, 2}));

  SUBCASE("invariant under rotation and equal to the vertex rule") {
    const MetricGraph q = build_quasar({2, 1, 2, 8});
    const auto sq = scattering_matrix(q);
    for (const auto& o : oracle::all_orbits_brute(q, 6)) {
      const double a = amplitude(sq, o.word);
      CHECK(a == doctest::Approx(oracle::amplitude_brute(q, o.word)).epsilon(1e-13));
      std::vector<int> rotated(o.word.begin() + 1, o.word.end());
      rotated.push_back(o.word.front());
      CHECK(amplitude(sq, rotated) == doctest::Approx(a).epsilon(1e-13));
      CHECK(to_double(amplitude_exact(q, o.word)) == doctest::Approx(a).epsilon(1e-13));
    }
  }
}

TEST_CASE("full enumeration matches brute force") {
  SUBCASE("V = 3 star, period 4") {
    const MetricGraph g = build_star(3, 12);
    const auto classes = enumerate_classes(g, 4, EnumerationMode::full);
    const auto brute = brute_weights(g, 4, false);
    REQUIRE(classes.size() == brute.size());
    std::size_t orbits = 0;
    for (const auto& c : classes) {
      REQUIRE(brute.count(c.visits) == 1);
      CHECK(c.weight == doctest::Approx(brute.at(c.visits)).epsilon(1e-13));
      REQUIRE(c.weight_exact.has_value());
      CHECK(to_double(*c.weight_exact) == doctest::Approx(c.weight).epsilon(1e-13));
      orbits += c.orbit_count();
    }
    CHECK(orbits == oracle::all_orbits_brute(g, 4).size());
  }
  SUBCASE("(1, 1, 2) quasar, periods 2 to 6") {
    const MetricGraph g = build_quasar({1, 1, 2, 3});
    for (int period = 2; period <= 6; period += 2) {
      const auto classes = enumerate_classes(g, period, EnumerationMode::full);
      const auto brute = brute_weights(g, period, false);
      CAPTURE(period);
      REQUIRE(classes.size() == brute.size());
      for (const auto& c : classes)
        CHECK(c.weight == doctest::Approx(brute.at(c.visits)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("V = 2 star: transparent center gives zero backscatter weight") {
  const MetricGraph g = build_star(2, 7);
  for (int period = 2; period <= 8; period += 2) {
    for (const auto& c : enumerate_classes(g, period, EnumerationMode::full)) {
      int touched = 0;
      for (int v : c.visits) touched += v > 0;
      // Only orbits that alternate between the two edges survive.
      if (touched == 1) CHECK(*c.weight_exact == 0);
    }
  }
}

TEST_CASE("most-backscattering classes are single-block orbits") {
  for (const QuasarShape& shape :
       {QuasarShape{1, 1, 1, 2}, QuasarShape{2, 1, 2, 6}, QuasarShape{0, 3, 1, 4}}) {
    const MetricGraph g = build_quasar(shape);
    for (int period = 2; period <= 6; period += 2) {
      const auto mb = enumerate_classes(g, period, EnumerationMode::most_backscattering);
      const auto brute = brute_weights(g, period, true);
      const auto full = enumerate_classes(g, period, EnumerationMode::full);
      CAPTURE(period);
      CHECK(mb.size() == brute.size());
      for (const auto& c : mb) {
        REQUIRE(brute.count(c.visits) == 1);
        CHECK(c.weight == doctest::Approx(brute.at(c.visits)).epsilon(1e-12));
        const bool in_full = std::any_of(full.begin(), full.end(),
                                         [&](const OrbitClass& f) { return f.visits == c.visits; });
        CHECK(in_full);
      }
    }
  }
}

TEST_CASE("odd glue-pair class holds an orbit and its time reversal") {
  // Edges: star1, star2, glue, glue. Each center has degree 3.
  const MetricGraph g = build_quasar({1, 1, 2, 3});
  const auto classes = enumerate_classes(g, 2, EnumerationMode::most_backscattering);
  const auto it = std::find_if(classes.begin(), classes.end(), [](const OrbitClass& c) {
    return c.visits == std::vector<int>{0, 0, 1, 1};
  });
  REQUIRE(it != classes.end());
  CHECK(it->orbit_count() == kOddGluePairOrbits);
  CHECK(*it->weight_exact == Rational(8, 9));
  std::size_t brute = 0;
  for (const auto& o : oracle::all_orbits_brute(g, 2)) brute += o.visits == std::vector<int>{0, 0, 1, 1};
  CHECK(brute == 2);
}

TEST_CASE("family closed forms equal class-by-class sums") {
  for (const QuasarShape& shape : {QuasarShape{3, 2, 2, 1}, QuasarShape{2, 4, 3, 9},
                                   QuasarShape{4, 0, 2, 3}, QuasarShape{3, 3, 0, 5}}) {
    const MetricGraph g = build_quasar(shape);
    for (int n = 1; n <= 5; ++n) {
      const auto classes = enumerate_classes(g, 2 * n, EnumerationMode::most_backscattering);
      const auto a = family_contributions_from_classes(g, classes, n);
      const auto b = finite_family_contributions(shape.v1, shape.v2, shape.m, n);
      CAPTURE(shape.v1);
      CAPTURE(shape.m);
      CAPTURE(n);
      const auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * (1.0 + std::abs(y)); };
      CHECK(close(a.star1_single, b.star1_single));
      CHECK(close(a.star2_single, b.star2_single));
      CHECK(close(a.glue_single, b.glue_single));
      CHECK(close(a.star1_pair, b.star1_pair));
      CHECK(close(a.star2_pair, b.star2_pair));
      CHECK(close(a.glue_pair_even, b.glue_pair_even));
      CHECK(close(a.glue_pair_odd, b.glue_pair_odd));
      CHECK(close(a.mixed1, b.mixed1));
      CHECK(close(a.mixed2, b.mixed2));
    }
  }
}

TEST_CASE("orbit form factor") {
  const MetricGraph g = build_quasar({2, 1, 1, 21});
  for (int n = 1; n <= 4; ++n) {
    const auto k = orbit_form_factor(g, n, EnumerationMode::full);
    CHECK(k.exact_length == doctest::Approx(pair_sum_oracle(g, n)).epsilon(1e-12));
    const auto classes = enumerate_classes(g, 2 * n, EnumerationMode::full);
    double w2 = 0.0;
    for (const auto& c : classes) w2 += c.weight * c.weight;
    const double v = g.size_parameter();
    CHECK(k.tau == doctest::Approx(n / v));
    CHECK(k.approximate == doctest::Approx(k.tau * k.tau * v * w2).epsilon(1e-13));
  }
}

TEST_CASE("class structure: parity and lengths") {
  const MetricGraph g = build_quasar({2, 2, 2, 14});
  const auto lengths = g.edge_lengths();
  // The graph is bipartite, so there are no closed walks of odd period.
  CHECK(enumerate_classes(g, 3, EnumerationMode::full).empty());
  CHECK(oracle::all_orbits_brute(g, 3).empty());
  for (int period = 2; period <= 6; period += 2) {
    const auto classes = enumerate_classes(g, period, EnumerationMode::full);
    std::vector<double> seen;
    for (const auto& c : classes) {
      double l = 0.0;
      int total = 0;
      for (int e = 0; e < g.edge_count(); ++e) l += c.visits[e] * lengths[e], total += c.visits[e];
      CHECK(total == period);
      CHECK(c.length == doctest::Approx(l).epsilon(1e-14));
      for (const auto& o : c.orbits) {
        CHECK(is_closed_walk(g, o.bonds));
        CHECK(visit_counts(g, o.bonds) == c.visits);
        CHECK(least_rotation(o.bonds) == o.bonds);
      }
      // Generic lengths separate distinct classes.
      for (double s : seen) CHECK(std::abs(s - l) > 1e-9);
      seen.push_back(l);
    }
  }
}

TEST_CASE("classes CSV") {
  const MetricGraph g = build_star(3, 1);
  const auto classes = enumerate_classes(g, 2, EnumerationMode::full);
  std::ostringstream out;
  write_classes_csv(out, classes);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "period,visit_vector,n_orbits,W_exact_num,W_exact_den,W_float");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == static_cast<int>(classes.size()));
}
