#include <doctest.h>

#include <set>

#include "qgraph/graph.hpp"
#include "qgraph/io.hpp"
#include "qgraph/rng.hpp"

using namespace qgraph;

TEST_CASE("splitmix64 matches the published reference stream") {
  // First outputs for seed 1234567 from Vigna's splitmix64.c.
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  CHECK(rng.next() == 9817491932198370423ULL);
}

TEST_CASE("build_star") {
  SUBCASE("V = 1 has two bonds of equal length") {
    const MetricGraph g = build_star(1, 99);
    CHECK(g.bond_count() == 2);
    CHECK(g.bond(0).length == g.bond(1).length);
    CHECK(g.bond(0).length >= 0.5);
    CHECK(g.bond(0).length <= 1.5);
  }
  SUBCASE("V = 3, seed 7") {
    const MetricGraph g = build_star(3, 7);
    CHECK(g.bond_count() == 6);
    CHECK(g.degree(g.center1()) == 3);
    const auto l = g.edge_lengths();
    CHECK(std::set<double>(l.begin(), l.end()).size() == 3);
    CHECK(build_star(3, 7) == g);
  }
  SUBCASE("rejects V = 0") { CHECK_THROWS_AS(build_star(0, 1), std::invalid_argument); }
  SUBCASE("different seeds give different lengths") {
    CHECK_FALSE(build_star(5, 1) == build_star(5, 2));
  }
}

TEST_CASE("build_quasar") {
  SUBCASE("(6, 6, 3)") {
    const MetricGraph g = build_quasar({6, 6, 3, 11});
    CHECK(g.edge_count() == 15);
    CHECK(g.degree(g.center1()) == 9);
    CHECK(g.degree(g.center2()) == 9);
  }
  SUBCASE("(50, 50, 50)") {
    const MetricGraph g = build_quasar({50, 50, 50, 1});
    CHECK(g.edge_count() == 150);
    CHECK(g.bond_count() == 300);
  }
  SUBCASE("(2, 2, 0) has two components") {
    const MetricGraph g = build_quasar({2, 2, 0, 3});
    CHECK(g.edge_components() == 2);
    for (const Bond& b : g.bonds()) CHECK(b.kind != EdgeKind::glue);
  }
  SUBCASE("edge kinds and endpoints") {
    const MetricGraph g = build_quasar({3, 2, 4, 5});
    for (int e = 0; e < g.edge_count(); ++e) {
      const Bond& b = g.bond(2 * e);
      if (b.kind == EdgeKind::glue) {
        CHECK(b.tail == g.center1());
        CHECK(b.head == g.center2());
      } else {
        CHECK(b.tail == (b.kind == EdgeKind::star1 ? g.center1() : g.center2()));
        CHECK(g.degree(b.head) == 1);
      }
    }
  }
  SUBCASE("empty shape is rejected") {
    CHECK_THROWS_AS(build_quasar({0, 0, 0, 1}), std::invalid_argument);
  }
}

TEST_CASE("metric graph invariants over random shapes") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int v1 = static_cast<int>(rng.next() % 12);
    const int v2 = static_cast<int>(rng.next() % 12);
    const int m = static_cast<int>(rng.next() % 6) + (v1 + v2 == 0 ? 1 : 0);
    const MetricGraph g = build_quasar({v1, v2, m, rng.next()});
    const int v = g.size_parameter();
    for (int b = 0; b < g.bond_count(); ++b) {
      const int r = MetricGraph::reverse(b);
      CHECK(r != b);
      CHECK(MetricGraph::reverse(r) == b);
      CHECK(g.bond(r).length == g.bond(b).length);
      CHECK(g.bond(r).tail == g.bond(b).head);
      CHECK(g.bond(b).length >= 1.0 - 0.5 / v);
      CHECK(g.bond(b).length <= 1.0 + 0.5 / v);
    }
    CHECK(g.degree(g.center1()) == v1 + m);
    CHECK(g.degree(g.center2()) == v2 + m);
    CHECK(g.undirected_length() >= v - 0.5);
    CHECK(g.undirected_length() <= v + 0.5);
    CHECK(g.directed_length() == 2.0 * g.undirected_length());
  }
}

TEST_CASE("scattering matrix") {
  SUBCASE("V = 3 star") {
    const MetricGraph g = build_star(3, 7);
    const BondScatteringMatrix s = scattering_matrix(g);
    // Incoming bond 1 (leaf -> center) backscatters into bond 0, transmits into 2 and 4.
    CHECK(s(1, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(s(1, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(s(1, 4) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    // Leaf: trivial scattering.
    CHECK(s(0, 1) == 1.0);
    CHECK(scattering_entry_exact(g, 1, 0) == Rational(-1, 3));
    CHECK(scattering_entry_exact(g, 1, 2) == Rational(2, 3));
  }
  SUBCASE("V = 1 star") {
    const BondScatteringMatrix s = scattering_matrix(build_star(1, 4));
    CHECK(s(0, 1) == 1.0);
    CHECK(s(1, 0) == 1.0);
    CHECK(s(0, 0) == 0.0);
    CHECK(s(1, 1) == 0.0);
  }
  SUBCASE("(2, 2, 1) quasar") {
    const MetricGraph g = build_quasar({2, 2, 1, 8});
    const BondScatteringMatrix s = scattering_matrix(g);
    // Bond 1 arrives at center 1 (degree 3); bond 8 is the glue edge out of center 1.
    CHECK(s(1, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(s(1, 8) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(s.orthogonality_defect() < 1e-12);
  }
  SUBCASE("row structure over random shapes") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      const MetricGraph g = build_quasar({static_cast<int>(rng.next() % 9),
                                          static_cast<int>(rng.next() % 9),
                                          1 + static_cast<int>(rng.next() % 4), rng.next()});
      const BondScatteringMatrix s = scattering_matrix(g);
      CHECK(s.orthogonality_defect() < 1e-12);
      for (int b = 0; b < g.bond_count(); ++b) {
        int nonzero = 0;
        for (int c = 0; c < g.bond_count(); ++c) {
          if (s(b, c) != 0.0) {
            ++nonzero;
            CHECK(g.bond(b).head == g.bond(c).tail);
          }
        }
        // A degree-2 vertex has zero backscattering.
        const int v = g.degree(g.bond(b).head);
        CHECK(nonzero == (v == 2 ? 1 : v));
      }
    }
  }
}

TEST_CASE("graph JSON round trip is bit exact") {
  const MetricGraph g = build_quasar({4, 3, 2, 123456789});
  const std::string text = graph_to_json(g);
  const MetricGraph back = graph_from_json(nlohmann::json::parse(text));
  CHECK(back == g);
  CHECK(graph_to_json(back) == text);
  const MetricGraph star = build_star(5, 3);
  CHECK(graph_from_json(nlohmann::json::parse(graph_to_json(star))) == star);
  CHECK(graph_from_json(nlohmann::json::parse(graph_to_json(star))).topology() == Topology::star);
}
