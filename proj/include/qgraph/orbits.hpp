#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/rational.hpp"

namespace qgraph {

// Lexicographically least rotation of a cyclic word (Booth's algorithm).
std::vector<int> least_rotation(std::span<const int> word);
// Length of the word divided by its smallest period.
int repetition_number(std::span<const int> word);

// A periodic orbit stored as the least rotation of its bond sequence.
struct Orbit {
  std::vector<int> bonds;
  int repetition = 1;

  int period() const { return static_cast<int>(bonds.size()); }
  static Orbit from_sequence(std::span<const int> bonds);
};

// True if consecutive bonds meet (head(b_i) == tail(b_{i+1})) cyclically.
bool is_closed_walk(const MetricGraph& g, std::span<const int> bonds);

// Product of scattering entries along the cyclic sequence.
double amplitude(const BondScatteringMatrix& s, std::span<const int> bonds);
Rational amplitude_exact(const MetricGraph& g, std::span<const int> bonds);

// Traversal count of each undirected edge.
std::vector<int> visit_counts(const MetricGraph& g, std::span<const int> bonds);

// Isometry class: all orbits sharing one visit-count vector.
struct OrbitClass {
  std::vector<int> visits;
  int period = 0;
  double length = 0.0;
  // W = sum over member orbits of A_p / r_p.
  double weight = 0.0;
  std::optional<Rational> weight_exact;
  std::vector<Orbit> orbits;

  int orbit_count() const { return static_cast<int>(orbits.size()); }
};

enum class EnumerationMode { full, most_backscattering };

struct EnumerationOptions {
  int max_period = 12;
  int max_edges = 12;
  bool exact = true;
};

// Classes of period `period` (number of bond traversals, even). Full mode is an
// exhaustive search over closed bond sequences; most-backscattering mode builds
// one-edge orbits and two-edge orbits with a single block per edge. Classes are
// ordered by visit vector.
std::vector<OrbitClass> enumerate_classes(const MetricGraph& g, int period, EnumerationMode mode,
                                          const EnumerationOptions& options = {});

struct OrbitFormFactor {
  double tau = 0.0;
  // (1 / 4V) sum_classes l^2 W^2
  double exact_length = 0.0;
  // tau^2 V sum_classes W^2
  double approximate = 0.0;
};

OrbitFormFactor orbit_form_factor(const MetricGraph& g, std::span<const OrbitClass> classes,
                                  int n);
OrbitFormFactor orbit_form_factor(const MetricGraph& g, int n, EnumerationMode mode,
                                  const EnumerationOptions& options = {});

// Double sum over pairs of orbits of period 2n with equal visit vectors,
// (1 / 4V) sum l_p l_p' A_p A_p' / (r_p r_p'). Full enumeration, so the same
// cutoffs apply.
double pair_sum_oracle(const MetricGraph& g, int n, const EnumerationOptions& options = {});

// CSV: period,visit_vector,n_orbits,W_exact_num,W_exact_den,W_float
void write_classes_csv(std::ostream& out, std::span<const OrbitClass> classes);

}  // namespace qgraph
