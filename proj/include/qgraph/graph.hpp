#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/rational.hpp"

namespace qgraph {

enum class EdgeKind { star1, star2, glue };

std::string to_string(EdgeKind kind);
EdgeKind edge_kind_from_string(const std::string& s);

enum class Topology { star, quasar };

// (V1, V2, M) plus the seed of the length sampler. A plain V-star is
// described as (V, 0, 0) with Topology::star.
struct QuasarShape {
  int v1 = 0;
  int v2 = 0;
  int m = 0;
  std::uint64_t seed = 0;

  int total() const { return v1 + v2 + m; }
  Rational nu1() const { return Rational(v1, total()); }
  Rational nu2() const { return Rational(v2, total()); }
  Rational nu3() const { return Rational(m, total()); }

  bool operator==(const QuasarShape&) const = default;
};

struct Bond {
  int tail;
  int head;
  int edge;
  double length;
  EdgeKind kind;
};

// Metric graph stored as directed bonds. Bond 2e runs along edge e from its
// first endpoint (a center) to its second endpoint; bond 2e+1 is the
// reversal. Vertex 0 is center 1; for quasars vertex 1 is center 2; leaves
// follow in edge order.
class MetricGraph {
 public:
  // Builds from explicit edge lengths (edge order: star1, star2, glue).
  // Lengths are checked against the sampling interval unless `check_interval`
  // is false.
  MetricGraph(Topology topology, QuasarShape shape, std::vector<double> edge_lengths,
              bool check_interval = true);

  Topology topology() const { return topology_; }
  const QuasarShape& shape() const { return shape_; }
  // V used in tau = n/V and in the length interval [1 - 1/2V, 1 + 1/2V].
  int size_parameter() const { return shape_.total(); }

  int vertex_count() const { return static_cast<int>(degree_.size()); }
  int edge_count() const { return static_cast<int>(edge_lengths_.size()); }
  int bond_count() const { return 2 * edge_count(); }
  int degree(int vertex) const { return degree_.at(vertex); }
  int center1() const { return 0; }
  int center2() const { return topology_ == Topology::quasar ? 1 : -1; }

  std::span<const Bond> bonds() const { return bonds_; }
  const Bond& bond(int b) const { return bonds_[b]; }
  static int reverse(int b) { return b ^ 1; }

  std::span<const double> edge_lengths() const { return edge_lengths_; }
  EdgeKind edge_kind(int e) const { return bonds_[2 * e].kind; }

  // Bonds leaving `vertex`, in bond-index order.
  std::span<const int> outgoing(int vertex) const { return outgoing_[vertex]; }

  double undirected_length() const;
  double directed_length() const { return 2.0 * undirected_length(); }
  double min_length() const;
  double max_length() const;

  // Connected components that contain at least one edge.
  int edge_components() const;

  bool operator==(const MetricGraph& other) const;

 private:
  Topology topology_;
  QuasarShape shape_;
  std::vector<double> edge_lengths_;
  std::vector<Bond> bonds_;
  std::vector<int> degree_;
  std::vector<std::vector<int>> outgoing_;
};

MetricGraph build_star(int v, std::uint64_t seed);
MetricGraph build_quasar(const QuasarShape& shape);

// Real orthogonal matrix over directed bonds: entry (b, b') is the amplitude
// to scatter from b into b' at head(b) = tail(b').
struct BondScatteringMatrix {
  Eigen::MatrixXd matrix;

  double operator()(int from, int to) const { return matrix(from, to); }
  int dimension() const { return static_cast<int>(matrix.rows()); }
  // max |(S^T S - I)_ij|
  double orthogonality_defect() const;
};

BondScatteringMatrix scattering_matrix(const MetricGraph& g);

// Exact value of the same entry: -delta + 2/v, or 0 if the bonds don't meet.
Rational scattering_entry_exact(const MetricGraph& g, int from, int to);

// Backscattering r = -1 + 2/v and transmission t = 2/v at a degree-v vertex.
Rational backscatter_exact(int degree);
Rational transmission_exact(int degree);

}  // namespace qgraph
