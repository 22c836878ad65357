#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lfends {

using VertexId = std::uint64_t;
using Edge = std::pair<VertexId, VertexId>;

/// A connected, simple, locally finite graph described by its neighbor
/// function. Implementations must enumerate at most degree_bound()
/// neighbors per vertex and be symmetric.
class GraphFamily {
 public:
  virtual ~GraphFamily() = default;

  virtual std::string name() const = 0;
  virtual std::size_t degree_bound() const = 0;
  virtual VertexId default_basepoint() const = 0;
  virtual bool contains(VertexId v) const = 0;
  /// Appends the neighbors of a vertex known to be contained. Order is free;
  /// GraphGenerator sorts.
  virtual void append_neighbors(VertexId v, std::vector<VertexId>& out) const = 0;
  virtual bool finite() const { return false; }
};

/// Immutable handle on a graph family plus a basepoint. Cheap to copy.
class GraphGenerator {
 public:
  GraphGenerator(std::shared_ptr<const GraphFamily> family, VertexId basepoint);

  static GraphGenerator line();
  static GraphGenerator halfline();
  static GraphGenerator grid(int dimension);
  static GraphGenerator regular_tree(int degree);
  static GraphGenerator free_group(int rank);
  static GraphGenerator binary_tree();
  static GraphGenerator comb();
  /// Finite explicit graph. Verifies simplicity and connectivity.
  static GraphGenerator from_edges(const std::vector<Edge>& edges,
                                   const std::vector<VertexId>& extra_vertices = {},
                                   std::optional<VertexId> basepoint = std::nullopt);

  /// Builds a builtin family by name. Accepts `grid` with params {d}, and the
  /// inline form `grid(2)`. Throws InvalidArgument for unknown names.
  static GraphGenerator from_name(std::string_view name,
                                  const std::map<std::string, std::string>& params = {});
  static std::vector<std::string> family_names();

  std::string name() const { return family_->name(); }
  std::size_t degree_bound() const { return family_->degree_bound(); }
  VertexId basepoint() const { return basepoint_; }
  bool contains(VertexId v) const { return family_->contains(v); }
  bool finite() const { return family_->finite(); }

  /// Sorted, deduplicated neighbor list. Throws UnknownVertex.
  std::vector<VertexId> neighbors(VertexId v) const;

  GraphGenerator with_basepoint(VertexId v) const;

  const GraphFamily& family() const { return *family_; }
  const std::shared_ptr<const GraphFamily>& family_ptr() const { return family_; }

 private:
  std::shared_ptr<const GraphFamily> family_;
  VertexId basepoint_;
};

using LocalIndex = std::uint32_t;

/// Finite window: the closed ball of a given radius about a center. Vertices
/// are stored in ascending id order, so local index order is id order.
class Ball {
 public:
  static constexpr std::size_t kDefaultBudget = 10'000'000;

  VertexId center() const { return center_; }
  int radius() const { return radius_; }
  std::size_t size() const { return vertices_.size(); }

  const std::vector<VertexId>& vertices() const { return vertices_; }
  VertexId vertex(LocalIndex i) const { return vertices_[i]; }
  int distance(LocalIndex i) const { return distance_[i]; }
  const std::vector<LocalIndex>& adjacent(LocalIndex i) const { return adjacency_[i]; }
  /// Local indices of the vertices at distance exactly radius().
  const std::vector<LocalIndex>& sphere() const { return sphere_; }
  bool on_sphere(LocalIndex i) const { return distance_[i] == radius_; }

  std::optional<LocalIndex> local(VertexId v) const;
  LocalIndex require_local(VertexId v) const;
  bool contains(VertexId v) const { return index_.count(v) != 0; }

  /// All edges with both endpoints in the ball, (min, max) ordered, sorted.
  std::vector<Edge> edges() const;
  std::vector<VertexId> sphere_ids() const;

  const GraphGenerator& generator() const { return generator_; }

  friend Ball materialize_ball(const GraphGenerator&, int, std::size_t);
  friend Ball materialize_ball_at(const GraphGenerator&, VertexId, int, std::size_t);

 private:
  explicit Ball(GraphGenerator gen) : generator_(std::move(gen)) {}

  GraphGenerator generator_;
  VertexId center_ = 0;
  int radius_ = 0;
  std::vector<VertexId> vertices_;
  std::vector<int> distance_;
  std::vector<std::vector<LocalIndex>> adjacency_;
  std::vector<LocalIndex> sphere_;
  std::unordered_map<VertexId, LocalIndex> index_;
};

std::vector<VertexId> neighbors(const GraphGenerator& gen, VertexId v);

/// BFS ball about the generator's basepoint. Throws BudgetExceeded when the
/// ball would hold more than `budget` vertices.
Ball materialize_ball(const GraphGenerator& gen, int radius,
                      std::size_t budget = Ball::kDefaultBudget);
Ball materialize_ball_at(const GraphGenerator& gen, VertexId center, int radius,
                         std::size_t budget = Ball::kDefaultBudget);

/// Parses the `lfgraph v1` text format.
GraphGenerator parse_edge_list(std::string_view text);
/// Writes a ball as `lfgraph v1` text with a `base` line.
std::string write_graph(const Ball& ball);

/// Id codecs shared by the builtin families; exposed for tests and tools.
namespace codec {
VertexId zigzag(std::int64_t z);
std::int64_t unzigzag(VertexId v);
VertexId cantor_pair(VertexId a, VertexId b);
std::pair<VertexId, VertexId> cantor_unpair(VertexId z);
VertexId grid_encode(const std::vector<std::int64_t>& coords);
std::vector<std::int64_t> grid_decode(VertexId v, int dimension);
/// Free-group reduced words: letter 2g is generator g, 2g+1 its inverse.
VertexId word_encode(const std::vector<int>& word, int rank);
std::vector<int> word_decode(VertexId v, int rank);
}  // namespace codec

}  // namespace lfends
