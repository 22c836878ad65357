#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lfends/graph.hpp"

namespace lfends {

/// Finite vertex set; the full induced subgraph is implied. Kept sorted.
class Compactum {
 public:
  Compactum() = default;
  explicit Compactum(std::vector<VertexId> vertices);

  const std::vector<VertexId>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  bool contains(VertexId v) const;
  bool subset_of(const Compactum& other) const;

  friend bool operator==(const Compactum&, const Compactum&) = default;

 private:
  std::vector<VertexId> vertices_;
};

enum class Boundedness { Bounded, UnboundedAtWindow };

struct ComplementComponent {
  VertexId canonical_rep = 0;          // minimum id in the component
  std::vector<LocalIndex> members;     // ascending local indices
  Boundedness classification = Boundedness::Bounded;

  bool unbounded() const { return classification == Boundedness::UnboundedAtWindow; }
};

/// Components of (window vertices) minus K, ordered by canonical_rep.
struct ComplementDecomposition {
  Compactum compactum;
  std::vector<ComplementComponent> components;
  /// Per window local index: -1 inside the compactum, else component index.
  std::vector<std::int32_t> label;

  std::size_t unbounded_count() const;
  /// Indices into `components` of the unbounded-at-window components, in order.
  std::vector<std::size_t> unbounded_indices() const;
};

struct LevelFlags {
  bool connected = false;
  bool efficient = false;
};

/// Nested compacta K_1 ⊆ int K_2 ⊆ ... inside one shared window.
struct Exhaustion {
  std::shared_ptr<const Ball> window;
  std::vector<Compactum> levels;
  std::vector<LevelFlags> flags;
  /// Radii of the balls the levels were filled from, when built that way.
  std::vector<int> radii;
  /// For ray-efficient exhaustions: ray ∩ K_i = ray[0..exits[i]].
  std::vector<std::size_t> ray_exits;

  std::size_t depth() const { return levels.size(); }
  bool all_efficient() const;
};

/// Throws CompactumTouchesWindowBoundary when K meets the window sphere, and
/// UnknownVertex when K leaves the window.
ComplementDecomposition complement_components(const Ball& window, const Compactum& k);

/// K together with every bounded complementary component.
Compactum bounded_filling(const Ball& window, const Compactum& k);

bool is_connected(const Ball& window, const Compactum& k);
/// Every vertex of `inner` has all its neighbors in `outer` (N[inner] ⊆ outer).
bool interior_nested(const Ball& window, const Compactum& inner, const Compactum& outer);
LevelFlags compute_level_flags(const Ball& window, const Compactum& k);

/// Filled balls about the basepoint at radii (i-1)*stride, i = 1..depth.
/// Throws WindowTooSmall naming the minimal admissible window radius.
Exhaustion efficient_exhaustion(const GraphGenerator& gen, int depth, int window_radius,
                                int stride = 1);
Exhaustion efficient_exhaustion(std::shared_ptr<const Ball> window, int depth, int stride = 1);

/// Exhaustion whose levels meet the ray in initial segments. `ray` lists the
/// ray's vertices in order, starting at its base vertex.
Exhaustion ray_efficient_exhaustion(std::shared_ptr<const Ball> window, std::span<const VertexId> ray,
                                    int depth);
Exhaustion ray_efficient_exhaustion(const GraphGenerator& gen, std::span<const VertexId> ray,
                                    int depth, int window_radius);

/// Computes exit indices b_i with ray ∩ K_i = ray[0..b_i]; nullopt when some
/// level meets the ray in a non-initial set or the ray never leaves a level.
std::optional<std::vector<std::size_t>> ray_exit_indices(const Exhaustion& exh,
                                                         std::span<const VertexId> ray);

/// Throws BadIndices unless indices are strictly increasing and in range.
Exhaustion subsequence(const Exhaustion& exh, std::span<const std::size_t> indices);

/// Re-checks nesting, window margin, connectivity and efficiency; returns a
/// human-readable violation or nullopt.
std::optional<std::string> validate_exhaustion(const Exhaustion& exh);

}  // namespace lfends
