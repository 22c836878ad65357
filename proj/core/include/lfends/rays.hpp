#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lfends/exhaust.hpp"
#include "lfends/tower.hpp"

namespace lfends {

/// Embedded ray v_0, v_1, ..., v_m inside a window.
struct Ray {
  std::vector<VertexId> vertices;
  /// exit_indices[i]: last index of the ray inside level i.
  std::vector<std::size_t> exit_indices;

  std::size_t size() const { return vertices.size(); }
};

/// Ray from the window's basepoint out to the window sphere whose tail beyond
/// each level stays in the component named by `eps`. Uses the tower's graph
/// data. Throws WindowTooSmall when no such path exists inside the window.
Ray find_ray(const EndTower& tower, const EndPrefix& eps);

/// Component thread the ray's tail descends through. Throws
/// RayNotProperInWindow when the ray does not meet levels in initial segments
/// or its tail beyond a level touches two components.
EndPrefix points_to(std::span<const VertexId> ray, const EndTower& tower);
inline EndPrefix points_to(const Ray& ray, const EndTower& tower) { return points_to(ray.vertices, tower); }

/// Checks embeddedness and adjacency of consecutive vertices in the window.
std::optional<std::string> ray_violation(const Ball& window, std::span<const VertexId> ray);

struct Retraction {
  std::shared_ptr<const Ball> window;
  /// values[local index] = ray parameter assigned to the window vertex.
  std::vector<std::uint64_t> values;
  /// a[i]: least ray index on the frontier of level i.
  std::vector<std::size_t> a;
  /// b[i]: exit index of the ray from level i.
  std::vector<std::size_t> b;
  /// Largest value difference across one window edge.
  std::uint64_t edge_spread = 0;

  std::uint64_t value(VertexId v) const { return values[window->require_local(v)]; }
};

/// Throws NotRayEfficient when the exhaustion meets the ray in a non-initial
/// set at some level.
Retraction build_retraction(const Exhaustion& exh, std::span<const VertexId> ray);

/// Re-checks rho(r(t)) = t, the interleaving a_1 <= b_1 < a_2 <= ..., and
/// {v : rho(v) <= a_i} within K_{i+1}.
std::optional<std::string> retraction_violation(const Exhaustion& exh, std::span<const VertexId> ray,
                                                const Retraction& rho);

struct TreeNode {
  /// 0 for the root; a node of depth d > 0 stands for a level d - 1 element.
  std::size_t depth = 0;
  std::size_t parent = 0;
  VertexId branch = 0;
  /// Window path from the parent's branch vertex to this one, both included.
  std::vector<VertexId> path;
};

/// Rooted tree mapped into the graph. Node 0 is the root.
struct TreeEmbedding {
  std::vector<TreeNode> nodes;
  /// Tower of the tree: level l holds the nodes of depth l + 1.
  EndTower tree_tower;
  /// tree_nodes[l][k] = node index of element k of tree_tower level l.
  std::vector<std::vector<std::size_t>> tree_nodes;
  /// Induced map from tree_tower to the graph tower.
  TowerMap tower_map;
};

/// Validates an embedding given by its nodes (injective branch vertices,
/// paths with internally disjoint interiors) and computes its induced map.
TreeEmbedding make_tree_embedding(const EndTower& tower, std::vector<TreeNode> nodes);

/// One branch vertex per element and level, connected by routed paths, so the
/// induced map is a levelwise bijection. Throws RoutingFailed when a
/// connecting path cannot avoid earlier paths.
TreeEmbedding embed_end_tree(const EndTower& tower);

/// Maps each window vertex (by local index) to a tree node. Throws
/// NonInjectiveEndMap when the embedding's induced map is not injective.
std::vector<std::size_t> tree_retraction(const EndTower& tower, const TreeEmbedding& emb);

/// Map on towers induced by a tree retraction: graph element -> tree element.
TowerMap tree_retraction_map(const EndTower& tower, const TreeEmbedding& emb,
                             const std::vector<std::size_t>& rho);

/// `ray v1` format: header, then one vertex id per line.
std::string write_ray(std::span<const VertexId> ray);
std::vector<VertexId> read_ray(std::string_view text);

}  // namespace lfends
