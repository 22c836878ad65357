#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lfends/graph.hpp"
#include "lfends/tower.hpp"

namespace lfends {

/// A graph with a ray starting at its basepoint.
struct RayedGraph {
  GraphGenerator gen;
  std::vector<VertexId> ray;
};

/// Ray to the end `eps` (default: the first thread) found in a window two
/// larger than `window_radius`, so it runs past the sum's window.
RayedGraph with_ray(const GraphGenerator& gen, int depth, int window_radius,
                    const std::optional<EndPrefix>& eps = std::nullopt);

struct EndSumSpec {
  RayedGraph left;
  RayedGraph right;
  int depth = 4;
  int window_radius = 6;
};

/// Wedge of the two graphs along their rays: left vertex v becomes 2v, right
/// vertex w becomes 2w + 1, and right ray vertex k is identified with left ray
/// vertex k. Throws RayNotProperInWindow for rays that are not embedded paths
/// from the basepoints.
GraphGenerator end_sum_graph(const EndSumSpec& spec);
VertexId end_sum_left(const EndSumSpec& spec, VertexId v);
VertexId end_sum_right(const EndSumSpec& spec, VertexId w);

struct EndSumRow {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t sum = 0;
  bool match() const { return sum + 1 == left + right; }
};

struct EndSumReport {
  std::vector<EndSumRow> rows;
  EndTower left_tower;
  EndTower right_tower;
  EndTower sum_tower;
  EndTower quotient;
  std::string sum_code;
  std::string quotient_code;
  std::size_t left_reduced_rank = 0;
  std::size_t right_reduced_rank = 0;
  std::size_t sum_reduced_rank = 0;

  bool sizes_match() const;
  bool codes_match() const { return sum_code == quotient_code; }
  bool ranks_add() const { return sum_reduced_rank == left_reduced_rank + right_reduced_rank; }
  bool ok() const { return sizes_match() && codes_match() && ranks_add(); }
};

/// Builds the glued graph's tower over the levels fill(K_i^M + K_i^N) and
/// compares it with the quotient tower. Throws AlignmentFailure when the
/// rays leave the two exhaustions at different indices or the aligned levels
/// are not nested in each other's interiors.
EndSumReport verify_end_sum(const EndSumSpec& spec);

/// Plain text table, one row per level.
std::string format_end_sum_report(const EndSumReport& report);

}  // namespace lfends
