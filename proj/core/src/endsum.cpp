#include "lfends/endsum.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "lfends/error.hpp"
#include "lfends/h0.hpp"
#include "lfends/rays.hpp"

namespace lfends {

namespace {

constexpr VertexId kMaxHalf = (VertexId{1} << 63) - 1;

void require_graph_ray(const GraphGenerator& gen, const std::vector<VertexId>& ray, const char* side) {
  if (ray.empty() || ray.front() != gen.basepoint()) {
    fail(ErrorKind::RayNotProperInWindow, std::string(side) + " ray must start at the basepoint");
  }
  std::set<VertexId> seen;
  for (std::size_t t = 0; t < ray.size(); ++t) {
    if (!seen.insert(ray[t]).second) {
      fail(ErrorKind::RayNotProperInWindow, std::string(side) + " ray repeats vertex " + std::to_string(ray[t]));
    }
    if (ray[t] > kMaxHalf) fail(ErrorKind::InvalidArgument, "vertex id too large for the end-sum encoding");
    if (t > 0) {
      const auto adj = gen.neighbors(ray[t - 1]);
      if (!std::binary_search(adj.begin(), adj.end(), ray[t])) {
        fail(ErrorKind::RayNotProperInWindow, std::string(side) + " ray has a non-edge at index " + std::to_string(t));
      }
    }
  }
}

class EndSumFamily final : public GraphFamily {
 public:
  EndSumFamily(GraphGenerator left, GraphGenerator right, const std::vector<VertexId>& left_ray,
               const std::vector<VertexId>& right_ray)
      : left_(std::move(left)), right_(std::move(right)) {
    const std::size_t shared = std::min(left_ray.size(), right_ray.size());
    for (std::size_t k = 0; k < shared; ++k) {
      left_to_right_.emplace(left_ray[k], right_ray[k]);
      right_to_left_.emplace(right_ray[k], left_ray[k]);
    }
  }

  std::string name() const override { return left_.name() + "#" + right_.name(); }
  std::size_t degree_bound() const override { return left_.degree_bound() + right_.degree_bound(); }
  VertexId default_basepoint() const override { return 2 * left_.basepoint(); }
  bool finite() const override { return left_.finite() && right_.finite(); }

  bool contains(VertexId v) const override {
    const VertexId half = v / 2;
    if (v % 2 == 0) return left_.contains(half);
    return right_.contains(half) && !right_to_left_.count(half);
  }

  void append_neighbors(VertexId v, std::vector<VertexId>& out) const override {
    const VertexId half = v / 2;
    if (v % 2 == 1) {
      for (VertexId w : right_.neighbors(half)) out.push_back(right_image(w));
      return;
    }
    for (VertexId u : left_.neighbors(half)) out.push_back(2 * u);
    if (auto it = left_to_right_.find(half); it != left_to_right_.end()) {
      for (VertexId w : right_.neighbors(it->second)) out.push_back(right_image(w));
    }
  }

  VertexId right_image(VertexId w) const {
    if (auto it = right_to_left_.find(w); it != right_to_left_.end()) return 2 * it->second;
    if (w > kMaxHalf) fail(ErrorKind::InvalidArgument, "vertex id too large for the end-sum encoding");
    return 2 * w + 1;
  }

 private:
  GraphGenerator left_;
  GraphGenerator right_;
  std::unordered_map<VertexId, VertexId> left_to_right_;
  std::unordered_map<VertexId, VertexId> right_to_left_;
};

std::vector<VertexId> inside_prefix(const Ball& window, const std::vector<VertexId>& ray) {
  std::vector<VertexId> out;
  for (VertexId v : ray) {
    if (!window.contains(v)) break;
    out.push_back(v);
  }
  return out;
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (auto s : sizes) out += (out.empty() ? "" : " ") + std::to_string(s);
  return out;
}

}  // namespace

RayedGraph with_ray(const GraphGenerator& gen, int depth, int window_radius, const std::optional<EndPrefix>& eps) {
  auto window = std::make_shared<const Ball>(materialize_ball(gen, window_radius + 2));
  auto tower = build_tower(efficient_exhaustion(window, depth));
  if (tower.depth() == 0 || tower.size(tower.depth() - 1) == 0) {
    fail(ErrorKind::EmptyTower, gen.name() + " has no unbounded component at depth " + std::to_string(depth));
  }
  const EndPrefix thread = eps ? *eps : prefix_of(tower, tower.depth() - 1, 0);
  return RayedGraph{gen, find_ray(tower, thread).vertices};
}

GraphGenerator end_sum_graph(const EndSumSpec& spec) {
  require_graph_ray(spec.left.gen, spec.left.ray, "left");
  require_graph_ray(spec.right.gen, spec.right.ray, "right");
  auto family = std::make_shared<const EndSumFamily>(spec.left.gen, spec.right.gen, spec.left.ray, spec.right.ray);
  return GraphGenerator(family, family->default_basepoint());
}

VertexId end_sum_left(const EndSumSpec&, VertexId v) {
  if (v > kMaxHalf) fail(ErrorKind::InvalidArgument, "vertex id too large for the end-sum encoding");
  return 2 * v;
}

VertexId end_sum_right(const EndSumSpec& spec, VertexId w) {
  const std::size_t shared = std::min(spec.left.ray.size(), spec.right.ray.size());
  for (std::size_t k = 0; k < shared; ++k) {
    if (spec.right.ray[k] == w) return 2 * spec.left.ray[k];
  }
  if (w > kMaxHalf) fail(ErrorKind::InvalidArgument, "vertex id too large for the end-sum encoding");
  return 2 * w + 1;
}

bool EndSumReport::sizes_match() const {
  return std::all_of(rows.begin(), rows.end(), [](const EndSumRow& r) { return r.match(); });
}

EndSumReport verify_end_sum(const EndSumSpec& spec) {
  const int depth = spec.depth;
  const int radius = spec.window_radius;
  auto sum_gen = end_sum_graph(spec);

  auto left_window = std::make_shared<const Ball>(materialize_ball(spec.left.gen, radius));
  auto right_window = std::make_shared<const Ball>(materialize_ball(spec.right.gen, radius));
  auto left_exh = efficient_exhaustion(left_window, depth);
  auto right_exh = efficient_exhaustion(right_window, depth);
  const auto left_ray = inside_prefix(*left_window, spec.left.ray);
  const auto right_ray = inside_prefix(*right_window, spec.right.ray);
  const auto left_exits = ray_exit_indices(left_exh, left_ray);
  const auto right_exits = ray_exit_indices(right_exh, right_ray);
  if (!left_exits || !right_exits) {
    fail(ErrorKind::RayNotProperInWindow, "a ray does not leave every level in an initial segment");
  }
  if (*left_exits != *right_exits) {
    std::vector<std::size_t> l(left_exits->begin(), left_exits->end());
    std::vector<std::size_t> r(right_exits->begin(), right_exits->end());
    fail(ErrorKind::AlignmentFailure, "rays leave the levels at different indices (" + join_sizes(l) + " vs " +
                                          join_sizes(r) + "); choose rays with matching exits");
  }

  EndSumReport report;
  report.left_tower = build_tower(left_exh);
  report.right_tower = build_tower(right_exh);
  const auto left_eps = points_to(left_ray, report.left_tower);
  const auto right_eps = points_to(right_ray, report.right_tower);

  auto sum_window = std::make_shared<const Ball>(materialize_ball(sum_gen, radius));
  Exhaustion sum_exh;
  sum_exh.window = sum_window;
  for (int i = 0; i < depth; ++i) {
    std::vector<VertexId> members;
    for (VertexId v : left_exh.levels[i].vertices()) members.push_back(end_sum_left(spec, v));
    for (VertexId w : right_exh.levels[i].vertices()) members.push_back(end_sum_right(spec, w));
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    Compactum level;
    try {
      level = bounded_filling(*sum_window, Compactum(std::move(members)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CompactumTouchesWindowBoundary && e.kind() != ErrorKind::UnknownVertex) throw;
      fail(ErrorKind::AlignmentFailure, "aligned level " + std::to_string(i + 1) + " reaches the window sphere; use a "
                                        "window radius of at least " + std::to_string(radius + 1));
    }
    sum_exh.flags.push_back(compute_level_flags(*sum_window, level));
    sum_exh.levels.push_back(std::move(level));
  }
  for (int i = 0; i + 1 < depth; ++i) {
    if (!interior_nested(*sum_window, sum_exh.levels[i], sum_exh.levels[i + 1])) {
      fail(ErrorKind::AlignmentFailure, "aligned level " + std::to_string(i + 1) +
                                            " is not interior to the next; rebuild both exhaustions with stride 2");
    }
  }
  report.sum_tower = build_tower(sum_exh);

  std::vector<VertexId> sum_ray;
  for (VertexId v : spec.left.ray) {
    const VertexId s = end_sum_left(spec, v);
    if (!sum_window->contains(s)) break;
    sum_ray.push_back(s);
  }
  const auto sum_eps = points_to(sum_ray, report.sum_tower);

  report.quotient = quotient_tower(report.left_tower, left_eps, report.right_tower, right_eps);
  report.sum_code = canonical_code(report.sum_tower);
  report.quotient_code = canonical_code(report.quotient);
  report.left_reduced_rank = reduced_basis(report.left_tower, left_eps).size();
  report.right_reduced_rank = reduced_basis(report.right_tower, right_eps).size();
  report.sum_reduced_rank = reduced_basis(report.sum_tower, sum_eps).size();
  for (std::size_t l = 0; l < report.sum_tower.depth(); ++l) {
    report.rows.push_back(EndSumRow{report.left_tower.size(l), report.right_tower.size(l), report.sum_tower.size(l)});
  }
  return report;
}

std::string format_end_sum_report(const EndSumReport& report) {
  std::ostringstream out;
  out << "level  |U^M|  |U^N|  |U^S|  predicted  match\n";
  for (std::size_t l = 0; l < report.rows.size(); ++l) {
    const auto& r = report.rows[l];
    out << l + 1 << "  " << r.left << "  " << r.right << "  " << r.sum << "  " << r.left + r.right - 1 << " = " << r.left << "+"
        << r.right << "-1  " << (r.match() ? "OK" : "FAIL") << "\n";
  }
  out << "canonical codes " << (report.codes_match() ? "equal" : "differ") << "\n";
  out << "reduced ranks " << report.sum_reduced_rank << " = " << report.left_reduced_rank << "+"
      << report.right_reduced_rank << " " << (report.ranks_add() ? "OK" : "FAIL") << "\n";
  return out.str();
}

}  // namespace lfends
