#include "lfends/exhaust.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "lfends/error.hpp"

namespace lfends {

Compactum::Compactum(std::vector<VertexId> vertices) : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
}

bool Compactum::contains(VertexId v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Compactum::subset_of(const Compactum& other) const {
  return std::includes(other.vertices_.begin(), other.vertices_.end(), vertices_.begin(),
                       vertices_.end());
}

std::size_t ComplementDecomposition::unbounded_count() const {
  return static_cast<std::size_t>(
      std::count_if(components.begin(), components.end(), [](const auto& c) { return c.unbounded(); }));
}

std::vector<std::size_t> ComplementDecomposition::unbounded_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].unbounded()) out.push_back(i);
  }
  return out;
}

bool Exhaustion::all_efficient() const {
  return std::all_of(flags.begin(), flags.end(), [](const LevelFlags& f) { return f.efficient; });
}

namespace {

std::vector<char> mask_of(const Ball& window, const Compactum& k) {
  std::vector<char> mask(window.size(), 0);
  for (VertexId v : k.vertices()) mask[window.require_local(v)] = 1;
  return mask;
}

Compactum compactum_of_mask(const Ball& window, const std::vector<char>& mask) {
  std::vector<VertexId> out;
  for (LocalIndex i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(window.vertex(i));
  }
  return Compactum(std::move(out));
}

}  // namespace

ComplementDecomposition complement_components(const Ball& window, const Compactum& k) {
  const auto inside = mask_of(window, k);
  for (LocalIndex s : window.sphere()) {
    if (inside[s]) {
      fail(ErrorKind::CompactumTouchesWindowBoundary,
           "compactum contains sphere vertex " + std::to_string(window.vertex(s)) +
               " of the radius-" + std::to_string(window.radius()) + " window");
    }
  }

  ComplementDecomposition out;
  out.compactum = k;
  out.label.assign(window.size(), -1);
  std::vector<LocalIndex> stack;
  // Local indices ascend with vertex id, so scanning in index order discovers
  // components in canonical_rep order.
  for (LocalIndex start = 0; start < window.size(); ++start) {
    if (inside[start] || out.label[start] >= 0) continue;
    const auto id = static_cast<std::int32_t>(out.components.size());
    ComplementComponent comp;
    comp.canonical_rep = window.vertex(start);
    out.label[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const LocalIndex v = stack.back();
      stack.pop_back();
      comp.members.push_back(v);
      if (window.on_sphere(v)) comp.classification = Boundedness::UnboundedAtWindow;
      for (LocalIndex w : window.adjacent(v)) {
        if (!inside[w] && out.label[w] < 0) {
          out.label[w] = id;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.members.begin(), comp.members.end());
    out.components.push_back(std::move(comp));
  }
  return out;
}

Compactum bounded_filling(const Ball& window, const Compactum& k) {
  const auto decomposition = complement_components(window, k);
  auto mask = mask_of(window, k);
  for (const auto& comp : decomposition.components) {
    if (comp.unbounded()) continue;
    for (LocalIndex v : comp.members) mask[v] = 1;
  }
  return compactum_of_mask(window, mask);
}

bool is_connected(const Ball& window, const Compactum& k) {
  if (k.empty()) return false;
  const auto inside = mask_of(window, k);
  std::vector<char> seen(window.size(), 0);
  std::vector<LocalIndex> stack{window.require_local(k.vertices().front())};
  seen[stack.back()] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const LocalIndex v = stack.back();
    stack.pop_back();
    ++reached;
    for (LocalIndex w : window.adjacent(v)) {
      if (inside[w] && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return reached == k.size();
}

bool interior_nested(const Ball& window, const Compactum& inner, const Compactum& outer) {
  const auto outside_ok = mask_of(window, outer);
  for (VertexId v : inner.vertices()) {
    const LocalIndex i = window.require_local(v);
    if (!outside_ok[i]) return false;
    // A sphere vertex may have neighbors beyond the window.
    if (window.on_sphere(i)) return false;
    for (LocalIndex w : window.adjacent(i)) {
      if (!outside_ok[w]) return false;
    }
  }
  return true;
}

LevelFlags compute_level_flags(const Ball& window, const Compactum& k) {
  LevelFlags flags;
  flags.connected = is_connected(window, k);
  const auto decomposition = complement_components(window, k);
  const bool all_unbounded = decomposition.unbounded_count() == decomposition.components.size();
  flags.efficient = flags.connected && all_unbounded;
  return flags;
}

namespace {

Compactum ball_compactum(const Ball& window, int radius) {
  std::vector<VertexId> out;
  for (LocalIndex i = 0; i < window.size(); ++i) {
    if (window.distance(i) <= radius) out.push_back(window.vertex(i));
  }
  return Compactum(std::move(out));
}

void require_nested(const Exhaustion& exh) {
  for (std::size_t i = 0; i + 1 < exh.levels.size(); ++i) {
    if (!interior_nested(*exh.window, exh.levels[i], exh.levels[i + 1])) {
      fail(ErrorKind::InvariantViolation,
           "level " + std::to_string(i + 1) + " is not interior to level " + std::to_string(i + 2));
    }
  }
}

}  // namespace

Exhaustion efficient_exhaustion(std::shared_ptr<const Ball> window, int depth, int stride) {
  if (depth < 0) fail(ErrorKind::InvalidArgument, "negative depth");
  if (stride < 1) fail(ErrorKind::InvalidArgument, "stride must be positive");
  Exhaustion exh;
  exh.window = std::move(window);
  if (depth == 0) return exh;
  const int last_radius = (depth - 1) * stride;
  if (last_radius >= exh.window->radius()) {
    fail(ErrorKind::WindowTooSmall,
         "window radius " + std::to_string(exh.window->radius()) + " too small for depth " +
             std::to_string(depth) + "; minimal admissible window radius is " +
             std::to_string(last_radius + 1));
  }
  for (int i = 0; i < depth; ++i) {
    const int radius = i * stride;
    auto level = bounded_filling(*exh.window, ball_compactum(*exh.window, radius));
    exh.flags.push_back(compute_level_flags(*exh.window, level));
    exh.levels.push_back(std::move(level));
    exh.radii.push_back(radius);
  }
  require_nested(exh);
  return exh;
}

Exhaustion efficient_exhaustion(const GraphGenerator& gen, int depth, int window_radius, int stride) {
  const int needed = depth > 0 ? (depth - 1) * stride + 1 : 0;
  if (window_radius < needed) {
    fail(ErrorKind::WindowTooSmall, "window radius " + std::to_string(window_radius) +
                                        " too small for depth " + std::to_string(depth) +
                                        "; minimal admissible window radius is " +
                                        std::to_string(needed));
  }
  auto window = std::make_shared<const Ball>(materialize_ball(gen, window_radius));
  return efficient_exhaustion(std::move(window), depth, stride);
}

std::optional<std::vector<std::size_t>> ray_exit_indices(const Exhaustion& exh,
                                                         std::span<const VertexId> ray) {
  std::vector<std::size_t> exits;
  for (const auto& level : exh.levels) {
    std::size_t prefix = 0;
    while (prefix < ray.size() && level.contains(ray[prefix])) ++prefix;
    if (prefix == 0 || prefix == ray.size()) return std::nullopt;
    for (std::size_t t = prefix; t < ray.size(); ++t) {
      if (level.contains(ray[t])) return std::nullopt;
    }
    exits.push_back(prefix - 1);
  }
  return exits;
}

namespace {

void require_ray_in_window(const Ball& window, std::span<const VertexId> ray) {
  if (ray.empty()) fail(ErrorKind::RayNotProperInWindow, "empty ray");
  for (std::size_t t = 0; t < ray.size(); ++t) {
    const auto local = window.local(ray[t]);
    if (!local) {
      fail(ErrorKind::RayNotProperInWindow,
           "ray vertex " + std::to_string(ray[t]) + " (index " + std::to_string(t) + ") outside window");
    }
    if (t > 0) {
      const auto& adj = window.adjacent(*window.local(ray[t - 1]));
      if (std::find(adj.begin(), adj.end(), *local) == adj.end()) {
        fail(ErrorKind::RayNotProperInWindow, "ray vertices " + std::to_string(t - 1) + " and " +
                                                  std::to_string(t) + " are not adjacent");
      }
    }
  }
}

}  // namespace

Exhaustion ray_efficient_exhaustion(std::shared_ptr<const Ball> window, std::span<const VertexId> ray,
                                    int depth) {
  require_ray_in_window(*window, ray);
  auto plain = efficient_exhaustion(window, depth);
  if (auto exits = ray_exit_indices(plain, ray)) {
    plain.ray_exits = std::move(*exits);
    return plain;
  }

  // Shuffle J (filled balls, all radii available in the window) with the ray
  // segments L_c = ray[0..c]: L_c ⊆ int J and ray ∩ J ⊆ int_ray L_{c'}.
  const Ball& w = *window;
  std::vector<Compactum> fillings;
  for (int r = 0; r < w.radius(); ++r) fillings.push_back(bounded_filling(w, ball_compactum(w, r)));

  auto segment = [&](std::size_t c) {
    return Compactum(std::vector<VertexId>(ray.begin(), ray.begin() + static_cast<std::ptrdiff_t>(c + 1)));
  };

  Exhaustion exh;
  exh.window = window;
  std::size_t c = 0;
  int j_index = -1;
  for (int i = 0; i < depth; ++i) {
    const auto l_current = segment(c);
    int next = j_index + 1;
    while (next < static_cast<int>(fillings.size()) && !interior_nested(w, l_current, fillings[next])) ++next;
    if (next >= static_cast<int>(fillings.size())) {
      fail(ErrorKind::WindowTooSmall, "no filled ball in the radius-" + std::to_string(w.radius()) +
                                          " window contains the ray segment [0," + std::to_string(c) +
                                          "] in its interior");
    }
    j_index = next;
    std::size_t last_in_j = 0;
    for (std::size_t t = 0; t < ray.size(); ++t) {
      if (fillings[j_index].contains(ray[t])) last_in_j = t;
    }
    c = last_in_j + 1;
    if (c + 1 >= ray.size()) {
      fail(ErrorKind::RayNotProperInWindow, "ray of length " + std::to_string(ray.size()) +
                                                " does not leave level " + std::to_string(i + 1));
    }
    std::vector<VertexId> joined = fillings[j_index].vertices();
    const auto l_next = segment(c);
    joined.insert(joined.end(), l_next.vertices().begin(), l_next.vertices().end());
    auto level = bounded_filling(w, Compactum(std::move(joined)));
    exh.flags.push_back(compute_level_flags(w, level));
    exh.levels.push_back(std::move(level));
    exh.radii.push_back(j_index);
  }
  require_nested(exh);
  auto exits = ray_exit_indices(exh, ray);
  if (!exits) fail(ErrorKind::RayNotProperInWindow, "shuffled exhaustion does not meet the ray in initial segments");
  exh.ray_exits = std::move(*exits);
  return exh;
}

Exhaustion ray_efficient_exhaustion(const GraphGenerator& gen, std::span<const VertexId> ray, int depth,
                                    int window_radius) {
  auto window = std::make_shared<const Ball>(materialize_ball(gen, window_radius));
  return ray_efficient_exhaustion(std::move(window), ray, depth);
}

Exhaustion subsequence(const Exhaustion& exh, std::span<const std::size_t> indices) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= exh.depth() || (i > 0 && indices[i] <= indices[i - 1])) {
      fail(ErrorKind::BadIndices, "subsequence indices must be strictly increasing and below " +
                                      std::to_string(exh.depth()));
    }
  }
  Exhaustion out;
  out.window = exh.window;
  for (auto i : indices) {
    out.levels.push_back(exh.levels[i]);
    out.flags.push_back(exh.flags[i]);
    if (i < exh.radii.size()) out.radii.push_back(exh.radii[i]);
    if (i < exh.ray_exits.size()) out.ray_exits.push_back(exh.ray_exits[i]);
  }
  return out;
}

std::optional<std::string> validate_exhaustion(const Exhaustion& exh) {
  if (!exh.window) return "exhaustion has no window";
  const Ball& w = *exh.window;
  if (exh.flags.size() != exh.levels.size()) return "flag count differs from level count";
  for (std::size_t i = 0; i < exh.levels.size(); ++i) {
    const auto& level = exh.levels[i];
    for (VertexId v : level.vertices()) {
      const auto local = w.local(v);
      if (!local) return "level " + std::to_string(i + 1) + " leaves the window";
      if (w.on_sphere(*local)) return "level " + std::to_string(i + 1) + " touches the window sphere";
    }
    if (i + 1 < exh.levels.size() && !interior_nested(w, level, exh.levels[i + 1])) {
      return "level " + std::to_string(i + 1) + " is not interior to level " + std::to_string(i + 2);
    }
    const auto actual = compute_level_flags(w, level);
    if (exh.flags[i].connected && !actual.connected) return "level " + std::to_string(i + 1) + " is not connected";
    if (exh.flags[i].efficient && !actual.efficient) return "level " + std::to_string(i + 1) + " is not efficient";
  }
  return std::nullopt;
}

}  // namespace lfends
