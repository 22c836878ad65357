#include "lfends/rays.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <set>
#include <sstream>

#include "lfends/error.hpp"

namespace lfends {

namespace {

const GraphTowerData& graph_data(const EndTower& tower) {
  if (!tower.graph) fail(ErrorKind::InvalidArgument, "tower has no graph data");
  return *tower.graph;
}

// Index of the first level containing local vertex v, or depth when none does.
std::vector<std::size_t> first_levels(const Exhaustion& exh) {
  const Ball& w = *exh.window;
  std::vector<std::size_t> out(w.size(), exh.depth());
  for (std::size_t l = exh.depth(); l-- > 0;) {
    for (VertexId v : exh.levels[l].vertices()) out[w.require_local(v)] = l;
  }
  return out;
}

void require_full_thread(const EndTower& tower, const EndPrefix& eps) {
  if (eps.depth() != tower.depth()) {
    fail(ErrorKind::DepthMismatch, "prefix depth " + std::to_string(eps.depth()) + " != tower depth " +
                                       std::to_string(tower.depth()));
  }
  if (!is_coherent(tower, eps)) fail(ErrorKind::IncoherentPrefix, "prefix is not a coherent thread");
}

}  // namespace

std::optional<std::string> ray_violation(const Ball& window, std::span<const VertexId> ray) {
  std::set<VertexId> seen;
  for (std::size_t t = 0; t < ray.size(); ++t) {
    const auto local = window.local(ray[t]);
    if (!local) return "vertex " + std::to_string(ray[t]) + " outside window";
    if (!seen.insert(ray[t]).second) return "vertex " + std::to_string(ray[t]) + " repeated";
    if (t > 0) {
      const auto& adj = window.adjacent(*window.local(ray[t - 1]));
      if (std::find(adj.begin(), adj.end(), *local) == adj.end()) {
        return "indices " + std::to_string(t - 1) + " and " + std::to_string(t) + " not adjacent";
      }
    }
  }
  return std::nullopt;
}

Ray find_ray(const EndTower& tower, const EndPrefix& eps) {
  const auto& data = graph_data(tower);
  require_full_thread(tower, eps);
  const auto& exh = data.exhaustion;
  const Ball& w = *exh.window;
  const std::size_t n = tower.depth();
  if (n == 0) fail(ErrorKind::EmptyTower, "cannot find a ray for an empty tower");

  // phase 0 is K_1, phase p is eps_p inside K_{p+1}, phase n is eps_n.
  std::vector<int> phase(w.size(), -1);
  for (LocalIndex v = 0; v < w.size(); ++v) {
    const VertexId id = w.vertex(v);
    if (exh.levels[0].contains(id)) {
      phase[v] = 0;
      continue;
    }
    for (std::size_t p = n; p >= 1; --p) {
      if (tower.element_of(p - 1, id) != eps.thread[p - 1]) continue;
      if (p == n || exh.levels[p].contains(id)) {
        phase[v] = static_cast<int>(p);
        break;
      }
    }
  }

  const LocalIndex start = w.require_local(w.center());
  if (phase[start] != 0) fail(ErrorKind::InvalidArgument, "basepoint outside the first level");
  std::vector<std::int64_t> prev(w.size(), -2);
  prev[start] = -1;
  std::deque<LocalIndex> queue{start};
  std::optional<LocalIndex> target;
  while (!queue.empty() && !target) {
    const LocalIndex v = queue.front();
    queue.pop_front();
    for (LocalIndex u : w.adjacent(v)) {
      if (prev[u] != -2 || (phase[u] != phase[v] && phase[u] != phase[v] + 1)) continue;
      prev[u] = v;
      if (phase[u] == static_cast<int>(n) && w.on_sphere(u)) {
        target = u;
        break;
      }
      queue.push_back(u);
    }
  }
  if (!target) {
    fail(ErrorKind::WindowTooSmall, "no path to the window sphere descends through the requested thread; "
                                    "enlarge the window radius beyond " + std::to_string(w.radius()));
  }
  Ray ray;
  for (std::int64_t v = *target; v >= 0; v = prev[static_cast<std::size_t>(v)]) {
    ray.vertices.push_back(w.vertex(static_cast<LocalIndex>(v)));
  }
  std::reverse(ray.vertices.begin(), ray.vertices.end());
  auto exits = ray_exit_indices(exh, ray.vertices);
  if (!exits) fail(ErrorKind::InvariantViolation, "layered search produced a non-proper ray");
  ray.exit_indices = std::move(*exits);
  return ray;
}

EndPrefix points_to(std::span<const VertexId> ray, const EndTower& tower) {
  const auto& exh = graph_data(tower).exhaustion;
  if (auto why = ray_violation(*exh.window, ray)) fail(ErrorKind::RayNotProperInWindow, *why);
  auto exits = ray_exit_indices(exh, ray);
  if (!exits) fail(ErrorKind::RayNotProperInWindow, "ray does not meet every level in a proper initial segment");
  EndPrefix p;
  for (std::size_t l = 0; l < tower.depth(); ++l) {
    std::optional<std::size_t> element;
    for (std::size_t t = (*exits)[l] + 1; t < ray.size(); ++t) {
      const auto e = tower.element_of(l, ray[t]);
      if (!e || (element && *element != *e)) {
        fail(ErrorKind::RayNotProperInWindow, "ray tail beyond level " + std::to_string(l + 1) +
                                                  " does not stay in one unbounded component");
      }
      element = e;
    }
    p.thread.push_back(*element);
  }
  return p;
}

Retraction build_retraction(const Exhaustion& exh, std::span<const VertexId> ray) {
  if (exh.depth() == 0) fail(ErrorKind::InvalidArgument, "empty exhaustion");
  const Ball& w = *exh.window;
  if (auto why = ray_violation(w, ray)) fail(ErrorKind::RayNotProperInWindow, *why);
  auto exits = ray_exit_indices(exh, ray);
  if (!exits) fail(ErrorKind::NotRayEfficient, "some level meets the ray in a non-initial segment");

  Retraction rho;
  rho.window = exh.window;
  rho.b = *exits;
  for (const auto& level : exh.levels) {
    std::size_t a = ray.size();
    for (std::size_t t = 0; t < ray.size() && a == ray.size(); ++t) {
      if (!level.contains(ray[t])) continue;
      for (LocalIndex u : w.adjacent(w.require_local(ray[t]))) {
        if (!level.contains(w.vertex(u))) {
          a = t;
          break;
        }
      }
    }
    rho.a.push_back(a);
  }

  const auto first = first_levels(exh);
  rho.values.resize(w.size());
  for (LocalIndex v = 0; v < w.size(); ++v) {
    rho.values[v] = first[v] < exh.depth() ? rho.a[first[v]] : rho.b.back() + 1;
  }
  for (std::size_t t = 0; t < ray.size(); ++t) rho.values[w.require_local(ray[t])] = t;
  for (LocalIndex v = 0; v < w.size(); ++v) {
    for (LocalIndex u : w.adjacent(v)) {
      const auto x = rho.values[v];
      const auto y = rho.values[u];
      rho.edge_spread = std::max(rho.edge_spread, x > y ? x - y : y - x);
    }
  }
  return rho;
}

std::optional<std::string> retraction_violation(const Exhaustion& exh, std::span<const VertexId> ray,
                                                const Retraction& rho) {
  const Ball& w = *exh.window;
  for (std::size_t t = 0; t < ray.size(); ++t) {
    if (rho.values[w.require_local(ray[t])] != t) return "rho(r(" + std::to_string(t) + ")) != " + std::to_string(t);
  }
  for (std::size_t i = 0; i < rho.a.size(); ++i) {
    if (rho.a[i] > rho.b[i]) return "a > b at level " + std::to_string(i + 1);
    if (i + 1 < rho.a.size() && rho.b[i] >= rho.a[i + 1]) return "b not below next a at level " + std::to_string(i + 1);
  }
  for (std::size_t i = 0; i + 1 < exh.depth(); ++i) {
    for (LocalIndex v = 0; v < w.size(); ++v) {
      if (rho.values[v] <= rho.a[i] && !exh.levels[i + 1].contains(w.vertex(v))) {
        return "vertex " + std::to_string(w.vertex(v)) + " has value <= a_" + std::to_string(i + 1) +
               " outside level " + std::to_string(i + 2);
      }
    }
  }
  return std::nullopt;
}

TreeEmbedding make_tree_embedding(const EndTower& tower, std::vector<TreeNode> nodes) {
  const auto& w = *graph_data(tower).exhaustion.window;
  if (nodes.empty() || nodes[0].depth != 0) fail(ErrorKind::InvalidArgument, "node 0 must be the root");
  std::set<VertexId> branches;
  std::size_t max_depth = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    if (!w.contains(node.branch)) fail(ErrorKind::UnknownVertex, "branch vertex " + std::to_string(node.branch) + " outside window");
    if (!branches.insert(node.branch).second) {
      fail(ErrorKind::InvalidArgument, "branch vertex " + std::to_string(node.branch) + " used twice");
    }
    if (i == 0) continue;
    if (node.parent >= i || nodes[node.parent].depth + 1 != node.depth) {
      fail(ErrorKind::InvalidArgument, "node " + std::to_string(i) + " has a bad parent");
    }
    max_depth = std::max(max_depth, node.depth);
  }
  if (max_depth > tower.depth()) fail(ErrorKind::DepthMismatch, "tree deeper than the tower");

  std::set<VertexId> interiors;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const auto& path = nodes[i].path;
    if (path.size() < 2 || path.front() != nodes[nodes[i].parent].branch || path.back() != nodes[i].branch) {
      fail(ErrorKind::InvalidArgument, "path of node " + std::to_string(i) + " does not join its branch vertices");
    }
    if (auto why = ray_violation(w, path)) fail(ErrorKind::InvalidArgument, "path of node " + std::to_string(i) + ": " + *why);
    for (std::size_t t = 1; t + 1 < path.size(); ++t) {
      if (branches.count(path[t]) || !interiors.insert(path[t]).second) {
        fail(ErrorKind::InvalidArgument, "paths are not internally disjoint at " + std::to_string(path[t]));
      }
    }
  }

  TreeEmbedding emb;
  emb.nodes = std::move(nodes);
  const auto& ns = emb.nodes;
  emb.tree_nodes.resize(max_depth);
  std::vector<std::size_t> index_in_level(ns.size(), 0);
  for (std::size_t i = 1; i < ns.size(); ++i) {
    index_in_level[i] = emb.tree_nodes[ns[i].depth - 1].size();
    emb.tree_nodes[ns[i].depth - 1].push_back(i);
  }
  std::vector<std::size_t> sizes;
  std::vector<std::vector<std::size_t>> bonds;
  for (std::size_t l = 0; l < max_depth; ++l) {
    sizes.push_back(emb.tree_nodes[l].size());
    if (l > 0) {
      std::vector<std::size_t> bond;
      for (auto i : emb.tree_nodes[l]) bond.push_back(index_in_level[ns[i].parent]);
      bonds.push_back(std::move(bond));
    }
  }
  emb.tree_tower = make_tower(std::move(sizes), std::move(bonds));

  // Image of a subtree: its root branch plus every path hanging below it.
  std::vector<std::vector<VertexId>> image(ns.size());
  for (std::size_t i = ns.size(); i-- > 1;) {
    image[i].push_back(ns[i].branch);
    const auto p = ns[i].parent;
    if (p == 0) continue;
    image[p].insert(image[p].end(), ns[i].path.begin() + 1, ns[i].path.end());
    image[p].insert(image[p].end(), image[i].begin(), image[i].end());
  }
  for (std::size_t l = 0; l < max_depth; ++l) {
    std::vector<std::size_t> level;
    for (auto i : emb.tree_nodes[l]) {
      std::optional<std::size_t> hit;
      for (VertexId v : image[i]) {
        const auto e = tower.element_of(l, v);
        if (!e) {
          fail(ErrorKind::NotProper, "tree node " + std::to_string(i) + " reaches vertex " + std::to_string(v) +
                                         " outside the unbounded components of level " + std::to_string(l + 1));
        }
        if (hit && *hit != *e) {
          fail(ErrorKind::InvariantViolation, "subtree of node " + std::to_string(i) + " meets two components");
        }
        hit = e;
      }
      level.push_back(*hit);
    }
    emb.tower_map.levels.push_back(std::move(level));
  }
  if (!commutes_with_bonds(emb.tower_map, emb.tree_tower, tower)) {
    fail(ErrorKind::InvariantViolation, "tree map does not commute with bonds");
  }
  return emb;
}

TreeEmbedding embed_end_tree(const EndTower& tower) {
  const auto& data = graph_data(tower);
  const auto& exh = data.exhaustion;
  const Ball& w = *exh.window;
  const std::size_t n = tower.depth();

  std::vector<TreeNode> nodes;
  nodes.push_back(TreeNode{0, 0, w.center(), {w.center()}});
  std::vector<std::vector<std::size_t>> node_of(n);
  std::set<VertexId> blocked{w.center()};
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t e = 0; e < tower.size(l); ++e) {
      const auto members = tower.element_vertices(l, e);
      VertexId branch = members.front();
      if (l + 1 < n) {
        auto it = std::find_if(members.begin(), members.end(), [&](VertexId v) { return exh.levels[l + 1].contains(v); });
        if (it == members.end()) fail(ErrorKind::WindowTooSmall, "component misses the next level");
        branch = *it;
      }
      node_of[l].push_back(nodes.size());
      const std::size_t parent = l == 0 ? 0 : node_of[l - 1][tower.parent(l, e)];
      nodes.push_back(TreeNode{l + 1, parent, branch, {}});
      blocked.insert(branch);
    }
  }

  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const std::size_t l = nodes[i].depth - 1;
    const LocalIndex from = w.require_local(nodes[nodes[i].parent].branch);
    const LocalIndex to = w.require_local(nodes[i].branch);
    // Interior stays in the parent's component, or in K_1 plus the target's
    // component for edges leaving the root.
    auto allowed = [&](LocalIndex u) {
      const VertexId id = w.vertex(u);
      if (blocked.count(id)) return false;
      if (l == 0) return exh.levels[0].contains(id) || tower.element_of(0, id) == tower.element_of(0, nodes[i].branch);
      const auto parent_element = tower.element_of(l - 1, nodes[nodes[i].parent].branch);
      return tower.element_of(l - 1, id) == parent_element;
    };
    std::vector<std::int64_t> prev(w.size(), -2);
    prev[from] = -1;
    std::deque<LocalIndex> queue{from};
    bool found = false;
    while (!queue.empty() && !found) {
      const LocalIndex v = queue.front();
      queue.pop_front();
      for (LocalIndex u : w.adjacent(v)) {
        if (prev[u] != -2) continue;
        if (u == to) {
          prev[u] = v;
          found = true;
          break;
        }
        if (!allowed(u)) continue;
        prev[u] = v;
        queue.push_back(u);
      }
    }
    if (!found) {
      fail(ErrorKind::RoutingFailed, "no free path from " + std::to_string(w.vertex(from)) + " to " +
                                         std::to_string(w.vertex(to)));
    }
    std::vector<VertexId> path;
    for (std::int64_t v = to; v >= 0; v = prev[static_cast<std::size_t>(v)]) path.push_back(w.vertex(static_cast<LocalIndex>(v)));
    std::reverse(path.begin(), path.end());
    for (std::size_t t = 1; t + 1 < path.size(); ++t) blocked.insert(path[t]);
    nodes[i].path = std::move(path);
  }
  return make_tree_embedding(tower, std::move(nodes));
}

std::vector<std::size_t> tree_retraction(const EndTower& tower, const TreeEmbedding& emb) {
  const auto& exh = graph_data(tower).exhaustion;
  const Ball& w = *exh.window;
  for (std::size_t l = 0; l < emb.tower_map.depth(); ++l) {
    if (!emb.tower_map.injective(l)) {
      fail(ErrorKind::NonInjectiveEndMap, "embedded tree has " + std::to_string(emb.tree_tower.size(l)) +
                                              " ends at level " + std::to_string(l + 1) + " but they reach only " +
                                              std::to_string(std::set<std::size_t>(emb.tower_map.levels[l].begin(),
                                                                                   emb.tower_map.levels[l].end())
                                                                 .size()) +
                                              " components");
    }
  }

  const std::size_t tree_depth = emb.tower_map.depth();
  std::vector<std::vector<std::int64_t>> hit(tower.depth());
  for (std::size_t l = 0; l < tower.depth(); ++l) {
    hit[l].assign(tower.size(l), -1);
    if (l >= tree_depth) continue;
    for (std::size_t k = 0; k < emb.tower_map.levels[l].size(); ++k) {
      hit[l][emb.tower_map.levels[l][k]] = static_cast<std::int64_t>(emb.tree_nodes[l][k]);
    }
  }
  std::vector<std::vector<std::size_t>> kids(emb.nodes.size());
  for (std::size_t i = 1; i < emb.nodes.size(); ++i) kids[emb.nodes[i].parent].push_back(i);

  // Unhit components follow the least child thread below their nearest hit
  // ancestor.
  auto node_for = [&](std::size_t level, std::size_t element) {
    std::size_t node = 0;
    for (std::size_t l = level + 1; l-- > 0;) {
      const auto a = tower.ancestor(level, element, l);
      if (hit[l][a] >= 0) {
        node = static_cast<std::size_t>(hit[l][a]);
        break;
      }
    }
    while (emb.nodes[node].depth < level + 1 && !kids[node].empty()) node = kids[node].front();
    return node;
  };

  const auto first = first_levels(exh);
  std::vector<std::size_t> rho(w.size(), 0);
  for (LocalIndex v = 0; v < w.size(); ++v) {
    if (first[v] == 0) continue;
    const std::size_t level = first[v] - 1;
    const auto e = tower.element_of(level, w.vertex(v));
    if (!e) fail(ErrorKind::InvariantViolation, "vertex " + std::to_string(w.vertex(v)) + " in a bounded component");
    rho[v] = node_for(level, *e);
  }
  return rho;
}

TowerMap tree_retraction_map(const EndTower& tower, const TreeEmbedding& emb, const std::vector<std::size_t>& rho) {
  const Ball& w = *graph_data(tower).exhaustion.window;
  std::vector<std::size_t> position(emb.nodes.size(), 0);
  for (const auto& level : emb.tree_nodes) {
    for (std::size_t k = 0; k < level.size(); ++k) position[level[k]] = k;
  }
  TowerMap m;
  for (std::size_t l = 0; l < emb.tree_tower.depth(); ++l) {
    std::vector<std::size_t> level;
    for (std::size_t e = 0; e < tower.size(l); ++e) {
      std::optional<std::size_t> target;
      for (VertexId v : tower.element_vertices(l, e)) {
        std::size_t node = rho[w.require_local(v)];
        if (emb.nodes[node].depth < l + 1) continue;
        while (emb.nodes[node].depth > l + 1) node = emb.nodes[node].parent;
        if (target && *target != position[node]) {
          fail(ErrorKind::InvariantViolation, "component " + std::to_string(e) + " at level " + std::to_string(l + 1) +
                                                  " retracts onto two tree branches");
        }
        target = position[node];
      }
      if (!target) {
        fail(ErrorKind::NotProper, "component " + std::to_string(e) + " at level " + std::to_string(l + 1) +
                                       " retracts into the tree's first levels");
      }
      level.push_back(*target);
    }
    m.levels.push_back(std::move(level));
  }
  return m;
}

std::string write_ray(std::span<const VertexId> ray) {
  std::ostringstream out;
  out << "ray v1\n";
  for (VertexId v : ray) out << v << "\n";
  return out.str();
}

std::vector<VertexId> read_ray(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<VertexId> out;
  bool header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    for (std::string tok; words >> tok;) {
      if (tok.front() == '#') break;
      if (!header) {
        std::string version;
        if (tok != "ray" || !(words >> version) || version != "v1") {
          fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 'ray v1' header");
        }
        header = true;
        continue;
      }
      VertexId v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad vertex id '" + tok + "'");
      }
      out.push_back(v);
    }
  }
  if (!header) fail(ErrorKind::ParseError, "missing 'ray v1' header");
  return out;
}

}  // namespace lfends
