#include "lfends/tower.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "lfends/error.hpp"

namespace lfends {

std::string_view provenance_name(Provenance p) noexcept {
  switch (p) {
    case Provenance::GraphDerived: return "graph-derived";
    case Provenance::Imported: return "imported";
    case Provenance::Quotient: return "quotient";
    case Provenance::RealizedTree: return "realized-tree";
  }
  return "unknown";
}

std::string_view relation_name(OpenRelation r) noexcept {
  switch (r) {
    case OpenRelation::Disjoint: return "disjoint";
    case OpenRelation::Contains: return "contains";
    case OpenRelation::Contained: return "contained";
    case OpenRelation::Equal: return "equal";
  }
  return "unknown";
}

std::vector<std::size_t> EndTower::sizes() const {
  std::vector<std::size_t> out;
  for (const auto& level : ids) out.push_back(level.size());
  return out;
}

bool EndTower::empty() const {
  return std::all_of(ids.begin(), ids.end(), [](const auto& level) { return level.empty(); });
}

std::size_t EndTower::ancestor(std::size_t level, std::size_t index, std::size_t to_level) const {
  if (to_level > level) fail(ErrorKind::BadIndices, "ancestor level below source level");
  while (level > to_level) {
    index = bonds.at(level - 1).at(index);
    --level;
  }
  return index;
}

std::vector<std::vector<std::size_t>> EndTower::children(std::size_t level) const {
  std::vector<std::vector<std::size_t>> out(size(level));
  if (level + 1 >= depth()) return out;
  const auto& b = bonds[level];
  for (std::size_t c = 0; c < b.size(); ++c) out[b[c]].push_back(c);
  return out;
}

bool EndTower::bond_surjective(std::size_t level) const {
  std::vector<char> hit(size(level), 0);
  for (auto p : bonds.at(level)) hit[p] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

bool EndTower::bond_bijective(std::size_t level) const {
  return size(level) == size(level + 1) && bond_surjective(level);
}

bool EndTower::surjective() const {
  for (std::size_t l = 0; l + 1 < depth(); ++l) {
    if (!bond_surjective(l)) return false;
  }
  return true;
}

std::optional<std::size_t> EndTower::element_of(std::size_t level, VertexId v) const {
  if (!graph) fail(ErrorKind::InvalidArgument, "tower has no graph data");
  const Ball& window = *graph->exhaustion.window;
  const auto local = window.local(v);
  if (!local) return std::nullopt;
  const auto label = graph->decompositions.at(level).label[*local];
  if (label < 0) return std::nullopt;
  const auto element = graph->component_element[level][static_cast<std::size_t>(label)];
  if (element < 0) return std::nullopt;
  return static_cast<std::size_t>(element);
}

std::vector<VertexId> EndTower::element_vertices(std::size_t level, std::size_t index) const {
  if (!graph) fail(ErrorKind::InvalidArgument, "tower has no graph data");
  const Ball& window = *graph->exhaustion.window;
  const auto& comp = graph->decompositions.at(level).components.at(graph->element_component.at(level).at(index));
  std::vector<VertexId> out;
  out.reserve(comp.members.size());
  for (auto i : comp.members) out.push_back(window.vertex(i));
  return out;
}

EndTower make_tower(std::vector<std::size_t> sizes, std::vector<std::vector<std::size_t>> bonds,
                    Provenance provenance) {
  if (!sizes.empty() && bonds.size() != sizes.size() - 1) {
    fail(ErrorKind::InvalidArgument, "need one bond per consecutive level pair");
  }
  EndTower t;
  t.provenance = provenance;
  for (auto n : sizes) {
    std::vector<std::uint64_t> level(n);
    for (std::size_t i = 0; i < n; ++i) level[i] = i;
    t.ids.push_back(std::move(level));
  }
  for (std::size_t l = 0; l < bonds.size(); ++l) {
    if (bonds[l].size() != sizes[l + 1]) fail(ErrorKind::InvalidArgument, "bond domain size mismatch");
    for (auto p : bonds[l]) {
      if (p >= sizes[l]) fail(ErrorKind::InvalidArgument, "bond target out of range");
    }
  }
  t.bonds = std::move(bonds);
  return t;
}

bool is_coherent(const EndTower& t, const EndPrefix& prefix) {
  if (prefix.depth() > t.depth()) return false;
  for (std::size_t l = 0; l < prefix.depth(); ++l) {
    if (prefix.thread[l] >= t.size(l)) return false;
    if (l > 0 && t.parent(l, prefix.thread[l]) != prefix.thread[l - 1]) return false;
  }
  return true;
}

bool TowerMap::injective(std::size_t level) const {
  std::set<std::size_t> seen(levels.at(level).begin(), levels.at(level).end());
  return seen.size() == levels[level].size();
}

bool TowerMap::surjective(std::size_t level, std::size_t target_size) const {
  std::set<std::size_t> seen(levels.at(level).begin(), levels.at(level).end());
  return seen.size() == target_size;
}

TowerMap identity_map(const EndTower& t) {
  TowerMap m;
  for (std::size_t l = 0; l < t.depth(); ++l) {
    std::vector<std::size_t> level(t.size(l));
    for (std::size_t i = 0; i < level.size(); ++i) level[i] = i;
    m.levels.push_back(std::move(level));
  }
  return m;
}

TowerMap compose(const TowerMap& first, const TowerMap& second) {
  if (first.depth() != second.depth()) fail(ErrorKind::DepthMismatch, "cannot compose maps of different depth");
  TowerMap out;
  for (std::size_t l = 0; l < first.depth(); ++l) {
    std::vector<std::size_t> level;
    level.reserve(first.levels[l].size());
    for (auto x : first.levels[l]) level.push_back(second.levels[l].at(x));
    out.levels.push_back(std::move(level));
  }
  return out;
}

bool commutes_with_bonds(const TowerMap& m, const EndTower& source, const EndTower& target) {
  if (m.depth() != source.depth() || m.depth() > target.depth()) return false;
  for (std::size_t l = 0; l + 1 < m.depth(); ++l) {
    for (std::size_t e = 0; e < source.size(l + 1); ++e) {
      if (target.parent(l + 1, m.levels[l + 1][e]) != m.levels[l][source.parent(l + 1, e)]) return false;
    }
  }
  return true;
}

EndTower build_tower(const Exhaustion& exh) {
  if (!exh.window) fail(ErrorKind::InvalidArgument, "exhaustion has no window");
  const Ball& window = *exh.window;
  auto data = std::make_shared<GraphTowerData>();
  data->exhaustion = exh;

  EndTower t;
  t.provenance = Provenance::GraphDerived;
  for (std::size_t l = 0; l < exh.depth(); ++l) {
    auto decomposition = complement_components(window, exh.levels[l]);
    std::vector<std::uint64_t> ids;
    std::vector<std::size_t> element_component;
    std::vector<std::int64_t> component_element(decomposition.components.size(), -1);
    for (std::size_t c = 0; c < decomposition.components.size(); ++c) {
      if (!decomposition.components[c].unbounded()) continue;
      component_element[c] = static_cast<std::int64_t>(ids.size());
      ids.push_back(decomposition.components[c].canonical_rep);
      element_component.push_back(c);
    }
    if (l > 0) {
      // Each component at this level lies inside exactly one component of the
      // previous complement; its canonical rep identifies that parent.
      const auto& prev = data->decompositions[l - 1];
      std::vector<std::size_t> bond;
      for (auto c : element_component) {
        const LocalIndex rep = decomposition.components[c].members.front();
        const auto parent_comp = prev.label[rep];
        const auto parent = parent_comp < 0 ? -1 : data->component_element[l - 1][static_cast<std::size_t>(parent_comp)];
        if (parent < 0) {
          fail(ErrorKind::InvariantViolation, "component " + std::to_string(window.vertex(rep)) + " at level " +
                                                  std::to_string(l + 1) + " has no unbounded parent");
        }
        bond.push_back(static_cast<std::size_t>(parent));
      }
      t.bonds.push_back(std::move(bond));
    }
    t.ids.push_back(std::move(ids));
    data->decompositions.push_back(std::move(decomposition));
    data->element_component.push_back(std::move(element_component));
    data->component_element.push_back(std::move(component_element));
  }
  t.graph = std::move(data);
  if (!t.surjective()) fail(ErrorKind::InvariantViolation, "graph tower has a non-surjective bond");
  return t;
}

EndsReport ends_report(const EndTower& t) {
  EndsReport report;
  report.sizes = t.sizes();
  if (t.depth() == 0) return report;
  report.count_at_depth = t.size(t.depth() - 1);
  const std::size_t bond_count = t.depth() - 1;
  if (bond_count == 0) return report;
  const std::size_t trailing = (bond_count + 1) / 2;
  bool stable = true;
  for (std::size_t l = bond_count - trailing; l < bond_count; ++l) stable = stable && t.bond_bijective(l);
  report.stabilized = stable;
  if (stable) report.stabilized_count = report.count_at_depth;
  return report;
}

EndPrefix prefix_of(const EndTower& t, std::size_t level, std::size_t index) {
  EndPrefix p;
  p.thread.resize(level + 1);
  for (std::size_t l = level + 1; l-- > 0;) {
    p.thread[l] = index;
    if (l > 0) index = t.parent(l, index);
  }
  return p;
}

std::vector<EndPrefix> enumerate_prefixes(const EndTower& t, std::size_t k) {
  if (k > t.depth()) {
    fail(ErrorKind::DepthOutOfRange, "prefix depth " + std::to_string(k) + " exceeds tower depth " +
                                         std::to_string(t.depth()));
  }
  if (k == 0) return {EndPrefix{}};
  std::vector<EndPrefix> out;
  for (std::size_t e = 0; e < t.size(k - 1); ++e) out.push_back(prefix_of(t, k - 1, e));
  auto key = [&](const EndPrefix& p) {
    std::vector<std::uint64_t> ids;
    for (std::size_t l = 0; l < p.depth(); ++l) ids.push_back(t.ids[l][p.thread[l]]);
    return ids;
  };
  std::stable_sort(out.begin(), out.end(), [&](const EndPrefix& a, const EndPrefix& b) { return key(a) < key(b); });
  return out;
}

OpenRelation basic_open_relation(const EndTower& t, std::size_t level_a, std::size_t a, std::size_t level_b,
                                 std::size_t b) {
  if (level_a >= t.depth() || level_b >= t.depth() || a >= t.size(level_a) || b >= t.size(level_b)) {
    fail(ErrorKind::BadIndices, "basic open index out of range");
  }
  if (level_a == level_b) return a == b ? OpenRelation::Equal : OpenRelation::Disjoint;
  if (level_a < level_b) {
    return t.ancestor(level_b, b, level_a) == a ? OpenRelation::Contains : OpenRelation::Disjoint;
  }
  return t.ancestor(level_a, a, level_b) == b ? OpenRelation::Contained : OpenRelation::Disjoint;
}

std::string canonical_code(const EndTower& t) {
  const std::size_t n = t.depth();
  std::vector<std::string> below;
  for (std::size_t l = n; l-- > 0;) {
    std::vector<std::string> codes(t.size(l));
    const auto kids = t.children(l);
    for (std::size_t e = 0; e < codes.size(); ++e) {
      std::vector<std::string> parts;
      parts.reserve(kids[e].size());
      for (auto c : kids[e]) parts.push_back(std::move(below[c]));
      std::sort(parts.begin(), parts.end());
      std::string code = "(";
      for (auto& p : parts) code += p;
      code += ")";
      codes[e] = std::move(code);
    }
    below = std::move(codes);
  }
  std::sort(below.begin(), below.end());
  std::string root = "d" + std::to_string(n) + ":(";
  for (auto& p : below) root += p;
  root += ")";
  return root;
}

EndTower subsample_tower(const EndTower& t, std::span<const std::size_t> levels) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] >= t.depth() || (i > 0 && levels[i] <= levels[i - 1])) {
      fail(ErrorKind::BadIndices, "levels must be strictly increasing and below the tower depth");
    }
  }
  EndTower out;
  out.provenance = t.provenance;
  out.note = t.note;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out.ids.push_back(t.ids[levels[i]]);
    if (i > 0) {
      std::vector<std::size_t> bond(t.size(levels[i]));
      for (std::size_t e = 0; e < bond.size(); ++e) bond[e] = t.ancestor(levels[i], e, levels[i - 1]);
      out.bonds.push_back(std::move(bond));
    }
  }
  return out;
}

TowerMap induced_tower_map(const std::vector<std::vector<std::vector<VertexId>>>& source_images,
                           const EndTower& source, const EndTower& target) {
  if (source.depth() != target.depth()) {
    fail(ErrorKind::DepthMismatch, "source depth " + std::to_string(source.depth()) + " != target depth " +
                                       std::to_string(target.depth()));
  }
  if (!target.graph) fail(ErrorKind::InvalidArgument, "target tower has no graph data");
  const auto& target_exh = target.graph->exhaustion;
  TowerMap m;
  for (std::size_t l = 0; l < source.depth(); ++l) {
    std::vector<std::size_t> level;
    for (std::size_t e = 0; e < source.size(l); ++e) {
      std::optional<std::size_t> hit;
      for (VertexId v : source_images.at(l).at(e)) {
        const auto element = target.element_of(l, v);
        if (!element) {
          std::string where = "a bounded component";
          if (!target_exh.window->contains(v)) {
            where = "no window vertex";
          } else if (target_exh.levels[l].contains(v)) {
            where = "K_" + std::to_string(l + 1);
          }
          fail(ErrorKind::NotProper, "source element " + std::to_string(e) + " at level " + std::to_string(l + 1) +
                                         " has image vertex " + std::to_string(v) + " in " + where);
        }
        if (hit && *hit != *element) {
          fail(ErrorKind::InvariantViolation, "source element " + std::to_string(e) + " at level " +
                                                  std::to_string(l + 1) + " maps into two target components");
        }
        hit = element;
      }
      if (!hit) {
        fail(ErrorKind::InvariantViolation,
             "source element " + std::to_string(e) + " at level " + std::to_string(l + 1) + " has empty image");
      }
      level.push_back(*hit);
    }
    m.levels.push_back(std::move(level));
  }
  if (!commutes_with_bonds(m, source, target)) {
    fail(ErrorKind::InvariantViolation, "induced map does not commute with bonds");
  }
  return m;
}

TowerMap induced_tower_map(const EndTower& source, const EndTower& target, const VertexMap& f) {
  if (!source.graph) fail(ErrorKind::InvalidArgument, "source tower has no graph data");
  std::vector<std::vector<std::vector<VertexId>>> images(source.depth());
  for (std::size_t l = 0; l < source.depth(); ++l) {
    for (std::size_t e = 0; e < source.size(l); ++e) {
      std::vector<VertexId> image;
      for (VertexId v : source.element_vertices(l, e)) {
        auto w = f(v);
        if (!w) fail(ErrorKind::NotProper, "vertex map undefined at " + std::to_string(v));
        image.push_back(*w);
      }
      images[l].push_back(std::move(image));
    }
  }
  return induced_tower_map(images, source, target);
}

Exhaustion pullback_exhaustion(std::shared_ptr<const Ball> source_window, const VertexMap& f,
                               const Exhaustion& target) {
  Exhaustion out;
  out.window = std::move(source_window);
  for (const auto& level : target.levels) {
    std::vector<VertexId> members;
    for (VertexId v : out.window->vertices()) {
      if (auto w = f(v); w && level.contains(*w)) members.push_back(v);
    }
    Compactum k(std::move(members));
    out.flags.push_back(k.empty() ? LevelFlags{} : compute_level_flags(*out.window, k));
    out.levels.push_back(std::move(k));
  }
  return out;
}

EndTower quotient_tower(const EndTower& m, const EndPrefix& eps_m, const EndTower& n, const EndPrefix& eps_n) {
  if (m.depth() != n.depth()) {
    fail(ErrorKind::DepthMismatch, "tower depths " + std::to_string(m.depth()) + " and " +
                                       std::to_string(n.depth()) + " differ");
  }
  if (eps_m.depth() != m.depth() || eps_n.depth() != n.depth()) {
    fail(ErrorKind::DepthMismatch, "quotient needs full-depth prefixes");
  }
  if (!is_coherent(m, eps_m) || !is_coherent(n, eps_n)) fail(ErrorKind::IncoherentPrefix, "prefix is not a thread");

  // Element order per level: merged thread, then the rest of M, then the rest of N.
  auto reindex = [](std::size_t count, std::size_t skip, std::size_t offset) {
    std::vector<std::size_t> map(count);
    std::size_t next = offset;
    for (std::size_t e = 0; e < count; ++e) map[e] = e == skip ? 0 : next++;
    return map;
  };
  EndTower q;
  q.provenance = Provenance::Quotient;
  std::vector<std::vector<std::size_t>> map_m, map_n;
  for (std::size_t l = 0; l < m.depth(); ++l) {
    const std::size_t total = m.size(l) + n.size(l) - 1;
    map_m.push_back(reindex(m.size(l), eps_m.thread[l], 1));
    map_n.push_back(reindex(n.size(l), eps_n.thread[l], m.size(l)));
    std::vector<std::uint64_t> ids(total);
    for (std::size_t i = 0; i < total; ++i) ids[i] = i;
    q.ids.push_back(std::move(ids));
    if (l > 0) {
      std::vector<std::size_t> bond(total);
      for (std::size_t e = 0; e < m.size(l); ++e) bond[map_m[l][e]] = map_m[l - 1][m.parent(l, e)];
      for (std::size_t e = 0; e < n.size(l); ++e) bond[map_n[l][e]] = map_n[l - 1][n.parent(l, e)];
      q.bonds.push_back(std::move(bond));
    }
  }
  return q;
}

EndTower normalize_bonds(const EndTower& t) {
  const std::size_t n = t.depth();
  if (n == 0) return t;
  // image[l][e]: e at level l is hit from the deepest level.
  std::vector<std::vector<char>> image(n);
  image[n - 1].assign(t.size(n - 1), 1);
  for (std::size_t l = n - 1; l-- > 0;) {
    image[l].assign(t.size(l), 0);
    for (std::size_t e = 0; e < t.size(l + 1); ++e) {
      if (image[l + 1][e]) image[l][t.parent(l + 1, e)] = 1;
    }
  }
  // Images of level n-2 (one step shallower); equal at every level means the
  // decreasing image sequence had already stopped shrinking.
  bool stable = true;
  if (n >= 2) {
    std::vector<std::vector<char>> shallower(n - 1);
    shallower[n - 2].assign(t.size(n - 2), 1);
    for (std::size_t l = n - 2; l-- > 0;) {
      shallower[l].assign(t.size(l), 0);
      for (std::size_t e = 0; e < t.size(l + 1); ++e) {
        if (shallower[l + 1][e]) shallower[l][t.parent(l + 1, e)] = 1;
      }
    }
    for (std::size_t l = 0; l + 1 < n - 1; ++l) stable = stable && shallower[l] == image[l];
  }

  EndTower out;
  out.provenance = t.provenance;
  std::vector<std::vector<std::int64_t>> remap(n);
  for (std::size_t l = 0; l < n; ++l) {
    remap[l].assign(t.size(l), -1);
    std::vector<std::uint64_t> ids;
    for (std::size_t e = 0; e < t.size(l); ++e) {
      if (!image[l][e]) continue;
      remap[l][e] = static_cast<std::int64_t>(ids.size());
      ids.push_back(t.ids[l][e]);
    }
    if (ids.empty()) {
      fail(ErrorKind::EmptyLevelAfterNormalization, "level " + std::to_string(l + 1) + " is empty after normalization");
    }
    if (l > 0) {
      std::vector<std::size_t> bond;
      for (std::size_t e = 0; e < t.size(l); ++e) {
        if (image[l][e]) bond.push_back(static_cast<std::size_t>(remap[l - 1][t.parent(l, e)]));
      }
      out.bonds.push_back(std::move(bond));
    }
    out.ids.push_back(std::move(ids));
  }
  out.note = stable ? "eventual images stable" : "eventual images not yet stable at depth " + std::to_string(n);
  return out;
}

TreeRealization tree_realization(const EndTower& t) {
  auto normalized = normalize_bonds(t);
  const std::size_t n = normalized.depth();
  std::vector<Edge> edges;
  std::vector<VertexId> offset(n + 1, 1);
  for (std::size_t l = 0; l < n; ++l) offset[l + 1] = offset[l] + normalized.size(l);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t e = 0; e < normalized.size(l); ++e) {
      const VertexId parent = l == 0 ? 0 : offset[l - 1] + normalized.parent(l, e);
      edges.emplace_back(parent, offset[l] + e);
    }
  }
  auto tree = GraphGenerator::from_edges(edges, {0}, VertexId{0});
  auto window = std::make_shared<const Ball>(materialize_ball(tree, static_cast<int>(n)));
  auto exh = efficient_exhaustion(window, static_cast<int>(n));
  auto tower = build_tower(exh);
  tower.provenance = Provenance::RealizedTree;
  tower.note = normalized.note;
  return TreeRealization{std::move(tree), std::move(exh), std::move(tower), std::move(normalized)};
}

Exhaustion efficient_exhaustion_about(std::shared_ptr<const Ball> window, VertexId center, int depth, int stride) {
  if (depth < 0 || stride < 1) fail(ErrorKind::InvalidArgument, "bad depth or stride");
  const Ball& w = *window;
  std::vector<int> dist(w.size(), -1);
  std::deque<LocalIndex> queue{w.require_local(center)};
  dist[queue.front()] = 0;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (auto u : w.adjacent(v)) {
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  Exhaustion exh;
  exh.window = window;
  for (int i = 0; i < depth; ++i) {
    const int radius = i * stride;
    std::vector<VertexId> members;
    for (LocalIndex v = 0; v < w.size(); ++v) {
      if (dist[v] >= 0 && dist[v] <= radius) members.push_back(w.vertex(v));
    }
    Compactum filled;
    try {
      filled = bounded_filling(w, Compactum(std::move(members)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CompactumTouchesWindowBoundary) throw;
      fail(ErrorKind::WindowTooSmall, "ball of radius " + std::to_string(radius) + " about " +
                                          std::to_string(center) + " reaches the window sphere");
    }
    exh.flags.push_back(compute_level_flags(w, filled));
    exh.levels.push_back(std::move(filled));
    exh.radii.push_back(radius);
  }
  for (std::size_t i = 0; i + 1 < exh.levels.size(); ++i) {
    if (!interior_nested(w, exh.levels[i], exh.levels[i + 1])) {
      fail(ErrorKind::WindowTooSmall, "level " + std::to_string(i + 1) + " about " + std::to_string(center) +
                                          " is not interior to the next inside the window");
    }
  }
  return exh;
}

std::optional<Interleaving> interleave(const Exhaustion& first, const Exhaustion& second) {
  if (first.window != second.window) fail(ErrorKind::InvalidArgument, "interleaving needs a shared window");
  const Ball& w = *first.window;
  Interleaving out;
  out.merged.window = first.window;
  std::size_t i = 0;
  std::size_t j = 0;
  bool take_first = true;
  const Compactum* last = nullptr;
  while (true) {
    const auto& pool = take_first ? first : second;
    std::size_t& cursor = take_first ? i : j;
    while (cursor < pool.depth() && last && !interior_nested(w, *last, pool.levels[cursor])) ++cursor;
    if (cursor >= pool.depth()) break;
    (take_first ? out.first_indices : out.second_indices).push_back(cursor);
    out.merged.levels.push_back(pool.levels[cursor]);
    out.merged.flags.push_back(pool.flags[cursor]);
    last = &pool.levels[cursor];
    ++cursor;
    take_first = !take_first;
  }
  if (out.second_indices.empty()) return std::nullopt;
  // Keep the chain ending on a level of the second exhaustion so both halves
  // have equal length.
  if (out.first_indices.size() > out.second_indices.size()) {
    out.first_indices.pop_back();
    out.merged.levels.pop_back();
    out.merged.flags.pop_back();
  }
  return out;
}

}  // namespace lfends
