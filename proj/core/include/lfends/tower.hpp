#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lfends/exhaust.hpp"
#include "lfends/graph.hpp"

namespace lfends {

enum class Provenance { GraphDerived, Imported, Quotient, RealizedTree };

std::string_view provenance_name(Provenance p) noexcept;

/// Window data behind a graph-derived tower: the exhaustion and the complement
/// decomposition of every level.
struct GraphTowerData {
  Exhaustion exhaustion;
  std::vector<ComplementDecomposition> decompositions;
  /// element_component[l][e] = index into decompositions[l].components.
  std::vector<std::vector<std::size_t>> element_component;
  /// component_element[l][c] = tower element index, or -1 for bounded components.
  std::vector<std::vector<std::int64_t>> component_element;
};

/// Finite truncation U_1 <- U_2 <- ... <- U_n of the inverse system of
/// unbounded complementary components. Levels are indexed from 0 in code;
/// level l holds U_{l+1}.
struct EndTower {
  /// ids[l][e]: label of element e at level l (canonical_rep for graph towers).
  std::vector<std::vector<std::uint64_t>> ids;
  /// bonds[l][e] = parent index at level l of element e at level l + 1.
  std::vector<std::vector<std::size_t>> bonds;
  Provenance provenance = Provenance::Imported;
  std::string note;
  std::shared_ptr<const GraphTowerData> graph;

  std::size_t depth() const { return ids.size(); }
  std::size_t size(std::size_t level) const { return ids.at(level).size(); }
  std::vector<std::size_t> sizes() const;
  bool empty() const;

  std::size_t parent(std::size_t level, std::size_t index) const { return bonds.at(level - 1).at(index); }
  /// Image of (level, index) at an earlier level under composed bonds.
  std::size_t ancestor(std::size_t level, std::size_t index, std::size_t to_level) const;
  /// children(l)[p] = indices at level l + 1 bonding to p at level l.
  std::vector<std::vector<std::size_t>> children(std::size_t level) const;

  /// Bond from level + 1 onto level.
  bool bond_surjective(std::size_t level) const;
  bool bond_bijective(std::size_t level) const;
  bool surjective() const;

  /// Graph-derived towers only: the element whose component contains `v`, or
  /// nullopt when v lies in K_l, outside the window, or in a bounded component.
  std::optional<std::size_t> element_of(std::size_t level, VertexId v) const;
  /// Graph-derived towers only: vertex ids of the component behind an element.
  std::vector<VertexId> element_vertices(std::size_t level, std::size_t index) const;
};

/// Abstract tower from level sizes and bonds; ids are 0..size-1.
EndTower make_tower(std::vector<std::size_t> sizes, std::vector<std::vector<std::size_t>> bonds,
                    Provenance provenance = Provenance::Imported);

/// A coherent thread (u_1, ..., u_k) of element indices.
struct EndPrefix {
  std::vector<std::size_t> thread;

  std::size_t depth() const { return thread.size(); }
  friend bool operator==(const EndPrefix&, const EndPrefix&) = default;
};

bool is_coherent(const EndTower& t, const EndPrefix& prefix);

/// Per-level maps between towers commuting with bonds.
struct TowerMap {
  std::vector<std::vector<std::size_t>> levels;

  std::size_t depth() const { return levels.size(); }
  bool injective(std::size_t level) const;
  bool surjective(std::size_t level, std::size_t target_size) const;
  friend bool operator==(const TowerMap&, const TowerMap&) = default;
};

TowerMap identity_map(const EndTower& t);
/// second ∘ first.
TowerMap compose(const TowerMap& first, const TowerMap& second);
bool commutes_with_bonds(const TowerMap& m, const EndTower& source, const EndTower& target);

/// U_l = unbounded components of the complement of K_l, bonded by containment.
EndTower build_tower(const Exhaustion& exh);

struct EndsReport {
  std::vector<std::size_t> sizes;
  std::size_t count_at_depth = 0;
  /// Heuristic: every bond in the trailing half is a bijection.
  bool stabilized = false;
  std::optional<std::size_t> stabilized_count;
};

EndsReport ends_report(const EndTower& t);

/// One prefix per element of level k-1 (k = 0 gives the single empty prefix),
/// lexicographic in element ids.
std::vector<EndPrefix> enumerate_prefixes(const EndTower& t, std::size_t k);
EndPrefix prefix_of(const EndTower& t, std::size_t level, std::size_t index);

enum class OpenRelation { Disjoint, Contains, Contained, Equal };
std::string_view relation_name(OpenRelation r) noexcept;

/// Relation between the basic open sets of (level_a, a) and (level_b, b).
OpenRelation basic_open_relation(const EndTower& t, std::size_t level_a, std::size_t a,
                                 std::size_t level_b, std::size_t b);

/// Label-independent code of the layered fiber tree (AHU form); equal codes
/// iff the towers are isomorphic through bond-preserving bijections.
std::string canonical_code(const EndTower& t);

/// Tower with the given levels kept and bonds composed between them.
EndTower subsample_tower(const EndTower& t, std::span<const std::size_t> levels);

using VertexMap = std::function<std::optional<VertexId>(VertexId)>;

/// Induced map of a vertex map between graph-derived towers: each source
/// component goes to the target component holding its image. Throws NotProper
/// when an image lands in a compactum or a bounded component, and
/// InvariantViolation when one source component is split between targets.
TowerMap induced_tower_map(const EndTower& source, const EndTower& target, const VertexMap& f);
/// Same, with the image vertex sets of every source element given directly.
TowerMap induced_tower_map(const std::vector<std::vector<std::vector<VertexId>>>& source_images,
                           const EndTower& source, const EndTower& target);

/// Levels f^{-1}(K_i) inside the source window.
Exhaustion pullback_exhaustion(std::shared_ptr<const Ball> source_window, const VertexMap& f,
                               const Exhaustion& target);

/// Wedge of two towers at the given full-depth threads.
EndTower quotient_tower(const EndTower& m, const EndPrefix& eps_m, const EndTower& n,
                        const EndPrefix& eps_n);

/// Restricts every level to the image of the deepest level; the note records
/// whether the images had stabilized.
EndTower normalize_bonds(const EndTower& t);

struct TreeRealization {
  GraphGenerator tree;
  Exhaustion exhaustion;
  EndTower tower;
  EndTower normalized;
};

TreeRealization tree_realization(const EndTower& t);

/// Filled balls about `center` computed inside an existing window.
Exhaustion efficient_exhaustion_about(std::shared_ptr<const Ball> window, VertexId center, int depth,
                                      int stride = 1);

/// W-shaped interleaving K_{a_1} ⊆ int L_{b_1} ⊆ int K_{a_2} ⊆ ... of two
/// exhaustions sharing a window.
struct Interleaving {
  std::vector<std::size_t> first_indices;
  std::vector<std::size_t> second_indices;
  Exhaustion merged;
};

std::optional<Interleaving> interleave(const Exhaustion& first, const Exhaustion& second);

/// TOWER v1 text format.
std::string write_tower(const EndTower& t);
EndTower read_tower(std::string_view text);

}  // namespace lfends
