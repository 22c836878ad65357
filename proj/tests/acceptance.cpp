// Acceptance driver: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "lfends/endsum.hpp"
#include "lfends/error.hpp"
#include "lfends/h0.hpp"
#include "lfends/rays.hpp"
#include "oracles.hpp"

using namespace lfends;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::vector<std::string> full_corpus() {
  auto c = oracle::corpus();
  c.push_back("regular_tree(3)");
  return c;
}

EndTower cantor(std::size_t depth) {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<std::size_t>> bonds;
  for (std::size_t l = 0; l < depth; ++l) {
    sizes.push_back(std::size_t{2} << l);
    if (l > 0) {
      std::vector<std::size_t> b;
      for (std::size_t e = 0; e < sizes[l]; ++e) b.push_back(e / 2);
      bonds.push_back(b);
    }
  }
  return make_tower(sizes, bonds);
}

Cochain random_cochain(std::mt19937_64& g, const EndTower& t, std::size_t level) {
  std::uniform_int_distribution<int> v(-1000, 1000);
  Cochain c{level, {}};
  for (std::size_t e = 0; e < t.size(level); ++e) c.values.push_back(v(g));
  return c;
}

std::size_t pick(std::mt19937_64& g, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(0, hi)(g); }

// 1. End counts against the brute-force tower and closed forms.
void end_counts(Check& c) {
  const int depth = 5;
  for (const auto& name : {"line", "halfline", "grid(2)", "grid(3)", "regular_tree(4)", "free_group(2)", "comb"}) {
    const auto gen = GraphGenerator::from_name(name);
    const auto t = build_tower(efficient_exhaustion(gen, depth, depth + 2));
    const auto ref = oracle::tower(gen, depth, depth + 2);
    c.expect(t.sizes() == ref.sizes(), std::string(name) + " sizes " + join(t.sizes()) + " vs oracle " +
                                           join(ref.sizes()));
    c.expect(t.sizes() == oracle::expected_sizes(name, depth), std::string(name) + " closed form");
    const auto rep = ends_report(t);
    const std::string n = name;
    if (n == "line") c.expect(rep.stabilized_count == std::optional<std::size_t>(2), "line not 2 stabilized ends");
    if (n == "halfline" || n == "grid(2)" || n == "grid(3)") {
      c.expect(rep.stabilized_count == std::optional<std::size_t>(1), n + " not 1 stabilized end");
    }
    if (n == "regular_tree(4)" || n == "free_group(2)") {
      std::vector<std::size_t> want{4, 12, 36, 108, 324};
      c.expect(t.sizes() == want && !rep.stabilized, n + " sizes or stabilization");
    }
    if (n == "comb") {
      for (std::size_t l = 0; l + 1 < t.depth(); ++l) c.expect(t.size(l) < t.size(l + 1), "comb not increasing");
      c.expect(!rep.stabilized, "comb stabilized");
    }
  }
  c.why << "line 2, halfline/grid(2)/grid(3) 1, tree 4 12 36 108 324, comb 2..6";
}

// 2. Monotonicity at depth 6.
void monotonicity(Check& c) {
  for (const auto& name : full_corpus()) {
    const auto exh = efficient_exhaustion(GraphGenerator::from_name(name), 6, 8);
    const auto t = build_tower(exh);
    for (std::size_t l = 0; l + 1 < 6; ++l) {
      c.expect(t.size(l) <= t.size(l + 1), name + " size drops at level " + std::to_string(l + 1));
      c.expect(t.bond_surjective(l), name + " bond not surjective");
      c.expect(interior_nested(*exh.window, exh.levels[l], exh.levels[l + 1]), name + " not interior nested");
    }
    for (const auto& k : exh.levels) c.expect(bounded_filling(*exh.window, k) == k, name + " filling not idempotent");
  }
  c.why << "9 graphs, depth 6";
}

// 3. Two basepoints: interleave, check both sub-towers, compare codes.
void basepoints(Check& c) {
  const std::vector<std::pair<std::string, VertexId>> cases{
      {"line", codec::zigzag(1)}, {"grid(2)", codec::grid_encode({1, 1})}, {"regular_tree(3)", 1}};
  for (const auto& [name, other] : cases) {
    const auto gen = GraphGenerator::from_name(name);
    auto window = std::make_shared<const Ball>(materialize_ball(gen, 13));
    const auto a = efficient_exhaustion_about(window, gen.basepoint(), 11);
    const auto b = efficient_exhaustion_about(window, other, 11);
    const auto w = interleave(a, b);
    c.expect(w && w->first_indices.size() >= 2, name + " no interleaving");
    if (!w) continue;
    const auto merged = build_tower(w->merged);
    std::vector<std::size_t> even, odd;
    for (std::size_t i = 0; i < merged.depth(); ++i) (i % 2 ? odd : even).push_back(i);
    c.expect(canonical_code(subsample_tower(merged, even)) == canonical_code(build_tower(subsequence(a, w->first_indices))),
             name + " first half disagrees");
    c.expect(canonical_code(subsample_tower(merged, odd)) == canonical_code(build_tower(subsequence(b, w->second_indices))),
             name + " second half disagrees");
    const auto ta = build_tower(efficient_exhaustion_about(window, gen.basepoint(), 4));
    const auto tb = build_tower(efficient_exhaustion_about(window, other, 4));
    c.expect(canonical_code(ta) == canonical_code(tb), name + " codes differ");
    const auto ref = oracle::tower_about(oracle::ball_about(gen, other, 13), 13, 4);
    c.expect(tb.sizes() == ref.sizes(), name + " second basepoint sizes vs oracle");
  }
  c.why << "line, grid(2), regular_tree(3)";
}

// 4. Rays and retractions for every depth-5 prefix.
void rays(Check& c) {
  std::size_t count = 0;
  for (const auto& name : full_corpus()) {
    const auto exh = efficient_exhaustion(GraphGenerator::from_name(name), 5, 7);
    const auto t = build_tower(exh);
    const Ball& w = *exh.window;
    for (const auto& eps : enumerate_prefixes(t, 5)) {
      ++count;
      const auto ray = find_ray(t, eps);
      c.expect(points_to(ray, t) == eps, name + " points_to");
      const auto rho = build_retraction(exh, ray.vertices);
      for (std::size_t i = 0; i < ray.vertices.size(); ++i) c.expect(rho.value(ray.vertices[i]) == i, name + " rho r != id");
      c.expect(!retraction_violation(exh, ray.vertices, rho).has_value(), name + " retraction violation");
      for (std::size_t i = 0; i + 1 < exh.depth(); ++i) {
        for (LocalIndex v = 0; v < w.size(); ++v) {
          if (rho.values[v] <= rho.a[i]) c.expect(exh.levels[i + 1].contains(w.vertex(v)), name + " preimage escapes");
        }
      }
    }
  }
  c.why << count << " prefixes";
}

// 5. Bases at depths 1..5 over Z and F_5.
void bases(Check& c) {
  const auto f5 = Coefficients::prime_field(5);
  for (const auto& name : full_corpus()) {
    for (int n = 1; n <= 5; ++n) {
      const auto t = build_tower(efficient_exhaustion(GraphGenerator::from_name(name), n, n + 2));
      const std::size_t k = static_cast<std::size_t>(n) - 1;
      const auto b = basis(t);
      const auto tag = name + " depth " + std::to_string(n);
      c.expect(b.size() == t.size(k), tag + " basis size");
      const auto m = basis_matrix(t, b, k);
      c.expect(m.size() == t.size(k) && m.front().size() == t.size(k), tag + " not square");
      const auto d = determinant(m);
      c.expect(d == 1 || d == -1, tag + " det");
      c.expect(d == oracle::det_euclid(m), tag + " det vs oracle");
      const auto d5 = determinant(m, f5);
      c.expect(d5 == 1 || d5 == 4, tag + " det over F_5");
      c.expect(oracle::rank_mod(m, 5) == m.size(), tag + " rank over F_5");
      const auto r = reduced_basis(t, enumerate_prefixes(t, k + 1).front());
      c.expect(r.size() + 1 == t.size(k), tag + " reduced size");
      const auto rm = basis_matrix(t, r, k);
      const auto rd = oracle::det_euclid(rm);
      c.expect(rd == 1 || rd == -1, tag + " reduced det");
      if (name == "binary_tree") c.expect(b.size() == (std::size_t{1} << n), tag + " not 2^n");
    }
  }
  c.why << "9 graphs, depths 1..5, binary 2 4 8 16 32";
}

// 6. Randomized algebra.
void algebra(Check& c) {
  auto g = oracle::rng();
  for (const auto& name : full_corpus()) {
    const auto gen = GraphGenerator::from_name(name);
    auto window = std::make_shared<const Ball>(materialize_ball(gen, 8));
    const auto target = build_tower(efficient_exhaustion(window, 4));
    // Coarser levels on the same window; the identity is proper into target.
    const auto source = build_tower(efficient_exhaustion(window, 4, 2));
    const auto m = induced_tower_map(source, target, [](VertexId v) { return std::optional<VertexId>(v); });
    c.expect(commutes_with_bonds(m, source, target), name + " induced map");
    const auto b = basis(target);
    const auto threads = enumerate_prefixes(target, 4);
    const auto source_threads = enumerate_prefixes(source, 4);
    c.expect(induced_hom(m, source, one(target)) == one(source), name + " induced 1");
    for (int trial = 0; trial < 200; ++trial) {
      const auto x = normalize(target, random_cochain(g, target, pick(g, 3)));
      const auto y = normalize(target, random_cochain(g, target, pick(g, 3)));
      const auto& eps = threads[pick(g, threads.size() - 1)];
      c.expect(evaluate(add(x, y), eps) == evaluate(x, eps) + evaluate(y, eps), name + " evaluate additive");
      c.expect(evaluate(pointwise_mul(x, y), eps) == evaluate(x, eps) * evaluate(y, eps), name + " evaluate mult");
      c.expect(evaluate(one(target), eps) == 1, name + " evaluate 1");
      c.expect(combine(target, b, expand_in_basis(x, b)) == x, name + " expansion");
      const auto reduced = reduced_basis(target, eps);
      c.expect(combine(target, reduced, expand_in_basis(x, reduced)) == x, name + " reduced expansion");
      const auto [a, rest] = split_class(x, eps);
      c.expect(add(scalar_mul(a, one(target)), rest) == x && evaluate(rest, eps) == 0, name + " split");
      c.expect(induced_hom(m, source, pointwise_mul(x, y)) ==
                   pointwise_mul(induced_hom(m, source, x), induced_hom(m, source, y)),
               name + " induced mult");
      const auto& s = source_threads[pick(g, source_threads.size() - 1)];
      EndPrefix image;
      for (std::size_t l = 0; l < 4; ++l) image.thread.push_back(m.levels[l][s.thread[l]]);
      c.expect(evaluate(induced_hom(m, source, x), s) == evaluate(x, image), name + " induced evaluate");
    }
  }
  c.why << "9 graphs x 200 cases, seed 0x5eed2026";
}

// 7. Cantor towers and the Nobeling basis.
void nobeling(Check& c) {
  auto g = oracle::rng();
  for (std::size_t i = 1; i <= 6; ++i) {
    const auto t = cantor(i);
    const auto r = tree_realization(t);
    const auto bin = build_tower(efficient_exhaustion(GraphGenerator::binary_tree(), static_cast<int>(i),
                                                      static_cast<int>(i) + 2));
    c.expect(canonical_code(r.tower) == canonical_code(t), "realization code, depth " + std::to_string(i));
    c.expect(canonical_code(bin) == canonical_code(t), "binary tree code, depth " + std::to_string(i));
  }
  const auto nb = nobeling_basis(cantor(6));
  const auto& rt = nb.realization.tower;
  const std::size_t bottom = rt.depth() - 1;
  c.expect(nb.basis.size() == 64, "basis size");
  for (int trial = 0; trial < 100; ++trial) {
    const auto raw = random_cochain(g, rt, pick(g, bottom));
    const auto x = normalize(rt, raw);
    const auto coeffs = expand_in_basis(x, nb.basis);
    c.expect(combine(rt, nb.basis, coeffs) == x, "combine");
    const auto deep = pullback(rt, raw, bottom);
    for (std::size_t z = 0; z < rt.size(bottom); ++z) {
      Integer v = 0;
      for (std::size_t j = 0; j < nb.basis.size(); ++j) {
        const auto [l, e] = nb.basis.elements[j];
        if (rt.ancestor(bottom, z, l) == e) v += coeffs[j];
      }
      c.expect(v == deep.values[z], "pointwise value");
    }
  }
  c.why << "depths 1..6, 100 functions on {0,1}^6";
}

// 8. End sums.
void end_sums(Check& c) {
  const std::vector<std::string> names{"line", "grid(2)", "regular_tree(4)", "comb"};
  std::size_t pairs = 0;
  for (const auto& a : names) {
    for (const auto& b : names) {
      const EndSumSpec spec{with_ray(GraphGenerator::from_name(a), 4, 6), with_ray(GraphGenerator::from_name(b), 4, 6),
                            4, 6};
      const auto r = verify_end_sum(spec);
      const auto tag = a + " # " + b;
      for (const auto& row : r.rows) c.expect(row.match(), tag + " level sizes");
      c.expect(r.codes_match(), tag + " codes");
      c.expect(r.ranks_add(), tag + " reduced ranks");
      const auto ref = oracle::tower(end_sum_graph(spec), 4, 6);
      c.expect(ref.sizes() == r.sum_tower.sizes(), tag + " vs oracle");
      const auto ba = verify_end_sum(EndSumSpec{spec.right, spec.left, 4, 6});
      c.expect(ba.sum_code == r.sum_code, tag + " asymmetric");
      ++pairs;
    }
  }
  c.why << pairs << " ordered pairs, depth 4";
}

// 9. The plane does not retract onto the axis.
void plane_axis(Check& c) {
  auto xy = [](std::int64_t x, std::int64_t y) { return codec::grid_encode({x, y}); };
  const auto t = build_tower(efficient_exhaustion(GraphGenerator::grid(2), 4, 6));
  std::vector<TreeNode> nodes{TreeNode{0, 0, xy(0, 0), {xy(0, 0)}}};
  std::size_t left = 0, right = 0;
  for (int d = 1; d <= 4; ++d) {
    nodes.push_back(TreeNode{static_cast<std::size_t>(d), right, xy(d, 0), {xy(d - 1, 0), xy(d, 0)}});
    right = nodes.size() - 1;
    nodes.push_back(TreeNode{static_cast<std::size_t>(d), left, xy(-d, 0), {xy(1 - d, 0), xy(-d, 0)}});
    left = nodes.size() - 1;
  }
  const auto emb = make_tree_embedding(t, nodes);
  try {
    tree_retraction(t, emb);
    c.expect(false, "retraction succeeded");
  } catch (const Error& e) {
    c.expect(e.kind() == ErrorKind::NonInjectiveEndMap, "wrong error " + std::string(e.what()));
  }
  c.why << "NonInjectiveEndMap";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"end counts", end_counts},       {"monotonicity", monotonicity}, {"basepoint independence", basepoints},
      {"rays and retractions", rays},   {"bases", bases},               {"algebra", algebra},
      {"nobeling", nobeling},           {"end sums", end_sums},         {"plane onto axis", plane_axis}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.why << " threw: " << e.what();
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << i + 1 << ": " << (c.ok ? "PASS" : "FAIL") << "  " << criteria[i].first << " ("
              << c.why.str() << ", " << ms << " ms)\n";
    failed += !c.ok;
  }
  return failed == 0 ? 0 : 1;
}
