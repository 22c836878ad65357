// Independent reference computations for the tests. Nothing here calls into
// the exhaustion, tower, rays or h0 code; only graph neighbor functions.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lfends/graph.hpp"

namespace oracle {

using lfends::VertexId;
using Integer = boost::multiprecision::cpp_int;

struct PlainBall {
  std::map<VertexId, int> dist;
  std::map<VertexId, std::vector<VertexId>> adj;  // neighbors inside the ball
};

PlainBall ball(const lfends::GraphGenerator& gen, int radius);
PlainBall ball_about(const lfends::GraphGenerator& gen, VertexId center, int radius);

/// Components of the ball minus `removed`, by union-find over ball edges.
std::vector<std::set<VertexId>> components_without(const PlainBall& b, const std::set<VertexId>& removed);

bool touches_sphere(const PlainBall& b, int radius, const std::set<VertexId>& comp);

/// Level l (0-based) compactum: ball of radius l about `center` plus every
/// complement component missing the sphere.
std::set<VertexId> filled_ball(const PlainBall& b, int window_radius, int r);

struct PlainTower {
  /// components[l]: unbounded components of level l, sorted by least id.
  std::vector<std::vector<std::set<VertexId>>> components;
  /// parent[l][e] for l >= 1.
  std::vector<std::vector<std::size_t>> parent;
  std::vector<std::size_t> sizes() const;
};

PlainTower tower(const lfends::GraphGenerator& gen, int depth, int window_radius);
PlainTower tower_about(const PlainBall& b, int window_radius, int depth);

/// Closed-form level sizes for the builtin corpus (empty if unknown).
std::vector<std::size_t> expected_sizes(const std::string& family, int depth);

/// Rooted unordered tree shape, compared structurally.
struct Shape {
  std::vector<Shape> kids;
  friend bool operator==(const Shape&, const Shape&) = default;
  friend bool operator<(const Shape& a, const Shape& b);
};
Shape shape(const std::vector<std::size_t>& sizes, const std::vector<std::vector<std::size_t>>& parent);

/// Determinant by Euclidean (gcd) row reduction over the integers.
Integer det_euclid(std::vector<std::vector<Integer>> m);
/// Rank over F_p by Gaussian elimination.
std::size_t rank_mod(std::vector<std::vector<Integer>> m, std::uint64_t p);

/// BFS distance between two vertices of a plain ball (-1 if unreachable).
int distance(const PlainBall& b, VertexId from, VertexId to);

inline std::mt19937_64 rng() { return std::mt19937_64(0x5eed2026ULL); }

/// Corpus families used across suites.
std::vector<std::string> corpus();

}  // namespace oracle
