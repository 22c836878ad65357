#include <algorithm>
#include <charconv>
#include <deque>
#include <sstream>

#include "lfends/error.hpp"
#include "lfends/graph.hpp"

namespace lfends {

GraphGenerator::GraphGenerator(std::shared_ptr<const GraphFamily> family, VertexId basepoint)
    : family_(std::move(family)), basepoint_(basepoint) {
  if (!family_) fail(ErrorKind::InvalidArgument, "null graph family");
  if (!family_->contains(basepoint_)) {
    fail(ErrorKind::UnknownVertex, "basepoint " + std::to_string(basepoint_) + " not in " + family_->name());
  }
}

std::vector<VertexId> GraphGenerator::neighbors(VertexId v) const {
  if (!family_->contains(v)) {
    fail(ErrorKind::UnknownVertex, "vertex " + std::to_string(v) + " not in " + family_->name());
  }
  std::vector<VertexId> out;
  out.reserve(family_->degree_bound());
  family_->append_neighbors(v, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GraphGenerator GraphGenerator::with_basepoint(VertexId v) const { return {family_, v}; }

std::vector<VertexId> neighbors(const GraphGenerator& gen, VertexId v) { return gen.neighbors(v); }

std::optional<LocalIndex> Ball::local(VertexId v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LocalIndex Ball::require_local(VertexId v) const {
  auto it = index_.find(v);
  if (it == index_.end()) {
    fail(ErrorKind::UnknownVertex, "vertex " + std::to_string(v) + " outside window");
  }
  return it->second;
}

std::vector<Edge> Ball::edges() const {
  std::vector<Edge> out;
  for (LocalIndex i = 0; i < vertices_.size(); ++i) {
    for (LocalIndex j : adjacency_[i]) {
      if (i < j) out.emplace_back(vertices_[i], vertices_[j]);
    }
  }
  return out;
}

std::vector<VertexId> Ball::sphere_ids() const {
  std::vector<VertexId> out;
  out.reserve(sphere_.size());
  for (auto i : sphere_) out.push_back(vertices_[i]);
  return out;
}

Ball materialize_ball(const GraphGenerator& gen, int radius, std::size_t budget) {
  return materialize_ball_at(gen, gen.basepoint(), radius, budget);
}

Ball materialize_ball_at(const GraphGenerator& gen, VertexId center, int radius, std::size_t budget) {
  if (radius < 0) fail(ErrorKind::InvalidArgument, "negative radius");
  if (!gen.contains(center)) {
    fail(ErrorKind::UnknownVertex, "center " + std::to_string(center) + " not in " + gen.name());
  }

  std::unordered_map<VertexId, int> dist{{center, 0}};
  std::vector<VertexId> order{center};
  std::deque<VertexId> queue{center};
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    const int d = dist[v];
    if (d == radius) continue;
    for (VertexId w : gen.neighbors(v)) {
      if (dist.emplace(w, d + 1).second) {
        if (order.size() >= budget) {
          fail(ErrorKind::BudgetExceeded, "ball of radius " + std::to_string(radius) + " in " +
                                              gen.name() + " exceeds " + std::to_string(budget) +
                                              " vertices");
        }
        order.push_back(w);
        queue.push_back(w);
      }
    }
  }

  Ball ball(gen);
  ball.center_ = center;
  ball.radius_ = radius;
  std::sort(order.begin(), order.end());
  ball.vertices_ = std::move(order);
  const std::size_t n = ball.vertices_.size();
  ball.index_.reserve(n);
  ball.distance_.resize(n);
  ball.adjacency_.resize(n);
  for (LocalIndex i = 0; i < n; ++i) {
    ball.index_.emplace(ball.vertices_[i], i);
    ball.distance_[i] = dist[ball.vertices_[i]];
  }
  for (LocalIndex i = 0; i < n; ++i) {
    for (VertexId w : gen.neighbors(ball.vertices_[i])) {
      if (auto it = ball.index_.find(w); it != ball.index_.end()) ball.adjacency_[i].push_back(it->second);
    }
    if (ball.distance_[i] == radius) ball.sphere_.push_back(i);
  }
  return ball;
}

namespace {

VertexId parse_id(std::string_view token, std::size_t line_no) {
  VertexId value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail(ErrorKind::ParseError,
         "line " + std::to_string(line_no) + ": expected vertex id, got '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

GraphGenerator parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  std::vector<VertexId> vertices;
  std::optional<VertexId> base;
  std::size_t line_no = 0;
  bool seen_content = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    const bool first = !seen_content;
    seen_content = true;
    if (tokens[0] == "lfgraph") {
      if (!first || tokens.size() != 2 || tokens[1] != "v1") {
        fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad header");
      }
    } else if (tokens[0] == "v" && tokens.size() == 2) {
      vertices.push_back(parse_id(tokens[1], line_no));
    } else if (tokens[0] == "e" && tokens.size() == 3) {
      edges.emplace_back(parse_id(tokens[1], line_no), parse_id(tokens[2], line_no));
    } else if (tokens[0] == "base" && tokens.size() == 2) {
      base = parse_id(tokens[1], line_no);
    } else {
      fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": unrecognized '" +
                                      std::string(line) + "'");
    }
    if (start > text.size()) break;
  }
  return GraphGenerator::from_edges(edges, vertices, base);
}

std::string write_graph(const Ball& ball) {
  std::ostringstream out;
  out << "lfgraph v1\n";
  out << "base " << ball.center() << "\n";
  for (VertexId v : ball.vertices()) out << "v " << v << "\n";
  for (auto [u, v] : ball.edges()) out << "e " << u << " " << v << "\n";
  return out.str();
}

}  // namespace lfends
