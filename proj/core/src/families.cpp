#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "lfends/error.hpp"
#include "lfends/graph.hpp"

namespace lfends {

namespace {

__extension__ using u128 = unsigned __int128;

VertexId checked(u128 value) {
  if (value > std::numeric_limits<VertexId>::max()) {
    fail(ErrorKind::BudgetExceeded, "vertex id overflows 64 bits");
  }
  return static_cast<VertexId>(value);
}

u128 isqrt(u128 n) {
  auto guess = static_cast<u128>(std::sqrt(static_cast<long double>(n)));
  while (guess * guess > n) --guess;
  while ((guess + 1) * (guess + 1) <= n) ++guess;
  return guess;
}

}  // namespace

namespace codec {

VertexId zigzag(std::int64_t z) {
  return z >= 0 ? static_cast<VertexId>(z) * 2 : static_cast<VertexId>(-(z + 1)) * 2 + 1;
}

std::int64_t unzigzag(VertexId v) {
  return (v & 1U) == 0 ? static_cast<std::int64_t>(v / 2) : -static_cast<std::int64_t>(v / 2) - 1;
}

VertexId cantor_pair(VertexId a, VertexId b) {
  const u128 s = static_cast<u128>(a) + b;
  return checked(s * (s + 1) / 2 + b);
}

std::pair<VertexId, VertexId> cantor_unpair(VertexId z) {
  const u128 w = (isqrt(static_cast<u128>(z) * 8 + 1) - 1) / 2;
  const u128 t = w * (w + 1) / 2;
  const auto b = static_cast<VertexId>(z - t);
  const auto a = static_cast<VertexId>(w - b);
  return {a, b};
}

VertexId grid_encode(const std::vector<std::int64_t>& coords) {
  VertexId id = zigzag(coords.front());
  for (std::size_t i = 1; i < coords.size(); ++i) id = cantor_pair(id, zigzag(coords[i]));
  return id;
}

std::vector<std::int64_t> grid_decode(VertexId v, int dimension) {
  std::vector<std::int64_t> coords(static_cast<std::size_t>(dimension));
  for (int i = dimension - 1; i >= 1; --i) {
    auto [rest, last] = cantor_unpair(v);
    coords[static_cast<std::size_t>(i)] = unzigzag(last);
    v = rest;
  }
  coords[0] = unzigzag(v);
  return coords;
}

namespace {

int inverse_letter(int letter) { return letter ^ 1; }

}  // namespace

VertexId word_encode(const std::vector<int>& word, int rank) {
  const u128 letters = 2 * static_cast<u128>(rank);
  u128 offset = 0;
  u128 count = 1;
  for (std::size_t n = 0; n < word.size(); ++n) {
    offset += count;
    count = n == 0 ? letters : count * (letters - 1);
    if (offset > std::numeric_limits<VertexId>::max()) checked(offset);
  }
  u128 within = 0;
  for (std::size_t j = 0; j < word.size(); ++j) {
    const int letter = word[j];
    u128 digit = static_cast<u128>(letter);
    u128 base = letters;
    if (j > 0) {
      const int banned = inverse_letter(word[j - 1]);
      if (letter == banned) fail(ErrorKind::UnknownVertex, "word is not reduced");
      digit = static_cast<u128>(letter < banned ? letter : letter - 1);
      base = letters - 1;
    }
    within = within * base + digit;
  }
  return checked(offset + within);
}

std::vector<int> word_decode(VertexId v, int rank) {
  const u128 letters = 2 * static_cast<u128>(rank);
  std::size_t length = 0;
  u128 remaining = v;
  u128 count = 1;
  while (remaining >= count) {
    remaining -= count;
    count = length == 0 ? letters : count * (letters - 1);
    ++length;
  }
  std::vector<u128> digits(length);
  for (std::size_t j = length; j-- > 0;) {
    const u128 base = j == 0 ? letters : letters - 1;
    digits[j] = remaining % base;
    remaining /= base;
  }
  std::vector<int> word(length);
  for (std::size_t j = 0; j < length; ++j) {
    auto digit = static_cast<int>(digits[j]);
    if (j > 0) {
      const int banned = inverse_letter(word[j - 1]);
      if (digit >= banned) ++digit;
    }
    word[j] = digit;
  }
  return word;
}

}  // namespace codec

namespace {

class LineFamily final : public GraphFamily {
 public:
  std::string name() const override { return "line"; }
  std::size_t degree_bound() const override { return 2; }
  VertexId default_basepoint() const override { return 0; }
  bool contains(VertexId) const override { return true; }
  void append_neighbors(VertexId v, std::vector<VertexId>& out) const override {
    const auto z = codec::unzigzag(v);
    out.push_back(codec::zigzag(z - 1));
    out.push_back(codec::zigzag(z + 1));
  }
};

class HalflineFamily final : public GraphFamily {
 public:
  std::string name() const override { return "halfline"; }
  std::size_t degree_bound() const override { return 2; }
  VertexId default_basepoint() const override { return 0; }
  bool contains(VertexId) const override { return true; }
  void append_neighbors(VertexId v, std::vector<VertexId>& out) const override {
    if (v > 0) out.push_back(v - 1);
    out.push_back(checked(static_cast<u128>(v) + 1));
  }
};

class GridFamily final : public GraphFamily {
 public:
  explicit GridFamily(int dimension) : dimension_(dimension) {}
  std::string name() const override { return "grid(" + std::to_string(dimension_) + ")"; }
  std::size_t degree_bound() const override { return 2 * static_cast<std::size_t>(dimension_); }
  VertexId default_basepoint() const override { return 0; }
  bool contains(VertexId) const override { return true; }
  void append_neighbors(VertexId v, std::vector<VertexId>& out) const override {
    auto coords = codec::grid_decode(v, dimension_);
    for (auto& c : coords) {
      for (int step : {-1, 1}) {
        c += step;
        out.push_back(codec::grid_encode(coords));
        c -= step;
      }
    }
  }

 private:
  int dimension_;
};

// Vertices in breadth-first order: root 0, its `degree` children, then the
// degree-1 children of every later vertex in turn.
class RegularTreeFamily final : public GraphFamily {
 public:
  explicit RegularTreeFamily(int degree) : degree_(static_cast<u128>(degree)) {}
  std::string name() const override { return "regular_tree(" + std::to_string(static_cast<int>(degree_)) + ")"; }
  std::size_t degree_bound() const override { return static_cast<std::size_t>(degree_); }
  VertexId default_basepoint() const override { return 0; }
  bool contains(VertexId) const override { return true; }
  void append_neighbors(VertexId v, std::vector<VertexId>& out) const override {
    if (v == 0) {
      for (u128 c = 1; c <= degree_; ++c) out.push_back(static_cast<VertexId>(c));
      return;
    }
    if (v <= degree_) {
      out.push_back(0);
    } else {
      out.push_back(static_cast<VertexId>((v - degree_ - 1) / (degree_ - 1) + 1));
    }
    const u128 first = degree_ + 1 + (static_cast<u128>(v) - 1) * (degree_ - 1);
    for (u128 c = 0; c + 1 < degree_; ++c) out.push_back(checked(first + c));
  }

 private:
  u128 degree_;
};

class FreeGroupFamily final : public GraphFamily {
 public:
  explicit FreeGroupFamily(int rank) : rank_(rank) {}
  std::string name() const override { return "free_group(" + std::to_string(rank_) + ")"; }
  std::size_t degree_bound() const override { return 2 * static_cast<std::size_t>(rank_); }
  VertexId default_basepoint() const override { return 0; }
  bool contains(VertexId) const override { return true; }
  void append_neighbors(VertexId v, std::vector<VertexId>& out) const override {
    auto word = codec::word_decode(v, rank_);
    const int banned = word.empty() ? -1 : (word.back() ^ 1);
    if (!word.empty()) {
      auto shorter = word;
      shorter.pop_back();
      out.push_back(codec::word_encode(shorter, rank_));
    }
    for (int letter = 0; letter < 2 * rank_; ++letter) {
      if (letter == banned) continue;
      word.push_back(letter);
      out.push_back(codec::word_encode(word, rank_));
      word.pop_back();
    }
  }

 private:
  int rank_;
};

class BinaryTreeFamily final : public GraphFamily {
 public:
  std::string name() const override { return "binary_tree"; }
  std::size_t degree_bound() const override { return 3; }
  VertexId default_basepoint() const override { return 0; }
  bool contains(VertexId) const override { return true; }
  void append_neighbors(VertexId v, std::vector<VertexId>& out) const override {
    if (v > 0) out.push_back((v - 1) / 2);
    out.push_back(checked(2 * static_cast<u128>(v) + 1));
    out.push_back(checked(2 * static_cast<u128>(v) + 2));
  }
};

// Spine (j, 0) for j >= 0 with a tooth (j, h), h >= 1, above every spine
// vertex; id = cantor_pair(j, h), so ids grow with distance from (0, 0).
class CombFamily final : public GraphFamily {
 public:
  std::string name() const override { return "comb"; }
  std::size_t degree_bound() const override { return 3; }
  VertexId default_basepoint() const override { return 0; }
  bool contains(VertexId) const override { return true; }
  void append_neighbors(VertexId v, std::vector<VertexId>& out) const override {
    auto [j, h] = codec::cantor_unpair(v);
    if (h == 0) {
      if (j > 0) out.push_back(codec::cantor_pair(j - 1, 0));
      out.push_back(codec::cantor_pair(j + 1, 0));
      out.push_back(codec::cantor_pair(j, 1));
    } else {
      out.push_back(codec::cantor_pair(j, h - 1));
      out.push_back(codec::cantor_pair(j, h + 1));
    }
  }
};

class EdgeListFamily final : public GraphFamily {
 public:
  EdgeListFamily(std::map<VertexId, std::vector<VertexId>> adjacency, std::size_t degree)
      : adjacency_(std::move(adjacency)), degree_(degree) {}
  std::string name() const override { return "edge_list"; }
  std::size_t degree_bound() const override { return degree_; }
  VertexId default_basepoint() const override { return adjacency_.begin()->first; }
  bool contains(VertexId v) const override { return adjacency_.count(v) != 0; }
  void append_neighbors(VertexId v, std::vector<VertexId>& out) const override {
    const auto& adj = adjacency_.at(v);
    out.insert(out.end(), adj.begin(), adj.end());
  }
  bool finite() const override { return true; }

 private:
  std::map<VertexId, std::vector<VertexId>> adjacency_;
  std::size_t degree_;
};

int positive_param(const std::map<std::string, std::string>& params, const std::string& key,
                   std::optional<int> inline_value, int minimum) {
  int value = 0;
  if (inline_value) {
    value = *inline_value;
  } else {
    auto it = params.find(key);
    if (it == params.end()) fail(ErrorKind::InvalidArgument, "missing parameter " + key);
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail(ErrorKind::InvalidArgument, "parameter " + key + " is not an integer: " + s);
    }
  }
  if (value < minimum) {
    fail(ErrorKind::InvalidArgument,
         "parameter " + key + " must be at least " + std::to_string(minimum));
  }
  return value;
}

}  // namespace

GraphGenerator GraphGenerator::line() { return {std::make_shared<LineFamily>(), 0}; }
GraphGenerator GraphGenerator::halfline() { return {std::make_shared<HalflineFamily>(), 0}; }
GraphGenerator GraphGenerator::binary_tree() { return {std::make_shared<BinaryTreeFamily>(), 0}; }
GraphGenerator GraphGenerator::comb() { return {std::make_shared<CombFamily>(), 0}; }

GraphGenerator GraphGenerator::grid(int dimension) {
  if (dimension < 1) fail(ErrorKind::InvalidArgument, "grid dimension must be positive");
  return {std::make_shared<GridFamily>(dimension), 0};
}

GraphGenerator GraphGenerator::regular_tree(int degree) {
  if (degree < 2) fail(ErrorKind::InvalidArgument, "regular_tree degree must be at least 2");
  return {std::make_shared<RegularTreeFamily>(degree), 0};
}

GraphGenerator GraphGenerator::free_group(int rank) {
  if (rank < 1) fail(ErrorKind::InvalidArgument, "free_group rank must be positive");
  return {std::make_shared<FreeGroupFamily>(rank), 0};
}

GraphGenerator GraphGenerator::from_edges(const std::vector<Edge>& edges,
                                          const std::vector<VertexId>& extra_vertices,
                                          std::optional<VertexId> basepoint) {
  std::map<VertexId, std::vector<VertexId>> adjacency;
  std::set<Edge> seen;
  for (auto [u, v] : edges) {
    if (u == v) fail(ErrorKind::NonSimpleInput, "loop at vertex " + std::to_string(u));
    const Edge key{std::min(u, v), std::max(u, v)};
    if (!seen.insert(key).second) {
      fail(ErrorKind::NonSimpleInput,
           "duplicate edge " + std::to_string(key.first) + " " + std::to_string(key.second));
    }
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  for (auto v : extra_vertices) adjacency[v];
  if (adjacency.empty()) fail(ErrorKind::DisconnectedInput, "graph has no vertices");

  std::size_t degree = 1;
  for (auto& [v, adj] : adjacency) {
    std::sort(adj.begin(), adj.end());
    degree = std::max(degree, adj.size());
  }

  // connectivity
  std::set<VertexId> reached{adjacency.begin()->first};
  std::vector<VertexId> stack{adjacency.begin()->first};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : adjacency[v]) {
      if (reached.insert(w).second) stack.push_back(w);
    }
  }
  if (reached.size() != adjacency.size()) {
    fail(ErrorKind::DisconnectedInput, "graph has " + std::to_string(adjacency.size()) +
                                           " vertices but only " + std::to_string(reached.size()) +
                                           " are reachable");
  }
  if (basepoint && adjacency.count(*basepoint) == 0) {
    fail(ErrorKind::UnknownVertex, "basepoint " + std::to_string(*basepoint) + " not in graph");
  }
  auto family = std::make_shared<EdgeListFamily>(std::move(adjacency), degree);
  const VertexId base = basepoint.value_or(family->default_basepoint());
  return {std::move(family), base};
}

std::vector<std::string> GraphGenerator::family_names() {
  return {"line", "halfline", "grid", "regular_tree", "free_group", "binary_tree", "comb"};
}

GraphGenerator GraphGenerator::from_name(std::string_view name,
                                         const std::map<std::string, std::string>& params) {
  std::string base(name);
  std::optional<int> inline_value;
  if (auto open = base.find('('); open != std::string::npos) {
    if (base.back() != ')') fail(ErrorKind::InvalidArgument, "malformed family " + base);
    const std::string inner = base.substr(open + 1, base.size() - open - 2);
    int value = 0;
    auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), value);
    if (ec != std::errc() || ptr != inner.data() + inner.size()) {
      fail(ErrorKind::InvalidArgument, "malformed family parameter in " + base);
    }
    inline_value = value;
    base = base.substr(0, open);
  }
  if (base == "line") return line();
  if (base == "halfline") return halfline();
  if (base == "binary_tree") return binary_tree();
  if (base == "comb") return comb();
  if (base == "grid") return grid(positive_param(params, "d", inline_value, 1));
  if (base == "regular_tree") return regular_tree(positive_param(params, "d", inline_value, 2));
  if (base == "free_group") return free_group(positive_param(params, "k", inline_value, 1));
  fail(ErrorKind::InvalidArgument, "unknown family " + std::string(name));
}

}  // namespace lfends
