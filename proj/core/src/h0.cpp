#include "lfends/h0.hpp"

#include <algorithm>
#include <sstream>

#include "lfends/error.hpp"

namespace lfends {

Coefficients Coefficients::prime_field(std::uint64_t p) {
  if (p < 2) fail(ErrorKind::InvalidArgument, "modulus must be at least 2");
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) fail(ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
  }
  return Coefficients{p};
}

Integer Coefficients::reduce(Integer v) const {
  if (modulus == 0) return v;
  const Integer p = modulus;
  v %= p;
  if (v < 0) v += p;
  return v;
}

std::string Coefficients::name() const { return modulus == 0 ? "Z" : "F_" + std::to_string(modulus); }

bool H0Class::is_zero() const {
  return std::all_of(values().begin(), values().end(), [](const Integer& v) { return v == 0; });
}

Cochain pullback(const EndTower& t, const Cochain& c, std::size_t to_level) {
  if (to_level >= t.depth() || to_level < c.level) {
    fail(ErrorKind::DepthOutOfRange, "cannot pull level " + std::to_string(c.level + 1) + " back to level " +
                                         std::to_string(to_level + 1) + " of a depth-" + std::to_string(t.depth()) +
                                         " tower");
  }
  if (c.values.size() != t.size(c.level)) fail(ErrorKind::InvalidArgument, "cochain domain does not match its level");
  Cochain out{to_level, {}};
  out.values.reserve(t.size(to_level));
  for (std::size_t e = 0; e < t.size(to_level); ++e) out.values.push_back(c.values[t.ancestor(to_level, e, c.level)]);
  return out;
}

H0Class normalize(const EndTower& t, Cochain c, Coefficients coeff) {
  if (c.level >= t.depth() || c.values.size() != t.size(c.level)) {
    fail(ErrorKind::InvalidArgument, "cochain does not fit the tower");
  }
  for (auto& v : c.values) v = coeff.reduce(std::move(v));
  while (c.level > 0 && t.bond_surjective(c.level - 1)) {
    std::vector<std::optional<Integer>> down(t.size(c.level - 1));
    bool factors = true;
    for (std::size_t e = 0; e < c.values.size() && factors; ++e) {
      auto& slot = down[t.parent(c.level, e)];
      if (!slot) {
        slot = c.values[e];
      } else if (*slot != c.values[e]) {
        factors = false;
      }
    }
    if (!factors) break;
    Cochain next{c.level - 1, {}};
    for (auto& v : down) next.values.push_back(std::move(*v));
    c = std::move(next);
  }
  return H0Class{&t, coeff, std::move(c)};
}

H0Class constant(const EndTower& t, const Integer& v, Coefficients coeff) {
  if (t.depth() == 0) fail(ErrorKind::EmptyTower, "no levels");
  return normalize(t, Cochain{0, std::vector<Integer>(t.size(0), v)}, coeff);
}

H0Class one(const EndTower& t, Coefficients coeff) { return constant(t, 1, coeff); }

H0Class indicator(const EndTower& t, std::size_t level, std::size_t index, Coefficients coeff) {
  if (level >= t.depth() || index >= t.size(level)) fail(ErrorKind::BadIndices, "indicator index out of range");
  Cochain c{level, std::vector<Integer>(t.size(level), 0)};
  c.values[index] = 1;
  return normalize(t, std::move(c), coeff);
}

namespace {

void require_same(const H0Class& x, const H0Class& y) {
  if (x.tower != y.tower) fail(ErrorKind::TowerMismatch, "classes live on different towers");
  if (x.coeff != y.coeff) {
    fail(ErrorKind::TowerMismatch, "classes use different coefficients " + x.coeff.name() + " and " + y.coeff.name());
  }
}

template <typename Op>
H0Class pointwise(const H0Class& x, const H0Class& y, Op op) {
  require_same(x, y);
  const EndTower& t = *x.tower;
  const std::size_t level = std::max(x.level(), y.level());
  const auto a = pullback(t, x.cochain, level);
  const auto b = pullback(t, y.cochain, level);
  Cochain c{level, {}};
  c.values.reserve(a.values.size());
  for (std::size_t e = 0; e < a.values.size(); ++e) c.values.push_back(op(a.values[e], b.values[e]));
  return normalize(t, std::move(c), x.coeff);
}

}  // namespace

H0Class add(const H0Class& x, const H0Class& y) {
  return pointwise(x, y, [](const Integer& a, const Integer& b) { return a + b; });
}

H0Class subtract(const H0Class& x, const H0Class& y) {
  return pointwise(x, y, [](const Integer& a, const Integer& b) { return a - b; });
}

H0Class pointwise_mul(const H0Class& x, const H0Class& y) {
  return pointwise(x, y, [](const Integer& a, const Integer& b) { return a * b; });
}

H0Class scalar_mul(const Integer& a, const H0Class& x) {
  Cochain c = x.cochain;
  for (auto& v : c.values) v *= a;
  return normalize(*x.tower, std::move(c), x.coeff);
}

Integer evaluate(const H0Class& x, const EndPrefix& eps) {
  if (eps.depth() <= x.level()) {
    fail(ErrorKind::PrefixTooShallow, "class lives at level " + std::to_string(x.level() + 1) +
                                          " but the prefix has depth " + std::to_string(eps.depth()));
  }
  if (!is_coherent(*x.tower, eps)) fail(ErrorKind::IncoherentPrefix, "prefix is not a coherent thread");
  return x.values()[eps.thread[x.level()]];
}

namespace {

// rep[l][p] = representative child at level l of element p at level l - 1.
std::vector<std::vector<std::int64_t>> representatives(const EndTower& t, RepresentativeRule rule,
                                                       const std::optional<EndPrefix>& thread) {
  std::vector<std::vector<std::int64_t>> rep(t.depth());
  for (std::size_t l = 1; l < t.depth(); ++l) {
    rep[l].assign(t.size(l - 1), -1);
    for (std::size_t e = 0; e < t.size(l); ++e) {
      auto& r = rep[l][t.parent(l, e)];
      if (r < 0 || t.ids[l][e] < t.ids[l][static_cast<std::size_t>(r)]) r = static_cast<std::int64_t>(e);
    }
    if (rule == RepresentativeRule::RayPreferring) rep[l][thread->thread[l - 1]] = static_cast<std::int64_t>(thread->thread[l]);
  }
  return rep;
}

}  // namespace

H0Basis basis(const EndTower& t, RepresentativeRule rule, const std::optional<EndPrefix>& thread) {
  if (rule == RepresentativeRule::RayPreferring) {
    if (!thread || thread->depth() != t.depth() || !is_coherent(t, *thread)) {
      fail(ErrorKind::IncoherentPrefix, "ray-preferring rule needs a full-depth coherent thread");
    }
  }
  H0Basis b;
  b.rule = rule;
  b.thread = thread;
  b.depth = t.depth();
  if (t.depth() == 0) return b;
  const auto rep = representatives(t, rule, thread);
  for (std::size_t e = 0; e < t.size(0); ++e) b.elements.emplace_back(0, e);
  for (std::size_t l = 1; l < t.depth(); ++l) {
    for (std::size_t e = 0; e < t.size(l); ++e) {
      if (rep[l][t.parent(l, e)] != static_cast<std::int64_t>(e)) b.elements.emplace_back(l, e);
    }
  }
  return b;
}

H0Basis reduced_basis(const EndTower& t, const EndPrefix& eps) {
  if (eps.depth() != t.depth() || !is_coherent(t, eps)) {
    fail(ErrorKind::IncoherentPrefix, "reduced basis needs a full-depth coherent thread");
  }
  auto b = basis(t, RepresentativeRule::RayPreferring, eps);
  b.reduced = true;
  std::erase(b.elements, std::pair<std::size_t, std::size_t>{0, eps.thread[0]});
  return b;
}

H0Class basis_class(const EndTower& t, const H0Basis& b, std::size_t i, Coefficients coeff) {
  const auto [level, index] = b.elements.at(i);
  return indicator(t, level, index, coeff);
}

std::vector<Integer> expand_in_basis(const H0Class& x, const H0Basis& b) {
  const EndTower& t = *x.tower;
  if (b.depth != t.depth()) fail(ErrorKind::DepthMismatch, "basis was built for a different depth");
  if (x.level() >= b.depth) fail(ErrorKind::DepthOutOfRange, "class deeper than the basis");
  const std::size_t bottom = b.depth - 1;
  const auto leaf_values = pullback(t, x.cochain, bottom).values;
  const auto rep = representatives(t, b.rule, b.thread);

  // g[l][u]: value at the leaf reached from u through representative children.
  std::vector<std::vector<Integer>> g(b.depth);
  g[bottom] = leaf_values;
  for (std::size_t l = bottom; l-- > 0;) {
    g[l].resize(t.size(l));
    for (std::size_t p = 0; p < t.size(l); ++p) {
      const auto r = rep[l + 1][p];
      if (r < 0) fail(ErrorKind::InvariantViolation, "empty bond fiber; basis needs surjective bonds");
      g[l][p] = g[l + 1][static_cast<std::size_t>(r)];
    }
  }
  std::vector<Integer> coeffs;
  Integer base = 0;
  if (b.reduced) {
    base = g[0][b.thread->thread[0]];
    coeffs.push_back(x.coeff.reduce(base));
  }
  for (auto [l, e] : b.elements) {
    const Integer c = l == 0 ? g[0][e] - base : g[l][e] - g[l - 1][t.parent(l, e)];
    coeffs.push_back(x.coeff.reduce(c));
  }
  return coeffs;
}

H0Class combine(const EndTower& t, const H0Basis& b, const std::vector<Integer>& coeffs, Coefficients coeff) {
  const std::size_t offset = b.reduced ? 1 : 0;
  if (coeffs.size() != b.size() + offset) fail(ErrorKind::InvalidArgument, "coefficient count does not match basis");
  if (t.depth() == 0) fail(ErrorKind::EmptyTower, "no levels");
  const std::size_t bottom = t.depth() - 1;
  Cochain c{bottom, std::vector<Integer>(t.size(bottom), offset ? coeffs[0] : Integer(0))};
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto [l, e] = b.elements[i];
    if (coeffs[i + offset] == 0) continue;
    for (std::size_t z = 0; z < c.values.size(); ++z) {
      if (t.ancestor(bottom, z, l) == e) c.values[z] += coeffs[i + offset];
    }
  }
  return normalize(t, std::move(c), coeff);
}

std::pair<Integer, H0Class> split_class(const H0Class& x, const EndPrefix& eps) {
  Integer value = evaluate(x, eps);
  auto reduced = subtract(x, constant(*x.tower, value, x.coeff));
  return {std::move(value), std::move(reduced)};
}

H0Class induced_hom(const TowerMap& m, const EndTower& source, const H0Class& x) {
  if (x.level() >= m.depth() || x.level() >= source.depth()) {
    fail(ErrorKind::DepthOutOfRange, "class at level " + std::to_string(x.level() + 1) + " beyond map depth " +
                                         std::to_string(m.depth()));
  }
  const auto& level_map = m.levels[x.level()];
  if (level_map.size() != source.size(x.level())) fail(ErrorKind::TowerMismatch, "map does not start at this tower");
  Cochain c{x.level(), {}};
  for (auto target : level_map) c.values.push_back(x.values().at(target));
  return normalize(source, std::move(c), x.coeff);
}

std::vector<std::vector<Integer>> basis_matrix(const EndTower& t, const H0Basis& b, std::size_t level) {
  std::vector<std::vector<Integer>> rows;
  if (b.reduced) rows.emplace_back(t.size(level), 1);
  for (auto [l, e] : b.elements) {
    if (l > level) continue;
    std::vector<Integer> row(t.size(level), 0);
    for (std::size_t z = 0; z < row.size(); ++z) row[z] = t.ancestor(level, z, l) == e ? 1 : 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

Integer determinant(std::vector<std::vector<Integer>> m, Coefficients coeff) {
  const std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) fail(ErrorKind::InvalidArgument, "determinant of a non-square matrix");
  }
  if (n == 0) return coeff.reduce(1);
  // Bareiss elimination keeps every entry an exact integer minor.
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return coeff.reduce(sign * m[n - 1][n - 1]);
}

NobelingBasis nobeling_basis(const EndTower& t) {
  auto realization = tree_realization(t);
  auto b = basis(realization.tower);
  return NobelingBasis{std::move(realization), std::move(b)};
}

std::string write_class(const H0Class& x) {
  std::ostringstream out;
  out << "h0 v1\n";
  out << "level " << x.level() + 1 << "\n";
  for (std::size_t e = 0; e < x.values().size(); ++e) {
    if (x.values()[e] != 0) out << "val " << e << " " << x.values()[e] << "\n";
  }
  return out.str();
}

H0Class read_class(std::string_view text, const EndTower& t, Coefficients coeff) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::optional<Cochain> c;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty() || tok[0].front() == '#') continue;
    auto bad = [&](const std::string& why) {
      fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why);
    };
    auto number = [&](const std::string& s) {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) bad("expected index, got '" + s + "'");
      return static_cast<std::size_t>(std::stoull(s));
    };
    if (!header) {
      if (tok.size() != 2 || tok[0] != "h0" || tok[1] != "v1") bad("expected 'h0 v1' header");
      header = true;
    } else if (tok[0] == "level" && tok.size() == 2 && !c) {
      const auto k = number(tok[1]);
      if (k == 0 || k > t.depth()) fail(ErrorKind::DepthOutOfRange, "level " + tok[1] + " outside the tower");
      c = Cochain{k - 1, std::vector<Integer>(t.size(k - 1), 0)};
    } else if (tok[0] == "val" && tok.size() == 3 && c) {
      const auto idx = number(tok[1]);
      if (idx >= c->values.size()) bad("component index out of range");
      const auto& s = tok[2];
      const auto digits = s.front() == '-' ? s.substr(1) : s;
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) bad("bad integer '" + s + "'");
      c->values[idx] = Integer(s);
    } else {
      bad("unrecognized '" + line + "'");
    }
  }
  if (!c) fail(ErrorKind::ParseError, "missing level line");
  return normalize(t, std::move(*c), coeff);
}

}  // namespace lfends
