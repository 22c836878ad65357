#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lfends/tower.hpp"

namespace lfends {

using Integer = boost::multiprecision::cpp_int;

/// Exact integers, or the prime field F_p when modulus != 0.
struct Coefficients {
  std::uint64_t modulus = 0;

  static Coefficients integers() { return {}; }
  static Coefficients prime_field(std::uint64_t p);
  Integer reduce(Integer v) const;
  std::string name() const;
  friend bool operator==(const Coefficients&, const Coefficients&) = default;
};

/// Function on the elements of one tower level (0-based).
struct Cochain {
  std::size_t level = 0;
  std::vector<Integer> values;

  friend bool operator==(const Cochain&, const Cochain&) = default;
};

/// Class in H^0_e at truncation: a cochain at the least level it factors
/// through. Holds a non-owning pointer to its tower.
struct H0Class {
  const EndTower* tower = nullptr;
  Coefficients coeff;
  Cochain cochain;

  std::size_t level() const { return cochain.level; }
  const std::vector<Integer>& values() const { return cochain.values; }
  bool is_zero() const;
  friend bool operator==(const H0Class& a, const H0Class& b) {
    return a.tower == b.tower && a.coeff == b.coeff && a.cochain == b.cochain;
  }
};

/// values(u) = c.values(ancestor of u at c.level). Throws DepthOutOfRange.
Cochain pullback(const EndTower& t, const Cochain& c, std::size_t to_level);

/// Factors through bonds while the values are constant on every fiber.
H0Class normalize(const EndTower& t, Cochain c, Coefficients coeff = {});

H0Class constant(const EndTower& t, const Integer& v, Coefficients coeff = {});
H0Class one(const EndTower& t, Coefficients coeff = {});
H0Class indicator(const EndTower& t, std::size_t level, std::size_t index, Coefficients coeff = {});

/// Throw TowerMismatch when the classes live on different towers or rings.
H0Class add(const H0Class& x, const H0Class& y);
H0Class subtract(const H0Class& x, const H0Class& y);
H0Class scalar_mul(const Integer& a, const H0Class& x);
H0Class pointwise_mul(const H0Class& x, const H0Class& y);

/// Value on the end prefix; throws PrefixTooShallow when eps ends above x's level.
Integer evaluate(const H0Class& x, const EndPrefix& eps);

enum class RepresentativeRule { MinId, RayPreferring };

/// Indicators delta(level, index): every level-0 element, then the
/// non-representative members of each bond fiber. A reduced basis drops the
/// thread's level-0 indicator and is completed by the constant class.
struct H0Basis {
  std::vector<std::pair<std::size_t, std::size_t>> elements;
  RepresentativeRule rule = RepresentativeRule::MinId;
  std::optional<EndPrefix> thread;
  bool reduced = false;
  std::size_t depth = 0;

  std::size_t size() const { return elements.size(); }
};

H0Basis basis(const EndTower& t, RepresentativeRule rule = RepresentativeRule::MinId,
              const std::optional<EndPrefix>& thread = std::nullopt);
/// Throws IncoherentPrefix unless eps is a full-depth thread.
H0Basis reduced_basis(const EndTower& t, const EndPrefix& eps);

H0Class basis_class(const EndTower& t, const H0Basis& b, std::size_t i, Coefficients coeff = {});

/// Coordinates of x. For a reduced basis entry 0 is the coefficient of the
/// constant class and entry i + 1 belongs to element i.
std::vector<Integer> expand_in_basis(const H0Class& x, const H0Basis& b);
H0Class combine(const EndTower& t, const H0Basis& b, const std::vector<Integer>& coeffs, Coefficients coeff = {});

/// (evaluate(x, eps), x - evaluate(x, eps) * 1).
std::pair<Integer, H0Class> split_class(const H0Class& x, const EndPrefix& eps);

/// Pullback of a class on `target` along m : source -> target.
H0Class induced_hom(const TowerMap& m, const EndTower& source, const H0Class& x);

/// Basis elements of levels <= level pulled back to `level`, one row each
/// (reduced bases get the constant class as row 0).
std::vector<std::vector<Integer>> basis_matrix(const EndTower& t, const H0Basis& b, std::size_t level);
/// Exact determinant (fraction-free elimination); reduced mod p when p != 0.
Integer determinant(std::vector<std::vector<Integer>> m, Coefficients coeff = {});

struct NobelingBasis {
  TreeRealization realization;
  H0Basis basis;
};

/// Basis of locally constant integer functions on the space a tower presents,
/// built on its tree realization.
NobelingBasis nobeling_basis(const EndTower& t);

/// `h0 v1` text: header, `level <k>` (1-based), `val <index> <integer>` lines.
std::string write_class(const H0Class& x);
H0Class read_class(std::string_view text, const EndTower& t, Coefficients coeff = {});

}  // namespace lfends
