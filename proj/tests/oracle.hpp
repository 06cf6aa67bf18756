#pragma once

// Brute-force references written directly against bit masks and Boost
// rationals. Nothing here calls into the library, so agreement between the two
// is evidence rather than tautology.

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using Mask = std::uint64_t;

inline Mask full(std::size_t atoms) { return (Mask{1} << atoms) - 1; }

inline Q mass(const std::vector<Q>& atoms, Mask m) {
  Q s = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (m >> i & 1) s += atoms[i];
  return s;
}

/// P(A|B) = μ(A∩B)/μ(B).
inline Q conditional(const std::vector<Q>& atoms, Mask a, Mask b) { return mass(atoms, a & b) / mass(atoms, b); }

/// Closure under complement and pairwise union, plus ∅ and Ω.
inline bool is_algebra(const std::vector<Mask>& events, Mask omega) {
  auto has = [&](Mask m) {
    for (Mask e : events)
      if (e == m) return true;
    return false;
  };
  if (!has(0) || !has(omega)) return false;
  for (Mask a : events) {
    if (!has(omega & ~a)) return false;
    for (Mask b : events)
      if (!has(a | b)) return false;
  }
  return true;
}

using Table = std::function<Q(Mask of, Mask given)>;

/// Number of (x, y) keys with two different z over all triples (A, B, C) of
/// the power set with C ≠ ∅ and A∩C ≠ ∅.
inline std::size_t composition_conflicts(const Table& p, std::size_t atoms) {
  std::map<std::pair<Q, Q>, Q> seen;
  std::map<std::pair<Q, Q>, bool> bad;
  const Mask n = Mask{1} << atoms;
  for (Mask c = 1; c < n; ++c)
    for (Mask a = 0; a < n; ++a) {
      if ((a & c) == 0) continue;
      for (Mask b = 0; b < n; ++b) {
        const auto key = std::make_pair(p(a, c), p(b, a & c));
        const Q z = p(a & b, c);
        auto [it, fresh] = seen.emplace(key, z);
        if (!fresh && it->second != z) bad[key] = true;
      }
    }
  return bad.size();
}

/// Number of x with two different N(x) over all pairs (A, B), B ≠ ∅.
inline std::size_t negation_conflicts(const Table& p, std::size_t atoms) {
  std::map<Q, Q> seen;
  std::map<Q, bool> bad;
  const Mask n = Mask{1} << atoms;
  for (Mask b = 1; b < n; ++b)
    for (Mask a = 0; a < n; ++a) {
      auto [it, fresh] = seen.emplace(p(a, b), p(full(atoms) & ~a, b));
      if (!fresh && it->second != p(full(atoms) & ~a, b)) bad[p(a, b)] = true;
    }
  return bad.size();
}

/// P over a product of uniform factors: ∏ |Aᵢ∩Bᵢ| / |Bᵢ|.
inline Q uniform_rectangle(const std::vector<Mask>& of, const std::vector<Mask>& given) {
  Q out = 1;
  for (std::size_t i = 0; i < of.size(); ++i)
    out *= Q(std::popcount(of[i] & given[i]), std::popcount(given[i]));
  return out;
}

/// Random strictly positive rational measure with integer weights 1..9.
inline std::vector<Q> random_measure(std::mt19937_64& rng, std::size_t atoms) {
  std::uniform_int_distribution<int> w(1, 9);
  std::vector<Q> m;
  Q total = 0;
  for (std::size_t i = 0; i < atoms; ++i) {
    m.emplace_back(w(rng));
    total += m.back();
  }
  for (auto& x : m) x /= total;
  return m;
}

}  // namespace oracle
