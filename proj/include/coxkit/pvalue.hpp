#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coxkit {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Failure categories shared by every module. Verdict-style results (checks,
/// closure tests) do not throw; these are reserved for contract violations.
enum class ErrorKind {
  CapExceeded,
  InvalidInput,
  ExtensionInconsistent,
  PreconditionUnmet,
  MeshUnreachable,
  NonAssociativeData,
  DegenerateRange,
  NoFixedPoint,
  UnknownName,
  BadParams,
  ExhaustedBudget,
  Undetermined,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A plausibility value: optionally exact, always carrying its float64 rounding.
class PValue {
 public:
  PValue() : approx_(0.0) {}
  explicit PValue(const Rational& r) : exact_(r), approx_(r.convert_to<double>()) {}
  explicit PValue(double d) : approx_(d) {}
  static PValue ratio(long long num, long long den) { return PValue(Rational(num, den)); }

  bool is_exact() const noexcept { return exact_.has_value(); }
  const Rational& exact() const { return *exact_; }
  double approx() const noexcept { return approx_; }

  /// "p/q" (or integer) for exact values, shortest round-trip decimal otherwise.
  std::string str() const;

  /// Parses "p/q" or an integer literal as exact; anything else as float64.
  static PValue parse(std::string_view text);

 private:
  std::optional<Rational> exact_;
  double approx_;
};

/// Three-way comparison: rational when both sides are exact, float otherwise.
std::partial_ordering compare(const PValue& a, const PValue& b);

/// Equality up to `tol` for float operands; exact equality when both are exact.
bool same_value(const PValue& a, const PValue& b, double tol);

PValue operator+(const PValue& a, const PValue& b);
PValue operator-(const PValue& a, const PValue& b);
PValue operator*(const PValue& a, const PValue& b);
PValue operator/(const PValue& a, const PValue& b);

/// Exact square / cube root when the rational is a perfect power, float otherwise.
PValue sqrt(const PValue& v);
PValue cbrt(const PValue& v);

}  // namespace coxkit
