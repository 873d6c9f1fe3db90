#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <cstdio>
#include <string>
#include <type_traits>

namespace sigpoa {

// Exact arithmetic mode for fixtures whose expected values are closed-form
// rationals (e.g. 4/3, 1/n). The double mode is the default everywhere else.
using Rational = boost::multiprecision::cpp_rational;

template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

// Tolerance policy per scalar. Exact mode runs every comparison at zero slack.
template <class Scalar>
struct Tol {
  static Scalar input() { return Scalar(1e-9); }      // user-facing normalization slack
  static Scalar internal() { return Scalar(1e-12); }  // accumulated-arithmetic checks
  static Scalar best_response() { return Scalar(1e-8); }
  static Scalar pivot() { return Scalar(1e-11); }
  static Scalar tie() { return Scalar(1e-9); }        // off-support tie => degeneracy
  // Post-perturbation passes only have to beat rounding noise, not user slack.
  static Scalar perturbed_best_response() { return Scalar(1e-12); }
  static Scalar perturbed_tie() { return Scalar(1e-13); }
};

template <>
struct Tol<Rational> {
  static Rational input() { return 0; }
  static Rational internal() { return 0; }
  static Rational best_response() { return 0; }
  static Rational pivot() { return 0; }
  static Rational tie() { return 0; }
  static Rational perturbed_best_response() { return 0; }
  static Rational perturbed_tie() { return 0; }
};

template <class Scalar>
inline Scalar abs_value(const Scalar& x) {
  using std::abs;
  return abs(x);
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return static_cast<double>(x); }

// splitmix64: stable across platforms, used for all deterministic patterns.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d4949fb97f64a3ull ^ (z >> 31);
  return z;
}

inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a * 0x9e3779b97f4a7c15ull + b;
  return splitmix64(s);
}

// Uniform in [0,1) with 53 bits; mt19937_64 / distribution-free so that fixed
// seeds reproduce bit-identically on every platform.
inline double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// 12 significant digits, the fixed width of all machine-readable output.
inline std::string format_sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace sigpoa
