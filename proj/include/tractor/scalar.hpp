#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace tractor {

/// Exact rational scalar used throughout the library. Expression templates are
/// disabled so the type behaves like a plain value inside Eigen expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXq = MatrixX<Rational>;
using VectorXq = VectorX<Rational>;

template <typename Scalar>
inline bool is_zero(const Scalar& s) {
  return s == Scalar(0);
}

template <typename Scalar>
inline Scalar make_fraction(std::int64_t num, std::int64_t den) {
  return Scalar(num) / Scalar(den);
}

/// "p/q" or "p" for rationals; integer-valued numbers print without a denominator.
template <typename Scalar>
inline std::string to_string(const Scalar& s) {
  return s.str();
}

template <typename Scalar>
bool is_integer(const Scalar& s);

template <>
inline bool is_integer<Rational>(const Rational& s) {
  return boost::multiprecision::denominator(s) == 1;
}

template <typename Scalar>
std::int64_t to_int64(const Scalar& s);

template <>
inline std::int64_t to_int64<Rational>(const Rational& s) {
  return boost::multiprecision::numerator(s).convert_to<std::int64_t>();
}

}  // namespace tractor
