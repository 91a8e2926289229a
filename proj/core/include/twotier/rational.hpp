#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace twotier {

// Exact fraction with a positive, reduced denominator. Group weights under
// the proportional rule are n*a/(a+b), so every value met in practice has a
// denominator bounded by a product of group sizes; comparisons widen to
// 128 bits so they never overflow.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    normalize();
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rational operator+(const Rational& x, const Rational& y) {
    if (x.den_ == y.den_) return Rational(x.num_ + y.num_, x.den_);
    const std::int64_t g = std::gcd(x.den_, y.den_);
    const std::int64_t lhs = x.num_ * (y.den_ / g);
    const std::int64_t rhs = y.num_ * (x.den_ / g);
    return Rational(lhs + rhs, x.den_ / g * y.den_);
  }
  friend Rational operator-(const Rational& x) {
    Rational r;
    r.num_ = -x.num_;
    r.den_ = x.den_;
    return r;
  }
  friend Rational operator-(const Rational& x, const Rational& y) {
    return x + (-y);
  }
  friend Rational operator*(const Rational& x, const Rational& y) {
    const std::int64_t g1 = std::gcd(x.num_, y.den_);
    const std::int64_t g2 = std::gcd(y.num_, x.den_);
    const std::int64_t a = g1 == 0 ? 0 : x.num_ / g1;
    const std::int64_t d = g1 == 0 ? y.den_ : y.den_ / g1;
    const std::int64_t b = g2 == 0 ? 0 : y.num_ / g2;
    const std::int64_t c = g2 == 0 ? x.den_ : x.den_ / g2;
    return Rational(a * b, c * d);
  }
  Rational& operator+=(const Rational& y) { return *this = *this + y; }

  friend bool operator==(const Rational& x, const Rational& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& x,
                                          const Rational& y) {
    __extension__ using wide = __int128;
    const wide lhs = static_cast<wide>(x.num_) * y.den_;
    const wide rhs = static_cast<wide>(y.num_) * x.den_;
    return lhs <=> rhs;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    os << r.num_;
    if (r.den_ != 1) os << '/' << r.den_;
    return os;
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace twotier
