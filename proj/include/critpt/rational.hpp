#pragma once

// Exact rationals on arbitrary-precision integers, just enough for the
// closed-form expected counts.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace critpt {

class Rational {
 public:
  using Int = boost::multiprecision::cpp_int;

  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(Int n, Int d) : num_(std::move(n)), den_(std::move(d)) {
    normalize();
  }

  const Int& num() const { return num_; }
  const Int& den() const { return den_; }

  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Rational operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
  }
  Rational operator/(const Rational& o) const {
    return Rational(num_ * o.den_, den_ * o.num_);
  }
  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }

  double to_double() const {
    return num_.convert_to<double>() / den_.convert_to<double>();
  }
  std::string to_string() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
  }

 private:
  void normalize() {
    if (den_ == 0) throw std::invalid_argument("zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    Int g = boost::multiprecision::gcd(num_ < 0 ? Int(-num_) : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }
  Int num_, den_;
};

}  // namespace critpt
