#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace llab {

// Exact rational on 64-bit integers, always normalized (q > 0, gcd(p,q) = 1).
// Areas and actions are stored in units of pi, so equality and floor tests
// on them are exact.
class Rational {
 public:
  Rational() : p_(0), q_(1) {}
  Rational(std::int64_t p) : p_(p), q_(1) {}
  Rational(std::int64_t p, std::int64_t q) : p_(p), q_(q) { normalize(); }

  static Rational parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
      if (slash == std::string::npos) {
        return Rational(std::stoll(text));
      }
      return Rational(std::stoll(text.substr(0, slash)),
                      std::stoll(text.substr(slash + 1)));
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse rational: " + text);
    }
  }

  std::int64_t num() const { return p_; }
  std::int64_t den() const { return q_; }

  double value() const { return static_cast<double>(p_) / static_cast<double>(q_); }

  bool is_integer() const { return q_ == 1; }

  // floor(p/q), exact also for negative values.
  std::int64_t floor() const {
    std::int64_t d = p_ / q_;
    if (p_ % q_ != 0 && p_ < 0) --d;
    return d;
  }

  std::int64_t ceil() const {
    std::int64_t d = p_ / q_;
    if (p_ % q_ != 0 && p_ > 0) ++d;
    return d;
  }

  std::string str() const {
    if (q_ == 1) return std::to_string(p_);
    return std::to_string(p_) + "/" + std::to_string(q_);
  }

  Rational operator-() const { return Rational(-p_, q_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.p_ * b.q_ + b.p_ * a.q_, a.q_ * b.q_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.p_ * b.q_ - b.p_ * a.q_, a.q_ * b.q_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.p_ * b.p_, a.q_ * b.q_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.p_ == 0) throw std::domain_error("rational division by zero");
    return Rational(a.p_ * b.q_, a.q_ * b.p_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.p_ == b.p_ && a.q_ == b.q_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.p_ * b.q_ < b.p_ * a.q_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  void normalize() {
    if (q_ == 0) throw std::domain_error("rational with zero denominator");
    if (q_ < 0) {
      p_ = -p_;
      q_ = -q_;
    }
    const std::int64_t g = std::gcd(p_ < 0 ? -p_ : p_, q_);
    if (g > 1) {
      p_ /= g;
      q_ /= g;
    }
  }

  std::int64_t p_;
  std::int64_t q_;
};

}  // namespace llab
