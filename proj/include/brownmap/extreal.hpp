#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace brownmap {

/// Extended real value: finite(x), +inf, or -inf. Used wherever an
/// integral or lifetime may legitimately diverge; never a sentinel float.
class ExtReal {
 public:
  enum class Tag { Finite, PosInf, NegInf };

  ExtReal() : tag_(Tag::Finite), value_(0.0) {}
  ExtReal(double v) : tag_(Tag::Finite), value_(v) {
    if (std::isinf(v)) tag_ = v > 0 ? Tag::PosInf : Tag::NegInf;
    if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN");
  }

  static ExtReal pos_inf() { ExtReal e; e.tag_ = Tag::PosInf; return e; }
  static ExtReal neg_inf() { ExtReal e; e.tag_ = Tag::NegInf; return e; }

  bool finite() const { return tag_ == Tag::Finite; }
  bool is_pos_inf() const { return tag_ == Tag::PosInf; }
  bool is_neg_inf() const { return tag_ == Tag::NegInf; }

  /// Finite value; throws if infinite.
  double value() const {
    if (!finite()) throw std::domain_error("ExtReal: infinite value");
    return value_;
  }

  /// As an IEEE double (infinities map to +/-inf).
  double as_double() const {
    if (tag_ == Tag::PosInf) return std::numeric_limits<double>::infinity();
    if (tag_ == Tag::NegInf) return -std::numeric_limits<double>::infinity();
    return value_;
  }

  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    return a.as_double() < b.as_double();
  }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }
  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.tag_ == b.tag_ && (a.tag_ != Tag::Finite || a.value_ == b.value_);
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtReal& e) {
    if (e.is_pos_inf()) return os << "+inf";
    if (e.is_neg_inf()) return os << "-inf";
    return os << e.value_;
  }

 private:
  Tag tag_;
  double value_;
};

}  // namespace brownmap
