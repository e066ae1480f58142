#pragma once

#include <string>
#include <vector>

#include "harnesslab/scalar.hpp"

namespace harnesslab {

/// Degree-one polynomial in the time variable, slope*t + intercept.
template <class T>
struct LinearPoly {
  T slope{0};
  T intercept{0};

  T operator()(const T& t) const { return slope * t + intercept; }

  friend bool operator==(const LinearPoly& a, const LinearPoly& b) {
    return a.slope == b.slope && a.intercept == b.intercept;
  }
};

/// Dense polynomial over the scalar backend; used for symbolic moments
/// in t and as a matrix entry type. Trailing zero coefficients are
/// stripped so equality is canonical.
template <class T>
class Poly {
 public:
  Poly() = default;
  Poly(int v) {
    if (v != 0) c_.push_back(T(v));
  }
  explicit Poly(const T& v) {
    if (!(v == T(0))) c_.push_back(v);
  }
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly var() { return Poly(std::vector<T>{T(0), T(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  T coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return T(0);
    return c_[static_cast<std::size_t>(k)];
  }

  T eval(const T& t) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] - b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a) { return Poly() - a; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    return Poly(std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  std::string str(const std::string& varname = "t") const {
    if (c_.empty()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      const T v = coeff(k);
      if (v == T(0)) continue;
      if (!out.empty()) out += " + ";
      if constexpr (is_exact_v<T>) {
        out += to_string(v);
      } else {
        out += std::to_string(to_double(v));
      }
      if (k >= 1) out += "*" + varname;
      if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

}  // namespace harnesslab
