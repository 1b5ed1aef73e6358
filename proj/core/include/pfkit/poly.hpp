#pragma once

#include "pfkit/params.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pfkit {

// Dense univariate polynomial in h. C needs ring operations and is_zero().
template <class C>
class PolyT {
 public:
  PolyT() = default;
  PolyT(const C& c) {  // NOLINT
    if (!c.is_zero()) c_.push_back(c);
  }
  explicit PolyT(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }
  static PolyT monomial(const C& c, int deg) {
    std::vector<C> v(deg + 1);
    v[deg] = c;
    return PolyT(std::move(v));
  }
  static PolyT h() { return monomial(C(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<C>& coeffs() const { return c_; }
  C operator[](int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : C(); }
  const C& lead() const { return c_.back(); }

  PolyT operator-() const {
    PolyT out = *this;
    for (auto& x : out.c_) x = -x;
    return out;
  }
  friend PolyT operator+(const PolyT& a, const PolyT& b) {
    std::vector<C> v(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) v[i] = v[i] + b.c_[i];
    return PolyT(std::move(v));
  }
  friend PolyT operator-(const PolyT& a, const PolyT& b) { return a + (-b); }
  friend PolyT operator*(const PolyT& a, const PolyT& b) {
    if (a.is_zero() || b.is_zero()) return PolyT();
    std::vector<C> v(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    }
    return PolyT(std::move(v));
  }
  PolyT& operator+=(const PolyT& o) { return *this = *this + o; }
  PolyT& operator-=(const PolyT& o) { return *this = *this - o; }
  PolyT& operator*=(const PolyT& o) { return *this = *this * o; }
  friend bool operator==(const PolyT& a, const PolyT& b) { return a.c_ == b.c_; }
  friend bool operator!=(const PolyT& a, const PolyT& b) { return !(a == b); }

  template <class S>
  PolyT scaled(const S& s) const {
    std::vector<C> v;
    v.reserve(c_.size());
    for (const auto& x : c_) v.push_back(s * x);
    return PolyT(std::move(v));
  }

  PolyT derivative() const {
    std::vector<C> v;
    for (size_t i = 1; i < c_.size(); ++i) v.push_back(ExactScalar(static_cast<long>(i)) * c_[i]);
    return PolyT(std::move(v));
  }

  template <class V>
  V eval(const V& x) const {
    V acc{};
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + V(c_[i]);
    return acc;
  }

  template <class Fn>
  auto map(Fn fn) const {
    using D = decltype(fn(std::declval<C>()));
    std::vector<D> v;
    v.reserve(c_.size());
    for (const auto& x : c_) v.push_back(fn(x));
    return PolyT<D>(std::move(v));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<C> c_;
};

using Poly = PolyT<ExactScalar>;
using PolyP = PolyT<ParamPoly>;

// Field operations for Poly with radical-only coefficients.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
Poly poly_gcd(Poly a, Poly b);
Poly poly_monic(const Poly& a);
Real poly_eval_real(const Poly& p, const Real& x, const ConstantTable* t = nullptr);
std::string poly_to_string(const Poly& p, const char* var = "h");
std::string polyp_to_string(const PolyP& p, const char* var = "h");
PolyP to_polyp(const Poly& p);

}  // namespace pfkit
