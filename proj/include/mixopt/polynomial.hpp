#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "mixopt/numeric.hpp"

namespace mixopt {

using Exponent = std::vector<unsigned>;

// Sparse multivariate polynomial with exact rational coefficients. Terms are
// kept in a lexicographically ordered map and zero coefficients are never
// stored, so two polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Rat>;

  explicit Polynomial(std::size_t dims = 0) : dims_(dims) {}

  static Polynomial constant(std::size_t dims, const Rat& c) {
    Polynomial p(dims);
    p.add_term(Exponent(dims, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t dims, std::size_t i) {
    if (i >= dims) throw ContractViolation("variable index out of range");
    Exponent e(dims, 0);
    e[i] = 1;
    Polynomial p(dims);
    p.add_term(std::move(e), 1);
    return p;
  }

  std::size_t dims() const { return dims_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // Adds c * x^e, merging with an existing term.
  void add_term(Exponent e, const Rat& c) {
    if (e.size() != dims_) throw ContractViolation("exponent length does not match dimension");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // Maximum total degree; 0 for the zero polynomial.
  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
  }

  Rat constant_term() const {
    auto it = terms_.find(Exponent(dims_, 0));
    return it == terms_.end() ? Rat(0) : it->second;
  }

  bool has_integer_coefficients() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return is_integral(t.second); });
  }

  static unsigned total_degree(const Exponent& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
  }

  // Exact value at a point; T is Rat or Int. Integer points require integer
  // coefficients.
  template <class T>
  T evaluate(std::span<const T> point) const {
    if (point.size() != dims_) throw ContractViolation("evaluation point has wrong dimension");
    std::vector<std::vector<T>> powers(dims_);
    T acc = 0;
    for (const auto& [e, c] : terms_) {
      T term = coefficient_as<T>(c);
      for (std::size_t i = 0; i < dims_; ++i) {
        if (e[i] == 0) continue;
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(T(1));
        while (pw.size() <= e[i]) pw.push_back(pw.back() * point[i]);
        term *= pw[e[i]];
      }
      acc += term;
    }
    return acc;
  }

  template <class T>
  T evaluate(const std::vector<T>& point) const {
    return evaluate(std::span<const T>(point));
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_dims(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) { return *this += -o; }

  Polynomial& operator*=(const Rat& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rat& s) { return a *= s; }
  friend Polynomial operator*(const Rat& s, Polynomial a) { return a *= s; }

  friend Polynomial operator+(Polynomial a, const Rat& s) {
    a.add_term(Exponent(a.dims_, 0), s);
    return a;
  }
  friend Polynomial operator-(Polynomial a, const Rat& s) {
    a.add_term(Exponent(a.dims_, 0), -s);
    return a;
  }
  friend Polynomial operator-(const Rat& s, const Polynomial& a) { return (-a) + s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_dims(b);
    Polynomial r(a.dims_);
    Exponent e(a.dims_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.dims_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.dims_ == b.dims_ && a.terms_ == b.terms_;
  }

 private:
  template <class T>
  static T coefficient_as(const Rat& c) {
    if constexpr (std::is_same_v<T, Int>) {
      if (!is_integral(c)) throw ContractViolation("integer evaluation of a rational polynomial");
      return c.get_num();
    } else {
      return T(c);
    }
  }

  void check_dims(const Polynomial& o) const {
    if (o.dims_ != dims_) throw ContractViolation("polynomial dimension mismatch");
  }

  std::size_t dims_;
  TermMap terms_;
};

inline Polynomial pow(const Polynomial& p, unsigned k) {
  Polynomial result = Polynomial::constant(p.dims(), 1);
  Polynomial base = p;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

// Returns (multiplier * p, multiplier) with the smallest positive multiplier
// making every coefficient integral.
inline std::pair<Polynomial, Int> clear_denominators(const Polynomial& p) {
  Int mult = 1;
  for (const auto& [e, c] : p.terms())
    mpz_lcm(mult.get_mpz_t(), mult.get_mpz_t(), c.get_den_mpz_t());
  return {p * Rat(mult), mult};
}

// f~(x~, z) = m^D f(x~/m, z) where the first d1 variables are continuous.
// Coefficient of alpha is scaled by m^(D - sum_{i<d1} alpha_i).
inline Polynomial scale_substitute(const Polynomial& p, const Int& m, std::size_t d1) {
  if (!p.has_integer_coefficients())
    throw ContractViolation("scale_substitute needs integer coefficients");
  if (m <= 0) throw DomainError("grid size must be positive");
  if (d1 > p.dims()) throw ContractViolation("more continuous variables than dimensions");
  const unsigned D = p.degree();
  Polynomial r(p.dims());
  for (const auto& [e, c] : p.terms()) {
    unsigned cont = 0;
    for (std::size_t i = 0; i < d1; ++i) cont += e[i];
    r.add_term(e, c * Rat(ipow(m, D - cont)));
  }
  return r;
}

struct CoeffStats {
  Rat C = 0;        // largest absolute coefficient
  std::size_t r = 0;  // number of monomials
  unsigned D = 0;   // maximum total degree
};

inline CoeffStats coeff_stats(const Polynomial& p) {
  CoeffStats s;
  s.r = p.size();
  s.D = p.degree();
  for (const auto& [e, c] : p.terms()) s.C = std::max<Rat>(s.C, abs(c));
  return s;
}

// L = C r D max(M,1)^(D-1): a Lipschitz constant in the sup-norm on the box
// |x_i| <= M. Zero exactly for constant polynomials.
inline Rat lipschitz_constant(const CoeffStats& s, const Rat& M) {
  if (M < 0) throw DomainError("box bound must be non-negative");
  if (s.D == 0) return 0;
  const Rat base = std::max<Rat>(M, 1);
  return s.C * Rat(static_cast<unsigned long>(s.r)) * Rat(s.D) * rpow(base, s.D - 1);
}

}  // namespace mixopt
