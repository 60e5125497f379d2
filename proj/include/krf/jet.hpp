#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace krf {

using cplx = std::complex<double>;

// Monomial table for truncated polynomials in `nvars` variables up to total
// degree `order`. Instances are cached and shared; lookups are thread-safe.
class JetSpace {
 public:
  struct Term {
    int a, b, c;  // monomial a * monomial b = monomial c
  };

  static std::shared_ptr<const JetSpace> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const std::vector<int>& exponents(int i) const { return exps_[i]; }
  int degree(int i) const { return degrees_[i]; }
  // -1 when the exponent vector exceeds the truncation order.
  int index(const std::vector<int>& e) const;
  const std::vector<Term>& products() const { return products_; }
  // Index of monomial i multiplied by variable v, or -1.
  int shift(int i, int v) const { return shift_[i * nvars_ + v]; }

  JetSpace(int nvars, int order);

 private:
  unsigned long long key(const std::vector<int>& e) const;

  int nvars_;
  int order_;
  std::vector<std::vector<int>> exps_;
  std::vector<int> degrees_;
  std::vector<int> block_;  // first index of each degree
  std::vector<unsigned long long> keys_;
  std::vector<Term> products_;
  std::vector<int> shift_;
};

// Truncated multivariate Taylor polynomial with complex coefficients.
// For metric work the variables are (w_1..w_n, w̄_1..w̄_n), treated as
// independent, so holomorphic and anti-holomorphic derivatives are plain
// partial derivatives in the corresponding slot.
class Jet {
 public:
  Jet() = default;
  explicit Jet(std::shared_ptr<const JetSpace> space);

  static Jet constant(std::shared_ptr<const JetSpace> space, cplx v);
  static Jet variable(std::shared_ptr<const JetSpace> space, int var, cplx center = 0.0);

  const JetSpace& space() const { return *space_; }
  const std::shared_ptr<const JetSpace>& space_ptr() const { return space_; }
  int size() const { return static_cast<int>(c_.size()); }

  cplx operator[](int i) const { return c_[i]; }
  cplx& operator[](int i) { return c_[i]; }
  cplx value() const { return c_[0]; }
  cplx coeff(const std::vector<int>& e) const;
  // Partial derivative at the expansion point: e! times the coefficient.
  cplx partial(const std::vector<int>& e) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(cplx s);
  Jet& operator+=(cplx s);
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, cplx s) { return a *= s; }
  friend Jet operator*(cplx s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, cplx s) { return a += s; }
  friend Jet operator*(const Jet& a, const Jet& b);

  // Σ_k series[k] (this − value())^k.
  Jet compose(const std::vector<cplx>& series) const;
  Jet diff(int var) const;
  Jet truncated(int order) const;
  // Exchange variables [0,n) with [n,2n) and conjugate coefficients.
  Jet conjugate_swap(int n) const;
  // this(args), where args live in a common target space and have zero
  // constant term (the expansion point of this jet maps to the origin).
  Jet substitute(const std::vector<Jet>& args) const;
  cplx evaluate(const std::vector<cplx>& w) const;
  // Homogeneous part of the given degree, same space.
  Jet homogeneous(int degree) const;
  double max_abs() const;

 private:
  std::shared_ptr<const JetSpace> space_;
  std::vector<cplx> c_;
};

// Taylor coefficients about t = 0 of the map t -> f(a + t).
std::vector<cplx> series_log(cplx a, int order);
std::vector<cplx> series_exp(cplx a, int order);
std::vector<cplx> series_inv(cplx a, int order);
std::vector<cplx> series_sqrt(cplx a, int order);

Jet log(const Jet& j);
Jet exp(const Jet& j);
Jet inverse(const Jet& j);
Jet sqrt(const Jet& j);

// Determinant of a small square matrix of jets (row-major, size m*m).
Jet determinant(const std::vector<Jet>& a, int m);

}  // namespace krf
