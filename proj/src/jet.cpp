#include "krf/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace krf {

namespace {

void enumerate(int nvars, int degree, int pos, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (pos == nvars - 1) {
    cur[pos] = degree;
    out.push_back(cur);
    return;
  }
  for (int k = degree; k >= 0; --k) {
    cur[pos] = k;
    enumerate(nvars, degree - k, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

JetSpace::JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1 || order < 0) throw std::invalid_argument("JetSpace: bad dimensions");
  std::vector<int> cur(nvars, 0);
  for (int d = 0; d <= order; ++d) enumerate(nvars, d, 0, cur, exps_);
  degrees_.reserve(exps_.size());
  keys_.reserve(exps_.size());
  for (const auto& e : exps_) {
    int d = 0;
    for (int v : e) d += v;
    degrees_.push_back(d);
    keys_.push_back(key(e));
  }
  block_.assign(order_ + 2, size());
  for (int i = size() - 1; i >= 0; --i) block_[degrees_[i]] = i;
  const int m = size();
  shift_.assign(static_cast<size_t>(m) * nvars_, -1);
  std::vector<int> e2;
  for (int i = 0; i < m; ++i) {
    for (int v = 0; v < nvars_; ++v) {
      e2 = exps_[i];
      ++e2[v];
      shift_[i * nvars_ + v] = index(e2);
    }
  }
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (degrees_[a] + degrees_[b] > order_) continue;
      std::vector<int> s(nvars_);
      for (int v = 0; v < nvars_; ++v) s[v] = exps_[a][v] + exps_[b][v];
      products_.push_back({a, b, index(s)});
    }
  }
}

unsigned long long JetSpace::key(const std::vector<int>& e) const {
  unsigned long long k = 0;
  for (int v = nvars_ - 1; v >= 0; --v) k = k * static_cast<unsigned long long>(order_ + 1) + e[v];
  return k;
}

int JetSpace::index(const std::vector<int>& e) const {
  int d = 0;
  for (int v : e) {
    if (v < 0) return -1;
    d += v;
  }
  if (d > order_) return -1;
  const unsigned long long k = key(e);
  // Monomials of equal degree are contiguous; search only that block.
  for (int i = block_[d]; i < size() && degrees_[i] == d; ++i)
    if (keys_[i] == k) return i;
  return -1;
}

std::shared_ptr<const JetSpace> JetSpace::get(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = std::make_shared<const JetSpace>(nvars, order);
  return slot;
}

Jet::Jet(std::shared_ptr<const JetSpace> space)
    : space_(std::move(space)), c_(space_->size(), cplx(0.0)) {}

Jet Jet::constant(std::shared_ptr<const JetSpace> space, cplx v) {
  Jet j(std::move(space));
  j.c_[0] = v;
  return j;
}

Jet Jet::variable(std::shared_ptr<const JetSpace> space, int var, cplx center) {
  Jet j(std::move(space));
  j.c_[0] = center;
  if (j.space_->order() >= 1) {
    std::vector<int> e(j.space_->nvars(), 0);
    e[var] = 1;
    j.c_[j.space_->index(e)] = 1.0;
  }
  return j;
}

cplx Jet::coeff(const std::vector<int>& e) const {
  const int i = space_->index(e);
  return i < 0 ? cplx(0.0) : c_[i];
}

cplx Jet::partial(const std::vector<int>& e) const {
  double f = 1.0;
  for (int v : e) f *= factorial(v);
  return f * coeff(e);
}

Jet& Jet::operator+=(const Jet& o) {
  for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Jet& Jet::operator+=(cplx s) {
  c_[0] += s;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.space_);
  for (const auto& t : a.space_->products()) r.c_[t.c] += a.c_[t.a] * b.c_[t.b];
  return r;
}

Jet Jet::compose(const std::vector<cplx>& series) const {
  Jet delta = *this;
  delta.c_[0] = 0.0;
  const int k_max = std::min<int>(static_cast<int>(series.size()) - 1, space_->order());
  Jet r = Jet::constant(space_, k_max >= 0 ? series[k_max] : cplx(0.0));
  for (int k = k_max - 1; k >= 0; --k) {
    r = r * delta;
    r.c_[0] += series[k];
  }
  return r;
}

Jet Jet::diff(int var) const {
  Jet r(space_);
  for (int i = 0; i < size(); ++i) {
    const int up = space_->shift(i, var);
    if (up < 0) continue;
    r.c_[i] = static_cast<double>(space_->exponents(up)[var]) * c_[up];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  auto target = JetSpace::get(space_->nvars(), order);
  Jet r(target);
  for (int i = 0; i < target->size(); ++i) {
    const int src = space_->index(target->exponents(i));
    if (src >= 0) r.c_[i] = c_[src];
  }
  return r;
}

Jet Jet::conjugate_swap(int n) const {
  Jet r(space_);
  std::vector<int> e(space_->nvars());
  for (int i = 0; i < size(); ++i) {
    const auto& src = space_->exponents(i);
    for (int v = 0; v < n; ++v) {
      e[v] = src[v + n];
      e[v + n] = src[v];
    }
    for (int v = 2 * n; v < space_->nvars(); ++v) e[v] = src[v];
    r.c_[space_->index(e)] = std::conj(c_[i]);
  }
  return r;
}

Jet Jet::substitute(const std::vector<Jet>& args) const {
  if (static_cast<int>(args.size()) != space_->nvars())
    throw std::invalid_argument("Jet::substitute: argument count mismatch");
  const auto& target = args.at(0).space_ptr();
  const int order = std::min(space_->order(), target->order());
  // powers[v][k] = args[v]^k
  std::vector<std::vector<Jet>> powers(args.size());
  for (size_t v = 0; v < args.size(); ++v) {
    powers[v].push_back(Jet::constant(target, 1.0));
    for (int k = 1; k <= order; ++k) powers[v].push_back(powers[v].back() * args[v]);
  }
  Jet r(target);
  for (int i = 0; i < size(); ++i) {
    if (c_[i] == cplx(0.0) || space_->degree(i) > order) continue;
    const auto& e = space_->exponents(i);
    Jet term = Jet::constant(target, c_[i]);
    for (size_t v = 0; v < args.size(); ++v)
      if (e[v] > 0) term = term * powers[v][e[v]];
    r += term;
  }
  return r;
}

cplx Jet::evaluate(const std::vector<cplx>& w) const {
  cplx s = 0.0;
  for (int i = 0; i < size(); ++i) {
    if (c_[i] == cplx(0.0)) continue;
    cplx m = c_[i];
    const auto& e = space_->exponents(i);
    for (int v = 0; v < space_->nvars(); ++v)
      for (int k = 0; k < e[v]; ++k) m *= w[v];
    s += m;
  }
  return s;
}

Jet Jet::homogeneous(int degree) const {
  Jet r(space_);
  for (int i = 0; i < size(); ++i)
    if (space_->degree(i) == degree) r.c_[i] = c_[i];
  return r;
}

double Jet::max_abs() const {
  double m = 0.0;
  for (const auto& v : c_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<cplx> series_log(cplx a, int order) {
  std::vector<cplx> s(order + 1);
  s[0] = std::log(a);
  cplx p = 1.0;
  for (int k = 1; k <= order; ++k) {
    p /= a;
    s[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / static_cast<double>(k);
  }
  return s;
}

std::vector<cplx> series_exp(cplx a, int order) {
  std::vector<cplx> s(order + 1);
  const cplx e = std::exp(a);
  for (int k = 0; k <= order; ++k) s[k] = e / factorial(k);
  return s;
}

std::vector<cplx> series_inv(cplx a, int order) {
  std::vector<cplx> s(order + 1);
  cplx p = 1.0 / a;
  for (int k = 0; k <= order; ++k) {
    s[k] = ((k % 2 == 0) ? 1.0 : -1.0) * p;
    p /= a;
  }
  return s;
}

std::vector<cplx> series_sqrt(cplx a, int order) {
  // binomial series of sqrt(a) (1 + t/a)^{1/2}
  std::vector<cplx> s(order + 1);
  const cplx r = std::sqrt(a);
  cplx binom = 1.0;
  cplx p = 1.0;
  for (int k = 0; k <= order; ++k) {
    s[k] = r * binom * p;
    binom *= (0.5 - k) / static_cast<double>(k + 1);
    p /= a;
  }
  return s;
}

Jet log(const Jet& j) { return j.compose(series_log(j.value(), j.space().order())); }
Jet exp(const Jet& j) { return j.compose(series_exp(j.value(), j.space().order())); }
Jet inverse(const Jet& j) { return j.compose(series_inv(j.value(), j.space().order())); }
Jet sqrt(const Jet& j) { return j.compose(series_sqrt(j.value(), j.space().order())); }

Jet determinant(const std::vector<Jet>& a, int m) {
  if (m == 1) return a[0];
  if (m == 2) return a[0] * a[3] - a[1] * a[2];
  Jet r(a[0].space_ptr());
  std::vector<Jet> minor(static_cast<size_t>((m - 1) * (m - 1)));
  for (int col = 0; col < m; ++col) {
    int idx = 0;
    for (int i = 1; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (j != col) minor[idx++] = a[i * m + j];
    Jet term = a[col] * determinant(minor, m - 1);
    if (col % 2 == 0)
      r += term;
    else
      r -= term;
  }
  return r;
}

}  // namespace krf
