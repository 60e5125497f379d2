#include <random>

#include "doctest.h"
#include "krf/jet.hpp"

using namespace krf;

namespace {

Jet random_jet(const std::shared_ptr<const JetSpace>& sp, std::mt19937_64& rng, cplx value) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Jet j(sp);
  for (int i = 0; i < j.size(); ++i) j[i] = cplx(U(rng), U(rng));
  j[0] = value;
  return j;
}

double distance(const Jet& a, const Jet& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("jet space indexes every monomial up to the order") {
  const auto sp = JetSpace::get(3, 4);
  CHECK(sp->size() == 35);  // C(3+4, 4)
  for (int i = 0; i < sp->size(); ++i) CHECK(sp->index(sp->exponents(i)) == i);
  CHECK(sp->index({5, 0, 0}) == -1);
  CHECK(JetSpace::get(3, 4).get() == sp.get());
}

TEST_CASE("log and exp are inverse on random jets") {
  std::mt19937_64 rng(11);
  const auto sp = JetSpace::get(2, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const Jet a = random_jet(sp, rng, cplx(1.5 + trial * 0.1, 0.3));
    CHECK(distance(exp(log(a)), a) < 1e-11);
    CHECK(distance(inverse(a) * a, Jet::constant(sp, 1.0)) < 1e-11);
    const Jet r = sqrt(a);
    CHECK(distance(r * r, a) < 1e-11);
  }
}

TEST_CASE("differentiation obeys the product rule") {
  std::mt19937_64 rng(12);
  const auto sp = JetSpace::get(4, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const Jet a = random_jet(sp, rng, 0.7), b = random_jet(sp, rng, -0.2);
    for (int v = 0; v < 4; ++v) {
      const Jet lhs = (a * b).diff(v).truncated(3);
      const Jet rhs = (a.diff(v) * b + a * b.diff(v)).truncated(3);
      CHECK(distance(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("partial derivatives carry factorials") {
  const auto sp = JetSpace::get(2, 4);
  const Jet x = Jet::variable(sp, 0), y = Jet::variable(sp, 1);
  const Jet p = x * x * x * y;  // ∂x³∂y = 3! · 1
  CHECK(p.partial({3, 1}).real() == doctest::Approx(6.0));
  CHECK(p.coeff({3, 1}).real() == doctest::Approx(1.0));
}

TEST_CASE("determinant of a jet matrix matches the product for triangular input") {
  std::mt19937_64 rng(13);
  const auto sp = JetSpace::get(2, 3);
  std::vector<Jet> m(9, Jet(sp));
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) m[i * 3 + j] = random_jet(sp, rng, i == j ? cplx(2.0 + i) : cplx(0.5));
  const Jet prod = m[0] * m[4] * m[8];
  CHECK(distance(determinant(m, 3), prod) < 1e-12);
}

TEST_CASE("substitution composes polynomial maps") {
  const auto sp = JetSpace::get(2, 4);
  const Jet w0 = Jet::variable(sp, 0), w1 = Jet::variable(sp, 1);
  // f(a, b) = a² + 3ab, with a = w0 + w1², b = 2 w1
  const Jet f = w0 * w0 + 3.0 * w0 * w1;
  const Jet a = w0 + w1 * w1, b = 2.0 * w1;
  const Jet g = f.substitute({a, b});
  const Jet expect = a * a + 3.0 * a * b;
  CHECK(distance(g, expect) < 1e-14);
  CHECK(g.evaluate({0.1, 0.2}).real() == doctest::Approx(expect.evaluate({0.1, 0.2}).real()));
}

TEST_CASE("conjugate_swap exchanges holomorphic and antiholomorphic slots") {
  const auto sp = JetSpace::get(2, 3);
  const Jet z = Jet::variable(sp, 0, cplx(0.3, 0.4));
  const Jet zb = z.conjugate_swap(1);
  CHECK(zb.value() == cplx(0.3, -0.4));
  CHECK(zb.coeff({0, 1}) == cplx(1.0));
}
