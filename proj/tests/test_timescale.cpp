#include <doctest.h>

#include "tsspec/random_problems.hpp"
#include "tsspec/timescale.hpp"

using namespace tsspec;

namespace {

GridFunction sample_scalar(ScaleRef scale, double (*f)(double)) {
  GridFunction g(scale, -1, scale->N(), 1, 1);
  for (int i = -1; i <= scale->N(); ++i) g.at(i)(0, 0) = f(scale->t(i));
  return g;
}

}  // namespace

TEST_CASE("scale factories") {
  SUBCASE("uniform unit scale with a = 0") {
    const auto s = make_uniform_scale(1.0, 3);
    CHECK(s->points() == std::vector<double>{-1, 0, 1, 2, 3});
    CHECK(s->a() == 0.0);
    CHECK(s->b() == 2.0);
  }
  SUBCASE("q-scale doubles") {
    const auto s = make_q_scale(2.0, 1.0, 3);
    CHECK(s->points() == std::vector<double>{0.5, 1, 2, 4, 8});
  }
  SUBCASE("explicit list must match N") {
    CHECK_THROWS_AS(make_explicit_scale({0, 1, 3, 7}, 3), InvalidParameter);
    CHECK_NOTHROW(make_explicit_scale({0, 1, 3, 7}, 2));
  }
  SUBCASE("colliding q-scale points rejected") {
    CHECK_THROWS_AS(make_q_scale(0.5, 1.0, 3), InvalidParameter);  // decreasing
    CHECK_THROWS_AS(make_q_scale(1.0, 1.0, 3), InvalidParameter);
  }
  SUBCASE("too few points rejected") {
    CHECK_THROWS_AS(make_uniform_scale(1.0, 1), InvalidParameter);
    CHECK_THROWS_AS(make_explicit_scale({0.0, 1.0, 2.0}), InvalidParameter);
  }
  SUBCASE("random scale has bounded graininess") {
    const auto s = make_random_scale(99, 6);
    for (int i = 0; i <= 6; ++i) {
      CHECK(s->mu_rho(i) >= 0.5);
      CHECK(s->mu_rho(i) <= 2.0);
    }
  }
}

TEST_CASE("delta and nabla on pinned cases") {
  SUBCASE("constant maps to zero, window shrinks right") {
    const auto s = make_uniform_scale(1.0, 4);
    const auto c = sample_scalar(s, [](double) { return 3.5; });
    const auto dc = delta(c);
    CHECK(dc.lo() == -1);
    CHECK(dc.hi() == 3);  // N - 1
    CHECK(dc.sup_norm() == 0.0);
  }
  SUBCASE("identity function differentiates to one") {
    const auto s = make_uniform_scale(1.0, 4);
    const auto x = sample_scalar(s, [](double t) { return t; });
    const auto dx = delta(x);
    const auto nx = nabla(x);
    for (int i = dx.lo(); i <= dx.hi(); ++i) CHECK(dx.at(i)(0, 0) == Complex(1.0, 0.0));
    for (int i = nx.lo(); i <= nx.hi(); ++i) CHECK(nx.at(i)(0, 0) == Complex(1.0, 0.0));
    CHECK(nx.lo() == 0);  // nabla drops the left endpoint
  }
  SUBCASE("t^2 on the grid {1, 2, 4}") {
    const auto s = make_explicit_scale({0.5, 1, 2, 4, 8});
    const auto x = sample_scalar(s, [](double t) { return t * t; });
    const auto dx = delta(x);
    CHECK(dx.at(0)(0, 0).real() == doctest::Approx(3.0));  // (4-1)/1 at t=1
    CHECK(dx.at(1)(0, 0).real() == doctest::Approx(6.0));  // (16-4)/2 at t=2
  }
  SUBCASE("window too small") {
    const auto s = make_uniform_scale(1.0, 3);
    GridFunction one_point(s, 0, 0, 1, 1);
    CHECK_THROWS_AS(delta(one_point), WindowTooSmall);
    CHECK_THROWS_AS(nabla(one_point), WindowTooSmall);
  }
}

TEST_CASE("nabla(x) at t_k equals delta(x) at t_{k-1} exactly") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_scale(rng, 2 + rng.pick(6), nullptr);
    const auto x = random_grid_function(rng, s, -1, s->N(), 2);
    const auto dx = delta(x);
    const auto nx = nabla(x);
    for (int k = nx.lo(); k <= nx.hi(); ++k) {
      CHECK((nx.at(k) - dx.at(k - 1)).norm() == 0.0);
    }
  }
}

TEST_CASE("nabla integral") {
  SUBCASE("zero integrand") {
    const auto s = make_uniform_scale(1.0, 3);
    GridFunction z(s, -1, 3, 1, 1);
    CHECK(nabla_integral(z, -1, 2).norm() == 0.0);
  }
  SUBCASE("constant one telescopes to b - rho(a)") {
    const auto s = make_explicit_scale({-0.7, 0, 1.3, 2.1, 4.0});
    const auto one = sample_scalar(s, [](double) { return 1.0; });
    const auto v = nabla_integral(one, -1, s->N() - 1);
    CHECK(v(0, 0).real() == doctest::Approx(s->b() - s->rho_a()));
  }
  SUBCASE("f(t) = t on the grid {0, 1, 3}") {
    const auto s = make_explicit_scale({-1.0, 0, 1, 3});  // interior {0, 1}, sigma(b) = 3
    const auto f = sample_scalar(s, [](double t) { return t; });
    // integral from 0 to 3: f(1) mu_rho(1) + f(3) mu_rho(2) = 1 + 6
    const auto v = nabla_integral(f, 0, 2);
    CHECK(v(0, 0).real() == doctest::Approx(7.0));
  }
  SUBCASE("window mismatch") {
    const auto s = make_uniform_scale(1.0, 3);
    GridFunction z(s, 0, 2, 1, 1);
    CHECK_THROWS_AS(nabla_integral(z, -1, 3), WindowMismatch);
  }
}

TEST_CASE("iterated derivatives") {
  SUBCASE("second nabla of t^2 is the constant 2 on a unit grid") {
    const auto s = make_uniform_scale(1.0, 6);
    const auto x = sample_scalar(s, [](double t) { return t * t; });
    const std::vector<Deriv> word{Deriv::Nabla, Deriv::Nabla};
    const auto g = iterated_derivative(x, word);
    CHECK(g.lo() == 1);
    for (int i = g.lo(); i <= g.hi(); ++i) {
      CHECK(g.at(i)(0, 0).real() == doctest::Approx(2.0));
    }
  }
  SUBCASE("empty word is the identity") {
    const auto s = make_uniform_scale(1.0, 3);
    const auto x = sample_scalar(s, [](double t) { return t; });
    const auto g = iterated_derivative(x, {});
    CHECK(sup_difference(g, x) == 0.0);
  }
  SUBCASE("composing words matches a single fold") {
    Rng rng(17);
    const auto s = random_scale(rng, 6, nullptr);
    const auto x = random_grid_function(rng, s, -1, 6, 1);
    const std::vector<Deriv> dword{Deriv::Delta};
    const std::vector<Deriv> nword{Deriv::Nabla};
    const std::vector<Deriv> both{Deriv::Delta, Deriv::Nabla};
    const auto two_step = iterated_derivative(iterated_derivative(x, dword), nword);
    const auto one_step = iterated_derivative(x, both);
    CHECK(two_step.lo() == one_step.lo());
    CHECK(two_step.hi() == one_step.hi());
    CHECK(sup_difference(two_step, one_step) == 0.0);
  }
}

TEST_CASE("summation by parts telescopes exactly") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int N = 2 + rng.pick(7);
    const auto s = random_scale(rng, N, nullptr);
    const auto f = random_grid_function(rng, s, -1, N, 1);
    const auto g = random_grid_function(rng, s, -1, N, 1);
    Complex acc = 0.0;
    for (int k = 0; k <= N - 1; ++k) {
      const Complex gn = (g.at(k)(0, 0) - g.at(k - 1)(0, 0)) / s->mu_rho(k);
      const Complex fn = (f.at(k)(0, 0) - f.at(k - 1)(0, 0)) / s->mu_rho(k);
      acc += (f.at(k)(0, 0) * gn + fn * g.at(k - 1)(0, 0)) * s->mu_rho(k);
    }
    const Complex rhs =
        f.at(N - 1)(0, 0) * g.at(N - 1)(0, 0) - f.at(-1)(0, 0) * g.at(-1)(0, 0);
    CHECK(std::abs(acc - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("uniform-scale limit recovers the classical derivative at first order") {
  // sample p(t) = t^3 - 2t on shrinking uniform scales around t = 0.55
  auto poly = [](double t) { return t * t * t - 2.0 * t; };
  auto dpoly = [](double t) { return 3.0 * t * t - 2.0; };
  double prev_err = 1e9;
  for (const double h : {1.0, 0.1, 0.01}) {
    const auto s = make_uniform_scale(h, 4, 0.55);
    GridFunction x(s, -1, 4, 1, 1);
    for (int i = -1; i <= 4; ++i) x.at(i)(0, 0) = poly(s->t(i));
    const auto dx = delta(x);
    const auto nx = nabla(x);
    double err = 0.0;
    for (int i = 0; i <= 3; ++i) {
      err = std::max(err, std::abs(dx.at(i)(0, 0).real() - dpoly(s->t(i))));
      err = std::max(err, std::abs(nx.at(i)(0, 0).real() - dpoly(s->t(i))));
    }
    CHECK(err < prev_err);
    CHECK(err <= 15.0 * h);  // first order in h; |p''|/2 stays below 14 on the widest grid
    prev_err = err;
  }
}

TEST_CASE("grid function plumbing") {
  const auto s = make_uniform_scale(1.0, 3);
  GridFunction x(s, -1, 3, 2, 1);
  x.at(0)(0, 0) = Complex(1, 2);
  CHECK_THROWS_AS(x.at(4), WindowMismatch);
  CHECK_THROWS_AS(GridFunction(s, -2, 3, 1, 1), WindowMismatch);

  const CVector v = stack_window(x, -1, 3);
  CHECK(v.size() == 10);
  const GridFunction back = unstack_window(s, -1, 3, 2, v);
  CHECK(sup_difference(back, x) == 0.0);

  const auto shifted = x.shifted_rho();
  CHECK(shifted.lo() == 0);
  CHECK(shifted.hi() == 3);
  CHECK((shifted.at(1) - x.at(0)).norm() == 0.0);
}
