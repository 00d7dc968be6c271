#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "dsm/errors.hpp"
#include "dsm/quadrature.hpp"
#include "dsm/rng.hpp"
#include "dsm/simplex_core.hpp"

using dsm::DirichletParams;
using dsm::KnotSet;
using dsm::MultiIndex;

namespace {

MultiIndex mi(std::initializer_list<int> v) {
  MultiIndex m(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (int x : v) m[i++] = x;
  return m;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd m(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m[i++] = x;
  return m;
}

KnotSet knots1d(std::initializer_list<double> v) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m(0, i++) = x;
  return KnotSet(m);
}

// crude recursive-subdivision integral over the standard triangle,
// used only to confirm hand-derived constants
double triangle_integral(const std::function<double(double, double)>& f, int depth) {
  struct Tri {
    double ax, ay, bx, by, cx, cy;
  };
  std::function<double(const Tri&, int)> go = [&](const Tri& t, int d) -> double {
    if (d == 0) {
      const double area = 0.5 * std::abs((t.bx - t.ax) * (t.cy - t.ay) -
                                         (t.cx - t.ax) * (t.by - t.ay));
      return area * f((t.ax + t.bx + t.cx) / 3.0, (t.ay + t.by + t.cy) / 3.0);
    }
    const double abx = 0.5 * (t.ax + t.bx), aby = 0.5 * (t.ay + t.by);
    const double bcx = 0.5 * (t.bx + t.cx), bcy = 0.5 * (t.by + t.cy);
    const double cax = 0.5 * (t.cx + t.ax), cay = 0.5 * (t.cy + t.ay);
    return go({t.ax, t.ay, abx, aby, cax, cay}, d - 1) +
           go({abx, aby, t.bx, t.by, bcx, bcy}, d - 1) +
           go({cax, cay, bcx, bcy, t.cx, t.cy}, d - 1) +
           go({abx, aby, bcx, bcy, cax, cay}, d - 1);
  };
  return go({0.0, 0.0, 1.0, 0.0, 0.0, 1.0}, depth);
}

}  // namespace

TEST_CASE("knot set shape and views") {
  Eigen::MatrixXd m(2, 3);
  m << 1, 0, 1,
       0, 1, 1;
  KnotSet X(m);
  CHECK(X.dimension() == 2);
  CHECK(X.count() == 3);
  CHECK(X.top_index() == 2);
  CHECK(X.point(2) == vec({1, 1}));
  CHECK(X.duplicated(0).count() == 4);
  CHECK(X.duplicated(0).point(3) == vec({1, 0}));
  CHECK(X.duplicated(0).erased(3).count() == 3);
  CHECK(X.volume_positive());

  Eigen::MatrixXd bad(2, 2);
  CHECK_THROWS_AS(KnotSet{bad}, std::invalid_argument);

  Eigen::MatrixXd flat(2, 3);
  flat << 0, 1, 2,
          0, 1, 2;  // collinear
  CHECK_FALSE(KnotSet(flat).volume_positive());
}

TEST_CASE("knot reordering puts an independent prefix first") {
  Eigen::MatrixXd m(1, 3);
  m << 0.5, 0.5, 1.0;
  const auto perm = KnotSet(m).independent_front_permutation();
  REQUIRE(perm.size() == 3);
  CHECK(perm[0] == 0);
  CHECK(perm[1] == 2);
  CHECK(perm[2] == 1);

  Eigen::MatrixXd all_same(1, 3);
  all_same << 2.0, 2.0, 2.0;
  CHECK_THROWS_AS(KnotSet(all_same).independent_front_permutation(),
                  dsm::degenerate_error);
}

TEST_CASE("dirichlet parameters") {
  DirichletParams p(vec({1.0, 2.0, 3.0}));
  CHECK(p.c() == doctest::Approx(6.0));
  CHECK(p.weights().sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.raised(0).b()[0] == doctest::Approx(2.0));
  CHECK(p.lowered(2).b()[2] == doctest::Approx(2.0));
  CHECK(p.all_integer());
  CHECK_FALSE(DirichletParams(vec({1.5, 1.0})).all_integer());
  CHECK_THROWS_AS(DirichletParams(vec({1.0, -0.5})), std::invalid_argument);
  CHECK_THROWS_AS(DirichletParams(vec({1.0, 0.0})), std::invalid_argument);
}

TEST_CASE("dirichlet density") {
  // flat density equals n! for unit parameters
  DirichletParams flat(vec({1, 1, 1}));
  CHECK(dsm::dirichlet_density(flat, vec({0.2, 0.3})) == doctest::Approx(2.0));

  DirichletParams p22(vec({2, 2}));
  CHECK(dsm::dirichlet_density(p22, vec({0.0})) == 0.0);
  CHECK(dsm::dirichlet_density(p22, vec({0.5})) == doctest::Approx(1.5));

  DirichletParams phalf(vec({0.5, 1.0}));
  CHECK(dsm::dirichlet_density(phalf, vec({1.0})) ==
        std::numeric_limits<double>::infinity());

  CHECK_THROWS_AS(dsm::dirichlet_density(p22, vec({1.5})), dsm::domain_error);
  CHECK_THROWS_AS(dsm::dirichlet_density(p22, vec({-0.2})), dsm::domain_error);
}

TEST_CASE("density elevation identity") {
  dsm::rng::Engine g(31);
  for (int c = 0; c < 100; ++c) {
    const int n = dsm::rng::uniform_int(g, 1, 4);
    Eigen::VectorXd b(n + 1);
    for (int i = 0; i <= n; ++i) b[i] = dsm::rng::uniform(g, 0.4, 3.0);
    DirichletParams params(b);
    const Eigen::VectorXd tf = dsm::rng::dirichlet(g, Eigen::VectorXd::Ones(n + 1));
    const Eigen::VectorXd t = tf.tail(n);
    const double phi = dsm::dirichlet_density(params, t);
    for (int i = 0; i <= n; ++i) {
      const double lhs = tf[i] * phi;
      const double rhs =
          params.weights()[i] * dsm::dirichlet_density(params.raised(i), t);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("monomial integrals") {
  CHECK(dsm::dirichlet_monomial_integral(DirichletParams(vec({2.3, 0.7})), mi({0, 0})) ==
        doctest::Approx(1.0));
  CHECK(dsm::dirichlet_monomial_integral(DirichletParams(vec({1, 1})), mi({0, 1})) ==
        doctest::Approx(0.5));
  CHECK(dsm::dirichlet_monomial_integral(DirichletParams(vec({1, 1, 1})), mi({0, 1, 1})) ==
        doctest::Approx(1.0 / 12.0));

  // elevation property in integral form
  dsm::rng::Engine g(32);
  for (int c = 0; c < 100; ++c) {
    const int n = dsm::rng::uniform_int(g, 1, 4);
    Eigen::VectorXd b(n + 1);
    for (int i = 0; i <= n; ++i) b[i] = dsm::rng::uniform(g, 0.4, 3.0);
    DirichletParams params(b);
    MultiIndex eta = MultiIndex::Zero(n + 1);
    for (int u = 0; u < 5; ++u) ++eta[dsm::rng::uniform_int(g, 0, n)];
    double sum = 0.0;
    for (int i = 0; i <= n; ++i)
      sum += params.weights()[i] *
             dsm::dirichlet_monomial_integral(params.raised(i), eta);
    CHECK(sum == doctest::Approx(dsm::dirichlet_monomial_integral(params, eta))
                     .epsilon(1e-12));
  }
}

TEST_CASE("monomial integral confirmed by brute subdivision") {
  // integral of t1 t2 over the triangle against 2! matches the closed form
  const double brute =
      2.0 * triangle_integral([](double u, double v) { return u * v; }, 9);
  CHECK(brute == doctest::Approx(1.0 / 12.0).epsilon(1e-5));
}

TEST_CASE("triangle moment confirmed by brute subdivision") {
  // knots (1,0), (0,1), (1,1): the image point is (1-u, u+v)
  const double brute = 2.0 * triangle_integral(
      [](double u, double v) { return (1.0 - u) * (u + v); }, 9);
  CHECK(brute == doctest::Approx(5.0 / 12.0).epsilon(1e-5));

  Eigen::MatrixXd tri(2, 3);
  tri << 1, 0, 1,
         0, 1, 1;
  CHECK(dsm::oracle_moment(DirichletParams::ones(3), KnotSet(tri), mi({1, 1})) ==
        doctest::Approx(brute).epsilon(1e-5));
}

TEST_CASE("oracle moment desk values") {
  DirichletParams ones2 = DirichletParams::ones(2);
  CHECK(dsm::oracle_moment(ones2, knots1d({0, 1}), mi({2})) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(dsm::oracle_moment(ones2, knots1d({0, 1}), mi({0})) == 1.0);

  Eigen::MatrixXd tri(2, 3);
  tri << 1, 0, 1,
         0, 1, 1;
  CHECK(dsm::oracle_moment(DirichletParams::ones(3), KnotSet(tri), mi({1, 1})) ==
        doctest::Approx(5.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("oracle moment first order equals weighted knot average") {
  dsm::rng::Engine g(33);
  for (int c = 0; c < 50; ++c) {
    const int s = dsm::rng::uniform_int(g, 1, 3);
    const int n = dsm::rng::uniform_int(g, s, 5);
    Eigen::MatrixXd m(s, n + 1);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j <= n; ++j) m(i, j) = dsm::rng::uniform(g, -1.0, 1.0);
    KnotSet X(m);
    Eigen::VectorXd b(n + 1);
    for (int i = 0; i <= n; ++i) b[i] = dsm::rng::uniform(g, 0.4, 3.0);
    DirichletParams params(b);
    const int l = dsm::rng::uniform_int(g, 0, s - 1);
    const double expected = params.weights().dot(m.row(l).transpose());
    CHECK(dsm::oracle_moment(params, X, dsm::unit_index(s, l)) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("oracle moment caps") {
  DirichletParams ones2 = DirichletParams::ones(2);
  CHECK_THROWS_AS(dsm::oracle_moment(ones2, knots1d({0, 1}), mi({9})),
                  dsm::resource_error);
}

TEST_CASE("origin-in-hull test") {
  CHECK(dsm::origin_in_hull(knots1d({-1, 1})));
  CHECK(dsm::origin_in_hull(knots1d({0, 1})));  // boundary counts as inside
  CHECK_FALSE(dsm::origin_in_hull(knots1d({0.5, 2})));
  CHECK_FALSE(dsm::origin_in_hull(knots1d({-3, -1})));

  Eigen::MatrixXd tri(2, 3);
  tri << 1, 0, 1,
         0, 1, 1;
  CHECK_FALSE(dsm::origin_in_hull(KnotSet(tri)));
  Eigen::MatrixXd around(2, 3);
  around << -1, 1, 0,
            -1, -1, 2;
  CHECK(dsm::origin_in_hull(KnotSet(around)));
}

TEST_CASE("simplex quadrature reproduces exact monomial integrals") {
  dsm::rng::Engine g(34);
  for (int n = 1; n <= 3; ++n) {
    for (int c = 0; c < 4; ++c) {
      Eigen::VectorXd b(n + 1);
      for (int i = 0; i <= n; ++i) b[i] = dsm::rng::uniform(g, 0.6, 2.6);
      DirichletParams params(b);
      MultiIndex eta = MultiIndex::Zero(n + 1);
      for (int u = 0; u < 3; ++u) ++eta[dsm::rng::uniform_int(g, 0, n)];
      auto f = [&](const Eigen::VectorXd& t) {
        double v = 1.0;
        for (int i = 0; i <= n; ++i)
          for (int p = 0; p < eta[i]; ++p) v *= t[i];
        return v;
      };
      dsm::QuadratureControl ctrl;
      ctrl.abs_tol = n >= 3 ? 1e-9 : 1e-11;
      ctrl.rel_tol = n >= 3 ? 1e-9 : 1e-10;
      const auto r = dsm::integrate_dirichlet_simplex(b, f, ctrl);
      const double exact = dsm::dirichlet_monomial_integral(params, eta);
      CHECK(r.value == doctest::Approx(exact).epsilon(1e-8));
    }
  }
}

TEST_CASE("negative moment desk values") {
  const KnotSet X = knots1d({1, 2});
  const DirichletParams b = DirichletParams::ones(2);

  const auto ln2 = dsm::negative_moment(b, X, vec({1}),
                                        dsm::NegativeMomentMethod::Quadrature);
  CHECK(ln2.value == doctest::Approx(std::log(2.0)).epsilon(1e-10));

  const auto half = dsm::negative_moment(b, X, vec({2}),
                                         dsm::NegativeMomentMethod::Quadrature);
  CHECK(half.value == doctest::Approx(0.5).epsilon(1e-10));

  const auto unit = dsm::negative_moment(b, X, vec({0}),
                                         dsm::NegativeMomentMethod::Quadrature);
  CHECK(unit.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("negative moment domain checks") {
  const DirichletParams b = DirichletParams::ones(2);
  CHECK_THROWS_AS(dsm::negative_moment(b, knots1d({-1, 1}), vec({0.5}),
                                       dsm::NegativeMomentMethod::Quadrature),
                  dsm::domain_error);
  CHECK_THROWS_AS(dsm::negative_moment(b, knots1d({0, 1}), vec({1}),
                                       dsm::NegativeMomentMethod::Quadrature),
                  dsm::domain_error);

  Eigen::MatrixXd wide(1, 6);
  wide << 1, 2, 3, 4, 5, 6;
  Eigen::VectorXd a1(1);
  a1 << 0.5;
  CHECK_THROWS_AS(dsm::negative_moment(DirichletParams::ones(6), KnotSet(wide), a1,
                                       dsm::NegativeMomentMethod::Quadrature),
                  dsm::strategy_error);
}

TEST_CASE("negative moment monte carlo") {
  const KnotSet X = knots1d({1, 2});
  const DirichletParams b = DirichletParams::ones(2);
  dsm::AccuracyTarget t;
  t.abs_tol = 2e-4;
  t.rel_tol = 1e-4;
  t.seed = 42;
  const auto mc =
      dsm::negative_moment(b, X, vec({1}), dsm::NegativeMomentMethod::MonteCarlo, t);
  CHECK(std::abs(mc.value - std::log(2.0)) <= 3.0 * mc.error_estimate);
  CHECK(mc.error_estimate > 0.0);

  const auto again =
      dsm::negative_moment(b, X, vec({1}), dsm::NegativeMomentMethod::MonteCarlo, t);
  CHECK(mc.value == again.value);  // same seed, same estimate
  CHECK(mc.work == again.work);
}

TEST_CASE("negative moment agrees with the oracle at integer orders") {
  dsm::rng::Engine g(35);
  for (int c = 0; c < 10; ++c) {
    const int s = dsm::rng::uniform_int(g, 1, 2);
    const int n = dsm::rng::uniform_int(g, s, 3);
    Eigen::MatrixXd m(s, n + 1);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j <= n; ++j) m(i, j) = dsm::rng::uniform(g, 0.2, 1.2);
    KnotSet X(m);
    Eigen::VectorXd b(n + 1);
    for (int i = 0; i <= n; ++i) b[i] = dsm::rng::uniform(g, 0.5, 2.5);
    DirichletParams params(b);
    MultiIndex beta = MultiIndex::Zero(s);
    for (int u = 0; u < 3; ++u) ++beta[dsm::rng::uniform_int(g, 0, s - 1)];
    const double exact = dsm::oracle_moment(params, X, beta);
    dsm::AccuracyTarget target;  // a 3-d box cannot certify the default
    if (n >= 3) target.abs_tol = target.rel_tol = 1e-8;
    const auto quad = dsm::negative_moment(params, X, -beta.cast<double>(),
                                           dsm::NegativeMomentMethod::Quadrature,
                                           target);
    CHECK(quad.value == doctest::Approx(exact).epsilon(n >= 3 ? 1e-7 : 1e-9));
    CHECK(std::abs(quad.value - exact) <=
          std::max(3.0 * quad.error_estimate, 1e-12));
  }
}
