#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "dsm/multiindex.hpp"
#include "dsm/rng.hpp"

using dsm::MultiIndex;

namespace {

MultiIndex mi(std::initializer_list<int> v) {
  MultiIndex m(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (int x : v) m[i++] = x;
  return m;
}

}  // namespace

TEST_CASE("multinomial coefficients") {
  CHECK(dsm::multinomial(2, mi({1, 1})) == 2);
  CHECK(dsm::multinomial(3, mi({3, 0})) == 1);
  CHECK(dsm::multinomial(4, mi({2, 2})) == 6);
  CHECK(dsm::multinomial(0, mi({0, 0, 0})) == 1);
  CHECK(dsm::multinomial(6, mi({1, 2, 3})) == 60);

  CHECK_THROWS_AS((void)dsm::multinomial(3, mi({1, 1})), std::invalid_argument);
  CHECK_THROWS_AS((void)dsm::multinomial(2, mi({-1, 3})), std::invalid_argument);
}

TEST_CASE("multinomial large and overflow") {
  CHECK(dsm::multinomial(20, mi({10, 10})) == 184756);
  CHECK(dsm::multinomial(64, mi({32, 32})) == 1832624140942590534ULL);
  CHECK_THROWS_AS((void)dsm::multinomial(70, mi({35, 35})), std::overflow_error);
}

TEST_CASE("appell symbol") {
  CHECK(dsm::appell_symbol(3.7, 0) == 1.0);
  CHECK(dsm::appell_symbol(1.0, 4) == doctest::Approx(24.0));
  CHECK(dsm::appell_symbol(2.5, 2) == doctest::Approx(8.75));

  dsm::rng::Engine g(11);
  for (int c = 0; c < 100; ++c) {
    const double a = dsm::rng::uniform(g, -4.0, 4.0);
    const int l = dsm::rng::uniform_int(g, 0, 12);
    CHECK(dsm::appell_symbol(a, l + 1) ==
          doctest::Approx(dsm::appell_symbol(a, l) * (a + l)).epsilon(1e-13));
  }

  Eigen::VectorXd a(2);
  a << 2.0, 3.0;
  CHECK(dsm::appell_symbol(a, mi({2, 1})) == doctest::Approx(2.0 * 3.0 * 3.0));
}

TEST_CASE("index enumeration") {
  const auto zero = dsm::indices_of_order(0, 3);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0] == mi({0, 0, 0}));

  const auto pairs = dsm::indices_of_order(2, 2);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0] == mi({0, 2}));
  CHECK(pairs[1] == mi({1, 1}));
  CHECK(pairs[2] == mi({2, 0}));

  const auto box = dsm::indices_dominated_by(mi({1, 1}));
  CHECK(box.size() == 4);
  CHECK(box.front() == mi({0, 0}));
  CHECK(dsm::order(box.back()) == 2);

  dsm::rng::Engine g(5);
  for (int c = 0; c < 50; ++c) {
    const int dim = dsm::rng::uniform_int(g, 1, 4);
    const int m = dsm::rng::uniform_int(g, 0, 6);
    const auto idx = dsm::indices_of_order(m, dim);
    std::uint64_t expected = 1;
    for (int i = 1; i < dim; ++i)
      expected = expected * static_cast<std::uint64_t>(m + i) /
                 static_cast<std::uint64_t>(i);
    CHECK(idx.size() == expected);
    std::set<std::vector<int>> seen;
    for (const auto& b : idx) {
      CHECK(dsm::order(b) == m);
      seen.insert(std::vector<int>(b.data(), b.data() + b.size()));
    }
    CHECK(seen.size() == idx.size());
  }
}

TEST_CASE("multinomial theorem") {
  dsm::rng::Engine g(7);
  for (int c = 0; c < 200; ++c) {
    const int dim = dsm::rng::uniform_int(g, 1, 4);
    const int r = dsm::rng::uniform_int(g, 0, 6);
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = dsm::rng::uniform(g, -1.0, 1.0);
    double sum = 0.0, scale = 0.0;
    for (const auto& beta : dsm::indices_of_order(r, dim)) {
      const double t =
          static_cast<double>(dsm::multinomial(r, beta)) * dsm::monomial(x, beta);
      sum += t;
      scale += std::abs(t);
    }
    CHECK(std::abs(sum - std::pow(x.sum(), r)) <= 1e-12 * std::max(scale, 1.0));
  }
}

TEST_CASE("dominance and unit indices") {
  CHECK(dsm::dominated_by(mi({1, 0}), mi({1, 1})));
  CHECK_FALSE(dsm::dominated_by(mi({2, 0}), mi({1, 1})));
  CHECK(dsm::unit_index(3, 1) == mi({0, 1, 0}));
  CHECK(dsm::order(mi({2, 3})) == 5);
  CHECK(dsm::factorial(mi({3, 2})) == doctest::Approx(12.0));
}
