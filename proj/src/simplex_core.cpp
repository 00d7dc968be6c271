#include "dsm/simplex_core.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <numeric>

#include "dsm/errors.hpp"
#include "dsm/quadrature.hpp"
#include "dsm/rng.hpp"

namespace dsm {

KnotSet::KnotSet(Eigen::MatrixXd points) : pts_(std::move(points)) {
  if (pts_.rows() < 1)
    throw std::invalid_argument("KnotSet: dimension must be >= 1");
  if (pts_.cols() < pts_.rows() + 1)
    throw std::invalid_argument("KnotSet: need at least s+1 knots (n >= s)");
  if (!pts_.allFinite())
    throw std::invalid_argument("KnotSet: knots must be finite");
}

KnotSet KnotSet::prefix(Eigen::Index k) const {
  if (k < dimension() || k > top_index())
    throw std::invalid_argument("KnotSet::prefix: k out of range [s, n]");
  return KnotSet(pts_.leftCols(k + 1));
}

KnotSet KnotSet::erased(Eigen::Index j) const {
  if (j < 0 || j >= count())
    throw std::invalid_argument("KnotSet::erased: index out of range");
  Eigen::MatrixXd m(pts_.rows(), pts_.cols() - 1);
  m << pts_.leftCols(j), pts_.rightCols(pts_.cols() - j - 1);
  return KnotSet(std::move(m));
}

KnotSet KnotSet::duplicated(Eigen::Index i) const {
  if (i < 0 || i >= count())
    throw std::invalid_argument("KnotSet::duplicated: index out of range");
  Eigen::MatrixXd m(pts_.rows(), pts_.cols() + 1);
  m << pts_, pts_.col(i);
  return KnotSet(std::move(m));
}

KnotSet KnotSet::permuted(const std::vector<Eigen::Index>& perm) const {
  if (static_cast<Eigen::Index>(perm.size()) != count())
    throw std::invalid_argument("KnotSet::permuted: permutation size mismatch");
  Eigen::MatrixXd m(pts_.rows(), pts_.cols());
  for (Eigen::Index j = 0; j < count(); ++j) m.col(j) = pts_.col(perm[j]);
  return KnotSet(std::move(m));
}

std::vector<Eigen::Index> KnotSet::independent_front_permutation(double tol) const {
  const Eigen::Index s = dimension();
  const Eigen::Index m = count();
  // Gram-Schmidt over difference vectors x^j - x^0, normalized pivot test
  std::vector<Eigen::Index> chosen{0};
  std::vector<Eigen::VectorXd> basis;
  const Eigen::VectorXd base = pts_.col(0);
  for (Eigen::Index j = 1; j < m && static_cast<Eigen::Index>(chosen.size()) < s + 1; ++j) {
    Eigen::VectorXd r = pts_.col(j) - base;
    const double scale = r.norm();
    if (scale <= tol) continue;
    for (const auto& q : basis) r -= q.dot(r) * q;
    if (r.norm() > tol * std::max(1.0, scale)) {
      basis.push_back(r.normalized());
      chosen.push_back(j);
    }
  }
  if (static_cast<Eigen::Index>(chosen.size()) < s + 1)
    throw degenerate_error(
        "no affinely independent subset of s+1 knots (vol_s of the hull is zero)");
  std::vector<Eigen::Index> perm = chosen;
  std::vector<char> used(m, 0);
  for (auto idx : chosen) used[idx] = 1;
  for (Eigen::Index j = 0; j < m; ++j)
    if (!used[j]) perm.push_back(j);
  return perm;
}

bool KnotSet::volume_positive(double tol) const {
  try {
    independent_front_permutation(tol);
    return true;
  } catch (const degenerate_error&) {
    return false;
  }
}

DirichletParams::DirichletParams(Eigen::VectorXd b) : b_(std::move(b)) {
  if (b_.size() < 1) throw std::invalid_argument("DirichletParams: empty vector");
  if (!(b_.array() > 0.0).all() || !b_.allFinite())
    throw std::invalid_argument("DirichletParams: parameters must be positive and finite");
  c_ = b_.sum();
  w_ = b_ / c_;
}

DirichletParams DirichletParams::ones(Eigen::Index count) {
  return DirichletParams(Eigen::VectorXd::Ones(count));
}

DirichletParams DirichletParams::raised(Eigen::Index i) const {
  Eigen::VectorXd nb = b_;
  nb[i] += 1.0;
  return DirichletParams(std::move(nb));
}

DirichletParams DirichletParams::lowered(Eigen::Index j) const {
  Eigen::VectorXd nb = b_;
  nb[j] -= 1.0;
  return DirichletParams(std::move(nb));
}

bool DirichletParams::all_integer(double tol) const {
  for (Eigen::Index i = 0; i < b_.size(); ++i) {
    const double r = std::round(b_[i]);
    if (r < 1.0 || std::abs(b_[i] - r) > tol) return false;
  }
  return true;
}

double dirichlet_density(const DirichletParams& params, const Eigen::VectorXd& t) {
  const Eigen::Index n = params.count() - 1;
  if (t.size() != n)
    throw std::invalid_argument("dirichlet_density: t must have length n");
  const double slack = 1e-12;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (t[j] < -slack) throw domain_error("dirichlet_density: t outside E_n (t_j < 0)");
    sum += t[j];
  }
  if (sum > 1.0 + slack)
    throw domain_error("dirichlet_density: t outside E_n (sum t_j > 1)");

  Eigen::VectorXd full(n + 1);
  full[0] = std::max(0.0, 1.0 - sum);
  for (Eigen::Index j = 0; j < n; ++j) full[j + 1] = std::max(0.0, t[j]);

  const Eigen::VectorXd& b = params.b();
  double logval = std::lgamma(params.c());
  for (Eigen::Index i = 0; i <= n; ++i) logval -= std::lgamma(b[i]);
  for (Eigen::Index i = 0; i <= n; ++i) {
    if (full[i] == 0.0) {
      if (b[i] > 1.0) return 0.0;
      if (b[i] < 1.0) return std::numeric_limits<double>::infinity();
      // b_i == 1: factor is 1
    } else {
      logval += (b[i] - 1.0) * std::log(full[i]);
    }
  }
  return std::exp(logval);
}

double dirichlet_monomial_integral(const DirichletParams& params, const MultiIndex& eta) {
  if (eta.size() != params.count())
    throw std::invalid_argument("dirichlet_monomial_integral: eta must have length n+1");
  if (!is_multi_index(eta))
    throw std::invalid_argument("dirichlet_monomial_integral: negative entry in eta");
  double num = 1.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    num *= appell_symbol(params.b()[i], eta[i]);
  return num / appell_symbol(params.c(), order(eta));
}

namespace {

// Cartesian walk over per-coordinate expansion indices; eta accumulates
// the column sums that feed the exact monomial integral.
double oracle_sum(const DirichletParams& params, const Eigen::MatrixXd& X,
                  const std::vector<std::vector<MultiIndex>>& lists,
                  const MultiIndex& beta) {
  const Eigen::Index s = X.rows();
  const Eigen::Index cols = X.cols();
  std::vector<std::size_t> pos(s, 0);
  double total = 0.0;
  for (;;) {
    double coeff = 1.0;
    MultiIndex eta = MultiIndex::Zero(cols);
    for (Eigen::Index j = 0; j < s; ++j) {
      const MultiIndex& k = lists[j][pos[j]];
      coeff *= static_cast<double>(multinomial(beta[j], k));
      for (Eigen::Index i = 0; i < cols; ++i) {
        for (int p = 0; p < k[i]; ++p) coeff *= X(j, i);
        eta[i] += k[i];
      }
    }
    total += coeff * dirichlet_monomial_integral(params, eta);

    Eigen::Index j = s - 1;
    while (j >= 0 && ++pos[j] == lists[j].size()) {
      pos[j] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return total;
}

}  // namespace

double oracle_moment(const DirichletParams& params, const KnotSet& knots,
                     const MultiIndex& beta, const OracleLimits& limits) {
  if (beta.size() != knots.dimension())
    throw std::invalid_argument("oracle_moment: beta must have length s");
  if (!is_multi_index(beta))
    throw std::invalid_argument("oracle_moment: beta must be a multi-index");
  if (params.count() != knots.count())
    throw std::invalid_argument("oracle_moment: parameter/knot count mismatch");
  if (order(beta) > limits.max_order || knots.top_index() > limits.max_top_index)
    throw resource_error("oracle_moment: expansion cap exceeded (|beta| or n too large)");
  if (order(beta) == 0) return 1.0;

  const Eigen::Index s = knots.dimension();
  std::vector<std::vector<MultiIndex>> lists(s);
  for (Eigen::Index j = 0; j < s; ++j)
    lists[j] = indices_of_order(beta[j], static_cast<int>(knots.count()));
  return oracle_sum(params, knots.matrix(), lists, beta);
}

bool origin_in_hull(const KnotSet& knots, double tol) {
  // phase-1 simplex on: X t = 0, sum t = 1, t >= 0
  const Eigen::Index s = knots.dimension();
  const Eigen::Index nv = knots.count();
  const Eigen::Index rows = s + 1;

  // scale knot rows so the feasibility slack is comparable across inputs
  Eigen::MatrixXd A(rows, nv + rows);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  rhs[s] = 1.0;
  for (Eigen::Index i = 0; i < s; ++i) {
    double scale = knots.matrix().row(i).cwiseAbs().maxCoeff();
    if (scale <= 0.0) scale = 1.0;
    A.row(i).head(nv) = knots.matrix().row(i) / scale;
  }
  A.row(s).head(nv).setOnes();
  A.rightCols(rows).setIdentity();

  // flip rows so artificial basis starts feasible (rhs >= 0 already holds)
  std::vector<Eigen::Index> basis(rows);
  for (Eigen::Index i = 0; i < rows; ++i) basis[i] = nv + i;
  Eigen::VectorXd x_b = rhs;

  // cost: sum of artificials
  auto is_artificial = [&](Eigen::Index col) { return col >= nv; };

  const int max_iter = 200 * static_cast<int>(nv + rows);
  // reduced costs computed from scratch each iteration (small problems)
  for (int iter = 0; iter < max_iter; ++iter) {
    // current basis inverse action via solving T_B y = ...
    Eigen::MatrixXd B(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) B.col(i) = A.col(basis[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    x_b = lu.solve(rhs);
    Eigen::VectorXd cb(rows);
    for (Eigen::Index i = 0; i < rows; ++i) cb[i] = is_artificial(basis[i]) ? 1.0 : 0.0;
    Eigen::VectorXd y = lu.transpose().solve(cb);

    // Bland's rule: first improving column
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < nv + rows; ++j) {
      bool inBasis = false;
      for (auto bidx : basis)
        if (bidx == j) { inBasis = true; break; }
      if (inBasis) continue;
      const double c_j = is_artificial(j) ? 1.0 : 0.0;
      const double red = c_j - y.dot(A.col(j));
      if (red < -1e-12) { enter = j; break; }
    }
    if (enter < 0) break;  // optimal

    Eigen::VectorXd d = lu.solve(A.col(enter));
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (d[i] > 1e-12) {
        const double ratio = x_b[i] / d[i];
        if (ratio < best - 1e-15 ||
            (ratio < best + 1e-15 && (leave < 0 || basis[i] < basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) break;  // unbounded; cannot happen on a bounded phase-1
    basis[leave] = enter;
  }

  {
    Eigen::MatrixXd B(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) B.col(i) = A.col(basis[i]);
    x_b = Eigen::PartialPivLU<Eigen::MatrixXd>(B).solve(rhs);
  }
  double objective = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i)
    if (is_artificial(basis[i])) objective += std::max(0.0, x_b[i]);
  return objective <= tol;
}

namespace {

double negative_power_product(const Eigen::MatrixXd& X, const Eigen::VectorXd& a,
                              const Eigen::VectorXd& t_full) {
  double v = 1.0;
  const Eigen::VectorXd y = X * t_full;
  for (Eigen::Index j = 0; j < a.size(); ++j) v *= std::pow(y[j], -a[j]);
  return v;
}

bool integer_valued(double x) { return std::abs(x - std::round(x)) <= 1e-12; }

}  // namespace

ValueWithError negative_moment(const DirichletParams& params, const KnotSet& knots,
                               const Eigen::VectorXd& a, NegativeMomentMethod method,
                               const AccuracyTarget& target) {
  if (a.size() != knots.dimension())
    throw std::invalid_argument("negative_moment: order vector must have length s");
  if (params.count() != knots.count())
    throw std::invalid_argument("negative_moment: parameter/knot count mismatch");
  if (origin_in_hull(knots))
    throw domain_error("negative_moment: origin lies in the convex hull of the knots");
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    if (!integer_valued(a[j]) && knots.matrix().row(j).minCoeff() <= 0.0)
      throw domain_error(
          "negative_moment: coordinate can vanish inside the hull with a non-integer order");
  }

  if (method == NegativeMomentMethod::Quadrature) {
    if (knots.top_index() > 3)
      throw strategy_error("negative_moment: quadrature path requires n <= 3");
    QuadratureControl ctrl;
    ctrl.abs_tol = target.abs_tol;
    ctrl.rel_tol = target.rel_tol;
    auto f = [&](const Eigen::VectorXd& t_full) {
      return negative_power_product(knots.matrix(), a, t_full);
    };
    QuadratureResult r = integrate_dirichlet_simplex(params.b(), f, ctrl);
    if (!std::isfinite(r.value))
      throw domain_error("negative_moment: integrand not finite on the simplex");
    return {r.value, r.error_estimate, r.evaluations};
  }

  // Monte Carlo with a running standard-error stop
  rng::Engine gen(target.seed);
  double mean = 0.0, m2 = 0.0;
  std::int64_t count = 0;
  const std::int64_t batch = 4096;
  double se = std::numeric_limits<double>::infinity();
  while (count < target.max_samples) {
    for (std::int64_t i = 0; i < batch; ++i) {
      const Eigen::VectorXd t = rng::dirichlet(gen, params.b());
      const double v = negative_power_product(knots.matrix(), a, t);
      if (!std::isfinite(v))
        throw domain_error("negative_moment: integrand not finite at a sample point");
      ++count;
      const double delta = v - mean;
      mean += delta / static_cast<double>(count);
      m2 += delta * (v - mean);
    }
    se = std::sqrt(m2 / (static_cast<double>(count) * (static_cast<double>(count) - 1.0)));
    if (se <= std::max(target.abs_tol, target.rel_tol * std::abs(mean))) break;
  }
  return {mean, se, count};
}

}  // namespace dsm
