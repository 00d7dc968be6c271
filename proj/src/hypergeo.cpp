#include "dsm/hypergeo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "dsm/errors.hpp"
#include "dsm/quadrature.hpp"

namespace dsm {

namespace {

bool nonpositive_integer(double x) {
  return x <= 0.0 && std::abs(x - std::round(x)) <= 1e-12;
}

void check_control(const SeriesControl& ctrl) {
  if (ctrl.max_order < 0 || ctrl.abs_tol <= 0.0 || ctrl.rel_tol <= 0.0 ||
      ctrl.divergence_factor <= 1.0)
    throw std::invalid_argument(
        "SeriesControl: needs max_order >= 0, positive tolerances and a "
        "divergence factor above 1");
}

double sum_graded_series(const std::function<double(int)>& block,
                         const SeriesControl& ctrl, const char* label,
                         SeriesStats* stats) {
  check_control(ctrl);
  double sum = 0.0;
  double min_mag = std::numeric_limits<double>::infinity();
  double mag = 0.0;
  int below = 0;
  for (int l = 0; l <= ctrl.max_order; ++l) {
    const double t = block(l);
    if (!std::isfinite(t)) {
      std::ostringstream msg;
      msg << label << ": order-" << l << " block left the double range";
      throw accuracy_error(msg.str(), sum, mag);
    }
    sum += t;
    mag = std::abs(t);
    if (stats) {
      stats->order_used = l;
      stats->last_block = t;
    }
    if (l == 0) continue;
    const double thresh = std::max(ctrl.abs_tol, ctrl.rel_tol * std::abs(sum));
    if (mag < thresh) {
      if (++below >= 2) return sum;
    } else {
      below = 0;
    }
    min_mag = std::min(min_mag, mag);
    if (l >= 6 && mag > ctrl.divergence_factor * min_mag && mag > thresh) {
      std::ostringstream msg;
      msg << label << ": series diverging at order " << l;
      throw accuracy_error(msg.str(), sum, mag);
    }
  }
  std::ostringstream msg;
  msg << label << ": no convergence within " << ctrl.max_order << " orders";
  throw accuracy_error(msg.str(), sum, mag);
}

AccuracyTarget quad_target(const SeriesControl& ctrl) {
  AccuracyTarget t;
  t.abs_tol = std::max(ctrl.abs_tol, 1e-12);
  t.rel_tol = std::max(ctrl.rel_tol, 1e-10);
  return t;
}

}  // namespace

double r_function(double a, const DirichletParams& params, const Eigen::VectorXd& z,
                  RMethod method, const SeriesControl& ctrl, SeriesStats* stats) {
  if (z.size() != params.count())
    throw std::invalid_argument("r_function: knot/parameter count mismatch");

  if (method == RMethod::Quadrature) {
    if (nonpositive_integer(a)) {
      // polynomial power: exact moment of order -a
      const int k = static_cast<int>(std::llround(-a));
      const Eigen::VectorXd m = univariate_moments(params, z, k);
      if (stats) stats->order_used = k;
      return m[k];
    }
    if (z.minCoeff() <= 0.0 && z.maxCoeff() >= 0.0)
      throw domain_error("r_function: 0 lies in [min Z, max Z] with a non-integer order");
    Eigen::MatrixXd row(1, z.size());
    row.row(0) = z.transpose();
    Eigen::VectorXd order(1);
    order[0] = a;
    const ValueWithError r = negative_moment(params, KnotSet(std::move(row)), order,
                                             NegativeMomentMethod::Quadrature,
                                             quad_target(ctrl));
    return r.value;
  }

  const Eigen::VectorXd u = Eigen::VectorXd::Ones(z.size()) - z;
  if (u.cwiseAbs().maxCoeff() >= 1.0)
    throw domain_error("r_function: series path requires |1 - z_i| < 1 for all i");
  const Eigen::VectorXd m = univariate_moments(params, u, ctrl.max_order);
  double coeff = 1.0;  // (a, l) / l!
  auto blk = [&](int l) {
    if (l > 0) coeff *= (a + static_cast<double>(l) - 1.0) / static_cast<double>(l);
    return coeff * m[l];
  };
  return sum_graded_series(blk, ctrl, "r_function", stats);
}

std::vector<double> r_series_partial_sums(double a, const DirichletParams& params,
                                          const Eigen::VectorXd& z, int max_order) {
  if (z.size() != params.count())
    throw std::invalid_argument("r_series_partial_sums: knot/parameter count mismatch");
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(z.size()) - z;
  if (u.cwiseAbs().maxCoeff() >= 1.0)
    throw domain_error("r_series_partial_sums: requires |1 - z_i| < 1 for all i");
  const Eigen::VectorXd m = univariate_moments(params, u, max_order);
  std::vector<double> partials(max_order + 1);
  double coeff = 1.0, sum = 0.0;
  for (int l = 0; l <= max_order; ++l) {
    if (l > 0) coeff *= (a + static_cast<double>(l) - 1.0) / static_cast<double>(l);
    sum += coeff * m[l];
    partials[l] = sum;
  }
  return partials;
}

double watson_product(const Eigen::VectorXd& lambda, const KnotSet& knots,
                      const DirichletParams& params) {
  if (lambda.size() != knots.dimension())
    throw std::invalid_argument("watson_product: lambda must have length s");
  if (params.count() != knots.count())
    throw std::invalid_argument("watson_product: parameter/knot count mismatch");
  double prod = 1.0;
  for (Eigen::Index j = 0; j < knots.count(); ++j) {
    const double dot = lambda.dot(knots.point(j));
    if (dot >= 1.0)
      throw domain_error("watson_product: requires lambda . x^j < 1 for all j");
    prod *= std::pow(1.0 - dot, -params.b()[j]);
  }
  return prod;
}

double s_function(const DirichletParams& params, const Eigen::VectorXd& z,
                  SMethod method, const SeriesControl& ctrl, SeriesStats* stats) {
  if (z.size() != params.count())
    throw std::invalid_argument("s_function: knot/parameter count mismatch");

  if (method == SMethod::DividedDifference) {
    if (!params.all_integer())
      throw strategy_error(
          "s_function: divided-difference path requires positive integer parameters");
    std::vector<std::pair<double, int>> knots;
    int total = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const int mult = static_cast<int>(std::llround(params.b()[i]));
      knots.emplace_back(z[i], mult);
      total += mult;
    }
    const double dd = divided_difference_exp(knots);
    return std::tgamma(static_cast<double>(total)) * dd;  // (total-1)! * dd
  }

  const Eigen::VectorXd m = univariate_moments(params, z, ctrl.max_order);
  double inv_fact = 1.0;
  auto blk = [&](int l) {
    if (l > 0) inv_fact /= static_cast<double>(l);
    return inv_fact * m[l];
  };
  return sum_graded_series(blk, ctrl, "s_function", stats);
}

double divided_difference_exp(const std::vector<std::pair<double, int>>& knots) {
  if (knots.empty())
    throw std::invalid_argument("divided_difference_exp: empty knot list");
  std::vector<double> zs;
  for (const auto& [z, mult] : knots) {
    if (mult < 1)
      throw std::invalid_argument("divided_difference_exp: multiplicity must be >= 1");
    for (int i = 0; i < mult; ++i) zs.push_back(z);
  }
  const int K = static_cast<int>(zs.size());
  const int k = K - 1;

  // Centered Taylor form: with w_i = z_i - mu,
  //   [z_0, ..., z_k] exp = e^mu sum_j h_j(w) / (j + k)!
  // where h_j is the complete homogeneous symmetric sum.  No quotients, so
  // clustered and repeated knots cost no precision.
  const double mu = std::accumulate(zs.begin(), zs.end(), 0.0) / K;
  double radius = 0.0;
  for (double z : zs) radius = std::max(radius, std::abs(z - mu));

  const int J = 32 + static_cast<int>(8.0 * radius) + k / 4;
  std::vector<double> h(J + 1, 0.0);
  h[0] = 1.0;
  for (double z : zs) {
    const double w = z - mu;
    for (int j = 1; j <= J; ++j) h[j] += w * h[j - 1];
  }

  double invfact = 1.0;  // 1 / (j + k)!
  for (int i = 2; i <= k; ++i) invfact /= static_cast<double>(i);
  double sum = h[0] * invfact;
  for (int j = 1; j <= J; ++j) {
    invfact /= static_cast<double>(k + j);
    sum += h[j] * invfact;
  }
  return std::exp(mu) * sum;
}

double appell_f4(double alpha, double beta, double gamma, double delta,
                 double x1, double x2, const SeriesControl& ctrl,
                 SeriesStats* stats) {
  if (nonpositive_integer(gamma) || nonpositive_integer(delta))
    throw parameter_error("appell_f4: gamma and delta must not be nonpositive integers");
  if (std::sqrt(std::abs(x1)) + std::sqrt(std::abs(x2)) >= 1.0)
    throw domain_error(
        "appell_f4: outside the series region |x1|^(1/2) + |x2|^(1/2) < 1; "
        "use the moment form");

  // the series is symmetric under (x1, gamma) <-> (x2, delta); keep the
  // larger argument first so the running corner term never underflows
  // ahead of significant terms
  if (std::abs(x2) > std::abs(x1)) {
    std::swap(x1, x2);
    std::swap(gamma, delta);
  }

  // terms held as running ratios so no Gamma-scale factor is ever formed
  if (x2 == 0.0) {
    double term = 1.0;
    auto blk = [&](int l) {
      if (l > 0) {
        const double lm1 = static_cast<double>(l - 1);
        term *= (alpha + lm1) * (beta + lm1) * x1 / ((gamma + lm1) * l);
      }
      return term;
    };
    return sum_graded_series(blk, ctrl, "appell_f4", stats);
  }

  double corner = 1.0;  // term at (i, j) = (l, 0)
  auto blk = [&](int l) {
    if (l > 0) {
      const double lm1 = static_cast<double>(l - 1);
      corner *= (alpha + lm1) * (beta + lm1) * x1 / ((gamma + lm1) * l);
    }
    double term = corner;
    double block = corner;
    for (int j = 1; j <= l; ++j) {
      const int i = l - j;  // step (i+1, j-1) -> (i, j)
      term *= (gamma + i) * (i + 1.0) * x2 / ((delta + j - 1.0) * j * x1);
      block += term;
    }
    return block;
  };
  return sum_graded_series(blk, ctrl, "appell_f4", stats);
}

namespace {

Eigen::MatrixXd f4_knot_matrix(double x1, double x2) {
  Eigen::MatrixXd X(2, 3);
  X << (1.0 - x1) * (1.0 - x2), 1.0 - x1 - x2, 1.0 - x1,
       1.0 - x2,                1.0 - x2,      1.0;
  return X;
}

}  // namespace

double f4_via_moments(double alpha, double beta, double gamma, double delta,
                      double x1, double x2, F4Route route,
                      const QuadratureControl& ctrl) {
  if (!(x1 < 1.0 && x2 < 1.0 && x1 + x2 < 1.0))
    throw domain_error("f4_via_moments: (x1, x2) outside Lambda");
  if (x1 == 0.0 && x2 == 0.0) return 1.0;  // both series arguments vanish
  const KnotSet X(f4_knot_matrix(x1, x2));

  if (route == F4Route::Auto)
    route = std::abs(gamma - alpha) <= 1e-12 ? F4Route::NegativeMoment
                                             : F4Route::IntegralR;

  if (route == F4Route::NegativeMoment) {
    if (std::abs(gamma - alpha) > 1e-12)
      throw strategy_error("f4_via_moments: the moment route requires gamma == alpha");
    Eigen::VectorXd d(3);
    d << delta - 1.0, beta - delta + 1.0, delta - beta;
    if (!(d.array() > 0.0).all())
      throw parameter_error(
          "f4_via_moments: the moment route needs positive weights "
          "(delta - 1, beta - delta + 1, delta - beta)");
    Eigen::VectorXd a(2);
    a << beta, alpha - beta;
    AccuracyTarget target;
    target.abs_tol = ctrl.abs_tol;
    target.rel_tol = ctrl.rel_tol;
    return negative_moment(DirichletParams(d), X, a,
                           NegativeMomentMethod::Quadrature, target)
        .value;
  }

  Eigen::VectorXd b2(2);
  b2 << beta, gamma - beta;
  if (!(b2.array() > 0.0).all())
    throw parameter_error("f4_via_moments: requires 0 < beta < gamma");
  Eigen::VectorXd d(3);
  d << gamma + delta - alpha - 1.0, alpha + beta - gamma - delta + 1.0, delta - beta;
  if (!(d.array() > 0.0).all())
    throw parameter_error(
        "f4_via_moments: the integral route needs positive weights "
        "(gamma + delta - alpha - 1, alpha + beta - gamma - delta + 1, delta - beta)");

  const DirichletParams dpar(d);
  SeriesControl inner;
  inner.abs_tol = 1e-13;
  inner.rel_tol = 1e-11;
  // the integrand is the same R value either way; the series is far
  // cheaper and is used whenever the knots sit safely inside its disc
  auto f = [&](const Eigen::VectorXd& t_full) {
    const Eigen::VectorXd z = X.matrix().transpose() * t_full;
    if ((Eigen::VectorXd::Ones(z.size()) - z).cwiseAbs().maxCoeff() < 0.8)
      return r_function(alpha, dpar, z, RMethod::Series, inner);
    return r_function(alpha, dpar, z, RMethod::Quadrature, inner);
  };
  QuadratureResult r = integrate_dirichlet_simplex(b2, f, ctrl);
  return r.value;
}

LauricellaSpec LauricellaSpec::polynomial(MultiIndex j, Eigen::VectorXd beta,
                                          double gamma, Eigen::VectorXd x) {
  LauricellaSpec s;
  s.j = std::move(j);
  s.beta = std::move(beta);
  s.gamma = gamma;
  s.x = std::move(x);
  return s;
}

LauricellaSpec LauricellaSpec::series(Eigen::VectorXd alpha, Eigen::VectorXd beta,
                                      double gamma, Eigen::VectorXd x) {
  LauricellaSpec s;
  s.alpha = std::move(alpha);
  s.beta = std::move(beta);
  s.gamma = gamma;
  s.x = std::move(x);
  return s;
}

namespace {

void validate_fb_spec(const LauricellaSpec& spec) {
  if (spec.j.has_value() == spec.alpha.has_value())
    throw std::invalid_argument("LauricellaSpec: exactly one of j and alpha must be set");
  const int n = spec.n();
  if (n < 1) throw std::invalid_argument("LauricellaSpec: empty argument vector");
  if (spec.beta.size() != n)
    throw std::invalid_argument("LauricellaSpec: beta size mismatch");
  if (spec.j && (spec.j->size() != n || !is_multi_index(*spec.j)))
    throw std::invalid_argument("LauricellaSpec: j must be a multi-index of length n");
  if (spec.alpha && spec.alpha->size() != n)
    throw std::invalid_argument("LauricellaSpec: alpha size mismatch");
  if (nonpositive_integer(spec.gamma))
    throw parameter_error("LauricellaSpec: gamma must not be a nonpositive integer");
}

Eigen::VectorXd effective_alpha(const LauricellaSpec& spec) {
  if (spec.alpha) return *spec.alpha;
  return -spec.j->cast<double>();
}

bool alpha_terminates(const Eigen::VectorXd& alpha) {
  for (Eigen::Index i = 0; i < alpha.size(); ++i)
    if (!nonpositive_integer(alpha[i])) return false;
  return true;
}

}  // namespace

double lauricella_fb(const LauricellaSpec& spec, const SeriesControl& ctrl,
                     SeriesStats* stats) {
  validate_fb_spec(spec);
  const int n = spec.n();
  const Eigen::VectorXd alpha = effective_alpha(spec);
  const bool terminating = alpha_terminates(alpha);
  if (terminating) {
    if ((spec.x.array() >= 1.0).any())
      throw domain_error("lauricella_fb: terminating case requires x_i < 1");
  } else {
    if (spec.x.cwiseAbs().maxCoeff() >= 1.0)
      throw domain_error("lauricella_fb: series requires |x_i| < 1");
  }

  // per-coordinate running factors (alpha_i, m)(beta_i, m) x_i^m / m!
  // keep every intermediate at the scale of an actual term
  std::vector<std::vector<double>> f(n, {1.0});
  double gamma_sym = 1.0;  // (gamma, l)
  auto blk = [&](int l) {
    if (l > 0) {
      const double lm1 = static_cast<double>(l - 1);
      gamma_sym *= spec.gamma + lm1;
      for (int i = 0; i < n; ++i)
        f[i].push_back(f[i].back() * (alpha[i] + lm1) * (spec.beta[i] + lm1) *
                       spec.x[i] / static_cast<double>(l));
    }
    if (gamma_sym == 0.0)
      throw parameter_error("lauricella_fb: vanishing (gamma, |k|) at order " +
                            std::to_string(l));
    if (!std::isfinite(gamma_sym))
      return std::numeric_limits<double>::quiet_NaN();  // guard reports the partial
    double block = 0.0;
    for (const auto& k : indices_of_order(l, n)) {
      double num = 1.0;
      for (int i = 0; i < n; ++i) num *= f[i][k[i]];
      if (num == 0.0) continue;
      block += num / gamma_sym;
    }
    return block;
  };
  return sum_graded_series(blk, ctrl, "lauricella_fb", stats);
}

KnotSet build_lauricella_knots(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw std::invalid_argument("build_lauricella_knots: empty x");
  if ((x.array() >= 1.0).any())
    throw domain_error("build_lauricella_knots: requires x_i < 1");
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(n, n + 1);
  for (int i = 0; i < n; ++i) X(i, i) = 1.0 - x[i];
  return KnotSet(std::move(X));
}

namespace {

double lauricella_by_recurrence(const LauricellaSpec& spec, const SeriesControl& ctrl) {
  const int n = spec.n();
  const MultiIndex& target = *spec.j;
  if (spec.gamma <= 0.0)
    throw parameter_error("lauricella recurrence requires gamma > 0");
  if ((spec.beta.array() <= 0.0).any())
    throw parameter_error("lauricella recurrence requires beta_m > 0");

  std::map<MultiIndex, double, MultiIndexLess> grid;
  auto value_at = [&](const MultiIndex& k) -> double {
    if (!is_multi_index(k)) return 0.0;  // convention for negative components
    return grid.at(k);
  };

  for (const auto& idx : indices_dominated_by(target)) {
    if (order(idx) == 0) {
      grid[idx] = 1.0;
      continue;
    }
    int m = -1;
    for (int cand = n - 1; cand >= 0; --cand)
      if (idx[cand] >= 1 && spec.x[cand] != 0.0) { m = cand; break; }
    if (m < 0) {
      // every pivot variable vanishes; the grid step is unavailable
      LauricellaSpec sub = spec;
      sub.j = idx;
      grid[idx] = lauricella_fb(sub, ctrl);
      continue;
    }
    MultiIndex k = idx;
    --k[m];
    const double w_m = spec.beta[m] / spec.gamma;
    const double head = (spec.gamma * (1.0 - w_m * spec.x[m]) + order(k)) * value_at(k);
    double tail = 0.0;
    for (int l = 0; l < n; ++l) {
      if (k[l] == 0) continue;
      MultiIndex down = k;
      --down[l];
      MultiIndex down_up = down;
      ++down_up[m];
      tail += static_cast<double>(k[l]) * epsilon_lm(l, m, spec.x) *
              (value_at(down) - value_at(down_up));
    }
    grid[idx] = (head - tail) / (spec.gamma + order(k));
  }
  return grid.at(target);
}

}  // namespace

double lauricella_poly(const LauricellaSpec& spec, LMethod method,
                       const SeriesControl& ctrl) {
  validate_fb_spec(spec);
  if (!spec.j)
    throw std::invalid_argument("lauricella_poly: spec must carry the multi-index j");

  switch (method) {
    case LMethod::Series:
      return lauricella_fb(spec, ctrl);
    case LMethod::Moments: {
      const int n = spec.n();
      Eigen::VectorXd d(n + 1);
      d.head(n) = spec.beta;
      d[n] = spec.gamma - spec.beta.sum();
      if (!(d.array() > 0.0).all())
        throw strategy_error(
            "lauricella_poly: moments path needs gamma > |beta| and beta_i > 0");
      const KnotSet X = build_lauricella_knots(spec.x);
      return dirichlet_moment(DirichletParams(d), X, *spec.j,
                              MomentStrategy::Expansion);
    }
    case LMethod::Recurrence:
      if ((spec.x.array() >= 1.0).any())
        throw domain_error("lauricella_poly: requires x_i < 1");
      return lauricella_by_recurrence(spec, ctrl);
  }
  throw std::invalid_argument("lauricella_poly: unknown method");
}

double lauricella_genfun_residual(const LauricellaSpec& spec,
                                  const Eigen::VectorXd& lambda,
                                  GeneratingFunction which, double a,
                                  const SeriesControl& ctrl) {
  validate_fb_spec(spec);
  const int n = spec.n();
  if (lambda.size() != n)
    throw std::invalid_argument("lauricella_genfun_residual: lambda size mismatch");
  Eigen::VectorXd d(n + 1);
  d.head(n) = spec.beta;
  d[n] = spec.gamma - spec.beta.sum();
  if (!(d.array() > 0.0).all())
    throw parameter_error(
        "lauricella_genfun_residual: needs gamma > |beta| and beta_i > 0");
  const DirichletParams dpar(d);
  const double lam_sum = lambda.sum();

  SeriesControl lhs_ctrl;  // the truncation study varies only the polynomial side
  double lhs = 0.0;
  if (which == GeneratingFunction::Exponential) {
    Eigen::VectorXd z(n + 1);
    z.head(n) = -lambda.cwiseProduct(spec.x);
    z[n] = 0.0;
    lhs = std::exp(lam_sum) * s_function(dpar, z, SMethod::Series, lhs_ctrl);
  } else {
    double worst = std::abs(lam_sum);
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(lam_sum - lambda[i] * spec.x[i]));
    if (worst >= 1.0)
      throw domain_error(
          "lauricella_genfun_residual: needs Max{|lambda.e - lambda_i x_i|, |lambda.e|} < 1");
    Eigen::VectorXd y(n + 1);
    for (int i = 0; i < n; ++i) y[i] = 1.0 - lam_sum + lambda[i] * spec.x[i];
    y[n] = 1.0 - lam_sum;
    lhs = r_function(a, dpar, y, RMethod::Quadrature, lhs_ctrl);
  }

  // ctrl.max_order is the truncation under study; the polynomial values
  // themselves are evaluated to full precision
  SeriesControl poly_ctrl;
  double rhs = 0.0;
  for (int l = 0; l <= ctrl.max_order; ++l) {
    for (const auto& jj : indices_of_order(l, n)) {
      LauricellaSpec sub = spec;
      sub.j = jj;
      double coeff = monomial(lambda, jj) / factorial(jj);
      if (which == GeneratingFunction::RFunction) coeff *= appell_symbol(a, l);
      if (coeff == 0.0) continue;
      rhs += coeff * lauricella_poly(sub, LMethod::Series, poly_ctrl);
    }
  }
  return std::abs(lhs - rhs);
}

double epsilon_lm(int l, int m, const Eigen::VectorXd& x) {
  if (l < 0 || m < 0 || l >= x.size() || m >= x.size())
    throw std::invalid_argument("epsilon_lm: index out of range");
  return l == m ? 1.0 - x[m] : 1.0;
}

}  // namespace dsm
