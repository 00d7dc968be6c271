#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "dsm/moments.hpp"
#include "dsm/multiindex.hpp"
#include "dsm/quadrature.hpp"
#include "dsm/simplex_core.hpp"

namespace dsm {

// Truncation policy shared by every power-series evaluator: sum by graded
// order blocks, stop once two consecutive block magnitudes fall below
// max(abs_tol, rel_tol * |partial sum|), abort if a block grows past
// divergence_factor times the smallest block seen.
struct SeriesControl {
  int max_order = 150;
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  double divergence_factor = 1e8;
};

struct SeriesStats {
  int order_used = 0;
  double last_block = 0.0;
};

enum class RMethod { Quadrature, Series };
enum class SMethod { Series, DividedDifference };

// Dirichlet average of the power u^{-a} over the knots Z:
//   R_{-a}(b; Z) = integral of (Zt)^{-a} against phi_b.
// The quadrature path needs 0 outside [min Z, max Z] unless -a is a
// nonnegative integer (then the integrand is a polynomial and the moment
// sequence is summed exactly).  The series path writes z_i = 1 - u_i and
// sums the graded moment series sum_l (a,l)/l! m_l(b; u), valid for
// |u_i| < 1.
double r_function(double a, const DirichletParams& params, const Eigen::VectorXd& z,
                  RMethod method, const SeriesControl& ctrl = {},
                  SeriesStats* stats = nullptr);

// Partial sums of the graded series above, orders 0..max_order.
std::vector<double> r_series_partial_sums(double a, const DirichletParams& params,
                                          const Eigen::VectorXd& z, int max_order);

// prod_j (1 - lambda . x^j)^{-b_j}; requires lambda . x^j < 1 for all j.
double watson_product(const Eigen::VectorXd& lambda, const KnotSet& knots,
                      const DirichletParams& params);

// Confluent average S(b; Z) = integral of exp(Zt) against phi_b.  The
// divided-difference path needs positive integer parameters and returns
// k! [z_0(b_0), ..., z_n(b_n)] exp with k = sum b_i - 1.
double s_function(const DirichletParams& params, const Eigen::VectorXd& z,
                  SMethod method, const SeriesControl& ctrl = {},
                  SeriesStats* stats = nullptr);

// Divided difference of exp over knots with multiplicities, by the
// confluent recursion (equal-knot blocks use e^z / k!).
double divided_difference_exp(const std::vector<std::pair<double, int>>& knots);

// Appell F4 double power series; |x1|^(1/2) + |x2|^(1/2) < 1.
double appell_f4(double alpha, double beta, double gamma, double delta,
                 double x1, double x2, const SeriesControl& ctrl = {},
                 SeriesStats* stats = nullptr);

enum class F4Route { Auto, NegativeMoment, IntegralR };

// Analytic continuation of F4 to Lambda = {x1 < 1, x2 < 1, x1 + x2 < 1}:
// returns F4(alpha, beta; gamma, delta; x1(1-x2), x2(1-x1)).  When
// gamma == alpha this is a single negative-order moment; otherwise the
// one-dimensional integral of R_{-alpha} against a Beta weight is used.
double f4_via_moments(double alpha, double beta, double gamma, double delta,
                      double x1, double x2, F4Route route = F4Route::Auto,
                      const QuadratureControl& ctrl = {});

// Parameters of a Lauricella F_B evaluation.  Exactly one of j (the
// terminating case alpha = -j) and alpha is set.
struct LauricellaSpec {
  std::optional<MultiIndex> j;
  std::optional<Eigen::VectorXd> alpha;
  Eigen::VectorXd beta;
  double gamma = 1.0;
  Eigen::VectorXd x;

  static LauricellaSpec polynomial(MultiIndex j, Eigen::VectorXd beta, double gamma,
                                   Eigen::VectorXd x);
  static LauricellaSpec series(Eigen::VectorXd alpha, Eigen::VectorXd beta,
                               double gamma, Eigen::VectorXd x);
  int n() const { return static_cast<int>(x.size()); }
};

// F_B(alpha, beta; gamma; x) = sum_k (alpha,k)(beta,k) / ((gamma,|k|) k!) x^k.
// Terminating when alpha = -j; otherwise requires |x_i| < 1.
double lauricella_fb(const LauricellaSpec& spec, const SeriesControl& ctrl = {},
                     SeriesStats* stats = nullptr);

enum class LMethod { Series, Moments, Recurrence };

// Lauricella polynomial L_j(x) = F_B(-j, beta; gamma; x) by the selected
// route: the terminating series, the moment of the unit-off-diagonal knot
// matrix, or the grid recurrence in j (entries with a vanishing pivot
// variable fall back to the series).
double lauricella_poly(const LauricellaSpec& spec, LMethod method,
                       const SeriesControl& ctrl = {});

// The n x (n+1) knot matrix with 1 - x_i on the diagonal and 1 elsewhere;
// requires x_i < 1.
KnotSet build_lauricella_knots(const Eigen::VectorXd& x);

enum class GeneratingFunction { Exponential, RFunction };

// Residual of a Lauricella generating-function identity truncated at
// total order ctrl.max_order.  The RFunction check needs the exponent a
// and Max{|lambda.e - lambda_i x_i|, |lambda.e|} < 1.
double lauricella_genfun_residual(const LauricellaSpec& spec,
                                  const Eigen::VectorXd& lambda,
                                  GeneratingFunction which, double a,
                                  const SeriesControl& ctrl = {});

// Grid factor of the Lauricella recurrence: 1 - x_m when l == m, else 1.
double epsilon_lm(int l, int m, const Eigen::VectorXd& x);

}  // namespace dsm
