#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "dsm/multiindex.hpp"

namespace dsm {

inline constexpr double kGeometryTol = 1e-10;

// Ordered knot set X = {x^0, ..., x^n} in R^s, stored as the s x (n+1)
// matrix whose j-th column is x^j.  Requires s >= 1 and n >= s.
class KnotSet {
 public:
  explicit KnotSet(Eigen::MatrixXd points);

  Eigen::Index dimension() const { return pts_.rows(); }  // s
  Eigen::Index count() const { return pts_.cols(); }      // n + 1
  Eigen::Index top_index() const { return pts_.cols() - 1; }  // n

  const Eigen::MatrixXd& matrix() const { return pts_; }
  Eigen::VectorXd point(Eigen::Index j) const { return pts_.col(j); }

  KnotSet prefix(Eigen::Index k) const;       // first k+1 knots
  KnotSet erased(Eigen::Index j) const;       // X \ {x^j}
  KnotSet duplicated(Eigen::Index i) const;   // X with x^i appended
  KnotSet permuted(const std::vector<Eigen::Index>& perm) const;

  // True iff some s+1 knots are affinely independent.
  bool volume_positive(double tol = kGeometryTol) const;

  // Greedy choice of s+1 affinely independent knots, moved to the front;
  // remaining knots keep their relative order.  Throws degenerate_error
  // if no such subset exists.
  std::vector<Eigen::Index> independent_front_permutation(double tol = kGeometryTol) const;

 private:
  Eigen::MatrixXd pts_;
};

// Dirichlet parameter vector b > 0 with c = sum b_i and weights w = b / c.
class DirichletParams {
 public:
  explicit DirichletParams(Eigen::VectorXd b);
  static DirichletParams ones(Eigen::Index count);

  Eigen::Index count() const { return b_.size(); }  // n + 1
  const Eigen::VectorXd& b() const { return b_; }
  double c() const { return c_; }
  const Eigen::VectorXd& weights() const { return w_; }

  DirichletParams raised(Eigen::Index i) const;   // b + e_i
  DirichletParams lowered(Eigen::Index j) const;  // b - e_j (must stay positive)

  bool all_integer(double tol = 1e-9) const;

 private:
  Eigen::VectorXd b_;
  double c_;
  Eigen::VectorXd w_;
};

// Dirichlet density phi_b at t = (t_1, ..., t_n) in E_n; t_0 = 1 - sum t_j.
// Returns +infinity on a face where t_i = 0 and b_i < 1.
double dirichlet_density(const DirichletParams& params, const Eigen::VectorXd& t);

// Exact integral of t^eta against phi_b over E_n:
//   prod_i (b_i, eta_i) / (c, |eta|).
double dirichlet_monomial_integral(const DirichletParams& params, const MultiIndex& eta);

struct OracleLimits {
  int max_order = 8;       // |beta|
  int max_top_index = 8;   // n
};

// Moment m_beta(b; X) of the Dirichlet spline by full multinomial
// expansion and termwise exact monomial integrals.  Independent oracle
// for every recursive path in the library.
double oracle_moment(const DirichletParams& params, const KnotSet& knots,
                     const MultiIndex& beta, const OracleLimits& limits = {});

// Linear-programming feasibility: is the origin a convex combination of
// the knots?  Feasibility slack below tol counts as inside.
bool origin_in_hull(const KnotSet& knots, double tol = kGeometryTol);

enum class NegativeMomentMethod { Quadrature, MonteCarlo };

struct AccuracyTarget {
  double abs_tol = 1e-11;
  double rel_tol = 1e-10;
  std::uint64_t seed = 0x5eed0123456789abULL;
  std::int64_t max_samples = 10'000'000;
};

struct ValueWithError {
  double value = 0.0;
  double error_estimate = 0.0;  // standard error on the Monte-Carlo path
  std::int64_t work = 0;        // samples or integrand evaluations
};

// Moment of negative real order: integral of prod_j ((Xt)_j)^{-a_j}
// against phi_b.  Requires the origin outside the convex hull of the
// knots.  Quadrature path supports n <= 3; the Monte-Carlo path returns
// a standard-error estimate and is deterministic for a fixed seed.
ValueWithError negative_moment(const DirichletParams& params, const KnotSet& knots,
                               const Eigen::VectorXd& a, NegativeMomentMethod method,
                               const AccuracyTarget& target = {});

}  // namespace dsm
