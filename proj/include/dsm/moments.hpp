#pragma once

#include <Eigen/Core>
#include <map>
#include <utility>
#include <vector>

#include "dsm/multiindex.hpp"
#include "dsm/simplex_core.hpp"

namespace dsm {

// Memo of simplex-spline moments m_alpha over knot prefixes: key is
// (prefix top index k, alpha).  Bound to one knot set and one knot
// ordering on first use.  Single writer at a time.
class MomentTable {
 public:
  MomentTable() = default;

  bool bound() const { return bound_; }
  const std::vector<Eigen::Index>& orientation() const { return perm_; }
  const Eigen::MatrixXd& ordered_knots() const { return ordered_; }

  bool contains(int k, const MultiIndex& alpha) const;
  double at(int k, const MultiIndex& alpha) const;
  std::size_t size() const { return entries_.size(); }

 private:
  friend double simplex_moment(const KnotSet&, const MultiIndex&, MomentTable&);
  friend double recurrence_entry(const MomentTable&, int, const MultiIndex&);

  void bind(const KnotSet& knots);
  void put(int k, const MultiIndex& alpha, double value);

  using Key = std::pair<int, std::vector<int>>;
  std::map<Key, double> entries_;
  std::vector<Eigen::Index> perm_;
  Eigen::MatrixXd ordered_;
  bool bound_ = false;
};

// Coefficients p_l, |l| = degree, of a polynomial in the Bernstein basis
// on the (arity-1)-simplex.
struct BezierCoefficients {
  int degree = 0;
  int arity = 0;  // number of barycentric coordinates
  std::map<MultiIndex, double, MultiIndexLess> p;
};

// Bernstein basis value (m choose l) t^l at barycentric t, |l| = m.
double bernstein(const MultiIndex& l, int m, const Eigen::VectorXd& t);

// Convex-combination reduction of a Bezier polynomial at barycentric t;
// deterministic reduction order.
double decasteljau(const BezierCoefficients& coeffs, const Eigen::VectorXd& t);

// Simplex-spline moment over knots in the nonnegative orthant, organized
// as nested Bernstein sums with the innermost sum evaluated by
// decasteljau.  Throws domain_error when a coordinate is negative or a
// coordinate row sums to zero; callers fall back to oracle_moment.
double base_moment(const KnotSet& knots, const MultiIndex& beta);

// m_{d_l}(prefix k) = average of coordinate l over the first k+1 knots.
// l is a 0-based coordinate, s <= k <= n.
double first_moment_prefix(const KnotSet& knots, int k, int l);

// Simplex-spline moment m_beta(X) via the prefix recursion over the
// table; the table is filled as needed and may be reused across calls
// with the same knot set.
double simplex_moment(const KnotSet& knots, const MultiIndex& beta, MomentTable& table);

// Recompute a stored table entry from its stored dependencies; used to
// check reproducibility.  Entry must have k > s.
double recurrence_entry(const MomentTable& table, int k, const MultiIndex& alpha);

struct ElevationResiduals {
  double constant;       // m_beta(b) - sum_i w_i m_beta(b + e_i)
  Eigen::VectorXd linear;  // per coordinate l: m_{beta+d_l}(b) - sum_i w_i x^i_l m_beta(b + e_i)
};

// Residuals of the parameter-elevation identities, all moments via the
// expansion oracle.
ElevationResiduals degree_elevate_check(const DirichletParams& params,
                                        const KnotSet& knots, const MultiIndex& beta);

enum class MomentStrategy { Expansion, CoalescentKnots, ParameterRecurrence };

// Dirichlet-spline moment m_beta(b; X) by the selected strategy:
//   Expansion           - multinomial expansion oracle, any positive b;
//   CoalescentKnots     - integer b realized as repeated knots, then the
//                         simplex-spline path (sum b_i <= 24);
//   ParameterRecurrence - reduce b toward all-ones one unit at a time,
//                         dropping a knot whenever its parameter hits zero;
//                         requires positive integer b and vol_s > 0.
// table_entries, when given, receives the size of the memo the strategy
// built (0 for the expansion oracle).
double dirichlet_moment(const DirichletParams& params, const KnotSet& knots,
                        const MultiIndex& beta, MomentStrategy strategy,
                        std::size_t* table_entries = nullptr);

// For the square knot matrix with unit off-diagonal structure (s = n),
// raises parameter m by one:
//   m_beta(b + e_m; X) = [m_beta(b; X) - m_{beta+d_m}(b; X)] / (w_m x_m),
// where x_m = 1 - X(m, m).  m is a 0-based diagonal index.
double parameter_elevation(const DirichletParams& params, const KnotSet& knots,
                           const MultiIndex& beta, int m);

// Moments m_0, ..., m_max_order of the univariate Dirichlet spline with
// knots z: coefficients of the power series of prod (1 - z_i u)^{-b_i}
// rescaled by j!/(c, j).  Exact reorganization of the expansion oracle;
// backs the graded series evaluators.
Eigen::VectorXd univariate_moments(const DirichletParams& params,
                                   const Eigen::VectorXd& z, int max_order);

}  // namespace dsm
