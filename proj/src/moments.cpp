#include "dsm/moments.hpp"

#include <algorithm>
#include <cmath>

#include "dsm/errors.hpp"

namespace dsm {

namespace {

std::vector<int> to_key(const MultiIndex& alpha) {
  return std::vector<int>(alpha.data(), alpha.data() + alpha.size());
}

void check_barycentric(const Eigen::VectorXd& t) {
  if ((t.array() < -1e-12).any() || std::abs(t.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("barycentric point must be nonnegative and sum to 1");
}

}  // namespace

bool MomentTable::contains(int k, const MultiIndex& alpha) const {
  return entries_.count({k, to_key(alpha)}) != 0;
}

double MomentTable::at(int k, const MultiIndex& alpha) const {
  auto it = entries_.find({k, to_key(alpha)});
  if (it == entries_.end())
    throw std::invalid_argument("MomentTable::at: entry not present");
  return it->second;
}

void MomentTable::bind(const KnotSet& knots) {
  perm_ = knots.independent_front_permutation();
  ordered_ = knots.permuted(perm_).matrix();
  bound_ = true;
}

void MomentTable::put(int k, const MultiIndex& alpha, double value) {
  entries_[{k, to_key(alpha)}] = value;
}

double bernstein(const MultiIndex& l, int m, const Eigen::VectorXd& t) {
  if (!is_multi_index(l) || order(l) != m)
    throw std::invalid_argument("bernstein: |l| must equal the degree");
  if (t.size() != l.size())
    throw std::invalid_argument("bernstein: dimension mismatch");
  check_barycentric(t);
  return static_cast<double>(multinomial(m, l)) * monomial(t, l);
}

double decasteljau(const BezierCoefficients& coeffs, const Eigen::VectorXd& t) {
  const int m = coeffs.degree;
  const int arity = coeffs.arity;
  if (m < 0 || arity < 1)
    throw std::invalid_argument("decasteljau: malformed coefficient set");
  if (t.size() != arity)
    throw std::invalid_argument("decasteljau: barycentric dimension mismatch");
  check_barycentric(t);

  const auto expected = indices_of_order(m, arity);
  if (coeffs.p.size() != expected.size())
    throw std::invalid_argument("decasteljau: wrong number of coefficients");
  for (const auto& l : expected)
    if (coeffs.p.find(l) == coeffs.p.end())
      throw std::invalid_argument("decasteljau: missing coefficient");

  std::map<MultiIndex, double, MultiIndexLess> cur(coeffs.p.begin(), coeffs.p.end());
  for (int r = m; r >= 1; --r) {
    std::map<MultiIndex, double, MultiIndexLess> next;
    for (const auto& l : indices_of_order(r - 1, arity)) {
      double v = 0.0;
      MultiIndex up = l;
      for (int i = 0; i < arity; ++i) {
        ++up[i];
        v += t[i] * cur.at(up);
        --up[i];
      }
      next[l] = v;
    }
    cur.swap(next);
  }
  return cur.begin()->second;
}

double base_moment(const KnotSet& knots, const MultiIndex& beta) {
  const Eigen::Index s = knots.dimension();
  if (beta.size() != s)
    throw std::invalid_argument("base_moment: beta must have length s");
  if (!is_multi_index(beta))
    throw std::invalid_argument("base_moment: beta must be a multi-index");
  if (order(beta) == 0) return 1.0;

  const Eigen::MatrixXd& X = knots.matrix();
  if ((X.array() < 0.0).any())
    throw domain_error("base_moment: knots outside the nonnegative orthant");
  const int nk = static_cast<int>(knots.count());
  const int n = nk - 1;

  Eigen::VectorXd g(s);
  std::vector<Eigen::VectorXd> ytilde(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    g[i] = X.row(i).sum();
    if (g[i] <= 0.0)
      throw domain_error("base_moment: coordinate row sums to zero");
    ytilde[i] = X.row(i).transpose() / g[i];
  }

  std::vector<std::vector<MultiIndex>> lists(s);
  for (Eigen::Index i = 0; i < s; ++i)
    lists[i] = indices_of_order(beta[i], nk);

  const std::vector<MultiIndex>& inner_list = lists[s - 1];
  std::vector<std::size_t> pos(std::max<Eigen::Index>(s - 1, 0), 0);
  double acc = 0.0;
  for (;;) {
    double w = 1.0;
    MultiIndex eta_outer = MultiIndex::Zero(nk);
    for (Eigen::Index i = 0; i + 1 < s; ++i) {
      const MultiIndex& k = lists[i][pos[i]];
      w *= bernstein(k, beta[i], ytilde[i]);
      eta_outer += k;
    }
    if (w != 0.0) {
      BezierCoefficients inner;
      inner.degree = beta[s - 1];
      inner.arity = nk;
      for (const auto& k : inner_list)
        inner.p[k] = factorial(MultiIndex(eta_outer + k));
      acc += w * decasteljau(inner, ytilde[s - 1]);
    }

    if (s == 1) break;
    Eigen::Index i = s - 2;
    while (i >= 0 && ++pos[i] == lists[i].size()) {
      pos[i] = 0;
      --i;
    }
    if (i < 0) break;
  }

  double ratio = 1.0;  // n! / (|beta| + n)!
  for (int i = 1; i <= order(beta); ++i) ratio /= static_cast<double>(n + i);
  return monomial(g, beta) * ratio * acc;
}

double first_moment_prefix(const KnotSet& knots, int k, int l) {
  const int s = static_cast<int>(knots.dimension());
  if (k < s || k > static_cast<int>(knots.top_index()))
    throw std::invalid_argument("first_moment_prefix: k out of range [s, n]");
  if (l < 0 || l >= s)
    throw std::invalid_argument("first_moment_prefix: coordinate out of range");
  return knots.matrix().row(l).head(k + 1).mean();
}

namespace {

double recurrence_value(const Eigen::MatrixXd& ordered, const MomentTable& table,
                        int k, const MultiIndex& alpha) {
  const int s = static_cast<int>(ordered.rows());
  double sum = static_cast<double>(k) * table.at(k - 1, alpha);
  for (int l = 0; l < s; ++l) {
    if (alpha[l] == 0) continue;
    MultiIndex down = alpha;
    --down[l];
    sum += static_cast<double>(alpha[l]) * ordered(l, k) * table.at(k, down);
  }
  return sum / static_cast<double>(k + order(alpha));
}

}  // namespace

double recurrence_entry(const MomentTable& table, int k, const MultiIndex& alpha) {
  if (!table.bound())
    throw std::invalid_argument("recurrence_entry: table not bound");
  if (k <= static_cast<int>(table.ordered_knots().rows()))
    throw std::invalid_argument("recurrence_entry: prefix index must exceed s");
  return recurrence_value(table.ordered_knots(), table, k, alpha);
}

double simplex_moment(const KnotSet& knots, const MultiIndex& beta, MomentTable& table) {
  const int s = static_cast<int>(knots.dimension());
  const int n = static_cast<int>(knots.top_index());
  if (beta.size() != s)
    throw std::invalid_argument("simplex_moment: beta must have length s");
  if (!is_multi_index(beta))
    throw std::invalid_argument("simplex_moment: beta must be a multi-index");
  if (order(beta) == 0) return 1.0;

  if (!table.bound()) {
    table.bind(knots);
  } else {
    if (table.orientation().size() != static_cast<std::size_t>(knots.count()) ||
        knots.permuted(table.orientation()).matrix() != table.ordered_knots())
      throw std::invalid_argument("simplex_moment: table is bound to a different knot set");
  }
  const Eigen::MatrixXd& X = table.ordered_knots();

  const MultiIndex zero = zero_index(s);
  for (int k = s; k <= n; ++k)
    if (!table.contains(k, zero)) table.put(k, zero, 1.0);

  const auto alphas = indices_dominated_by(beta);
  const KnotSet base_knots(X.leftCols(s + 1));
  for (const auto& alpha : alphas) {
    if (order(alpha) == 0 || table.contains(s, alpha)) continue;
    double value;
    try {
      value = base_moment(base_knots, alpha);
    } catch (const domain_error&) {
      value = oracle_moment(DirichletParams::ones(s + 1), base_knots, alpha);
    }
    table.put(s, alpha, value);
  }

  for (int k = s + 1; k <= n; ++k)
    for (const auto& alpha : alphas) {
      if (order(alpha) == 0 || table.contains(k, alpha)) continue;
      table.put(k, alpha, recurrence_value(X, table, k, alpha));
    }

  return table.at(n, beta);
}

ElevationResiduals degree_elevate_check(const DirichletParams& params,
                                        const KnotSet& knots, const MultiIndex& beta) {
  const Eigen::Index s = knots.dimension();
  const Eigen::Index m = knots.count();
  const Eigen::VectorXd& w = params.weights();

  std::vector<double> raised(m);
  for (Eigen::Index i = 0; i < m; ++i)
    raised[i] = oracle_moment(params.raised(i), knots, beta);

  ElevationResiduals out;
  double rhs0 = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) rhs0 += w[i] * raised[i];
  out.constant = oracle_moment(params, knots, beta) - rhs0;

  out.linear.resize(s);
  for (Eigen::Index l = 0; l < s; ++l) {
    MultiIndex up = beta;
    ++up[l];
    double rhs = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      rhs += w[i] * knots.matrix()(l, i) * raised[i];
    out.linear[l] = oracle_moment(params, knots, up) - rhs;
  }
  return out;
}

namespace {

Eigen::VectorXi rounded_params(const DirichletParams& params) {
  Eigen::VectorXi r(params.count());
  for (Eigen::Index i = 0; i < params.count(); ++i)
    r[i] = static_cast<int>(std::llround(params.b()[i]));
  return r;
}

double coalescent_moment(const DirichletParams& params, const KnotSet& knots,
                         const MultiIndex& beta, std::size_t* table_entries) {
  if (!params.all_integer())
    throw strategy_error(
        "coalescent-knot strategy requires positive integer parameters");
  const Eigen::VectorXi reps = rounded_params(params);
  const int total = reps.sum();
  if (total > 24)
    throw resource_error("coalescent-knot strategy capped at sum b_i <= 24");

  Eigen::MatrixXd expanded(knots.dimension(), total);
  int col = 0;
  for (Eigen::Index j = 0; j < knots.count(); ++j)
    for (int r = 0; r < reps[j]; ++r) expanded.col(col++) = knots.matrix().col(j);

  MomentTable table;
  const double value = simplex_moment(KnotSet(std::move(expanded)), beta, table);
  if (table_entries) *table_entries = table.size();
  return value;
}

class RecurrenceReducer {
 public:
  RecurrenceReducer(const KnotSet& knots) : X_(knots.matrix()) {}

  double run(const Eigen::VectorXi& b, const MultiIndex& beta) {
    if (order(beta) == 0) return 1.0;
    const auto key = std::make_pair(std::vector<int>(b.data(), b.data() + b.size()),
                                    to_key(beta));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    const int s = static_cast<int>(X_.rows());
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < b.size(); ++i)
      if (b[i] > 0) active.push_back(i);
    const int n_active = static_cast<int>(active.size()) - 1;
    const int c = [&] {
      int sum = 0;
      for (auto i : active) sum += b[i];
      return sum;
    }();

    double value;
    bool all_ones = true;
    for (auto i : active) all_ones &= (b[i] == 1);
    if (all_ones) {
      Eigen::MatrixXd sub(s, active.size());
      for (std::size_t j = 0; j < active.size(); ++j) sub.col(j) = X_.col(active[j]);
      MomentTable table;
      value = simplex_moment(KnotSet(std::move(sub)), beta, table);
    } else {
      const Eigen::Index j = pick_pivot(b, active, n_active, s);
      Eigen::VectorXi dropped = b;
      --dropped[j];
      double head = run(dropped, beta);
      double sum = (static_cast<double>(c) - 1.0) * head;
      for (int l = 0; l < s; ++l) {
        if (beta[l] == 0) continue;
        MultiIndex down = beta;
        --down[l];
        sum += static_cast<double>(beta[l]) * X_(l, j) * run(b, down);
      }
      value = sum / (static_cast<double>(c) + order(beta) - 1.0);
    }
    memo_.emplace(key, value);
    return value;
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  Eigen::Index pick_pivot(const Eigen::VectorXi& b, const std::vector<Eigen::Index>& active,
                          int n_active, int s) const {
    // a unit parameter can be retired (its knot dropped) only while n > s
    if (n_active > s) {
      for (auto i : active) {
        if (b[i] != 1) continue;
        if (remaining_volume_positive(b, i, s)) return i;
      }
    }
    Eigen::Index best = -1;
    for (auto i : active)
      if (b[i] >= 2 && (best < 0 || b[i] > b[best])) best = i;
    if (best < 0)
      throw strategy_error(
          "parameter recurrence: no admissible pivot (needs b_j >= 1 with n > s when b_j = 1)");
    return best;
  }

  bool remaining_volume_positive(const Eigen::VectorXi& b, Eigen::Index drop, int s) const {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < b.size(); ++i)
      if (b[i] > 0 && i != drop) keep.push_back(i);
    if (static_cast<int>(keep.size()) < s + 1) return false;
    Eigen::MatrixXd sub(s, keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) sub.col(j) = X_.col(keep[j]);
    return KnotSet(std::move(sub)).volume_positive();
  }

  const Eigen::MatrixXd X_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, double> memo_;
};

}  // namespace

double dirichlet_moment(const DirichletParams& params, const KnotSet& knots,
                        const MultiIndex& beta, MomentStrategy strategy,
                        std::size_t* table_entries) {
  if (params.count() != knots.count())
    throw std::invalid_argument("dirichlet_moment: parameter/knot count mismatch");
  if (table_entries) *table_entries = 0;
  switch (strategy) {
    case MomentStrategy::Expansion:
      return oracle_moment(params, knots, beta);
    case MomentStrategy::CoalescentKnots:
      return coalescent_moment(params, knots, beta, table_entries);
    case MomentStrategy::ParameterRecurrence: {
      if (!params.all_integer())
        throw strategy_error(
            "parameter recurrence requires positive integer parameters to "
            "reach the all-ones base");
      if (!knots.volume_positive())
        throw strategy_error("parameter recurrence requires vol_s of the hull > 0");
      RecurrenceReducer reducer(knots);
      const double value = reducer.run(rounded_params(params), beta);
      if (table_entries) *table_entries = reducer.memo_size();
      return value;
    }
  }
  throw std::invalid_argument("dirichlet_moment: unknown strategy");
}

double parameter_elevation(const DirichletParams& params, const KnotSet& knots,
                           const MultiIndex& beta, int m) {
  const int s = static_cast<int>(knots.dimension());
  if (knots.top_index() != s)
    throw std::invalid_argument("parameter_elevation: requires a square case (s = n)");
  if (m < 0 || m >= s)
    throw std::invalid_argument("parameter_elevation: diagonal index out of range");
  const Eigen::MatrixXd& X = knots.matrix();
  for (int i = 0; i < s; ++i)
    for (int j = 0; j <= s; ++j)
      if (i != j && std::abs(X(i, j) - 1.0) > 1e-12)
        throw std::invalid_argument(
            "parameter_elevation: knot matrix must be 1 off the diagonal");

  const double x_m = 1.0 - X(m, m);
  if (x_m == 0.0)
    throw domain_error("parameter_elevation: singular configuration (x_m = 0)");
  const double w_m = params.weights()[m];

  MultiIndex up = beta;
  ++up[m];
  const double num =
      oracle_moment(params, knots, beta) - oracle_moment(params, knots, up);
  return num / (w_m * x_m);
}

Eigen::VectorXd univariate_moments(const DirichletParams& params,
                                   const Eigen::VectorXd& z, int max_order) {
  if (z.size() != params.count())
    throw std::invalid_argument("univariate_moments: knot/parameter count mismatch");
  if (max_order < 0)
    throw std::invalid_argument("univariate_moments: negative order");
  const int N = max_order;

  // q_k = sum_i b_i z_i^k drives the convolution for the coefficients of
  // prod_i (1 - z_i u)^{-b_i}
  Eigen::VectorXd q = Eigen::VectorXd::Zero(N + 1);
  Eigen::VectorXd zpow = Eigen::VectorXd::Ones(z.size());
  for (int k = 1; k <= N; ++k) {
    zpow.array() *= z.array();
    q[k] = params.b().dot(zpow);
  }

  Eigen::VectorXd P = Eigen::VectorXd::Zero(N + 1);
  P[0] = 1.0;
  for (int j = 1; j <= N; ++j) {
    double sum = 0.0;
    for (int k = 1; k <= j; ++k) sum += q[k] * P[j - k];
    P[j] = sum / static_cast<double>(j);
  }

  Eigen::VectorXd m(N + 1);
  double ratio = 1.0;  // j! / (c, j)
  m[0] = 1.0;
  for (int j = 1; j <= N; ++j) {
    ratio *= static_cast<double>(j) / (params.c() + static_cast<double>(j) - 1.0);
    m[j] = ratio * P[j];
  }
  return m;
}

}  // namespace dsm
