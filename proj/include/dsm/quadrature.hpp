#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "dsm/errors.hpp"

namespace dsm {

struct QuadratureControl {
  double abs_tol = 1e-11;
  double rel_tol = 1e-10;
  int max_intervals = 20000;   // intervals (1-D) or boxes (cubature) per piece
  bool throw_on_failure = true;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  std::int64_t evaluations = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01};

inline constexpr double kKronrodWeights[8] = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02};

inline constexpr double kGaussWeights[4] = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01};

template <class F>
void gk15(F&& f, double a, double b, double& value, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double kron = kKronrodWeights[0] * f0;
  double gauss = kGaussWeights[0] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kKronrodWeights[i] * fsum;
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * fsum;
  }
  value = kron * h;
  const double diff = std::abs((kron - gauss) * h);
  error = std::pow(200.0 * diff, 1.5);
}

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const {
    if (error != o.error) return error < o.error;
    return a > o.a;  // deterministic tie-break
  }
};

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration on [a, b].
template <class F>
QuadratureResult integrate_gk(F&& f, double a, double b,
                              const QuadratureControl& ctrl = {}) {
  QuadratureResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::priority_queue<detail::Interval> heap;
  detail::Interval whole{a, b, 0.0, 0.0};
  detail::gk15(f, a, b, whole.value, whole.error);
  res.evaluations += 15;
  heap.push(whole);
  double total = whole.value;
  double toterr = whole.error;
  int n = 1;
  while (toterr > std::max(ctrl.abs_tol, ctrl.rel_tol * std::abs(total)) &&
         n < ctrl.max_intervals) {
    detail::Interval worst = heap.top();
    heap.pop();
    total -= worst.value;
    toterr -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    detail::Interval left{worst.a, mid, 0.0, 0.0};
    detail::Interval right{mid, worst.b, 0.0, 0.0};
    detail::gk15(f, left.a, left.b, left.value, left.error);
    detail::gk15(f, right.a, right.b, right.value, right.error);
    res.evaluations += 30;
    total += left.value + right.value;
    toterr += left.error + right.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  res.value = total;
  res.error_estimate = toterr;
  res.converged =
      toterr <= std::max(ctrl.abs_tol, ctrl.rel_tol * std::abs(total));
  return res;
}

namespace detail {

// Genz-Malik embedded degree 7/5 rule on an axis-aligned box, d in {2, 3}.
// Returns the pair estimate and the axis whose fourth difference is
// largest (the split direction).
template <class G>
void genz_malik(G&& g, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                double& value, double& error, int& split_dim,
                std::int64_t& evals) {
  const int d = static_cast<int>(lo.size());
  const double l2 = std::sqrt(9.0 / 70.0);
  const double l4 = std::sqrt(9.0 / 10.0);
  const double l5 = std::sqrt(9.0 / 19.0);
  const double dd = static_cast<double>(d);
  const double w1 = (12824.0 - 9120.0 * dd + 400.0 * dd * dd) / 19683.0;
  const double w2 = 980.0 / 6561.0;
  const double w3 = (1820.0 - 400.0 * dd) / 19683.0;
  const double w4 = 200.0 / 19683.0;
  const double w5 = 6859.0 / 19683.0 / std::pow(2.0, d);
  const double e1 = (729.0 - 950.0 * dd + 50.0 * dd * dd) / 729.0;
  const double e2 = 245.0 / 486.0;
  const double e3 = (265.0 - 100.0 * dd) / 1458.0;
  const double e4 = 25.0 / 729.0;

  const Eigen::VectorXd c = 0.5 * (lo + hi);
  const Eigen::VectorXd h = 0.5 * (hi - lo);
  const double vol = (hi - lo).prod();

  const double fc = g(c);
  ++evals;
  double s2 = 0.0, s3 = 0.0, s4 = 0.0, s5 = 0.0;
  Eigen::VectorXd p = c;
  split_dim = 0;
  double best = -1.0;
  const double ratio = (l2 * l2) / (l4 * l4);
  for (int i = 0; i < d; ++i) {
    p[i] = c[i] - l2 * h[i];
    const double a1 = g(p);
    p[i] = c[i] + l2 * h[i];
    const double a2 = g(p);
    p[i] = c[i] - l4 * h[i];
    const double b1 = g(p);
    p[i] = c[i] + l4 * h[i];
    const double b2 = g(p);
    p[i] = c[i];
    evals += 4;
    s2 += a1 + a2;
    s3 += b1 + b2;
    const double fourth =
        std::abs(a1 + a2 - 2.0 * fc - ratio * (b1 + b2 - 2.0 * fc));
    if (fourth > best) {
      best = fourth;
      split_dim = i;
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int si = -1; si <= 1; si += 2)
        for (int sj = -1; sj <= 1; sj += 2) {
          p[i] = c[i] + si * l4 * h[i];
          p[j] = c[j] + sj * l4 * h[j];
          s4 += g(p);
          ++evals;
          p[i] = c[i];
          p[j] = c[j];
        }
  for (int mask = 0; mask < (1 << d); ++mask) {
    for (int i = 0; i < d; ++i)
      p[i] = c[i] + ((mask >> i) & 1 ? l5 : -l5) * h[i];
    s5 += g(p);
    ++evals;
  }

  value = vol * (w1 * fc + w2 * s2 + w3 * s3 + w4 * s4 + w5 * s5);
  const double rough = vol * (e1 * fc + e2 * s2 + e3 * s3 + e4 * s4);
  error = std::abs(value - rough);
}

struct Box {
  int piece;
  Eigen::VectorXd lo, hi;
  double value, error;
  int split;
  bool operator<(const Box& o) const {
    if (error != o.error) return error < o.error;
    if (piece != o.piece) return piece > o.piece;
    return lo[0] > o.lo[0];
  }
};

// Globally adaptive cubature over a family of unit boxes (one per
// integrand piece) sharing a single refinement heap, so convergence is
// judged against the combined value.  d == 1 uses Gauss-Kronrod,
// d in {2, 3} the Genz-Malik pair.
template <class G>
QuadratureResult integrate_pieces(G&& g, int d, int pieces,
                                  const QuadratureControl& ctrl) {
  QuadratureResult res;
  auto evaluate = [&](Box& box) {
    if (d == 1) {
      auto f1 = [&](double w) {
        Eigen::VectorXd p(1);
        p[0] = w;
        return g(box.piece, p);
      };
      gk15(f1, box.lo[0], box.hi[0], box.value, box.error);
      res.evaluations += 15;
      box.split = 0;
    } else {
      auto fd = [&](const Eigen::VectorXd& w) { return g(box.piece, w); };
      genz_malik(fd, box.lo, box.hi, box.value, box.error, box.split,
                 res.evaluations);
    }
  };

  std::priority_queue<Box> heap;
  double total = 0.0, toterr = 0.0;
  for (int piece = 0; piece < pieces; ++piece) {
    Box whole{piece, Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d),
              0.0, 0.0, 0};
    evaluate(whole);
    total += whole.value;
    toterr += whole.error;
    heap.push(whole);
  }
  int n = pieces;
  while (toterr > std::max(ctrl.abs_tol, ctrl.rel_tol * std::abs(total)) &&
         n < ctrl.max_intervals) {
    Box worst = heap.top();
    heap.pop();
    total -= worst.value;
    toterr -= worst.error;
    const int axis = worst.split;
    const double mid = 0.5 * (worst.lo[axis] + worst.hi[axis]);
    Box a = worst, b = worst;
    a.hi[axis] = mid;
    b.lo[axis] = mid;
    evaluate(a);
    evaluate(b);
    total += a.value + b.value;
    toterr += a.error + b.error;
    heap.push(a);
    heap.push(b);
    ++n;
  }
  res.value = total;
  res.error_estimate = toterr;
  res.converged =
      toterr <= std::max(ctrl.abs_tol, ctrl.rel_tol * std::abs(total));
  return res;
}

// One half-axis of the simplex-to-cube map.  The Beta kernel
// v^p (1-v)^q is integrated over [0, 1/2] or [1/2, 1].  An endpoint whose
// exponent is negative or awkwardly fractional is handled by the power
// map v = (1/2) w^r with r = 3/(e+1), which turns the kernel into a
// plain w^2 factor and leaves at worst a C^1-and-a-bit corner in the
// composed integrand.
struct HalfAxisMap {
  bool high;          // which half
  bool substituted;   // power map active
  double p, q;        // kernel exponents
  double r;           // map exponent when substituted
  double scale;       // constant kernel factor

  // w in [0,1] -> coordinate v and kernel weight W
  void eval(double w, double& v, double& W) const {
    if (!high) {
      if (substituted) {
        v = 0.5 * std::pow(w, r);
        W = scale * w * w * std::exp(q * std::log1p(-v));
      } else {
        v = 0.5 * w;
        W = scale * std::pow(v, p) * std::exp(q * std::log1p(-v));
      }
    } else {
      if (substituted) {
        const double u = 0.5 * std::pow(w, r);
        v = 1.0 - u;
        W = scale * w * w * std::pow(v, p);
      } else {
        const double u = 0.5 * (1.0 - w);  // u = 1 - v in (0, 1/2]
        v = 1.0 - u;
        W = scale * std::pow(v, p) * std::pow(u, q);
      }
    }
  }

  static HalfAxisMap make(bool high, double p, double q, double norm) {
    HalfAxisMap m;
    m.high = high;
    m.p = p;
    m.q = q;
    const double expo = high ? q : p;
    // substituting pays off while 3/(e+1) beats the direct corner v^e
    const bool fractional = std::abs(expo - std::round(expo)) > 1e-12;
    m.substituted = expo < 0.0 || (fractional && expo < 1.303);
    if (m.substituted) {
      m.r = 3.0 / (expo + 1.0);
      m.scale = norm * std::pow(0.5, expo + 1.0) * m.r;
    } else {
      m.r = 1.0;
      m.scale = norm * 0.5;  // half-width Jacobian
    }
    return m;
  }
};

}  // namespace detail

// Integral of f against the Dirichlet density phi_b over the standard
// simplex E_n (n + 1 = b.size()).  The simplex is mapped onto the unit
// cube one axis at a time; under that map the density factors into
// independent Beta kernels, one per axis.  Each axis splits at 1/2 with
// singular endpoints flattened by a power map, giving 2^n smooth pieces:
// n = 1 uses adaptive Gauss-Kronrod, n in {2, 3} adaptive Genz-Malik
// cubature.  f receives the full coordinate vector (t_0, ..., t_n).
template <class F>
QuadratureResult integrate_dirichlet_simplex(const Eigen::VectorXd& b, F&& f,
                                             const QuadratureControl& ctrl = {}) {
  const int n = static_cast<int>(b.size()) - 1;
  if (n < 1) throw std::invalid_argument("integrate_dirichlet_simplex: need n >= 1");
  if (n > 3)
    throw strategy_error(
        "integrate_dirichlet_simplex: quadrature limited to n <= 3");

  // c_i = b_0 + sum_{k > i} b_k; Beta(b_i, c_i) kernel on axis i
  Eigen::VectorXd tail(n + 1);
  tail[n] = b[0];
  for (int i = n - 1; i >= 1; --i) tail[i] = tail[i + 1] + b[i + 1];

  std::vector<std::array<detail::HalfAxisMap, 2>> axes(n + 1);
  for (int i = 1; i <= n; ++i) {
    const double norm = std::exp(std::lgamma(b[i] + tail[i]) - std::lgamma(b[i]) -
                                 std::lgamma(tail[i]));
    axes[i][0] = detail::HalfAxisMap::make(false, b[i] - 1.0, tail[i] - 1.0, norm);
    axes[i][1] = detail::HalfAxisMap::make(true, b[i] - 1.0, tail[i] - 1.0, norm);
  }

  Eigen::VectorXd v(n + 1), t(n + 1);
  auto assemble = [&](int piece, const Eigen::VectorXd& w) -> double {
    double weight = 1.0;
    for (int i = 1; i <= n; ++i) {
      double vi, Wi;
      axes[i][(piece >> (i - 1)) & 1].eval(w[i - 1], vi, Wi);
      v[i] = vi;
      weight *= Wi;
    }
    double rem = 1.0;
    for (int j = 1; j <= n; ++j) {
      t[j] = v[j] * rem;
      rem *= 1.0 - v[j];
    }
    t[0] = rem;
    return weight * f(t);
  };

  QuadratureResult res = detail::integrate_pieces(assemble, n, 1 << n, ctrl);
  if (!res.converged && ctrl.throw_on_failure)
    throw accuracy_error("simplex quadrature did not reach the requested accuracy",
                         res.value, res.error_estimate);
  return res;
}

}  // namespace dsm
