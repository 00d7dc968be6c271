#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

// Deterministic sampling helpers.  std::mt19937_64 has a standardized
// sequence, but the std distributions do not, so the mappings from raw
// bits to variates are spelled out here.

namespace dsm::rng {

using Engine = std::mt19937_64;

inline double uniform(Engine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// uniform on (0, 1]; safe as a log argument
inline double uniform_pos(Engine& g) {
  return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;
}

inline double uniform(Engine& g, double lo, double hi) {
  return lo + (hi - lo) * uniform(g);
}

inline int uniform_int(Engine& g, int lo, int hi) {  // inclusive bounds
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(g() % span);
}

inline double normal(Engine& g) {
  const double u1 = uniform_pos(g);
  const double u2 = uniform(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Marsaglia-Tsang squeeze method; alpha < 1 handled by boosting.
inline double gamma(Engine& g, double alpha) {
  if (alpha < 1.0) {
    const double u = uniform_pos(g);
    return gamma(g, alpha + 1.0) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal(g);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos(g);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// One draw from Dirichlet(b); returns the full coordinate vector
// (t_0, ..., t_n) on the standard simplex.
inline Eigen::VectorXd dirichlet(Engine& g, const Eigen::VectorXd& b) {
  Eigen::VectorXd t(b.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    t[i] = gamma(g, b[i]);
    sum += t[i];
  }
  return t / sum;
}

}  // namespace dsm::rng
