#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace dsm {

// Multi-index: a tuple of nonnegative integers.  Componentwise order,
// factorials and rising-factorial (Appell) symbols live here; every series
// and recursion in the library is driven by these helpers.
using MultiIndex = Eigen::VectorXi;

int order(const MultiIndex& beta);                        // |beta|
bool is_multi_index(const MultiIndex& beta);              // all entries >= 0
bool dominated_by(const MultiIndex& a, const MultiIndex& b);  // a <= b componentwise

MultiIndex unit_index(int dim, int l);                    // d_l (0-based l)
MultiIndex zero_index(int dim);

// n! as an exact 64-bit integer; throws std::overflow_error past 20!.
std::uint64_t factorial_u64(int n);

// beta! as a double (exact for the entry range used here).
double factorial(const MultiIndex& beta);

// r!/beta!, exact integer arithmetic, overflow-checked.
// Requires |beta| == r.
std::uint64_t multinomial(int r, const MultiIndex& beta);

// Appell symbol (rising factorial): (a,0) = 1, (a,l) = a(a+1)...(a+l-1).
double appell_symbol(double a, int l);

// Product form over a multi-index: (a,k) = prod_i (a_i, k_i).
double appell_symbol(const Eigen::VectorXd& a, const MultiIndex& k);

// x^beta = prod_i x_i^beta_i.
double monomial(const Eigen::VectorXd& x, const MultiIndex& beta);

// All multi-indices of the given order in ascending lexicographic order.
// Count is binomial(m + dim - 1, dim - 1).
std::vector<MultiIndex> indices_of_order(int m, int dim);

// All alpha <= bound componentwise, in graded lexicographic order.
std::vector<MultiIndex> indices_dominated_by(const MultiIndex& bound);

struct MultiIndexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

}  // namespace dsm
