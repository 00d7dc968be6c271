#include "dsm/multiindex.hpp"

#include <numeric>
#include <stdexcept>

namespace dsm {

int order(const MultiIndex& beta) { return beta.sum(); }

bool is_multi_index(const MultiIndex& beta) {
  return (beta.array() >= 0).all();
}

bool dominated_by(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) return false;
  return (a.array() <= b.array()).all();
}

MultiIndex unit_index(int dim, int l) {
  if (l < 0 || l >= dim) throw std::invalid_argument("unit_index: coordinate out of range");
  MultiIndex d = MultiIndex::Zero(dim);
  d[l] = 1;
  return d;
}

MultiIndex zero_index(int dim) { return MultiIndex::Zero(dim); }

std::uint64_t factorial_u64(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  if (n > 20) throw std::overflow_error("factorial: exceeds 64-bit range");
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

double factorial(const MultiIndex& beta) {
  if (!is_multi_index(beta)) throw std::invalid_argument("factorial: negative entry");
  double r = 1.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    for (int p = 2; p <= beta[i]; ++p) r *= static_cast<double>(p);
  return r;
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("multinomial: 64-bit overflow");
  return r;
}

// C(n, k) exactly; gcd reduction keeps intermediates within range whenever
// the result itself fits.
std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    std::uint64_t den = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(r, den);
    r /= g;
    den /= g;
    num /= std::gcd(num, den);  // den divides the remaining numerator
    r = checked_mul(r, num);
  }
  return r;
}

}  // namespace

std::uint64_t multinomial(int r, const MultiIndex& beta) {
  if (!is_multi_index(beta)) throw std::invalid_argument("multinomial: negative entry");
  if (order(beta) != r)
    throw std::invalid_argument("multinomial: order of the multi-index must equal r");
  std::uint64_t result = 1;
  int partial = 0;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    partial += beta[i];
    result = checked_mul(result, binomial_u64(partial, beta[i]));
  }
  return result;
}

double appell_symbol(double a, int l) {
  if (l < 0) throw std::invalid_argument("appell_symbol: negative order");
  double r = 1.0;
  for (int i = 0; i < l; ++i) r *= a + static_cast<double>(i);
  return r;
}

double appell_symbol(const Eigen::VectorXd& a, const MultiIndex& k) {
  if (a.size() != k.size())
    throw std::invalid_argument("appell_symbol: size mismatch");
  double r = 1.0;
  for (Eigen::Index i = 0; i < k.size(); ++i) r *= appell_symbol(a[i], k[i]);
  return r;
}

double monomial(const Eigen::VectorXd& x, const MultiIndex& beta) {
  if (x.size() != beta.size())
    throw std::invalid_argument("monomial: size mismatch");
  double r = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (int p = 0; p < beta[i]; ++p) r *= x[i];
  return r;
}

namespace {

void emit_of_order(int m, int dim, MultiIndex& scratch, int pos,
                   std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    scratch[pos] = m;
    out.push_back(scratch);
    return;
  }
  for (int v = 0; v <= m; ++v) {
    scratch[pos] = v;
    emit_of_order(m - v, dim, scratch, pos + 1, out);
  }
}

}  // namespace

std::vector<MultiIndex> indices_of_order(int m, int dim) {
  if (dim < 1) throw std::invalid_argument("indices_of_order: dimension must be >= 1");
  if (m < 0) throw std::invalid_argument("indices_of_order: negative order");
  std::vector<MultiIndex> out;
  MultiIndex scratch(dim);
  emit_of_order(m, dim, scratch, 0, out);
  return out;
}

std::vector<MultiIndex> indices_dominated_by(const MultiIndex& bound) {
  if (!is_multi_index(bound))
    throw std::invalid_argument("indices_dominated_by: negative entry in bound");
  const int dim = static_cast<int>(bound.size());
  std::vector<MultiIndex> out;
  MultiIndex cur = MultiIndex::Zero(dim);
  // product-range walk, then stable ordering by (order, lex)
  while (true) {
    out.push_back(cur);
    int i = dim - 1;
    while (i >= 0 && cur[i] == bound[i]) {
      cur[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MultiIndex& a, const MultiIndex& b) {
                     const int oa = order(a), ob = order(b);
                     if (oa != ob) return oa < ob;
                     return MultiIndexLess{}(a, b);
                   });
  return out;
}

bool MultiIndexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

}  // namespace dsm
