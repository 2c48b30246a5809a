#pragma once

// Test-only brute-force reference path. Deliberately avoids the library's
// entropy cache and geometry routines: reductions walk the full matrix
// entry by entry, entropies come straight from the spectrum, and the pair
// monotone uses the conditional-mutual-information form. Values produced
// here anchor the expectations in the test suites.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace naive {

using cplx = std::complex<double>;
using cmat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Reduction by accumulating every full-matrix entry whose traced digits
// agree on row and column.
inline cmat partial_trace(const cmat& rho, const std::vector<int>& dims,
                          const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int p : keep) kept[static_cast<std::size_t>(p)] = true;

  Eigen::Index keep_side = 1;
  for (int p = 0; p < n; ++p) {
    if (kept[static_cast<std::size_t>(p)]) keep_side *= dims[static_cast<std::size_t>(p)];
  }
  cmat out = cmat::Zero(keep_side, keep_side);

  const auto digits = [&](Eigen::Index flat) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int p = n - 1; p >= 0; --p) {
      d[static_cast<std::size_t>(p)] = static_cast<int>(flat % dims[static_cast<std::size_t>(p)]);
      flat /= dims[static_cast<std::size_t>(p)];
    }
    return d;
  };
  const auto kept_flat = [&](const std::vector<int>& d) {
    Eigen::Index flat = 0;
    for (int p = 0; p < n; ++p) {
      if (kept[static_cast<std::size_t>(p)]) {
        flat = flat * dims[static_cast<std::size_t>(p)] + d[static_cast<std::size_t>(p)];
      }
    }
    return flat;
  };

  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    const auto rd = digits(r);
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      const auto cd = digits(c);
      bool diagonal_on_traced = true;
      for (int p = 0; p < n; ++p) {
        if (!kept[static_cast<std::size_t>(p)] &&
            rd[static_cast<std::size_t>(p)] != cd[static_cast<std::size_t>(p)]) {
          diagonal_on_traced = false;
          break;
        }
      }
      if (diagonal_on_traced) out(kept_flat(rd), kept_flat(cd)) += rho(r, c);
    }
  }
  return out;
}

inline double entropy_bits(const cmat& rho) {
  Eigen::SelfAdjointEigenSolver<cmat> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-14) s -= p * std::log2(p);
  }
  return s;
}

inline double subset_entropy(const cmat& rho, const std::vector<int>& dims,
                             const std::vector<int>& subset) {
  if (subset.empty()) return 0.0;
  return entropy_bits(partial_trace(rho, dims, subset));
}

inline std::vector<int> complement(int n, const std::vector<int>& subset) {
  std::vector<int> out;
  for (int p = 0; p < n; ++p) {
    bool in = false;
    for (int q : subset) in = in || (q == p);
    if (!in) out.push_back(p);
  }
  return out;
}

// Pair monotone through the CMI identity M_ij = I(j:R|i) + I(i:R|j),
// R the remaining parties.
inline double pair_metric(const cmat& rho, const std::vector<int>& dims, int i,
                          int j) {
  const int n = static_cast<int>(dims.size());
  const auto S = [&](std::vector<int> ss) {
    std::sort(ss.begin(), ss.end());
    return subset_entropy(rho, dims, ss);
  };
  const auto rest = complement(n, {i, j});
  auto with = [&](std::vector<int> base, int extra) {
    base.push_back(extra);
    return base;
  };
  const double cmi_j_rest_given_i =
      S({i, j}) + S(with(rest, i)) - S(with(with(rest, i), j)) - S({i});
  const double cmi_i_rest_given_j =
      S({i, j}) + S(with(rest, j)) - S(with(with(rest, j), i)) - S({j});
  return cmi_j_rest_given_i + cmi_i_rest_given_j;
}

inline double conditional(const cmat& rho, const std::vector<int>& dims, int x,
                          std::vector<int> context) {
  auto joint = context;
  joint.push_back(x);
  std::sort(joint.begin(), joint.end());
  std::sort(context.begin(), context.end());
  return subset_entropy(rho, dims, joint) - subset_entropy(rho, dims, context);
}

// (m-1)-volume over a subset by the even-permutation definition, written
// against index arrays rather than symmetric polynomials.
inline double volume(const cmat& rho, const std::vector<int>& dims,
                     std::vector<int> subset) {
  const int n = static_cast<int>(dims.size());
  const int m = static_cast<int>(subset.size());
  std::vector<double> s, st;
  for (int x : subset) {
    std::vector<int> within;
    for (int y : subset) {
      if (y != x) within.push_back(y);
    }
    s.push_back(conditional(rho, dims, x, within));
    st.push_back(conditional(rho, dims, x, complement(n, {x})));
  }

  std::vector<int> perm(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) perm[static_cast<std::size_t>(t)] = t;
  double v = 0.0, vt = 0.0;
  do {
    int inv = 0;
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        if (perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)]) ++inv;
      }
    }
    if (inv % 2 != 0) continue;
    double prod = 1.0, prodt = 1.0;
    for (int t = 0; t + 1 < m; ++t) {
      prod *= s[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])];
      prodt *= st[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])];
    }
    v += prod;
    vt += prodt;
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * (v - vt);
}

// Aggregate content by summing the naive monotones over every subset of
// size >= 2.
inline double content_raw(const cmat& rho, const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  double total = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (int p = 0; p < n; ++p) {
      if (mask & (1u << p)) subset.push_back(p);
    }
    if (subset.size() == 2) {
      total += pair_metric(rho, dims, subset[0], subset[1]);
    } else if (subset.size() >= 3) {
      total += volume(rho, dims, subset);
    }
  }
  return total;
}

}  // namespace naive
