#pragma once

// Independent entanglement quantifiers used as experiment baselines:
// Wootters concurrence (two qubits) and negativity from the partial
// transpose.

#include <algorithm>
#include <cmath>

#include "entgeo/state.hpp"

namespace entgeo {

// Principal square root of a PSD Hermitian matrix via its spectrum;
// eigenvalue noise in [-tol_psd, 0] is treated as zero.
inline cmatrix matrix_sqrt_psd(const cmatrix& m) {
  auto es = hermitian_eigensystem(m);
  const Eigen::Index n = m.rows();
  cmatrix out = cmatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = es.values[static_cast<std::size_t>(i)];
    if (lambda < -tol_psd) {
      throw validation_error(validation_error::code::not_psd,
                             "matrix_sqrt_psd: negative eigenvalue");
    }
    if (lambda > 0.0) {
      out += std::sqrt(lambda) * es.vectors.col(i) * es.vectors.col(i).adjoint();
    }
  }
  return out;
}

// Wootters concurrence C = max(0, l1 - l2 - l3 - l4), the l_i being the
// descending square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y).
// Evaluated through the Hermitian equivalent sqrt(rho) R sqrt(rho), which
// shares that spectrum.
inline double concurrence(const multipartite_state& state) {
  if (state.dims() != std::vector<int>{2, 2}) {
    throw std::invalid_argument("concurrence: defined for two qubits");
  }
  cmatrix yy = cmatrix::Zero(4, 4);
  yy(0, 3) = cplx(-1.0, 0.0);
  yy(1, 2) = cplx(1.0, 0.0);
  yy(2, 1) = cplx(1.0, 0.0);
  yy(3, 0) = cplx(-1.0, 0.0);

  const cmatrix& rho = state.matrix();
  const cmatrix spin_flipped = yy * rho.conjugate() * yy;
  const cmatrix root = matrix_sqrt_psd(rho);
  cmatrix h = root * spin_flipped * root;
  h = (h + h.adjoint()) / 2.0;  // scrub rounding skew before the eigensolve

  auto mu = hermitian_eigenvalues(h);
  double c = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double l = std::sqrt(std::max(0.0, mu[i]));
    c += (i == 0) ? l : -l;
  }
  return std::max(0.0, c);
}

// Negativity across a bipartition: (||rho^{T_subset}||_1 - 1)/2, equal to
// the magnitude of the summed negative eigenvalues of the partial
// transpose.
inline double negativity(const multipartite_state& state,
                         const party_subset& bipartition) {
  bipartition.check_range(state.party_count());
  const cmatrix pt = partial_transpose(state, bipartition);
  double negative_sum = 0.0;
  for (double lambda : hermitian_eigenvalues(pt)) {
    if (lambda < 0.0) negative_sum += lambda;
  }
  return -negative_sum;
}

}  // namespace entgeo
