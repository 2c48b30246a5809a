#pragma once

// Dense complex matrix foundation. Operators at desk scale stay small
// (side <= 64), so everything is dense, row-major, double precision.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace entgeo {

using cplx = std::complex<double>;
using cmatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline cmatrix cidentity(Eigen::Index n) { return cmatrix::Identity(n, n); }

inline cmatrix dagger(const cmatrix& m) { return m.adjoint(); }

inline double max_abs(const cmatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

// max_ij |m(i,j) - conj(m(j,i))|
inline double hermiticity_defect(const cmatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermiticity_defect: matrix must be square");
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

// Kronecker product, (ra*rb) x (ca*cb). Explicit index arithmetic: entry
// (i*rb + k, j*cb + l) is always the single product a(i,j) * b(k,l).
inline cmatrix kron(const cmatrix& a, const cmatrix& b) {
  cmatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index k = 0; k < b.rows(); ++k) {
        for (Eigen::Index l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
      }
    }
  }
  return out;
}

}  // namespace entgeo
