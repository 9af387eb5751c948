#pragma once

#include <cmath>
#include <random>

#include "trapcool/hilbert.hpp"

namespace testing_support {

using trapcool::CMatrix;
using trapcool::cplx;
using trapcool::DenseOperator;

/// |α⟩⟨α| on the truncated space, renormalized.
inline DenseOperator coherent_state(int dim, cplx alpha) {
  Eigen::VectorXcd v(dim);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  v.normalize();
  return DenseOperator(v * v.adjoint());
}

inline DenseOperator random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> n;
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(n(rng), n(rng));
  return DenseOperator(0.5 * (m + m.adjoint()));
}

inline DenseOperator random_density(int dim, std::mt19937& rng) {
  std::normal_distribution<double> n;
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(n(rng), n(rng));
  CMatrix rho = m * m.adjoint();
  rho /= rho.trace();
  return DenseOperator(rho);
}

inline double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testing_support
