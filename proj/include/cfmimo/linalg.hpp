// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: closed-form and Monte Carlo analysis of cell-free massive MIMO
// under channel aging.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmimo {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Raised when model inputs are internally inconsistent (a covariance that
/// is not PSD, a non-finite statistic, a singular combining problem).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major 2-D container for per-(UE, AP) objects such as R_kl.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, const T& init = T())
      : rows_(rows), cols_(cols), data_(rows * cols, init) {}

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// tr(A B) without forming the product.
inline cd trace_product(const CMatrix& A, const CMatrix& B) {
  return (A.array() * B.transpose().array()).sum();
}

/// Largest entrywise |M - M^H|.
inline double hermitian_defect(const CMatrix& M) {
  return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

/// Factor F with F F^H = M for a Hermitian PSD matrix M, computed from the
/// eigendecomposition so rank-deficient inputs are handled. Eigenvalues in
/// [-clamp_tol, 0) are set to zero; anything more negative is a ModelError.
inline CMatrix psd_factor(const CMatrix& M, double clamp_tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(M);
  if (es.info() != Eigen::Success) {
    throw ModelError("eigendecomposition failed");
  }
  RVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -clamp_tol) {
      throw ModelError("matrix is not positive semi-definite (eigenvalue " +
                       std::to_string(ev(i)) + ")");
    }
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal();
}

/// Symmetric square root S = U D^{1/2} U^T of a real symmetric PSD matrix,
/// same clamping policy as psd_factor.
inline RMatrix symmetric_sqrt(const RMatrix& M, double clamp_tol) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(M);
  if (es.info() != Eigen::Success) {
    throw ModelError("eigendecomposition failed");
  }
  RVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -clamp_tol) {
      throw ModelError("covariance is not positive semi-definite (eigenvalue " +
                       std::to_string(ev(i)) + ")");
    }
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watt(double dbm) { return db_to_linear(dbm - 30.0); }

}  // namespace cfmimo
