#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "fuplab/common.hpp"

namespace fuplab {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Gauss-Legendre rule with p nodes on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int p);

// Matrix-free operator: apply and apply_adjoint map vectors of size cols <-> rows.
struct LinearOperator {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::function<CVector(const CVector&)> apply;
  std::function<CVector(const CVector&)> apply_adjoint;
};

struct SingularValueResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest singular value via Lanczos on A^H A with full reorthogonalisation.
SingularValueResult top_singular_value(const LinearOperator& op, double rel_tol = 1e-12,
                                       int max_iter = 300, unsigned seed = 12345);

// Dense SVD for small matrices, Lanczos otherwise.
double operator_norm(const CMatrix& a);

// Largest |eigenvalue| of a Hermitian matrix.
double hermitian_norm(const CMatrix& a);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
// Ordinary least squares y = slope x + intercept.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fuplab
