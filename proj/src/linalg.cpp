#include "fuplab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace fuplab {

QuadratureRule gauss_legendre(int p) {
  if (p < 1) throw InputError("gauss_legendre: need p >= 1");
  // Golub-Welsch: eigenvalues of the Jacobi matrix
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(p, p);
  for (int k = 1; k < p; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  QuadratureRule r;
  for (int k = 0; k < p; ++k) {
    r.nodes.push_back(es.eigenvalues()(k));
    const double v = es.eigenvectors()(0, k);
    r.weights.push_back(2.0 * v * v);
  }
  // polish nodes with a couple of Newton steps on P_p
  for (int k = 0; k < p; ++k) {
    double x = r.nodes[k];
    for (int it = 0; it < 3; ++it) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= p; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      const double dp = p * (x * p1 - p0) / (x * x - 1.0);
      x -= p1 / dp;
      if (it == 2) r.weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    r.nodes[k] = x;
  }
  return r;
}

SingularValueResult top_singular_value(const LinearOperator& op, double rel_tol, int max_iter,
                                       unsigned seed) {
  SingularValueResult res;
  const Eigen::Index n = op.cols;
  if (n == 0 || op.rows == 0) {
    res.converged = true;
    return res;
  }
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cdouble(g(rng), g(rng));
  v.normalize();

  const int kmax = static_cast<int>(std::min<Eigen::Index>(max_iter, n));
  std::vector<CVector> basis;
  std::vector<double> alpha, beta;
  double prev = -1.0;
  int flat = 0;  // consecutive iterations with a stagnant Ritz value
  for (int k = 0; k < kmax; ++k) {
    basis.push_back(v);
    CVector w = op.apply_adjoint(op.apply(v));
    const double a = v.dot(w).real();
    alpha.push_back(a);
    // full reorthogonalisation, twice for stability
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q * q.dot(w);
    const double b = w.norm();

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) t(i, i) = alpha[i];
    for (int i = 0; i < k; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double theta = es.eigenvalues()(k);
    // residual of the top Ritz pair; eigenvalue error is about its square over the gap
    const double resid = b * std::abs(es.eigenvectors()(k, k));
    res.iterations = k + 1;
    res.value = std::sqrt(std::max(theta, 0.0));
    const double scale = std::max(std::abs(theta), 1e-300);
    flat = (prev >= 0 && std::abs(theta - prev) <= rel_tol * scale) ? flat + 1 : 0;
    // A cluster of top singular values stalls the residual while the Ritz value has
    // already settled; five flat steps are accepted as convergence.
    if (resid <= 1e-9 * scale || b <= 1e-14 * scale || flat >= 5) {
      res.converged = true;
      return res;
    }
    prev = theta;
    beta.push_back(b);
    v = w / b;
  }
  res.converged = kmax == n;
  return res;
}

double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (std::min(a.rows(), a.cols()) <= 400)
    return Eigen::BDCSVD<CMatrix>(a).singularValues()(0);
  LinearOperator op{a.rows(), a.cols(), [&](const CVector& x) { return CVector(a * x); },
                    [&](const CVector& y) { return CVector(a.adjoint() * y); }};
  const auto r = top_singular_value(op);
  if (!r.converged) throw NumericalError("operator_norm: Lanczos did not converge");
  return r.value;
}

double hermitian_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("least_squares: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw InputError("least_squares: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace fuplab
