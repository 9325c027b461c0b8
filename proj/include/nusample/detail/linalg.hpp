#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nusample/core.hpp"

namespace nusample::detail {

struct CGResult {
  CVec x;
  int iterations = 0;
  double residual = 0.0;  // relative, ||b - A x|| / ||b||
  bool converged = false;
  std::vector<double> history;  // residual after each iteration
};

/// Conjugate gradients for a Hermitian positive (semi)definite operator
/// given as a callable y = A(x).
template <class Apply>
CGResult conjugate_gradient(Apply&& A, const CVec& b, double tol, int max_iter) {
  CGResult r;
  r.x = CVec::Zero(b.size());
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    r.converged = true;
    return r;
  }
  CVec res = b;
  CVec p = res;
  double rr = res.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    const CVec Ap = A(p);
    const double pAp = p.dot(Ap).real();
    if (!(pAp > 0.0)) break;
    const double alpha = rr / pAp;
    r.x += alpha * p;
    res -= alpha * Ap;
    const double rr_new = res.squaredNorm();
    r.iterations = it + 1;
    r.residual = std::sqrt(rr_new) / bnorm;
    r.history.push_back(r.residual);
    if (r.residual <= tol) {
      r.converged = true;
      break;
    }
    p = res + (rr_new / rr) * p;
    rr = rr_new;
  }
  // Report the true residual of the returned iterate.
  r.residual = (b - A(r.x)).norm() / bnorm;
  r.converged = r.residual <= tol;
  return r;
}

/// Eigenvalues of a Hermitian matrix in ascending order.
inline RVec hermitian_eigenvalues(const CMat& H) {
  Eigen::SelfAdjointEigenSolver<CMat> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Solves H x = b for Hermitian PSD H, discarding eigen-directions below
/// rel_cutoff * lambda_max.
inline CVec truncated_solve(const CMat& H, const CVec& b, double rel_cutoff) {
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  const RVec& ev = es.eigenvalues();
  const double top = ev.size() ? std::max(0.0, ev[ev.size() - 1]) : 0.0;
  const CMat& V = es.eigenvectors();
  CVec c = V.adjoint() * b;
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = ev[i] > rel_cutoff * top ? c[i] / ev[i] : cplx(0.0);
  return V * c;
}

inline double max_relative_asymmetry(const CMat& H) {
  const double scale = H.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (H - H.adjoint()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace nusample::detail
