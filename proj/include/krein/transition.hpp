#pragma once

#include "krein/c_operator.hpp"

#include <utility>

namespace krein {

/// Operator of transition from the fundamental decomposition h+ (+) h- to a
/// J-orthogonal pair L+ [+] L-: T = T*, JT = -TJ, ||T|| <= 1. Only
/// validate_transition creates one.
class TransitionOperator {
 public:
  const Matrix& matrix() const noexcept { return t_; }
  double norm() const noexcept { return norm_; }
  /// ||T|| <= 1 - strict_margin.
  bool strict() const noexcept { return strict_; }
  Index dim() const noexcept { return t_.rows(); }

 private:
  friend TransitionOperator validate_transition(const KreinStructure&, Matrix, const Tolerances&);
  TransitionOperator(Matrix t, double norm, bool strict) : t_(std::move(t)), norm_(norm), strict_(strict) {}

  Matrix t_;
  double norm_;
  bool strict_;
};

inline TransitionOperator validate_transition(const KreinStructure& ks, Matrix t,
                                              const Tolerances& tol = {}) {
  require_size(t, ks.dim(), "T");
  const double norm = spectral_norm(t);
  const double scale = std::max(1.0, norm);
  if (spectral_norm(t - t.adjoint()) > tol.alg * scale) {
    throw Error(ErrorCode::NotHermitian, "transition operator must be Hermitian");
  }
  if (spectral_norm(ks.J() * t + t * ks.J()) > tol.alg * scale) {
    throw Error(ErrorCode::NotAnticommuting, "transition operator must satisfy JT = -TJ");
  }
  if (norm > 1.0 + tol.alg) {
    throw Error(ErrorCode::NormExceedsOne, "||T|| = " + std::to_string(norm));
  }
  return TransitionOperator(std::move(t), norm, norm <= 1.0 - tol.strict_margin);
}

struct ObliqueProjectors {
  Matrix plus;   ///< onto L+ along L-
  Matrix minus;  ///< onto L- along L+
  double cond_estimate = 1.0;  ///< cond(I - T)
  double residual = 0.0;       ///< worst relative residual of the two solves
  bool near_singular = false;  ///< T not strict, or a solve residual above tol.solve_residual
};

/// P_{L-} = (I - T)^{-1} (P- - T P+),  P_{L+} = (I - T)^{-1} (P+ - T P-).
inline ObliqueProjectors oblique_projectors(const KreinStructure& ks, const TransitionOperator& t,
                                            const Tolerances& tol = {}) {
  require_size(t.matrix(), ks.dim(), "T");
  const Matrix& tm = t.matrix();
  const Matrix i_minus_t = identity(ks.dim()) - tm;

  Matrix rhs(ks.dim(), 2 * ks.dim());
  rhs << ks.P_plus() - tm * ks.P_minus(), ks.P_minus() - tm * ks.P_plus();
  const LinearSolve s = solve(i_minus_t, rhs);

  ObliqueProjectors out;
  out.plus = s.x.leftCols(ks.dim());
  out.minus = s.x.rightCols(ks.dim());
  out.cond_estimate = condition_number(i_minus_t);
  out.residual = s.relative_residual;
  out.near_singular = !t.strict() || s.relative_residual > tol.solve_residual;
  return out;
}

/// Dual pair L+ = (I + T) h+, L- = (I + T) h- with its projectors.
struct DualPair {
  SubspaceBasis L_plus;
  SubspaceBasis L_minus;
  TransitionOperator T;
  Matrix P_Lplus;
  Matrix P_Lminus;
  bool near_singular = false;
};

inline DualPair dual_pair_from_transition(const KreinStructure& ks, const TransitionOperator& t,
                                          const Tolerances& tol = {}) {
  if (!t.strict()) {
    throw Error(ErrorCode::NotStrict, "dual pair needs ||T|| < 1");
  }
  const Matrix lift = identity(ks.dim()) + t.matrix();
  ObliqueProjectors proj = oblique_projectors(ks, t, tol);
  return DualPair{SubspaceBasis(lift * ks.basis_plus(), tol.rank),
                  SubspaceBasis(lift * ks.basis_minus(), tol.rank), t, std::move(proj.plus),
                  std::move(proj.minus), proj.near_singular};
}

/// C = J (I - T)(I + T)^{-1}. (I - T) and (I + T)^{-1} commute, so the product
/// is formed as the solution of (I + T) X = (I - T).
inline COperator c_from_transition(const KreinStructure& ks, const TransitionOperator& t,
                                   const Tolerances& tol = {}) {
  require_size(t.matrix(), ks.dim(), "T");
  const Matrix id = identity(ks.dim());
  const Matrix i_plus_t = id + t.matrix();
  const LinearSolve s = solve(i_plus_t, id - t.matrix());

  COperator out;
  out.C = ks.J() * s.x;
  out.report = check_c_operator(ks, out.C, tol);
  out.cond_estimate = condition_number(i_plus_t);
  out.near_singular = !t.strict() || s.relative_residual > tol.solve_residual;
  return out;
}

/// T = (I - F)(I + F)^{-1} with F = JC. Throws FNotPositive if F has an
/// eigenvalue <= 0.
inline TransitionOperator transition_from_c(const KreinStructure& ks, const Matrix& c,
                                            const Tolerances& tol = {}) {
  require_size(c, ks.dim(), "C");
  const Matrix f = ks.J() * c;
  const double fmin = hermitian_eigenvalues(f)(0);
  if (!(fmin > 0.0)) {
    throw Error(ErrorCode::FNotPositive, "lambda_min(JC) = " + std::to_string(fmin));
  }
  const Matrix id = identity(ks.dim());
  return validate_transition(ks, solve(id + f, id - f).x, tol);
}

}  // namespace krein
