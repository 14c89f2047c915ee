#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace krein {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr cplx I_unit{0.0, 1.0};

enum class ErrorCode {
  DimensionMismatch,
  NotHermitian,
  NotInvolution,
  TrivialEigenspace,
  RankDeficient,
  NotAnticommuting,
  NotJSelfAdjoint,
  NormExceedsOne,
  NotStrict,
  FNotPositive,
  SingularTransform,
  GammaCritical,
  InvalidGrid,
  InvalidArgument,
  Parse,
  Io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotInvolution: return "NotInvolution";
    case ErrorCode::TrivialEigenspace: return "TrivialEigenspace";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotAnticommuting: return "NotAnticommuting";
    case ErrorCode::NotJSelfAdjoint: return "NotJSelfAdjoint";
    case ErrorCode::NormExceedsOne: return "NormExceedsOne";
    case ErrorCode::NotStrict: return "NotStrict";
    case ErrorCode::FNotPositive: return "FNotPositive";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::GammaCritical: return "GammaCritical";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Numerical thresholds shared by every module. All values are relative
/// unless noted otherwise.
struct Tolerances {
  double alg = 1e-10;            ///< algebraic identities (J* = J, J^2 = I, T* = T, ...)
  double cls = 1e-8;             ///< subspace sign classification, relative to ||B* B||
  double rank = 1e-12;           ///< singular-value cutoff for rank decisions
  double principal_angle = 1e-8; ///< subspace equality
  double strict_margin = 1e-8;   ///< ||T|| <= 1 - strict_margin counts as strict
  double solve_residual = 1e-10; ///< residual bound for linear solves, relative to ||rhs||
  double ver = 1e-9;             ///< C-symmetry verification
  double spec = 1e-8;            ///< |Im lambda| <= spec * ||A|| counts as real
  double neutral = 1e-8;         ///< |[v,v]| below this (unit v) is neutral
  double cond_cap = 1e8;         ///< eigenvector-matrix condition cap
  double herm = 1e-9;            ///< Hermiticity of H after hermitization
  double blk = 1e-9;             ///< off-diagonal residual of block diagonalization
  double disc = 1e-6;            ///< discretization-level checks
};

inline void require_square(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be square, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
}

inline void require_size(const Matrix& m, Index n, std::string_view what) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be " + std::to_string(n) +
                                                  "x" + std::to_string(n));
  }
}

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

inline RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector{};
  return Eigen::BDCSVD<Matrix>(m).singularValues();
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

/// sigma_max / sigma_min; infinity for a singular matrix.
inline double condition_number(const Matrix& m) {
  const RealVector s = singular_values(m);
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

/// Eigenvalues of the Hermitian part, ascending.
inline RealVector hermitian_eigenvalues(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(hermitian_part(m), Eigen::EigenvaluesOnly)
      .eigenvalues();
}

inline double relative(double defect, double scale) { return scale > 0.0 ? defect / scale : defect; }

struct LinearSolve {
  Matrix x;
  double relative_residual;  ///< ||a x - rhs|| / ||rhs||
};

/// Solves a x = rhs by pivoted LU and reports the residual.
inline LinearSolve solve(const Matrix& a, const Matrix& rhs) {
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!(lu.rcond() > std::numeric_limits<double>::epsilon())) {
    throw Error(ErrorCode::SingularTransform, "linear system is singular");
  }
  LinearSolve out{lu.solve(rhs), 0.0};
  const double scale = rhs.norm();
  out.relative_residual = relative((a * out.x - rhs).norm(), scale);
  return out;
}

/// Projector onto span(onto) along span(along). [onto | along] must be square
/// and invertible.
inline Matrix oblique_projector(const Matrix& onto, const Matrix& along) {
  const Index n = onto.rows();
  if (along.rows() != n || onto.cols() + along.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "bases do not decompose the space");
  }
  Matrix w(n, n);
  w << onto, along;
  Matrix image = Matrix::Zero(n, n);
  image.leftCols(onto.cols()) = onto;
  // P W = [onto | 0]  <=>  W* P* = [onto | 0]*
  return solve(w.adjoint(), image.adjoint()).x.adjoint();
}

/// Number of singular values above tol * sigma_max.
inline Index numerical_rank(const RealVector& s, double tol) {
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<Index>(std::count_if(s.begin(), s.end(),
                                          [&](double v) { return v > tol * s(0); }));
}

/// Orthonormal basis of the column span.
inline Matrix orthonormal_basis(const Matrix& columns, double rank_tol) {
  if (columns.cols() == 0) return Matrix(columns.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const Index r = numerical_rank(svd.singularValues(), rank_tol);
  return svd.matrixU().leftCols(r);
}

/// Orthonormal basis of ker(m).
inline Matrix null_space(const Matrix& m, double rank_tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Index r = numerical_rank(svd.singularValues(), rank_tol);
  return svd.matrixV().rightCols(m.cols() - r);
}

/// Sine of the largest principal angle between two spans of equal dimension.
/// Returns 1 when the dimensions differ.
inline double max_principal_angle_sine(const Matrix& a, const Matrix& b, double rank_tol = Tolerances{}.rank) {
  const Matrix qa = orthonormal_basis(a, rank_tol);
  const Matrix qb = orthonormal_basis(b, rank_tol);
  if (qa.cols() != qb.cols()) return 1.0;
  if (qa.cols() == 0) return 0.0;
  const Matrix residual = qb - qa * (qa.adjoint() * qb);
  return std::min(1.0, spectral_norm(residual));
}

}  // namespace krein
