#pragma once

#include "krein/linalg.hpp"

#include <string_view>
#include <utility>

namespace krein {

/// A finite-dimensional Krein space: C^n with the indefinite metric
/// [x, y] = (Jx, y) for a fundamental symmetry J (J = J*, J^2 = I).
///
/// J may be any Hermitian involution, not only diag(+-1). The orthonormal
/// eigenbases of the two eigenspaces of J (the canonical form of J) are
/// computed once at construction.
class KreinStructure {
 public:
  explicit KreinStructure(Matrix j, const Tolerances& tol = {}) : j_(std::move(j)) {
    require_square(j_, "fundamental symmetry J");
    const Index n = j_.rows();
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "Krein space needs dimension >= 2");

    const Matrix id = identity(n);
    if (spectral_norm(j_ - j_.adjoint()) > tol.alg) {
      throw Error(ErrorCode::NotHermitian, "J is not Hermitian");
    }
    if (spectral_norm(j_ * j_ - id) > tol.alg) {
      throw Error(ErrorCode::NotInvolution, "J^2 != I");
    }
    p_plus_ = 0.5 * (id + j_);
    p_minus_ = 0.5 * (id - j_);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(j_));
    const RealVector& w = eig.eigenvalues();
    const Index n_minus = static_cast<Index>(std::count_if(w.begin(), w.end(), [](double v) { return v < 0.0; }));
    const Index n_plus = n - n_minus;
    if (n_plus == 0 || n_minus == 0) {
      throw Error(ErrorCode::TrivialEigenspace, "both eigenspaces of J must be nontrivial");
    }
    // eigenvalues are ascending: the -1 block comes first
    basis_minus_ = eig.eigenvectors().leftCols(n_minus);
    basis_plus_ = eig.eigenvectors().rightCols(n_plus);
  }

  /// J = diag(signs), signs in {+1, -1}.
  static KreinStructure diagonal(const RealVector& signs, const Tolerances& tol = {}) {
    return KreinStructure(signs.cast<cplx>().asDiagonal().toDenseMatrix(), tol);
  }

  Index dim() const noexcept { return j_.rows(); }
  const Matrix& J() const noexcept { return j_; }
  const Matrix& P_plus() const noexcept { return p_plus_; }
  const Matrix& P_minus() const noexcept { return p_minus_; }

  /// Orthonormal bases of h+ = ran P+ and h- = ran P-.
  const Matrix& basis_plus() const noexcept { return basis_plus_; }
  const Matrix& basis_minus() const noexcept { return basis_minus_; }
  Index rank_plus() const noexcept { return basis_plus_.cols(); }
  Index rank_minus() const noexcept { return basis_minus_.cols(); }

  /// Unitary Q = [basis_plus | basis_minus]; Q* J Q = diag(I, -I).
  Matrix canonical_basis() const {
    Matrix q(dim(), dim());
    q << basis_plus_, basis_minus_;
    return q;
  }

 private:
  Matrix j_;
  Matrix p_plus_;
  Matrix p_minus_;
  Matrix basis_plus_;
  Matrix basis_minus_;
};

/// Full-column-rank basis of a subspace of C^n.
class SubspaceBasis {
 public:
  explicit SubspaceBasis(Matrix columns, double rank_tol = Tolerances{}.rank)
      : columns_(std::move(columns)) {
    if (columns_.cols() == 0 || columns_.rows() == 0) {
      throw Error(ErrorCode::RankDeficient, "empty subspace basis");
    }
    const RealVector s = singular_values(columns_);
    if (numerical_rank(s, rank_tol) != columns_.cols()) {
      throw Error(ErrorCode::RankDeficient, "basis columns are linearly dependent");
    }
  }

  const Matrix& columns() const noexcept { return columns_; }
  Index dim() const noexcept { return columns_.cols(); }
  Index ambient_dim() const noexcept { return columns_.rows(); }

 private:
  Matrix columns_;
};

enum class SubspaceTag { positive, negative, neutral, indefinite };

inline std::string_view to_string(SubspaceTag tag) {
  switch (tag) {
    case SubspaceTag::positive: return "positive";
    case SubspaceTag::negative: return "negative";
    case SubspaceTag::neutral: return "neutral";
    case SubspaceTag::indefinite: return "indefinite";
  }
  return "unknown";
}

struct SubspaceClass {
  SubspaceTag tag;
  double margin;               ///< smallest |eigenvalue| of B* J B
  RealVector gram_eigenvalues; ///< ascending
};

/// [x, y] = (Jx, y) = y* J x.
inline cplx indefinite_inner(const KreinStructure& ks, const Vector& x, const Vector& y) {
  if (x.size() != ks.dim() || y.size() != ks.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length must equal the Krein space dimension");
  }
  return y.dot(ks.J() * x);
}

/// Indefinite Gram matrix B* J B.
inline Matrix indefinite_gram(const KreinStructure& ks, const SubspaceBasis& b) {
  if (b.ambient_dim() != ks.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "basis ambient dimension differs from J");
  }
  return b.columns().adjoint() * ks.J() * b.columns();
}

/// Sign classification of span(B) from the spectrum of B* J B. The threshold
/// is tol.cls * ||B* B||, so a basis whose Gram vanishes identically is
/// classified as neutral rather than by the sign of rounding noise.
inline SubspaceClass classify_subspace(const KreinStructure& ks, const SubspaceBasis& b,
                                       const Tolerances& tol = {}) {
  const RealVector w = hermitian_eigenvalues(indefinite_gram(ks, b));
  const double scale = spectral_norm(b.columns().adjoint() * b.columns());
  const double thr = tol.cls * scale;

  SubspaceClass out{SubspaceTag::indefinite, w.cwiseAbs().minCoeff(), w};
  if ((w.array() > thr).all()) {
    out.tag = SubspaceTag::positive;
  } else if ((w.array() < -thr).all()) {
    out.tag = SubspaceTag::negative;
  } else if ((w.array().abs() <= thr).all()) {
    out.tag = SubspaceTag::neutral;
  }
  return out;
}

/// J A* J. A is J-self-adjoint iff j_adjoint(A) == A.
inline Matrix j_adjoint(const KreinStructure& ks, const Matrix& a) {
  require_size(a, ks.dim(), "operator");
  return ks.J() * a.adjoint() * ks.J();
}

/// Basis of span(B)^[perp] = ker(B* J).
inline SubspaceBasis j_orthogonal_complement(const KreinStructure& ks, const SubspaceBasis& b,
                                             const Tolerances& tol = {}) {
  if (b.ambient_dim() != ks.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "basis ambient dimension differs from J");
  }
  Matrix ns = null_space(b.columns().adjoint() * ks.J(), tol.rank);
  return SubspaceBasis(std::move(ns), tol.rank);
}

/// Subspace equality by the largest principal angle.
inline bool same_span(const SubspaceBasis& a, const SubspaceBasis& b, double angle_tol,
                      double rank_tol = Tolerances{}.rank) {
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) return false;
  return std::asin(max_principal_angle_sine(a.columns(), b.columns(), rank_tol)) <= angle_tol;
}

}  // namespace krein
