#pragma once

#include "krein/transition.hpp"

#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

namespace krein {

enum class ConstructStatus {
  ok,
  complex_spectrum,
  neutral_eigenvector,
  defective,
  dimension_mismatch,
  verification_failed,
};

inline std::string_view to_string(ConstructStatus s) {
  switch (s) {
    case ConstructStatus::ok: return "ok";
    case ConstructStatus::complex_spectrum: return "ComplexSpectrum";
    case ConstructStatus::neutral_eigenvector: return "NeutralEigenvector";
    case ConstructStatus::defective: return "Defective";
    case ConstructStatus::dimension_mismatch: return "DimensionMismatch";
    case ConstructStatus::verification_failed: return "VerificationFailed";
  }
  return "unknown";
}

/// Outcome of construct_c. `c` is set only when status == ok.
struct Construction {
  ConstructStatus status = ConstructStatus::ok;
  std::optional<COperator> c;
  std::optional<cplx> offending_eigenvalue;
  Vector eigenvalues;
  double max_imag = 0.0;            ///< max |Im lambda| over the spectrum
  double eigvec_cond = 1.0;         ///< condition number of the unit-column eigenvector matrix
  double neutrality_margin = 0.0;   ///< min |[v,v]| / ||v||^2 over the split eigenbasis
  double cross_gram = 0.0;          ///< ||L+* J L-|| for unit columns
  Index dim_plus = 0;
  Index dim_minus = 0;

  bool ok() const noexcept { return status == ConstructStatus::ok; }
};

/// Builds a C-symmetry for a J-self-adjoint A from a J-orthogonal invariant
/// dual pair, or reports why none can be built.
///
/// 1. dense eigendecomposition of A;
/// 2. reject Jordan-type pairs (close eigenvalues with nearly parallel
///    eigenvectors), non-real spectrum (|Im lambda| > tol.spec * ||A||) and
///    ill-conditioned eigenbases (cond > tol.cond_cap);
/// 3. group numerically equal eigenvalues; a group whose eigenvectors are
///    nearly dependent is a Jordan block (Defective). Otherwise diagonalize the
///    indefinite Gram of the eigenspace, rejecting neutral directions
///    (|[v,v]| < tol.neutral ||v||^2);
/// 4. L+ / L- collect the positive / negative directions, whose dimensions
///    must match rank P+ / rank P-;
/// 5. C = P_{L+} - P_{L-} with P_L = L (L* J L)^{-1} L* J, verified against A.
inline Construction construct_c(const KreinStructure& ks, const JSelfAdjointOperator& a,
                                const Tolerances& tol = {}) {
  Construction out;
  const Index n = ks.dim();
  if (a.matrix().rows() != n) {
    out.status = ConstructStatus::dimension_mismatch;
    return out;
  }
  const double a_norm = std::max(a.norm(), 1e-300);

  Eigen::ComplexEigenSolver<Matrix> es(a.matrix());
  out.eigenvalues = es.eigenvalues();
  Matrix v = es.eigenvectors();
  v.colwise().normalize();

  // A Jordan block splits under rounding into eigenvalues about
  // sqrt(eps) ||A|| apart, possibly off the real axis, whose eigenvectors are
  // nearly parallel.
  const double jordan = std::sqrt(tol.spec);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(out.eigenvalues(i) - out.eigenvalues(j)) > jordan * a_norm) continue;
      const double c = std::min(1.0, std::abs(v.col(i).dot(v.col(j))));
      if (std::sqrt(1.0 - c * c) < jordan) {
        out.status = ConstructStatus::defective;
        out.offending_eigenvalue = out.eigenvalues(i);
        return out;
      }
    }
  }

  Index worst = 0;
  out.eigenvalues.imag().cwiseAbs().maxCoeff(&worst);
  out.max_imag = std::abs(out.eigenvalues(worst).imag());
  if (out.max_imag > tol.spec * a_norm) {
    out.status = ConstructStatus::complex_spectrum;
    out.offending_eigenvalue = out.eigenvalues(worst);
    return out;
  }

  out.eigvec_cond = condition_number(v);
  if (!(out.eigvec_cond <= tol.cond_cap)) {
    out.status = ConstructStatus::defective;
    return out;
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index i, Index j) {
    return out.eigenvalues(i).real() < out.eigenvalues(j).real();
  });

  std::vector<Vector> plus;
  std::vector<Vector> minus;
  out.neutrality_margin = std::numeric_limits<double>::infinity();
  for (std::size_t first = 0; first < order.size();) {
    std::size_t last = first + 1;
    while (last < order.size() &&
           out.eigenvalues(order[last]).real() - out.eigenvalues(order[last - 1]).real() <=
               tol.spec * a_norm) {
      ++last;
    }
    Matrix block(n, static_cast<Index>(last - first));
    for (std::size_t k = first; k < last; ++k) block.col(static_cast<Index>(k - first)) = v.col(order[k]);
    if (block.cols() > 1) {
      const RealVector sv = singular_values(block);
      if (sv(sv.size() - 1) < std::sqrt(tol.spec) * sv(0)) {
        out.status = ConstructStatus::defective;
        out.offending_eigenvalue = out.eigenvalues(order[first]);
        return out;
      }
    }

    Eigen::SelfAdjointEigenSolver<Matrix> gram(hermitian_part(block.adjoint() * ks.J() * block));
    const Matrix split = block * gram.eigenvectors();
    for (Index k = 0; k < split.cols(); ++k) {
      const double ratio = gram.eigenvalues()(k) / split.col(k).squaredNorm();
      if (std::abs(ratio) < out.neutrality_margin) {
        out.neutrality_margin = std::abs(ratio);
        if (out.neutrality_margin < tol.neutral) {
          out.offending_eigenvalue = out.eigenvalues(order[first]);
        }
      }
      (ratio > 0.0 ? plus : minus).push_back(split.col(k).normalized());
    }
    first = last;
  }
  if (out.neutrality_margin < tol.neutral) {
    out.status = ConstructStatus::neutral_eigenvector;
    return out;
  }

  out.dim_plus = static_cast<Index>(plus.size());
  out.dim_minus = static_cast<Index>(minus.size());
  if (out.dim_plus != ks.rank_plus() || out.dim_minus != ks.rank_minus()) {
    out.status = ConstructStatus::dimension_mismatch;
    return out;
  }

  Matrix lp(n, out.dim_plus);
  Matrix lm(n, out.dim_minus);
  for (Index k = 0; k < out.dim_plus; ++k) lp.col(k) = plus[static_cast<std::size_t>(k)];
  for (Index k = 0; k < out.dim_minus; ++k) lm.col(k) = minus[static_cast<std::size_t>(k)];
  out.cross_gram = spectral_norm(lp.adjoint() * ks.J() * lm);

  // P_{L+-} = L (L* J L)^{-1} L* J, so JC is Hermitian by construction
  const Matrix jlp = ks.J() * lp;
  const Matrix jlm = ks.J() * lm;
  const LinearSolve sp = solve(hermitian_part(lp.adjoint() * jlp), jlp.adjoint());
  const LinearSolve sm = solve(hermitian_part(lm.adjoint() * jlm), jlm.adjoint());

  COperator c;
  c.C = lp * sp.x - lm * sm.x;
  c.report = verify_c_symmetry(ks, a, c.C, tol);
  c.cond_estimate = out.eigvec_cond;
  c.near_singular = std::max(sp.relative_residual, sm.relative_residual) > tol.solve_residual;
  if (!c.report.passed) {
    out.status = ConstructStatus::verification_failed;
    return out;
  }
  out.c = std::move(c);
  return out;
}

/// (f, g)_C = [Cf, g] restricted to span(B): G(i, j) = (JC b_j, b_i).
inline Matrix c_inner_gram(const KreinStructure& ks, const Matrix& c, const SubspaceBasis& b) {
  require_size(c, ks.dim(), "C");
  if (b.ambient_dim() != ks.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "basis ambient dimension differs from J");
  }
  return b.columns().adjoint() * ks.J() * c * b.columns();
}

struct Hermitization {
  Matrix H;
  Matrix sqrt_F;  ///< principal square root of F = JC
  double hermitian_defect = 0.0;  ///< ||H - H*|| / ||H||
};

/// H = sqrt(F) A sqrt(F)^{-1}, F = JC. The square root and its inverse come
/// from the Hermitian eigendecomposition of F.
inline Hermitization hermitize(const KreinStructure& ks, const Matrix& a, const Matrix& c) {
  require_size(a, ks.dim(), "A");
  require_size(c, ks.dim(), "C");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(ks.J() * c));
  const RealVector& w = eig.eigenvalues();
  if (!(w(0) > 0.0)) {
    throw Error(ErrorCode::FNotPositive, "lambda_min(JC) = " + std::to_string(w(0)));
  }
  const Matrix& q = eig.eigenvectors();
  const RealVector root = w.cwiseSqrt();

  Hermitization out;
  out.sqrt_F = q * root.cast<cplx>().asDiagonal() * q.adjoint();
  const Matrix inv_root = q * root.cwiseInverse().cast<cplx>().asDiagonal() * q.adjoint();
  out.H = out.sqrt_F * a * inv_root;
  out.hermitian_defect = relative(spectral_norm(out.H - out.H.adjoint()), spectral_norm(out.H));
  return out;
}

/// U = 1/2 [(I + C) P+ + (I - C) P-]; satisfies CU = UJ and maps h+- onto L+-.
inline Matrix foldy_wouthuysen(const KreinStructure& ks, const Matrix& c) {
  require_size(c, ks.dim(), "C");
  const Matrix id = identity(ks.dim());
  Matrix u = 0.5 * ((id + c) * ks.P_plus() + (id - c) * ks.P_minus());
  if (!std::isfinite(condition_number(u))) {
    throw Error(ErrorCode::SingularTransform, "U is singular");
  }
  return u;
}

struct BlockDiagonalization {
  Matrix A_pp;  ///< U^{-1} A U restricted to h+ (canonical basis)
  Matrix A_mm;  ///< U^{-1} A U restricted to h-
  double offdiag_residual = 0.0;      ///< norm of the off-diagonal blocks
  double relative_residual = 0.0;     ///< offdiag_residual / ||A||
  double intertwining_residual = 0.0; ///< ||CU - UJ|| / ||U||
};

inline BlockDiagonalization block_diagonalize(const KreinStructure& ks, const Matrix& a, const Matrix& c) {
  require_size(a, ks.dim(), "A");
  const Matrix u = foldy_wouthuysen(ks, c);
  const Matrix q = ks.canonical_basis();
  const Matrix b = q.adjoint() * solve(u, a * u).x * q;

  const Index np = ks.rank_plus();
  const Index nm = ks.rank_minus();
  BlockDiagonalization out;
  out.A_pp = b.topLeftCorner(np, np);
  out.A_mm = b.bottomRightCorner(nm, nm);
  out.offdiag_residual =
      std::max(spectral_norm(b.topRightCorner(np, nm)), spectral_norm(b.bottomLeftCorner(nm, np)));
  out.relative_residual = relative(out.offdiag_residual, spectral_norm(a));
  out.intertwining_residual = relative(spectral_norm(c * u - u * ks.J()), spectral_norm(u));
  return out;
}

/// C* as a C-symmetry of A*, with its own verification report.
inline COperator adjoint_c_symmetry(const KreinStructure& ks, const JSelfAdjointOperator& a,
                                    const Matrix& c, const Tolerances& tol = {}) {
  require_size(c, ks.dim(), "C");
  const JSelfAdjointOperator a_star(ks, a.matrix().adjoint(), std::numeric_limits<double>::infinity());
  COperator out;
  out.C = c.adjoint();
  out.report = verify_c_symmetry(ks, a_star, out.C, tol);
  return out;
}

}  // namespace krein
