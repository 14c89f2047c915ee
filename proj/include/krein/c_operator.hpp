#pragma once

#include "krein/krein_core.hpp"

#include <optional>
#include <string_view>
#include <utility>

namespace krein {

/// A J-self-adjoint matrix (A* J = J A) together with its measured defect
/// ||A* J - J A|| / ||A||.
class JSelfAdjointOperator {
 public:
  /// Throws NotJSelfAdjoint when the relative defect exceeds rel_tol.
  JSelfAdjointOperator(const KreinStructure& ks, Matrix a, double rel_tol = Tolerances{}.ver)
      : a_(std::move(a)) {
    require_size(a_, ks.dim(), "operator A");
    norm_ = spectral_norm(a_);
    j_defect_ = spectral_norm(a_.adjoint() * ks.J() - ks.J() * a_);
    if (j_defect_ > rel_tol * std::max(norm_, 1e-300)) {
      throw Error(ErrorCode::NotJSelfAdjoint,
                  "||A*J - JA|| / ||A|| = " + std::to_string(relative(j_defect_, norm_)));
    }
  }

  const Matrix& matrix() const noexcept { return a_; }
  double norm() const noexcept { return norm_; }
  double j_defect() const noexcept { return j_defect_; }
  double relative_j_defect() const noexcept { return relative(j_defect_, norm_); }

 private:
  Matrix a_;
  double norm_ = 0.0;
  double j_defect_ = 0.0;
};

/// Which clause of the C-symmetry definition failed: (i) C^2 = I,
/// (ii) JC > 0, (iii) AC = CA.
enum class CClause { none, involution, positivity, commutation };

inline std::string_view to_string(CClause c) {
  switch (c) {
    case CClause::none: return "none";
    case CClause::involution: return "(i) C^2 = I";
    case CClause::positivity: return "(ii) JC > 0";
    case CClause::commutation: return "(iii) AC = CA";
  }
  return "unknown";
}

struct CReport {
  double involution_defect = 0.0;   ///< ||C^2 - I|| / ||C||^2
  double hermiticity_defect = 0.0;  ///< ||F - F*|| / ||F||, F = JC
  double positivity_margin = 0.0;   ///< lambda_min of the Hermitian part of F
  std::optional<double> commutation_defect;  ///< ||AC - CA|| / (||A|| ||C||)
  double norm_c = 0.0;
  bool passed = false;
  CClause failed_clause = CClause::none;
};

namespace detail {

inline CReport check_c_clauses(const KreinStructure& ks, const Matrix& c, const Matrix* a,
                               double a_norm, const Tolerances& tol) {
  require_size(c, ks.dim(), "C");
  CReport r;
  r.norm_c = spectral_norm(c);
  r.involution_defect = relative(spectral_norm(c * c - identity(ks.dim())), r.norm_c * r.norm_c);

  const Matrix f = ks.J() * c;
  r.hermiticity_defect = relative(spectral_norm(f - f.adjoint()), spectral_norm(f));
  r.positivity_margin = hermitian_eigenvalues(f)(0);

  if (a != nullptr) {
    r.commutation_defect =
        relative(spectral_norm(*a * c - c * *a), std::max(a_norm, 1e-300) * r.norm_c);
  }

  if (r.involution_defect > tol.ver) {
    r.failed_clause = CClause::involution;
  } else if (r.hermiticity_defect > tol.ver || !(r.positivity_margin > 0.0)) {
    r.failed_clause = CClause::positivity;
  } else if (r.commutation_defect && *r.commutation_defect > tol.ver) {
    r.failed_clause = CClause::commutation;
  }
  r.passed = r.failed_clause == CClause::none;
  return r;
}

}  // namespace detail

/// Checks the three C-symmetry clauses for the pair (A, C). Never throws on a
/// failed clause; only dimension errors throw.
inline CReport verify_c_symmetry(const KreinStructure& ks, const JSelfAdjointOperator& a,
                                 const Matrix& c, const Tolerances& tol = {}) {
  return detail::check_c_clauses(ks, c, &a.matrix(), a.norm(), tol);
}

/// Clauses (i) and (ii) only.
inline CReport check_c_operator(const KreinStructure& ks, const Matrix& c, const Tolerances& tol = {}) {
  return detail::check_c_clauses(ks, c, nullptr, 0.0, tol);
}

/// A candidate C-operator with its verification report.
struct COperator {
  Matrix C;
  CReport report;
  double cond_estimate = 1.0;  ///< condition number of the transform C was built from
  bool near_singular = false;
};

}  // namespace krein
