#pragma once

#include "krein/point_interaction.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace krein {

/// Truncation of the direct sum A_{gamma_1} (+) ... (+) A_{gamma_M}; every
/// block lives on the same grid.
struct DirectSumSpec {
  std::vector<double> gammas;
  SymmetricGrid grid{10.0, 20};

  void validate() const {
    if (gammas.empty()) throw Error(ErrorCode::InvalidArgument, "direct sum needs at least one block");
    for (double g : gammas) require_noncritical(g);
  }
};

/// Block-diagonal assembly of A, C = (+) C_{gamma_i} and T = (+) T_{gamma_i},
/// kept as separate blocks; the fundamental symmetry is the block parity.
struct Truncation {
  SymmetricGrid grid;
  std::vector<double> gammas;
  std::vector<Matrix> A;
  std::vector<Matrix> C;
  std::vector<Matrix> T;
  double norm_T = 0.0;  ///< max over blocks of the spectral norm
  double norm_C = 0.0;
  double norm_A = 0.0;
  double cond_F = 1.0;  ///< lambda_max / lambda_min of F = JC over all blocks

  Index blocks() const noexcept { return static_cast<Index>(gammas.size()); }
  Index dim() const noexcept { return blocks() * grid.dim(); }
};

inline Truncation build_truncation(const DirectSumSpec& spec) {
  spec.validate();
  Truncation out{spec.grid, spec.gammas, {}, {}, {}};
  const Matrix p = parity_matrix(spec.grid);
  double f_max = 0.0;
  double f_min = std::numeric_limits<double>::infinity();
  for (double gamma : spec.gammas) {
    GammaModel m = make_gamma_model(spec.grid, gamma);
    out.norm_A = std::max(out.norm_A, spectral_norm(m.A));
    out.norm_C = std::max(out.norm_C, spectral_norm(*m.C));
    out.norm_T = std::max(out.norm_T, spectral_norm(*m.T));
    const RealVector f = hermitian_eigenvalues(p * *m.C);
    f_min = std::min(f_min, f(0));
    f_max = std::max(f_max, f(f.size() - 1));
    out.A.push_back(std::move(m.A));
    out.C.push_back(std::move(*m.C));
    out.T.push_back(std::move(*m.T));
  }
  out.cond_F = f_max / f_min;
  return out;
}

/// Dense assembly of a block-diagonal family.
inline Matrix assemble_dense(const std::vector<Matrix>& blocks) {
  Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix out = Matrix::Zero(n, n);
  Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

struct TruncationReport {
  CReport global;
  std::vector<CReport> blocks;
  /// Absolute defects; for block-diagonal operators the global value is the
  /// maximum over blocks.
  double max_involution = 0.0;   ///< ||C^2 - I||
  double max_hermiticity = 0.0;  ///< ||F - F*||
  double max_commutation = 0.0;  ///< ||AC - CA||
  double min_margin = std::numeric_limits<double>::infinity();
};

/// Verifies every block against the block parity and aggregates the
/// defects with global norms.
inline TruncationReport verify_truncation(const Truncation& tr, const Tolerances& tol = {}) {
  const KreinStructure ks = parity_structure(tr.grid, tol);
  const Matrix id = identity(tr.grid.dim());
  TruncationReport out;
  double norm_f = 0.0;
  for (Index i = 0; i < tr.blocks(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const JSelfAdjointOperator a(ks, tr.A[k], tol.disc);
    out.blocks.push_back(verify_c_symmetry(ks, a, tr.C[k], tol));

    const Matrix& c = tr.C[k];
    const Matrix f = ks.J() * c;
    out.max_involution = std::max(out.max_involution, spectral_norm(c * c - id));
    out.max_hermiticity = std::max(out.max_hermiticity, spectral_norm(f - f.adjoint()));
    out.max_commutation = std::max(out.max_commutation, spectral_norm(tr.A[k] * c - c * tr.A[k]));
    out.min_margin = std::min(out.min_margin, hermitian_eigenvalues(f)(0));
    norm_f = std::max(norm_f, spectral_norm(f));
  }

  CReport& g = out.global;
  g.norm_c = tr.norm_C;
  g.involution_defect = relative(out.max_involution, tr.norm_C * tr.norm_C);
  g.hermiticity_defect = relative(out.max_hermiticity, norm_f);
  g.positivity_margin = out.min_margin;
  g.commutation_defect = relative(out.max_commutation, tr.norm_A * tr.norm_C);
  if (g.involution_defect > tol.ver) {
    g.failed_clause = CClause::involution;
  } else if (g.hermiticity_defect > tol.ver || !(g.positivity_margin > 0.0)) {
    g.failed_clause = CClause::positivity;
  } else if (*g.commutation_defect > tol.ver) {
    g.failed_clause = CClause::commutation;
  }
  g.passed = g.failed_clause == CClause::none;
  return out;
}

/// Coupling sequences accumulating at 2.
enum class GammaRule {
  above,  ///< gamma_i = 2 + 1/i
  below,  ///< gamma_i = 2 - 1/(i + 1)
};

inline std::string_view to_string(GammaRule r) { return r == GammaRule::above ? "above" : "below"; }

inline GammaRule parse_gamma_rule(std::string_view name) {
  if (name == "above") return GammaRule::above;
  if (name == "below") return GammaRule::below;
  throw Error(ErrorCode::InvalidArgument, "unknown gamma rule '" + std::string(name) + "'");
}

/// i-th coupling, i = 1, 2, ...
inline double rule_gamma(GammaRule rule, Index i) {
  const auto x = static_cast<double>(i);
  return rule == GammaRule::above ? 2.0 + 1.0 / x : 2.0 - 1.0 / (x + 1.0);
}

inline std::vector<double> rule_gammas(GammaRule rule, Index m) {
  std::vector<double> out;
  for (Index i = 1; i <= m; ++i) out.push_back(rule_gamma(rule, i));
  return out;
}

struct UnboundednessRow {
  Index M = 0;
  double norm_T = 0.0;
  double norm_C = 0.0;
  double cond_F = 0.0;
  bool verified = false;  ///< the truncation passes verify_c_symmetry
};

struct UnboundednessTable {
  std::vector<UnboundednessRow> rows;
  /// ||T_M|| strictly increasing and ||C_M|| strictly increasing along the
  /// rows (M values taken in the given order).
  bool monotone = true;
};

inline UnboundednessTable unboundedness_table(GammaRule rule, const std::vector<Index>& m_values,
                                              const SymmetricGrid& grid, const Tolerances& tol = {}) {
  UnboundednessTable out;
  for (Index m : m_values) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "M must be >= 1");
    const Truncation tr = build_truncation(DirectSumSpec{rule_gammas(rule, m), grid});
    const TruncationReport rep = verify_truncation(tr, tol);
    UnboundednessRow row{m, tr.norm_T, tr.norm_C, tr.cond_F, rep.global.passed};
    if (!out.rows.empty()) {
      const auto& prev = out.rows.back();
      out.monotone = out.monotone && row.norm_T > prev.norm_T && row.norm_C > prev.norm_C;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace krein
