#pragma once

#include "krein/csymmetry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace krein {

/// Staggered grid on [-L, L] symmetric under x -> -x that avoids the origin:
/// x = +-(h/2 + (k-1) h), k = 1..N, h = L/N, stored in ascending order.
///
/// Index layout: the left half-line occupies 0..N-1 (x < 0), the right half
/// N..2N-1. The k-th node away from the origin is right(k) on x > 0 and
/// left(k) on x < 0, k = 1..N.
class SymmetricGrid {
 public:
  SymmetricGrid(double half_length, Index points_per_side) : L_(half_length), N_(points_per_side) {
    if (!(half_length > 0.0) || !std::isfinite(half_length)) {
      throw Error(ErrorCode::InvalidGrid, "half-length must be positive");
    }
    if (points_per_side < 1) throw Error(ErrorCode::InvalidGrid, "need at least one point per side");
  }

  double half_length() const noexcept { return L_; }
  Index points_per_side() const noexcept { return N_; }
  double h() const noexcept { return L_ / static_cast<double>(N_); }
  Index dim() const noexcept { return 2 * N_; }

  Index right(Index k) const noexcept { return N_ - 1 + k; }
  Index left(Index k) const noexcept { return N_ - k; }
  Index mirror(Index i) const noexcept { return 2 * N_ - 1 - i; }

  RealVector nodes() const {
    RealVector x(dim());
    for (Index k = 1; k <= N_; ++k) {
      const double xk = h() * (static_cast<double>(k) - 0.5);
      x(right(k)) = xk;
      x(left(k)) = -xk;
    }
    return x;
  }

 private:
  double L_;
  Index N_;
};

/// Grid parity (Pf)(x) = f(-x): index reversal.
inline Matrix parity_matrix(const SymmetricGrid& g) {
  Matrix p = Matrix::Zero(g.dim(), g.dim());
  for (Index i = 0; i < g.dim(); ++i) p(i, g.mirror(i)) = 1.0;
  return p;
}

/// (Rf)(x) = sign(x) f(x).
inline Matrix sign_matrix(const SymmetricGrid& g) {
  Matrix r = Matrix::Zero(g.dim(), g.dim());
  for (Index k = 1; k <= g.points_per_side(); ++k) {
    r(g.right(k), g.right(k)) = 1.0;
    r(g.left(k), g.left(k)) = -1.0;
  }
  return r;
}

inline KreinStructure parity_structure(const SymmetricGrid& g, const Tolerances& tol = {}) {
  return KreinStructure(parity_matrix(g), tol);
}

inline constexpr double gamma_critical_tol = 1e-12;

inline bool is_critical(double gamma) noexcept { return std::abs(gamma - 2.0) <= gamma_critical_tol; }

inline void require_gamma(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be finite and >= 0");
  }
}

inline void require_noncritical(double gamma) {
  require_gamma(gamma);
  if (is_critical(gamma)) throw Error(ErrorCode::GammaCritical, "gamma = 2 has no C-symmetry");
}

/// alpha = (g^2 + 4) / |g^2 - 4|, beta = 4 g / |g^2 - 4|; alpha^2 - beta^2 = 1.
struct HyperbolicCoords {
  double alpha;
  double beta;
};

inline HyperbolicCoords hyperbolic_coords(double gamma) {
  require_noncritical(gamma);
  const double d = std::abs(gamma * gamma - 4.0);
  return {(gamma * gamma + 4.0) / d, 4.0 * gamma / d};
}

/// C_gamma = alpha P + i beta R.
inline Matrix build_c_gamma(const SymmetricGrid& g, double gamma) {
  const auto [alpha, beta] = hyperbolic_coords(gamma);
  return alpha * parity_matrix(g) + cplx(0.0, beta) * sign_matrix(g);
}

/// Coefficient t of T_gamma = i t R P: 2/gamma for gamma > 2, gamma/2 below.
inline double transition_scale(double gamma) {
  require_noncritical(gamma);
  return gamma > 2.0 ? 2.0 / gamma : gamma / 2.0;
}

inline TransitionOperator build_t_gamma(const KreinStructure& ks, const SymmetricGrid& g, double gamma,
                                        const Tolerances& tol = {}) {
  return validate_transition(ks, cplx(0.0, transition_scale(gamma)) * sign_matrix(g) * parity_matrix(g),
                             tol);
}

/// Ghost-value map at the origin. With f_k the right-side values and u_k the
/// left-side values mirrored (u_k = f(-x_k)), the ghosts f_0 = f(-h/2) of the
/// right function and u_0 of the left one satisfy (f_0, u_0) = G (f_1, u_1).
///
/// For gamma != 2 the ghosts solve the centered interface conditions
///   (1 - i g/2) (f_0 + f_1)/2 = (1 + i g/2) (u_0 + u_1)/2,
///   (1 + i g/2) (f_1 - f_0)/h = -(1 - i g/2) (u_1 - u_0)/h,
/// giving G = [[i s, 1], [1, -i s]] / r with 1/r = (4 + g^2)/(4 - g^2) and
/// s/r = 4g/(4 - g^2). At gamma = 2 that system is singular (r = 0); the
/// nilpotent direction [[i, 1], [1, -i]] is kept at unit scale instead.
inline Eigen::Matrix2cd interface_ghost_map(double gamma) {
  require_gamma(gamma);
  const cplx i{0.0, 1.0};
  Eigen::Matrix2cd g;
  if (is_critical(gamma)) {
    g << i, 1.0, 1.0, -i;
    return g;
  }
  const double d = 4.0 - gamma * gamma;
  const double inv_r = (4.0 + gamma * gamma) / d;
  const double s_over_r = 4.0 * gamma / d;
  g << i * s_over_r, inv_r, inv_r, -i * s_over_r;
  return g;
}

/// Three-point discretization of -d^2/dx^2 + i gamma [<delta'_ex, .> delta + <delta_ex, .> delta']
/// on the staggered grid: Dirichlet at +-L (mirror ghost), interface
/// conditions at the origin through interface_ghost_map.
inline Matrix assemble_a_gamma(const SymmetricGrid& g, double gamma) {
  const Eigen::Matrix2cd ghost = interface_ghost_map(gamma);
  const Index n = g.points_per_side();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  Matrix a = Matrix::Zero(g.dim(), g.dim());

  auto half_line = [&](auto index) {
    for (Index k = 1; k <= n; ++k) {
      const Index i = index(k);
      a(i, i) = 2.0 * inv_h2;
      if (k > 1) a(i, index(k - 1)) = -inv_h2;
      if (k < n) a(i, index(k + 1)) = -inv_h2;
      if (k == n) a(i, i) += inv_h2;
    }
  };
  half_line([&](Index k) { return g.right(k); });
  half_line([&](Index k) { return g.left(k); });

  const Index r1 = g.right(1);
  const Index l1 = g.left(1);
  a(r1, r1) -= ghost(0, 0) * inv_h2;
  a(r1, l1) -= ghost(0, 1) * inv_h2;
  a(l1, r1) -= ghost(1, 0) * inv_h2;
  a(l1, l1) -= ghost(1, 1) * inv_h2;
  return a;
}

/// A_h as a P_h-self-adjoint operator; the defect is checked at tol.disc.
inline JSelfAdjointOperator build_a_gamma(const KreinStructure& ks, const SymmetricGrid& g, double gamma,
                                          const Tolerances& tol = {}) {
  return JSelfAdjointOperator(ks, assemble_a_gamma(g, gamma), tol.disc);
}

/// ||PT A - A PT|| / ||A|| with T entrywise conjugation.
inline double pt_commutation_defect(const SymmetricGrid& g, const Matrix& a) {
  const Matrix p = parity_matrix(g);
  return relative(spectral_norm(p * a.conjugate() - a * p), spectral_norm(a));
}

/// Unit grid-even and grid-odd vectors, one per k.
inline Matrix even_basis(const SymmetricGrid& g) {
  Matrix e = Matrix::Zero(g.dim(), g.points_per_side());
  const double c = 1.0 / std::sqrt(2.0);
  for (Index k = 1; k <= g.points_per_side(); ++k) {
    e(g.right(k), k - 1) = c;
    e(g.left(k), k - 1) = c;
  }
  return e;
}

inline Matrix odd_basis(const SymmetricGrid& g) { return sign_matrix(g) * even_basis(g); }

/// L+ = {e + i t R e}, L- = {o - i t R o}, t = ||T_gamma|| = min(gamma/2, 2/gamma).
inline DualPair dual_pair_gamma(const KreinStructure& ks, const SymmetricGrid& g, double gamma,
                                const Tolerances& tol = {}) {
  TransitionOperator t = build_t_gamma(ks, g, gamma, tol);
  const double s = transition_scale(gamma);
  const Matrix r = sign_matrix(g);
  const Matrix e = even_basis(g);
  const Matrix o = odd_basis(g);
  ObliqueProjectors proj = oblique_projectors(ks, t, tol);
  return DualPair{SubspaceBasis(e + cplx(0.0, s) * (r * e), tol.rank),
                  SubspaceBasis(o - cplx(0.0, s) * (r * o), tol.rank), std::move(t),
                  std::move(proj.plus), std::move(proj.minus), proj.near_singular};
}

/// The neutral subspace {e + i R e : e even} at gamma = 2.
inline SubspaceBasis neutral_subspace_at_2(const SymmetricGrid& g) {
  const Matrix e = even_basis(g);
  return SubspaceBasis(e + cplx(0.0, 1.0) * (sign_matrix(g) * e));
}

/// The same subspace built from odd vectors: {o - i R o : o odd}.
inline SubspaceBasis neutral_subspace_at_2_from_odd(const SymmetricGrid& g) {
  const Matrix o = odd_basis(g);
  return SubspaceBasis(o - cplx(0.0, 1.0) * (sign_matrix(g) * o));
}

/// Grid realization of the point-interaction model at one coupling.
struct GammaModel {
  SymmetricGrid grid;
  double gamma;
  Matrix A;
  Matrix P;
  Matrix R;
  std::optional<HyperbolicCoords> coords;  ///< empty at gamma = 2
  std::optional<Matrix> C;
  std::optional<Matrix> T;
};

inline GammaModel make_gamma_model(const SymmetricGrid& g, double gamma) {
  require_gamma(gamma);
  GammaModel m{g, gamma, assemble_a_gamma(g, gamma), parity_matrix(g), sign_matrix(g), {}, {}, {}};
  if (!is_critical(gamma)) {
    m.coords = hyperbolic_coords(gamma);
    m.C = build_c_gamma(g, gamma);
    m.T = cplx(0.0, transition_scale(gamma)) * m.R * m.P;
  }
  return m;
}

struct SweepRow {
  double gamma = 0.0;
  double max_im_lambda = 0.0;
  double norm_C = std::numeric_limits<double>::infinity();  ///< inf at gamma = 2
  double cond_F = std::numeric_limits<double>::infinity();
  std::string status;
};

inline SweepRow sweep_row(const KreinStructure& ks, const SymmetricGrid& g, double gamma,
                          const Tolerances& tol) {
  require_gamma(gamma);
  SweepRow row;
  row.gamma = gamma;
  const JSelfAdjointOperator a(ks, assemble_a_gamma(g, gamma), tol.disc);
  const Construction built = construct_c(ks, a, tol);
  row.max_im_lambda = built.max_imag;
  row.status = std::string(to_string(built.status));
  if (!is_critical(gamma)) {
    const Matrix c = build_c_gamma(g, gamma);
    row.norm_C = spectral_norm(c);
    const RealVector f = hermitian_eigenvalues(ks.J() * c);
    row.cond_F = f(f.size() - 1) / f(0);
  }
  return row;
}

/// Rows are computed on up to `threads` workers and returned in input order.
inline std::vector<SweepRow> gamma_sweep(const SymmetricGrid& g, const std::vector<double>& gammas,
                                         const Tolerances& tol = {}, unsigned threads = 1) {
  for (double gamma : gammas) require_gamma(gamma);
  const KreinStructure ks = parity_structure(g, tol);
  std::vector<SweepRow> rows(gammas.size());
  std::vector<std::exception_ptr> errors(gammas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < gammas.size(); i = next++) {
      try {
        rows[i] = sweep_row(ks, g, gammas[i], tol);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(gammas.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace krein
