#include "krein/krein_core.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace krein;
using testing::has_code;
using Catch::Matchers::WithinAbs;

namespace {

KreinStructure diag_pm() { return KreinStructure::diagonal(RealVector{{1.0, -1.0}}); }

Vector vec(std::initializer_list<cplx> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (cplx z : v) out(i++) = z;
  return out;
}

Matrix swap2() {
  Matrix p(2, 2);
  p << 0.0, 1.0, 1.0, 0.0;
  return p;
}

}  // namespace

TEST_CASE("structure validation", "[krein_core]") {
  SECTION("projectors") {
    std::mt19937_64 rng(11);
    const auto f = oracle::random_frame(3, 2, rng);
    const KreinStructure ks(f.J);
    CHECK(spectral_norm(ks.P_plus() * ks.P_minus()) <= Tolerances{}.alg);
    CHECK(spectral_norm(ks.P_plus() + ks.P_minus() - identity(5)) <= Tolerances{}.alg);
    CHECK(ks.rank_plus() == 3);
    CHECK(ks.rank_minus() == 2);
    const Matrix q = ks.canonical_basis();
    CHECK(spectral_norm(q.adjoint() * ks.J() * q - oracle::signs(3, 2)) <= 1e-12);
  }
  SECTION("rejections") {
    Matrix nh(2, 2);
    nh << 1.0, 1.0, 0.0, -1.0;
    CHECK_THROWS_MATCHES(KreinStructure(nh), Error,
                         has_code(ErrorCode::NotHermitian));
    Matrix half = 0.5 * identity(2);
    CHECK_THROWS_MATCHES(KreinStructure(half), Error,
                         has_code(ErrorCode::NotInvolution));
    CHECK_THROWS_MATCHES(KreinStructure(identity(3)), Error,
                         has_code(ErrorCode::TrivialEigenspace));
    CHECK_THROWS_AS(KreinStructure(Matrix::Zero(2, 3)), Error);
  }
}

TEST_CASE("indefinite inner product", "[krein_core]") {
  const KreinStructure ks = diag_pm();
  CHECK_THAT(std::abs(indefinite_inner(ks, vec({1, 0}), vec({1, 0})) - 1.0), WithinAbs(0.0, 1e-15));
  CHECK(std::abs(indefinite_inner(ks, vec({1, 1}), vec({1, 1}))) == 0.0);
  CHECK_THAT(std::abs(indefinite_inner(ks, vec({1, 1}), vec({1, -1})) - 2.0), WithinAbs(0.0, 1e-15));
  CHECK_THROWS_AS(indefinite_inner(ks, vec({1, 0, 0}), vec({1, 0})), Error);

  std::mt19937_64 rng(3);
  const auto f = oracle::random_frame(4, 3, rng);
  const KreinStructure big(f.J);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = oracle::gaussian(7, 1, rng);
    const Vector y = oracle::gaussian(7, 1, rng);
    const cplx xy = indefinite_inner(big, x, y);
    const cplx yx = indefinite_inner(big, y, x);
    CHECK(std::abs(xy - std::conj(yx)) <= 1e-12 * x.norm() * y.norm());
    const cplx s(0.3, -1.7);
    CHECK(std::abs(indefinite_inner(big, s * x, y) - s * xy) <= 1e-12 * x.norm() * y.norm() * std::abs(s));
  }
}

TEST_CASE("subspace classification", "[krein_core]") {
  const KreinStructure ks = diag_pm();
  SECTION("axes and neutral line") {
    const auto pos = classify_subspace(ks, SubspaceBasis(vec({1, 0})));
    CHECK(pos.tag == SubspaceTag::positive);
    CHECK_THAT(pos.margin, WithinAbs(1.0, 1e-15));
    CHECK(classify_subspace(ks, SubspaceBasis(vec({0, 1}))).tag == SubspaceTag::negative);
    CHECK(classify_subspace(ks, SubspaceBasis(vec({1, 1}))).tag == SubspaceTag::neutral);
    CHECK(classify_subspace(ks, SubspaceBasis(identity(2))).tag == SubspaceTag::indefinite);
  }
  SECTION("two-point parity") {
    const KreinStructure par(swap2());
    // (left, right) = e + (i/2) R e with e = (1, 1)
    const auto c = classify_subspace(par, SubspaceBasis(vec({cplx(1, -0.5), cplx(1, 0.5)})));
    CHECK(c.tag == SubspaceTag::positive);
    CHECK_THAT(c.margin, WithinAbs(1.5, 1e-14));
    // taken literally, (1, i/2) has 2 Re(conj(1) i/2) = 0
    CHECK(classify_subspace(par, SubspaceBasis(vec({1, cplx(0, 0.5)}))).tag == SubspaceTag::neutral);
  }
  SECTION("canonical blocks of a random J") {
    std::mt19937_64 rng(5);
    const KreinStructure r(oracle::random_frame(3, 4, rng).J);
    const auto p = classify_subspace(r, SubspaceBasis(r.basis_plus()));
    CHECK(p.tag == SubspaceTag::positive);
    CHECK_THAT(p.margin, WithinAbs(1.0, 1e-12));
    CHECK(classify_subspace(r, SubspaceBasis(r.basis_minus())).tag == SubspaceTag::negative);
  }
  SECTION("rank deficiency") {
    Matrix b(2, 2);
    b << 1.0, 2.0, 1.0, 2.0;
    CHECK_THROWS_MATCHES(SubspaceBasis(b), Error,
                         has_code(ErrorCode::RankDeficient));
  }
}

TEST_CASE("J-adjoint", "[krein_core]") {
  const KreinStructure ks = diag_pm();
  CHECK(spectral_norm(j_adjoint(ks, identity(2)) - identity(2)) == 0.0);
  CHECK(spectral_norm(j_adjoint(ks, ks.J()) - ks.J()) == 0.0);
  CHECK(spectral_norm(j_adjoint(ks, oracle::a2()) - oracle::a2()) <= 1e-15);
  CHECK_THROWS_AS(j_adjoint(ks, identity(3)), Error);

  std::mt19937_64 rng(9);
  const KreinStructure r(oracle::random_frame(3, 3, rng).J);
  const Matrix a = oracle::gaussian(6, 6, rng);
  CHECK(spectral_norm(j_adjoint(r, j_adjoint(r, a)) - a) <= Tolerances{}.alg * spectral_norm(a));
}

TEST_CASE("J-orthogonal complement", "[krein_core]") {
  const KreinStructure ks = diag_pm();
  const SubspaceBasis hp(vec({1, 0}));
  CHECK(same_span(j_orthogonal_complement(ks, hp), SubspaceBasis(vec({0, 1})), 1e-12));

  const cplx t(0.4, 0.3);
  const auto comp = j_orthogonal_complement(ks, SubspaceBasis(vec({1, t})));
  CHECK(comp.dim() == 1);
  CHECK(same_span(comp, SubspaceBasis(vec({std::conj(t), 1})), 1e-12));

  std::mt19937_64 rng(17);
  const KreinStructure r(oracle::random_frame(4, 3, rng).J);
  const SubspaceBasis b(oracle::gaussian(7, 3, rng));
  const auto c1 = j_orthogonal_complement(r, b);
  CHECK(c1.dim() == 4);
  CHECK(spectral_norm(b.columns().adjoint() * r.J() * c1.columns()) <= 1e-12 * spectral_norm(b.columns()));
  CHECK(same_span(j_orthogonal_complement(r, c1), b, Tolerances{}.principal_angle));
}
