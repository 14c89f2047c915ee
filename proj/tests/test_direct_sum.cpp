#include "krein/direct_sum.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace krein;
using testing::has_code;

TEST_CASE("single block reduces to the point-interaction model", "[direct_sum]") {
  const SymmetricGrid g(5.0, 10);
  const Truncation tr = build_truncation(DirectSumSpec{{4.0}, g});
  REQUIRE(tr.blocks() == 1);
  CHECK(tr.dim() == g.dim());
  CHECK(spectral_norm(tr.C[0] - build_c_gamma(g, 4.0)) == 0.0);
  CHECK(spectral_norm(tr.A[0] - assemble_a_gamma(g, 4.0)) == 0.0);
  CHECK(std::abs(tr.norm_C - 3.0) <= 1e-13);
  CHECK(std::abs(tr.norm_T - 0.5) <= 1e-15);
  CHECK(verify_truncation(tr).global.passed);
}

TEST_CASE("blockwise and dense assembly agree", "[direct_sum]") {
  const SymmetricGrid g(3.0, 4);
  const std::vector<double> gammas{0.5, 2.5, 3.0};
  const Truncation tr = build_truncation(DirectSumSpec{gammas, g});
  const TruncationReport rep = verify_truncation(tr);
  REQUIRE(rep.blocks.size() == 3);

  const Matrix a = assemble_dense(tr.A);
  const Matrix c = assemble_dense(tr.C);
  const Matrix t = assemble_dense(tr.T);
  std::vector<Matrix> parities(3, parity_matrix(g));
  const KreinStructure ks(assemble_dense(parities));
  const CReport dense = verify_c_symmetry(ks, JSelfAdjointOperator(ks, a, 1e-12), c);
  CHECK(dense.passed);
  CHECK(rep.global.passed);
  CHECK(std::abs(dense.involution_defect - rep.global.involution_defect) <= 1e-15);
  CHECK(std::abs(*dense.commutation_defect - *rep.global.commutation_defect) <= 1e-15);
  CHECK(std::abs(dense.positivity_margin - rep.global.positivity_margin) <= 1e-12);

  CHECK(std::abs(spectral_norm(c) - tr.norm_C) <= 1e-10 * tr.norm_C);
  CHECK(std::abs(spectral_norm(t) - tr.norm_T) <= 1e-12);
  // the dense C is the C of the dense T
  CHECK(spectral_norm(c - c_from_transition(ks, validate_transition(ks, t)).C) <= 1e-10 * tr.norm_C);
  // the dense direct sum is block-diagonal
  CHECK(a.block(0, g.dim(), g.dim(), g.dim()).norm() == 0.0);
}

TEST_CASE("closed-form norms of accumulating couplings", "[direct_sum]") {
  const SymmetricGrid g(10.0, 20);
  for (Index m : {1, 2, 10, 100}) {
    CAPTURE(m);
    const Truncation tr = build_truncation(DirectSumSpec{rule_gammas(GammaRule::above, m), g});
    const double md = static_cast<double>(m);
    CHECK(std::abs(tr.norm_C - (4.0 * md + 1.0)) <= 1e-9 * (4.0 * md + 1.0));
    CHECK(std::abs(tr.norm_T - 2.0 * md / (2.0 * md + 1.0)) <= 1e-9);
    CHECK(std::abs(tr.cond_F - (4.0 * md + 1.0) * (4.0 * md + 1.0)) <= 1e-9 * tr.cond_F);
  }
  // bounded regime: couplings away from 2
  const Truncation far = build_truncation(DirectSumSpec{{0.5, 1.0, 3.0, 6.0}, g});
  CHECK(far.norm_C <= (6.0 + 2.0) / 1.0 + 1e-9);
  CHECK(std::abs(far.norm_C - oracle::norm_c(3.0)) <= 1e-10 * far.norm_C);
}

TEST_CASE("unboundedness table", "[direct_sum]") {
  const SymmetricGrid g(10.0, 20);
  const UnboundednessTable above = unboundedness_table(GammaRule::above, {5, 10, 20}, g);
  REQUIRE(above.rows.size() == 3);
  const double norms[] = {21.0, 41.0, 81.0};
  const double conds[] = {441.0, 1681.0, 6561.0};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(above.rows[i].norm_C - norms[i]) <= 1e-9 * norms[i]);
    CHECK(std::abs(above.rows[i].cond_F - conds[i]) <= 1e-9 * conds[i]);
    CHECK(above.rows[i].verified);
  }
  CHECK(above.monotone);

  const UnboundednessTable below = unboundedness_table(GammaRule::below, {1, 3, 9}, g);
  CHECK(below.monotone);
  // gamma = 2 - 1/(M + 1): ||C|| = 4(M + 1) - 1
  CHECK(std::abs(below.rows[2].norm_C - 39.0) <= 1e-9 * 39.0);

  // not monotone when M decreases
  CHECK_FALSE(unboundedness_table(GammaRule::above, {10, 5}, g).monotone);
  CHECK_THROWS_MATCHES(unboundedness_table(GammaRule::above, {0}, g), Error,
                       has_code(ErrorCode::InvalidArgument));
}

TEST_CASE("direct sum validation", "[direct_sum]") {
  const SymmetricGrid g(1.0, 4);
  CHECK_THROWS_MATCHES(build_truncation(DirectSumSpec{{1.0, 2.0}, g}), Error, has_code(ErrorCode::GammaCritical));
  CHECK_THROWS_MATCHES(build_truncation(DirectSumSpec{{}, g}), Error, has_code(ErrorCode::InvalidArgument));
  CHECK(parse_gamma_rule("below") == GammaRule::below);
  CHECK_THROWS_AS(parse_gamma_rule("sideways"), Error);
  CHECK(rule_gamma(GammaRule::above, 4) == 2.25);
  CHECK(rule_gamma(GammaRule::below, 1) == 1.5);
}
