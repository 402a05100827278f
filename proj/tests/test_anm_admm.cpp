#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "risdoa/anm_admm.hpp"
#include "risdoa/music.hpp"

namespace risdoa {
namespace {

using cd = std::complex<double>;

const std::vector<double> kReferenceAngles{5.345, 25.789, 45.456};

CMatrix vandermonde_sum(const std::vector<double>& angles, Index n, const std::vector<double>& powers = {}) {
  CMatrix t = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const CVector a = testing::ula_steering(angles[k], n);
    t += (powers.empty() ? 1.0 : powers[k]) * a * a.adjoint();
  }
  return t;
}

// R = A s s^H A^H for the given amplitudes.
RisCovariance coherent_covariance(const std::vector<double>& angles, Index n, const CVector& s) {
  CVector x = CVector::Zero(n);
  for (std::size_t k = 0; k < angles.size(); ++k) x += testing::ula_steering(angles[k], n) * s(static_cast<Index>(k));
  return RisCovariance{x * x.adjoint()};
}

CVector reference_amplitudes() {
  CVector s(3);
  s << cd(1.0, 0.2), cd(-0.6, 0.9), cd(0.8, -0.7);
  return s;
}

TEST(Toeplitz, UnitVectorGivesIdentity) {
  CVector e1 = CVector::Zero(5);
  e1(0) = 1.0;
  EXPECT_LT((toeplitz_build({e1}) - CMatrix::Identity(5, 5)).norm(), 1e-15);
}

TEST(Toeplitz, TwoByTwoFill) {
  CVector mu(2);
  mu << 2.0, cd(0, 1);
  CMatrix expected(2, 2);
  expected << 2.0, cd(0, -1), cd(0, 1), 2.0;
  EXPECT_LT((toeplitz_build({mu}) - expected).norm(), 1e-15);
}

TEST(Toeplitz, MatchesNaiveFill) {
  std::mt19937_64 rng(3);
  CVector mu = testing::random_vector(9, rng);
  mu(0) = mu(0).real();
  EXPECT_LT((toeplitz_build({mu}) - testing::naive_toeplitz(mu)).norm(), 1e-15);
}

TEST(Toeplitz, DiagonalAveragesOfVandermondeHaveRankK) {
  const Index n = 8;
  const CMatrix r = vandermonde_sum({-20.0, 35.0}, n, {1.0, 2.5});
  CVector mu(n);
  for (Index k = 0; k < n; ++k) mu(k) = r.diagonal(-k).mean();
  const CMatrix t = toeplitz_build({mu});
  const HermitianEigen eig = eigh_descending(t);
  EXPECT_GT(eig.values(1), 1.0);
  EXPECT_LT(std::abs(eig.values(2)), 1e-10 * eig.values(0));
  EXPECT_GT(eig.values.minCoeff(), -1e-10 * eig.values(0));
}

TEST(ToeplitzAdjoint, IdentityAndSingleEntry) {
  const CVector w = toeplitz_adjoint(CMatrix::Identity(4, 4));
  EXPECT_EQ(w(0), cd(4.0));
  EXPECT_LT(w.tail(3).norm(), 1e-15);

  CMatrix q = CMatrix::Zero(2, 2);
  q(1, 0) = 1.0;
  const CVector w2 = toeplitz_adjoint(q);
  EXPECT_EQ(w2(0), cd(0.0));
  EXPECT_EQ(w2(1), cd(1.0));
}

TEST(ToeplitzAdjoint, RejectsNonSquare) {
  EXPECT_THROW(toeplitz_adjoint(CMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST(ToeplitzAdjoint, InnerProductIdentity) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = trial % 3 == 0 ? 4 : (trial % 3 == 1 ? 8 : 16);
    const CMatrix q = testing::random_hermitian(n, rng);
    CVector mu = testing::random_vector(n, rng);
    mu(0) = mu(0).real();
    const double lhs = testing::real_inner(q, testing::naive_toeplitz(mu));
    const double rhs = toeplitz_pairing(toeplitz_adjoint(q), mu);
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(ToeplitzAdjoint, ScaleInvertsNormalOperator) {
  const Index n = 7;
  const RVector lambda = toeplitz_scale(n);
  EXPECT_DOUBLE_EQ(lambda(0), 1.0 / 7.0);
  EXPECT_DOUBLE_EQ(lambda(1), 1.0 / 12.0);
  EXPECT_DOUBLE_EQ(lambda(n - 1), 0.5);
  std::mt19937_64 rng(5);
  CVector mu = testing::random_vector(n, rng);
  mu(0) = mu(0).real();
  CVector back = toeplitz_adjoint(toeplitz_build({mu}));
  back.array() *= lambda.array().cast<cd>();
  EXPECT_LT((back - mu).norm(), 1e-12);
}

AdmmState zero_state(Index n) { return AdmmState::initial(RisCovariance{CMatrix::Zero(n, n)}); }

TEST(AdmmPrimalUpdate, ZeroStatePrintedFactor) {
  const Index n = 4;
  AdmmConfig cfg;
  cfg.tau = 2.0;
  cfg.w_update_factor = 2;
  const PrimalBlocks out = admm_primal_update(zero_state(n), RisCovariance{CMatrix::Zero(n, n)}, cfg);
  EXPECT_LT((out.w - (2.0 / cfg.tau) * CMatrix::Identity(n, n)).norm(), 1e-15);
  EXPECT_LT(out.r.norm(), 1e-15);
  CVector expected_mu = CVector::Zero(n);
  expected_mu(0) = -1.0 / cfg.tau;
  EXPECT_LT((out.mu.mu - expected_mu).norm(), 1e-15);
}

TEST(AdmmPrimalUpdate, ZeroStateStationaryFactor) {
  const Index n = 3;
  AdmmConfig cfg;
  cfg.tau = 4.0;
  cfg.w_update_factor = 1;
  const PrimalBlocks out = admm_primal_update(zero_state(n), RisCovariance{CMatrix::Zero(n, n)}, cfg);
  EXPECT_LT((out.w + (1.0 / cfg.tau) * CMatrix::Identity(n, n)).norm(), 1e-15);
}

TEST(AdmmPrimalUpdate, UnitDualBlockLeavesWAtZ0) {
  const Index n = 4;
  std::mt19937_64 rng(6);
  for (int factor : {1, 2}) {
    AdmmState st = zero_state(n);
    const CMatrix z0 = testing::random_hermitian(n, rng);
    st.z.topLeftCorner(n, n) = z0;
    st.pi.topLeftCorner(n, n) = CMatrix::Identity(n, n);
    AdmmConfig cfg;
    cfg.w_update_factor = factor;
    const PrimalBlocks out = admm_primal_update(st, RisCovariance{CMatrix::Zero(n, n)}, cfg);
    EXPECT_LT((out.w - z0).norm(), 1e-14);
  }
}

TEST(AdmmPrimalUpdate, LargeGammaPinsR) {
  const Index n = 5;
  std::mt19937_64 rng(7);
  const RisCovariance r_hat{testing::random_psd(n, rng)};
  AdmmState st = AdmmState::initial(r_hat);
  st.z = testing::random_hermitian(2 * n, rng);
  st.pi = testing::random_hermitian(2 * n, rng);
  AdmmConfig cfg;
  cfg.tau = 1.0;
  cfg.gamma = 1e12;
  const PrimalBlocks out = admm_primal_update(st, r_hat, cfg);
  EXPECT_LT((out.r - r_hat.r_hat).norm(), 1e-9 * r_hat.r_hat.norm());
  EXPECT_EQ(out.mu.mu(0).imag(), 0.0);
}

TEST(PsdProject, ClampsNegativeEigenvalues) {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  EXPECT_LT((psd_project(d) - expected).norm(), 1e-14);
}

TEST(PsdProject, IdempotentOnPsd) {
  std::mt19937_64 rng(8);
  const CMatrix p = testing::random_psd(6, rng, 4);
  EXPECT_LT((psd_project(p) - p).norm(), 1e-10 * std::max(1.0, p.norm()));
}

TEST(PsdProject, NearestInFrobeniusNorm) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix s = testing::random_hermitian(6, rng);
    const CMatrix proj = psd_project(s);
    const double dist = (proj - s).norm();
    for (int k = 0; k < 100; ++k) {
      const CMatrix p = testing::random_psd(6, rng, 1 + k % 6) * (0.05 * (1 + k % 7));
      ASSERT_LE(dist, (p - s).norm() + 1e-12);
    }
  }
}

TEST(AdmmSolve, ZeroDataDrivesTraceToZero) {
  AdmmConfig cfg;
  const AdmmResult res = admm_solve(RisCovariance{CMatrix::Zero(8, 8)}, cfg);
  EXPECT_LT(res.mu.mu.norm(), 1e-6);
}

TEST(AdmmSolve, NoiselessReferenceAnglesGiveRankThree) {
  const Index n = 16;
  const RisCovariance r_hat = coherent_covariance(kReferenceAngles, n, reference_amplitudes());
  AdmmConfig cfg;
  cfg.gamma = 1e4;
  const AdmmResult res = admm_solve(r_hat, cfg);
  EXPECT_TRUE(res.state.converged);

  const CMatrix t = res.toeplitz();
  const HermitianEigen eig = eigh_descending(t);
  EXPECT_LT(eig.values(3) / eig.values(2), 1e-3);

  const CMatrix s = assemble_block(res.state.w, res.state.r, t);
  EXPECT_LT((res.state.z - s).norm() / std::max(1.0, s.norm()), 1e-4);
  EXPECT_GE(eigh_descending(res.state.z).values.minCoeff(), -1e-8);
}

TEST(AdmmSolve, IterateInvariants) {
  const Index n = 8;
  const RisCovariance r_hat = coherent_covariance({-10.0, 30.0}, n, reference_amplitudes().head(2));
  AdmmConfig cfg;
  cfg.gamma = 50.0;
  AdmmState st = AdmmState::initial(r_hat);
  for (int i = 0; i < 200; ++i) {
    const CMatrix pi_before = st.pi;
    admm_step(st, r_hat, cfg);
    const CMatrix t = toeplitz_build(st.mu);
    const CMatrix s = assemble_block(st.w, st.r, t);
    ASSERT_GE(eigh_descending(st.z).values.minCoeff(), -1e-8) << "iter " << i;
    ASSERT_LT(hermitian_defect(st.w), 1e-9);
    ASSERT_LT(hermitian_defect(t), 1e-9);
    ASSERT_LT(hermitian_defect(st.z), 1e-9);
    ASSERT_LT(hermitian_defect(st.pi), 1e-9);
    ASSERT_LT((st.pi - pi_before - cfg.tau * (st.z - s)).norm(), 1e-12 * std::max(1.0, st.pi.norm()));
  }
}

TEST(AdmmSolve, ResidualsConvergeOnNoiselessInstances) {
  struct Case {
    Index n;
    std::vector<double> angles;
  };
  for (const Case& c : {Case{8, {20.0}}, Case{12, {-30.0, 15.0}}, Case{16, kReferenceAngles}}) {
    const RisCovariance r_hat =
        coherent_covariance(c.angles, c.n, reference_amplitudes().head(static_cast<Index>(c.angles.size())));
    AdmmConfig cfg;
    cfg.max_iter = 2000;
    cfg.eps_abs = 1e-9;
    cfg.eps_rel = 1e-9;
    const AdmmResult res = admm_solve(r_hat, cfg);
    EXPECT_LT(res.state.primal_res, 1e-5) << "N=" << c.n;
    EXPECT_LT(res.state.dual_res, 1e-5) << "N=" << c.n;
  }
}

TEST(AdmmSolve, PeaksInvariantUnderDataScaling) {
  const Index n = 16;
  const RisCovariance base = coherent_covariance(kReferenceAngles, n, reference_amplitudes());
  MusicConfig music;
  music.num_sources = 3;
  const ArrayGeometry geom = ArrayGeometry::half_wavelength(n);
  AdmmConfig cfg;
  const DoaEstimate ref = estimate_doas(admm_solve(base, cfg).toeplitz(), music, geom);
  for (double c : {0.1, 10.0}) {
    const DoaEstimate scaled = estimate_doas(admm_solve(RisCovariance{c * base.r_hat}, cfg).toeplitz(), music, geom);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(scaled.angles[k], ref.angles[k], music.grid_step);
  }
}

TEST(AdmmSolve, DiagnosticsCallbackSeesEveryIteration) {
  const RisCovariance r_hat = coherent_covariance({10.0}, 6, reference_amplitudes().head(1));
  AdmmConfig cfg;
  int calls = 0;
  double last_obj = 0.0;
  cfg.on_iteration = [&](const AdmmIterationRecord& r) {
    ++calls;
    EXPECT_EQ(r.iter, calls);
    last_obj = r.objective;
  };
  const AdmmResult res = admm_solve(r_hat, cfg);
  EXPECT_EQ(calls, res.state.iter);
  EXPECT_TRUE(std::isfinite(last_obj));
}

TEST(AdmmSolve, BudgetExhaustionIsReportedNotThrown) {
  const RisCovariance r_hat = coherent_covariance(kReferenceAngles, 16, reference_amplitudes());
  AdmmConfig cfg;
  cfg.max_iter = 3;
  AdmmResult res;
  ASSERT_NO_THROW(res = admm_solve(r_hat, cfg));
  EXPECT_FALSE(res.state.converged);
  EXPECT_EQ(res.state.iter, 3);
}

TEST(AdmmConfig, Validation) {
  AdmmConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.w_update_factor = 3;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = AdmmConfig{};
  cfg.tau = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_DOUBLE_EQ(AdmmConfig::default_gamma(2.0, 10.0), 5.0);
  EXPECT_DOUBLE_EQ(AdmmConfig::default_gamma(0.0, 10.0), 1e4);
  EXPECT_DOUBLE_EQ(AdmmConfig::default_gamma(1e-15, 10.0), 1e4);
}

}  // namespace
}  // namespace risdoa
