#include <gtest/gtest.h>

#include "irs/oracle.hpp"
#include "irs/sdr.hpp"
#include "oracles.hpp"

using namespace irs;

namespace {

SdpOptions tight() {
  SdpOptions o;
  o.tol = 1e-9;
  return o;
}

ScenarioConfig small_cfg(int m, int n, std::uint64_t seed, double r0 = 1.0) {
  ScenarioConfig c;
  c.antennas = m;
  c.elements = n;
  c.seed = seed;
  c.r0 = r0;
  return c;
}

ChannelSet without_eve(ChannelSet ch) {
  ch.h_ae.setZero();
  ch.h_ie.setZero();
  restack(ch);
  return ch;
}

bool non_decreasing(const std::vector<double>& t, double rel) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] < t[i - 1] * (1 - rel)) return false;
  }
  return true;
}

}  // namespace

TEST(SolveWSdp, ZeroEveTinyRateIsRankOneMrt) {
  const auto cfg = small_cfg(4, 3, 1, 0.01);
  const auto ch = without_eve(generate_scenario(cfg));
  const auto p = ScaledProblem::from(ch, cfg);
  std::mt19937_64 rng(2);
  const ComplexVector v = augment(ComplexVector(oracle::random_unit_modulus(3, rng)));
  const auto s = solve_w_sdp(p, HermitianMatrix::outer(v), tight());
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  const double mrt = (p.Hr.adjoint() * v).squaredNorm();
  EXPECT_NEAR(s.value / mrt, 1.0, 1e-7);
  const auto ev = oracle::herm_eigenvalues(s.X.matrix());
  EXPECT_NEAR(ev.back(), s.X.trace(), 1e-6 * s.X.trace());
}

TEST(SolveWSdp, DegenerateIrsMatchesExactBeamformer) {
  const auto cfg = small_cfg(3, 0, 4, 1.0);
  const auto ch = generate_scenario(cfg);
  const auto p = ScaledProblem::from(ch, cfg);
  const auto s = solve_w_sdp(p, HermitianMatrix::identity(1), tight());
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  const ComplexVector hr = p.Hr.row(0).adjoint(), hb = p.Hb.row(0).adjoint(), he = p.He.row(0).adjoint();
  const auto exact = exact_inner_solve(hr, hb, he, p.kappa);
  EXPECT_NEAR(s.value / exact.gain, 1.0, 1e-6);
}

TEST(SolveWSdp, UpperBoundsSampledBeamformers) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto cfg = small_cfg(2, 2, seed);
    const auto p = ScaledProblem::from(generate_scenario(cfg), cfg);
    const ComplexVector v = augment(ComplexVector(oracle::random_unit_modulus(2, rng)));
    const auto s = solve_w_sdp(p, HermitianMatrix::outer(v), tight());
    const double sampled =
        oracle::sampled_inner_max(p.Hr.adjoint() * v, p.Hb.adjoint() * v, p.He.adjoint() * v, p.kappa, 20000, rng);
    if (s.status != SdpStatus::Optimal) {
      EXPECT_LT(sampled, 0) << "SDP not optimal although a feasible beamformer exists";
      continue;
    }
    EXPECT_GE(s.value * (1 + 1e-8), sampled);
  }
}

TEST(SolveVSdp, SingleReflectorWithoutDirectLinksMatchesPhaseGrid) {
  auto cfg = small_cfg(2, 1, 3, 0.01);
  auto ch = generate_scenario(cfg);
  ch.h_ab.setZero();
  ch.h_ah.setZero();
  ch.h_ae.setZero();
  ch.h_ie.setZero();
  restack(ch);
  const auto p = ScaledProblem::from(ch, cfg);
  const ComplexVector w = max_secrecy_beamformer(p, ComplexVector::Ones(1));
  const auto W = HermitianMatrix::outer(w);
  const auto s = solve_v_sdp(p, W, tight());
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  double best = -1;
  for (int k = 0; k < 4096; ++k) {
    ComplexVector u(1);
    u(0) = std::polar(1.0, 2 * std::numbers::pi * k / 4096);
    if (p.sr_ok(u, w)) best = std::max(best, p.gain_r(u, w));
  }
  ASSERT_GT(best, 0);
  EXPECT_NEAR(s.value / best, 1.0, 1e-7);
}

TEST(SolveVSdp, UpperBoundsPhaseGridAndHasUnitDiagonal) {
  const auto cfg = small_cfg(3, 2, 6);
  const auto p = ScaledProblem::from(generate_scenario(cfg), cfg);
  const ComplexVector w = max_secrecy_beamformer(p, ComplexVector::Ones(2));
  const auto s = solve_v_sdp(p, HermitianMatrix::outer(w), tight());
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  for (Index i = 0; i < s.X.dim(); ++i) EXPECT_NEAR(std::real(s.X(i, i)), 1.0, 1e-12);
  double best = -1;
  const int levels = 128;
  for (int a = 0; a < levels; ++a) {
    for (int b = 0; b < levels; ++b) {
      ComplexVector u(2);
      u << std::polar(1.0, 2 * std::numbers::pi * a / levels), std::polar(1.0, 2 * std::numbers::pi * b / levels);
      if (p.sr_ok(u, w)) best = std::max(best, p.gain_r(u, w));
    }
  }
  EXPECT_GE(s.value * (1 + 1e-7), best);
}

TEST(SolveVSdp, RankOneUnitModulusIsFeasible) {
  std::mt19937_64 rng(5);
  const ComplexVector v = augment(ComplexVector(oracle::random_unit_modulus(6, rng)));
  const auto V = HermitianMatrix::outer(v);
  for (Index i = 0; i < V.dim(); ++i) EXPECT_NEAR(std::real(V(i, i)), 1.0, 1e-15);
  EXPECT_GT(oracle::herm_eigenvalues(V.matrix()).front(), -1e-12);
}

TEST(SolveVSdp, InvariantUnderDiagonalPhaseRotation) {
  const auto cfg = small_cfg(3, 4, 9);
  const auto ch = generate_scenario(cfg);
  auto p = ScaledProblem::from(ch, cfg);
  const ComplexVector w = max_secrecy_beamformer(p, ComplexVector::Ones(4));
  const auto W = HermitianMatrix::outer(w);
  const auto a = solve_v_sdp(p, W, tight());
  std::mt19937_64 rng(10);
  const ComplexVector d = oracle::random_unit_modulus(5, rng);
  p.Hr = d.asDiagonal() * p.Hr;
  p.Hb = d.asDiagonal() * p.Hb;
  p.He = d.asDiagonal() * p.He;
  const auto b = solve_v_sdp(p, W, tight());
  ASSERT_EQ(a.status, SdpStatus::Optimal);
  ASSERT_EQ(b.status, SdpStatus::Optimal);
  EXPECT_NEAR(a.value / b.value, 1.0, 1e-7);
}

TEST(RandomizeW, RankOneInputIsRecoveredExactly) {
  const auto cfg = small_cfg(3, 2, 2);
  const auto p = ScaledProblem::from(generate_scenario(cfg), cfg);
  const ComplexVector u = ComplexVector::Ones(2);
  const ComplexVector w = max_secrecy_beamformer(p, u);
  ASSERT_TRUE(p.sr_ok(u, w));
  std::mt19937_64 rng(1);
  const ComplexVector got = randomize_w(HermitianMatrix::outer(w), u, p, 10, rng);
  EXPECT_NEAR(p.gain_r(u, got) / p.gain_r(u, w), 1.0, 1e-8);
  EXPECT_NEAR(std::abs(got.dot(w)), 1.0, 1e-8);
}

TEST(RandomizeW, BoundedBySdpValueAndFeasible) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto cfg = small_cfg(4, 6, seed);
    const auto ch = generate_scenario(cfg);
    const auto p = ScaledProblem::from(ch, cfg);
    const ComplexVector u = ComplexVector::Ones(6);
    const auto s = solve_w_sdp(p, HermitianMatrix::outer(augment(u)), tight());
    if (s.status != SdpStatus::Optimal) continue;
    std::mt19937_64 rng(seed);
    const ComplexVector w = randomize_w(s.X, u, p, 1000, rng);
    EXPECT_LE(p.gain_r(u, w), s.value * (1 + 1e-8));
    EXPECT_NEAR(w.norm(), 1.0, 1e-12);
    const auto rep = check_feasible(p.physical(w), u, cfg, ch);
    EXPECT_TRUE(rep.feasible) << (rep.violations.empty() ? "" : rep.violations[0]);
  }
}

TEST(RandomizeV, RankOneInputRecoversPhases) {
  const auto cfg = small_cfg(3, 5, 3, 0.5);
  const auto p = ScaledProblem::from(generate_scenario(cfg), cfg);
  std::mt19937_64 rng(4);
  const ComplexVector u = oracle::random_unit_modulus(5, rng);
  const ComplexVector w = max_secrecy_beamformer(p, u);
  ASSERT_TRUE(p.sr_ok(u, w));
  // Global phase on v must not matter.
  const ComplexVector v = augment(u) * std::polar(1.0, 0.7);
  const ComplexVector got = randomize_v(HermitianMatrix::outer(v), HermitianMatrix::outer(w), p, 20, rng);
  EXPECT_LT((got - u).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(RandomizeV, UnitModulusAndBeatsRandomPhasesInMedian) {
  std::vector<double> recovered, random;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto cfg = small_cfg(4, 8, seed);
    const auto p = ScaledProblem::from(generate_scenario(cfg), cfg);
    const ComplexVector u0 = ComplexVector::Ones(8);
    const auto ws = solve_w_sdp(p, HermitianMatrix::outer(augment(u0)), tight());
    if (ws.status != SdpStatus::Optimal) continue;
    const auto vs = solve_v_sdp(p, ws.X, tight());
    if (vs.status != SdpStatus::Optimal) continue;
    std::mt19937_64 rng(seed);
    const ComplexVector u = randomize_v(vs.X, ws.X, p, 1000, rng);
    for (Index i = 0; i < u.size(); ++i) EXPECT_NEAR(std::abs(u(i)), 1.0, 1e-12);
    const ComplexVector ur = oracle::random_unit_modulus(8, rng);
    auto best = [&](const ComplexVector& uu) {
      const ComplexVector v = augment(uu);
      try {
        return exact_inner_solve(p.Hr.adjoint() * v, p.Hb.adjoint() * v, p.He.adjoint() * v, p.kappa).gain;
      } catch (const Error&) {
        return 0.0;
      }
    };
    recovered.push_back(best(u));
    random.push_back(best(ur));
  }
  ASSERT_GT(recovered.size(), 50u);
  std::sort(recovered.begin(), recovered.end());
  std::sort(random.begin(), random.end());
  EXPECT_GE(recovered[recovered.size() / 2], random[random.size() / 2]);
}

TEST(SdrAo, NoIrsZeroEveGivesMrtPower) {
  const auto cfg = small_cfg(4, 0, 12, 0.01);
  const auto ch = without_eve(generate_scenario(cfg));
  std::mt19937_64 rng(1);
  const auto r = sdr_ao(ch, cfg, rng);
  ASSERT_EQ(r.status, SolveStatus::Converged);
  const double ref = cfg.zeta * cfg.ps_w * ch.h_ah.squaredNorm();
  EXPECT_NEAR(r.harvested_w / ref, 1.0, 0.01);
}

TEST(SdrAo, SmallInstanceBracketedByOracleAndRelaxation) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto cfg = small_cfg(2, 2, seed);
    const auto ch = generate_scenario(cfg);
    std::mt19937_64 rng(seed);
    const auto r = sdr_ao(ch, cfg, rng);
    ASSERT_NE(r.status, SolveStatus::Failed) << r.message;
    if (r.status == SolveStatus::Infeasible) continue;
    GridSpec g;
    g.phase_levels = 64;
    const auto o = grid_search_joint(ch, cfg, g);
    EXPECT_GE(r.harvested_w, 0.98 * o.value);
    ASSERT_TRUE(r.relaxation_value.has_value());
    EXPECT_LE(r.harvested_w, *r.relaxation_value * (1 + 1e-8));
  }
}

TEST(SdrAo, RelaxationTraceAndHalfStepsNonDecreasing) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto cfg = small_cfg(4, 8, seed);
    std::mt19937_64 rng(seed);
    const auto out = sdr_ao_detailed(generate_scenario(cfg), cfg, rng);
    if (out.result.status == SolveStatus::Infeasible) continue;
    EXPECT_TRUE(non_decreasing(out.result.harvested_trace, 1e-8)) << seed;
    EXPECT_TRUE(non_decreasing(out.half_steps, 1e-8)) << seed;
    EXPECT_LE(out.result.harvested_w, *out.result.relaxation_value * (1 + 1e-8));
    for (Index i = 0; i < out.V.dim(); ++i) EXPECT_NEAR(std::real(out.V(i, i)), 1.0, 1e-9);
    EXPECT_LE(out.W.trace(), 1 + 1e-9);
  }
}

TEST(SdrAo, ResultsAreFeasible) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto cfg = small_cfg(4, 10, seed);
    const auto ch = generate_scenario(cfg);
    std::mt19937_64 rng(seed);
    const auto r = sdr_ao(ch, cfg, rng);
    if (r.status == SolveStatus::Infeasible) continue;
    const auto rep = check_feasible(r.w.w, r.u.u(), cfg, ch);
    EXPECT_TRUE(rep.feasible) << seed << " " << (rep.violations.empty() ? "" : rep.violations[0]);
    EXPECT_GE(r.achieved_sr, cfg.r0 - 1e-6);
  }
}

TEST(SdrAo, UnattainableTargetIsInfeasible) {
  const auto cfg = small_cfg(2, 2, 1, 40.0);
  std::mt19937_64 rng(1);
  EXPECT_EQ(sdr_ao(generate_scenario(cfg), cfg, rng).status, SolveStatus::Infeasible);
}
