#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gyro/errors.hpp"
#include "gyro/ferrite.hpp"
#include "test_util.hpp"

using namespace gyro;
using namespace gyro::ferrite;

namespace {

constexpr double kPi = std::numbers::pi;

FerriteParams biased(double h0, double m0_4pi = 0.0, double alpha = 0.0) {
  return {h0, m0_4pi, alpha, kGammaElectron};
}

Vec3 random_vec(double scale) {
  return {test::uniform(-scale, scale), test::uniform(-scale, scale), test::uniform(-scale, scale)};
}

Vec3 tilted(double magnitude, double tilt) {
  return {magnitude * std::sin(tilt), 0.0, magnitude * std::cos(tilt)};
}

}  // namespace

TEST(FerriteParams, Validates) {
  EXPECT_NO_THROW(biased(0.0).validate());
  EXPECT_THROW(biased(-1.0).validate(), ValidationError);
  EXPECT_THROW(biased(1.0, -1.0).validate(), ValidationError);
  EXPECT_THROW(biased(1.0, 0.0, -0.1).validate(), ValidationError);
  EXPECT_THROW((FerriteParams{1.0, 0.0, 0.0, 0.0}).validate(), ValidationError);
}

TEST(LarmorFrequency, Examples) {
  EXPECT_EQ(larmor_frequency(biased(0.0)), 0.0);
  EXPECT_NEAR(larmor_frequency(biased(1000.0)) / (2 * kPi), 2.8e9, 1e-3);
  EXPECT_DOUBLE_EQ(larmor_frequency(biased(2000.0)), 2.0 * larmor_frequency(biased(1000.0)));
}

TEST(PolderTensor, IdentityWithoutMagnetization) {
  const auto t = polder_tensor(biased(1000.0, 0.0), 2 * kPi * 3e9);
  EXPECT_EQ(t.mu, std::complex<double>(1.0));
  EXPECT_EQ(t.k, std::complex<double>(0.0));
  EXPECT_EQ(t.matrix(), Eigen::Matrix3cd::Identity());
}

TEST(PolderTensor, StaticLimit) {
  const auto p = biased(1000.0, 1750.0);
  const auto t = polder_tensor(p, 0.0);
  EXPECT_NEAR(t.mu.real(), 1.0 + 1750.0 / 1000.0, 1e-14);
  EXPECT_EQ(t.k, std::complex<double>(0.0));
}

TEST(PolderTensor, HighFrequencyLimit) {
  // Weakly magnetized: both components within 1e-5 of the vacuum values.
  const auto weak = biased(1000.0, 5.0);
  const double w0 = larmor_frequency(weak);
  const auto t = polder_tensor(weak, 1e3 * w0);
  EXPECT_NEAR(t.mu.real(), 1.0, 1e-5);
  EXPECT_NEAR(t.k.real(), 0.0, 1e-5);

  // Strongly magnetized: k falls off as -omega_M / omega.
  const auto yig = biased(1000.0, 1750.0);
  const double wm = kGammaElectron * 1750.0;
  const double omega = 1e3 * larmor_frequency(yig);
  const auto ty = polder_tensor(yig, omega);
  EXPECT_NEAR(ty.mu.real(), 1.0, 1e-5);
  EXPECT_NEAR(ty.k.real() * omega / wm, -1.0, 1e-5);
}

TEST(PolderTensor, LayoutAndHermitian) {
  const auto p = biased(1000.0, 1750.0);
  for (double f : {0.5e9, 2e9, 4e9, 9e9}) {
    const auto t = polder_tensor(p, 2 * kPi * f);
    const Eigen::Matrix3cd m = t.matrix();
    const std::complex<double> j{0.0, 1.0};
    EXPECT_EQ(m(0, 0), t.mu);
    EXPECT_EQ(m(1, 1), t.mu);
    EXPECT_EQ(m(0, 1), -j * t.k);
    EXPECT_EQ(m(1, 0), j * t.k);
    EXPECT_EQ(m(2, 2), std::complex<double>(1.0));
    EXPECT_EQ(m(0, 2), std::complex<double>(0.0));
    EXPECT_TRUE(m.isApprox(m.adjoint(), 0.0));
  }
}

TEST(PolderTensor, OmegaParity) {
  const auto p = biased(1000.0, 1750.0);
  for (double f : {0.7e9, 3.3e9, 12e9}) {
    const double w = 2 * kPi * f;
    const auto plus = polder_tensor(p, w), minus = polder_tensor(p, -w);
    EXPECT_EQ(plus.mu, minus.mu);
    EXPECT_EQ(plus.k, -minus.k);
  }
}

TEST(PolderTensor, OnResonanceGuard) {
  const auto p = biased(1000.0, 1750.0);
  const double w0 = larmor_frequency(p);
  EXPECT_THROW(polder_tensor(p, w0), NumericalError);
  EXPECT_THROW(polder_tensor(p, w0 * (1 + 5e-7)), NumericalError);
  EXPECT_THROW(polder_tensor(p, -w0), NumericalError);
  EXPECT_NO_THROW(polder_tensor(p, w0 * (1 + 2e-6)));
  EXPECT_NO_THROW(polder_tensor(p, w0 * (1 + 5e-7), 1e-7));
}

TEST(LlgRhs, ParallelIsFixedPoint) {
  const auto p = biased(1000.0, 0.0, 0.1);
  EXPECT_EQ(llg_rhs({0, 0, 5}, {0, 0, 1000}, p), Vec3::Zero());
}

TEST(LlgRhs, PrecessionSign) {
  const double m = 140.0, h = 1000.0;
  const Vec3 d = llg_rhs({m, 0, 0}, {0, 0, h}, biased(h));
  EXPECT_EQ(d.x(), 0.0);
  EXPECT_DOUBLE_EQ(d.y(), -kGammaElectron * m * h);
  EXPECT_EQ(d.z(), 0.0);
}

TEST(LlgRhs, OrthogonalToM) {
  for (int i = 0; i < 100; ++i) {
    const Vec3 m = random_vec(1.0), h = random_vec(1.0);
    const auto p = biased(1.0, 0.0, test::uniform(0.0, 1.0));
    const Vec3 d = llg_rhs(m, h, p);
    EXPECT_LT(std::abs(m.dot(d)) / (m.norm() * d.norm()), 1e-12);
  }
}

TEST(LlgRhs, Unmagnetized) {
  EXPECT_THROW(llg_rhs(Vec3::Zero(), {0, 0, 1}, biased(1.0)), ValidationError);
}

TEST(SplitTorque, OnlyTransverseDrivesPrecession) {
  const Vec3 m = tilted(1.0, 0.4), h{0, 0, 1000};
  const auto s = split_torque(m, h);
  EXPECT_EQ(s.longitudinal, Vec3::Zero());
  EXPECT_GT(s.transverse.norm(), 0.0);
  EXPECT_LT((s.longitudinal + s.transverse - m.cross(h)).norm(), 1e-12);
  const auto p = biased(1000.0);
  EXPECT_LT((llg_rhs(m, h, p) - p.gamma * s.transverse).norm(), 1e-9 * llg_rhs(m, h, p).norm());
}

TEST(IntegrateLlg, ParallelStaysPut) {
  const auto p = biased(1000.0, 0.0, 0.05);
  const auto traj = integrate_llg({0, 0, 3}, [](double) { return Vec3(0, 0, 1000); }, p, 1e-12, 1e-9);
  for (const auto& s : traj) EXPECT_EQ(s.m, Vec3(0, 0, 3));
}

TEST(IntegrateLlg, LarmorPrecession) {
  const auto p = biased(1000.0);
  const double w0 = larmor_frequency(p);
  const double period = 2 * kPi / w0;
  const Vec3 m0 = tilted(1.0, 0.5);
  const auto traj = integrate_llg(m0, [](double) { return Vec3(0, 0, 1000); }, p, period / 100,
                                  1000 * period / 100);
  for (const auto& s : traj) EXPECT_NEAR(s.m.z(), m0.z(), 1e-9);
  EXPECT_NEAR(precession_frequency(traj) / w0, 1.0, 1e-3);
}

TEST(IntegrateLlg, NormDriftSmallForAnyDampingAndField) {
  for (int trial = 0; trial < 10; ++trial) {
    const double h0 = test::uniform(100.0, 3000.0);
    const auto p = biased(h0, 0.0, test::uniform(0.0, 0.2));
    const double period = 2 * kPi / larmor_frequency(p);
    const Vec3 m0 = random_vec(1.0);
    const double wobble = test::uniform(0.0, 0.3);
    const auto field = [=](double t) {
      return Vec3(wobble * h0 * std::cos(3e9 * t), 0.0, h0);
    };
    const auto traj = integrate_llg(m0, field, p, period / 100, 1000 * period / 100);
    for (const auto& s : traj) EXPECT_LT(std::abs(s.m.norm() - m0.norm()) / m0.norm(), 1e-6);
  }
}

TEST(IntegrateLlg, DampingAlignsWithField) {
  const auto p = biased(1000.0, 0.0, 0.1);
  const double period = 2 * kPi / larmor_frequency(p);
  const Vec3 h{0, 0, 1000};
  const auto traj = integrate_llg(tilted(1.0, 1.2), [&](double) { return h; }, p, period / 100, 20 * period);
  double previous = kPi;
  for (const auto& s : traj) {
    const double angle = std::acos(std::clamp(s.m.normalized().z(), -1.0, 1.0));
    EXPECT_LE(angle, previous + 1e-12);
    previous = angle;
  }
  EXPECT_LT(previous, 0.1);
}

TEST(IntegrateLlg, LargeStepIsReported) {
  const auto p = biased(1000.0);
  const double period = 2 * kPi / larmor_frequency(p);
  try {
    integrate_llg(tilted(1.0, 0.8), [](double) { return Vec3(0, 0, 1000); }, p, period, 100 * period);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("step size too large"), std::string::npos);
  }
}

TEST(IntegrateLlg, RenormalizeHidesDrift) {
  const auto p = biased(1000.0);
  const double period = 2 * kPi / larmor_frequency(p);
  IntegrateOptions opts;
  opts.renormalize = true;
  const auto traj = integrate_llg(tilted(2.0, 0.8), [](double) { return Vec3(0, 0, 1000); }, p,
                                  period / 10, 50 * period, opts);
  EXPECT_NEAR(traj.back().m.norm(), 2.0, 1e-12);
}

TEST(IntegrateLlg, ValidatesArguments) {
  const auto p = biased(1000.0);
  const auto h = [](double) { return Vec3(0, 0, 1000); };
  EXPECT_THROW(integrate_llg({1, 0, 0}, h, p, 0.0, 1.0), ValidationError);
  EXPECT_THROW(integrate_llg({1, 0, 0}, h, p, 1.0, 0.5), ValidationError);
  EXPECT_THROW(integrate_llg(Vec3::Zero(), h, p, 1e-12, 1e-9), ValidationError);
}

TEST(PrecessionFrequency, SyntheticSinusoid) {
  std::vector<MagnetizationState> traj;
  const double f = 1e9, fs = 100e9;
  for (int i = 0; i < 2000; ++i) {
    const double t = i / fs;
    traj.push_back({Vec3(std::sin(2 * kPi * f * t + 0.3), std::cos(2 * kPi * f * t + 0.3), 0.0), t});
  }
  EXPECT_NEAR(precession_frequency(traj) / (2 * kPi * f), 1.0, 1e-4);
}

TEST(PrecessionFrequency, ConstantTrajectoryTooShort) {
  std::vector<MagnetizationState> traj;
  for (int i = 0; i < 100; ++i) traj.push_back({Vec3(0, 0, 1), i * 1e-12});
  EXPECT_THROW(precession_frequency(traj), ValidationError);
}
