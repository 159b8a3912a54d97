#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracle.hpp"
#include "puretone/numerics.hpp"
#include "puretone/sl_core.hpp"

using namespace puretone;

TEST_CASE("constant span is the scaled rotation") {
  const Profile p = Profile::constant(1.7, 0.8);
  const double w = 2.3, th = w * 1.7 * 0.8;
  const TransferMatrix m = fundamental_matrix(p, w);
  CHECK(m(0, 0) == doctest::Approx(std::cos(th)).epsilon(1e-14));
  CHECK(m(0, 1) == doctest::Approx(-std::sin(th) / 1.7).epsilon(1e-14));
  CHECK(m(1, 0) == doctest::Approx(1.7 * std::sin(th)).epsilon(1e-14));
  CHECK(m(1, 1) == doctest::Approx(std::cos(th)).epsilon(1e-14));
}

TEST_CASE("matrix helpers") {
  const TransferMatrix r = TransferMatrix::rotation(0.3), s = TransferMatrix::scaling(2.5);
  CHECK(r.det() == doctest::Approx(1.0));
  CHECK(s.det() == doctest::Approx(1.0));
  const TransferMatrix id = r * r.inverse();
  CHECK(id(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(id(0, 1)) < 1e-15);
  const auto v = (s * r).apply({1.0, 0.0});
  CHECK(v[0] == doctest::Approx(std::cos(0.3) / std::sqrt(2.5)));
}

TEST_CASE("piecewise constant product agrees with the closed-form oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> wd(0.1, 30.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto r = oracle::random_pwc(rng, 6);
    const Profile p = Profile::piecewise_constant(r.sigma, r.widths);
    const double w = wd(rng);
    const TransferMatrix m = fundamental_matrix(p, w);
    const auto ref = oracle::pwc_product(r.sigma, r.widths, w);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(m(i, j) - ref[i][j]) < 1e-11);
    CHECK(std::abs(m.det() - 1.0) < 1e-12);
  }
}

TEST_CASE("smooth profile transfer matrix agrees with dense RK4") {
  std::vector<double> x, s;
  for (int i = 0; i <= 40; ++i) {
    x.push_back(i / 40.0);
    s.push_back(1.0 + 0.6 * std::sin(2.0 * x.back()));
  }
  const Profile p = Profile::smooth({{x, s}});
  for (double w : {0.5, 3.0, 12.0}) {
    const TransferMatrix m = fundamental_matrix(p, w);
    const auto ref = oracle::rk4_psi_smooth([&](double xx) { return p.sigma(xx); }, 1.0, w, 40000);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(m(i, j) - ref[i][j]) < 1e-7);
    CHECK(std::abs(m.det() - 1.0) < 1e-8);
  }
}

TEST_CASE("span matrices compose") {
  std::vector<double> x{0.0, 0.2, 0.4}, s{1.0, 1.3, 1.1};
  const Profile p = Profile::smooth({{x, s}, {{0.4, 0.7}, {2.0, 2.0}}, {{0.7, 1.0}, {0.8, 0.9}}});
  const double w = 4.2;
  for (double a : {0.1, 0.4, 0.55}) {
    const TransferMatrix whole = span_matrix(p, w, 0.0, 1.0);
    const TransferMatrix split = span_matrix(p, w, a, 1.0) * span_matrix(p, w, 0.0, a);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(whole(i, j) - split(i, j)) < 1e-9);
  }
  const auto along = fundamental_along(p, w, {0.0, 0.4, 1.0});
  CHECK(along.size() == 3);
  CHECK(std::abs(along[2](0, 0) - fundamental_matrix(p, w)(0, 0)) < 1e-9);
}

TEST_CASE("jump angle map") {
  for (double J : {0.3, 1.0, 4.0}) {
    for (int m = -3; m <= 3; ++m) CHECK(jump_angle(J, m * kPi / 2) == doctest::Approx(m * kPi / 2));
    for (double z : {-2.0, 0.3, 1.2, 4.0, 9.0}) {
      if (J == 1.0) CHECK(jump_angle(J, z) == doctest::Approx(z));
      const double h = 1e-6;
      const double fdz = (jump_angle(J, z + h) - jump_angle(J, z - h)) / (2 * h);
      const double fdJ = (jump_angle(J + h, z) - jump_angle(J - h, z)) / (2 * h);
      CHECK(jump_angle_dz(J, z) == doctest::Approx(fdz).epsilon(1e-7));
      CHECK(jump_angle_dJ(J, z) == doctest::Approx(fdJ).epsilon(1e-6));
      // Monotone and stays in the same half-turn sector.
      CHECK(jump_angle_dz(J, z) > 0);
      CHECK(std::floor(jump_angle(J, z) / kPi + 0.5) == std::floor(z / kPi + 0.5));
    }
  }
}

TEST_CASE("Prufer angle across a jump tracks the transfer matrix") {
  const Profile p = Profile::piecewise_constant({1.0, 2.0, 0.7}, {0.3, 0.3, 0.4});
  for (double w : {0.7, 2.0, 6.5}) {
    const TransferMatrix m = fundamental_matrix(p, w);
    const double theta = angle_at_ell(p, w, 0.0);
    // Angle of (φ, ψ) in the ρ-scaled plane at ℓ, σ(ℓ) = 0.7.
    const double s = std::sqrt(0.7);
    const double ref = std::atan2(m(1, 0) / s, m(0, 0) * s);
    const double diff = std::remainder(theta - ref, 2 * kPi);
    CHECK(std::abs(diff) < 1e-10);
  }
}
