// Reference implementations used only by the tests.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "puretone/profile.hpp"

namespace oracle {

using Mat = std::array<std::array<double, 2>, 2>;

// Dense RK4 on φ' = −ωψ, ψ' = ωσ²φ for a piecewise-constant profile, stepping exactly to
// each jump. `steps` is the total budget, split in proportion to the piece widths.
inline Mat rk4_psi(const std::vector<double>& sigma, const std::vector<double>& widths,
                   double omega, int steps) {
  double ell = 0;
  for (double w : widths) ell += w;
  Mat Y{{{1, 0}, {0, 1}}};
  for (std::size_t q = 0; q < sigma.size(); ++q) {
    const int n = std::max(1, static_cast<int>(std::lround(steps * widths[q] / ell)));
    const double h = widths[q] / n, s2 = sigma[q] * sigma[q];
    auto f = [&](const std::array<double, 2>& v) {
      return std::array<double, 2>{-omega * v[1], omega * s2 * v[0]};
    };
    for (int col = 0; col < 2; ++col) {
      std::array<double, 2> v{Y[0][col], Y[1][col]};
      for (int i = 0; i < n; ++i) {
        const auto k1 = f(v);
        const auto k2 = f({v[0] + 0.5 * h * k1[0], v[1] + 0.5 * h * k1[1]});
        const auto k3 = f({v[0] + 0.5 * h * k2[0], v[1] + 0.5 * h * k2[1]});
        const auto k4 = f({v[0] + h * k3[0], v[1] + h * k3[1]});
        for (int r = 0; r < 2; ++r) v[r] += h / 6.0 * (k1[r] + 2 * k2[r] + 2 * k3[r] + k4[r]);
      }
      Y[0][col] = v[0];
      Y[1][col] = v[1];
    }
  }
  return Y;
}

// Same ODE for a general σ(x), fixed step, no jump handling (smooth profiles only).
template <class Sigma>
Mat rk4_psi_smooth(Sigma&& sigma, double ell, double omega, int steps) {
  Mat Y{{{1, 0}, {0, 1}}};
  const double h = ell / steps;
  for (int col = 0; col < 2; ++col) {
    std::array<double, 2> v{Y[0][col], Y[1][col]};
    for (int i = 0; i < steps; ++i) {
      const double x = i * h;
      auto f = [&](double xx, const std::array<double, 2>& w) {
        const double s = sigma(xx);
        return std::array<double, 2>{-omega * w[1], omega * s * s * w[0]};
      };
      const auto k1 = f(x, v);
      const auto k2 = f(x + 0.5 * h, {v[0] + 0.5 * h * k1[0], v[1] + 0.5 * h * k1[1]});
      const auto k3 = f(x + 0.5 * h, {v[0] + 0.5 * h * k2[0], v[1] + 0.5 * h * k2[1]});
      const auto k4 = f(x + h, {v[0] + h * k3[0], v[1] + h * k3[1]});
      for (int r = 0; r < 2; ++r) v[r] += h / 6.0 * (k1[r] + 2 * k2[r] + 2 * k3[r] + k4[r]);
    }
    Y[0][col] = v[0];
    Y[1][col] = v[1];
  }
  return Y;
}

// Closed-form product of constant-piece rotations.
inline Mat pwc_product(const std::vector<double>& sigma, const std::vector<double>& widths,
                       double omega) {
  Mat Y{{{1, 0}, {0, 1}}};
  for (std::size_t q = 0; q < sigma.size(); ++q) {
    const double th = omega * sigma[q] * widths[q], c = std::cos(th), s = std::sin(th);
    const Mat A{{{c, -s / sigma[q]}, {sigma[q] * s, c}}};
    Mat R{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) R[i][j] = A[i][0] * Y[0][j] + A[i][1] * Y[1][j];
    Y = R;
  }
  return Y;
}

// Plain bisection on a sign change of f over [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct RandomPwc {
  std::vector<double> sigma, widths;
};

// N ∈ [1, 5] levels, σ ∈ [0.5, 2], ℓ = 1 split at sorted uniform cuts.
inline RandomPwc random_pwc(std::mt19937_64& rng, int max_levels = 5) {
  std::uniform_int_distribution<int> nd(1, max_levels);
  std::uniform_real_distribution<double> sd(0.5, 2.0), cut(0.0, 1.0);
  const int n = nd(rng);
  std::vector<double> cuts{0.0, 1.0};
  for (int i = 1; i < n; ++i) cuts.push_back(0.05 + 0.9 * cut(rng));
  std::sort(cuts.begin(), cuts.end());
  RandomPwc r;
  for (int i = 0; i < n; ++i) {
    r.sigma.push_back(sd(rng));
    r.widths.push_back(std::max(cuts[i + 1] - cuts[i], 1e-3));
  }
  return r;
}

}  // namespace oracle
