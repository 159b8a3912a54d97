#pragma once

#include <array>
#include <vector>

#include "puretone/profile.hpp"

namespace puretone {

// 2×2 real matrix [[φ, φ̃], [ψ, ψ̃]].
struct TransferMatrix {
  std::array<std::array<double, 2>, 2> m{{{1.0, 0.0}, {0.0, 1.0}}};

  static TransferMatrix identity() { return {}; }
  static TransferMatrix rotation(double angle);
  static TransferMatrix scaling(double q);  // M(q) = diag(1/√q, √q)

  double operator()(int i, int j) const { return m[i][j]; }
  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  TransferMatrix inverse() const;  // assumes unit determinant
  std::array<double, 2> apply(std::array<double, 2> v) const;
};

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);

// Prüfer variables: φ = (r/√σ) cos θ, ψ = r√σ sin θ; zeta carries ∂θ/∂ω.
struct PruferState {
  double theta = 0.0;
  double r = 1.0;
  double zeta = 0.0;
};

// Angle map across a jump with J = σ₋/σ₊: tan θ₊ = J tan θ₋ on the branch of θ₋.
double jump_angle(double J, double z);
double jump_angle_dz(double J, double z);
double jump_angle_dJ(double J, double z);
double jump_radius_factor(double J, double theta_minus);

struct PruferOptions {
  double tol = 1e-11;              // absolute local error on θ and log r
  double min_step_fraction = 1e-9; // floor step relative to the span scale
};

// Advances the Prüfer state across [xa, xb] inside one piece.
PruferState prufer_advance(const Piece& piece, double omega, PruferState state, double xa,
                           double xb, const PruferOptions& opt = {});

// Ψ mapping (φ,ψ)(xa) to (φ,ψ)(xb); xa ≤ xb anywhere in [0, ℓ].
TransferMatrix span_matrix(const Profile& profile, double omega, double xa, double xb);
TransferMatrix fundamental_matrix(const Profile& profile, double omega);
// Ψ(x) at each of the sorted points xs.
std::vector<TransferMatrix> fundamental_along(const Profile& profile, double omega,
                                              const std::vector<double>& xs);

// Prüfer angle at ℓ− starting from θ0 at 0+, with ∂θ/∂ω in zeta.
PruferState angle_state_at_ell(const Profile& profile, double omega, double theta0);
double angle_at_ell(const Profile& profile, double omega, double theta0);

}  // namespace puretone
