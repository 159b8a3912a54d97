#pragma once

#include <vector>

#include "puretone/eos.hpp"
#include "puretone/fourier.hpp"
#include "puretone/spectrum.hpp"

namespace puretone {

struct EvolutionConfig {
  int M = 32;                  // mode cutoff
  int n_quad = 128;            // collocation points, at least 4M
  double dx = 0.0;             // requested x-step; 0 selects the stability bound
  double step_safety = 0.125;  // dx ≤ step_safety / (σ_max · Mν)
  double b = 3.0;              // Sobolev index for weighted norms
  double shock_guard = 10.0;   // abort when max|∂_t y| grows past this factor
  bool record_trajectory = false;
};

void validate(const EvolutionConfig& cfg);
// Largest admissible x-step for period T.
double step_bound(const QuietState& state, double T, const EvolutionConfig& cfg);

struct TrajectoryNode {
  double x = 0.0;
  FourierField y;
};

struct EvolutionResult {
  FourierField y;
  std::vector<TrajectoryNode> trajectory;
  int steps = 0;
  double mean_drift = 0.0;    // max |a_0(x) − a_0(0)|
  double max_gradient = 0.0;  // max over x of max_t |∂_t y|
};

// Solves y_x = −∂_t[R₋y − v(R₊y, s(x))] on [x_begin, x_end]; y is continuous at jumps.
EvolutionResult nonlinear_evolve(const QuietState& state, const FourierField& y0,
                                 const EvolutionConfig& cfg);
EvolutionResult nonlinear_evolve(const QuietState& state, const FourierField& y0,
                                 const EvolutionConfig& cfg, double x_begin, double x_end);
// Same evolution written for w = y − p̄, keeping full precision in small data.
EvolutionResult evolve_deviation(const QuietState& state, const FourierField& w0,
                                 const EvolutionConfig& cfg, double x_begin, double x_end);

struct LinearizedResult {
  FourierField base;     // E(y0)
  FourierField tangent;  // DE(y0)[Y0]
};

// Tangent equation Y_x = −∂_t[R₋Y − v_p(R₊y, s)·R₊Y], integrated jointly with the base
// from y0 on the same x-nodes.
LinearizedResult linearized_evolve(const QuietState& state, const FourierField& y0,
                                   const FourierField& Y0, const EvolutionConfig& cfg);

// D²E(y0)[Y1, Y2] by integrating the second variation alongside base and tangents.
FourierField second_derivative_evolve(const QuietState& state, const FourierField& y0,
                                      const FourierField& Y1, const FourierField& Y2,
                                      const EvolutionConfig& cfg);

// D²E(p̄)[1, cos(kνt)] at ℓ for the k-mode: (φ̂, ψ̂) = Ψ(ℓ)(a, b) with
// a' = v_pp ω φ φ̃, b' = −v_pp ω φ².
struct SecondDerivative {
  int k = 0;
  int chi = 1;
  double omega = 0.0;
  double T = 0.0;
  double a_ell = 0.0;
  double b_ell = 0.0;
  double phi_hat = 0.0;
  double psi_hat = 0.0;
  double phi_t_ell = 0.0;  // φ̃(ℓ)
  double psi_t_ell = 0.0;  // ψ̃(ℓ)
  double pairing = 0.0;    // sin(kχπ/2) φ̂ + cos(kχπ/2) ψ̂
};

SecondDerivative second_derivative_quiet(const QuietState& state, int k, int chi);

// ‖y‖² = (c_k k^{2b})² + Σ_{j≠k} (c_j j^b / δ_j)² over sine coefficients c_j.
double weighted_norm(const FourierField& y, const DivisorTable& table, double b, int k,
                     double min_divisor = 1e-10);
double weighted_norm(const std::vector<double>& sine_coefficients, const DivisorTable& table,
                     double b, int k, double min_divisor = 1e-10);

}  // namespace puretone
