#pragma once

#include <memory>
#include <string>
#include <vector>

#include "puretone/eos.hpp"
#include "puretone/evolve.hpp"
#include "puretone/spectrum.hpp"

namespace puretone {

struct BifurcationTolerances {
  double residual = 1e-10;    // weighted residual for convergence
  int max_newton = 30;
  int max_halvings = 12;
  double fd_step = 1e-7;      // relative forward-difference step
  double tail_ratio = 1e-3;   // |a_M|, |a_{M−1}| against max |a_j|
  int max_mode_doublings = 2;
  ResonanceThresholds resonance;
};

struct BifurcationProblem {
  QuietState state;
  int k = 1;
  int chi = 1;
  int M = 32;
  int n_quad = 0;  // 0 selects 4M
  std::vector<double> alphas;
  BifurcationTolerances tol;
  double sobolev_b = 3.0;
  double dx = 0.0;  // 0 selects the stability bound
  int threads = 1;
};

// y⁰ = p̄ + z + α cos(kνt) + Σ_{j≠k} a_j cos(jνt).
struct PureToneSolution {
  double alpha = 0.0;
  double z = 0.0;
  std::vector<double> a;  // index j = 0..M; a[0] = a[k] = 0
  double residual_weighted = 0.0;
  double aux_residual = 0.0;  // weighted norm of the j≠k components
  double bif_residual = 0.0;  // |r_k|
  int newton_iters = 0;
  int M = 0;
  int n_quad = 0;
  double p_bar = 0.0;
  double p_effective = 0.0;  // p̄ + z
  double omega = 0.0;
  double T = 0.0;
  double max_a = 0.0;
  bool converged = false;
  bool tail_ok = true;
};

// Prepared problem for one mode cutoff: eigen data, divisors and the resonance gate.
class PureToneSolver {
 public:
  // Throws ResonanceError unless the k-mode is nonresonant up to j = M.
  explicit PureToneSolver(BifurcationProblem problem);

  const BifurcationProblem& problem() const { return problem_; }
  const EigenFrequency& eigen() const { return eigen_; }
  const DivisorTable& divisors() const { return table_; }
  const ResonanceReport& resonance() const { return report_; }
  EvolutionConfig config() const;
  const std::vector<int>& unknown_modes() const { return unknowns_; }
  const std::vector<int>& equation_modes() const { return equations_; }

  FourierField initial_deviation(double z, const std::vector<double>& a, double alpha) const;
  // Sine coefficients r_0..r_M of S E^ℓ y⁰ (r_0 = 0).
  std::vector<double> residual(double z, const std::vector<double>& a, double alpha) const;
  double weighted(const std::vector<double>& r) const;

  PureToneSolution solve(double alpha, const PureToneSolution* warm = nullptr) const;
  // Full evolution of a solution; trajectory values are y (p̄ included).
  EvolutionResult reconstruct(const PureToneSolution& sol, bool trajectory = true) const;

 private:
  PureToneSolution finish(double alpha, double z, const std::vector<double>& a,
                          const std::vector<double>& r, int iters, bool converged) const;

  BifurcationProblem problem_;
  EigenFrequency eigen_;
  DivisorTable table_;
  ResonanceReport report_;
  std::vector<int> unknowns_, equations_;
};

std::vector<double> residual(const BifurcationProblem& problem, double z,
                             const std::vector<double>& a, double alpha);
// Newton solve; doubles M while the tail check fails.
PureToneSolution solve_at_alpha(const BifurcationProblem& problem, double alpha,
                                const PureToneSolution* warm = nullptr);

struct BranchResult {
  std::vector<PureToneSolution> solutions;
  bool complete = true;
  std::string failure;        // empty when complete
  std::string failure_kind;   // "shock_guard", "newton", "numerical"
  double largest_alpha = 0.0;
};

BranchResult branch_continue(const BifurcationProblem& problem);

struct DgdzCheck {
  double finite_difference = 0.0;
  double pairing = 0.0;
  double relative_difference = 0.0;
  double h = 0.0;
  SecondDerivative analytic;
};

// Mixed central difference of r_k(α, z, a=0) at (0,0) against the quadrature pairing.
DgdzCheck dgdz_check(const BifurcationProblem& problem, double h = 1e-3);

}  // namespace puretone
