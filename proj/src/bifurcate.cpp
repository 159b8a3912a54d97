#include "puretone/bifurcate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "puretone/errors.hpp"
#include "puretone/numerics.hpp"

namespace puretone {

PureToneSolver::PureToneSolver(BifurcationProblem problem) : problem_(std::move(problem)) {
  problem_.state.validate();
  if (problem_.M < 2) throw DomainError("bifurcation: M must be at least 2");
  if (problem_.k < 1 || problem_.k > problem_.M)
    throw DomainError("bifurcation: k must lie in [1, M]");
  if (problem_.n_quad == 0) problem_.n_quad = 4 * problem_.M;
  eigen_ = eigen_solve(problem_.state.profile, problem_.k, problem_.chi);
  report_ = resonance_scan(problem_.state.profile, problem_.k, problem_.M, problem_.chi,
                           problem_.tol.resonance);
  if (report_.verdict != Verdict::nonresonant) {
    std::ostringstream msg;
    msg << "resonant profile: min |delta_j| = " << report_.min_divisor << " at j = "
        << report_.argmin_j << " (k = " << problem_.k << ", verdict "
        << to_string(report_.verdict) << ")";
    throw ResonanceError(msg.str());
  }
  table_ = report_.table;
  for (int j = 1; j <= problem_.M; ++j) {
    if (problem_.chi == 0 && j % 2 != 0) continue;
    equations_.push_back(j);
    if (j != problem_.k) unknowns_.push_back(j);
  }
}

EvolutionConfig PureToneSolver::config() const {
  EvolutionConfig cfg;
  cfg.M = problem_.M;
  cfg.n_quad = problem_.n_quad;
  cfg.dx = problem_.dx;
  cfg.b = problem_.sobolev_b;
  return cfg;
}

FourierField PureToneSolver::initial_deviation(double z, const std::vector<double>& a,
                                               double alpha) const {
  FourierField w = FourierField::zeros(eigen_.T, problem_.M);
  w.a[0] = z;
  for (int j : unknowns_)
    if (static_cast<std::size_t>(j) < a.size()) w.a[j] = a[j];
  w.a[problem_.k] = alpha;
  return w;
}

std::vector<double> PureToneSolver::residual(double z, const std::vector<double>& a,
                                             double alpha) const {
  const FourierField w0 = initial_deviation(z, a, alpha);
  const EvolutionResult r =
      evolve_deviation(problem_.state, w0, config(), 0.0, problem_.state.profile.ell());
  return boundary_operator(r.y, problem_.chi).b;
}

double PureToneSolver::weighted(const std::vector<double>& r) const {
  return weighted_norm(r, table_, problem_.sobolev_b, problem_.k);
}

PureToneSolution PureToneSolver::finish(double alpha, double z, const std::vector<double>& a,
                                        const std::vector<double>& r, int iters,
                                        bool converged) const {
  PureToneSolution s;
  s.alpha = alpha;
  s.z = z;
  s.a.assign(static_cast<std::size_t>(problem_.M) + 1, 0.0);
  for (int j : unknowns_) s.a[j] = a[j];
  s.residual_weighted = r.empty() ? 0.0 : weighted(r);
  std::vector<double> aux = r;
  if (!aux.empty()) {
    s.bif_residual = std::abs(aux[problem_.k]);
    aux[problem_.k] = 0.0;
    s.aux_residual = weighted(aux);
  }
  s.newton_iters = iters;
  s.M = problem_.M;
  s.n_quad = problem_.n_quad;
  s.p_bar = problem_.state.p_bar;
  s.p_effective = s.p_bar + z;
  s.omega = eigen_.omega;
  s.T = eigen_.T;
  s.converged = converged;
  for (int j : unknowns_) s.max_a = std::max(s.max_a, std::abs(s.a[j]));
  if (unknowns_.size() >= 2 && s.max_a > 0) {
    const int last = unknowns_.back(), prev = unknowns_[unknowns_.size() - 2];
    s.tail_ok = std::abs(s.a[last]) < problem_.tol.tail_ratio * s.max_a &&
                std::abs(s.a[prev]) < problem_.tol.tail_ratio * s.max_a;
  }
  return s;
}

PureToneSolution PureToneSolver::solve(double alpha, const PureToneSolution* warm) const {
  const int n = static_cast<int>(equations_.size());
  if (alpha == 0.0) {
    return finish(0.0, 0.0, std::vector<double>(static_cast<std::size_t>(problem_.M) + 1, 0.0),
                  std::vector<double>(static_cast<std::size_t>(problem_.M) + 1, 0.0), 0, true);
  }
  // Unknown vector: u[0] = z, u[i] = a_{unknowns_[i-1]}.
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  if (warm != nullptr && warm->alpha != 0.0) {
    const double scale = (alpha / warm->alpha) * (alpha / warm->alpha);
    u[0] = warm->z * scale;
    for (int i = 1; i < n; ++i) {
      const auto j = static_cast<std::size_t>(unknowns_[i - 1]);
      u[i] = j < warm->a.size() ? warm->a[j] * scale : 0.0;
    }
  }
  auto to_coeffs = [&](const Eigen::VectorXd& v) {
    std::vector<double> a(static_cast<std::size_t>(problem_.M) + 1, 0.0);
    for (int i = 1; i < n; ++i) a[unknowns_[i - 1]] = v[i];
    return a;
  };
  auto eval = [&](const Eigen::VectorXd& v) { return residual(v[0], to_coeffs(v), alpha); };
  // Row scaling diag(1/δ_j), j ≠ k; the k-row carries the O(α) bifurcation equation.
  Eigen::VectorXd row_scale(n);
  for (int e = 0; e < n; ++e) {
    const int j = equations_[e];
    row_scale[e] = j == problem_.k ? 1.0 / std::abs(alpha) : 1.0 / table_.at(j);
  }
  auto scaled = [&](const std::vector<double>& r) {
    Eigen::VectorXd out(n);
    for (int e = 0; e < n; ++e) out[e] = row_scale[e] * r[equations_[e]];
    return out;
  };

  std::vector<double> r = eval(u);
  double merit = weighted(r);
  int iters = 0;
  while (merit >= problem_.tol.residual) {
    if (iters >= problem_.tol.max_newton) {
      std::ostringstream msg;
      msg << "Newton did not converge in " << iters << " iterations (alpha = " << alpha
          << ", weighted residual = " << merit << ")";
      throw SolverError(msg.str());
    }
    ++iters;
    const Eigen::VectorXd F = scaled(r);
    Eigen::MatrixXd Jm(n, n);
    parallel_for(static_cast<std::size_t>(n), problem_.threads, [&](std::size_t c) {
      Eigen::VectorXd up = u;
      const double h = problem_.tol.fd_step * std::max(1.0, std::abs(u[c]));
      up[c] += h;
      const Eigen::VectorXd Fp = scaled(eval(up));
      Jm.col(static_cast<Eigen::Index>(c)) = (Fp - F) / h;
    });
    const Eigen::VectorXd du = Jm.fullPivLu().solve(-F);
    double lambda = 1.0;
    bool accepted = false;
    for (int hv = 0; hv <= problem_.tol.max_halvings; ++hv, lambda *= 0.5) {
      const Eigen::VectorXd trial = u + lambda * du;
      std::vector<double> rt;
      try {
        rt = eval(trial);
      } catch (const ShockProximityError&) {
        continue;
      }
      const double mt = weighted(rt);
      if (mt < merit) {
        u = trial;
        r = std::move(rt);
        merit = mt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "Newton line search failed after " << problem_.tol.max_halvings
          << " halvings (alpha = " << alpha << ", weighted residual = " << merit << ")";
      throw SolverError(msg.str());
    }
  }
  return finish(alpha, u[0], to_coeffs(u), r, iters, true);
}

EvolutionResult PureToneSolver::reconstruct(const PureToneSolution& sol, bool trajectory) const {
  EvolutionConfig cfg = config();
  cfg.record_trajectory = trajectory;
  EvolutionResult r = evolve_deviation(problem_.state, initial_deviation(sol.z, sol.a, sol.alpha),
                                       cfg, 0.0, problem_.state.profile.ell());
  r.y.a[0] += problem_.state.p_bar;
  for (auto& node : r.trajectory) node.y.a[0] += problem_.state.p_bar;
  return r;
}

std::vector<double> residual(const BifurcationProblem& problem, double z,
                             const std::vector<double>& a, double alpha) {
  return PureToneSolver(problem).residual(z, a, alpha);
}

namespace {

PureToneSolution solve_with_doubling(BifurcationProblem& problem,
                                     std::unique_ptr<PureToneSolver>& solver, double alpha,
                                     const PureToneSolution* warm) {
  PureToneSolution carried;
  for (int d = 0;; ++d) {
    PureToneSolution s = solver->solve(alpha, warm);
    if (s.tail_ok || d >= problem.tol.max_mode_doublings) return s;
    problem.M *= 2;
    problem.n_quad = problem.n_quad == 0 ? 0 : 2 * problem.n_quad;
    solver = std::make_unique<PureToneSolver>(problem);
    carried = std::move(s);
    carried.a.resize(static_cast<std::size_t>(problem.M) + 1, 0.0);
    warm = &carried;
  }
}

}  // namespace

PureToneSolution solve_at_alpha(const BifurcationProblem& problem, double alpha,
                                 const PureToneSolution* warm) {
  BifurcationProblem p = problem;
  auto solver = std::make_unique<PureToneSolver>(p);
  return solve_with_doubling(p, solver, alpha, warm);
}

BranchResult branch_continue(const BifurcationProblem& problem) {
  if (!std::is_sorted(problem.alphas.begin(), problem.alphas.end()))
    throw DomainError("branch_continue: alpha schedule must be increasing");
  BifurcationProblem p = problem;
  auto solver = std::make_unique<PureToneSolver>(p);
  BranchResult out;
  const PureToneSolution* warm = nullptr;
  for (double alpha : problem.alphas) {
    try {
      out.solutions.push_back(solve_with_doubling(p, solver, alpha, warm));
      warm = &out.solutions.back();
      out.largest_alpha = alpha;
    } catch (const ShockProximityError& e) {
      out.complete = false;
      out.failure = e.what();
      out.failure_kind = "shock_guard";
      break;
    } catch (const SolverError& e) {
      out.complete = false;
      out.failure = e.what();
      out.failure_kind = "newton";
      break;
    } catch (const NumericalFailure& e) {
      out.complete = false;
      out.failure = e.what();
      out.failure_kind = "numerical";
      break;
    }
  }
  return out;
}

DgdzCheck dgdz_check(const BifurcationProblem& problem, double h) {
  const PureToneSolver solver(problem);
  const std::vector<double> none(static_cast<std::size_t>(problem.M) + 1, 0.0);
  const int k = problem.k;
  auto f = [&](double alpha, double z) { return solver.residual(z, none, alpha)[k]; };
  DgdzCheck out;
  out.h = h;
  out.finite_difference = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
  out.analytic = second_derivative_quiet(problem.state, k, problem.chi);
  out.pairing = out.analytic.pairing;
  out.relative_difference =
      std::abs(out.finite_difference - out.pairing) / std::max(std::abs(out.pairing), 1e-300);
  return out;
}

}  // namespace puretone
