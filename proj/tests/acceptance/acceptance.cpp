// One line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "../oracle.hpp"
#include "puretone/bifurcate.hpp"
#include "puretone/cli.hpp"
#include "puretone/evolve.hpp"
#include "puretone/io.hpp"
#include "puretone/linwave.hpp"
#include "puretone/numerics.hpp"
#include "puretone/sl_core.hpp"
#include "puretone/spectrum.hpp"

using namespace puretone;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;
int only = 0;  // 0 runs every criterion

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  if (only != 0 && only != id) return;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("AC%-2d %s  %s  [%s] (%.2f s)\n", id, o.pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Profile& two_level() {
  static const Profile p = Profile::piecewise_constant({1.0, 2.0}, {0.5, 0.5});
  return p;
}

// ‖(p−p̄)/α − cos(ω t) φ(x)‖_∞ over the trajectory nodes and the time grid.
double linear_limit_error(const BifurcationProblem& prob, const PureToneSolution& sol) {
  BifurcationProblem q = prob;
  q.M = sol.M;
  q.n_quad = sol.n_quad;
  const PureToneSolver solver(q);
  const EvolutionResult ev = solver.reconstruct(sol, true);
  const TileField tile = tile_from_trajectory(ev.trajectory, q.state.profile, sol.n_quad, q.chi);
  const LinearMode mode = eigenfunction_at(q.state.profile, solver.eigen(), tile.x);
  double err = 0.0;
  for (std::size_t ix = 0; ix < tile.nx(); ++ix)
    for (std::size_t it = 0; it < tile.nt(); ++it) {
      const double lin = std::cos(sol.omega * tile.t[it]) * mode.phi[ix];
      err = std::max(err, std::abs((tile.P(ix, it) - sol.p_bar) / sol.alpha - lin));
    }
  return err;
}

// Smallest p/q (q <= 6) within tol of r, or an empty string.
std::string near_rational(double r, double tol) {
  for (int q = 1; q <= 6; ++q) {
    const long p = std::lround(r * q);
    if (p > 0 && std::abs(r - static_cast<double>(p) / q) < tol)
      return std::to_string(p) + "/" + std::to_string(q);
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) only = std::atoi(argv[1]);
  criterion(1, "closed-form spectrum of the constant profile", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const Profile p = Profile::constant(1.0, 1.0);
    double worst_w = 0, worst_T = 0;
    for (int k = 1; k <= 50; ++k) {
      const EigenFrequency e = eigen_solve(p, k, 1);
      worst_w = std::max(worst_w, std::abs(e.omega - k * kPi / 2));
      worst_T = std::max(worst_T, std::abs(e.T - 4.0));
    }
    const double t = elapsed(t0);
    return Outcome{worst_w < 1e-10 && worst_T < 1e-10 && t < 1.0,
                   fmt("max|dw|=%.2e max|dT|=%.2e t=%.3fs", worst_w, worst_T, t)};
  });

  criterion(2, "transfer-matrix product vs dense RK4", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> wd(0.1, 10.0);
    double worst = 0, worst_det = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto r = oracle::random_pwc(rng, 5);
      const Profile p = Profile::piecewise_constant(r.sigma, r.widths);
      for (int q = 0; q < 10; ++q) {
        const double w = wd(rng);
        const TransferMatrix m = fundamental_matrix(p, w);
        const auto ref = oracle::rk4_psi(r.sigma, r.widths, w, 10000);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(m(i, j) - ref[i][j]));
        worst_det = std::max(worst_det, std::abs(m.det() - 1.0));
      }
    }
    const double t = elapsed(t0);
    return Outcome{worst < 1e-8 && worst_det < 1e-12 && t < 30,
                   fmt("max entry err=%.2e max|det-1|=%.2e t=%.2fs", worst, worst_det, t)};
  });

  criterion(3, "divisor consistency on the two-level profile", [] {
    const ResonanceReport rep = resonance_scan(two_level(), 1, 64, 1);
    double min_rest = 1e300;
    for (int j = 2; j <= 64; ++j) min_rest = std::min(min_rest, std::abs(rep.table.at(j)));
    const double d1 = std::abs(rep.table.at(1));
    return Outcome{d1 < 1e-9 && min_rest > 1e-6 && rep.verdict == Verdict::nonresonant &&
                       rep.cross_check_consistent,
                   fmt("|d1|=%.2e min_{j>=2}|dj|=%.4g at j=%g cross-check=%g", d1, min_rest,
                       rep.argmin_j, rep.cross_check_consistent ? 1 : 0)};
  });

  criterion(4, "eigenfrequency growth, k = 1..200", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const double slope = kPi / 3;
    double prev = 0;
    bool increasing = true;
    std::vector<double> dev;
    for (int k = 1; k <= 200; ++k) {
      const double w = eigen_solve(two_level(), k, 1).omega;
      increasing = increasing && w > prev;
      prev = w;
      dev.push_back(std::abs(w / k - slope));
    }
    // Deviation vanishes at every third k, so monotonicity is read over dyadic blocks.
    std::vector<double> block;
    for (int lo = 1; lo <= 128; lo *= 2) {
      double m = 0;
      for (int k = lo; k < 2 * lo && k <= 200; ++k) m = std::max(m, dev[k - 1]);
      block.push_back(m);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < block.size(); ++i) decreasing = decreasing && block[i] < block[i - 1];
    const double t = elapsed(t0);
    return Outcome{increasing && decreasing && dev[199] < 2e-2 && t < 10,
                   fmt("increasing=%g block maxima decreasing=%g |w200/200-pi/3|=%.3e t=%.2fs",
                       increasing, decreasing, dev[199], t)};
  });

  criterion(5, "completely resonant profile rejected by perturb", [] {
    std::ostringstream out, err;
    const int code = cli::run({"puretone", "perturb", "--profile", "builtin:constant", "--k", "1",
                               "--out-dir", "."},
                              out, err);
    const bool msg = err.str().find("resonant profile") != std::string::npos;
    return Outcome{code == 3 && msg, "exit code " + std::to_string(code)};
  });

  criterion(6, "quiet state is a fixed point", [] {
    QuietState st;
    st.profile = two_level();
    EvolutionConfig cfg;
    cfg.M = 16;
    cfg.n_quad = 64;
    cfg.dx = st.profile.ell() / 1000;
    const double T = eigen_solve(st.profile, 1, 1).T;
    const auto r = nonlinear_evolve(st, FourierField::constant(T, cfg.M, st.p_bar), cfg);
    double err = std::abs(r.y.a[0] - st.p_bar);
    for (int j = 1; j <= cfg.M; ++j) err = std::max({err, std::abs(r.y.a[j]), std::abs(r.y.b[j])});
    return Outcome{err < 1e-13 && r.steps >= 1000,
                   fmt("coefficient err=%.2e over %g steps", err, r.steps)};
  });

  criterion(7, "linearized evolution vs transfer matrix, k <= 16, M = 64", [] {
    QuietState st;
    st.profile = two_level();
    const EigenFrequency e1 = eigen_solve(st.profile, 1, 1);
    EvolutionConfig cfg;
    cfg.M = 64;
    cfg.n_quad = 256;
    cfg.dx = 2.5e-4;
    const FourierField base = FourierField::constant(e1.T, cfg.M, st.p_bar);
    double worst = 0;
    for (int k = 1; k <= 16; ++k) {
      const auto lin = linearized_evolve(st, base, FourierField::cosine(e1.T, cfg.M, k), cfg);
      const TransferMatrix m = fundamental_matrix(st.profile, k * e1.omega);
      double err = std::max(std::abs(lin.tangent.a[k] - m(0, 0)), std::abs(lin.tangent.b[k] - m(1, 0)));
      for (int j = 0; j <= cfg.M; ++j)
        if (j != k) err = std::max({err, std::abs(lin.tangent.a[j]), std::abs(lin.tangent.b[j])});
      worst = std::max(worst, err);
    }
    return Outcome{worst < 1e-8, fmt("max err=%.2e (dx=%.1e)", worst, cfg.dx)};
  });

  criterion(8, "genuine nonlinearity: b(ell) < 0 and dg/dz dual path", [] {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> gd(1.05, 3.0), pd(0.2, 5.0);
    int negative = 0;
    double worst_b = -1e300;
    for (int trial = 0; trial < 100; ++trial) {
      const auto r = oracle::random_pwc(rng, 5);
      QuietState st;
      st.profile = Profile::piecewise_constant(r.sigma, r.widths);
      st.eos.gamma = gd(rng);
      st.p_bar = pd(rng);
      const SecondDerivative sd = second_derivative_quiet(st, 1, 1);
      if (sd.b_ell < 0) ++negative;
      worst_b = std::max(worst_b, sd.b_ell);
    }
    BifurcationProblem prob;
    prob.state.profile = two_level();
    const DgdzCheck chk = dgdz_check(prob);
    return Outcome{negative == 100 && chk.relative_difference < 1e-4,
                   fmt("b<0 on %g/100 (max b=%.3e); dgdz fd=%.8g pairing=%.8g", negative, worst_b,
                       chk.finite_difference, chk.pairing) +
                       fmt(" rel=%.2e", chk.relative_difference)};
  });

  BifurcationProblem prob;
  prob.state.profile = two_level();
  prob.k = 1;
  prob.chi = 1;
  prob.M = 32;
  prob.n_quad = 256;
  prob.alphas = {1e-4, 2e-4, 5e-4, 1e-3};
  BranchResult branch;

  criterion(9, "bifurcation branch on the two-level profile", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    branch = branch_continue(prob);
    if (!branch.complete) return Outcome{false, "branch incomplete: " + branch.failure};
    double worst_res = 0;
    for (const auto& s : branch.solutions)
      worst_res = std::max(worst_res, s.converged ? s.residual_weighted : 1e300);
    const auto& S = branch.solutions;
    const double rz1 = S[1].z / S[0].z, rz2 = S[3].z / S[2].z;
    const double ra1 = S[1].max_a / S[0].max_a, ra2 = S[3].max_a / S[2].max_a;
    auto in = [](double r) { return r >= 3.5 && r <= 4.5; };
    const double l0 = linear_limit_error(prob, S[0]), l1 = linear_limit_error(prob, S[1]);
    const double l2 = linear_limit_error(prob, S[2]), l3 = linear_limit_error(prob, S[3]);
    const double h1 = l1 / l0, h2 = l3 / l2;
    auto halves = [](double r) { return r > 1.8 && r < 2.2; };
    const double t = elapsed(t0);
    const bool pass = worst_res < 1e-10 && in(rz1) && in(rz2) && in(ra1) && in(ra2) &&
                      halves(h1) && halves(h2) && t < 300;
    return Outcome{pass, fmt("max weighted res=%.2e z ratios %.4f %.4f", worst_res, rz1, rz2) +
                             fmt(" a ratios %.4f %.4f", ra1, ra2) +
                             fmt(" linear-limit ratios %.4f %.4f t=%.1fs", h1, h2, t)};
  });

  criterion(10, "tile integrity for alpha = 1e-3", [&] {
    if (branch.solutions.empty()) branch = branch_continue(prob);
    if (!branch.complete) return Outcome{false, "no alpha = 1e-3 solution"};
    const PureToneSolution& sol = branch.solutions.back();
    BifurcationProblem q = prob;
    q.M = sol.M;
    q.n_quad = sol.n_quad;
    const EvolutionResult ev = PureToneSolver(q).reconstruct(sol, true);
    const TileField base = tile_from_trajectory(ev.trajectory, q.state.profile, sol.n_quad, 1);
    const TileField tile = extend_tile(base, 1);
    const std::size_t nt = tile.nt(), last = tile.nx() - 1;
    bool periodic = std::abs(tile.x[last] - tile.x[0] - tile.period_x) < 1e-12;
    for (std::size_t it = 0; it < nt; ++it)
      periodic = periodic && tile.P(last, it) == tile.P(0, it) && tile.U(last, it) == tile.U(0, it);
    const double seam = seam_discontinuity(tile);
    bool u_zero = true;
    for (std::size_t s = 0; s < tile.segment_start.size(); ++s)
      for (std::size_t ix = 0; ix < tile.nx(); ++ix)
        if (std::abs(std::fmod(tile.x[ix], 2 * tile.ell)) < 1e-12 ||
            std::abs(std::fmod(tile.x[ix], 2 * tile.ell) - 2 * tile.ell) < 1e-12)
          for (std::size_t it = 0; it < nt; ++it) u_zero = u_zero && tile.U(ix, it) == 0.0;
    return Outcome{periodic && seam < 1e-9 && u_zero,
                   fmt("x-periodic(exact)=%g seam=%.2e u(0)=0 exactly=%g", periodic, seam, u_zero)};
  });

  criterion(11, "genericity Monte Carlo, N = 2, 1e4 samples", [] {
    const auto t0 = std::chrono::steady_clock::now();
    GenericityConfig cfg;
    const GenericityStats a = genericity_mc(cfg);
    GenericityConfig cfg2 = cfg;
    cfg2.threads = 2;
    const GenericityStats b = genericity_mc(cfg2);
    bool same = a.samples.size() == b.samples.size();
    for (std::size_t i = 0; same && i < a.samples.size(); ++i)
      same = a.samples[i].min_residual == b.samples[i].min_residual &&
             a.samples[i].jumps == b.samples[i].jumps && a.samples[i].angles == b.samples[i].angles;
    long total = a.histogram.underflow + a.histogram.overflow;
    for (long c : a.histogram.counts) total += c;
    // Hits sitting next to a rational angle ratio lie near a resonant surface.
    std::string hits;
    int rational = 0;
    for (const auto& smp : a.samples) {
      if (smp.failed || smp.min_residual >= cfg.exact_tol) continue;
      const std::string pq = near_rational(smp.angles[1] / smp.angles[0], 1e-3);
      if (!pq.empty()) ++rational;
      hits += " #" + std::to_string(smp.id) + "(theta2/theta1~" + (pq.empty() ? "?" : pq) + ")";
    }
    const double t = elapsed(t0);
    const bool pass = a.exact_resonances == 0 && a.failures == 0 &&
                      total == cfg.samples && same && t < 600;
    return Outcome{pass, fmt("exact=%g failures=%g min residual=%.3e median log10=%.3f",
                             a.exact_resonances, a.failures, a.min_residual, a.median_log10) +
                             fmt(" histogram total=%g deterministic=%g t=%.1fs", total, same, t) +
                             fmt("; hits near rational angle ratio %g of %g:", rational,
                                 a.exact_resonances) +
                             hits};
  });

  if (only == 0) std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
