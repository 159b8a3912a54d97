#include "puretone/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "puretone/errors.hpp"
#include "puretone/numerics.hpp"
#include "puretone/sl_core.hpp"

namespace puretone {

double kappa(const Profile& profile, double omega) {
  return 2.0 / kPi * angle_at_ell(profile, omega, 0.0);
}

KappaValue kappa_with_derivative(const Profile& profile, double omega) {
  const PruferState st = angle_state_at_ell(profile, omega, 0.0);
  return {2.0 / kPi * st.theta, 2.0 / kPi * st.zeta};
}

double asymptotic_slope(const Profile& profile) { return 0.5 * kPi / profile.sigma_integral(); }

EigenFrequency eigen_solve(const Profile& profile, int k, int chi) {
  if (chi != 0 && chi != 1) throw DomainError("eigen_solve: chi must be 0 or 1");
  if (k < 1) throw DomainError("eigen_solve: k must be positive");
  if (chi == 0 && k % 2 != 0) throw DomainError("eigen_solve: acoustic modes need even k");
  const double target = k;
  const double guess = k * asymptotic_slope(profile);

  double lo = 0.5 * guess, hi = 1.5 * guess;
  int expand = 0;
  while (kappa(profile, lo) >= target) {
    lo *= 0.5;
    if (++expand > 200) throw SolverError("eigen_solve: lower bracket not found");
  }
  expand = 0;
  while (kappa(profile, hi) <= target) {
    hi *= 2.0;
    if (++expand > 200) throw SolverError("eigen_solve: upper bracket not found");
  }

  double omega = std::clamp(guess, lo, hi);
  if (omega <= lo || omega >= hi) omega = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const KappaValue kv = kappa_with_derivative(profile, omega);
    const double f = kv.kappa - target;
    if (f == 0.0) break;
    if (f < 0) lo = omega; else hi = omega;
    double next = kv.dkappa > 0 ? omega - f / kv.dkappa : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - omega);
    omega = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * omega ||
        (hi - lo) <= 4.0 * std::numeric_limits<double>::epsilon() * omega)
      break;
  }
  EigenFrequency ef;
  ef.k = k;
  ef.omega = omega;
  ef.T = 2.0 * kPi * k / omega;
  ef.chi = chi;
  ef.kappa_residual = kappa(profile, omega) - target;
  if (!(std::abs(ef.kappa_residual) < 1e-10))
    throw SolverError("eigen_solve: no convergence for k=" + std::to_string(k));
  return ef;
}

double DivisorTable::bound() const {
  double m = 0;
  for (double d : delta) m = std::max(m, std::abs(d));
  return m;
}

double divisor(const Profile& profile, double T, int chi, int j) {
  if (!(T > 0)) throw DomainError("divisors: period must be positive");
  if (chi != 0 && chi != 1) throw DomainError("divisors: chi must be 0 or 1");
  const TransferMatrix psi = fundamental_matrix(profile, j * 2.0 * kPi / T);
  const auto [c, s] = quarter_turn(static_cast<long>(j) * chi);
  return s * psi(0, 0) + c * psi(1, 0);
}

DivisorTable divisors(const Profile& profile, double T, int chi, int j_max) {
  if (j_max < 1) throw DomainError("divisors: j_max must be positive");
  DivisorTable table;
  table.T = T;
  table.chi = chi;
  table.delta.resize(static_cast<std::size_t>(j_max));
  for (int j = 1; j <= j_max; ++j) table.delta[j - 1] = divisor(profile, T, chi, j);
  return table;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::nonresonant: return "nonresonant";
    case Verdict::borderline: return "borderline";
    default: return "resonant";
  }
}

ResonanceReport resonance_scan(const Profile& profile, int k, int j_max, int chi,
                               const ResonanceThresholds& th) {
  const EigenFrequency ef = eigen_solve(profile, k, chi);
  ResonanceReport rep;
  rep.k = k;
  rep.chi = chi;
  rep.T = ef.T;
  rep.j_max = j_max;
  rep.table = divisors(profile, ef.T, chi, j_max);
  rep.min_divisor = std::numeric_limits<double>::infinity();

  auto scanned = [&](int j) { return j != k && (chi == 1 || j % 2 == 0); };
  for (int j = 1; j <= j_max; ++j) {
    if (!scanned(j)) continue;
    const double d = std::abs(rep.table.at(j));
    if (d < rep.min_divisor) {
      rep.min_divisor = d;
      rep.argmin_j = j;
    }
    if (d <= th.tol) rep.offending.push_back(j);
  }
  if (rep.argmin_j == 0) rep.min_divisor = 0.0;
  if (rep.argmin_j != 0 && rep.min_divisor > th.tol)
    rep.verdict = Verdict::nonresonant;
  else if (rep.argmin_j != 0 && rep.min_divisor >= th.resonant_below)
    rep.verdict = Verdict::borderline;
  else
    rep.verdict = rep.argmin_j == 0 ? Verdict::nonresonant : Verdict::resonant;

  // Frequency cross-check: δ_j(T_k) = 0 iff jω_k/k = ω_l with l ≡ jχ (mod 2).
  const double wk = ef.omega;
  const double top = kappa(profile, j_max * wk / k);
  const int l_max = th.l_max > 0 ? th.l_max : static_cast<int>(std::ceil(top)) + 2;
  std::vector<double> omegas(static_cast<std::size_t>(l_max) + 1, 0.0);
  for (int l = 1; l <= l_max; ++l) omegas[l] = eigen_solve(profile, l, 1).omega;

  for (int j : rep.offending) {
    const int l = static_cast<int>(std::lround(kappa(profile, j * wk / k)));
    FrequencyMatch m{j, l, rep.table.at(j), std::numeric_limits<double>::infinity()};
    if (l >= 1 && l <= l_max) m.ratio_residual = std::abs(k * omegas[l] - j * wk) / wk;
    if (!(m.ratio_residual < th.match_tol)) rep.cross_check_consistent = false;
    rep.small_divisors.push_back(m);
  }
  for (int l = 1; l <= l_max; ++l) {
    if (l == k) continue;
    const int j = static_cast<int>(std::lround(k * omegas[l] / wk));
    if (j < 1 || j > j_max || !scanned(j)) continue;
    if (((l - j * chi) % 2 + 2) % 2 != 0) continue;
    const double r = std::abs(k * omegas[l] - j * wk) / wk;
    if (r < th.match_tol) {
      rep.frequency_hits.push_back({j, l, rep.table.at(j), r});
      if (r < th.resonant_below && std::abs(rep.table.at(j)) > th.tol)
        rep.cross_check_consistent = false;
    }
  }
  return rep;
}

SampleResult nearest_resonance(const std::vector<double>& omegas, int k_max, int l_max,
                               int j_max) {
  SampleResult best;
  best.min_residual = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    for (int l = 1; l <= l_max; ++l) {
      if (l == k) continue;
      const double wk = omegas.at(k), wl = omegas.at(l);
      const long jr = std::lround(k * wl / wk);
      const int j = static_cast<int>(std::clamp<long>(jr, 1, j_max));
      const double r = std::abs(k * wl - j * wk) / (k * wl);
      if (r < best.min_residual) {
        best.min_residual = r;
        best.k = k;
        best.j = j;
        best.l = l;
      }
    }
  }
  return best;
}

GenericityStats genericity_mc(const GenericityConfig& cfg) {
  if (cfg.levels < 2) throw DomainError("genericity_mc: need at least two levels");
  if (cfg.samples < 1) throw DomainError("genericity_mc: need at least one sample");
  if (!(cfg.box.J_lo > 0 && cfg.box.J_hi >= cfg.box.J_lo && cfg.box.theta_lo > 0 &&
        cfg.box.theta_hi >= cfg.box.theta_lo))
    throw DomainError("genericity_mc: invalid sampling box");

  GenericityStats stats;
  stats.config = cfg;
  stats.samples.resize(static_cast<std::size_t>(cfg.samples));
  // Parameters are drawn serially so results do not depend on the thread count.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> draw_J(cfg.box.J_lo, cfg.box.J_hi);
  std::uniform_real_distribution<double> draw_theta(cfg.box.theta_lo, cfg.box.theta_hi);
  for (long i = 0; i < cfg.samples; ++i) {
    auto& s = stats.samples[i];
    s.id = i;
    for (int q = 0; q + 1 < cfg.levels; ++q)
      s.jumps.push_back(cfg.box.J_lo == cfg.box.J_hi ? cfg.box.J_lo : draw_J(rng));
    for (int q = 0; q < cfg.levels; ++q)
      s.angles.push_back(cfg.box.theta_lo == cfg.box.theta_hi ? cfg.box.theta_lo
                                                              : draw_theta(rng));
  }

  const int ladder = std::max(cfg.k_max, cfg.l_max);
  parallel_for(stats.samples.size(), cfg.threads, [&](std::size_t i) {
    auto& s = stats.samples[i];
    try {
      const Profile p = from_jump_angles(s.jumps, s.angles, 1.0);
      std::vector<double> omegas(static_cast<std::size_t>(ladder) + 1, 0.0);
      for (int k = 1; k <= ladder; ++k) omegas[k] = eigen_solve(p, k, 1).omega;
      const SampleResult r = nearest_resonance(omegas, cfg.k_max, cfg.l_max, cfg.j_max);
      s.min_residual = r.min_residual;
      s.k = r.k;
      s.j = r.j;
      s.l = r.l;
    } catch (const std::exception& e) {
      s.failed = true;
      s.failure = e.what();
    }
  });

  const int nbins =
      static_cast<int>(std::lround((cfg.hist_hi - cfg.hist_lo) / cfg.hist_width));
  for (int b = 0; b <= nbins; ++b) stats.histogram.edges.push_back(cfg.hist_lo + b * cfg.hist_width);
  stats.histogram.counts.assign(static_cast<std::size_t>(nbins), 0);
  std::vector<double> logs;
  stats.min_residual = std::numeric_limits<double>::infinity();
  for (const auto& s : stats.samples) {
    if (s.failed) {
      ++stats.failures;
      continue;
    }
    if (s.min_residual < cfg.exact_tol) ++stats.exact_resonances;
    stats.min_residual = std::min(stats.min_residual, s.min_residual);
    const double lg = std::log10(std::max(s.min_residual, 1e-300));
    logs.push_back(lg);
    if (lg < cfg.hist_lo) {
      ++stats.histogram.underflow;
    } else if (lg >= cfg.hist_hi) {
      ++stats.histogram.overflow;
    } else {
      const int b = std::min(nbins - 1, static_cast<int>((lg - cfg.hist_lo) / cfg.hist_width));
      ++stats.histogram.counts[b];
    }
  }
  if (!logs.empty()) {
    double sum = 0;
    for (double v : logs) sum += v;
    stats.mean_log10 = sum / static_cast<double>(logs.size());
    std::sort(logs.begin(), logs.end());
    const std::size_t n = logs.size();
    stats.median_log10 = n % 2 ? logs[n / 2] : 0.5 * (logs[n / 2 - 1] + logs[n / 2]);
  }
  return stats;
}

}  // namespace puretone
