#include "puretone/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "puretone/bifurcate.hpp"
#include "puretone/errors.hpp"
#include "puretone/evolve.hpp"
#include "puretone/io.hpp"
#include "puretone/linwave.hpp"
#include "puretone/numerics.hpp"
#include "puretone/sl_core.hpp"
#include "puretone/spectrum.hpp"

namespace puretone::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string profile;
  std::string k = "1";
  std::string chi = "periodic";
  int modes = 32;
  int nt = 0;
  int nx = 512;
  double alpha = 0.0;
  std::string alpha_schedule;
  int jmax = 0;
  long samples = 10000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  double tol = 1e-8;
  double newton_tol = 1e-10;
  int threads = 1;
  double period = 0.0;
  int levels = 2;
  int kmax = 12;
  int lmax = 12;
  double dx = 0.0;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int chi_value(const Options& o) {
  if (o.chi == "periodic") return 1;
  if (o.chi == "acoustic") return 0;
  throw UsageError("--chi must be 'periodic' or 'acoustic'");
}

std::pair<int, int> k_range(const std::string& spec) {
  try {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
      const int k = std::stoi(spec);
      return {k, k};
    }
    return {std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("--k must be an integer or a range a:b");
  }
}

int single_k(const Options& o) {
  const auto [a, b] = k_range(o.k);
  if (a != b) throw UsageError("--k must be a single mode for this command");
  return a;
}

std::vector<double> parse_schedule(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("--alpha-schedule must be a comma separated list of numbers");
    }
  }
  return out;
}

QuietState need_profile(const Options& o) {
  if (o.profile.empty()) throw UsageError("--profile is required for this command");
  return resolve_profile(o.profile);
}

json eos_echo(const QuietState& st) {
  json levels = json::array();
  for (const auto& p : st.profile.pieces()) {
    const double mid = 0.5 * (p.x0() + p.x1());
    levels.push_back({{"x0", p.x0()}, {"x1", p.x1()}, {"A_mid", st.coefficient(mid)}});
  }
  return {{"gamma", st.eos.gamma}, {"k_ref", st.eos.k_ref}, {"pbar", st.p_bar},
          {"coefficients", levels}};
}

class Run {
 public:
  Run(std::string command, const Options& o, const std::vector<std::string>& args)
      : opt_(o), start_(std::chrono::steady_clock::now()) {
    manifest_.command = command;
    std::string line;
    for (const auto& a : args) line += (line.empty() ? "" : " ") + a;
    manifest_.config["argv"] = line;
    manifest_.seed = o.seed;
  }
  void profile(const QuietState& st) {
    manifest_.profile_hash = profile_hash(st);
    manifest_.config["profile"] = profile_to_json(st);
    manifest_.config["eos"] = eos_echo(st);
  }
  json& config() { return manifest_.config; }
  fs::path path(const std::string& name) {
    manifest_.outputs.push_back(name);
    return fs::path(opt_.out_dir) / name;
  }
  void finish() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    manifest_.timings["wall_seconds"] = secs;
    write_json(fs::path(opt_.out_dir) / (manifest_.command + ".manifest.json"),
               manifest_.to_json());
  }

 private:
  const Options& opt_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

int cmd_eigen(const Options& o, Run& run, std::ostream& out) {
  const QuietState st = need_profile(o);
  run.profile(st);
  const int chi = chi_value(o);
  const auto [k0, k1] = k_range(o.k);
  if (k0 < 1 || k1 < k0) throw UsageError("--k range must satisfy 1 <= a <= b");
  CsvTable t{{"k", "omega", "T", "kappa_residual"}, {}};
  for (int k = k0; k <= k1; ++k) {
    if (chi == 0 && k % 2 != 0) continue;
    const EigenFrequency ef = eigen_solve(st.profile, k, chi);
    t.rows.push_back({std::to_string(k), format_double(ef.omega), format_double(ef.T),
                      format_double(ef.kappa_residual)});
  }
  run.config()["k"] = o.k;
  run.config()["chi"] = chi;
  write_csv(run.path("eigen.csv"), t);
  out << "wrote " << t.rows.size() << " eigenfrequencies\n";
  return ok;
}

double period_for(const Options& o, const QuietState& st, int chi) {
  if (o.period > 0) return o.period;
  return eigen_solve(st.profile, single_k(o), chi).T;
}

CsvTable divisor_csv(const DivisorTable& table) {
  CsvTable t{{"j", "delta"}, {}};
  for (int j = 1; j <= table.j_max(); ++j)
    t.rows.push_back({std::to_string(j), format_double(table.at(j))});
  return t;
}

int cmd_divisors(const Options& o, Run& run, std::ostream& out) {
  const QuietState st = need_profile(o);
  run.profile(st);
  const int chi = chi_value(o);
  const int jmax = o.jmax > 0 ? o.jmax : 64;
  const double T = period_for(o, st, chi);
  const DivisorTable table = divisors(st.profile, T, chi, jmax);
  run.config()["T"] = T;
  run.config()["chi"] = chi;
  run.config()["jmax"] = jmax;
  write_csv(run.path("divisors.csv"), divisor_csv(table));
  out << "wrote " << jmax << " divisors at T=" << format_double(T) << "\n";
  return ok;
}

int cmd_resonance(const Options& o, Run& run, std::ostream& out) {
  const QuietState st = need_profile(o);
  run.profile(st);
  const int chi = chi_value(o);
  const int k = single_k(o);
  const int jmax = o.jmax > 0 ? o.jmax : 64;
  ResonanceThresholds th;
  th.tol = o.tol;
  th.resonant_below = std::min(th.resonant_below, o.tol);
  const ResonanceReport rep = resonance_scan(st.profile, k, jmax, chi, th);
  json matches = json::array();
  for (const auto& m : rep.small_divisors)
    matches.push_back({{"j", m.j}, {"l", m.l}, {"delta", m.delta}, {"ratio_residual", m.ratio_residual}});
  json hits = json::array();
  for (const auto& m : rep.frequency_hits)
    hits.push_back({{"j", m.j}, {"l", m.l}, {"delta", m.delta}, {"ratio_residual", m.ratio_residual}});
  const json doc = {{"k", rep.k},
                    {"chi", rep.chi},
                    {"T", rep.T},
                    {"j_max", rep.j_max},
                    {"min_divisor", rep.min_divisor},
                    {"argmin_j", rep.argmin_j},
                    {"verdict", to_string(rep.verdict)},
                    {"offending", rep.offending},
                    {"small_divisors", matches},
                    {"frequency_hits", hits},
                    {"cross_check_consistent", rep.cross_check_consistent},
                    {"thresholds", {{"tol", th.tol}, {"resonant_below", th.resonant_below},
                                    {"match_tol", th.match_tol}}}};
  run.config()["k"] = k;
  run.config()["chi"] = chi;
  run.config()["jmax"] = jmax;
  write_json(run.path("resonance.json"), doc);
  write_csv(run.path("divisors.csv"), divisor_csv(rep.table));
  out << "verdict " << to_string(rep.verdict) << " (min |delta| = "
      << format_double(rep.min_divisor) << " at j=" << rep.argmin_j << ")\n";
  return ok;
}

int cmd_genericity(const Options& o, Run& run, std::ostream& out) {
  GenericityConfig cfg;
  cfg.levels = o.levels;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.k_max = o.kmax;
  cfg.l_max = o.lmax;
  cfg.j_max = o.jmax > 0 ? o.jmax : 24;
  cfg.threads = o.threads;
  const GenericityStats s = genericity_mc(cfg);
  run.config()["levels"] = cfg.levels;
  run.config()["samples"] = cfg.samples;
  run.config()["box"] = {{"J", {cfg.box.J_lo, cfg.box.J_hi}},
                         {"theta", {cfg.box.theta_lo, cfg.box.theta_hi}}};
  run.config()["bounds"] = {{"k_max", cfg.k_max}, {"l_max", cfg.l_max}, {"j_max", cfg.j_max}};

  CsvTable samples{{"sample_id", "min_residual", "k", "j", "l", "failed"}, {}};
  for (int q = 0; q + 1 < cfg.levels; ++q) samples.header.push_back("J_" + std::to_string(q + 1));
  for (int q = 0; q < cfg.levels; ++q) samples.header.push_back("theta_" + std::to_string(q + 1));
  for (const auto& r : s.samples) {
    std::vector<std::string> row{std::to_string(r.id), format_double(r.min_residual),
                                 std::to_string(r.k), std::to_string(r.j), std::to_string(r.l),
                                 r.failed ? "1" : "0"};
    for (double v : r.jumps) row.push_back(format_double(v));
    for (double v : r.angles) row.push_back(format_double(v));
    samples.rows.push_back(std::move(row));
  }
  write_csv(run.path("genericity_samples.csv"), samples);

  CsvTable hist{{"log10_lo", "log10_hi", "count"}, {}};
  hist.rows.push_back({"-inf", format_double(s.histogram.edges.front()),
                       std::to_string(s.histogram.underflow)});
  for (std::size_t b = 0; b < s.histogram.counts.size(); ++b)
    hist.rows.push_back({format_double(s.histogram.edges[b]),
                         format_double(s.histogram.edges[b + 1]),
                         std::to_string(s.histogram.counts[b])});
  hist.rows.push_back({format_double(s.histogram.edges.back()), "inf",
                       std::to_string(s.histogram.overflow)});
  write_csv(run.path("genericity_histogram.csv"), hist);

  write_json(run.path("genericity_stats.json"),
             {{"samples", cfg.samples},
              {"exact_resonances", s.exact_resonances},
              {"exact_tol", cfg.exact_tol},
              {"failures", s.failures},
              {"min_residual", s.min_residual},
              {"median_log10_residual", s.median_log10},
              {"mean_log10_residual", s.mean_log10}});
  out << "exact resonances: " << s.exact_resonances << " of " << cfg.samples << "\n";
  return ok;
}

int cmd_mode(const Options& o, Run& run, std::ostream& out) {
  const QuietState st = need_profile(o);
  run.profile(st);
  const int chi = chi_value(o);
  const int k = single_k(o);
  const int nt = o.nt > 0 ? o.nt : 256;
  const EigenFrequency ef = eigen_solve(st.profile, k, chi);
  const LinearMode mode = eigenfunction_profiles(st.profile, ef, o.nx);
  CsvTable t{{"x", "phi", "psi"}, {}};
  for (std::size_t i = 0; i < mode.x.size(); ++i)
    t.rows.push_back({format_double(mode.x[i]), format_double(mode.phi[i]),
                      format_double(mode.psi[i])});
  write_csv(run.path("mode.csv"), t);
  TileField tile = mode_field(mode, nt, st.profile);
  tile.provenance.profile_hash = profile_hash(st);
  const BoundaryResidual br = boundary_residual(tile, chi);
  write_json(run.path("mode.json"), {{"k", k},
                                     {"chi", chi},
                                     {"omega", ef.omega},
                                     {"T", ef.T},
                                     {"boundary_residual_x0", br.at_zero},
                                     {"boundary_residual_ell", br.at_ell}});
  run.config()["k"] = k;
  run.config()["chi"] = chi;
  run.config()["nx"] = o.nx;
  run.config()["nt"] = nt;
  out << "mode k=" << k << " omega=" << format_double(ef.omega) << "\n";
  return ok;
}

BifurcationProblem make_problem(const Options& o, const QuietState& st) {
  BifurcationProblem p;
  p.state = st;
  p.k = single_k(o);
  p.chi = chi_value(o);
  p.M = o.modes;
  p.n_quad = o.nt > 0 ? o.nt : 0;
  p.tol.residual = o.newton_tol;
  p.tol.resonance.tol = o.tol;
  p.tol.resonance.resonant_below = std::min(p.tol.resonance.resonant_below, o.tol);
  p.threads = o.threads;
  p.dx = o.dx;
  if (!o.alpha_schedule.empty())
    p.alphas = parse_schedule(o.alpha_schedule);
  else if (o.alpha > 0)
    p.alphas = {o.alpha};
  else
    p.alphas = {1e-4, 2e-4, 5e-4, 1e-3};
  return p;
}

json solution_json(const PureToneSolution& s) {
  return {{"alpha", s.alpha},
          {"z", s.z},
          {"a", s.a},
          {"residual_weighted", s.residual_weighted},
          {"aux_residual", s.aux_residual},
          {"bif_residual", s.bif_residual},
          {"newton_iters", s.newton_iters},
          {"M", s.M},
          {"n_quad", s.n_quad},
          {"p_bar", s.p_bar},
          {"p_effective", s.p_effective},
          {"omega", s.omega},
          {"T", s.T},
          {"max_a", s.max_a},
          {"tail_ok", s.tail_ok},
          {"converged", s.converged}};
}

json problem_json(const BifurcationProblem& p) {
  return {{"k", p.k},          {"chi", p.chi},
          {"M", p.M},          {"n_quad", p.n_quad == 0 ? 4 * p.M : p.n_quad},
          {"alphas", p.alphas}, {"residual_tol", p.tol.residual},
          {"sobolev_b", p.sobolev_b}, {"resonance_tol", p.tol.resonance.tol}};
}

int cmd_perturb(const Options& o, Run& run, std::ostream& out) {
  const QuietState st = need_profile(o);
  run.profile(st);
  const BifurcationProblem p = make_problem(o, st);
  run.config()["problem"] = problem_json(p);
  const BranchResult br = branch_continue(p);
  json sols = json::array();
  for (const auto& s : br.solutions) sols.push_back(solution_json(s));
  write_json(run.path("branch.json"), {{"config", problem_json(p)},
                                       {"eos", eos_echo(st)},
                                       {"solutions", sols},
                                       {"complete", br.complete},
                                       {"failure", br.failure},
                                       {"failure_kind", br.failure_kind},
                                       {"largest_alpha", br.largest_alpha}});
  out << "solved " << br.solutions.size() << " of " << p.alphas.size() << " amplitudes\n";
  if (!br.complete) throw SolverError("branch stopped: " + br.failure);
  return ok;
}

TileField quiet_tile(const QuietState& st, double T, int nx, int nt, int chi) {
  TileField t;
  t.chi = chi;
  t.ell = st.profile.ell();
  t.T = T;
  t.period_x = t.ell;
  t.segment_start = {0};
  for (int i = 0; i <= nx; ++i) t.x.push_back(t.ell * i / nx);
  for (int n = 0; n < nt; ++n) t.t.push_back(T * n / nt);
  for (double x : t.x) t.sigma.push_back(st.profile.sigma(x));
  t.p.assign(t.x.size() * t.t.size(), st.p_bar);
  t.u.assign(t.p.size(), 0.0);
  return t;
}

int cmd_tile(const Options& o, Run& run, std::ostream& out) {
  const QuietState st = need_profile(o);
  run.profile(st);
  const int chi = chi_value(o);
  const int k = single_k(o);
  TileField base;
  double residual = 0.0;
  if (o.alpha == 0.0 && o.alpha_schedule.empty()) {
    const double T = eigen_solve(st.profile, k, chi).T;
    base = quiet_tile(st, T, o.nx, o.nt > 0 ? o.nt : 256, chi);
  } else {
    BifurcationProblem p = make_problem(o, st);
    if (o.alpha > 0 && !o.alpha_schedule.empty() && p.alphas.back() != o.alpha)
      p.alphas.push_back(o.alpha);
    const BranchResult br = branch_continue(p);
    if (!br.complete) throw SolverError("branch stopped: " + br.failure);
    const PureToneSolution& sol = br.solutions.back();
    BifurcationProblem q = p;
    q.M = sol.M;
    q.n_quad = sol.n_quad;
    const PureToneSolver solver(q);
    const EvolutionResult ev = solver.reconstruct(sol, true);
    base = tile_from_trajectory(ev.trajectory, st.profile, sol.n_quad, chi);
    base.provenance.alpha = sol.alpha;
    residual = sol.residual_weighted;
  }
  base.provenance.profile_hash = profile_hash(st);
  base.provenance.k = k;
  const BoundaryResidual br = boundary_residual(base, chi);
  const TileField tile = extend_tile(base, chi);
  write_tile_csv(run.path("tile.csv"), tile);
  write_tile_binary(run.path("tile.bin"), tile);
  write_json(run.path("tile.json"), {{"chi", chi},
                                     {"k", k},
                                     {"alpha", tile.provenance.alpha},
                                     {"T", tile.T},
                                     {"period_x", tile.period_x},
                                     {"nx", tile.nx()},
                                     {"nt", tile.nt()},
                                     {"seam_discontinuity", seam_discontinuity(tile)},
                                     {"boundary_residual_x0", br.at_zero},
                                     {"boundary_residual_ell", br.at_ell},
                                     {"newton_weighted_residual", residual},
                                     {"profile_hash", tile.provenance.profile_hash}});
  run.config()["k"] = k;
  run.config()["chi"] = chi;
  out << "tile " << tile.nx() << " x " << tile.nt() << "\n";
  return ok;
}

int cmd_verify(const Options& o, Run& run, std::ostream& out) {
  const QuietState st = o.profile.empty() ? builtin_profile("two-level") : need_profile(o);
  run.profile(st);
  const int chi = chi_value(o);
  const Profile& pr = st.profile;
  json checks = json::array();
  bool all = true;
  auto check = [&](const std::string& name, bool pass, double value) {
    checks.push_back({{"name", name}, {"pass", pass}, {"value", value}});
    all = all && pass;
    out << (pass ? "[PASS] " : "[FAIL] ") << name << " (" << format_double(value) << ")\n";
  };

  const double Lam = asymptotic_slope(pr);
  double det_err = 0.0;
  for (int q = 1; q <= 20; ++q)
    det_err = std::max(det_err, std::abs(fundamental_matrix(pr, 0.37 * q * Lam).det() - 1.0));
  check("unit determinant of the transfer matrix", det_err < (pr.is_piecewise_constant() ? 1e-12 : 1e-8), det_err);

  double prev = -1.0;
  bool mono = true;
  for (int q = 1; q <= 200; ++q) {
    const double kv = kappa(pr, 0.05 * q * Lam);
    mono = mono && kv > prev;
    prev = kv;
  }
  check("kappa strictly increasing in omega", mono, prev);

  const int kmax = std::max(2, o.kmax);
  double last = 0.0, worst_div = 0.0, worst_kappa = 0.0;
  bool increasing = true;
  for (int k = 1; k <= kmax; ++k) {
    if (chi == 0 && k % 2 != 0) continue;
    const EigenFrequency ef = eigen_solve(pr, k, chi);
    increasing = increasing && ef.omega > last;
    last = ef.omega;
    worst_kappa = std::max(worst_kappa, std::abs(ef.kappa_residual));
    worst_div = std::max(worst_div, std::abs(divisor(pr, ef.T, chi, k)));
  }
  check("eigenfrequencies strictly increasing", increasing, last);
  check("kappa(omega_k) = k", worst_kappa < 1e-10, worst_kappa);
  check("delta_k(T_k) = 0", worst_div < 1e-9, worst_div);

  const int k = chi == 0 ? 2 : 1;
  const EigenFrequency ef = eigen_solve(pr, k, chi);
  EvolutionConfig cfg;
  cfg.M = 8;
  cfg.n_quad = 32;
  cfg.dx = 2e-4 * pr.ell();
  const auto quiet = nonlinear_evolve(st, FourierField::constant(ef.T, cfg.M, st.p_bar), cfg);
  double qerr = std::abs(quiet.y.a[0] - st.p_bar);
  for (int j = 1; j <= cfg.M; ++j) qerr = std::max({qerr, std::abs(quiet.y.a[j]), std::abs(quiet.y.b[j])});
  check("quiet state is a fixed point", qerr < 1e-13, qerr);

  const auto lin = linearized_evolve(st, FourierField::constant(ef.T, cfg.M, st.p_bar),
                                     FourierField::cosine(ef.T, cfg.M, k), cfg);
  const TransferMatrix psi = fundamental_matrix(pr, ef.omega);
  const double lin_err =
      std::max(std::abs(lin.tangent.a[k] - psi(0, 0)), std::abs(lin.tangent.b[k] - psi(1, 0)));
  check("linearized evolution matches the transfer matrix", lin_err < 1e-8, lin_err);

  const SecondDerivative sd = second_derivative_quiet(st, k, chi);
  check("b(ell) < 0", sd.b_ell < 0, sd.b_ell);

  const TileField qt = quiet_tile(st, ef.T, 16, 16, chi);
  const TileField ext = extend_tile(qt, chi);
  check("quiet tile extends continuously", seam_discontinuity(ext) == 0.0, seam_discontinuity(ext));

  write_json(run.path("verify.json"), {{"checks", checks}, {"pass", all}});
  return all ? ok : numerical_failure;
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& msg, int code) {
  err << json{{"error", msg}, {"kind", kind}, {"exit_code", code}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Pure-tone modes of 1-D gas dynamics over entropy profiles", "puretone"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  auto add_common = [&](CLI::App* s) {
    s->add_option("--profile", o.profile, "profile JSON file or builtin:<name>");
    s->add_option("--k", o.k, "mode index or range a:b");
    s->add_option("--chi", o.chi, "boundary condition: periodic or acoustic")
        ->check(CLI::IsMember({"periodic", "acoustic"}));
    s->add_option("--modes", o.modes, "mode cutoff M")->check(CLI::PositiveNumber);
    s->add_option("--nt", o.nt, "time grid size")->check(CLI::NonNegativeNumber);
    s->add_option("--nx", o.nx, "x grid cells per ell")->check(CLI::PositiveNumber);
    s->add_option("--alpha", o.alpha, "amplitude");
    s->add_option("--alpha-schedule", o.alpha_schedule, "comma separated amplitudes");
    s->add_option("--jmax", o.jmax, "largest divisor index")->check(CLI::NonNegativeNumber);
    s->add_option("--samples", o.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed, "random seed");
    s->add_option("--out-dir", o.out_dir, "output directory");
    s->add_option("--tol", o.tol, "resonance tolerance")->check(CLI::PositiveNumber);
    s->add_option("--newton-tol", o.newton_tol, "weighted Newton residual tolerance")
        ->check(CLI::PositiveNumber);
    s->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    s->add_option("--period", o.period, "period T for divisors (default T_k)");
    s->add_option("--levels", o.levels, "levels N for genericity sampling");
    s->add_option("--kmax", o.kmax, "largest k in scans");
    s->add_option("--lmax", o.lmax, "largest l in genericity scans");
    s->add_option("--dx", o.dx, "x step (0 selects the stability bound)");
  };
  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const Options&, Run&, std::ostream&);
  };
  const Entry entries[] = {
      {"eigen", "eigenfrequency table", cmd_eigen},
      {"divisors", "small divisor table", cmd_divisors},
      {"resonance", "resonance verdict for a mode", cmd_resonance},
      {"genericity", "Monte Carlo resonance statistics", cmd_genericity},
      {"mode", "linear mode profiles", cmd_mode},
      {"perturb", "nonlinear branch from a linear mode", cmd_perturb},
      {"tile", "reflected space-time tile", cmd_tile},
      {"verify", "invariant checks", cmd_verify},
  };
  std::vector<CLI::App*> subs;
  for (const auto& e : entries) {
    subs.push_back(app.add_subcommand(e.name, e.help));
    add_common(subs.back());
  }

  std::vector<std::string> argv_store = args;
  if (argv_store.empty()) argv_store.push_back("puretone");
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", e.what(), usage_error);
    return usage_error;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      Run run(entries[i].name, o, argv_store);
      const int code = entries[i].fn(o, run, out);
      run.finish();
      return code;
    } catch (const UsageError& e) {
      emit_error(err, "usage", e.what(), usage_error);
      return usage_error;
    } catch (const IoError& e) {
      emit_error(err, "io", e.what(), usage_error);
      return usage_error;
    } catch (const ResonanceError& e) {
      emit_error(err, "resonance", e.what(), resonance_gate);
      return resonance_gate;
    } catch (const DomainError& e) {
      emit_error(err, "domain", e.what(), usage_error);
      return usage_error;
    } catch (const ShockProximityError& e) {
      emit_error(err, "shock_guard", e.what(), numerical_failure);
      return numerical_failure;
    } catch (const std::filesystem::filesystem_error& e) {
      emit_error(err, "io", e.what(), usage_error);
      return usage_error;
    } catch (const std::exception& e) {
      emit_error(err, "numerical", e.what(), numerical_failure);
      return numerical_failure;
    }
  }
  emit_error(err, "usage", "no command given", usage_error);
  return usage_error;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace puretone::cli
