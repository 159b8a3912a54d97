#include "puretone/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "puretone/errors.hpp"
#include "puretone/numerics.hpp"
#include "puretone/sl_core.hpp"

namespace puretone {

void validate(const EvolutionConfig& cfg) {
  if (cfg.M < 1) throw DomainError("evolution: M must be positive");
  if (cfg.n_quad < 4 * cfg.M) throw DomainError("evolution: n_quad must be at least 4M");
  if (cfg.dx < 0) throw DomainError("evolution: dx must be nonnegative");
  if (!(cfg.step_safety > 0)) throw DomainError("evolution: step safety must be positive");
  if (!(cfg.shock_guard > 1)) throw DomainError("evolution: shock guard factor must exceed 1");
}

double step_bound(const QuietState& state, double T, const EvolutionConfig& cfg) {
  validate(cfg);
  const double omega_max = cfg.M * 2.0 * kPi / T;
  const double bound = cfg.step_safety / (state.profile.sigma_max() * omega_max);
  return cfg.dx > 0 ? std::min(cfg.dx, bound) : bound;
}

namespace {

// Which variational equations travel with the base deviation w = y − p̄.
enum class System { base, tangent, second };

int field_count(System s) {
  switch (s) {
    case System::base: return 1;
    case System::tangent: return 2;
    default: return 4;
  }
}

// Fields are packed as [a_0..a_M, b_0..b_M] each; order: w, Y1, Y2, Z.
class Integrator {
 public:
  Integrator(const QuietState& state, const EvolutionConfig& cfg, double T, System system)
      : cfg_(cfg),
        grid_(cfg.M, cfg.n_quad),
        system_(system),
        nf_(field_count(system)),
        M_(cfg.M),
        stride_(2 * (cfg.M + 1)),
        nu_(2.0 * kPi / T),
        gamma_(state.eos.gamma),
        pbar_(state.p_bar) {
    const int n = cfg.n_quad;
    for (auto* v : {&p_, &vfac_, &vp_, &vpp_, &flux_, &P1_, &P2_, &work_})
      v->assign(static_cast<std::size_t>(n), 0.0);
    coef_.assign(static_cast<std::size_t>(M_) + 1, 0.0);
  }

  std::size_t size() const { return static_cast<std::size_t>(nf_ * stride_); }

  // sigma is σ at the stage abscissa, taken from the piece being integrated.
  void rhs(double sigma, const std::vector<double>& y, std::vector<double>& dy) {
    const int n = cfg_.n_quad;
    const double vref = gamma_ * pbar_ * sigma * sigma;
    grid_.synthesize_even(&y[0], p_.data());
    for (int i = 0; i < n; ++i) {
      const double r = p_[i] / pbar_;
      if (!(r > -1.0)) {
        if (std::isnan(r)) throw NumericalFailure("evolution: NaN in pressure");
        throw ShockProximityError("evolution: pressure lost positivity");
      }
      const double l = std::log1p(r) / gamma_;
      flux_[i] = vref * std::expm1(-l);
      if (system_ != System::base) {
        vfac_[i] = vref * std::exp(-l);  // v(p)
        const double p = pbar_ * (1.0 + r);
        vp_[i] = -vfac_[i] / (gamma_ * p);
        vpp_[i] = (1.0 / gamma_) * (1.0 / gamma_ + 1.0) * vfac_[i] / (p * p);
      }
    }
    apply(y, dy, 0, flux_);
    if (system_ == System::base) return;

    grid_.synthesize_even(&y[stride_], P1_.data());
    for (int i = 0; i < n; ++i) work_[i] = vp_[i] * P1_[i];
    apply(y, dy, 1, work_);
    if (system_ == System::tangent) return;

    grid_.synthesize_even(&y[2 * stride_], P2_.data());
    for (int i = 0; i < n; ++i) work_[i] = vp_[i] * P2_[i];
    apply(y, dy, 2, work_);
    grid_.synthesize_even(&y[3 * stride_], flux_.data());
    for (int i = 0; i < n; ++i) work_[i] = vp_[i] * flux_[i] + vpp_[i] * P1_[i] * P2_[i];
    apply(y, dy, 3, work_);
  }

  // max_t |∂_t w| of the base field.
  double gradient(const std::vector<double>& y) {
    std::vector<double> da(static_cast<std::size_t>(M_) + 1, 0.0), db(da.size(), 0.0);
    for (int j = 1; j <= M_; ++j) {
      da[j] = j * nu_ * y[M_ + 1 + j];
      db[j] = -j * nu_ * y[j];
    }
    grid_.synthesize(da.data(), db.data(), work_.data());
    double m = 0;
    for (double v : work_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  // da_j = −jν b_j, db_j = −jν c_j with c the cosine coefficients of `flux`.
  void apply(const std::vector<double>& y, std::vector<double>& dy, int f,
             const std::vector<double>& flux) {
    grid_.analyze_even(flux.data(), coef_.data());
    const std::size_t off = static_cast<std::size_t>(f) * stride_;
    dy[off] = 0.0;
    dy[off + M_ + 1] = 0.0;
    for (int j = 1; j <= M_; ++j) {
      dy[off + j] = -j * nu_ * y[off + M_ + 1 + j];
      dy[off + M_ + 1 + j] = -j * nu_ * coef_[j];
    }
  }

  const EvolutionConfig& cfg_;
  TimeGrid grid_;
  System system_;
  int nf_, M_, stride_;
  double nu_, gamma_, pbar_;
  std::vector<double> p_, vfac_, vp_, vpp_, flux_, P1_, P2_, work_, coef_;
};

void pack(const FourierField& f, std::vector<double>& y, int index, int M) {
  if (f.modes() != M) throw DomainError("evolution: field mode count differs from cfg.M");
  const std::size_t off = static_cast<std::size_t>(index) * 2 * (M + 1);
  std::copy(f.a.begin(), f.a.end(), y.begin() + off);
  std::copy(f.b.begin(), f.b.end(), y.begin() + off + M + 1);
  y[off + M + 1] = 0.0;
}

FourierField unpack(const std::vector<double>& y, int index, int M, double T) {
  FourierField f = FourierField::zeros(T, M);
  const std::size_t off = static_cast<std::size_t>(index) * 2 * (M + 1);
  std::copy(y.begin() + off, y.begin() + off + M + 1, f.a.begin());
  std::copy(y.begin() + off + M + 1, y.begin() + off + 2 * (M + 1), f.b.begin());
  return f;
}

struct RunOutput {
  std::vector<double> y;
  std::vector<TrajectoryNode> trajectory;
  int steps = 0;
  double mean_drift = 0.0;
  double max_gradient = 0.0;
};

RunOutput run(const QuietState& state, const EvolutionConfig& cfg, double T, System system,
              std::vector<double> y, double x_begin, double x_end) {
  validate(cfg);
  if (!(x_begin >= 0 && x_end <= state.profile.ell() && x_begin <= x_end))
    throw DomainError("evolution: span must lie inside [0, ell]");
  Integrator f(state, cfg, T, system);
  const double dx_max = step_bound(state, T, cfg);
  const std::size_t n = f.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

  RunOutput out;
  const double a0 = y[0];
  const double g0 = f.gradient(y);
  const double guard =
      cfg.shock_guard * std::max(g0, 1e-14 * state.p_bar * 2.0 * kPi / T);
  out.max_gradient = g0;
  auto record = [&](double x) {
    if (cfg.record_trajectory) out.trajectory.push_back({x, unpack(y, 0, cfg.M, T)});
  };
  record(x_begin);

  for (const auto& piece : state.profile.pieces()) {
    const double a = std::max(piece.x0(), x_begin), b = std::min(piece.x1(), x_end);
    if (!(b > a)) continue;
    const int steps = std::max(1, static_cast<int>(std::ceil((b - a) / dx_max - 1e-9)));
    const double h = (b - a) / steps;
    for (int s = 0; s < steps; ++s) {
      const double x = a + s * h;
      f.rhs(piece.sigma(x), y, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      f.rhs(piece.sigma(x + 0.5 * h), tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      f.rhs(piece.sigma(x + 0.5 * h), tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
      f.rhs(piece.sigma(std::min(x + h, b)), tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      for (double v : y)
        if (!std::isfinite(v)) throw NumericalFailure("evolution: non-finite coefficient");
      const double g = f.gradient(y);
      out.max_gradient = std::max(out.max_gradient, g);
      if (g > guard)
        throw ShockProximityError("evolution: max|dy/dt| grew past the shock guard at x=" +
                                  std::to_string(s + 1 == steps ? b : x + h));
      out.mean_drift = std::max(out.mean_drift, std::abs(y[0] - a0));
      ++out.steps;
      record(s + 1 == steps ? b : x + h);
    }
  }
  out.y = std::move(y);
  return out;
}

void require_period(const FourierField& y, double T) {
  if (y.T != T) throw DomainError("evolution: all fields must share the period");
}

}  // namespace

EvolutionResult evolve_deviation(const QuietState& state, const FourierField& w0,
                                 const EvolutionConfig& cfg, double x_begin, double x_end) {
  state.validate();
  std::vector<double> y(static_cast<std::size_t>(2 * (cfg.M + 1)), 0.0);
  pack(w0, y, 0, cfg.M);
  RunOutput r = run(state, cfg, w0.T, System::base, std::move(y), x_begin, x_end);
  EvolutionResult out;
  out.y = unpack(r.y, 0, cfg.M, w0.T);
  out.trajectory = std::move(r.trajectory);
  out.steps = r.steps;
  out.mean_drift = r.mean_drift;
  out.max_gradient = r.max_gradient;
  return out;
}

EvolutionResult nonlinear_evolve(const QuietState& state, const FourierField& y0,
                                 const EvolutionConfig& cfg, double x_begin, double x_end) {
  FourierField w0 = y0;
  w0.a.at(0) -= state.p_bar;
  EvolutionResult r = evolve_deviation(state, w0, cfg, x_begin, x_end);
  r.y.a[0] += state.p_bar;
  for (auto& node : r.trajectory) node.y.a[0] += state.p_bar;
  return r;
}

EvolutionResult nonlinear_evolve(const QuietState& state, const FourierField& y0,
                                 const EvolutionConfig& cfg) {
  return nonlinear_evolve(state, y0, cfg, 0.0, state.profile.ell());
}

LinearizedResult linearized_evolve(const QuietState& state, const FourierField& y0,
                                   const FourierField& Y0, const EvolutionConfig& cfg) {
  state.validate();
  require_period(Y0, y0.T);
  std::vector<double> y(static_cast<std::size_t>(4 * (cfg.M + 1)), 0.0);
  FourierField w0 = y0;
  w0.a.at(0) -= state.p_bar;
  pack(w0, y, 0, cfg.M);
  pack(Y0, y, 1, cfg.M);
  EvolutionConfig c = cfg;
  c.record_trajectory = false;
  RunOutput r = run(state, c, y0.T, System::tangent, std::move(y), 0.0, state.profile.ell());
  LinearizedResult out;
  out.base = unpack(r.y, 0, cfg.M, y0.T);
  out.base.a[0] += state.p_bar;
  out.tangent = unpack(r.y, 1, cfg.M, y0.T);
  return out;
}

FourierField second_derivative_evolve(const QuietState& state, const FourierField& y0,
                                      const FourierField& Y1, const FourierField& Y2,
                                      const EvolutionConfig& cfg) {
  state.validate();
  require_period(Y1, y0.T);
  require_period(Y2, y0.T);
  std::vector<double> y(static_cast<std::size_t>(8 * (cfg.M + 1)), 0.0);
  FourierField w0 = y0;
  w0.a.at(0) -= state.p_bar;
  pack(w0, y, 0, cfg.M);
  pack(Y1, y, 1, cfg.M);
  pack(Y2, y, 2, cfg.M);
  EvolutionConfig c = cfg;
  c.record_trajectory = false;
  RunOutput r = run(state, c, y0.T, System::second, std::move(y), 0.0, state.profile.ell());
  return unpack(r.y, 3, cfg.M, y0.T);
}

SecondDerivative second_derivative_quiet(const QuietState& state, int k, int chi) {
  state.validate();
  const Profile& profile = state.profile;
  const EigenFrequency ef = eigen_solve(profile, k, chi);
  const double omega = ef.omega;
  static const GaussRule rule = gauss_legendre(12);

  double a = 0.0, b = 0.0;
  TransferMatrix psi;  // Ψ at the current cell start
  for (const auto& piece : profile.pieces()) {
    const auto knots = piece.cells();
    for (std::size_t c = 0; c + 1 < knots.size(); ++c) {
      const double c0 = knots[c], c1 = knots[c + 1];
      const double phase = omega * piece.sigma_max() * (c1 - c0);
      const int sub = std::max(1, static_cast<int>(std::ceil(phase / 0.5)));
      const double w = (c1 - c0) / sub;
      for (int s = 0; s < sub; ++s) {
        const double x0 = c0 + s * w, x1 = s + 1 == sub ? c1 : x0 + w;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * rule.nodes[q];
          const TransferMatrix at = span_matrix(profile, omega, x0, x) * psi;
          const double sg = piece.sigma(x);
          const double vpp = (state.eos.gamma + 1.0) * sg * sg / (state.eos.gamma * state.p_bar);
          const double wt = 0.5 * (x1 - x0) * rule.weights[q] * vpp * omega;
          a += wt * at(0, 0) * at(0, 1);
          b -= wt * at(0, 0) * at(0, 0);
        }
        psi = span_matrix(profile, omega, x0, x1) * psi;
      }
    }
  }
  SecondDerivative out;
  out.k = k;
  out.chi = chi;
  out.omega = omega;
  out.T = ef.T;
  out.a_ell = a;
  out.b_ell = b;
  out.phi_hat = psi(0, 0) * a + psi(0, 1) * b;
  out.psi_hat = psi(1, 0) * a + psi(1, 1) * b;
  out.phi_t_ell = psi(0, 1);
  out.psi_t_ell = psi(1, 1);
  const auto [cq, sq] = quarter_turn(static_cast<long>(k) * chi);
  out.pairing = sq * out.phi_hat + cq * out.psi_hat;
  return out;
}

double weighted_norm(const std::vector<double>& c, const DivisorTable& table, double b, int k,
                     double min_divisor) {
  const int M = static_cast<int>(c.size()) - 1;
  if (M > table.j_max()) throw DomainError("weighted_norm: divisor table shorter than the field");
  double sum = 0.0;
  for (int j = 1; j <= M; ++j) {
    if (c[j] == 0.0) continue;
    if (j == k) {
      const double beta = c[j] * std::pow(static_cast<double>(k), 2.0 * b);
      sum += beta * beta;
      continue;
    }
    const double d = table.at(j);
    if (std::abs(d) < min_divisor)
      throw ResonanceError("weighted_norm: divisor " + std::to_string(j) + " vanishes");
    const double t = c[j] * std::pow(static_cast<double>(j), b) / d;
    sum += t * t;
  }
  return std::sqrt(sum);
}

double weighted_norm(const FourierField& y, const DivisorTable& table, double b, int k,
                     double min_divisor) {
  return weighted_norm(y.b, table, b, k, min_divisor);
}

}  // namespace puretone
