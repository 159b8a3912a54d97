#include "puretone/sl_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "puretone/errors.hpp"
#include "puretone/numerics.hpp"

namespace puretone {

TransferMatrix TransferMatrix::rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  TransferMatrix r;
  r.m = {{{c, -s}, {s, c}}};
  return r;
}

TransferMatrix TransferMatrix::scaling(double q) {
  const double rq = std::sqrt(q);
  TransferMatrix r;
  r.m = {{{1.0 / rq, 0.0}, {0.0, rq}}};
  return r;
}

TransferMatrix TransferMatrix::inverse() const {
  TransferMatrix r;
  r.m = {{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}};
  return r;
}

std::array<double, 2> TransferMatrix::apply(std::array<double, 2> v) const {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
  TransferMatrix r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
  return r;
}

namespace {

void require_jump(double J) {
  if (!(J > 0) || !std::isfinite(J)) throw DomainError("jump ratio J must be positive");
}

}  // namespace

double jump_angle(double J, double z) {
  require_jump(J);
  const double m = std::floor(z / kPi + 0.5);
  const double w = z - m * kPi;  // in [-π/2, π/2)
  const double c = std::cos(w);
  if (c == 0.0 || std::abs(w) >= 0.5 * kPi) return z;
  return std::atan2(J * std::sin(w), c) + m * kPi;
}

double jump_angle_dz(double J, double z) {
  require_jump(J);
  const double c = std::cos(z), s = std::sin(z);
  return J / (c * c + J * J * s * s);
}

double jump_angle_dJ(double J, double z) {
  require_jump(J);
  const double c = std::cos(z), s = std::sin(z);
  return s * c / (c * c + J * J * s * s);
}

double jump_radius_factor(double J, double theta_minus) {
  require_jump(J);
  const double c = std::cos(theta_minus), s = std::sin(theta_minus);
  return std::sqrt(c * c / J + J * s * s);
}

namespace {

// y = (θ, log r, ζ)
struct PruferRhs {
  const Piece& piece;
  double omega;
  std::array<double, 3> operator()(double x, const std::array<double, 3>& y) const {
    const double s = piece.sigma(x);
    const double q = piece.dsigma(x) / s;
    const double s2 = std::sin(2.0 * y[0]), c2 = std::cos(2.0 * y[0]);
    return {omega * s - 0.5 * q * s2, 0.5 * q * c2, s - q * c2 * y[2]};
  }
};

std::array<double, 3> rk4_step(const PruferRhs& f, double x, const std::array<double, 3>& y,
                               double h) {
  auto axpy = [](const std::array<double, 3>& a, double t, const std::array<double, 3>& b) {
    return std::array<double, 3>{a[0] + t * b[0], a[1] + t * b[1], a[2] + t * b[2]};
  };
  const auto k1 = f(x, y);
  const auto k2 = f(x + 0.5 * h, axpy(y, 0.5 * h, k1));
  const auto k3 = f(x + 0.5 * h, axpy(y, 0.5 * h, k2));
  const auto k4 = f(x + h, axpy(y, h, k3));
  std::array<double, 3> out;
  for (int i = 0; i < 3; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

// Step-doubling adaptive RK4 on a C∞ cell [xa, xb].
std::array<double, 3> integrate_cell(const PruferRhs& f, std::array<double, 3> y, double xa,
                                     double xb, const PruferOptions& opt, double scale) {
  const double span = xb - xa;
  if (span <= 0) return y;
  const double hmin = opt.min_step_fraction * scale;
  const double qmax = std::abs(f.piece.dsigma(xa) / f.piece.sigma(xa)) +
                      std::abs(f.piece.dsigma(xb) / f.piece.sigma(xb));
  double h = std::min(span, 0.5 / (f.omega * f.piece.sigma_max() + qmax + 1e-300));
  double x = xa;
  while (x < xb) {
    bool last = false;
    if (x + h >= xb) {
      h = xb - x;
      last = true;
    }
    const auto full = rk4_step(f, x, y, h);
    const auto half = rk4_step(f, x, y, 0.5 * h);
    const auto two = rk4_step(f, x + 0.5 * h, half, 0.5 * h);
    const double zscale = std::max(1.0, std::abs(two[2]));
    const double err = std::max({std::abs(two[0] - full[0]), std::abs(two[1] - full[1]),
                                 std::abs(two[2] - full[2]) / zscale}) /
                       15.0;
    if (err <= opt.tol || h <= hmin) {
      if (err > opt.tol)
        throw IntegrationError("prufer_advance: step size underflow near x=" + std::to_string(x));
      y = two;
      x = last ? xb : x + h;
      const double grow = err > 0 ? 0.9 * std::pow(opt.tol / err, 0.2) : 4.0;
      h *= std::clamp(grow, 0.2, 4.0);
    } else {
      h *= std::clamp(0.9 * std::pow(opt.tol / err, 0.2), 0.1, 0.5);
      h = std::max(h, hmin);
    }
  }
  return y;
}

}  // namespace

PruferState prufer_advance(const Piece& piece, double omega, PruferState state, double xa,
                           double xb, const PruferOptions& opt) {
  if (!(xb >= xa)) throw DomainError("prufer_advance: span must be ordered");
  if (piece.is_constant()) {
    const double s = piece.sigma(xa);
    state.theta += omega * s * (xb - xa);
    state.zeta += s * (xb - xa);
    return state;
  }
  PruferRhs f{piece, omega};
  std::array<double, 3> y{state.theta, std::log(state.r), state.zeta};
  const auto knots = piece.cells();
  const double scale = std::max(piece.length(), 1e-300);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = std::max(knots[i], xa), b = std::min(knots[i + 1], xb);
    if (b > a) y = integrate_cell(f, y, a, b, opt, scale);
  }
  return {y[0], std::exp(y[1]), y[2]};
}

namespace {

TransferMatrix piece_span(const Piece& piece, double omega, double xa, double xb) {
  if (xb <= xa) return TransferMatrix::identity();
  if (piece.is_constant()) {
    const double s = piece.sigma(xa);
    const double a = omega * s * (xb - xa);
    const double c = std::cos(a), sn = std::sin(a);
    TransferMatrix r;
    r.m = {{{c, -sn / s}, {s * sn, c}}};
    return r;
  }
  const double sa = piece.sigma(xa), sb = piece.sigma(xb);
  const double rsa = std::sqrt(sa), rsb = std::sqrt(sb);
  const PruferState e1 = prufer_advance(piece, omega, {0.0, 1.0, 0.0}, xa, xb);
  const PruferState e2 = prufer_advance(piece, omega, {0.5 * kPi, 1.0, 0.0}, xa, xb);
  // Columns map the initial vectors (1/√σa, 0) and (0, √σa).
  TransferMatrix r;
  r.m[0][0] = e1.r * std::cos(e1.theta) / rsb * rsa;
  r.m[1][0] = e1.r * std::sin(e1.theta) * rsb * rsa;
  r.m[0][1] = e2.r * std::cos(e2.theta) / rsb / rsa;
  r.m[1][1] = e2.r * std::sin(e2.theta) * rsb / rsa;
  return r;
}

void require_frequency(double omega) {
  if (!(omega >= 0) || !std::isfinite(omega)) throw DomainError("frequency must be nonnegative");
}

}  // namespace

TransferMatrix span_matrix(const Profile& profile, double omega, double xa, double xb) {
  require_frequency(omega);
  if (xb < xa) throw DomainError("span_matrix: xa must not exceed xb");
  TransferMatrix total;
  for (const auto& piece : profile.pieces()) {
    const double a = std::max(piece.x0(), xa), b = std::min(piece.x1(), xb);
    if (b > a) total = piece_span(piece, omega, a, b) * total;
  }
  return total;
}

TransferMatrix fundamental_matrix(const Profile& profile, double omega) {
  return span_matrix(profile, omega, 0.0, profile.ell());
}

std::vector<TransferMatrix> fundamental_along(const Profile& profile, double omega,
                                              const std::vector<double>& xs) {
  std::vector<TransferMatrix> out;
  out.reserve(xs.size());
  TransferMatrix current;
  double x = 0.0;
  for (double target : xs) {
    if (target < x) throw DomainError("fundamental_along: points must be sorted");
    current = span_matrix(profile, omega, x, target) * current;
    x = target;
    out.push_back(current);
  }
  return out;
}

PruferState angle_state_at_ell(const Profile& profile, double omega, double theta0) {
  require_frequency(omega);
  const auto& pieces = profile.pieces();
  PruferState st{theta0, 1.0, 0.0};
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    st = prufer_advance(pieces[i], omega, st, pieces[i].x0(), pieces[i].x1());
    if (i + 1 < pieces.size()) {
      const double J = pieces[i].sigma_right() / pieces[i + 1].sigma_left();
      if (J != 1.0) {
        st.zeta *= jump_angle_dz(J, st.theta);
        st.r *= jump_radius_factor(J, st.theta);
        st.theta = jump_angle(J, st.theta);
      }
    }
  }
  return st;
}

double angle_at_ell(const Profile& profile, double omega, double theta0) {
  return angle_state_at_ell(profile, omega, theta0).theta;
}

}  // namespace puretone
