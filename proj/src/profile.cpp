#include "puretone/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "puretone/errors.hpp"

namespace puretone {

namespace {

double sign(double v) { return (v > 0) - (v < 0); }

double edge_slope(double h0, double h1, double m0, double m1) {
  double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
  if (sign(d) != sign(m0)) return 0.0;
  if (sign(m0) != sign(m1) && std::abs(d) > 3.0 * std::abs(m0)) return 3.0 * m0;
  return d;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw DomainError("MonotoneCubic: need at least two samples of matching length");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(x_[i + 1] > x_[i])) throw DomainError("MonotoneCubic: knots must increase strictly");
  std::vector<double> h(n - 1), m(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    m[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = m[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (m[k - 1] * m[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d_[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k]);
  }
  d_[0] = edge_slope(h[0], h[1], m[0], m[1]);
  d_[n - 1] = edge_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
}

std::size_t MonotoneCubic::cell(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t i = cell(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] +
         (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * d_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = cell(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  return (6 * t2 - 6 * t) / h * y_[i] + (3 * t2 - 4 * t + 1) * d_[i] +
         (-6 * t2 + 6 * t) / h * y_[i + 1] + (3 * t2 - 2 * t) * d_[i + 1];
}

Piece Piece::constant(double x0, double x1, double sigma) {
  if (!(x1 > x0)) throw DomainError("Piece: width must be positive");
  if (!(sigma > 0) || !std::isfinite(sigma)) throw DomainError("Piece: sigma must be positive");
  Piece p;
  p.x0_ = x0;
  p.x1_ = x1;
  p.level_ = sigma;
  p.constant_ = true;
  return p;
}

Piece Piece::sampled(std::vector<double> x, std::vector<double> sigma) {
  for (double s : sigma)
    if (!(s > 0) || !std::isfinite(s)) throw DomainError("Piece: sampled sigma must be positive");
  Piece p;
  p.shape_ = MonotoneCubic(std::move(x), std::move(sigma));
  p.x0_ = p.shape_.knots().front();
  p.x1_ = p.shape_.knots().back();
  p.constant_ = false;
  return p;
}

double Piece::sigma(double x) const { return constant_ ? level_ : shape_(x); }

double Piece::dsigma(double x) const { return constant_ ? 0.0 : shape_.derivative(x); }

double Piece::sigma_max() const {
  if (constant_) return level_;
  const auto& v = shape_.values();
  return *std::max_element(v.begin(), v.end());
}

double Piece::sigma_min() const {
  if (constant_) return level_;
  const auto& v = shape_.values();
  return *std::min_element(v.begin(), v.end());
}

std::vector<double> Piece::cells() const {
  if (constant_) return {x0_, x1_};
  return shape_.knots();
}

double Piece::integral() const {
  if (constant_) return level_ * length();
  const auto c = cells();
  double total = 0.0;
  const double tol = 1e-10 / static_cast<double>(c.size());
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    total += adaptive_simpson([this](double x) { return shape_(x); }, c[i], c[i + 1], tol);
  return total;
}

Profile Profile::piecewise_constant(const std::vector<double>& sigma_levels,
                                    const std::vector<double>& widths) {
  if (sigma_levels.empty()) throw DomainError("profile: need at least one level");
  if (sigma_levels.size() != widths.size())
    throw DomainError("profile: levels and widths differ in length");
  Profile p;
  double x = 0.0;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (!(widths[i] > 0) || !std::isfinite(widths[i]))
      throw DomainError("profile: widths must be positive");
    const double next = x + widths[i];
    p.pieces_.push_back(Piece::constant(x, next, sigma_levels[i]));
    x = next;
  }
  p.ell_ = x;
  return p;
}

Profile Profile::smooth(const std::vector<SampledPiece>& pieces) {
  if (pieces.empty()) throw DomainError("profile: need at least one piece");
  Profile p;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::vector<double> x = pieces[i].x;
    if (x.size() < 2) throw DomainError("profile: each piece needs two or more samples");
    const double expected = i == 0 ? 0.0 : p.pieces_.back().x1();
    const double scale = std::max(1.0, std::abs(x.back()));
    if (std::abs(x.front() - expected) > 1e-12 * scale)
      throw DomainError("profile: piece " + std::to_string(i) +
                        " does not start where the previous one ends");
    x.front() = expected;
    if (x.size() == 2 && pieces[i].sigma.size() == 2 && pieces[i].sigma[0] == pieces[i].sigma[1])
      p.pieces_.push_back(Piece::constant(x[0], x[1], pieces[i].sigma[0]));
    else
      p.pieces_.push_back(Piece::sampled(std::move(x), pieces[i].sigma));
  }
  p.ell_ = p.pieces_.back().x1();
  return p;
}

Profile Profile::constant(double sigma0, double ell) {
  return piecewise_constant({sigma0}, {ell});
}

bool Profile::is_piecewise_constant() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const Piece& p) { return p.is_constant(); });
}

double Profile::sigma(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Piece& p) { return v < p.x0(); });
  if (it == pieces_.begin()) return pieces_.front().sigma_left();
  --it;
  if (x >= it->x1()) return it->sigma_right();
  return it->sigma(x);
}

double Profile::sigma_max() const {
  double m = 0;
  for (const auto& p : pieces_) m = std::max(m, p.sigma_max());
  return m;
}

double Profile::sigma_min() const {
  double m = pieces_.front().sigma_min();
  for (const auto& p : pieces_) m = std::min(m, p.sigma_min());
  return m;
}

double Profile::sigma_integral() const {
  double total = 0.0;
  for (const auto& p : pieces_) total += p.integral();
  return total;
}

std::vector<double> Profile::levels() const {
  if (!is_piecewise_constant()) throw DomainError("profile: levels need a piecewise constant profile");
  std::vector<double> out;
  for (const auto& p : pieces_) out.push_back(p.sigma_left());
  return out;
}

std::vector<double> Profile::widths() const {
  if (!is_piecewise_constant()) throw DomainError("profile: widths need a piecewise constant profile");
  std::vector<double> out;
  for (const auto& p : pieces_) out.push_back(p.length());
  return out;
}

Profile from_jump_angles(const std::vector<double>& jumps, const std::vector<double>& angles,
                         double sigma_1) {
  if (angles.empty() || jumps.size() + 1 != angles.size())
    throw DomainError("from_jump_angles: need |J| = N-1 and |Theta| = N");
  if (!(sigma_1 > 0)) throw DomainError("from_jump_angles: sigma_1 must be positive");
  for (double j : jumps)
    if (!(j > 0)) throw DomainError("from_jump_angles: jumps must be positive");
  for (double t : angles)
    if (!(t > 0)) throw DomainError("from_jump_angles: angles must be positive");
  std::vector<double> sigma(angles.size()), widths(angles.size());
  sigma[0] = sigma_1;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (i > 0) sigma[i] = sigma[i - 1] / jumps[i - 1];
    widths[i] = angles[i] / sigma[i];
  }
  return Profile::piecewise_constant(sigma, widths);
}

JumpAngleParams to_jump_angles(const Profile& profile) {
  const auto s = profile.levels();
  const auto w = profile.widths();
  JumpAngleParams out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.angles.push_back(s[i] * w[i]);
    if (i + 1 < s.size()) out.jumps.push_back(s[i] / s[i + 1]);
  }
  return out;
}

double sigma_integral(const Profile& profile) { return profile.sigma_integral(); }

}  // namespace puretone
