#include "puretone/fourier.hpp"

#include <algorithm>
#include <cmath>

#include "puretone/errors.hpp"
#include "puretone/numerics.hpp"

namespace puretone {

FourierField FourierField::zeros(double T, int M) {
  if (!(T > 0)) throw DomainError("FourierField: period must be positive");
  if (M < 0) throw DomainError("FourierField: mode count must be nonnegative");
  FourierField y;
  y.T = T;
  y.a.assign(static_cast<std::size_t>(M) + 1, 0.0);
  y.b.assign(static_cast<std::size_t>(M) + 1, 0.0);
  return y;
}

FourierField FourierField::constant(double T, int M, double value) {
  FourierField y = zeros(T, M);
  y.a[0] = value;
  return y;
}

FourierField FourierField::cosine(double T, int M, int j, double amplitude) {
  FourierField y = zeros(T, M);
  y.a.at(static_cast<std::size_t>(j)) = amplitude;
  return y;
}

FourierField FourierField::sine(double T, int M, int j, double amplitude) {
  if (j == 0) throw DomainError("FourierField: sine mode index must be positive");
  FourierField y = zeros(T, M);
  y.b.at(static_cast<std::size_t>(j)) = amplitude;
  return y;
}

double FourierField::nu() const { return 2.0 * kPi / T; }

double FourierField::operator()(double t) const {
  double v = 0;
  const double w = nu() * t;
  for (std::size_t j = 0; j < a.size(); ++j)
    v += a[j] * std::cos(j * w) + b[j] * std::sin(j * w);
  return v;
}

double FourierField::max_abs_coefficient() const {
  double m = 0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max({m, std::abs(a[j]), std::abs(b[j])});
  return m;
}

namespace {
void require_compatible(const FourierField& x, const FourierField& y) {
  if (x.a.size() != y.a.size() || x.T != y.T)
    throw DomainError("FourierField: incompatible operands");
}
}  // namespace

FourierField operator+(const FourierField& x, const FourierField& y) {
  require_compatible(x, y);
  FourierField r = x;
  for (std::size_t j = 0; j < r.a.size(); ++j) {
    r.a[j] += y.a[j];
    r.b[j] += y.b[j];
  }
  return r;
}

FourierField operator-(const FourierField& x, const FourierField& y) { return x + (-1.0) * y; }

FourierField operator*(double s, const FourierField& x) {
  FourierField r = x;
  for (std::size_t j = 0; j < r.a.size(); ++j) {
    r.a[j] *= s;
    r.b[j] *= s;
  }
  return r;
}

FourierField project_even(const FourierField& y) {
  FourierField r = y;
  std::fill(r.b.begin(), r.b.end(), 0.0);
  return r;
}

FourierField project_odd(const FourierField& y) {
  FourierField r = y;
  std::fill(r.a.begin(), r.a.end(), 0.0);
  return r;
}

FourierField reflect(const FourierField& y) {
  FourierField r = y;
  for (auto& v : r.b) v = -v;
  return r;
}

FourierField shift(const FourierField& y, double tau) {
  FourierField r = y;
  const double w = y.nu() * tau;
  for (std::size_t j = 1; j < y.a.size(); ++j) {
    const double c = std::cos(j * w), s = std::sin(j * w);
    r.a[j] = c * y.a[j] - s * y.b[j];
    r.b[j] = s * y.a[j] + c * y.b[j];
  }
  return r;
}

FourierField boundary_operator(const FourierField& y, int chi) {
  if (chi != 0 && chi != 1) throw DomainError("boundary_operator: chi must be 0 or 1");
  FourierField r = FourierField::zeros(y.T, y.modes());
  for (std::size_t j = 1; j < y.a.size(); ++j) {
    const auto [c, s] = quarter_turn(static_cast<long>(j) * chi);
    r.b[j] = s * y.a[j] + c * y.b[j];
  }
  return r;
}

TimeGrid::TimeGrid(int M, int n) : M_(M), n_(n) {
  if (M < 0 || n < 2 * M + 1) throw DomainError("TimeGrid: need n >= 2M+1 samples");
  cos_.resize(static_cast<std::size_t>(M + 1) * n);
  sin_.resize(cos_.size());
  for (int j = 0; j <= M; ++j)
    for (int i = 0; i < n; ++i) {
      // Reduce j·i mod n first so the angle is exact on the grid.
      const double ang = 2.0 * kPi * static_cast<double>((static_cast<long>(j) * i) % n) / n;
      cos_[static_cast<std::size_t>(j) * n + i] = std::cos(ang);
      sin_[static_cast<std::size_t>(j) * n + i] = std::sin(ang);
    }
}

void TimeGrid::synthesize(const double* a, const double* b, double* out) const {
  std::fill(out, out + n_, a[0]);
  for (int j = 1; j <= M_; ++j) {
    const double aj = a[j], bj = b[j];
    if (aj == 0.0 && bj == 0.0) continue;
    const double* c = &cos_[static_cast<std::size_t>(j) * n_];
    const double* s = &sin_[static_cast<std::size_t>(j) * n_];
    for (int i = 0; i < n_; ++i) out[i] += aj * c[i] + bj * s[i];
  }
}

void TimeGrid::synthesize_even(const double* a, double* out) const {
  std::fill(out, out + n_, a[0]);
  for (int j = 1; j <= M_; ++j) {
    const double aj = a[j];
    if (aj == 0.0) continue;
    const double* c = &cos_[static_cast<std::size_t>(j) * n_];
    for (int i = 0; i < n_; ++i) out[i] += aj * c[i];
  }
}

void TimeGrid::analyze(const double* values, double* a, double* b) const {
  analyze_even(values, a);
  b[0] = 0.0;
  for (int j = 1; j <= M_; ++j) {
    const double* s = &sin_[static_cast<std::size_t>(j) * n_];
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) acc += values[i] * s[i];
    b[j] = 2.0 * acc / n_;
  }
}

void TimeGrid::analyze_even(const double* values, double* a) const {
  double mean = 0.0;
  for (int i = 0; i < n_; ++i) mean += values[i];
  a[0] = mean / n_;
  for (int j = 1; j <= M_; ++j) {
    const double* c = &cos_[static_cast<std::size_t>(j) * n_];
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) acc += values[i] * c[i];
    a[j] = 2.0 * acc / n_;
  }
}

std::vector<double> TimeGrid::values(const FourierField& y) const {
  if (y.modes() != M_) throw DomainError("TimeGrid: mode count mismatch");
  std::vector<double> out(static_cast<std::size_t>(n_));
  synthesize(y.a.data(), y.b.data(), out.data());
  return out;
}

FourierField TimeGrid::field(const std::vector<double>& values, double T) const {
  if (static_cast<int>(values.size()) != n_) throw DomainError("TimeGrid: sample count mismatch");
  FourierField y = FourierField::zeros(T, M_);
  analyze(values.data(), y.a.data(), y.b.data());
  return y;
}

}  // namespace puretone
