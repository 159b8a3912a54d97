#include "puretone/eos.hpp"

#include <cmath>

#include "puretone/errors.hpp"

namespace puretone {

namespace {
void require_pressure(double p) {
  if (!(p > 0) || !std::isfinite(p)) throw DomainError("eos: pressure must be positive");
}
}  // namespace

void validate(const GammaLawEos& eos) {
  if (!(eos.gamma > 1) || !std::isfinite(eos.gamma)) throw DomainError("eos: gamma must exceed 1");
  if (!(eos.k_ref > 0) || !std::isfinite(eos.k_ref)) throw DomainError("eos: k_ref must be positive");
}

double volume_coefficient(const GammaLawEos& eos, double s) {
  validate(eos);
  return std::pow(eos.k_ref * std::exp(s), 1.0 / eos.gamma);
}

double entropy_for_coefficient(const GammaLawEos& eos, double A) {
  validate(eos);
  if (!(A > 0)) throw DomainError("eos: A must be positive");
  return eos.gamma * std::log(A) - std::log(eos.k_ref);
}

double specific_volume(const GammaLawEos& eos, double p, double s) {
  return gamma_law::volume(eos.gamma, volume_coefficient(eos, s), p);
}

double dv_dp(const GammaLawEos& eos, double p, double s) {
  return gamma_law::dvolume(eos.gamma, volume_coefficient(eos, s), p);
}

double d2v_dp2(const GammaLawEos& eos, double p, double s) {
  return gamma_law::d2volume(eos.gamma, volume_coefficient(eos, s), p);
}

double sigma_of(const GammaLawEos& eos, double p_bar, double s) {
  return std::sqrt(-dv_dp(eos, p_bar, s));
}

namespace gamma_law {

double volume(double gamma, double A, double p) {
  require_pressure(p);
  return A * std::pow(p, -1.0 / gamma);
}

double dvolume(double gamma, double A, double p) { return -volume(gamma, A, p) / (gamma * p); }

double d2volume(double gamma, double A, double p) {
  const double g = 1.0 / gamma;
  return g * (g + 1.0) * volume(gamma, A, p) / (p * p);
}

double sigma(double gamma, double A, double p_bar) { return std::sqrt(-dvolume(gamma, A, p_bar)); }

double coefficient_for_sigma(double gamma, double sigma, double p_bar) {
  require_pressure(p_bar);
  if (!(sigma > 0)) throw DomainError("eos: sigma must be positive");
  // σ² = A p̄^(−1/γ) / (γ p̄)
  return gamma * sigma * sigma * std::pow(p_bar, 1.0 + 1.0 / gamma);
}

double volume_increment(double gamma, double v_ref, double p_ref, double dp) {
  const double ratio = dp / p_ref;
  if (!(ratio > -1.0)) throw DomainError("eos: pressure must stay positive");
  return v_ref * std::expm1(-std::log1p(ratio) / gamma);
}

}  // namespace gamma_law

void QuietState::validate() const {
  puretone::validate(eos);
  require_pressure(p_bar);
}

double QuietState::coefficient(double x) const {
  return gamma_law::coefficient_for_sigma(eos.gamma, profile.sigma(x), p_bar);
}

double QuietState::v_ref(double x) const {
  const double s = profile.sigma(x);
  return eos.gamma * p_bar * s * s;
}

double QuietState::vpp_ref(double x) const {
  const double s = profile.sigma(x);
  return (eos.gamma + 1.0) * s * s / (eos.gamma * p_bar);
}

double QuietState::entropy(double x) const { return entropy_for_coefficient(eos, coefficient(x)); }

}  // namespace puretone
