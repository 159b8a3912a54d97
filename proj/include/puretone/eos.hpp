#pragma once

#include "puretone/profile.hpp"

namespace puretone {

// γ-law closure p·v^γ = A(s)^γ, i.e. v = A(s)·p^(−1/γ), A(s) = (k_ref e^s)^(1/γ).
struct GammaLawEos {
  double gamma = 1.4;
  double k_ref = 1.0;
};

void validate(const GammaLawEos& eos);

double volume_coefficient(const GammaLawEos& eos, double s);       // A(s)
double entropy_for_coefficient(const GammaLawEos& eos, double A);  // inverse of A(s)

double specific_volume(const GammaLawEos& eos, double p, double s);
double dv_dp(const GammaLawEos& eos, double p, double s);
double d2v_dp2(const GammaLawEos& eos, double p, double s);
double sigma_of(const GammaLawEos& eos, double p_bar, double s);

// Same quantities parameterized by the coefficient A instead of s.
namespace gamma_law {
double volume(double gamma, double A, double p);
double dvolume(double gamma, double A, double p);
double d2volume(double gamma, double A, double p);
double sigma(double gamma, double A, double p_bar);
double coefficient_for_sigma(double gamma, double sigma, double p_bar);
// v(p_ref + dp) − v(p_ref), accurate when |dp| << p_ref.
double volume_increment(double gamma, double v_ref, double p_ref, double dp);
}  // namespace gamma_law

// Stationary state: constant pressure p̄, zero velocity, entropy through σ(x).
struct QuietState {
  double p_bar = 1.0;
  GammaLawEos eos;
  Profile profile;

  void validate() const;
  // Quantities at (p̄, s(x)); σ² = −v_p fixes A(x).
  double coefficient(double x) const;
  double v_ref(double x) const;
  double vpp_ref(double x) const;
  double entropy(double x) const;
};

}  // namespace puretone
