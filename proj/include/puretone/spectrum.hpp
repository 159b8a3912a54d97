#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "puretone/profile.hpp"

namespace puretone {

struct EigenFrequency {
  int k = 0;
  double omega = 0.0;
  double T = 0.0;  // 2πk/ω
  int chi = 1;
  double kappa_residual = 0.0;  // κ(ω) − k
};

struct KappaValue {
  double kappa = 0.0;
  double dkappa = 0.0;  // ∂κ/∂ω
};

double kappa(const Profile& profile, double omega);
KappaValue kappa_with_derivative(const Profile& profile, double omega);
// Asymptotic slope Λ = (π/2)/∫σ of ω_k/k.
double asymptotic_slope(const Profile& profile);

// ω with κ(ω) = k. χ=1 accepts any k ≥ 1, χ=0 requires even k.
EigenFrequency eigen_solve(const Profile& profile, int k, int chi = 1);

struct DivisorTable {
  double T = 0.0;
  int chi = 1;
  std::vector<double> delta;  // delta[j-1] = δ_j(T)

  int j_max() const { return static_cast<int>(delta.size()); }
  double at(int j) const { return delta.at(static_cast<std::size_t>(j - 1)); }
  double bound() const;  // max |δ_j|
};

double divisor(const Profile& profile, double T, int chi, int j);
DivisorTable divisors(const Profile& profile, double T, int chi, int j_max);

enum class Verdict { nonresonant, borderline, resonant };
std::string to_string(Verdict v);

struct ResonanceThresholds {
  double tol = 1e-8;             // nonresonant iff min |δ_j| > tol
  double resonant_below = 1e-10; // below: resonant; [resonant_below, tol]: borderline
  double match_tol = 1e-7;       // |kω_l − jω_k|/ω_k for the frequency cross-check
  int l_max = 0;                 // 0: derived from j_max
};

struct FrequencyMatch {
  int j = 0;
  int l = 0;
  double delta = 0.0;
  double ratio_residual = 0.0;  // |kω_l − jω_k|/ω_k
};

struct ResonanceReport {
  int k = 0;
  int chi = 1;
  double T = 0.0;
  int j_max = 0;
  double min_divisor = 0.0;
  int argmin_j = 0;
  Verdict verdict = Verdict::nonresonant;
  std::vector<int> offending;              // j with |δ_j| ≤ tol
  std::vector<FrequencyMatch> small_divisors;   // |δ_j| ≤ tol with the matching l
  std::vector<FrequencyMatch> frequency_hits;   // l with a near-integer ratio
  bool cross_check_consistent = true;
  DivisorTable table;
};

// For χ=0 only even j are scanned (the acoustic problem lives on even modes).
ResonanceReport resonance_scan(const Profile& profile, int k, int j_max, int chi = 1,
                               const ResonanceThresholds& thresholds = {});

struct SamplingBox {
  double J_lo = 0.2, J_hi = 5.0;
  double theta_lo = 0.1, theta_hi = 3.0;
};

struct GenericityConfig {
  int levels = 2;
  long samples = 10000;
  std::uint64_t seed = 1;
  SamplingBox box;
  int k_max = 12;
  int l_max = 12;
  int j_max = 24;
  double exact_tol = 1e-12;
  int threads = 1;
  double hist_lo = -16.0, hist_hi = 0.0, hist_width = 0.5;  // log10 bins
};

struct SampleResult {
  long id = 0;
  std::vector<double> jumps, angles;
  double min_residual = 0.0;
  int k = 0, j = 0, l = 0;
  bool failed = false;
  std::string failure;
};

struct Histogram {
  std::vector<double> edges;  // log10 residual bin edges
  std::vector<long> counts;
  long underflow = 0, overflow = 0;
};

struct GenericityStats {
  GenericityConfig config;
  std::vector<SampleResult> samples;
  long exact_resonances = 0;
  long failures = 0;
  Histogram histogram;
  double min_residual = 0.0;
  double median_log10 = 0.0;
  double mean_log10 = 0.0;
};

// Smallest |kω_l − jω_k|/(kω_l) over k ≤ k_max, l ≤ l_max (l≠k), 1 ≤ j ≤ j_max.
SampleResult nearest_resonance(const std::vector<double>& omegas, int k_max, int l_max,
                               int j_max);
GenericityStats genericity_mc(const GenericityConfig& config);

}  // namespace puretone
