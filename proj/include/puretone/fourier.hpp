#pragma once

#include <vector>

namespace puretone {

// y(t) = Σ_{j=0..M} a_j cos(jνt) + b_j sin(jνt), ν = 2π/T; b_0 is kept at 0.
struct FourierField {
  double T = 1.0;
  std::vector<double> a;
  std::vector<double> b;

  static FourierField zeros(double T, int M);
  static FourierField constant(double T, int M, double value);
  static FourierField cosine(double T, int M, int j, double amplitude = 1.0);
  static FourierField sine(double T, int M, int j, double amplitude = 1.0);

  int modes() const { return static_cast<int>(a.size()) - 1; }
  double nu() const;
  double operator()(double t) const;
  double max_abs_coefficient() const;
};

FourierField operator+(const FourierField& x, const FourierField& y);
FourierField operator-(const FourierField& x, const FourierField& y);
FourierField operator*(double s, const FourierField& x);

FourierField project_even(const FourierField& y);  // R₊
FourierField project_odd(const FourierField& y);   // R₋
FourierField reflect(const FourierField& y);       // y(−t)
FourierField shift(const FourierField& y, double tau);  // y(t − τ)
// S y = R₋ y(· − χT/4): mode j rotated by R(jχπ/2) and sine part kept.
FourierField boundary_operator(const FourierField& y, int chi);

// Collocation on t_n = nT/N for modes 0..M. Tables are precomputed.
class TimeGrid {
 public:
  TimeGrid(int M, int n);
  int modes() const { return M_; }
  int size() const { return n_; }

  void synthesize(const double* a, const double* b, double* out) const;
  void synthesize_even(const double* a, double* out) const;
  void analyze(const double* values, double* a, double* b) const;
  void analyze_even(const double* values, double* a) const;

  std::vector<double> values(const FourierField& y) const;
  FourierField field(const std::vector<double>& values, double T) const;

 private:
  int M_, n_;
  std::vector<double> cos_, sin_;  // [j * n + i]
};

}  // namespace puretone
