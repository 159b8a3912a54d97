#pragma once

#include <vector>

namespace puretone {

// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson).
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::size_t cell(double x) const;
  std::vector<double> x_, y_, d_;
};

// One interval of the profile: either constant σ or sampled σ(x).
class Piece {
 public:
  static Piece constant(double x0, double x1, double sigma);
  static Piece sampled(std::vector<double> x, std::vector<double> sigma);

  double x0() const { return x0_; }
  double x1() const { return x1_; }
  double length() const { return x1_ - x0_; }
  bool is_constant() const { return constant_; }

  double sigma(double x) const;
  double dsigma(double x) const;
  double sigma_left() const { return sigma(x0_); }
  double sigma_right() const { return sigma(x1_); }
  double sigma_max() const;
  double sigma_min() const;
  // Cell boundaries inside which σ is C∞ (the piece ends for constant σ).
  std::vector<double> cells() const;
  double integral() const;
  const MonotoneCubic& shape() const { return shape_; }

 private:
  double x0_ = 0, x1_ = 0, level_ = 1;
  bool constant_ = true;
  MonotoneCubic shape_;
};

struct SampledPiece {
  std::vector<double> x;
  std::vector<double> sigma;
};

// Wavespeed profile σ(x) on [0, ℓ]: a sequence of abutting pieces with
// possible jumps at interior piece boundaries.
class Profile {
 public:
  static Profile piecewise_constant(const std::vector<double>& sigma_levels,
                                    const std::vector<double>& widths);
  static Profile smooth(const std::vector<SampledPiece>& pieces);
  static Profile constant(double sigma0, double ell);

  double ell() const { return ell_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_piecewise_constant() const;

  // σ at x, right-continuous inside [0, ℓ) and left limit at ℓ.
  double sigma(double x) const;
  double sigma_max() const;
  double sigma_min() const;
  double sigma_integral() const;

  // Only for piecewise constant profiles.
  std::vector<double> levels() const;
  std::vector<double> widths() const;

 private:
  std::vector<Piece> pieces_;
  double ell_ = 0;
};

// (J, Θ) parameterization: J_i = σ_i/σ_{i+1}, θ_i = σ_i L_i.
struct JumpAngleParams {
  std::vector<double> jumps;
  std::vector<double> angles;
};

Profile from_jump_angles(const std::vector<double>& jumps,
                         const std::vector<double>& angles, double sigma_1);
JumpAngleParams to_jump_angles(const Profile& profile);
double sigma_integral(const Profile& profile);

// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 40);

}  // namespace puretone

#include "puretone/detail/simpson.hpp"
