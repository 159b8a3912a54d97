#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "puretone/evolve.hpp"
#include "puretone/profile.hpp"
#include "puretone/spectrum.hpp"

namespace puretone {

struct LinearMode {
  int k = 0;
  int chi = 1;
  double omega = 0.0;
  double T = 0.0;
  std::vector<double> x, phi, psi;  // φ(0)=1, ψ(0)=0
};

// Uniform grid of nx cells on [0, ℓ].
LinearMode eigenfunction_profiles(const Profile& profile, const EigenFrequency& eig, int nx);
// (φ, ψ) at sorted points xs for the solution starting from (1, 0).
LinearMode eigenfunction_at(const Profile& profile, const EigenFrequency& eig,
                            const std::vector<double>& xs);

struct TileProvenance {
  std::string profile_hash;
  int k = 0;
  double alpha = 0.0;
};

// Fields on an x-grid times a periodic t-grid t_n = nT/nt. Seams between reflected
// segments appear twice in x (once as the end of a segment, once as the next start).
struct TileField {
  int chi = 1;
  double ell = 0.0;
  double T = 0.0;
  double period_x = 0.0;
  std::vector<double> x, t, sigma;
  std::vector<double> p, u;  // row-major [ix * nt + it]
  std::vector<std::size_t> segment_start;
  TileProvenance provenance;

  std::size_t nx() const { return x.size(); }
  std::size_t nt() const { return t.size(); }
  double P(std::size_t ix, std::size_t it) const { return p[ix * nt() + it]; }
  double U(std::size_t ix, std::size_t it) const { return u[ix * nt() + it]; }
};

// P = cos(ωt)φ(x), U = sin(ωt)ψ(x) on [0, ℓ].
TileField mode_field(const LinearMode& mode, int nt, const Profile& profile);
// p = R₊y, u = R₋y on [0, ℓ] from an x-trajectory of y.
TileField tile_from_trajectory(const std::vector<TrajectoryNode>& trajectory,
                               const Profile& profile, int nt, int chi);

struct BoundaryResidual {
  double at_zero = 0.0;  // max_t |u(0,t)|
  double at_ell = 0.0;   // max_t |R₋ T^{χT/4} (p+u)(ℓ,t)|
};

BoundaryResidual boundary_residual(const std::vector<double>& u0, const std::vector<double>& p_ell,
                                   const std::vector<double>& u_ell, int chi);
BoundaryResidual boundary_residual(const TileField& base, int chi);

// Reflects a [0, ℓ] tile to the full period 4ℓ (χ=1) or 2ℓ (χ=0).
TileField extend_tile(const TileField& base, int chi, double tol = 1e-8);
// Largest jump in p or u across the seam duplicates.
double seam_discontinuity(const TileField& tile);

}  // namespace puretone
