#include "puretone/linwave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "puretone/errors.hpp"
#include "puretone/numerics.hpp"
#include "puretone/sl_core.hpp"

namespace puretone {

LinearMode eigenfunction_at(const Profile& profile, const EigenFrequency& eig,
                            const std::vector<double>& xs) {
  LinearMode mode;
  mode.k = eig.k;
  mode.chi = eig.chi;
  mode.omega = eig.omega;
  mode.T = eig.T;
  mode.x = xs;
  for (const auto& m : fundamental_along(profile, eig.omega, xs)) {
    mode.phi.push_back(m(0, 0));
    mode.psi.push_back(m(1, 0));
  }
  return mode;
}

LinearMode eigenfunction_profiles(const Profile& profile, const EigenFrequency& eig, int nx) {
  if (nx < 1) throw DomainError("eigenfunction_profiles: nx must be positive");
  std::vector<double> xs(static_cast<std::size_t>(nx) + 1);
  for (int i = 0; i <= nx; ++i) xs[i] = profile.ell() * i / nx;
  xs.back() = profile.ell();
  return eigenfunction_at(profile, eig, xs);
}

namespace {

std::vector<double> time_grid(double T, int nt) {
  std::vector<double> t(static_cast<std::size_t>(nt));
  for (int n = 0; n < nt; ++n) t[n] = T * n / nt;
  return t;
}

// σ sampled on a grid, using the left limit at a breakpoint that ends a piece.
std::vector<double> sigma_on(const Profile& profile, const std::vector<double>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(profile.sigma(x));
  return out;
}

}  // namespace

TileField mode_field(const LinearMode& mode, int nt, const Profile& profile) {
  if (nt < 2) throw DomainError("mode_field: nt must be at least 2");
  TileField tile;
  tile.chi = mode.chi;
  tile.ell = profile.ell();
  tile.T = mode.T;
  tile.period_x = profile.ell();
  tile.x = mode.x;
  tile.t = time_grid(mode.T, nt);
  tile.sigma = sigma_on(profile, mode.x);
  tile.segment_start = {0};
  tile.provenance.k = mode.k;
  tile.p.resize(tile.x.size() * nt);
  tile.u.resize(tile.p.size());
  for (std::size_t i = 0; i < tile.x.size(); ++i)
    for (int n = 0; n < nt; ++n) {
      // ω t_n = 2πk n/nt, reduced mod nt for exact grid phases.
      const long q = (static_cast<long>(mode.k) * n) % nt;
      const double ang = 2.0 * kPi * q / nt;
      tile.p[i * nt + n] = std::cos(ang) * mode.phi[i];
      tile.u[i * nt + n] = std::sin(ang) * mode.psi[i];
    }
  return tile;
}

TileField tile_from_trajectory(const std::vector<TrajectoryNode>& trajectory,
                               const Profile& profile, int nt, int chi) {
  if (trajectory.empty()) throw DomainError("tile_from_trajectory: empty trajectory");
  const int M = trajectory.front().y.modes();
  TimeGrid grid(M, nt);
  TileField tile;
  tile.chi = chi;
  tile.ell = profile.ell();
  tile.T = trajectory.front().y.T;
  tile.period_x = profile.ell();
  tile.t = time_grid(tile.T, nt);
  tile.segment_start = {0};
  std::vector<double> even(static_cast<std::size_t>(nt)), full(even.size());
  std::vector<double> zero(static_cast<std::size_t>(M) + 1, 0.0);
  for (const auto& node : trajectory) {
    tile.x.push_back(node.x);
    grid.synthesize_even(node.y.a.data(), even.data());
    grid.synthesize(zero.data(), node.y.b.data(), full.data());
    tile.p.insert(tile.p.end(), even.begin(), even.end());
    tile.u.insert(tile.u.end(), full.begin(), full.end());
  }
  tile.sigma = sigma_on(profile, tile.x);
  return tile;
}

BoundaryResidual boundary_residual(const std::vector<double>& u0, const std::vector<double>& p_ell,
                                   const std::vector<double>& u_ell, int chi) {
  if (chi != 0 && chi != 1) throw DomainError("boundary_residual: chi must be 0 or 1");
  const std::size_t nt = p_ell.size();
  if (u_ell.size() != nt || u0.size() != nt) throw DomainError("boundary_residual: size mismatch");
  if (chi == 1 && nt % 4 != 0) throw DomainError("boundary_residual: nt must be divisible by 4");
  BoundaryResidual r;
  for (double v : u0) r.at_zero = std::max(r.at_zero, std::abs(v));
  const std::size_t lag = chi * nt / 4;
  auto shifted = [&](std::size_t n) {
    const std::size_t m = (n + nt - lag) % nt;  // y(t_n − T/4)
    return p_ell[m] + u_ell[m];
  };
  for (std::size_t n = 0; n < nt; ++n) {
    const double odd = 0.5 * (shifted(n) - shifted((nt - n) % nt));
    r.at_ell = std::max(r.at_ell, std::abs(odd));
  }
  return r;
}

BoundaryResidual boundary_residual(const TileField& base, int chi) {
  const std::size_t nt = base.nt(), last = base.nx() - 1;
  auto row = [&](const std::vector<double>& f, std::size_t ix) {
    return std::vector<double>(f.begin() + ix * nt, f.begin() + (ix + 1) * nt);
  };
  return boundary_residual(row(base.u, 0), row(base.p, last), row(base.u, last), chi);
}

TileField extend_tile(const TileField& base, int chi, double tol) {
  if (chi != 0 && chi != 1) throw DomainError("extend_tile: chi must be 0 or 1");
  const std::size_t nt = base.nt(), nx = base.nx();
  if (nx < 2 || nt < 2) throw DomainError("extend_tile: tile too small");
  if (nt % 2 != 0) throw DomainError("extend_tile: nt must be even");
  const BoundaryResidual br = boundary_residual(base, chi);
  if (br.at_zero > tol || br.at_ell > tol)
    throw DomainError("extend_tile: boundary residual too large (u(0)=" +
                      std::to_string(br.at_zero) + ", shifted odd part at ell=" +
                      std::to_string(br.at_ell) + ", tol=" + std::to_string(tol) + ")");
  const double ell = base.ell;
  TileField out;
  out.chi = chi;
  out.ell = ell;
  out.T = base.T;
  out.t = base.t;
  out.period_x = chi == 1 ? 4.0 * ell : 2.0 * ell;
  out.provenance = base.provenance;

  // Segment s covers [sℓ, (s+1)ℓ]; source column, time lag and u sign per segment.
  struct Segment {
    bool mirrored;
    std::size_t lag;
    double usign;
  };
  const std::size_t half = nt / 2;
  std::vector<Segment> segs = {{false, 0, 1.0}, {true, chi * half, -1.0}};
  if (chi == 1) {
    segs.push_back({false, half, 1.0});
    segs.push_back({true, 0, -1.0});
  }
  for (std::size_t s = 0; s < segs.size(); ++s) {
    out.segment_start.push_back(out.x.size());
    const double origin = static_cast<double>(s) * ell;
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t src = segs[s].mirrored ? nx - 1 - i : i;
      const double xs = base.x[src];
      out.x.push_back(segs[s].mirrored ? origin + (ell - xs) : origin + xs);
      out.sigma.push_back(base.sigma[src]);
      for (std::size_t n = 0; n < nt; ++n) {
        const std::size_t m = (n + segs[s].lag) % nt;  // value at t + lag
        out.p.push_back(base.p[src * nt + m]);
        out.u.push_back(segs[s].usign * base.u[src * nt + m]);
      }
    }
  }
  return out;
}

double seam_discontinuity(const TileField& tile) {
  const std::size_t nt = tile.nt();
  double worst = 0.0;
  for (std::size_t s = 1; s < tile.segment_start.size(); ++s) {
    const std::size_t right = tile.segment_start[s], left = right - 1;
    for (std::size_t n = 0; n < nt; ++n) {
      worst = std::max(worst, std::abs(tile.P(left, n) - tile.P(right, n)));
      worst = std::max(worst, std::abs(tile.U(left, n) - tile.U(right, n)));
    }
  }
  // Periodic seam between the last and first columns.
  const std::size_t last = tile.nx() - 1;
  if (tile.segment_start.size() > 1)
    for (std::size_t n = 0; n < nt; ++n) {
      worst = std::max(worst, std::abs(tile.P(last, n) - tile.P(0, n)));
      worst = std::max(worst, std::abs(tile.U(last, n) - tile.U(0, n)));
    }
  return worst;
}

}  // namespace puretone
