#pragma once

// Test-only problem builders and oracles. Nothing here calls into the
// matrix-free operator or the CG solver.

#include "voxto/elasticity.hpp"
#include "voxto/grid.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace voxto::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Float32-representable value, so it survives the on-disk format exactly.
inline double float_exact(double v) { return static_cast<double>(static_cast<float>(v)); }

struct RandomProblemOptions {
  int max_supports = 3;
  int max_loads = 3;
  double void_fraction = 0.15;
  double force_scale = 1e9;  // N/m^3
  bool float_exact = true;
};

/// Valid random problem: every support voxel is fixed along all three axes,
/// loads and supports are solid, remaining voxels are free or void.
inline Problem random_problem(Rng& rng, const Dims& dims, const RandomProblemOptions& opt = {}) {
  Problem p = Problem::blank(dims, Eigen::Vector3d::Constant(1e-3));
  for (std::size_t v = 0; v < dims.count(); ++v) {
    if (uniform(rng, 0.0, 1.0) < opt.void_fraction) p.design.at(0, v) = 0;
  }
  auto pick = [&]() { return static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(dims.count()) - 1)); };
  const int supports = uniform_int(rng, 1, opt.max_supports);
  for (int s = 0; s < supports; ++s) {
    const std::size_t v = pick();
    for (int c = 0; c < 3; ++c) p.dirichlet.at(c, v) = 1;
    p.design.at(0, v) = 1;
  }
  const int loads = uniform_int(rng, 1, opt.max_loads);
  for (int l = 0; l < loads; ++l) {
    const std::size_t v = pick();
    for (int c = 0; c < 3; ++c) {
      const double f = uniform(rng, -1.0, 1.0) * opt.force_scale;
      p.forces.at(c, v) = opt.float_exact ? float_exact(f) : f;
    }
    p.design.at(0, v) = 1;
  }
  p.volume_fraction_max = 0.4;
  return p;
}

inline DensityField random_density(Rng& rng, const Dims& dims, double lo, double hi) {
  DensityField rho(1, dims);
  for (std::size_t v = 0; v < dims.count(); ++v) rho.at(0, v) = uniform(rng, lo, hi);
  return rho;
}

/// 1x1xn bar along z: voxel 0 clamped on all axes, axial load density q on
/// the last voxel.
inline Problem clamped_bar(int n, double q, double h = 1e-3) {
  Problem p = Problem::blank({1, 1, n}, Eigen::Vector3d::Constant(h));
  for (int c = 0; c < 3; ++c) p.dirichlet(c, 0, 0, 0) = 1;
  p.design(0, 0, 0, 0) = 1;
  p.forces(2, 0, 0, n - 1) = q;
  p.design(0, 0, 0, n - 1) = 1;
  return p;
}

/// Cantilever: x = 0 face clamped, downward load along the free-end bottom edge.
inline Problem cantilever(const Dims& d, double q = -1e9) {
  Problem p = Problem::blank(d, Eigen::Vector3d::Constant(1e-3));
  for (int j = 0; j < d.ny; ++j)
    for (int k = 0; k < d.nz; ++k) {
      for (int c = 0; c < 3; ++c) p.dirichlet(c, 0, j, k) = 1;
      p.design(0, 0, j, k) = 1;
    }
  for (int j = 0; j < d.ny; ++j) {
    p.forces(2, d.nx - 1, j, 0) = q;
    p.design(0, d.nx - 1, j, 0) = 1;
  }
  return p;
}

/// Dense K(rho) with Dirichlet rows/columns replaced by identity, assembled
/// with its own node numbering (interleaved DOFs 3 * node + axis).
struct DenseSystem {
  Eigen::MatrixXd k;
  Eigen::VectorXd f;
  std::vector<bool> fixed;
  Dims nodes;

  [[nodiscard]] Eigen::Index dof(std::size_t node, int axis) const { return static_cast<Eigen::Index>(3 * node + axis); }

  /// Channel-major nodal tensor -> interleaved vector and back.
  [[nodiscard]] Eigen::VectorXd interleave(const RealTensor& t) const {
    Eigen::VectorXd v(3 * nodes.count());
    for (std::size_t n = 0; n < nodes.count(); ++n)
      for (int c = 0; c < 3; ++c) v[dof(n, c)] = t.at(c, n);
    return v;
  }
  [[nodiscard]] RealTensor deinterleave(const Eigen::VectorXd& v) const {
    RealTensor t(3, nodes, 0.0);
    for (std::size_t n = 0; n < nodes.count(); ++n)
      for (int c = 0; c < 3; ++c) t.at(c, n) = v[dof(n, c)];
    return t;
  }
};

inline DenseSystem dense_system(const Problem& p, const DensityField& rho) {
  DenseSystem sys;
  sys.nodes = {p.dims.nx + 1, p.dims.ny + 1, p.dims.nz + 1};
  const auto ndof = static_cast<Eigen::Index>(3 * sys.nodes.count());
  sys.k = Eigen::MatrixXd::Zero(ndof, ndof);
  sys.f = Eigen::VectorXd::Zero(ndof);
  sys.fixed.assign(static_cast<std::size_t>(ndof), false);
  const ElementMatrix ke = element_stiffness(p.material, p.voxel_size);
  const double vol = p.voxel_size.prod();
  for (int i = 0; i < p.dims.nx; ++i)
    for (int j = 0; j < p.dims.ny; ++j)
      for (int k = 0; k < p.dims.nz; ++k) {
        const std::size_t e = p.dims.index(i, j, k);
        std::size_t corner[8];
        for (int dx = 0; dx < 2; ++dx)
          for (int dy = 0; dy < 2; ++dy)
            for (int dz = 0; dz < 2; ++dz) corner[dx * 4 + dy * 2 + dz] = sys.nodes.index(i + dx, j + dy, k + dz);
        const double modulus = p.material.young_modulus * std::pow(rho.at(0, e), p.material.penalization_p);
        for (int a = 0; a < 8; ++a)
          for (int ca = 0; ca < 3; ++ca) {
            sys.f[sys.dof(corner[a], ca)] += p.forces.at(ca, e) * vol / 8.0;
            if (p.dirichlet.at(ca, e)) sys.fixed[static_cast<std::size_t>(sys.dof(corner[a], ca))] = true;
            for (int b = 0; b < 8; ++b)
              for (int cb = 0; cb < 3; ++cb)
                sys.k(sys.dof(corner[a], ca), sys.dof(corner[b], cb)) += modulus * ke(3 * a + ca, 3 * b + cb);
          }
      }
  for (Eigen::Index d = 0; d < ndof; ++d) {
    if (!sys.fixed[static_cast<std::size_t>(d)]) continue;
    sys.k.row(d).setZero();
    sys.k.col(d).setZero();
    sys.k(d, d) = 1.0;
    sys.f[d] = 0.0;
  }
  return sys;
}

/// Solves the dense system directly; returns the channel-major displacement.
inline RealTensor dense_solve(const Problem& p, const DensityField& rho) {
  const DenseSystem sys = dense_system(p, rho);
  const Eigen::VectorXd u = sys.k.ldlt().solve(sys.f);
  return sys.deinterleave(u);
}

inline double rel_error(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  const double scale = std::max(a.abs().maxCoeff(), b.abs().maxCoeff());
  if (scale == 0.0) return 0.0;
  return (a - b).abs().maxCoeff() / scale;
}

}  // namespace voxto::testing
