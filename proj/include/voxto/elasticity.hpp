#pragma once

#include "voxto/grid.hpp"

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace voxto {

/// Nodal displacement field, [3, nx+1, ny+1, nz+1] in meters.
using DisplacementField = RealTensor;
/// Nodal force vector, same layout as DisplacementField (newtons).
using NodalLoadVector = RealTensor;
using ElementMatrix = Eigen::Matrix<double, 24, 24>;

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Local node a of a voxel sits at offset ((a >> 2) & 1, (a >> 1) & 1, a & 1);
// its local DOFs are 3a + axis. Voigt order is (xx, yy, zz, xy, yz, zx) with
// engineering shear strains.

template <typename Scalar>
Eigen::Matrix<Scalar, 6, 6> constitutive_matrix(Scalar young, Scalar nu) {
  const Scalar lambda = young * nu / ((1 + nu) * (1 - 2 * nu));
  const Scalar mu = young / (2 * (1 + nu));
  Eigen::Matrix<Scalar, 6, 6> c = Eigen::Matrix<Scalar, 6, 6>::Zero();
  c.template topLeftCorner<3, 3>().setConstant(lambda);
  c.template topLeftCorner<3, 3>().diagonal().array() += 2 * mu;
  c.template bottomRightCorner<3, 3>().diagonal().setConstant(mu);
  return c;
}

/// Strain-displacement matrix of the trilinear hexahedron at natural
/// coordinates (xi, eta, zeta) in [-1, 1]^3.
template <typename Scalar>
Eigen::Matrix<Scalar, 6, 24> strain_displacement(const Eigen::Matrix<Scalar, 3, 1>& h, Scalar xi, Scalar eta,
                                                 Scalar zeta) {
  Eigen::Matrix<Scalar, 6, 24> b = Eigen::Matrix<Scalar, 6, 24>::Zero();
  const Scalar nat[3] = {xi, eta, zeta};
  for (int a = 0; a < 8; ++a) {
    Scalar sgn[3];
    for (int ax = 0; ax < 3; ++ax) sgn[ax] = ((a >> (2 - ax)) & 1) ? Scalar(1) : Scalar(-1);
    Scalar grad[3];
    for (int ax = 0; ax < 3; ++ax) {
      Scalar g = sgn[ax] / 8;
      for (int other = 0; other < 3; ++other) {
        if (other != ax) g *= (1 + sgn[other] * nat[other]);
      }
      grad[ax] = g * 2 / h[ax];
    }
    const int col = 3 * a;
    b(0, col + 0) = grad[0];
    b(1, col + 1) = grad[1];
    b(2, col + 2) = grad[2];
    b(3, col + 0) = grad[1];
    b(3, col + 1) = grad[0];
    b(4, col + 1) = grad[2];
    b(4, col + 2) = grad[1];
    b(5, col + 0) = grad[2];
    b(5, col + 2) = grad[0];
  }
  return b;
}

/// Unit-modulus stiffness of one voxel, 2x2x2 Gauss quadrature.
template <typename Scalar>
Eigen::Matrix<Scalar, 24, 24> element_stiffness(Scalar nu, const Eigen::Matrix<Scalar, 3, 1>& voxel_size) {
  using std::sqrt;
  if (!(nu >= 0 && nu < Scalar(0.5))) throw ParameterError("Poisson ratio must lie in [0, 0.5)");
  if (!(voxel_size.array() > 0).all()) throw ParameterError("voxel size must be positive");
  const Eigen::Matrix<Scalar, 6, 6> c = constitutive_matrix<Scalar>(Scalar(1), nu);
  const Scalar det_j = voxel_size.prod() / 8;
  const Scalar gp = 1 / sqrt(Scalar(3));
  Eigen::Matrix<Scalar, 24, 24> k = Eigen::Matrix<Scalar, 24, 24>::Zero();
  for (int q = 0; q < 8; ++q) {
    const Scalar xi = (q & 4) ? gp : -gp;
    const Scalar eta = (q & 2) ? gp : -gp;
    const Scalar zeta = (q & 1) ? gp : -gp;
    const auto b = strain_displacement<Scalar>(voxel_size, xi, eta, zeta);
    k.noalias() += b.transpose() * c * b * det_j;
  }
  return Scalar(0.5) * (k + k.transpose());
}

inline ElementMatrix element_stiffness(const Material& m, const Eigen::Vector3d& voxel_size) {
  return element_stiffness<double>(m.poisson_ratio, voxel_size);
}

/// Per-DOF constraint flags, [3, nx+1, ny+1, nz+1]. A Dirichlet flag on a voxel
/// fixes that axis on all eight corner nodes.
ByteTensor constrained_dofs(const Problem& p);

/// Volumetric loads integrated per voxel and split equally to the 8 corners.
NodalLoadVector assemble_loads(const Problem& p);

/// Matrix-free K(rho) = sum_e E0 rho_e^p K_e with Dirichlet rows/columns
/// replaced by identity.
class StiffnessOperator {
 public:
  StiffnessOperator(const Problem& p, const DensityField& rho);

  [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  [[nodiscard]] Eigen::VectorXd diagonal() const;
  [[nodiscard]] const ByteTensor& constrained() const { return constrained_; }
  [[nodiscard]] const ElementMatrix& element_matrix() const { return ke_; }
  [[nodiscard]] const Eigen::ArrayXd& element_scale() const { return scale_; }
  [[nodiscard]] Eigen::Index dofs() const { return static_cast<Eigen::Index>(constrained_.size()); }
  /// Global DOF indices of voxel e in local order.
  [[nodiscard]] Eigen::Matrix<Eigen::Index, 24, 1> element_dofs(std::size_t e) const;

 private:
  Dims dims_;
  ElementMatrix ke_;
  Eigen::ArrayXd scale_;
  ByteTensor constrained_;
};

NodalLoadVector apply_stiffness(const Problem& p, const DensityField& rho, const DisplacementField& u);

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 0;  // 0 selects 10 * number of DOFs
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

struct SolveResult {
  DisplacementField u;
  SolveStats stats;
};

class SolveError : public std::runtime_error {
 public:
  enum class Kind { not_converged, singular };
  SolveError(Kind kind, const std::string& what, SolveStats stats = {})
      : std::runtime_error(what), kind_(kind), stats_(stats) {}
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const SolveStats& stats() const { return stats_; }

 private:
  Kind kind_;
  SolveStats stats_;
};

/// Jacobi-preconditioned CG for K(rho) u = F. Serial, fixed reduction order.
SolveResult solve_displacements(const Problem& p, const DensityField& rho, const SolveOptions& opts = {});

/// Centroid stress per voxel, [6, nx, ny, nz] in Voigt order, using the
/// unpenalized solid material.
RealTensor stress_tensor(const Problem& p, const DisplacementField& u);

template <typename Scalar>
Scalar von_mises_from_voigt(const Eigen::Matrix<Scalar, 6, 1>& s) {
  using std::sqrt;
  using std::max;
  const Scalar v = s[0] * s[0] + s[1] * s[1] + s[2] * s[2] - s[0] * s[1] - s[1] * s[2] - s[2] * s[0] +
                   3 * (s[3] * s[3] + s[4] * s[4] + s[5] * s[5]);
  return sqrt(max(v, Scalar(0)));
}

/// Per-voxel von Mises stress [1, nx, ny, nz] (Pa).
RealTensor von_mises(const Problem& p, const DisplacementField& u);

/// F^T u. Constrained DOFs carry u = 0, so this is the free-DOF product.
double compliance(const DisplacementField& u, const NodalLoadVector& loads);

/// rho -> E0 rho^p per voxel, the factor applied to the unit element matrix.
Eigen::ArrayXd element_moduli(const Material& m, const DensityField& rho);

}  // namespace voxto
