#include "voxto/elasticity.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace voxto {

namespace {

const DensityField& checked_density(const Problem& p, const DensityField& rho) {
  if (rho.channels() != 1 || rho.dims() != p.dims) {
    throw DimensionError("density must be 1x" + to_string(p.dims) + ", got " + std::to_string(rho.channels()) + "x" +
                         to_string(rho.dims()));
  }
  return rho;
}

void require_nodal(const Problem& p, const RealTensor& u, const char* what) {
  if (u.channels() != 3 || u.dims() != p.dims.nodes()) {
    throw DimensionError(std::string(what) + " must be 3x" + to_string(p.dims.nodes()));
  }
}

template <typename Visit>
void for_each_voxel(const Dims& d, Visit&& visit) {
  std::size_t e = 0;
  for (int i = 0; i < d.nx; ++i)
    for (int j = 0; j < d.ny; ++j)
      for (int k = 0; k < d.nz; ++k, ++e) visit(e, i, j, k);
}

std::size_t corner_node(const Dims& nodes, int i, int j, int k, int a) {
  return nodes.index(i + ((a >> 2) & 1), j + ((a >> 1) & 1), k + (a & 1));
}

}  // namespace

Eigen::ArrayXd element_moduli(const Material& m, const DensityField& rho) {
  return m.young_modulus * rho.values().pow(m.penalization_p);
}

ByteTensor constrained_dofs(const Problem& p) {
  const Dims nodes = p.dims.nodes();
  ByteTensor fixed(3, nodes, 0);
  for_each_voxel(p.dims, [&](std::size_t e, int i, int j, int k) {
    for (int c = 0; c < 3; ++c) {
      if (p.dirichlet.at(c, e) == 0) continue;
      for (int a = 0; a < 8; ++a) fixed.at(c, corner_node(nodes, i, j, k, a)) = 1;
    }
  });
  return fixed;
}

NodalLoadVector assemble_loads(const Problem& p) {
  const Dims nodes = p.dims.nodes();
  NodalLoadVector f(3, nodes, 0.0);
  const double share = p.voxel_volume() / 8.0;
  for_each_voxel(p.dims, [&](std::size_t e, int i, int j, int k) {
    for (int c = 0; c < 3; ++c) {
      const double q = p.forces.at(c, e);
      if (q == 0.0) continue;
      for (int a = 0; a < 8; ++a) f.at(c, corner_node(nodes, i, j, k, a)) += q * share;
    }
  });
  return f;
}

StiffnessOperator::StiffnessOperator(const Problem& p, const DensityField& rho)
    : dims_(p.dims),
      ke_(element_stiffness(p.material, p.voxel_size)),
      scale_(element_moduli(p.material, checked_density(p, rho))),
      constrained_(constrained_dofs(p)) {}

Eigen::Matrix<Eigen::Index, 24, 1> StiffnessOperator::element_dofs(std::size_t e) const {
  const Dims nodes = dims_.nodes();
  const auto nn = static_cast<Eigen::Index>(nodes.count());
  const int k = static_cast<int>(e % dims_.nz);
  const int j = static_cast<int>((e / dims_.nz) % dims_.ny);
  const int i = static_cast<int>(e / (static_cast<std::size_t>(dims_.nz) * dims_.ny));
  Eigen::Matrix<Eigen::Index, 24, 1> dofs;
  for (int a = 0; a < 8; ++a) {
    const auto n = static_cast<Eigen::Index>(corner_node(nodes, i, j, k, a));
    for (int c = 0; c < 3; ++c) dofs[3 * a + c] = c * nn + n;
  }
  return dofs;
}

Eigen::VectorXd StiffnessOperator::apply(const Eigen::VectorXd& u) const {
  const auto& fixed = constrained_.values();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(u.size());
  Eigen::Matrix<double, 24, 1> ue;
  for (std::size_t e = 0; e < dims_.count(); ++e) {
    const auto dofs = element_dofs(e);
    for (int l = 0; l < 24; ++l) ue[l] = fixed[dofs[l]] ? 0.0 : u[dofs[l]];
    const Eigen::Matrix<double, 24, 1> ye = scale_[static_cast<Eigen::Index>(e)] * (ke_ * ue);
    for (int l = 0; l < 24; ++l) y[dofs[l]] += ye[l];
  }
  for (Eigen::Index n = 0; n < y.size(); ++n) {
    if (fixed[n]) y[n] = u[n];
  }
  return y;
}

Eigen::VectorXd StiffnessOperator::diagonal() const {
  const auto& fixed = constrained_.values();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dofs());
  for (std::size_t e = 0; e < dims_.count(); ++e) {
    const auto dofs = element_dofs(e);
    for (int l = 0; l < 24; ++l) d[dofs[l]] += scale_[static_cast<Eigen::Index>(e)] * ke_(l, l);
  }
  for (Eigen::Index n = 0; n < d.size(); ++n) {
    if (fixed[n]) d[n] = 1.0;
  }
  return d;
}

NodalLoadVector apply_stiffness(const Problem& p, const DensityField& rho, const DisplacementField& u) {
  require_nodal(p, u, "displacement");
  const StiffnessOperator op(p, rho);
  return NodalLoadVector(3, p.dims.nodes(), op.apply(u.values().matrix()).array());
}

SolveResult solve_displacements(const Problem& p, const DensityField& rho, const SolveOptions& opts) {
  const StiffnessOperator op(p, rho);
  const auto& fixed = op.constrained().values();
  const Eigen::Index n = op.dofs();

  Eigen::VectorXd b = assemble_loads(p).values().matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (fixed[i]) b[i] = 0.0;
  }

  SolveResult result{DisplacementField(3, p.dims.nodes(), 0.0), {}};
  const double b_norm = b.norm();
  if (b_norm == 0.0) return result;

  // All voxels have positive stiffness, so the grid is one connected body;
  // it is pinned iff every axis is constrained somewhere.
  for (int c = 0; c < 3; ++c) {
    if (op.constrained().channel(c).maxCoeff() == 0) {
      throw SolveError(SolveError::Kind::singular,
                       std::string("singular system: no Dirichlet condition along ") + "xyz"[c] + " axis");
    }
  }

  const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(10 * n);
  const Eigen::VectorXd inv_diag = op.diagonal().cwiseInverse();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd dir = z;
  double rz = r.dot(z);
  int it = 0;
  double rel = 1.0;
  while (it < max_iter) {
    const Eigen::VectorXd q = op.apply(dir);
    const double curvature = dir.dot(q);
    if (!(curvature > 0.0)) {
      throw SolveError(SolveError::Kind::singular, "singular system: non-positive curvature in CG", {it, rel});
    }
    const double alpha = rz / curvature;
    x += alpha * dir;
    r -= alpha * q;
    ++it;
    rel = r.norm() / b_norm;
    if (rel <= opts.tol) {
      // Confirm against the true residual; restart from it if the recursion drifted.
      r = b - op.apply(x);
      rel = r.norm() / b_norm;
      if (rel <= opts.tol) break;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    dir = z + (rz_next / rz) * dir;
    rz = rz_next;
  }
  if (rel > opts.tol) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", rel);
    throw SolveError(SolveError::Kind::not_converged,
                     "CG did not converge in " + std::to_string(it) + " iterations (relative residual " + buf + ")",
                     {it, rel});
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (fixed[i]) x[i] = 0.0;
  }
  result.u.values() = x.array();
  result.stats = {it, rel};
  return result;
}

RealTensor stress_tensor(const Problem& p, const DisplacementField& u) {
  require_nodal(p, u, "displacement");
  const Eigen::Matrix<double, 6, 6> c = constitutive_matrix(p.material.young_modulus, p.material.poisson_ratio);
  const Eigen::Matrix<double, 6, 24> cb = c * strain_displacement<double>(p.voxel_size, 0.0, 0.0, 0.0);
  const Dims nodes = p.dims.nodes();
  RealTensor sigma(6, p.dims, 0.0);
  Eigen::Matrix<double, 24, 1> ue;
  for_each_voxel(p.dims, [&](std::size_t e, int i, int j, int k) {
    for (int a = 0; a < 8; ++a) {
      const std::size_t node = corner_node(nodes, i, j, k, a);
      for (int ax = 0; ax < 3; ++ax) ue[3 * a + ax] = u.at(ax, node);
    }
    const Eigen::Matrix<double, 6, 1> s = cb * ue;
    for (int comp = 0; comp < 6; ++comp) sigma.at(comp, e) = s[comp];
  });
  return sigma;
}

RealTensor von_mises(const Problem& p, const DisplacementField& u) {
  const RealTensor sigma = stress_tensor(p, u);
  RealTensor vm(1, p.dims, 0.0);
  Eigen::Matrix<double, 6, 1> s;
  for (std::size_t e = 0; e < p.dims.count(); ++e) {
    for (int comp = 0; comp < 6; ++comp) s[comp] = sigma.at(comp, e);
    vm.at(0, e) = von_mises_from_voigt(s);
  }
  return vm;
}

double compliance(const DisplacementField& u, const NodalLoadVector& loads) {
  if (u.channels() != loads.channels() || u.dims() != loads.dims()) {
    throw DimensionError("compliance: displacement and load shapes differ");
  }
  return (u.values() * loads.values()).sum();
}

}  // namespace voxto
