#include "voxto/grid.hpp"

#include <algorithm>
#include <cmath>

namespace voxto {

std::string to_string(const Dims& d) {
  return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
}

Problem Problem::blank(const Dims& dims, const Eigen::Vector3d& voxel_size, const Material& material) {
  Problem p;
  p.dims = dims;
  p.voxel_size = voxel_size;
  p.material = material;
  p.dirichlet = ByteTensor(3, dims, 0);
  p.forces = RealTensor(3, dims, 0.0);
  p.design = TernaryTensor(1, dims, static_cast<std::int8_t>(DesignCode::free));
  return p;
}

bool Problem::has_support(std::size_t voxel) const {
  return dirichlet.at(0, voxel) != 0 || dirichlet.at(1, voxel) != 0 || dirichlet.at(2, voxel) != 0;
}

bool Problem::has_load(std::size_t voxel) const {
  return forces.at(0, voxel) != 0.0 || forces.at(1, voxel) != 0.0 || forces.at(2, voxel) != 0.0;
}

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
}

namespace {

void check_shape(const char* name, int channels, const Dims& dims, int want_channels, const Dims& want) {
  if (channels != want_channels || dims != want) {
    throw DimensionError(std::string(name) + " tensor is " + std::to_string(channels) + "x" + to_string(dims) +
                         ", expected " + std::to_string(want_channels) + "x" + to_string(want));
  }
}

}  // namespace

ValidationReport validate_problem(const Problem& p) {
  if (p.dims.nx <= 0 || p.dims.ny <= 0 || p.dims.nz <= 0) {
    throw DimensionError("problem dims must be positive, got " + to_string(p.dims));
  }
  check_shape("dirichlet", p.dirichlet.channels(), p.dirichlet.dims(), 3, p.dims);
  check_shape("forces", p.forces.channels(), p.forces.dims(), 3, p.dims);
  check_shape("design", p.design.channels(), p.design.dims(), 1, p.dims);

  ValidationReport report;
  auto add = [&](std::string code, std::string message, std::size_t count = 1) {
    if (count > 0) report.violations.push_back({std::move(code), std::move(message), count});
  };

  const Material& m = p.material;
  if (!(m.young_modulus > 0.0)) add("young_modulus", "Young's modulus must be positive");
  if (!(m.poisson_ratio >= 0.0 && m.poisson_ratio < 0.5)) add("poisson_ratio", "Poisson ratio must lie in [0, 0.5)");
  if (!(m.yield_stress > 0.0)) add("yield_stress", "yield stress must be positive");
  if (!(m.penalization_p > 1.0)) add("penalization", "penalization exponent must exceed 1");
  if (!(m.rho_min > 0.0 && m.rho_min < 1.0)) add("rho_min", "rho_min must lie in (0, 1)");
  if (!(p.voxel_size.array() > 0.0).all() || !p.voxel_size.allFinite()) add("voxel_size", "voxel size must be positive");
  if (!(p.volume_fraction_max > 0.0 && p.volume_fraction_max <= 1.0)) {
    add("volume_fraction", "volume fraction bound must lie in (0, 1]");
  }

  std::size_t bad_design = 0, bad_dirichlet = 0, bad_force = 0;
  std::size_t support_not_solid = 0, load_not_solid = 0, supports = 0, loads = 0;
  for (std::size_t v = 0; v < p.dims.count(); ++v) {
    const int d = p.design.at(0, v);
    if (d < -1 || d > 1) ++bad_design;
    for (int c = 0; c < 3; ++c) {
      if (p.dirichlet.at(c, v) > 1) ++bad_dirichlet;
      if (!std::isfinite(p.forces.at(c, v))) ++bad_force;
    }
    const bool support = p.has_support(v);
    const bool load = p.has_load(v);
    supports += support;
    loads += load;
    if (support && d != 1) ++support_not_solid;
    if (load && d != 1) ++load_not_solid;
  }
  add("design_domain", "design values must be ternary (-1, 0, 1)", bad_design);
  add("dirichlet_domain", "dirichlet entries must be binary (0, 1)", bad_dirichlet);
  add("force_finite", "forces must be finite", bad_force);
  add("design_at_supports", "design must be 1 at supports", support_not_solid);
  add("design_at_loads", "design must be 1 at loads", load_not_solid);
  if (supports == 0) add("no_supports", "at least one voxel must carry a Dirichlet condition");
  if (loads == 0) add("no_loads", "at least one voxel must carry a load");
  return report;
}

Mask binarize(const DensityField& density, const TernaryTensor& design, double threshold) {
  require_same_grid(density, design, "binarize");
  Mask mask(1, density.dims(), 0);
  for (std::size_t v = 0; v < density.voxels(); ++v) {
    const auto code = design.at(0, v);
    std::uint8_t bit = density.at(0, v) >= threshold ? 1 : 0;
    if (code == 0) bit = 0;
    if (code == 1) bit = 1;
    mask.at(0, v) = bit;
  }
  return mask;
}

DesignCounts count_design(const TernaryTensor& design) {
  DesignCounts counts;
  for (std::size_t v = 0; v < design.voxels(); ++v) {
    switch (design.at(0, v)) {
      case -1: ++counts.free; break;
      case 0: ++counts.void_; break;
      case 1: ++counts.solid; break;
      default: break;
    }
  }
  return counts;
}

}  // namespace voxto
