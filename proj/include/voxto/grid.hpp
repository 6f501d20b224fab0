#pragma once

#include "voxto/tensor.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace voxto {

/// Isotropic linear-elastic material with SIMP parameters. All values SI.
struct Material {
  double young_modulus = 70e9;   // Pa
  double poisson_ratio = 0.3;
  double yield_stress = 450e6;   // Pa
  double penalization_p = 3.0;
  double rho_min = 1e-3;

  friend bool operator==(const Material&, const Material&) = default;
};

/// Aluminium-like defaults used throughout the bracket datasets.
inline Material default_material() { return Material{}; }

/// Design-space codes stored in Problem::design.
enum class DesignCode : std::int8_t { free = -1, void_ = 0, solid = 1 };

/// One topology optimization problem on a voxel grid.
///
/// dirichlet: [3, nx, ny, nz] in {0,1}, presence of a homogeneous constraint per axis.
/// forces:    [3, nx, ny, nz] volumetric force density in N/m^3.
/// design:    [1, nx, ny, nz] in {-1, 0, 1} (free, void, solid).
struct Problem {
  Dims dims;
  Eigen::Vector3d voxel_size = Eigen::Vector3d::Constant(1e-3);  // m
  Material material;
  ByteTensor dirichlet;
  RealTensor forces;
  TernaryTensor design;
  double volume_fraction_max = 1.0;

  /// Empty problem on a grid: no supports, no loads, everything free.
  static Problem blank(const Dims& dims, const Eigen::Vector3d& voxel_size = Eigen::Vector3d::Constant(1e-3),
                       const Material& material = default_material());

  [[nodiscard]] double voxel_volume() const { return voxel_size.prod(); }
  [[nodiscard]] bool has_support(std::size_t voxel) const;
  [[nodiscard]] bool has_load(std::size_t voxel) const;

  friend bool operator==(const Problem&, const Problem&) = default;
};

struct Violation {
  std::string code;
  std::string message;
  std::size_t count = 0;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] bool has(const std::string& code) const;
};

/// Checks every Problem invariant. Tensor shape mismatches are structural and
/// throw DimensionError instead of being reported as violations.
ValidationReport validate_problem(const Problem& p);

/// Threshold a density into a mask, then force design-space voxels to their
/// fixed values (void -> 0, solid -> 1).
Mask binarize(const DensityField& density, const TernaryTensor& design, double threshold = 0.5);

/// Counts of the free (-1), void (0) and solid (1) sets.
struct DesignCounts {
  std::size_t free = 0;
  std::size_t void_ = 0;
  std::size_t solid = 0;
};
DesignCounts count_design(const TernaryTensor& design);

}  // namespace voxto
