#pragma once

#include "voxto/elasticity.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace voxto {

enum class FilterKind { sensitivity, density };

struct SimpParams {
  double volume_fraction_max = 0.4;  // fraction of the free design space
  double filter_radius = 1.5;        // voxels
  double move_limit = 0.2;
  double oc_damping = 0.5;
  int max_iters = 200;
  double change_tol = 0.01;
  FilterKind filter = FilterKind::sensitivity;
  SolveOptions solve;
};

void validate_params(const SimpParams& params);

struct SimpState {
  DensityField rho;
  int iteration = 0;
  std::vector<double> compliance_history;
  std::vector<double> volume_history;  // free-space volume fraction after each update
  std::vector<double> change_history;
  double last_change = 0.0;
};

/// dc/drho_e = -p E0 rho_e^(p-1) u_e^T K_e u_e.
RealTensor sensitivity(const Problem& p, const DensityField& rho, const DisplacementField& u);

/// Linear cone filter w(d) = max(0, radius - d) over voxel-center distances,
/// normalized per voxel. Precomputes its stencil once.
class ConeFilter {
 public:
  ConeFilter(const Dims& dims, double radius);

  /// Weighted average at every voxel.
  [[nodiscard]] Eigen::ArrayXd smooth(const Eigen::ArrayXd& field) const;
  /// Transpose of smooth(), used for chain-ruling through a density filter.
  [[nodiscard]] Eigen::ArrayXd smooth_transpose(const Eigen::ArrayXd& field) const;

 private:
  [[nodiscard]] Eigen::ArrayXd neighbor_sum(const Eigen::ArrayXd& field) const;

  struct Tap {
    int di, dj, dk;
    double weight;
  };
  Dims dims_;
  std::vector<Tap> taps_;
  Eigen::ArrayXd weight_sum_;
};

/// Cone-filtered field on the free region; void/solid voxels keep their input values.
RealTensor density_filter(const RealTensor& field, const TernaryTensor& design, double radius);

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Optimality-criteria step with bisection on the volume multiplier so the
/// free-region density sum hits volume_fraction_max * |free|.
DensityField oc_update(const DensityField& rho, const RealTensor& sens, double dv, const TernaryTensor& design,
                       double rho_min, const SimpParams& params);

struct SimpResult {
  DensityField rho;
  SimpState state;
};

/// Initial design: free voxels at the volume bound, solid at 1, void at rho_min.
DensityField initial_design(const Problem& p, double volume_fraction);

SimpResult run_simp(const Problem& p, const SimpParams& params);

/// "iteration,compliance,volume,change" rows, one per iteration.
std::string history_csv(const SimpState& state);

}  // namespace voxto
