#pragma once

#include "voxto/equivariance.hpp"
#include "voxto/preproc.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace voxto {

/// rho_init reused as a predictor: full material wherever material is allowed.
DensityField baseline_rho_init(const Problem& p);

/// Convex hull of the support and load voxels, as a 0/1 density.
DensityField baseline_hull(const Problem& p);

/// Uniform random densities, reproducible from the seed and the problem grid.
DensityField baseline_random(const Problem& p, std::uint64_t seed);

/// File protocol for out-of-process models:
///   <io_dir>/input/   input tensor (meta.json + tensor.f32)
///   <io_dir>/output/density.f32   nx*ny*nz little-endian float32 in [0, 1]
/// The command runs through /bin/sh with "{io_dir}" substituted and
/// VOXTO_IO_DIR exported; exit code 0 signals success.
struct ExternalPredictorSpec {
  std::string command;
  std::filesystem::path io_dir;
  double timeout_seconds = 60.0;
};

class ExternalPredictorError : public std::runtime_error {
 public:
  enum class Kind { launch, timeout, nonzero_exit, malformed_output };
  ExternalPredictorError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

DensityField run_external(const ExternalPredictorSpec& spec, const InputTensor& input);

/// Tensor predictor that forwards to run_external; calls on one instance are serialized.
TensorPredictor external_predictor(ExternalPredictorSpec spec);

}  // namespace voxto
