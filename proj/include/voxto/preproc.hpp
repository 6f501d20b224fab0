#pragma once

#include "voxto/elasticity.hpp"
#include "voxto/sample_io.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace voxto {

enum class PreprocKind { trivial, pde, convex_hull };
enum class PdeOutput { von_mises, full_stress, displacements };

const char* to_string(PreprocKind kind);
const char* to_string(PdeOutput output);
PreprocKind parse_preproc_kind(const std::string& name);
PdeOutput parse_pde_output(const std::string& name);

/// Network input: channels [C, nx, ny, nz] with one semantic tag per channel.
using InputTensor = TaggedTensor;

struct PreprocConfig {
  std::vector<PreprocKind> kinds{PreprocKind::trivial};
  PdeOutput pde_output = PdeOutput::von_mises;
  std::optional<double> force_norm;   // mean of per-sample max |F|
  std::optional<double> stress_norm;  // mean of per-sample max |raw PDE output|
  SolveOptions solve{1e-10, 0};

  [[nodiscard]] bool uses(PreprocKind kind) const;
  [[nodiscard]] int channel_count() const;
};

class PreprocError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Computes force_norm (and stress_norm when the PDE kind is selected) over a
/// training set.
PreprocConfig fit_normalization(std::span<const Problem> training, PreprocConfig cfg);

/// [dirichlet_x/y/z, force_x/y/z / force_norm, design].
InputTensor trivial_preprocess(const Problem& p, const PreprocConfig& cfg);

/// 1 on free and solid voxels, rho_min on void voxels.
DensityField build_rho_init(const Problem& p);

/// Unnormalized PDE field for rho_init; void voxels are zeroed.
InputTensor pde_raw(const Problem& p, PdeOutput output, const SolveOptions& solve = {1e-10, 0});
InputTensor pde_preprocess(const Problem& p, const PreprocConfig& cfg);

/// Voxels inside the convex hull of all support and load voxels.
InputTensor convex_hull_preprocess(const Problem& p);

InputTensor concat(std::span<const InputTensor> parts);

/// All selected kinds, concatenated in cfg.kinds order.
InputTensor preprocess(const Problem& p, const PreprocConfig& cfg);

std::vector<std::string> pde_tags(PdeOutput output);

}  // namespace voxto
