#pragma once

#include "voxto/elasticity.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace voxto {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Tallies restricted to the free design region (design == -1).
ConfusionCounts confusion(const Mask& pred, const Mask& gt, const TernaryTensor& design);

/// TP / (TP + FN + FP) over the free region; 1 when both masks are empty there.
double iou(const Mask& pred, const Mask& gt, const TernaryTensor& design);

struct Connectivity {
  bool ok = true;
  std::size_t unreached_load_voxels = 0;
};

/// 6-connected flood fill through solid voxels from every solid support voxel;
/// ok iff every load voxel is reached.
Connectivity connectivity_ok(const Mask& mask, const Problem& p);

struct FailReport {
  bool stress_failed = false;
  double max_von_mises = 0.0;  // Pa, over solid voxels; 0 when the solve was skipped
  bool disconnected = false;
  std::size_t unreached_load_voxels = 0;

  [[nodiscard]] bool failed() const { return stress_failed || disconnected; }
  [[nodiscard]] std::string reason() const;
};

inline constexpr double kDefaultYieldTolerance = 1.10;

/// Disconnected parts fail without a solve. Otherwise the mask is solved as
/// density (solid 1, void rho_min) and fails when the peak von Mises stress
/// over solid voxels exceeds tol_factor * yield stress.
FailReport check_fail(const Mask& mask, const Problem& p, double tol_factor = kDefaultYieldTolerance,
                      const SolveOptions& solve = {});

double fail_percentage(std::span<const FailReport> reports);

struct LabeledMask {
  Mask mask;
  TernaryTensor design;
};

/// Positive-class weight: #void / #solid over the free region of a training set.
double bce_weight(std::span<const LabeledMask> ground_truths);

/// Mean over the free region of -[w gt log(p) + (1 - gt) log(1 - p)], p clamped to [eps, 1 - eps].
double weighted_bce(const DensityField& pred, const Mask& gt, const TernaryTensor& design, double weight,
                    double eps = 1e-7);

enum class Criterion { iou, fail_pct };

struct SEPoint {
  int train_size = 0;
  double iou = 0.0;
  double fail_pct = 0.0;

  [[nodiscard]] double value(Criterion c) const { return c == Criterion::iou ? iou : fail_pct; }
};

/// Sample-efficiency curve: strictly increasing training sizes.
class SECurve {
 public:
  SECurve() = default;
  explicit SECurve(std::vector<SEPoint> points);

  [[nodiscard]] const std::vector<SEPoint>& points() const { return points_; }
  [[nodiscard]] bool empty() const { return points_.empty(); }

 private:
  std::vector<SEPoint> points_;
};

/// Trapezoidal area over log10(train_size) for sizes <= 150, divided by the
/// covered log10 width.
double auc_150(const SECurve& curve, Criterion criterion);

/// Criterion value at the largest training size.
double final_score(const SECurve& curve, Criterion criterion);

/// Training-subset sizes used for the two bracket datasets.
const std::vector<int>& disc_train_sizes();
const std::vector<int>& sphere_train_sizes();

}  // namespace voxto
