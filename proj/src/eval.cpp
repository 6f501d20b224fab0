#include "voxto/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>

namespace voxto {

ConfusionCounts confusion(const Mask& pred, const Mask& gt, const TernaryTensor& design) {
  require_same_grid(pred, gt, "confusion");
  require_same_grid(pred, design, "confusion");
  ConfusionCounts c;
  for (std::size_t v = 0; v < pred.voxels(); ++v) {
    if (design.at(0, v) != -1) continue;
    const bool p = pred.at(0, v) != 0;
    const bool g = gt.at(0, v) != 0;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double iou(const Mask& pred, const Mask& gt, const TernaryTensor& design) {
  const ConfusionCounts c = confusion(pred, gt, design);
  const std::size_t denom = c.tp + c.fn + c.fp;
  if (denom == 0) return 1.0;
  return static_cast<double>(c.tp) / static_cast<double>(denom);
}

Connectivity connectivity_ok(const Mask& mask, const Problem& p) {
  require_same_grid(mask, p.design, "connectivity_ok");
  const Dims& d = p.dims;
  std::vector<char> seen(d.count(), 0);
  std::deque<std::array<int, 3>> queue;
  std::size_t v = 0;
  for (int i = 0; i < d.nx; ++i)
    for (int j = 0; j < d.ny; ++j)
      for (int k = 0; k < d.nz; ++k, ++v) {
        if (mask.at(0, v) && p.has_support(v)) {
          seen[v] = 1;
          queue.push_back({i, j, k});
        }
      }
  static constexpr int steps[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  while (!queue.empty()) {
    const auto [i, j, k] = queue.front();
    queue.pop_front();
    for (const auto& s : steps) {
      const int a = i + s[0], b = j + s[1], c = k + s[2];
      if (!d.contains(a, b, c)) continue;
      const std::size_t n = d.index(a, b, c);
      if (seen[n] || !mask.at(0, n)) continue;
      seen[n] = 1;
      queue.push_back({a, b, c});
    }
  }
  Connectivity result;
  for (std::size_t n = 0; n < d.count(); ++n) {
    if (p.has_load(n) && !seen[n]) ++result.unreached_load_voxels;
  }
  result.ok = result.unreached_load_voxels == 0;
  return result;
}

std::string FailReport::reason() const {
  if (disconnected) return "disconnected";
  if (stress_failed) return "stress";
  return "ok";
}

FailReport check_fail(const Mask& mask, const Problem& p, double tol_factor, const SolveOptions& solve) {
  FailReport report;
  const Connectivity conn = connectivity_ok(mask, p);
  report.unreached_load_voxels = conn.unreached_load_voxels;
  if (!conn.ok) {
    report.disconnected = true;
    return report;
  }
  DensityField rho(1, p.dims, p.material.rho_min);
  for (std::size_t v = 0; v < p.dims.count(); ++v) {
    if (mask.at(0, v)) rho.at(0, v) = 1.0;
  }
  SolveResult solved;
  try {
    solved = solve_displacements(p, rho, solve);
  } catch (const SolveError& e) {
    throw EvaluationError(std::string("stress check failed to solve: ") + e.what());
  }
  const RealTensor vm = von_mises(p, solved.u);
  for (std::size_t v = 0; v < p.dims.count(); ++v) {
    if (mask.at(0, v)) report.max_von_mises = std::max(report.max_von_mises, vm.at(0, v));
  }
  report.stress_failed = report.max_von_mises > tol_factor * p.material.yield_stress;
  return report;
}

double fail_percentage(std::span<const FailReport> reports) {
  if (reports.empty()) throw EvaluationError("fail percentage of an empty report list");
  const auto failed = std::count_if(reports.begin(), reports.end(), [](const FailReport& r) { return r.failed(); });
  return 100.0 * static_cast<double>(failed) / static_cast<double>(reports.size());
}

double bce_weight(std::span<const LabeledMask> ground_truths) {
  if (ground_truths.empty()) throw EvaluationError("BCE weight of an empty training set");
  std::size_t solid = 0, void_ = 0;
  for (const auto& gt : ground_truths) {
    require_same_grid(gt.mask, gt.design, "bce_weight");
    for (std::size_t v = 0; v < gt.mask.voxels(); ++v) {
      if (gt.design.at(0, v) != -1) continue;
      if (gt.mask.at(0, v)) ++solid;
      else ++void_;
    }
  }
  if (solid == 0) throw EvaluationError("BCE weight undefined: no solid voxels in the free region");
  return static_cast<double>(void_) / static_cast<double>(solid);
}

double weighted_bce(const DensityField& pred, const Mask& gt, const TernaryTensor& design, double weight,
                    double eps) {
  require_same_grid(pred, gt, "weighted_bce");
  require_same_grid(pred, design, "weighted_bce");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t v = 0; v < pred.voxels(); ++v) {
    if (design.at(0, v) != -1) continue;
    const double q = std::clamp(pred.at(0, v), eps, 1.0 - eps);
    sum += gt.at(0, v) ? -weight * std::log(q) : -std::log(1.0 - q);
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

SECurve::SECurve(std::vector<SEPoint> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const SEPoint& p = points_[i];
    if (p.train_size <= 0) throw EvaluationError("training sizes must be positive");
    if (i > 0 && p.train_size <= points_[i - 1].train_size) {
      throw EvaluationError("training sizes must be strictly increasing");
    }
    if (!(p.iou >= 0.0 && p.iou <= 1.0)) throw EvaluationError("IoU must lie in [0, 1]");
    if (!(p.fail_pct >= 0.0 && p.fail_pct <= 100.0)) throw EvaluationError("fail percentage must lie in [0, 100]");
  }
}

double auc_150(const SECurve& curve, Criterion criterion) {
  std::vector<SEPoint> eligible;
  for (const auto& p : curve.points()) {
    if (p.train_size <= 150) eligible.push_back(p);
  }
  if (eligible.size() < 2) throw EvaluationError("AUC_150 needs at least two points with training size <= 150");
  // Width-weighted mean of the segment midpoints, accumulated as deviations
  // from the first segment so constant curves come back exactly.
  const double width = std::log10(eligible.back().train_size) - std::log10(eligible.front().train_size);
  const auto midpoint = [&](std::size_t i) {
    return 0.5 * (eligible[i].value(criterion) + eligible[i - 1].value(criterion));
  };
  const double base = midpoint(1);
  double deviation = 0.0;
  for (std::size_t i = 2; i < eligible.size(); ++i) {
    const double dx = std::log10(eligible[i].train_size) - std::log10(eligible[i - 1].train_size);
    deviation += dx * (midpoint(i) - base);
  }
  return base + deviation / width;
}

double final_score(const SECurve& curve, Criterion criterion) {
  if (curve.empty()) throw EvaluationError("final score of an empty curve");
  return curve.points().back().value(criterion);
}

const std::vector<int>& disc_train_sizes() {
  static const std::vector<int> sizes{2, 4, 10, 50, 100, 150, 250, 500, 1000, 1500};
  return sizes;
}

const std::vector<int>& sphere_train_sizes() {
  static const std::vector<int> sizes{2, 4, 10, 50, 100, 150};
  return sizes;
}

}  // namespace voxto
