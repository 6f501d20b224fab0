#include "voxto/simp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace voxto {

void validate_params(const SimpParams& params) {
  if (!(params.volume_fraction_max > 0.0 && params.volume_fraction_max <= 1.0)) {
    throw ParameterError("volume_fraction_max must lie in (0, 1]");
  }
  if (!(params.filter_radius >= 1.0)) throw ParameterError("filter_radius must be >= 1");
  if (!(params.move_limit > 0.0 && params.move_limit < 1.0)) throw ParameterError("move_limit must lie in (0, 1)");
  if (!(params.oc_damping > 0.0 && params.oc_damping <= 1.0)) throw ParameterError("oc_damping must lie in (0, 1]");
  if (params.max_iters < 0) throw ParameterError("max_iters must be non-negative");
  if (!(params.change_tol >= 0.0)) throw ParameterError("change_tol must be non-negative");
}

RealTensor sensitivity(const Problem& p, const DensityField& rho, const DisplacementField& u) {
  const StiffnessOperator op(p, rho);
  const ElementMatrix& ke = op.element_matrix();
  const Material& m = p.material;
  RealTensor sens(1, p.dims, 0.0);
  Eigen::Matrix<double, 24, 1> ue;
  for (std::size_t e = 0; e < p.dims.count(); ++e) {
    const auto dofs = op.element_dofs(e);
    for (int l = 0; l < 24; ++l) ue[l] = u.values()[dofs[l]];
    const double energy = std::max(0.0, ue.dot(ke * ue));
    sens.at(0, e) = -m.penalization_p * m.young_modulus * std::pow(rho.at(0, e), m.penalization_p - 1.0) * energy;
  }
  return sens;
}

ConeFilter::ConeFilter(const Dims& dims, double radius) : dims_(dims) {
  if (!(radius >= 1.0)) throw ParameterError("filter radius must be >= 1");
  const int reach = static_cast<int>(std::ceil(radius)) - 1;
  for (int di = -reach; di <= reach; ++di)
    for (int dj = -reach; dj <= reach; ++dj)
      for (int dk = -reach; dk <= reach; ++dk) {
        const double w = radius - std::sqrt(static_cast<double>(di * di + dj * dj + dk * dk));
        if (w > 0.0) taps_.push_back({di, dj, dk, w});
      }
  weight_sum_ = neighbor_sum(Eigen::ArrayXd::Ones(static_cast<Eigen::Index>(dims.count())));
}

Eigen::ArrayXd ConeFilter::neighbor_sum(const Eigen::ArrayXd& field) const {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(field.size());
  std::size_t e = 0;
  for (int i = 0; i < dims_.nx; ++i)
    for (int j = 0; j < dims_.ny; ++j)
      for (int k = 0; k < dims_.nz; ++k, ++e) {
        double acc = 0.0;
        for (const Tap& t : taps_) {
          if (!dims_.contains(i + t.di, j + t.dj, k + t.dk)) continue;
          acc += t.weight * field[static_cast<Eigen::Index>(dims_.index(i + t.di, j + t.dj, k + t.dk))];
        }
        out[static_cast<Eigen::Index>(e)] = acc;
      }
  return out;
}

Eigen::ArrayXd ConeFilter::smooth(const Eigen::ArrayXd& field) const { return neighbor_sum(field) / weight_sum_; }

// The stencil is symmetric, so the transpose only moves the normalization inside.
Eigen::ArrayXd ConeFilter::smooth_transpose(const Eigen::ArrayXd& field) const {
  return neighbor_sum(field / weight_sum_);
}

RealTensor density_filter(const RealTensor& field, const TernaryTensor& design, double radius) {
  require_same_grid(field, design, "density_filter");
  const ConeFilter filter(field.dims(), radius);
  const Eigen::ArrayXd smoothed = filter.smooth(field.channel(0));
  RealTensor out = field;
  for (std::size_t e = 0; e < field.voxels(); ++e) {
    if (design.at(0, e) == -1) out.at(0, e) = smoothed[static_cast<Eigen::Index>(e)];
  }
  return out;
}

DensityField oc_update(const DensityField& rho, const RealTensor& sens, double dv, const TernaryTensor& design,
                       double rho_min, const SimpParams& params) {
  require_same_grid(rho, sens, "oc_update");
  require_same_grid(rho, design, "oc_update");
  if (!(dv > 0.0)) throw ParameterError("volume derivative must be positive");

  std::vector<std::size_t> free;
  for (std::size_t e = 0; e < rho.voxels(); ++e) {
    if (design.at(0, e) == -1) free.push_back(e);
  }
  DensityField next = rho;
  if (free.empty()) return next;

  const auto n = static_cast<Eigen::Index>(free.size());
  Eigen::ArrayXd cur(n), lo(n), hi(n), benefit(n);
  for (Eigen::Index f = 0; f < n; ++f) {
    const std::size_t e = free[static_cast<std::size_t>(f)];
    const double s = sens.at(0, e);
    if (!std::isfinite(s)) throw BracketError("non-finite sensitivity at voxel " + std::to_string(e));
    cur[f] = rho.at(0, e);
    lo[f] = std::max(rho_min, cur[f] - params.move_limit);
    hi[f] = std::min(1.0, cur[f] + params.move_limit);
    benefit[f] = std::max(0.0, -s / dv);
  }
  const double eta = params.oc_damping;
  auto update = [&](double lambda) -> Eigen::ArrayXd {
    Eigen::ArrayXd x(n);
    for (Eigen::Index f = 0; f < n; ++f) {
      const double trial = benefit[f] > 0.0 ? cur[f] * std::pow(benefit[f] / lambda, eta) : 0.0;
      x[f] = std::clamp(trial, lo[f], hi[f]);
    }
    return x;
  };

  const double target = params.volume_fraction_max * static_cast<double>(n);
  const double vol_min = lo.sum();
  const double vol_max = (benefit > 0.0).select(hi, lo).sum();
  const double slack = 1e-4 * target;
  if (vol_max < target - slack || vol_min > target + slack) {
    throw BracketError("volume target " + std::to_string(target) + " outside reachable range [" +
                       std::to_string(vol_min) + ", " + std::to_string(vol_max) + "]; degenerate sensitivities");
  }

  Eigen::ArrayXd x;
  if (vol_max <= target) {
    x = (benefit > 0.0).select(hi, lo);
  } else if (vol_min >= target) {
    x = lo;
  } else {
    // Bisection in log(lambda) between multipliers that saturate every voxel.
    double log_lo = std::numeric_limits<double>::infinity();
    double log_hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index f = 0; f < n; ++f) {
      if (benefit[f] <= 0.0) continue;
      log_lo = std::min(log_lo, std::log(benefit[f]) + std::log(cur[f] / hi[f]) / eta);
      log_hi = std::max(log_hi, std::log(benefit[f]) + std::log(cur[f] / lo[f]) / eta);
    }
    log_lo -= 1.0;
    log_hi += 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (log_lo + log_hi);
      x = update(std::exp(mid));
      const double vol = x.sum();
      if (std::abs(vol - target) <= 1e-10 * target) break;
      if (vol > target) {
        log_lo = mid;
      } else {
        log_hi = mid;
      }
    }
  }
  for (Eigen::Index f = 0; f < n; ++f) next.at(0, free[static_cast<std::size_t>(f)]) = x[f];
  return next;
}

DensityField initial_design(const Problem& p, double volume_fraction) {
  DensityField rho(1, p.dims, volume_fraction);
  for (std::size_t e = 0; e < p.dims.count(); ++e) {
    const auto code = p.design.at(0, e);
    if (code == 0) rho.at(0, e) = p.material.rho_min;
    if (code == 1) rho.at(0, e) = 1.0;
  }
  return rho;
}

SimpResult run_simp(const Problem& p, const SimpParams& params) {
  validate_params(params);
  const ValidationReport report = validate_problem(p);
  if (!report.ok()) {
    throw ParameterError("invalid problem: " + report.violations.front().message);
  }

  SimpState state;
  state.rho = initial_design(p, params.volume_fraction_max);
  const std::size_t free_count = count_design(p.design).free;
  if (free_count == 0) return {state.rho, state};

  const ConeFilter filter(p.dims, params.filter_radius);
  const NodalLoadVector loads = assemble_loads(p);
  const double dv = p.voxel_volume();
  DensityField design_vars = state.rho;

  for (int iter = 1; iter <= params.max_iters; ++iter) {
    const DensityField& physical = state.rho;
    SolveResult solved;
    try {
      solved = solve_displacements(p, physical, params.solve);
    } catch (const SolveError& e) {
      throw SolveError(e.kind(), "iteration " + std::to_string(iter) + ": " + e.what(), e.stats());
    }
    state.compliance_history.push_back(compliance(solved.u, loads));
    RealTensor sens = sensitivity(p, physical, solved.u);

    if (params.filter == FilterKind::sensitivity) {
      const Eigen::ArrayXd weighted = filter.smooth(physical.values() * sens.values());
      sens.values() = weighted / physical.values().max(1e-3);
    } else {
      sens.values() = filter.smooth_transpose(sens.values());
    }

    const DensityField updated = oc_update(design_vars, sens, dv, p.design, p.material.rho_min, params);
    DensityField next_physical = updated;
    if (params.filter == FilterKind::density) {
      next_physical = density_filter(updated, p.design, params.filter_radius);
    }
    state.last_change = (next_physical.values() - physical.values()).abs().maxCoeff();
    design_vars = updated;
    state.rho = next_physical;
    state.iteration = iter;

    double free_volume = 0.0;
    for (std::size_t e = 0; e < p.dims.count(); ++e) {
      if (p.design.at(0, e) == -1) free_volume += state.rho.at(0, e);
    }
    state.volume_history.push_back(free_volume / static_cast<double>(free_count));
    state.change_history.push_back(state.last_change);
    if (state.last_change < params.change_tol) break;
  }
  return {state.rho, state};
}

std::string history_csv(const SimpState& state) {
  std::ostringstream out;
  out << "iteration,compliance,volume,change\n";
  char buf[128];
  for (std::size_t i = 0; i < state.compliance_history.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g,%.8f,%.8f\n", i + 1, state.compliance_history[i],
                  state.volume_history[i], state.change_history[i]);
    out << buf;
  }
  return out.str();
}

}  // namespace voxto
