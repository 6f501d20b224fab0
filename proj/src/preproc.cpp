#include "voxto/preproc.hpp"

#include "voxto/convex_hull.hpp"

#include <algorithm>
#include <cmath>

namespace voxto {

const char* to_string(PreprocKind kind) {
  switch (kind) {
    case PreprocKind::trivial: return "trivial";
    case PreprocKind::pde: return "pde";
    case PreprocKind::convex_hull: return "convex_hull";
  }
  return "?";
}

const char* to_string(PdeOutput output) {
  switch (output) {
    case PdeOutput::von_mises: return "von_mises";
    case PdeOutput::full_stress: return "full_stress";
    case PdeOutput::displacements: return "displacements";
  }
  return "?";
}

PreprocKind parse_preproc_kind(const std::string& name) {
  if (name == "trivial") return PreprocKind::trivial;
  if (name == "pde") return PreprocKind::pde;
  if (name == "convex_hull" || name == "hull") return PreprocKind::convex_hull;
  throw std::invalid_argument("unknown preprocessing '" + name + "'");
}

PdeOutput parse_pde_output(const std::string& name) {
  if (name == "von_mises" || name == "vm") return PdeOutput::von_mises;
  if (name == "full_stress" || name == "stress") return PdeOutput::full_stress;
  if (name == "displacements" || name == "disp") return PdeOutput::displacements;
  throw std::invalid_argument("unknown PDE output '" + name + "'");
}

bool PreprocConfig::uses(PreprocKind kind) const {
  return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

int PreprocConfig::channel_count() const {
  int c = 0;
  for (const PreprocKind k : kinds) {
    switch (k) {
      case PreprocKind::trivial: c += 7; break;
      case PreprocKind::convex_hull: c += 1; break;
      case PreprocKind::pde:
        c += pde_output == PdeOutput::von_mises ? 1 : (pde_output == PdeOutput::full_stress ? 6 : 3);
        break;
    }
  }
  return c;
}

std::vector<std::string> pde_tags(PdeOutput output) {
  switch (output) {
    case PdeOutput::von_mises: return {"vm_stress"};
    case PdeOutput::full_stress: return {"stress_xx", "stress_yy", "stress_zz", "stress_xy", "stress_yz", "stress_zx"};
    case PdeOutput::displacements: return {"disp_x", "disp_y", "disp_z"};
  }
  return {};
}

PreprocConfig fit_normalization(std::span<const Problem> training, PreprocConfig cfg) {
  if (training.empty()) throw PreprocError("cannot fit normalization on an empty training set");
  if (cfg.kinds.empty()) throw PreprocError("preprocessing config selects no kinds");
  double force_sum = 0.0;
  double stress_sum = 0.0;
  const bool pde = cfg.uses(PreprocKind::pde);
  for (const Problem& p : training) {
    force_sum += p.forces.values().abs().maxCoeff();
    if (pde) stress_sum += pde_raw(p, cfg.pde_output, cfg.solve).values.values().abs().maxCoeff();
  }
  const double n = static_cast<double>(training.size());
  if (!(force_sum > 0.0)) throw PreprocError("all training forces are zero; force normalization undefined");
  cfg.force_norm = force_sum / n;
  if (pde) {
    if (!(stress_sum > 0.0)) throw PreprocError("all training PDE outputs are zero; stress normalization undefined");
    cfg.stress_norm = stress_sum / n;
  }
  return cfg;
}

InputTensor trivial_preprocess(const Problem& p, const PreprocConfig& cfg) {
  if (!cfg.force_norm || !(*cfg.force_norm > 0.0)) throw PreprocError("trivial preprocessing needs a fitted force_norm");
  InputTensor out{RealTensor(7, p.dims, 0.0),
                  {"dirichlet_x", "dirichlet_y", "dirichlet_z", "force_x", "force_y", "force_z", "design"}};
  for (int c = 0; c < 3; ++c) {
    out.values.channel(c) = p.dirichlet.channel(c).cast<double>();
    out.values.channel(3 + c) = p.forces.channel(c) / *cfg.force_norm;
  }
  out.values.channel(6) = p.design.channel(0).cast<double>();
  return out;
}

DensityField build_rho_init(const Problem& p) {
  DensityField rho(1, p.dims, 1.0);
  for (std::size_t e = 0; e < p.dims.count(); ++e) {
    if (p.design.at(0, e) == 0) rho.at(0, e) = p.material.rho_min;
  }
  return rho;
}

InputTensor pde_raw(const Problem& p, PdeOutput output, const SolveOptions& solve) {
  SolveResult solved;
  try {
    solved = solve_displacements(p, build_rho_init(p), solve);
  } catch (const SolveError& e) {
    throw SolveError(e.kind(), std::string("pde-preprocess: ") + e.what(), e.stats());
  }
  InputTensor out;
  out.channel_tags = pde_tags(output);
  switch (output) {
    case PdeOutput::von_mises: out.values = von_mises(p, solved.u); break;
    case PdeOutput::full_stress: out.values = stress_tensor(p, solved.u); break;
    case PdeOutput::displacements: {
      out.values = RealTensor(3, p.dims, 0.0);
      std::size_t e = 0;
      for (int i = 0; i < p.dims.nx; ++i)
        for (int j = 0; j < p.dims.ny; ++j)
          for (int k = 0; k < p.dims.nz; ++k, ++e)
            for (int c = 0; c < 3; ++c) {
              double acc = 0.0;
              for (int a = 0; a < 8; ++a) acc += solved.u(c, i + ((a >> 2) & 1), j + ((a >> 1) & 1), k + (a & 1));
              out.values.at(c, e) = acc / 8.0;
            }
      break;
    }
  }
  for (std::size_t e = 0; e < p.dims.count(); ++e) {
    if (p.design.at(0, e) != 0) continue;
    for (int c = 0; c < out.values.channels(); ++c) out.values.at(c, e) = 0.0;
  }
  return out;
}

InputTensor pde_preprocess(const Problem& p, const PreprocConfig& cfg) {
  if (!cfg.stress_norm || !(*cfg.stress_norm > 0.0)) throw PreprocError("PDE preprocessing needs a fitted stress_norm");
  InputTensor out = pde_raw(p, cfg.pde_output, cfg.solve);
  out.values.values() /= *cfg.stress_norm;
  return out;
}

InputTensor convex_hull_preprocess(const Problem& p) {
  std::vector<Eigen::Vector3i> flagged;
  std::size_t e = 0;
  for (int i = 0; i < p.dims.nx; ++i)
    for (int j = 0; j < p.dims.ny; ++j)
      for (int k = 0; k < p.dims.nz; ++k, ++e) {
        if (p.has_support(e) || p.has_load(e)) flagged.emplace_back(i, j, k);
      }
  if (flagged.empty()) throw PreprocError("convex hull preprocessing needs at least one support or load voxel");
  return {hull_mask(p.dims, flagged).cast<double>(), {"convex_hull"}};
}

InputTensor concat(std::span<const InputTensor> parts) {
  if (parts.empty()) throw PreprocError("concat of zero tensors");
  const Dims dims = parts.front().values.dims();
  int channels = 0;
  for (const auto& t : parts) {
    if (t.values.dims() != dims) {
      throw DimensionError("concat: grid mismatch " + to_string(t.values.dims()) + " vs " + to_string(dims));
    }
    channels += t.values.channels();
  }
  InputTensor out{RealTensor(channels, dims, 0.0), {}};
  int offset = 0;
  for (const auto& t : parts) {
    for (int c = 0; c < t.values.channels(); ++c) out.values.channel(offset + c) = t.values.channel(c);
    out.channel_tags.insert(out.channel_tags.end(), t.channel_tags.begin(), t.channel_tags.end());
    offset += t.values.channels();
  }
  return out;
}

InputTensor preprocess(const Problem& p, const PreprocConfig& cfg) {
  if (cfg.kinds.empty()) throw PreprocError("preprocessing config selects no kinds");
  std::vector<InputTensor> parts;
  for (const PreprocKind kind : cfg.kinds) {
    switch (kind) {
      case PreprocKind::trivial: parts.push_back(trivial_preprocess(p, cfg)); break;
      case PreprocKind::pde: parts.push_back(pde_preprocess(p, cfg)); break;
      case PreprocKind::convex_hull: parts.push_back(convex_hull_preprocess(p)); break;
    }
  }
  return concat(parts);
}

}  // namespace voxto
