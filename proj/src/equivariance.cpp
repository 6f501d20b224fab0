#include "voxto/equivariance.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace voxto {

int GroupElement::source(int r) const {
  for (int c = 0; c < 3; ++c) {
    if (rotation(r, c) != 0) return c;
  }
  throw std::logic_error("group element " + name + " is not a signed permutation");
}

int GroupElement::sign(int r) const { return rotation(r, source(r)); }

std::string signed_permutation_code(const Eigen::Matrix3i& r) {
  std::string code;
  for (int row = 0; row < 3; ++row) {
    for (int c = 0; c < 3; ++c) {
      if (r(row, c) != 0) {
        code += r(row, c) > 0 ? '+' : '-';
        code += "xyz"[c];
      }
    }
  }
  return code;
}

GroupKind parse_group_kind(const std::string& name) {
  if (name == "none" || name == "trivial") return GroupKind::trivial;
  if (name == "d4" || name == "D4") return GroupKind::d4;
  if (name == "oh" || name == "Oh" || name == "O_h") return GroupKind::oh;
  throw std::invalid_argument("unknown group '" + name + "' (expected none, d4 or oh)");
}

const char* to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::trivial: return "none";
    case GroupKind::d4: return "d4";
    case GroupKind::oh: return "oh";
  }
  return "?";
}

int SymmetryGroup::index_of(const Eigen::Matrix3i& r) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].rotation == r) return static_cast<int>(i);
  }
  return -1;
}

const GroupElement& SymmetryGroup::find(const std::string& name) const {
  for (const auto& e : elements) {
    if (e.name == name || signed_permutation_code(e.rotation) == name) return e;
  }
  throw std::invalid_argument("group has no element named '" + name + "'");
}

SymmetryGroup make_group(std::vector<GroupElement> elements) {
  SymmetryGroup g;
  g.elements = std::move(elements);
  const std::size_t n = g.elements.size();
  g.product.assign(n, std::vector<int>(n, -1));
  g.inverse.assign(n, -1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      g.product[a][b] = g.index_of(g.elements[a].rotation * g.elements[b].rotation);
    }
  }
  const int id = g.index_of(Eigen::Matrix3i::Identity());
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (id >= 0 && g.product[a][b] == id) {
        g.inverse[a] = static_cast<int>(b);
        break;
      }
    }
  }
  return g;
}

namespace {

GroupElement element(std::initializer_list<int> entries, std::string name) {
  GroupElement g;
  auto it = entries.begin();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) g.rotation(r, c) = *it++;
  g.name = std::move(name);
  return g;
}

}  // namespace

SymmetryGroup group(GroupKind kind) {
  switch (kind) {
    case GroupKind::trivial: return make_group({GroupElement{}});
    case GroupKind::d4:
      return make_group({
          element({1, 0, 0, 0, 1, 0, 0, 0, 1}, "e"),
          element({0, -1, 0, 1, 0, 0, 0, 0, 1}, "rz90"),
          element({-1, 0, 0, 0, -1, 0, 0, 0, 1}, "rz180"),
          element({0, 1, 0, -1, 0, 0, 0, 0, 1}, "rz270"),
          element({-1, 0, 0, 0, 1, 0, 0, 0, 1}, "mx"),
          element({1, 0, 0, 0, -1, 0, 0, 0, 1}, "my"),
          element({0, 1, 0, 1, 0, 0, 0, 0, 1}, "mxy"),
          element({0, -1, 0, -1, 0, 0, 0, 0, 1}, "mxy_anti"),
      });
    case GroupKind::oh: {
      std::vector<GroupElement> elements;
      std::array<int, 3> perm{0, 1, 2};
      do {
        for (int signs = 0; signs < 8; ++signs) {
          GroupElement g;
          g.rotation.setZero();
          for (int r = 0; r < 3; ++r) g.rotation(r, perm[r]) = (signs >> (2 - r)) & 1 ? -1 : 1;
          g.name = signed_permutation_code(g.rotation);
          elements.push_back(std::move(g));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      return make_group(std::move(elements));
    }
  }
  throw std::invalid_argument("unknown group kind");
}

bool satisfies_group_axioms(const SymmetryGroup& g) {
  const int n = static_cast<int>(g.size());
  const int id = g.index_of(Eigen::Matrix3i::Identity());
  if (n == 0 || id < 0) return false;
  for (int a = 0; a < n; ++a) {
    if (g.inverse[a] < 0 || g.product[a][g.inverse[a]] != id || g.product[g.inverse[a]][a] != id) return false;
    if (g.product[a][id] != a || g.product[id][a] != a) return false;
    for (int b = 0; b < n; ++b) {
      if (g.product[a][b] < 0) return false;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (g.product[g.product[a][b]][c] != g.product[a][g.product[b][c]]) return false;
      }
  return true;
}

bool acts_on(const GroupElement& g, const Dims& dims) {
  for (int r = 0; r < 3; ++r) {
    if (dims.extent(g.source(r)) != dims.extent(r)) return false;
  }
  return true;
}

Problem transform_problem(const GroupElement& g, const Problem& p) {
  detail::require_acts_on(g, p.dims);
  for (int r = 0; r < 3; ++r) {
    if (p.voxel_size[g.source(r)] != p.voxel_size[r]) {
      throw DimensionError("group element " + g.name + " does not preserve the voxel size");
    }
  }
  Problem out = p;
  out.dirichlet = act_unsigned_vector(g, p.dirichlet);
  out.forces = act_vector(g, p.forces);
  out.design = act_scalar(g, p.design);
  return out;
}

namespace {

Eigen::ArrayXd pairwise_sum(const std::vector<Eigen::ArrayXd>& terms, std::size_t begin, std::size_t end) {
  if (end - begin == 1) return terms[begin];
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum(terms, begin, mid) + pairwise_sum(terms, mid, end);
}

}  // namespace

ProblemPredictor wrap(ProblemPredictor f, SymmetryGroup g) {
  if (g.size() == 0) throw std::invalid_argument("cannot wrap over an empty group");
  return [f = std::move(f), g = std::move(g)](const Problem& x) -> DensityField {
    std::vector<Eigen::ArrayXd> terms;
    terms.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const GroupElement& elem = g.elements[i];
      const GroupElement& inv = g.elements[static_cast<std::size_t>(g.inverse[i])];
      const Problem gx = transform_problem(elem, x);  // dims/voxel-size mismatch is the caller's error
      DensityField y;
      try {
        y = f(gx);
      } catch (const std::exception& e) {
        throw PredictorError("group element " + elem.name + ": " + e.what());
      }
      if (y.channels() != 1 || y.dims() != x.dims) {
        throw DimensionError("predictor output for group element " + elem.name + " is not 1x" + to_string(x.dims));
      }
      terms.push_back(act_scalar(inv, y).values());
    }
    DensityField out(1, x.dims);
    out.values() = pairwise_sum(terms, 0, terms.size()) / static_cast<double>(terms.size());
    return out;
  };
}

ProblemPredictor wrap(TensorPredictor f, SymmetryGroup g, Preprocessor pre) {
  return wrap(ProblemPredictor([f = std::move(f), pre = std::move(pre)](const Problem& p) { return f(pre(p)); }),
              std::move(g));
}

}  // namespace voxto
