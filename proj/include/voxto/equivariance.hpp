#pragma once

#include "voxto/grid.hpp"
#include "voxto/preproc.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace voxto {

/// A cube symmetry: signed permutation matrix R acting on positions relative
/// to the grid center and on vector components.
struct GroupElement {
  Eigen::Matrix3i rotation = Eigen::Matrix3i::Identity();
  std::string name = "e";

  /// Source axis feeding output axis r, and its sign: (R x)_r = sign(r) * x_source(r).
  [[nodiscard]] int source(int r) const;
  [[nodiscard]] int sign(int r) const;
  [[nodiscard]] int determinant() const { return rotation.determinant(); }
};

/// Signed-permutation code such as "+x+y+z" or "-y+x+z" (row images).
std::string signed_permutation_code(const Eigen::Matrix3i& r);

enum class GroupKind { trivial, d4, oh };
GroupKind parse_group_kind(const std::string& name);
const char* to_string(GroupKind kind);

struct SymmetryGroup {
  std::vector<GroupElement> elements;
  std::vector<std::vector<int>> product;  // product[a][b] = index of R_a R_b, -1 if missing
  std::vector<int> inverse;               // -1 if missing

  [[nodiscard]] std::size_t size() const { return elements.size(); }
  [[nodiscard]] int index_of(const Eigen::Matrix3i& r) const;
  [[nodiscard]] const GroupElement& find(const std::string& name) const;
};

/// Builds closure and inverse tables for an arbitrary element list.
SymmetryGroup make_group(std::vector<GroupElement> elements);

/// D4: 90 degree rotations about z and the four reflections fixing z.
/// O_h: all 48 signed permutations. Canonical order, identity first.
SymmetryGroup group(GroupKind kind);

/// Closure, identity, inverses and associativity, checked from the tables.
bool satisfies_group_axioms(const SymmetryGroup& g);

/// True when g maps a grid with these dims onto itself.
bool acts_on(const GroupElement& g, const Dims& dims);

namespace detail {

inline void require_acts_on(const GroupElement& g, const Dims& dims) {
  if (!acts_on(g, dims)) {
    throw DimensionError("group element " + g.name + " does not map a " + to_string(dims) + " grid onto itself");
  }
}

/// Calls visit(src_voxel, dst_voxel) for the spatial permutation induced by g.
template <typename Visit>
void for_each_mapped_voxel(const GroupElement& g, const Dims& d, Visit&& visit) {
  int src_axis[3], sgn[3];
  for (int r = 0; r < 3; ++r) {
    src_axis[r] = g.source(r);
    sgn[r] = g.sign(r);
  }
  int in[3];
  std::size_t src = 0;
  for (in[0] = 0; in[0] < d.nx; ++in[0])
    for (in[1] = 0; in[1] < d.ny; ++in[1])
      for (in[2] = 0; in[2] < d.nz; ++in[2], ++src) {
        int out[3];
        for (int r = 0; r < 3; ++r) {
          const int a = src_axis[r];
          out[r] = sgn[r] > 0 ? in[a] : d.extent(a) - 1 - in[a];
        }
        visit(src, d.index(out[0], out[1], out[2]));
      }
}

}  // namespace detail

/// Spatial permutation of every channel (scalar fields, masks, design codes).
template <typename Scalar>
VoxelTensor<Scalar> act_scalar(const GroupElement& g, const VoxelTensor<Scalar>& field) {
  detail::require_acts_on(g, field.dims());
  VoxelTensor<Scalar> out(field.channels(), field.dims());
  detail::for_each_mapped_voxel(g, field.dims(), [&](std::size_t src, std::size_t dst) {
    for (int c = 0; c < field.channels(); ++c) out.at(c, dst) = field.at(c, src);
  });
  return out;
}

/// Spatial permutation plus v' = R v on a 3-channel field.
template <typename Scalar>
VoxelTensor<Scalar> act_vector(const GroupElement& g, const VoxelTensor<Scalar>& field) {
  if (field.channels() != 3) throw DimensionError("act_vector needs a 3-channel field");
  detail::require_acts_on(g, field.dims());
  VoxelTensor<Scalar> out(3, field.dims());
  detail::for_each_mapped_voxel(g, field.dims(), [&](std::size_t src, std::size_t dst) {
    for (int r = 0; r < 3; ++r) out.at(r, dst) = static_cast<Scalar>(g.sign(r)) * field.at(g.source(r), src);
  });
  return out;
}

/// Spatial permutation plus channel permutation by |R| (direction-unsigned flags).
template <typename Scalar>
VoxelTensor<Scalar> act_unsigned_vector(const GroupElement& g, const VoxelTensor<Scalar>& field) {
  if (field.channels() != 3) throw DimensionError("act_unsigned_vector needs a 3-channel field");
  detail::require_acts_on(g, field.dims());
  VoxelTensor<Scalar> out(3, field.dims());
  detail::for_each_mapped_voxel(g, field.dims(), [&](std::size_t src, std::size_t dst) {
    for (int r = 0; r < 3; ++r) out.at(r, dst) = field.at(g.source(r), src);
  });
  return out;
}

/// sigma' = R sigma R^T on a 6-channel Voigt field (xx, yy, zz, xy, yz, zx).
template <typename Scalar>
VoxelTensor<Scalar> act_symmetric_tensor(const GroupElement& g, const VoxelTensor<Scalar>& field) {
  if (field.channels() != 6) throw DimensionError("act_symmetric_tensor needs a 6-channel field");
  detail::require_acts_on(g, field.dims());
  static constexpr int voigt[3][3] = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}};
  static constexpr int rows[6] = {0, 1, 2, 0, 1, 2};
  static constexpr int cols[6] = {0, 1, 2, 1, 2, 0};
  VoxelTensor<Scalar> out(6, field.dims());
  detail::for_each_mapped_voxel(g, field.dims(), [&](std::size_t src, std::size_t dst) {
    for (int v = 0; v < 6; ++v) {
      const int a = rows[v], b = cols[v];
      out.at(v, dst) =
          static_cast<Scalar>(g.sign(a) * g.sign(b)) * field.at(voigt[g.source(a)][g.source(b)], src);
    }
  });
  return out;
}

/// Moves a whole problem: design by act_scalar, forces by act_vector,
/// Dirichlet flags by act_unsigned_vector. Requires g to preserve both the
/// grid dims and the voxel size.
Problem transform_problem(const GroupElement& g, const Problem& p);

using TensorPredictor = std::function<DensityField(const InputTensor&)>;
using ProblemPredictor = std::function<DensityField(const Problem&)>;
using Preprocessor = std::function<InputTensor(const Problem&)>;

class PredictorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Group averaging: x -> (1/|G|) sum_g act_scalar(g^-1, f(pre(transform_problem(g, x)))).
/// Exactly G-equivariant for any f; terms are summed pairwise in group order.
ProblemPredictor wrap(TensorPredictor f, SymmetryGroup g, Preprocessor pre);

/// Same averaging for predictors that consume the problem directly (baselines).
ProblemPredictor wrap(ProblemPredictor f, SymmetryGroup g);

}  // namespace voxto
