#pragma once

#include "voxto/tensor.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace voxto {

using LatticePoint = Eigen::Matrix<long long, 3, 1>;

/// det[b - a, c - a, d - a], exact on integer coordinates. Positive when d lies
/// on the side of plane (a, b, c) that its right-handed normal points to.
long long orient3d(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c, const LatticePoint& d);

/// Membership oracle for the convex hull of a lattice point set. Handles the
/// degenerate point / segment / polygon cases; boundary points count as inside.
class LatticeHull {
 public:
  explicit LatticeHull(std::vector<LatticePoint> points);

  [[nodiscard]] bool contains(const LatticePoint& q) const;
  /// 0 = single point, 1 = segment, 2 = planar polygon, 3 = polyhedron.
  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] std::size_t facet_count() const { return faces_.size(); }

 private:
  void build_polygon();
  void build_polyhedron();

  std::vector<LatticePoint> points_;
  int dimension_ = 0;
  LatticePoint origin_ = LatticePoint::Zero();
  LatticePoint direction_ = LatticePoint::Zero();  // segment direction or polygon normal
  long long t_min_ = 0, t_max_ = 0;                  // segment extent along direction_
  int drop_axis_ = 2;                                // polygon projection axis
  std::vector<Eigen::Matrix<long long, 2, 1>> polygon_;  // CCW hull in the projection
  std::vector<std::array<int, 3>> faces_;               // outward-oriented triangles
  LatticePoint box_min_ = LatticePoint::Zero(), box_max_ = LatticePoint::Zero();
};

/// Voxels whose centers lie in the hull of the given voxel centers.
Mask hull_mask(const Dims& dims, const std::vector<Eigen::Vector3i>& voxels);

}  // namespace voxto
