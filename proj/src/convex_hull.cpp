#include "voxto/convex_hull.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace voxto {

namespace {

using Point2 = Eigen::Matrix<long long, 2, 1>;

long long cross2(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

Point2 project(const LatticePoint& p, int drop_axis) {
  switch (drop_axis) {
    case 0: return {p.y(), p.z()};
    case 1: return {p.z(), p.x()};
    default: return {p.x(), p.y()};
  }
}

struct LexLess {
  bool operator()(const LatticePoint& a, const LatticePoint& b) const {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  }
};

}  // namespace

long long orient3d(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c, const LatticePoint& d) {
  return (b - a).cross(c - a).dot(d - a);
}

LatticeHull::LatticeHull(std::vector<LatticePoint> points) {
  if (points.empty()) throw std::invalid_argument("convex hull of an empty point set");
  std::sort(points.begin(), points.end(), LexLess{});
  points.erase(std::unique(points.begin(), points.end()), points.end());
  points_ = std::move(points);

  box_min_ = box_max_ = points_.front();
  for (const auto& p : points_) {
    box_min_ = box_min_.cwiseMin(p);
    box_max_ = box_max_.cwiseMax(p);
  }

  origin_ = points_.front();
  const auto second = std::find_if(points_.begin(), points_.end(), [&](const LatticePoint& p) { return p != origin_; });
  if (second == points_.end()) {
    dimension_ = 0;
    return;
  }
  const LatticePoint d = *second - origin_;
  const auto third = std::find_if(points_.begin(), points_.end(),
                                  [&](const LatticePoint& p) { return !d.cross(p - origin_).isZero(); });
  if (third == points_.end()) {
    dimension_ = 1;
    direction_ = d;
    t_min_ = t_max_ = 0;
    for (const auto& p : points_) {
      const long long t = (p - origin_).dot(d);
      t_min_ = std::min(t_min_, t);
      t_max_ = std::max(t_max_, t);
    }
    return;
  }
  const LatticePoint normal = d.cross(*third - origin_);
  const auto fourth = std::find_if(points_.begin(), points_.end(),
                                   [&](const LatticePoint& p) { return normal.dot(p - origin_) != 0; });
  if (fourth == points_.end()) {
    dimension_ = 2;
    direction_ = normal;
    build_polygon();
    return;
  }
  dimension_ = 3;
  build_polyhedron();
}

void LatticeHull::build_polygon() {
  // Projecting along the dominant normal axis is an affine bijection of the plane.
  const LatticePoint a = direction_.cwiseAbs();
  drop_axis_ = (a.x() >= a.y() && a.x() >= a.z()) ? 0 : (a.y() >= a.z() ? 1 : 2);
  std::vector<Point2> pts;
  pts.reserve(points_.size());
  for (const auto& p : points_) pts.push_back(project(p, drop_axis_));
  std::sort(pts.begin(), pts.end(), [](const Point2& u, const Point2& v) {
    return u.x() != v.x() ? u.x() < v.x() : u.y() < v.y();
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // Andrew's monotone chain, collinear points dropped.
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  polygon_ = std::move(hull);
}

void LatticeHull::build_polyhedron() {
  const int n = static_cast<int>(points_.size());
  const LatticePoint& p0 = points_[0];
  int i1 = 1;
  while (points_[i1] == p0) ++i1;
  int i2 = 0;
  for (int i = 1; i < n; ++i) {
    if (!(points_[i1] - p0).cross(points_[i] - p0).isZero()) {
      i2 = i;
      break;
    }
  }
  int i3 = 0;
  for (int i = 1; i < n; ++i) {
    if (orient3d(p0, points_[i1], points_[i2], points_[i]) != 0) {
      i3 = i;
      break;
    }
  }

  std::vector<std::array<int, 3>> faces;
  std::vector<bool> alive;
  auto add_face = [&](int a, int b, int c, int inside) {
    if (orient3d(points_[a], points_[b], points_[c], points_[inside]) > 0) std::swap(b, c);
    faces.push_back({a, b, c});
    alive.push_back(true);
  };
  add_face(0, i1, i2, i3);
  add_face(0, i1, i3, i2);
  add_face(0, i2, i3, i1);
  add_face(i1, i2, i3, 0);

  for (int q = 1; q < n; ++q) {
    if (q == i1 || q == i2 || q == i3) continue;
    std::set<std::pair<int, int>> edges;
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!alive[f]) continue;
      const auto& t = faces[f];
      if (orient3d(points_[t[0]], points_[t[1]], points_[t[2]], points_[q]) > 0) {
        visible.push_back(f);
        edges.insert({t[0], t[1]});
        edges.insert({t[1], t[2]});
        edges.insert({t[2], t[0]});
      }
    }
    if (visible.empty()) continue;
    for (const std::size_t f : visible) alive[f] = false;
    for (const auto& [a, b] : edges) {
      if (edges.count({b, a}) == 0) {
        faces.push_back({a, b, q});
        alive.push_back(true);
      }
    }
  }
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (alive[f]) faces_.push_back(faces[f]);
  }
}

bool LatticeHull::contains(const LatticePoint& q) const {
  if ((q.array() < box_min_.array()).any() || (q.array() > box_max_.array()).any()) return false;
  switch (dimension_) {
    case 0: return q == origin_;
    case 1: {
      if (!direction_.cross(q - origin_).isZero()) return false;
      const long long t = (q - origin_).dot(direction_);
      return t >= t_min_ && t <= t_max_;
    }
    case 2: {
      if (direction_.dot(q - origin_) != 0) return false;
      const Point2 p = project(q, drop_axis_);
      for (std::size_t i = 0; i < polygon_.size(); ++i) {
        if (cross2(polygon_[i], polygon_[(i + 1) % polygon_.size()], p) < 0) return false;
      }
      return true;
    }
    default:
      return std::all_of(faces_.begin(), faces_.end(), [&](const std::array<int, 3>& t) {
        return orient3d(points_[t[0]], points_[t[1]], points_[t[2]], q) <= 0;
      });
  }
}

Mask hull_mask(const Dims& dims, const std::vector<Eigen::Vector3i>& voxels) {
  // Only the lowest and highest voxel of each z-column can be hull vertices.
  std::map<std::pair<int, int>, std::pair<int, int>> columns;
  for (const auto& v : voxels) {
    const auto key = std::make_pair(v.x(), v.y());
    auto it = columns.find(key);
    if (it == columns.end()) {
      columns.emplace(key, std::make_pair(v.z(), v.z()));
    } else {
      it->second.first = std::min(it->second.first, v.z());
      it->second.second = std::max(it->second.second, v.z());
    }
  }
  std::vector<LatticePoint> points;
  for (const auto& [xy, zr] : columns) {
    points.emplace_back(xy.first, xy.second, zr.first);
    if (zr.second != zr.first) points.emplace_back(xy.first, xy.second, zr.second);
  }
  const LatticeHull hull(std::move(points));
  Mask mask(1, dims, 0);
  for (int i = 0; i < dims.nx; ++i)
    for (int j = 0; j < dims.ny; ++j)
      for (int k = 0; k < dims.nz; ++k) {
        if (hull.contains(LatticePoint(i, j, k))) mask(0, i, j, k) = 1;
      }
  return mask;
}

}  // namespace voxto
