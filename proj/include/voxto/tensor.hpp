#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace voxto {

/// Extent of a structured voxel (or node) grid. Linear indices are
/// C-contiguous with z fastest: (i * ny + j) * nz + k.
struct Dims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  [[nodiscard]] std::size_t count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
  }
  [[nodiscard]] std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * ny + j) * nz + k;
  }
  [[nodiscard]] int extent(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
  [[nodiscard]] Dims nodes() const { return {nx + 1, ny + 1, nz + 1}; }
  [[nodiscard]] bool contains(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < nx && j < ny && k < nz;
  }

  friend bool operator==(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& d);

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Multi-channel field over a voxel grid, laid out [C, nx, ny, nz] with z fastest.
template <typename Scalar>
class VoxelTensor {
 public:
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  VoxelTensor() = default;
  VoxelTensor(int channels, const Dims& dims, Scalar fill = Scalar(0))
      : channels_(channels), dims_(dims), data_(Storage::Constant(static_cast<Eigen::Index>(channels * dims.count()), fill)) {
    if (channels <= 0 || dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0) {
      throw DimensionError("tensor dims must be positive, got " + std::to_string(channels) + "x" + to_string(dims));
    }
  }
  VoxelTensor(int channels, const Dims& dims, Storage data) : channels_(channels), dims_(dims), data_(std::move(data)) {
    if (static_cast<std::size_t>(data_.size()) != channels * dims.count()) {
      throw DimensionError("tensor payload size does not match " + std::to_string(channels) + "x" + to_string(dims));
    }
  }

  [[nodiscard]] int channels() const { return channels_; }
  [[nodiscard]] const Dims& dims() const { return dims_; }
  [[nodiscard]] std::size_t voxels() const { return dims_.count(); }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(data_.size()); }

  Scalar& operator()(int c, int i, int j, int k) { return data_[flat(c, dims_.index(i, j, k))]; }
  const Scalar& operator()(int c, int i, int j, int k) const { return data_[flat(c, dims_.index(i, j, k))]; }
  Scalar& at(int c, std::size_t voxel) { return data_[flat(c, voxel)]; }
  const Scalar& at(int c, std::size_t voxel) const { return data_[flat(c, voxel)]; }

  Storage& values() { return data_; }
  const Storage& values() const { return data_; }

  auto channel(int c) { return data_.segment(static_cast<Eigen::Index>(c * voxels()), static_cast<Eigen::Index>(voxels())); }
  auto channel(int c) const { return data_.segment(static_cast<Eigen::Index>(c * voxels()), static_cast<Eigen::Index>(voxels())); }

  template <typename Other>
  [[nodiscard]] VoxelTensor<Other> cast() const {
    return VoxelTensor<Other>(channels_, dims_, data_.template cast<Other>().eval());
  }

  friend bool operator==(const VoxelTensor& a, const VoxelTensor& b) {
    return a.channels_ == b.channels_ && a.dims_ == b.dims_ && (a.data_ == b.data_).all();
  }

 private:
  [[nodiscard]] Eigen::Index flat(int c, std::size_t voxel) const {
    return static_cast<Eigen::Index>(static_cast<std::size_t>(c) * voxels() + voxel);
  }

  int channels_ = 0;
  Dims dims_{};
  Storage data_;
};

using RealTensor = VoxelTensor<double>;
using ByteTensor = VoxelTensor<std::uint8_t>;
using TernaryTensor = VoxelTensor<std::int8_t>;

/// Per-voxel density in [rho_min, 1] (single channel).
using DensityField = VoxelTensor<double>;
/// Binarized structure, values in {0, 1} (single channel).
using Mask = VoxelTensor<std::uint8_t>;

template <typename A, typename B>
void require_same_grid(const VoxelTensor<A>& a, const VoxelTensor<B>& b, const char* what) {
  if (a.dims() != b.dims()) {
    throw DimensionError(std::string(what) + ": grid mismatch " + to_string(a.dims()) + " vs " + to_string(b.dims()));
  }
}

}  // namespace voxto
