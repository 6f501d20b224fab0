#include "voxto/sample_io.hpp"

#include <json.hpp>
#include <zlib.h>

#include <bit>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>

namespace voxto {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(FormatErrorCode code) {
  switch (code) {
    case FormatErrorCode::missing_file: return "missing file";
    case FormatErrorCode::malformed_meta: return "malformed metadata";
    case FormatErrorCode::version_mismatch: return "version mismatch";
    case FormatErrorCode::truncated_tensor: return "truncated tensor";
    case FormatErrorCode::checksum_mismatch: return "checksum mismatch";
  }
  return "format error";
}

std::string crc32_hex(const std::vector<unsigned char>& bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1u << 30));
    crc = crc32(crc, bytes.data() + offset, chunk);
    offset += chunk;
  }
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

namespace {

constexpr const char* kSampleFormat = "voxto-sample";
constexpr const char* kTensorFormat = "voxto-tensor";
constexpr const char* kJsonFormat = "voxto-sample-json";

std::vector<unsigned char> encode_f32(const RealTensor& t) {
  std::vector<unsigned char> out;
  out.reserve(t.size() * 4);
  for (std::size_t n = 0; n < t.size(); ++n) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(t.values()[static_cast<Eigen::Index>(n)]));
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xffu));
  }
  return out;
}

RealTensor decode_f32(const std::vector<unsigned char>& bytes, int channels, const Dims& dims) {
  RealTensor t(channels, dims);
  for (std::size_t n = 0; n < t.size(); ++n) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[4 * n + b]) << (8 * b);
    t.values()[static_cast<Eigen::Index>(n)] = std::bit_cast<float>(bits);
  }
  return t;
}

template <typename Byte>
std::vector<unsigned char> encode_bytes(const VoxelTensor<Byte>& t) {
  std::vector<unsigned char> out(t.size());
  for (std::size_t n = 0; n < t.size(); ++n) out[n] = static_cast<unsigned char>(t.values()[static_cast<Eigen::Index>(n)]);
  return out;
}

template <typename Byte>
VoxelTensor<Byte> decode_bytes(const std::vector<unsigned char>& bytes, int channels, const Dims& dims) {
  VoxelTensor<Byte> t(channels, dims);
  for (std::size_t n = 0; n < t.size(); ++n) t.values()[static_cast<Eigen::Index>(n)] = static_cast<Byte>(bytes[n]);
  return t;
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_file(const fs::path& path, const std::vector<unsigned char>& data) {
  write_file(path, std::string(data.begin(), data.end()));
}

std::vector<unsigned char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(FormatErrorCode::missing_file, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json tensor_entry(const std::string& file, const std::string& dtype, int channels, const Dims& d,
                  const std::vector<unsigned char>& bytes) {
  return json{{"file", file}, {"dtype", dtype}, {"shape", {channels, d.nx, d.ny, d.nz}}, {"crc32", crc32_hex(bytes)}};
}

std::size_t dtype_width(const std::string& dtype) {
  if (dtype == "float32") return 4;
  if (dtype == "uint8" || dtype == "int8") return 1;
  throw FormatError(FormatErrorCode::malformed_meta, "unknown dtype " + dtype);
}

/// Loads one manifest entry and checks dtype, shape, size and checksum.
std::vector<unsigned char> load_tensor_bytes(const fs::path& dir, const json& entry, const std::string& name,
                                             const std::string& dtype, int channels, const Dims& dims) {
  if (entry.at("dtype").get<std::string>() != dtype) {
    throw FormatError(FormatErrorCode::malformed_meta, name + " dtype must be " + dtype);
  }
  const auto shape = entry.at("shape").get<std::vector<int>>();
  if (shape != std::vector<int>{channels, dims.nx, dims.ny, dims.nz}) {
    throw FormatError(FormatErrorCode::malformed_meta, name + " shape does not match dims");
  }
  auto bytes = read_file(dir / entry.at("file").get<std::string>());
  const std::size_t expected = static_cast<std::size_t>(channels) * dims.count() * dtype_width(dtype);
  if (bytes.size() < expected) {
    throw FormatError(FormatErrorCode::truncated_tensor,
                      name + ": " + std::to_string(bytes.size()) + " of " + std::to_string(expected) + " bytes");
  }
  if (bytes.size() > expected) {
    throw FormatError(FormatErrorCode::malformed_meta, name + ": trailing bytes after payload");
  }
  if (crc32_hex(bytes) != entry.at("crc32").get<std::string>()) {
    throw FormatError(FormatErrorCode::checksum_mismatch, name);
  }
  return bytes;
}

json read_meta(const fs::path& dir, const char* format) {
  const auto raw = read_file(dir / "meta.json");
  json meta;
  try {
    meta = json::parse(raw.begin(), raw.end());
  } catch (const json::exception& e) {
    throw FormatError(FormatErrorCode::malformed_meta, e.what());
  }
  if (!meta.is_object() || meta.value("format", std::string()) != format) {
    throw FormatError(FormatErrorCode::malformed_meta, "expected format '" + std::string(format) + "'");
  }
  if (!meta.contains("version") || !meta["version"].is_number_integer()) {
    throw FormatError(FormatErrorCode::malformed_meta, "missing version");
  }
  if (meta["version"].get<int>() != kFormatVersion) {
    throw FormatError(FormatErrorCode::version_mismatch,
                      "file version " + std::to_string(meta["version"].get<int>()) + ", reader version " +
                          std::to_string(kFormatVersion));
  }
  return meta;
}

Dims dims_from(const json& j) {
  const auto v = j.get<std::vector<int>>();
  if (v.size() != 3 || v[0] <= 0 || v[1] <= 0 || v[2] <= 0) {
    throw FormatError(FormatErrorCode::malformed_meta, "dims must be three positive integers");
  }
  return {v[0], v[1], v[2]};
}

json header_json(const Problem& p) {
  return json{
      {"dims", {p.dims.nx, p.dims.ny, p.dims.nz}},
      {"voxel_size_mm", {p.voxel_size.x() * 1e3, p.voxel_size.y() * 1e3, p.voxel_size.z() * 1e3}},
      {"material",
       {{"young_modulus_gpa", p.material.young_modulus / 1e9},
        {"poisson_ratio", p.material.poisson_ratio},
        {"yield_stress_mpa", p.material.yield_stress / 1e6},
        {"penalization_p", p.material.penalization_p},
        {"rho_min", p.material.rho_min}}},
      {"volume_fraction_max", p.volume_fraction_max},
  };
}

Problem header_from(const json& meta) {
  Problem p;
  p.dims = dims_from(meta.at("dims"));
  const auto mm = meta.at("voxel_size_mm").get<std::vector<double>>();
  if (mm.size() != 3) throw FormatError(FormatErrorCode::malformed_meta, "voxel_size_mm must have 3 entries");
  p.voxel_size = Eigen::Vector3d(mm[0] / 1e3, mm[1] / 1e3, mm[2] / 1e3);
  const json& m = meta.at("material");
  p.material.young_modulus = m.at("young_modulus_gpa").get<double>() * 1e9;
  p.material.poisson_ratio = m.at("poisson_ratio").get<double>();
  p.material.yield_stress = m.at("yield_stress_mpa").get<double>() * 1e6;
  p.material.penalization_p = m.at("penalization_p").get<double>();
  p.material.rho_min = m.at("rho_min").get<double>();
  p.volume_fraction_max = meta.at("volume_fraction_max").get<double>();
  return p;
}

template <typename F>
auto guard_json(F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw FormatError(FormatErrorCode::malformed_meta, e.what());
  }
}

}  // namespace

void write_sample(const fs::path& dir, const Problem& p, const std::optional<DensityField>& ground_truth) {
  fs::create_directories(dir);
  const auto dirichlet = encode_bytes(p.dirichlet);
  const auto forces = encode_f32(p.forces);
  const auto design = encode_bytes(p.design);

  json meta = header_json(p);
  meta["format"] = kSampleFormat;
  meta["version"] = kFormatVersion;
  meta["tensors"]["dirichlet"] = tensor_entry("dirichlet.u8", "uint8", 3, p.dims, dirichlet);
  meta["tensors"]["forces"] = tensor_entry("forces.f32", "float32", 3, p.dims, forces);
  meta["tensors"]["design"] = tensor_entry("design.i8", "int8", 1, p.dims, design);
  write_file(dir / "dirichlet.u8", dirichlet);
  write_file(dir / "forces.f32", forces);
  write_file(dir / "design.i8", design);

  if (ground_truth) {
    if (ground_truth->channels() != 1 || ground_truth->dims() != p.dims) {
      throw DimensionError("ground truth density must be 1x" + to_string(p.dims));
    }
    const auto density = encode_f32(*ground_truth);
    meta["tensors"]["density"] = tensor_entry("density.f32", "float32", 1, p.dims, density);
    write_file(dir / "density.f32", density);
  } else {
    std::error_code ec;
    fs::remove(dir / "density.f32", ec);
  }
  write_file(dir / "meta.json", meta.dump(2) + "\n");
}

Sample read_sample(const fs::path& dir) {
  const json meta = read_meta(dir, kSampleFormat);
  return guard_json([&] {
    Sample s;
    s.problem = header_from(meta);
    const Dims& d = s.problem.dims;
    const json& tensors = meta.at("tensors");
    s.problem.dirichlet =
        decode_bytes<std::uint8_t>(load_tensor_bytes(dir, tensors.at("dirichlet"), "dirichlet", "uint8", 3, d), 3, d);
    s.problem.forces = decode_f32(load_tensor_bytes(dir, tensors.at("forces"), "forces", "float32", 3, d), 3, d);
    s.problem.design =
        decode_bytes<std::int8_t>(load_tensor_bytes(dir, tensors.at("design"), "design", "int8", 1, d), 1, d);
    if (tensors.contains("density")) {
      s.ground_truth = decode_f32(load_tensor_bytes(dir, tensors.at("density"), "density", "float32", 1, d), 1, d);
    }
    return s;
  });
}

void write_tensor(const fs::path& dir, const TaggedTensor& t) {
  if (static_cast<int>(t.channel_tags.size()) != t.values.channels()) {
    throw DimensionError("channel tag count does not match tensor channels");
  }
  fs::create_directories(dir);
  const auto bytes = encode_f32(t.values);
  const Dims& d = t.values.dims();
  json meta{{"format", kTensorFormat},
            {"version", kFormatVersion},
            {"dims", {d.nx, d.ny, d.nz}},
            {"channel_tags", t.channel_tags},
            {"tensor", tensor_entry("tensor.f32", "float32", t.values.channels(), d, bytes)}};
  write_file(dir / "tensor.f32", bytes);
  write_file(dir / "meta.json", meta.dump(2) + "\n");
}

TaggedTensor read_tensor(const fs::path& dir) {
  const json meta = read_meta(dir, kTensorFormat);
  return guard_json([&] {
    TaggedTensor t;
    const Dims d = dims_from(meta.at("dims"));
    t.channel_tags = meta.at("channel_tags").get<std::vector<std::string>>();
    const int channels = static_cast<int>(t.channel_tags.size());
    if (channels == 0) throw FormatError(FormatErrorCode::malformed_meta, "tensor has no channels");
    t.values = decode_f32(load_tensor_bytes(dir, meta.at("tensor"), "tensor", "float32", channels, d), channels, d);
    return t;
  });
}

std::string sample_to_json(const Sample& s) {
  const Problem& p = s.problem;
  json j = header_json(p);
  j["format"] = kJsonFormat;
  j["version"] = kFormatVersion;
  auto flat = [](const auto& t) {
    using T = std::decay_t<decltype(t.values()[0])>;
    using Out = std::conditional_t<std::is_floating_point_v<T>, double, int>;
    std::vector<Out> v(t.size());
    for (std::size_t n = 0; n < t.size(); ++n) v[n] = static_cast<Out>(t.values()[static_cast<Eigen::Index>(n)]);
    return v;
  };
  j["dirichlet"] = flat(p.dirichlet);
  j["forces"] = flat(p.forces);
  j["design"] = flat(p.design);
  if (s.ground_truth) j["density"] = flat(*s.ground_truth);
  return j.dump(1) + "\n";
}

Sample sample_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(FormatErrorCode::malformed_meta, e.what());
  }
  if (!j.is_object() || j.value("format", std::string()) != kJsonFormat) {
    throw FormatError(FormatErrorCode::malformed_meta, "expected format '" + std::string(kJsonFormat) + "'");
  }
  if (j.value("version", -1) != kFormatVersion) {
    throw FormatError(FormatErrorCode::version_mismatch, "unsupported JSON sample version");
  }
  return guard_json([&] {
    Sample s;
    s.problem = header_from(j);
    const Dims& d = s.problem.dims;
    auto fill = [&](const char* name, auto& tensor, int channels) {
      using T = std::decay_t<decltype(tensor.values()[0])>;
      const auto& arr = j.at(name);
      if (!arr.is_array() || arr.size() != channels * d.count()) {
        throw FormatError(FormatErrorCode::truncated_tensor, std::string(name) + " has wrong length");
      }
      tensor = VoxelTensor<T>(channels, d);
      for (std::size_t n = 0; n < arr.size(); ++n) {
        if constexpr (std::is_floating_point_v<T>) {
          tensor.values()[static_cast<Eigen::Index>(n)] = arr[n].template get<double>();
        } else {
          const int v = arr[n].template get<int>();
          if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) {
            throw FormatError(FormatErrorCode::malformed_meta, std::string(name) + " value out of range");
          }
          tensor.values()[static_cast<Eigen::Index>(n)] = static_cast<T>(v);
        }
      }
    };
    fill("dirichlet", s.problem.dirichlet, 3);
    fill("forces", s.problem.forces, 3);
    fill("design", s.problem.design, 1);
    if (j.contains("density")) {
      DensityField rho;
      fill("density", rho, 1);
      s.ground_truth = std::move(rho);
    }
    return s;
  });
}

}  // namespace voxto
