#pragma once

#include "voxto/grid.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace voxto {

inline constexpr int kFormatVersion = 1;

enum class FormatErrorCode {
  missing_file,
  malformed_meta,
  version_mismatch,
  truncated_tensor,
  checksum_mismatch,
};

const char* to_string(FormatErrorCode code);

class FormatError : public std::runtime_error {
 public:
  FormatError(FormatErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  [[nodiscard]] FormatErrorCode code() const { return code_; }

 private:
  FormatErrorCode code_;
};

struct Sample {
  Problem problem;
  std::optional<DensityField> ground_truth;
};

/// Writes `dir/meta.json` plus one raw little-endian file per tensor.
/// Real-valued payloads are stored as float32, so they round-trip exactly
/// only when they are representable in single precision.
void write_sample(const std::filesystem::path& dir, const Problem& p,
                  const std::optional<DensityField>& ground_truth = std::nullopt);
Sample read_sample(const std::filesystem::path& dir);

/// A named-channel float tensor (network inputs, stress/displacement fields,
/// predicted densities) in the same directory layout.
struct TaggedTensor {
  RealTensor values;
  std::vector<std::string> channel_tags;
};

void write_tensor(const std::filesystem::path& dir, const TaggedTensor& t);
TaggedTensor read_tensor(const std::filesystem::path& dir);

/// Self-contained JSON form of a sample (dense arrays), used by `convert` and
/// for hand-written fixtures.
std::string sample_to_json(const Sample& s);
Sample sample_from_json(const std::string& text);

/// IEEE CRC-32 of a byte buffer, hex-encoded as stored in meta.json.
std::string crc32_hex(const std::vector<unsigned char>& bytes);

}  // namespace voxto
