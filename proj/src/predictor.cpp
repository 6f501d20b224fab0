#include "voxto/predictor.hpp"

#include <bit>
#include <chrono>
#include <csignal>
#include <cmath>
#include <fstream>
#include <iterator>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

#include <sys/wait.h>
#include <unistd.h>

namespace voxto {

namespace fs = std::filesystem;

DensityField baseline_rho_init(const Problem& p) { return build_rho_init(p); }

DensityField baseline_hull(const Problem& p) { return convex_hull_preprocess(p).values; }

DensityField baseline_random(const Problem& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(p.dims.count()) * 0x9e3779b97f4a7c15ULL));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  DensityField rho(1, p.dims);
  for (std::size_t v = 0; v < p.dims.count(); ++v) rho.at(0, v) = uniform(rng);
  return rho;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

std::string expand_command(const std::string& tmpl, const fs::path& io_dir) {
  std::string out;
  const std::string key = "{io_dir}";
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = tmpl.find(key, pos);
    if (hit == std::string::npos) break;
    out += tmpl.substr(pos, hit - pos) + shell_quote(io_dir.string());
    pos = hit + key.size();
  }
  return out + tmpl.substr(pos);
}

using Kind = ExternalPredictorError::Kind;

}  // namespace

DensityField run_external(const ExternalPredictorSpec& spec, const InputTensor& input) {
  if (spec.command.empty()) throw ExternalPredictorError(Kind::launch, "external predictor command is empty");
  if (!(spec.timeout_seconds > 0.0)) throw ExternalPredictorError(Kind::launch, "timeout must be positive");

  const fs::path io_dir = fs::absolute(spec.io_dir);
  fs::remove_all(io_dir / "input");
  fs::remove_all(io_dir / "output");
  fs::create_directories(io_dir / "output");
  write_tensor(io_dir / "input", input);

  const std::string command = expand_command(spec.command, io_dir);
  const std::string io_env = io_dir.string();
  const pid_t pid = fork();
  if (pid < 0) throw ExternalPredictorError(Kind::launch, "fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    setenv("VOXTO_IO_DIR", io_env.c_str(), 1);
    if (chdir(io_env.c_str()) != 0) _exit(127);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);

  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(spec.timeout_seconds);
  int status = 0;
  while (true) {
    const pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) throw ExternalPredictorError(Kind::launch, "waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      throw ExternalPredictorError(Kind::timeout, "external predictor exceeded " +
                                                      std::to_string(spec.timeout_seconds) + " s");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    throw ExternalPredictorError(Kind::nonzero_exit, "external predictor exited with status " + std::to_string(code));
  }

  const fs::path out_path = io_dir / "output" / "density.f32";
  std::ifstream in(out_path, std::ios::binary);
  if (!in) throw ExternalPredictorError(Kind::malformed_output, "missing " + out_path.string());
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const Dims& dims = input.values.dims();
  if (bytes.size() != 4 * dims.count()) {
    throw ExternalPredictorError(Kind::malformed_output, "density.f32 has " + std::to_string(bytes.size()) +
                                                             " bytes, expected " + std::to_string(4 * dims.count()));
  }
  DensityField rho(1, dims);
  for (std::size_t v = 0; v < dims.count(); ++v) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[4 * v + b]) << (8 * b);
    const double value = std::bit_cast<float>(bits);
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ExternalPredictorError(Kind::malformed_output, "density value outside [0, 1] at voxel " + std::to_string(v));
    }
    rho.at(0, v) = value;
  }
  return rho;
}

TensorPredictor external_predictor(ExternalPredictorSpec spec) {
  auto lock = std::make_shared<std::mutex>();
  return [spec = std::move(spec), lock](const InputTensor& input) {
    const std::lock_guard<std::mutex> guard(*lock);
    return run_external(spec, input);
  };
}

}  // namespace voxto
