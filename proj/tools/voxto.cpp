// voxto command-line front end. Exit codes: 0 success, 1 domain error, 2 usage error.

#include "voxto/equivariance.hpp"
#include "voxto/eval.hpp"
#include "voxto/predictor.hpp"
#include "voxto/preproc.hpp"
#include "voxto/sample_io.hpp"
#include "voxto/simp.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace voxto;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  bool deterministic = false;
  int jobs = 1;
};

const char* kDataEnv = "VOXTO_DATA_DIR";

fs::path data_root() {
  const char* env = std::getenv(kDataEnv);
  return env ? fs::path(env) : fs::path();
}

/// Paths that do not exist as given are looked up under $VOXTO_DATA_DIR.
fs::path resolve(const fs::path& p) {
  if (fs::exists(p) || p.is_absolute()) return p;
  const fs::path root = data_root();
  if (!root.empty() && fs::exists(root / p)) return root / p;
  return p;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(FormatErrorCode::missing_file, path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Runs work(i) for i in [0, n) on up to `jobs` threads; results land by index
/// and the first failure (by index) is rethrown, so output never depends on scheduling.
template <typename T, typename Work>
std::vector<T> fan_out(std::size_t n, int jobs, Work&& work) {
  std::vector<T> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::vector<std::string> sample_ids(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw FormatError(FormatErrorCode::missing_file, dir.string());
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) ids.push_back(entry.path().filename().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

// ---- preprocessing options shared by preprocess and predict ----

struct PreprocOptions {
  std::vector<std::string> kinds{"trivial"};
  std::string pde_output = "von_mises";
  std::string normalization;
  double force_norm = 0.0;
  double stress_norm = 0.0;
  double tol = 1e-10;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--kinds", kinds, "preprocessing kinds in channel order: trivial, pde, convex_hull")
        ->delimiter(',')
        ->check(CLI::IsMember({"trivial", "pde", "convex_hull"}));
    cmd->add_option("--pde-output", pde_output, "von_mises | full_stress | displacements")
        ->check(CLI::IsMember({"von_mises", "full_stress", "displacements"}));
    cmd->add_option("--normalization", normalization, "normalization.json written by `preprocess`");
    cmd->add_option("--force-norm", force_norm, "force normalization constant (N/m^3)");
    cmd->add_option("--stress-norm", stress_norm, "PDE-output normalization constant");
    cmd->add_option("--pde-tol", tol, "relative residual for the preprocessing solve");
  }

  PreprocConfig config() const {
    PreprocConfig cfg;
    cfg.kinds.clear();
    for (const auto& k : kinds) cfg.kinds.push_back(parse_preproc_kind(k));
    cfg.pde_output = parse_pde_output(pde_output);
    cfg.solve = {tol, 0};
    if (!normalization.empty()) {
      const json j = json::parse(read_text(resolve(normalization)));
      if (j.contains("force_norm")) cfg.force_norm = j["force_norm"].get<double>();
      if (j.contains("stress_norm") && !j["stress_norm"].is_null()) cfg.stress_norm = j["stress_norm"].get<double>();
    }
    if (force_norm > 0.0) cfg.force_norm = force_norm;
    if (stress_norm > 0.0) cfg.stress_norm = stress_norm;
    return cfg;
  }

  /// Fits whatever constants are still missing on the given problems.
  static PreprocConfig complete(PreprocConfig cfg, std::span<const Problem> problems) {
    const bool need_force = !cfg.force_norm;
    const bool need_stress = cfg.uses(PreprocKind::pde) && !cfg.stress_norm;
    if (!need_force && !need_stress) return cfg;
    const PreprocConfig fitted = fit_normalization(problems, cfg);
    if (need_force) cfg.force_norm = fitted.force_norm;
    if (need_stress) cfg.stress_norm = fitted.stress_norm;
    return cfg;
  }
};

json normalization_json(const PreprocConfig& cfg) {
  json kinds = json::array();
  for (const auto k : cfg.kinds) kinds.push_back(to_string(k));
  return json{{"kinds", kinds},
              {"pde_output", to_string(cfg.pde_output)},
              {"force_norm", cfg.force_norm ? json(*cfg.force_norm) : json(nullptr)},
              {"stress_norm", cfg.stress_norm ? json(*cfg.stress_norm) : json(nullptr)}};
}

// ---- subcommands ----

int cmd_validate(const std::vector<std::string>& paths) {
  bool all_ok = true;
  for (const auto& raw : paths) {
    const Sample s = read_sample(resolve(raw));
    const ValidationReport r = validate_problem(s.problem);
    if (r.ok()) {
      std::cout << raw << ": ok\n";
      continue;
    }
    all_ok = false;
    for (const auto& v : r.violations) std::cout << raw << ": " << v.code << ": " << v.message << " (" << v.count << ")\n";
  }
  return all_ok ? 0 : 1;
}

struct SolveCmd {
  std::string sample, out, density = "init";
  double tol = 1e-8;
  int max_iter = 0;
};

int cmd_solve(const SolveCmd& o) {
  const Sample s = read_sample(resolve(o.sample));
  const Problem& p = s.problem;
  DensityField rho;
  if (o.density == "init") rho = build_rho_init(p);
  else if (o.density == "solid") rho = DensityField(1, p.dims, 1.0);
  else {
    if (!s.ground_truth) throw UsageError("--density gt needs a sample with a ground-truth density");
    rho = *s.ground_truth;
    rho.values() = rho.values().max(p.material.rho_min);
  }
  const SolveResult r = solve_displacements(p, rho, {o.tol, o.max_iter});
  const double c = compliance(r.u, assemble_loads(p));
  const RealTensor vm = von_mises(p, r.u);
  std::cout << "compliance=" << fmt(c) << " iterations=" << r.stats.iterations
            << " relative_residual=" << fmt(r.stats.relative_residual) << " max_von_mises=" << fmt(vm.values().maxCoeff())
            << "\n";
  if (!o.out.empty()) {
    write_tensor(fs::path(o.out) / "displacement", {r.u, {"disp_x", "disp_y", "disp_z"}});
    write_tensor(fs::path(o.out) / "von_mises", {vm, {"vm_stress"}});
  }
  return 0;
}

struct OptimizeCmd {
  std::string sample, out;
  double volume_fraction = 0.0;  // 0: take the sample's bound
  SimpParams params;
  std::string filter = "sensitivity";
};

int cmd_optimize(OptimizeCmd o) {
  const Sample s = read_sample(resolve(o.sample));
  o.params.volume_fraction_max = o.volume_fraction > 0.0 ? o.volume_fraction : s.problem.volume_fraction_max;
  o.params.filter = o.filter == "density" ? FilterKind::density : FilterKind::sensitivity;
  const SimpResult r = run_simp(s.problem, o.params);
  write_sample(o.out, s.problem, r.rho);
  write_text(fs::path(o.out) / "history.csv", history_csv(r.state));
  const double c = r.state.compliance_history.empty() ? 0.0 : r.state.compliance_history.back();
  std::cout << "iterations=" << r.state.iteration << " compliance=" << fmt(c) << " change=" << fmt(r.state.last_change)
            << "\n";
  return 0;
}

struct PreprocessCmd {
  std::vector<std::string> samples;
  std::string out;
  PreprocOptions pre;
};

int cmd_preprocess(const PreprocessCmd& o, const Globals& g) {
  std::vector<Problem> problems;
  for (const auto& raw : o.samples) problems.push_back(read_sample(resolve(raw)).problem);
  const PreprocConfig cfg = PreprocOptions::complete(o.pre.config(), problems);
  const auto tensors = fan_out<InputTensor>(problems.size(), g.deterministic ? 1 : g.jobs,
                                            [&](std::size_t i) { return preprocess(problems[i], cfg); });
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    write_tensor(fs::path(o.out) / fs::path(o.samples[i]).filename(), tensors[i]);
  }
  write_text(fs::path(o.out) / "normalization.json", normalization_json(cfg).dump(2) + "\n");
  std::cout << "wrote " << tensors.size() << " tensors with " << cfg.channel_count() << " channels\n";
  return 0;
}

struct PredictCmd {
  std::string sample, out, predictor = "rho-init", group = "none", command, io_dir;
  double timeout = 60.0;
  PreprocOptions pre;
};

int cmd_predict(const PredictCmd& o, const Globals& g) {
  const Sample s = read_sample(resolve(o.sample));
  const SymmetryGroup grp = group(parse_group_kind(o.group));
  ProblemPredictor model;
  if (o.predictor == "rho-init") {
    model = wrap(ProblemPredictor(baseline_rho_init), grp);
  } else if (o.predictor == "hull") {
    model = wrap(ProblemPredictor(baseline_hull), grp);
  } else if (o.predictor == "random") {
    const std::uint64_t seed = g.seed;
    model = wrap(ProblemPredictor([seed](const Problem& p) { return baseline_random(p, seed); }), grp);
  } else {
    if (o.command.empty()) throw UsageError("--predictor external needs --command");
    const std::vector<Problem> one{s.problem};
    const PreprocConfig cfg = PreprocOptions::complete(o.pre.config(), one);
    ExternalPredictorSpec spec{o.command, o.io_dir.empty() ? fs::path(o.out) / "io" : fs::path(o.io_dir), o.timeout};
    model = wrap(external_predictor(spec), grp, [cfg](const Problem& p) { return preprocess(p, cfg); });
  }
  const DensityField rho = model(s.problem);
  write_tensor(o.out, {rho, {"density"}});
  const Mask m = binarize(rho, s.problem.design);
  std::cout << "solid_voxels=" << m.values().cast<int>().sum() << " of " << s.problem.dims.count() << "\n";
  return 0;
}

struct EvalRow {
  std::string id;
  double iou = 0.0;
  FailReport report;
};

struct EvaluateOptions {
  std::string data;
  double threshold = 0.5;
  double tol_factor = kDefaultYieldTolerance;
};

std::vector<EvalRow> evaluate_dir(const fs::path& predictions, const EvaluateOptions& o, int jobs) {
  const fs::path data = resolve(o.data.empty() ? data_root() : fs::path(o.data));
  if (data.empty()) throw UsageError(std::string("no --data given and ") + kDataEnv + " is unset");
  const auto ids = sample_ids(data);
  if (ids.empty()) throw EvaluationError("no samples under " + data.string());
  return fan_out<EvalRow>(ids.size(), jobs, [&](std::size_t i) {
    const Sample s = read_sample(data / ids[i]);
    if (!s.ground_truth) throw EvaluationError(ids[i] + ": sample has no ground-truth density");
    const TaggedTensor pred = read_tensor(predictions / ids[i]);
    if (pred.values.channels() != 1 || pred.values.dims() != s.problem.dims) {
      throw DimensionError(ids[i] + ": prediction must be 1x" + to_string(s.problem.dims));
    }
    const Mask pm = binarize(pred.values, s.problem.design, o.threshold);
    const Mask gm = binarize(*s.ground_truth, s.problem.design, o.threshold);
    return EvalRow{ids[i], iou(pm, gm, s.problem.design), check_fail(pm, s.problem, o.tol_factor)};
  });
}

std::string evaluation_csv(const std::vector<EvalRow>& rows) {
  std::string out = "id,iou,failed,reason,max_vm\n";
  for (const auto& r : rows) {
    out += r.id + "," + fmt(r.iou) + "," + (r.report.failed() ? "1" : "0") + "," + r.report.reason() + "," +
           fmt(r.report.max_von_mises) + "\n";
  }
  return out;
}

struct Summary {
  double mean_iou = 0.0;
  double fail_pct = 0.0;
  std::size_t samples = 0;
};

Summary summarize(const std::vector<EvalRow>& rows) {
  Summary s;
  std::vector<FailReport> reports;
  for (const auto& r : rows) {
    s.mean_iou += r.iou;
    reports.push_back(r.report);
  }
  s.samples = rows.size();
  s.mean_iou /= static_cast<double>(rows.size());
  s.fail_pct = fail_percentage(reports);
  return s;
}

struct EvaluateCmd {
  std::string predictions, out;
  EvaluateOptions eval;
};

int cmd_evaluate(const EvaluateCmd& o, const Globals& g) {
  const auto rows = evaluate_dir(resolve(o.predictions), o.eval, g.deterministic ? 1 : g.jobs);
  const std::string csv = evaluation_csv(rows);
  if (o.out.empty()) std::cout << csv;
  else write_text(o.out, csv);
  const Summary s = summarize(rows);
  std::cerr << "samples=" << s.samples << " mean_iou=" << fmt(s.mean_iou) << " fail_pct=" << fmt(s.fail_pct) << "\n";
  return 0;
}

/// Reads the per-sample CSV written by `evaluate`.
std::vector<EvalRow> read_evaluation_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::getline(in, line);
  if (line != "id,iou,failed,reason,max_vm") throw FormatError(FormatErrorCode::malformed_meta, path.string() + ": bad header");
  std::vector<EvalRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 5) throw FormatError(FormatErrorCode::malformed_meta, path.string() + ": bad row '" + line + "'");
    EvalRow r;
    r.id = f[0];
    r.iou = std::stod(f[1]);
    r.report.disconnected = f[3] == "disconnected";
    r.report.stress_failed = f[3] == "stress";
    r.report.max_von_mises = std::stod(f[4]);
    rows.push_back(r);
  }
  if (rows.empty()) throw EvaluationError(path.string() + ": no rows");
  return rows;
}

struct SeCurveCmd {
  std::vector<std::string> points;
  std::string out;
  EvaluateOptions eval;
};

int cmd_se_curve(const SeCurveCmd& o, const Globals& g) {
  std::vector<std::pair<int, fs::path>> inputs;
  for (const auto& spec : o.points) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw UsageError("--point expects SIZE:PATH, got '" + spec + "'");
    int size = 0;
    try {
      size = std::stoi(spec.substr(0, colon));
    } catch (const std::exception&) {
      throw UsageError("--point size is not an integer: '" + spec + "'");
    }
    inputs.emplace_back(size, resolve(spec.substr(colon + 1)));
  }
  std::sort(inputs.begin(), inputs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  const int jobs = g.deterministic ? 1 : g.jobs;
  std::vector<SEPoint> points;
  std::vector<std::size_t> counts;
  for (const auto& [size, path] : inputs) {
    const auto rows = fs::is_directory(path) ? evaluate_dir(path, o.eval, jobs) : read_evaluation_csv(path);
    const Summary s = summarize(rows);
    points.push_back({size, s.mean_iou, s.fail_pct});
    counts.push_back(s.samples);
  }
  const SECurve curve(points);

  std::string csv = "train_size,iou,fail_pct,samples\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    csv += std::to_string(points[i].train_size) + "," + fmt(points[i].iou) + "," + fmt(points[i].fail_pct) + "," +
           std::to_string(counts[i]) + "\n";
  }
  try {
    csv += "auc150," + fmt(auc_150(curve, Criterion::iou)) + "," + fmt(auc_150(curve, Criterion::fail_pct)) + ",\n";
  } catch (const EvaluationError& e) {
    std::cerr << "warning: " << e.what() << "\n";
    csv += "auc150,nan,nan,\n";
  }
  csv += "final," + fmt(final_score(curve, Criterion::iou)) + "," + fmt(final_score(curve, Criterion::fail_pct)) + ",\n";
  if (o.out.empty()) std::cout << csv;
  else write_text(o.out, csv);
  return 0;
}

int cmd_convert(const std::string& in_raw, const std::string& out) {
  const fs::path in = resolve(in_raw);
  if (fs::is_directory(in)) {
    write_text(out, sample_to_json(read_sample(in)));
  } else {
    const Sample s = sample_from_json(read_text(in));
    write_sample(out, s.problem, s.ground_truth);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voxto: voxel topology optimization, preprocessing, symmetry wrapping and evaluation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file mirroring the flags; flags on the command line win");

  Globals g;
  app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
  app.add_flag("--deterministic", g.deterministic, "single-threaded fan-out, byte-identical outputs");
  app.add_option("--jobs", g.jobs, "worker threads for preprocess, evaluate and se-curve")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::function<int()> run;

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "check problem invariants of one or more samples");
  validate->add_option("samples", validate_paths, "sample directories")->required();
  validate->callback([&] { run = [&] { return cmd_validate(validate_paths); }; });

  SolveCmd solve_opts;
  auto* solve = app.add_subcommand("solve", "linear-elastic solve of a sample");
  solve->add_option("sample", solve_opts.sample, "sample directory")->required();
  solve->add_option("--density", solve_opts.density, "init | solid | gt")->check(CLI::IsMember({"init", "solid", "gt"}));
  solve->add_option("--tol", solve_opts.tol, "CG relative residual")->capture_default_str();
  solve->add_option("--max-iter", solve_opts.max_iter, "CG iteration cap (0: 10 x DOFs)");
  solve->add_option("--out", solve_opts.out, "directory for displacement and von_mises tensors");
  solve->callback([&] { run = [&] { return cmd_solve(solve_opts); }; });

  OptimizeCmd opt_opts;
  auto* optimize = app.add_subcommand("optimize", "SIMP compliance minimization");
  optimize->add_option("sample", opt_opts.sample, "sample directory")->required();
  optimize->add_option("--out", opt_opts.out, "output sample directory (density + history.csv)")->required();
  optimize->add_option("--volume-fraction", opt_opts.volume_fraction, "bound on the free-region volume fraction");
  optimize->add_option("--filter-radius", opt_opts.params.filter_radius)->capture_default_str();
  optimize->add_option("--move-limit", opt_opts.params.move_limit)->capture_default_str();
  optimize->add_option("--damping", opt_opts.params.oc_damping)->capture_default_str();
  optimize->add_option("--max-iters", opt_opts.params.max_iters)->capture_default_str();
  optimize->add_option("--change-tol", opt_opts.params.change_tol)->capture_default_str();
  optimize->add_option("--filter", opt_opts.filter, "sensitivity | density")
      ->check(CLI::IsMember({"sensitivity", "density"}));
  optimize->add_option("--tol", opt_opts.params.solve.tol, "CG relative residual")->capture_default_str();
  optimize->callback([&] { run = [&] { return cmd_optimize(opt_opts); }; });

  PreprocessCmd pre_opts;
  auto* prep = app.add_subcommand("preprocess", "build network input tensors");
  prep->add_option("samples", pre_opts.samples, "sample directories")->required();
  prep->add_option("--out", pre_opts.out, "output directory")->required();
  pre_opts.pre.add_to(prep);
  prep->callback([&] { run = [&] { return cmd_preprocess(pre_opts, g); }; });

  PredictCmd pred_opts;
  auto* predict = app.add_subcommand("predict", "run a predictor, optionally group-averaged");
  predict->add_option("sample", pred_opts.sample, "sample directory")->required();
  predict->add_option("--out", pred_opts.out, "output tensor directory")->required();
  predict->add_option("--predictor", pred_opts.predictor, "rho-init | hull | random | external")
      ->check(CLI::IsMember({"rho-init", "hull", "random", "external"}));
  predict->add_option("--group", pred_opts.group, "none | d4 | oh")->check(CLI::IsMember({"none", "d4", "oh"}));
  predict->add_option("--command", pred_opts.command, "external predictor command; {io_dir} is substituted");
  predict->add_option("--io-dir", pred_opts.io_dir, "exchange directory for the external predictor");
  predict->add_option("--timeout", pred_opts.timeout, "seconds per external call")->check(CLI::PositiveNumber);
  pred_opts.pre.add_to(predict);
  predict->callback([&] { run = [&] { return cmd_predict(pred_opts, g); }; });

  EvaluateCmd eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "IoU and fail check of predictions against ground truth");
  evaluate->add_option("predictions", eval_opts.predictions, "directory of <id>/ prediction tensors")->required();
  evaluate->add_option("--data", eval_opts.eval.data, std::string("sample directory (default $") + kDataEnv + ")");
  evaluate->add_option("--threshold", eval_opts.eval.threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  evaluate->add_option("--tol-factor", eval_opts.eval.tol_factor, "yield stress multiplier")->capture_default_str();
  evaluate->add_option("--out", eval_opts.out, "CSV path (default stdout)");
  evaluate->callback([&] { run = [&] { return cmd_evaluate(eval_opts, g); }; });

  SeCurveCmd se_opts;
  auto* se = app.add_subcommand("se-curve", "aggregate evaluations into a sample-efficiency curve");
  se->add_option("--point", se_opts.points, "SIZE:PATH, PATH an evaluate CSV or a predictions directory")->required();
  se->add_option("--data", se_opts.eval.data, std::string("sample directory (default $") + kDataEnv + ")");
  se->add_option("--threshold", se_opts.eval.threshold)->check(CLI::Range(0.0, 1.0));
  se->add_option("--tol-factor", se_opts.eval.tol_factor);
  se->add_option("--out", se_opts.out, "CSV path (default stdout)");
  se->callback([&] { run = [&] { return cmd_se_curve(se_opts, g); }; });

  std::string convert_in, convert_out;
  auto* convert = app.add_subcommand("convert", "sample directory <-> single JSON file");
  convert->add_option("input", convert_in, "sample directory or JSON file")->required();
  convert->add_option("output", convert_out, "JSON file or sample directory")->required();
  convert->callback([&] { run = [&] { return cmd_convert(convert_in, convert_out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
