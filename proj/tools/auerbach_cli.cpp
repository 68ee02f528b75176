// Command-line front end: body ingestion, basis / simplex searches, bound
// tables, verification of supplied frames, and report persistence.
//
// Artifacts land in --out: run.json (deterministic for fixed config+seed),
// classes.csv, report.txt, and manifest.txt (which carries the wall time and
// is therefore the one non-reproducible file).

#include "auerbach/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace auerbach;

namespace {

struct Formats {
  bool json = true;
  bool csv = true;
  bool text = true;
};

Formats parse_formats(const std::string& arg) {
  Formats f{false, false, false};
  std::stringstream stream(arg);
  std::string part;
  while (std::getline(stream, part, ',')) {
    if (part == "json") {
      f.json = true;
    } else if (part == "csv") {
      f.csv = true;
    } else if (part == "text") {
      f.text = true;
    } else if (!part.empty()) {
      throw std::invalid_argument("unknown format '" + part +
                                  "' (expected json, csv, text)");
    }
  }
  if (!f.json && !f.csv && !f.text) {
    throw std::invalid_argument("--format selected no outputs");
  }
  return f;
}

std::pair<int, int> parse_range(const std::string& arg) {
  const auto dots = arg.find("..");
  try {
    if (dots == std::string::npos) {
      const int n = std::stoi(arg);
      return {n, n};
    }
    return {std::stoi(arg.substr(0, dots)), std::stoi(arg.substr(dots + 2))};
  } catch (const std::exception&) {
    throw std::invalid_argument("bad range '" + arg + "' (expected N or A..B)");
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot write " + path.string());
  out << content;
}

struct RunContext {
  fs::path out_dir;
  Formats formats;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::vector<std::string> artifacts;

  void emit(const std::string& name, const std::string& content) {
    write_file(out_dir / name, content);
    artifacts.push_back(name);
  }

  void manifest(const std::string& command,
                const std::vector<std::pair<std::string, std::string>>& fields) {
    const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    std::ostringstream out;
    out << kToolName << " " << kToolVersion << "\n";
    out << "command: " << command << "\n";
    for (const auto& [key, value] : fields) out << key << ": " << value << "\n";
    out << "wall_time_ms: " << wall_ms << "\n";
    out << "artifacts:";
    for (const auto& a : artifacts) out << " " << a;
    out << "\n";
    write_file(out_dir / "manifest.txt", out.str());
  }
};

RunContext make_context(const std::string& out_dir, const std::string& formats) {
  RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.formats = parse_formats(formats);
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) throw std::invalid_argument("cannot create output dir " + out_dir);
  return ctx;
}

int run_bases(const std::string& body_path, const SearchConfig& config,
              const std::string& out_dir, const std::string& formats) {
  RunContext ctx = make_context(out_dir, formats);
  const BodyFile file = load_body_file(body_path);
  const BasisSearchReport report = find_basis_classes(file.body, config);
  const MorseCheckReport morse =
      morse_inequality_check(report.classes, file.body.dim());
  if (ctx.formats.json) {
    ctx.emit("run.json", basis_report_to_json(file.body, report, morse).dump(2) + "\n");
  }
  if (ctx.formats.csv) ctx.emit("classes.csv", basis_classes_csv(report));
  const std::string text = basis_report_text(file.body, report, morse);
  if (ctx.formats.text) ctx.emit("report.txt", text);
  std::cout << text;
  ctx.manifest("bases", {{"body", body_path},
                         {"seed", std::to_string(config.seed)},
                         {"starts", std::to_string(config.starts)},
                         {"classes", std::to_string(report.classes.size())},
                         {"diverged", std::to_string(report.diverged)}});
  return 0;
}

int run_simplices(const std::string& body_path, const SearchConfig& config,
                  const std::string& out_dir, const std::string& formats) {
  RunContext ctx = make_context(out_dir, formats);
  const BodyFile file = load_body_file(body_path);
  const SimplexSearchReport report = find_auerbach_simplices(file.body, config);
  if (ctx.formats.json) {
    ctx.emit("run.json", simplex_report_to_json(file.body, report).dump(2) + "\n");
  }
  if (ctx.formats.csv) ctx.emit("classes.csv", simplex_classes_csv(report));
  const std::string text = simplex_report_text(file.body, report);
  if (ctx.formats.text) ctx.emit("report.txt", text);
  std::cout << text;
  ctx.manifest("simplices", {{"body", body_path},
                             {"seed", std::to_string(config.seed)},
                             {"starts", std::to_string(config.starts)},
                             {"classes", std::to_string(report.classes.size())},
                             {"diverged", std::to_string(report.diverged)}});
  return 0;
}

int run_bounds(const std::string& range, const std::string& out_dir,
               const std::string& formats) {
  RunContext ctx = make_context(out_dir, formats);
  const auto [n_min, n_max] = parse_range(range);
  const std::vector<BoundsReport> rows = summary_table(n_min, n_max);
  if (ctx.formats.json) ctx.emit("bounds.json", bounds_to_json(rows).dump(2) + "\n");
  if (ctx.formats.csv) ctx.emit("bounds.csv", bounds_to_csv(rows));
  const std::string text = bounds_to_text(rows);
  if (ctx.formats.text) ctx.emit("bounds.txt", text);
  std::cout << text;
  ctx.manifest("bounds", {{"n", range}});
  return 0;
}

int run_verify(const std::string& body_path, double tol,
               const std::string& out_dir, const std::string& formats) {
  RunContext ctx = make_context(out_dir, formats);
  const BodyFile file = load_body_file(body_path);
  if (!file.frame.has_value()) {
    throw std::invalid_argument("verify needs a \"frame\" entry in the body file");
  }
  const AuerbachReport report = verify_auerbach(file.body, *file.frame, tol);
  Json j{{"tool", Json{{"name", kToolName}, {"version", kToolVersion}}},
         {"command", "verify"},
         {"tol", tol},
         {"body", body_to_json(file.body)},
         {"frame", frame_to_json(*file.frame)},
         {"auerbach", auerbach_report_to_json(report)}};
  if (ctx.formats.json) ctx.emit("verify.json", j.dump(2) + "\n");
  std::ostringstream text;
  text << "auerbach verification of " << file.body.describe() << "\n"
       << "residual: " << report.residual << "\n"
       << "passed (tol " << tol << "): " << (report.passed ? "yes" : "NO") << "\n";
  for (int i = 0; i < report.dual_norms.size(); ++i) {
    text << "  functional " << i << ": dual norm " << std::setprecision(12)
         << report.dual_norms[i] << "\n";
  }
  if (ctx.formats.text) ctx.emit("verify.txt", text.str());
  std::cout << text.str();
  ctx.manifest("verify", {{"body", body_path},
                          {"residual", std::to_string(report.residual)},
                          {"passed", report.passed ? "yes" : "no"}});
  return 0;
}

int run_hessian_report(const std::string& body_path, const std::string& out_dir,
                       const std::string& formats) {
  RunContext ctx = make_context(out_dir, formats);
  const BodyFile file = load_body_file(body_path);
  if (!file.frame.has_value()) {
    throw std::invalid_argument(
        "hessian-report needs a \"frame\" entry in the body file");
  }
  const double grad_norm = grad_f(file.body, *file.frame).norm();
  double defect = 0.0;
  const Matrix hess = hessian_f(file.body, *file.frame, &defect);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hess);
  const MorseData morse = morse_from_eigenvalues(solver.eigenvalues());
  Json eigs = Json::array();
  for (int i = 0; i < morse.eigenvalues.size(); ++i) eigs.push_back(morse.eigenvalues[i]);
  Json j{{"tool", Json{{"name", kToolName}, {"version", kToolVersion}}},
         {"command", "hessian-report"},
         {"body", body_to_json(file.body)},
         {"frame", frame_to_json(*file.frame)},
         {"grad_norm", grad_norm},
         {"hessian_eigenvalues", std::move(eigs)},
         {"index", morse.index},
         {"nullity", morse.nullity},
         {"degenerate", morse.degenerate},
         {"symmetry_defect", defect},
         {"hessian", matrix_to_json(hess)}};
  if (ctx.formats.json) ctx.emit("hessian.json", j.dump(2) + "\n");
  std::ostringstream text;
  text << "hessian spectrum at the supplied frame (" << file.body.describe()
       << ")\n"
       << "grad_norm: " << grad_norm << "\n"
       << "index: " << morse.index << ", nullity: " << morse.nullity
       << ", degenerate: " << (morse.degenerate ? "yes" : "no") << "\n"
       << "eigenvalues:";
  for (int i = 0; i < morse.eigenvalues.size(); ++i) {
    text << " " << std::setprecision(8) << morse.eigenvalues[i];
  }
  text << "\n";
  if (ctx.formats.text) ctx.emit("hessian.txt", text.str());
  std::cout << text.str();
  ctx.manifest("hessian-report", {{"body", body_path},
                                  {"index", std::to_string(morse.index)},
                                  {"nullity", std::to_string(morse.nullity)}});
  return 0;
}

void add_search_options(CLI::App* cmd, std::string& body_path,
                        SearchConfig& config, std::string& out_dir,
                        std::string& formats) {
  cmd->add_option("--body", body_path, "body definition file (JSON)")
      ->required();
  cmd->add_option("--starts", config.starts, "number of independent starts");
  cmd->add_option("--seed", config.seed, "base RNG seed (start k uses seed+k)");
  cmd->add_option("--crit-tol", config.crit_tol,
                  "gradient norm threshold for criticality");
  cmd->add_option("--dedup-tol", config.dedup_tol,
                  "max-norm distance merging canonical representatives");
  cmd->add_option("--max-iters", config.max_iters, "iteration cap per start");
  cmd->add_option("--det-floor", config.det_floor,
                  "minimum |det| accepted for random starts");
  cmd->add_option("--out", out_dir, "output directory");
  cmd->add_option("--format", formats, "subset of json,csv,text");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critical bases and inscribed simplices of smooth star bodies"};
  app.require_subcommand(1);

  std::string body_path;
  std::string out_dir = "out";
  std::string formats = "json,csv,text";
  std::string range = "2..8";
  double verify_tol = 1e-6;
  SearchConfig config;
  config.starts = 200;

  CLI::App* bases = app.add_subcommand("bases", "search for basis classes");
  add_search_options(bases, body_path, config, out_dir, formats);

  CLI::App* simplices =
      app.add_subcommand("simplices", "search for inscribed-simplex classes");
  add_search_options(simplices, body_path, config, out_dir, formats);

  CLI::App* bounds = app.add_subcommand("bounds", "print the lower-bound table");
  bounds->add_option("--n", range, "dimension or range, e.g. 3 or 2..8");
  bounds->add_option("--out", out_dir, "output directory");
  bounds->add_option("--format", formats, "subset of json,csv,text");

  CLI::App* verify =
      app.add_subcommand("verify", "verify a frame supplied in the body file");
  verify->add_option("--body", body_path, "body definition file with a frame")
      ->required();
  verify->add_option("--tol", verify_tol, "residual tolerance");
  verify->add_option("--out", out_dir, "output directory");
  verify->add_option("--format", formats, "subset of json,csv,text");

  CLI::App* hessian = app.add_subcommand(
      "hessian-report", "hessian spectrum at a frame supplied in the body file");
  hessian->add_option("--body", body_path, "body definition file with a frame")
      ->required();
  hessian->add_option("--out", out_dir, "output directory");
  hessian->add_option("--format", formats, "subset of json,csv,text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bases->parsed()) return run_bases(body_path, config, out_dir, formats);
    if (simplices->parsed()) {
      return run_simplices(body_path, config, out_dir, formats);
    }
    if (bounds->parsed()) return run_bounds(range, out_dir, formats);
    if (verify->parsed()) return run_verify(body_path, verify_tol, out_dir, formats);
    if (hessian->parsed()) return run_hessian_report(body_path, out_dir, formats);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
