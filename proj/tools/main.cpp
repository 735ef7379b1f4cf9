#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "helpfuse/detectors.hpp"
#include "helpfuse/error.hpp"
#include "helpfuse/harness.hpp"
#include "helpfuse/svg_chart.hpp"
#include "helpfuse/synthgen.hpp"
#include "helpfuse/version.hpp"
#include "helpfuse/windowing.hpp"
#include "json.hpp"

namespace hf = helpfuse;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string fnv1a64_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hf::data_error("cannot open '" + path.string() + "' for digest");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[1 << 16];
  while (in) {
    in.read(buffer, sizeof(buffer));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  char out[32];
  std::snprintf(out, sizeof(out), "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
  return out;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// The manifest records everything needed to reproduce a run byte-for-byte;
// the created_utc stamp is informational and is the one field that differs
// between reruns.
void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    std::uint64_t master_seed, const ordered_json& config,
                    const std::vector<std::filesystem::path>& inputs,
                    const ordered_json& extra = ordered_json::object()) {
  ordered_json j;
  j["tool"] = "helpfuse";
  j["version"] = hf::kVersion;
  j["command"] = command;
  j["created_utc"] = utc_now();
  j["master_seed"] = master_seed;
  j["seed_scheme"] = "splitmix64(master_seed, window, algorithm, iteration) v1";
  j["config"] = config;
  ordered_json digests = ordered_json::object();
  for (const auto& p : inputs) digests[p.string()] = fnv1a64_hex(p);
  j["inputs"] = std::move(digests);
  for (const auto& [key, value] : extra.items()) j[key] = value;
  std::ofstream out(out_dir / "run_manifest.json");
  if (!out) throw hf::data_error("cannot write manifest in '" + out_dir.string() + "'");
  out << j.dump(1) << "\n";
}

void ensure_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw hf::data_error("cannot create output directory '" + dir.string() + "'");
}

std::vector<int> parse_windows(const std::string& text) {
  std::vector<int> windows;
  std::set<int> seen;
  std::stringstream ss(text);
  std::string item;
  auto push = [&](int w) {
    if (w < 1) throw hf::data_error("window sizes must be >= 1");
    if (seen.insert(w).second) windows.push_back(w);
  };
  while (std::getline(ss, item, ',')) {
    const std::size_t dots = item.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(item.substr(0, dots));
      std::size_t step_pos = item.find(":", dots);
      int step = 1;
      std::string hi_part = item.substr(dots + 2);
      if (step_pos != std::string::npos) {
        hi_part = item.substr(dots + 2, step_pos - dots - 2);
        step = std::stoi(item.substr(step_pos + 1));
      }
      const int hi = std::stoi(hi_part);
      if (step < 1 || hi < lo) throw hf::data_error("bad window range '" + item + "'");
      for (int w = lo; w <= hi; w += step) push(w);
    } else if (!item.empty()) {
      push(std::stoi(item));
    }
  }
  if (windows.empty()) throw hf::data_error("no window sizes given");
  return windows;
}

std::vector<hf::Algorithm> parse_algorithms(const std::string& text) {
  if (text == "all") {
    return {hf::Algorithm::svm_rbf, hf::Algorithm::logistic,  hf::Algorithm::tree,
            hf::Algorithm::gaussian_nb, hf::Algorithm::forest, hf::Algorithm::random_baseline};
  }
  if (text == "paper") {
    return {hf::Algorithm::svm_rbf, hf::Algorithm::logistic, hf::Algorithm::tree,
            hf::Algorithm::gaussian_nb, hf::Algorithm::forest};
  }
  std::vector<hf::Algorithm> algorithms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto a = hf::parse_algorithm(item);
    if (!a) throw hf::data_error("unknown algorithm '" + item + "'");
    if (std::find(algorithms.begin(), algorithms.end(), *a) == algorithms.end())
      algorithms.push_back(*a);
  }
  if (algorithms.empty()) throw hf::data_error("no algorithms given");
  return algorithms;
}

struct GenerateOptions {
  std::string out_dir;
  int sessions = 16;
  int events = 125;
  double gap = 1.5;
  double prevalence = 0.45;
  double persistence = 20.0;
  std::uint64_t seed = 0;
  bool rich = false;
};

int cmd_generate(const GenerateOptions& opt) {
  hf::GeneratorConfig config;
  config.n_sessions = opt.sessions;
  config.events_per_session = opt.events;
  config.mean_gap_seconds = opt.gap;
  config.prevalence = opt.prevalence;
  config.persistence = opt.persistence;
  config.seed = opt.seed;

  ensure_out_dir(opt.out_dir);
  const std::filesystem::path out_dir(opt.out_dir);
  const std::filesystem::path sessions_path = out_dir / "sessions.json";
  const std::filesystem::path decisions_path = out_dir / "decisions.csv";

  const hf::EmissionParams emissions = hf::solve_emissions(config.targets, config.prevalence);
  std::printf("calibration (prevalence %.2f):\n", config.prevalence);
  std::printf("  %-8s %9s %9s %11s\n", "detector", "target_p", "target_r", "derived_q");
  for (std::size_t d = 0; d < 4; ++d) {
    std::printf("  %-8s %9.3f %9.3f %11.6f\n", hf::kDetectorNames[d],
                config.targets[d].precision, config.targets[d].recall,
                emissions.fire_quiet[d]);
  }

  if (opt.rich) {
    const hf::RichCalibration cal = hf::rich_calibration(config);
    std::printf("rich mode: task recall target capped at %.4f (task-event share)\n",
                cal.effective_targets[3].recall);
    const std::vector<hf::Session> sessions = hf::generate_rich_sessions(config);
    hf::save_sessions(sessions, sessions_path);
    std::vector<hf::SessionDecisions> decisions;
    decisions.reserve(sessions.size());
    const hf::DetectorConfig detector_config;
    for (const hf::Session& s : sessions)
      decisions.push_back(hf::decisions_for_session(s, detector_config));
    hf::save_decisions(decisions, decisions_path);
  } else {
    const hf::GeneratedData data = hf::generate(config);
    hf::save_sessions(data.sessions, sessions_path);
    hf::save_decisions(data.streams, decisions_path);
  }

  ordered_json cfg;
  cfg["sessions"] = opt.sessions;
  cfg["events_per_session"] = opt.events;
  cfg["mean_gap_seconds"] = opt.gap;
  cfg["prevalence"] = opt.prevalence;
  cfg["persistence"] = opt.persistence;
  cfg["rich"] = opt.rich;
  ordered_json extra;
  extra["outputs"] = {sessions_path.string(), decisions_path.string()};
  write_manifest(out_dir, "generate", opt.seed, cfg, {sessions_path, decisions_path}, extra);
  std::printf("wrote %s and %s\n", sessions_path.string().c_str(),
              decisions_path.string().c_str());
  return kExitOk;
}

struct DetectorFlags {
  double min_dwell = 1.0;
  double confirm_window = 2.0;
  std::string robot_tag = "robot";
  std::string keywords;  // comma list; empty keeps defaults
  double stall_score = 0.5;

  hf::DetectorConfig to_config() const {
    hf::DetectorConfig config;
    config.mutual_gaze_min_duration = min_dwell;
    config.confirm_window = confirm_window;
    config.robot_tag = robot_tag;
    config.stall_score = stall_score;
    if (!keywords.empty()) {
      config.keywords.clear();
      std::stringstream ss(keywords);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) config.keywords.push_back(item);
      }
    }
    hf::validate(config);
    return config;
  }

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--min-dwell", min_dwell, "Mutual-gaze dwell threshold in seconds");
    cmd->add_option("--confirm-window", confirm_window,
                    "Seconds after a task event counted as confirmatory");
    cmd->add_option("--robot-tag", robot_tag, "Gaze direction matched as 'at robot'");
    cmd->add_option("--keywords", keywords, "Comma-separated keyword list");
    cmd->add_option("--stall-score", stall_score, "Task score when progress stalls")
        ->check(CLI::Range(0.0, 1.0));
  }
};

struct DetectOptions {
  std::string sessions_path;
  std::string out_dir;
  DetectorFlags detector;
};

int cmd_detect(const DetectOptions& opt) {
  const hf::DetectorConfig config = opt.detector.to_config();
  const std::vector<hf::Session> sessions = hf::load_sessions(opt.sessions_path);
  ensure_out_dir(opt.out_dir);
  const std::filesystem::path out_dir(opt.out_dir);
  const std::filesystem::path decisions_path = out_dir / "decisions.csv";
  std::vector<hf::SessionDecisions> decisions;
  std::size_t rows = 0;
  decisions.reserve(sessions.size());
  for (const hf::Session& s : sessions) {
    decisions.push_back(hf::decisions_for_session(s, config));
    rows += decisions.back().stream.size();
  }
  hf::save_decisions(decisions, decisions_path);

  ordered_json cfg;
  cfg["sessions"] = opt.sessions_path;
  cfg["min_dwell"] = config.mutual_gaze_min_duration;
  cfg["confirm_window"] = config.confirm_window;
  cfg["robot_tag"] = config.robot_tag;
  cfg["keywords"] = config.keywords;
  cfg["stall_score"] = config.stall_score;
  write_manifest(out_dir, "detect", 0, cfg, {std::filesystem::path(opt.sessions_path)});
  std::printf("wrote %zu decision rows for %zu sessions to %s\n", rows, sessions.size(),
              decisions_path.string().c_str());
  return kExitOk;
}

struct SweepOptions {
  std::string decisions_path;
  std::string sessions_path;
  std::string out_dir;
  std::string windows = "1..50";
  std::string algorithms = "all";
  int iterations = 50;
  int folds = 10;
  std::uint64_t seed = 0;
  int threads = 1;
  bool quick = false;
  int threshold_curve_window = 0;
  int dump_windowed = 0;
  DetectorFlags detector;
  // learner knobs
  int forest_trees = 1600;
  int forest_depth = 20;
  int forest_max_features = 0;
  bool no_bootstrap = false;
  double svm_c = 1.0;
  double svm_gamma = 0.0;
  double svm_tol = 1e-3;
  int svm_max_passes = 200;
  double logistic_lr = 0.1;
  double logistic_l2 = 1e-4;
  int logistic_epochs = 500;
  int tree_depth = 20;
  int tree_min_split = 2;
  double nb_variance_floor = 1e-9;
};

int cmd_sweep(const SweepOptions& opt, const CLI::App* cmd) {
  if (opt.decisions_path.empty() == opt.sessions_path.empty())
    throw hf::data_error("exactly one of --decisions or --sessions is required");

  hf::ExperimentConfig config;
  config.window_sizes = parse_windows(opt.windows);
  config.algorithms = parse_algorithms(opt.algorithms);
  config.iterations = opt.iterations;
  config.folds = opt.folds;
  config.master_seed = opt.seed;
  config.threads = opt.threads;
  config.threshold_curve_window = opt.threshold_curve_window;
  config.learner.forest.n_estimators = opt.forest_trees;
  config.learner.forest.max_depth = opt.forest_depth;
  config.learner.forest.max_features = opt.forest_max_features;
  config.learner.forest.bootstrap = !opt.no_bootstrap;
  config.learner.svm.c = opt.svm_c;
  config.learner.svm.gamma = opt.svm_gamma;
  config.learner.svm.tolerance = opt.svm_tol;
  config.learner.svm.max_passes = opt.svm_max_passes;
  config.learner.logistic.learning_rate = opt.logistic_lr;
  config.learner.logistic.l2 = opt.logistic_l2;
  config.learner.logistic.max_epochs = opt.logistic_epochs;
  config.learner.tree.max_depth = opt.tree_depth;
  config.learner.tree.min_samples_split = opt.tree_min_split;
  config.learner.nb.variance_floor = opt.nb_variance_floor;
  config.learner.seed = opt.seed;

  if (opt.quick) {
    // Desk-scale preset; explicit flags win over the preset.
    if (cmd->count("--windows") == 0) config.window_sizes = parse_windows("1..19:2");
    if (cmd->count("--iters") == 0) config.iterations = 5;
    if (cmd->count("--forest-trees") == 0) config.learner.forest.n_estimators = 100;
  }

  std::vector<hf::SessionDecisions> streams;
  std::vector<std::filesystem::path> inputs;
  if (!opt.decisions_path.empty()) {
    streams = hf::load_decisions(opt.decisions_path);
    inputs.push_back(opt.decisions_path);
  } else {
    const hf::DetectorConfig detector_config = opt.detector.to_config();
    const std::vector<hf::Session> sessions = hf::load_sessions(opt.sessions_path);
    streams.reserve(sessions.size());
    for (const hf::Session& s : sessions)
      streams.push_back(hf::decisions_for_session(s, detector_config));
    inputs.push_back(opt.sessions_path);
  }

  const hf::SweepReport report = hf::run_sweep(streams, config);

  ensure_out_dir(opt.out_dir);
  const std::filesystem::path out_dir(opt.out_dir);
  hf::write_records_csv(report.records, out_dir / "records.csv");
  hf::write_summary_csv(report.summaries, out_dir / "summary.csv");
  hf::write_curves_csv(report.window_curves, report.threshold_curves, out_dir / "curves.csv");
  hf::write_auc_csv(report.aucs, out_dir / "auc.csv");
  if (opt.dump_windowed > 0) {
    hf::write_windowed_csv(hf::build_corpus(streams, opt.dump_windowed), opt.dump_windowed,
                           out_dir / ("windowed_w" + std::to_string(opt.dump_windowed) + ".csv"));
  }

  ordered_json cfg;
  {
    ordered_json windows = ordered_json::array();
    for (int w : config.window_sizes) windows.push_back(w);
    cfg["windows"] = std::move(windows);
    ordered_json algorithms = ordered_json::array();
    for (hf::Algorithm a : config.algorithms) algorithms.push_back(hf::to_string(a));
    cfg["algorithms"] = std::move(algorithms);
    cfg["iterations"] = config.iterations;
    cfg["folds"] = config.folds;
    cfg["threads"] = config.threads;
    cfg["quick"] = opt.quick;
    cfg["threshold_curve_window"] = config.threshold_curve_window;
    cfg["forest"] = {{"n_estimators", config.learner.forest.n_estimators},
                     {"max_depth", config.learner.forest.max_depth},
                     {"bootstrap", config.learner.forest.bootstrap},
                     {"max_features", config.learner.forest.max_features}};
    cfg["svm"] = {{"c", config.learner.svm.c},
                  {"gamma", config.learner.svm.gamma},
                  {"tolerance", config.learner.svm.tolerance},
                  {"max_passes", config.learner.svm.max_passes}};
    cfg["logistic"] = {{"learning_rate", config.learner.logistic.learning_rate},
                       {"l2", config.learner.logistic.l2},
                       {"max_epochs", config.learner.logistic.max_epochs},
                       {"tolerance", config.learner.logistic.tolerance}};
    cfg["tree"] = {{"max_depth", config.learner.tree.max_depth},
                   {"min_samples_split", config.learner.tree.min_samples_split}};
    cfg["nb"] = {{"variance_floor", config.learner.nb.variance_floor}};
  }
  ordered_json extra;
  extra["skipped_folds"] = report.total_skipped_folds;
  extra["records"] = report.records.size();
  write_manifest(out_dir, "sweep", config.master_seed, cfg, inputs, extra);
  std::printf("wrote %zu records (%d skipped folds) to %s\n", report.records.size(),
              report.total_skipped_folds, out_dir.string().c_str());
  return kExitOk;
}

struct ReportOptions {
  std::string records_path;
  std::string out_dir;
  std::string windows = "1,10,20,30,40,41,47,48,50";
};

std::string format3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

int cmd_report(const ReportOptions& opt) {
  const std::vector<hf::ExperimentRecord> records = hf::read_records_csv(opt.records_path);
  if (records.empty())
    throw hf::data_error("records file '" + opt.records_path + "' contains no records");

  const std::vector<hf::AlgoSummary> summaries = hf::summarize_records(records);

  std::set<int> available_windows;
  std::vector<hf::Algorithm> algorithms;
  for (const hf::AlgoSummary& s : summaries) {
    available_windows.insert(s.window_size);
    if (std::find(algorithms.begin(), algorithms.end(), s.algorithm) == algorithms.end())
      algorithms.push_back(s.algorithm);
  }
  std::sort(algorithms.begin(), algorithms.end());

  std::vector<int> columns;
  for (int w : parse_windows(opt.windows)) {
    if (available_windows.count(w) != 0) columns.push_back(w);
  }
  if (columns.empty())
    columns.assign(available_windows.begin(), available_windows.end());
  std::sort(columns.begin(), columns.end());

  auto f1_of = [&summaries](hf::Algorithm a, int w) -> double {
    for (const hf::AlgoSummary& s : summaries) {
      if (s.algorithm == a && s.window_size == w) return s.f1;
    }
    return -1.0;
  };

  ensure_out_dir(opt.out_dir);
  const std::filesystem::path out_dir(opt.out_dir);

  // F1 grid, best displayed window bolded per row.
  {
    std::ofstream out(out_dir / "f1_grid.md");
    if (!out) throw hf::data_error("cannot write f1_grid.md");
    out << "# F1 by window size\n\n| Algorithm |";
    for (int w : columns) out << ' ' << w << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) out << "---|";
    out << "\n";
    for (hf::Algorithm a : algorithms) {
      double best = -1.0;
      for (int w : columns) best = std::max(best, f1_of(a, w));
      out << "| " << hf::display_name(a) << " |";
      for (int w : columns) {
        const double f1 = f1_of(a, w);
        if (f1 < 0.0) {
          out << " - |";
        } else if (f1 == best) {
          out << " **" << format3(f1) << "** |";
        } else {
          out << ' ' << format3(f1) << " |";
        }
      }
      out << "\n";
    }
    // Average row over the learner algorithms, mirroring the table layout.
    std::vector<hf::Algorithm> learners;
    for (hf::Algorithm a : algorithms) {
      if (a != hf::Algorithm::random_baseline) learners.push_back(a);
    }
    if (learners.size() > 1) {
      out << "| Average (all models) |";
      for (int w : columns) {
        double sum = 0.0;
        int count = 0;
        for (hf::Algorithm a : learners) {
          const double f1 = f1_of(a, w);
          if (f1 >= 0.0) {
            sum += f1;
            ++count;
          }
        }
        if (count == 0)
          out << " - |";
        else
          out << ' ' << format3(sum / count) << " |";
      }
      out << "\n";
    }
  }

  // AUC table (CSV and Markdown rendering).
  const std::vector<hf::AucRow> aucs = hf::aucs_from_records(records);
  hf::write_auc_csv(aucs, out_dir / "auc.csv");
  {
    std::ofstream out(out_dir / "auc.md");
    if (!out) throw hf::data_error("cannot write auc.md");
    out << "# Area under the curve (window-parameterized)\n\n"
        << "| Algorithm | ROC-AUC | PR-AUC |\n|---|---|---|\n";
    for (const hf::AucRow& r : aucs) {
      out << "| " << hf::display_name(r.algorithm) << " | " << format3(r.roc_auc) << " | "
          << format3(r.pr_auc) << " |\n";
    }
  }

  // F1 vs window chart.
  {
    hf::ChartSpec spec;
    spec.title = "F1 by window size";
    spec.x_label = "window size";
    spec.y_label = "F1";
    spec.x_min = static_cast<double>(*available_windows.begin());
    spec.x_max = static_cast<double>(*available_windows.rbegin());
    if (spec.x_max == spec.x_min) spec.x_max = spec.x_min + 1.0;
    std::map<int, std::pair<double, int>> average;
    for (hf::Algorithm a : algorithms) {
      hf::ChartSeries series;
      series.name = hf::display_name(a);
      for (int w : available_windows) {
        const double f1 = f1_of(a, w);
        if (f1 < 0.0) continue;
        series.points.push_back({static_cast<double>(w), f1});
        if (a != hf::Algorithm::random_baseline) {
          average[w].first += f1;
          average[w].second += 1;
        }
      }
      spec.series.push_back(std::move(series));
    }
    if (!average.empty() && algorithms.size() > 1) {
      hf::ChartSeries series;
      series.name = "Average (all models)";
      for (const auto& [w, acc] : average)
        series.points.push_back({static_cast<double>(w), acc.first / acc.second});
      spec.series.push_back(std::move(series));
    }
    hf::write_line_chart(spec, out_dir / "f1_vs_window.svg");
  }

  // Window-parameterized ROC / PR charts, anchored like the AUC computation.
  const std::vector<hf::AlgorithmCurve> curves = hf::window_curves_from_records(records);
  auto chart_points = [](std::vector<hf::CurvePoint> pts, hf::CurveKind kind) {
    std::sort(pts.begin(), pts.end(), [](const hf::CurvePoint& a, const hf::CurvePoint& b) {
      if (a.x != b.x) return a.x < b.x;
      return a.y < b.y;
    });
    std::vector<std::pair<double, double>> out;
    if (kind == hf::CurveKind::roc) {
      out.push_back({0.0, 0.0});
      for (const auto& p : pts) out.push_back({p.x, p.y});
      out.push_back({1.0, 1.0});
    } else {
      out.push_back({0.0, pts.front().y});
      for (const auto& p : pts) out.push_back({p.x, p.y});
      out.push_back({1.0, pts.back().y});
    }
    return out;
  };
  {
    hf::ChartSpec spec;
    spec.title = "ROC (one point per window size)";
    spec.x_label = "false positive rate";
    spec.y_label = "true positive rate";
    for (const hf::AlgorithmCurve& c : curves) {
      spec.series.push_back(
          {hf::display_name(c.algorithm), chart_points(c.roc, hf::CurveKind::roc)});
    }
    hf::write_line_chart(spec, out_dir / "roc_windows.svg");
  }
  {
    hf::ChartSpec spec;
    spec.title = "Precision-Recall (one point per window size)";
    spec.x_label = "recall";
    spec.y_label = "precision";
    for (const hf::AlgorithmCurve& c : curves) {
      spec.series.push_back(
          {hf::display_name(c.algorithm), chart_points(c.pr, hf::CurveKind::pr)});
    }
    hf::write_line_chart(spec, out_dir / "pr_windows.svg");
  }

  ordered_json cfg;
  cfg["records"] = opt.records_path;
  {
    ordered_json cols = ordered_json::array();
    for (int w : columns) cols.push_back(w);
    cfg["window_columns"] = std::move(cols);
  }
  write_manifest(out_dir, "report", 0, cfg, {std::filesystem::path(opt.records_path)});
  std::printf("wrote report files to %s\n", out_dir.string().c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Late-fusion help-detection pipeline: synthetic data generation, per-event "
               "detectors, sliding-window features, and the cross-validation sweep."};
  app.set_version_flag("--version", hf::kVersion);
  app.set_config("--config", "", "Read options from a key=value file");
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App* generate = app.add_subcommand("generate", "Generate calibrated synthetic data");
  generate->add_option("--out", gen.out_dir, "Output directory")->required();
  generate->add_option("--sessions", gen.sessions, "Number of sessions")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--events", gen.events, "Events per session")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--gap", gen.gap, "Mean seconds between events")
      ->check(CLI::PositiveNumber);
  generate->add_option("--prevalence", gen.prevalence, "Stationary help fraction")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--persistence", gen.persistence,
                       "Expected events between latent-state refreshes")
      ->check(CLI::Range(1.0, 1e9));
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_flag("--rich", gen.rich, "Emit full annotation payloads for the detectors");

  DetectOptions det;
  CLI::App* detect = app.add_subcommand("detect", "Run the four detectors over session files");
  detect->add_option("--sessions", det.sessions_path, "Session JSON file or directory")
      ->required();
  detect->add_option("--out", det.out_dir, "Output directory")->required();
  det.detector.add_flags(detect);

  SweepOptions sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run the (window x algorithm x iteration) experiment grid");
  sweep_cmd->add_option("--decisions", sweep.decisions_path, "Decision CSV input");
  sweep_cmd->add_option("--sessions", sweep.sessions_path,
                        "Session JSON input (detectors run first)");
  sweep_cmd->add_option("--out", sweep.out_dir, "Output directory")->required();
  sweep_cmd->add_option("--windows", sweep.windows,
                        "Window sizes: list and/or ranges, e.g. 1..50 or 1,5,9 or 1..19:2");
  sweep_cmd->add_option("--algos", sweep.algorithms,
                        "Comma list of algorithm tags, or 'all' / 'paper'");
  sweep_cmd->add_option("--iters", sweep.iterations, "Repeated iterations")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--folds", sweep.folds, "Cross-validation folds")
      ->check(CLI::Range(2, 1000000));
  sweep_cmd->add_option("--seed", sweep.seed, "Master seed");
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--quick", sweep.quick,
                      "Desk-scale preset: windows 1..19 step 2, 5 iterations, 100-tree forest");
  sweep_cmd->add_option("--threshold-curve-window", sweep.threshold_curve_window,
                        "Also emit threshold-swept curves for this window");
  sweep_cmd->add_option("--dump-windowed", sweep.dump_windowed,
                        "Dump the windowed corpus CSV for this window size");
  sweep_cmd->add_option("--forest-trees", sweep.forest_trees, "Forest size")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--forest-depth", sweep.forest_depth, "Forest tree depth")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--forest-max-features", sweep.forest_max_features,
                        "Features per split (0 = sqrt)");
  sweep_cmd->add_flag("--no-bootstrap", sweep.no_bootstrap, "Disable bootstrap sampling");
  sweep_cmd->add_option("--svm-c", sweep.svm_c, "SVM C")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--svm-gamma", sweep.svm_gamma, "SVM gamma (0 = scale)");
  sweep_cmd->add_option("--svm-tol", sweep.svm_tol, "SMO KKT tolerance");
  sweep_cmd->add_option("--svm-max-passes", sweep.svm_max_passes, "SMO pass cap");
  sweep_cmd->add_option("--logistic-lr", sweep.logistic_lr, "Logistic learning rate");
  sweep_cmd->add_option("--logistic-l2", sweep.logistic_l2, "Logistic L2 strength");
  sweep_cmd->add_option("--logistic-epochs", sweep.logistic_epochs, "Logistic epoch cap");
  sweep_cmd->add_option("--tree-depth", sweep.tree_depth, "Decision-tree depth cap");
  sweep_cmd->add_option("--tree-min-split", sweep.tree_min_split, "Min samples to split");
  sweep_cmd->add_option("--nb-variance-floor", sweep.nb_variance_floor, "NB variance floor");
  sweep.detector.add_flags(sweep_cmd);

  ReportOptions rep;
  CLI::App* report = app.add_subcommand("report", "Render tables and charts from records");
  report->add_option("--records", rep.records_path, "records.csv from a sweep")->required();
  report->add_option("--out", rep.out_dir, "Output directory")->required();
  report->add_option("--windows", rep.windows, "Window columns for the F1 grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (detect->parsed()) return cmd_detect(det);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, sweep_cmd);
    if (report->parsed()) return cmd_report(rep);
  } catch (const hf::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
