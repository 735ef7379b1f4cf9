#include "helpfuse/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "helpfuse/error.hpp"

namespace helpfuse {

namespace {

const std::array<Algorithm, 6> kAllAlgorithms = {
    Algorithm::svm_rbf,  Algorithm::logistic, Algorithm::tree,
    Algorithm::gaussian_nb, Algorithm::forest, Algorithm::random_baseline};

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void parallel_for(std::size_t n_jobs, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n_jobs <= 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_jobs) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const std::size_t pool_size = std::min<std::size_t>(static_cast<std::size_t>(threads), n_jobs);
  std::vector<std::thread> pool;
  pool.reserve(pool_size);
  for (std::size_t t = 0; t < pool_size; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ExperimentConfig default_experiment_config() {
  ExperimentConfig config;
  config.window_sizes.resize(50);
  std::iota(config.window_sizes.begin(), config.window_sizes.end(), 1);
  config.algorithms.assign(kAllAlgorithms.begin(), kAllAlgorithms.end());
  return config;
}

void validate(const ExperimentConfig& config) {
  if (config.window_sizes.empty()) throw data_error("experiment: no window sizes");
  std::set<int> seen;
  for (int w : config.window_sizes) {
    if (w < 1) throw data_error("experiment: window sizes must be >= 1");
    if (!seen.insert(w).second)
      throw data_error("experiment: duplicate window size " + std::to_string(w));
  }
  if (config.algorithms.empty()) throw data_error("experiment: no algorithms");
  if (config.iterations < 1) throw data_error("experiment: iterations must be >= 1");
  if (config.folds < 2) throw data_error("experiment: folds must be >= 2");
  if (config.threads < 1) throw data_error("experiment: threads must be >= 1");
  validate(config.learner);
}

std::vector<WindowedInstance> shuffle(std::vector<WindowedInstance> instances,
                                      std::uint64_t seed) {
  Rng rng(seed);
  rng.shuffle(instances);
  return instances;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  rng.shuffle(order);
  return order;
}

std::vector<std::pair<std::size_t, std::size_t>> kfold_bounds(std::size_t n, int k) {
  if (k < 1) throw std::invalid_argument("kfold: k must be >= 1");
  if (n < static_cast<std::size_t>(k))
    throw std::invalid_argument("kfold: need at least k instances");
  const std::size_t base = n / static_cast<std::size_t>(k);
  const std::size_t remainder = n % static_cast<std::size_t>(k);
  std::vector<std::pair<std::size_t, std::size_t>> bounds;
  bounds.reserve(static_cast<std::size_t>(k));
  std::size_t start = 0;
  for (int f = 0; f < k; ++f) {
    const std::size_t size = base + (static_cast<std::size_t>(f) < remainder ? 1 : 0);
    bounds.push_back({start, start + size});
    start += size;
  }
  return bounds;
}

std::optional<BalancedTrainSet> balance(const std::vector<std::size_t>& train_indices,
                                        const std::vector<std::uint8_t>& targets, Rng& rng) {
  BalancedTrainSet out;
  std::vector<std::size_t> negatives;
  for (std::size_t idx : train_indices) {
    if (targets[idx] != 0)
      out.positives.push_back(idx);
    else
      negatives.push_back(idx);
  }
  if (out.positives.empty() || negatives.empty()) return std::nullopt;

  const std::size_t n = out.positives.size();
  if (negatives.size() >= n) {
    // Partial Fisher-Yates: the first n entries are a uniform sample
    // without replacement.
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.next_below(negatives.size() - i));
      std::swap(negatives[i], negatives[j]);
    }
    out.negatives.assign(negatives.begin(), negatives.begin() + static_cast<std::ptrdiff_t>(n));
  } else {
    out.with_replacement = true;
    out.negatives.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      out.negatives.push_back(negatives[static_cast<std::size_t>(rng.next_below(negatives.size()))]);
  }
  return out;
}

std::uint64_t cell_seed(std::uint64_t master_seed, int window_size, Algorithm algorithm,
                        int iteration) {
  return mix_seed({master_seed, static_cast<std::uint64_t>(window_size),
                   static_cast<std::uint64_t>(static_cast<int>(algorithm)),
                   static_cast<std::uint64_t>(iteration)});
}

namespace {

TrainSet gather_train_set(const std::vector<WindowedInstance>& corpus,
                          const BalancedTrainSet& balanced) {
  TrainSet train;
  train.n_features = corpus.empty() ? 0 : corpus[0].features.size();
  train.features.reserve((balanced.positives.size() + balanced.negatives.size()) *
                         train.n_features);
  for (std::size_t idx : balanced.positives) train.add_row(corpus[idx].features, 1);
  for (std::size_t idx : balanced.negatives) train.add_row(corpus[idx].features, 0);
  return train;
}

// Shared loop for run_iteration and threshold-curve score collection.
template <class PerInstance>
int run_folds(const std::vector<WindowedInstance>& corpus, Algorithm algorithm,
              std::uint64_t seed, const ExperimentConfig& config, PerInstance&& per_instance) {
  const std::size_t n = corpus.size();
  const std::vector<std::size_t> order = shuffled_indices(n, mix_seed({seed, 1}));
  const auto folds = kfold_bounds(n, config.folds);
  Rng balance_rng(mix_seed({seed, 2}));

  std::vector<std::uint8_t> targets(n);
  for (std::size_t i = 0; i < n; ++i) targets[i] = corpus[i].target;

  int skipped = 0;
  std::vector<std::size_t> train_indices;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    train_indices.clear();
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g == f) continue;
      for (std::size_t pos = folds[g].first; pos < folds[g].second; ++pos)
        train_indices.push_back(order[pos]);
    }
    const auto balanced = balance(train_indices, targets, balance_rng);
    if (!balanced) {
      ++skipped;
      continue;
    }
    const TrainSet train = gather_train_set(corpus, *balanced);
    const Model model =
        fit(algorithm, train, config.learner, mix_seed({seed, 3, static_cast<std::uint64_t>(f)}));
    for (std::size_t pos = folds[f].first; pos < folds[f].second; ++pos) {
      const WindowedInstance& inst = corpus[order[pos]];
      per_instance(model, inst);
    }
  }
  return skipped;
}

}  // namespace

ExperimentRecord run_iteration(const std::vector<WindowedInstance>& corpus, int window_size,
                               Algorithm algorithm, std::uint64_t seed,
                               const ExperimentConfig& config) {
  ExperimentRecord record;
  record.window_size = window_size;
  record.algorithm = algorithm;
  record.skipped_folds =
      run_folds(corpus, algorithm, seed, config, [&record](const Model& model,
                                                           const WindowedInstance& inst) {
        const bool pred = model.predict(inst.features);
        if (pred && inst.target)
          ++record.cm.tp;
        else if (pred && !inst.target)
          ++record.cm.fp;
        else if (!pred && inst.target)
          ++record.cm.fn;
        else
          ++record.cm.tn;
      });
  return record;
}

namespace {

// Scores over iteration 0's test folds for the threshold-swept curve mode.
void collect_scores(const std::vector<WindowedInstance>& corpus, int window_size,
                    Algorithm algorithm, const ExperimentConfig& config,
                    std::vector<double>& scores, std::vector<std::uint8_t>& targets) {
  const std::uint64_t seed = cell_seed(config.master_seed, window_size, algorithm, 0);
  run_folds(corpus, algorithm, seed, config,
            [&scores, &targets](const Model& model, const WindowedInstance& inst) {
              scores.push_back(model.score(inst.features));
              targets.push_back(inst.target);
            });
}

}  // namespace

SweepReport run_sweep(const std::vector<SessionDecisions>& streams,
                      const ExperimentConfig& config) {
  validate(config);
  std::size_t corpus_size = 0;
  for (const SessionDecisions& sd : streams) corpus_size += sd.stream.size();
  if (corpus_size < static_cast<std::size_t>(config.folds))
    throw data_error("sweep: corpus of " + std::to_string(corpus_size) +
                     " instances is smaller than the fold count " +
                     std::to_string(config.folds));

  SweepReport report;
  report.master_seed = config.master_seed;
  const std::size_t n_algorithms = config.algorithms.size();
  const std::size_t n_iterations = static_cast<std::size_t>(config.iterations);
  const std::size_t cells_per_window = n_algorithms * n_iterations;
  report.records.resize(config.window_sizes.size() * cells_per_window);

  for (std::size_t wi = 0; wi < config.window_sizes.size(); ++wi) {
    const int window = config.window_sizes[wi];
    const std::vector<WindowedInstance> corpus = build_corpus(streams, window);
    parallel_for(cells_per_window, config.threads, [&](std::size_t job) {
      const std::size_t ai = job / n_iterations;
      const int iteration = static_cast<int>(job % n_iterations);
      const Algorithm algorithm = config.algorithms[ai];
      ExperimentRecord record =
          run_iteration(corpus, window, algorithm,
                        cell_seed(config.master_seed, window, algorithm, iteration), config);
      record.iteration = iteration;
      report.records[wi * cells_per_window + job] = std::move(record);
    });

    if (config.threshold_curve_window == window) {
      for (Algorithm algorithm : config.algorithms) {
        std::vector<double> scores;
        std::vector<std::uint8_t> targets;
        collect_scores(corpus, window, algorithm, config, scores, targets);
        AlgorithmCurve curve;
        curve.algorithm = algorithm;
        curve.roc = threshold_sweep(scores, targets, CurveKind::roc);
        curve.pr = threshold_sweep(scores, targets, CurveKind::pr);
        report.threshold_curves.push_back(std::move(curve));
      }
    }
  }

  for (const ExperimentRecord& r : report.records) report.total_skipped_folds += r.skipped_folds;
  report.summaries = summarize_records(report.records);
  report.window_curves = window_curves_from_records(report.records);
  report.aucs = aucs_from_records(report.records);
  return report;
}

std::vector<AlgoSummary> summarize_records(const std::vector<ExperimentRecord>& records) {
  // (window, algorithm) -> accumulated iteration metrics.
  std::map<std::pair<int, int>, std::array<double, 4>> acc;
  for (const ExperimentRecord& r : records) {
    const Prf prf = precision_recall_f1(r.cm);
    auto& slot = acc[{r.window_size, static_cast<int>(r.algorithm)}];
    slot[0] += prf.f1;
    slot[1] += prf.precision;
    slot[2] += prf.recall;
    slot[3] += 1.0;
  }
  std::vector<AlgoSummary> out;
  out.reserve(acc.size());
  for (const auto& [key, slot] : acc) {
    AlgoSummary s;
    s.window_size = key.first;
    s.algorithm = static_cast<Algorithm>(key.second);
    s.f1 = slot[0] / slot[3];
    s.precision = slot[1] / slot[3];
    s.recall = slot[2] / slot[3];
    out.push_back(s);
  }
  return out;
}

std::map<Algorithm, std::map<int, ConfusionMatrix>> window_matrices(
    const std::vector<ExperimentRecord>& records) {
  std::map<Algorithm, std::map<int, ConfusionMatrix>> out;
  for (const ExperimentRecord& r : records) out[r.algorithm][r.window_size] += r.cm;
  return out;
}

std::vector<AlgorithmCurve> window_curves_from_records(
    const std::vector<ExperimentRecord>& records) {
  std::vector<AlgorithmCurve> out;
  for (const auto& [algorithm, per_window] : window_matrices(records)) {
    AlgorithmCurve curve;
    curve.algorithm = algorithm;
    curve.roc = curve_over_windows(per_window, CurveKind::roc).first;
    curve.pr = curve_over_windows(per_window, CurveKind::pr).first;
    out.push_back(std::move(curve));
  }
  return out;
}

std::vector<AucRow> aucs_from_records(const std::vector<ExperimentRecord>& records) {
  std::vector<AucRow> out;
  for (const auto& [algorithm, per_window] : window_matrices(records)) {
    AucRow row;
    row.algorithm = algorithm;
    row.roc_auc = curve_over_windows(per_window, CurveKind::roc).second;
    row.pr_auc = curve_over_windows(per_window, CurveKind::pr).second;
    out.push_back(row);
  }
  return out;
}

void write_records_csv(const std::vector<ExperimentRecord>& records,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open '" + path.string() + "' for writing");
  out << "window_size,algorithm,iteration,tp,fp,fn,tn\n";
  for (const ExperimentRecord& r : records) {
    out << r.window_size << ',' << to_string(r.algorithm) << ',' << r.iteration << ',' << r.cm.tp
        << ',' << r.cm.fp << ',' << r.cm.fn << ',' << r.cm.tn << "\n";
  }
  if (!out.good()) throw data_error("write failed for '" + path.string() + "'");
}

std::vector<ExperimentRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line))
    throw data_error("records file '" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "window_size,algorithm,iteration,tp,fp,fn,tn")
    throw data_error("records file '" + path.string() + "': unexpected header");

  std::vector<ExperimentRecord> records;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw data_error("records row " + std::to_string(row) + ": expected 7 fields");
    ExperimentRecord r;
    auto parse_u64 = [&row](const std::string& s, const char* what) {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size())
        throw data_error("records row " + std::to_string(row) + ": bad " + std::string(what));
      return v;
    };
    r.window_size = static_cast<int>(parse_u64(fields[0], "window_size"));
    const auto algorithm = parse_algorithm(fields[1]);
    if (!algorithm)
      throw data_error("records row " + std::to_string(row) + ": unknown algorithm '" +
                       fields[1] + "'");
    r.algorithm = *algorithm;
    r.iteration = static_cast<int>(parse_u64(fields[2], "iteration"));
    r.cm.tp = parse_u64(fields[3], "tp");
    r.cm.fp = parse_u64(fields[4], "fp");
    r.cm.fn = parse_u64(fields[5], "fn");
    r.cm.tn = parse_u64(fields[6], "tn");
    records.push_back(r);
  }
  return records;
}

void write_summary_csv(const std::vector<AlgoSummary>& summaries,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open '" + path.string() + "' for writing");
  out << "window_size,algorithm,f1,precision,recall\n";
  for (const AlgoSummary& s : summaries) {
    out << s.window_size << ',' << to_string(s.algorithm) << ',' << format6(s.f1) << ','
        << format6(s.precision) << ',' << format6(s.recall) << "\n";
  }
  if (!out.good()) throw data_error("write failed for '" + path.string() + "'");
}

void write_curves_csv(const std::vector<AlgorithmCurve>& window_curves,
                      const std::vector<AlgorithmCurve>& threshold_curves,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open '" + path.string() + "' for writing");
  out << "kind,algorithm,tag,x,y\n";
  auto emit = [&out](const char* kind, Algorithm algorithm, const std::vector<CurvePoint>& points,
                     bool integer_tag) {
    for (const CurvePoint& p : points) {
      out << kind << ',' << to_string(algorithm) << ',';
      if (integer_tag)
        out << static_cast<long long>(p.tag);
      else
        out << format6(p.tag);
      out << ',' << format6(p.x) << ',' << format6(p.y) << "\n";
    }
  };
  for (const AlgorithmCurve& c : window_curves) {
    emit("roc_window", c.algorithm, c.roc, true);
    emit("pr_window", c.algorithm, c.pr, true);
  }
  for (const AlgorithmCurve& c : threshold_curves) {
    emit("roc_threshold", c.algorithm, c.roc, false);
    emit("pr_threshold", c.algorithm, c.pr, false);
  }
  if (!out.good()) throw data_error("write failed for '" + path.string() + "'");
}

void write_auc_csv(const std::vector<AucRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open '" + path.string() + "' for writing");
  out << "algorithm,roc_auc,pr_auc\n";
  for (const AucRow& r : rows) {
    out << to_string(r.algorithm) << ',' << format6(r.roc_auc) << ',' << format6(r.pr_auc)
        << "\n";
  }
  if (!out.good()) throw data_error("write failed for '" + path.string() + "'");
}

}  // namespace helpfuse
