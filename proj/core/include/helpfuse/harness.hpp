#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "helpfuse/learners/model.hpp"
#include "helpfuse/metrics.hpp"
#include "helpfuse/windowing.hpp"

namespace helpfuse {

struct ExperimentConfig {
  std::vector<int> window_sizes;  // default 1..50, see default_experiment_config()
  std::vector<Algorithm> algorithms;
  int iterations = 50;
  int folds = 10;
  std::uint64_t master_seed = 0;
  LearnerParams learner;
  int threads = 1;
  // When set to a window size present in window_sizes, the sweep also emits
  // conventional threshold-swept ROC/PR curves for that window (scores pooled
  // over iteration 0's test folds).
  int threshold_curve_window = 0;
};

ExperimentConfig default_experiment_config();
void validate(const ExperimentConfig& config);

// All positive training instances plus an equal number of sampled negatives.
struct BalancedTrainSet {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  bool with_replacement = false;  // set when negatives were scarcer than positives
};

struct ExperimentRecord {
  int window_size = 0;
  Algorithm algorithm = Algorithm::tree;
  int iteration = 0;
  ConfusionMatrix cm;       // summed over the test folds
  int skipped_folds = 0;    // folds whose training split had a single class
};

// Uniform permutation determined by the seed; multiset unchanged.
std::vector<WindowedInstance> shuffle(std::vector<WindowedInstance> instances,
                                      std::uint64_t seed);
// Same permutation as shuffle() applied to 0..n-1.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

// k contiguous folds over positions 0..n-1; sizes differ by at most one,
// larger folds first. Throws std::invalid_argument when n < k.
std::vector<std::pair<std::size_t, std::size_t>> kfold_bounds(std::size_t n, int k);

// Keeps every positive, samples an equal number of negatives without
// replacement (with replacement only when negatives are scarcer). Returns
// nullopt when the split lacks a class entirely; callers record a
// skipped-fold signal instead of crashing.
std::optional<BalancedTrainSet> balance(const std::vector<std::size_t>& train_indices,
                                        const std::vector<std::uint8_t>& targets, Rng& rng);

// Shuffles, folds, balances each training split, fits, predicts on the
// unbalanced test fold and sums the fold confusion matrices.
ExperimentRecord run_iteration(const std::vector<WindowedInstance>& corpus, int window_size,
                               Algorithm algorithm, std::uint64_t cell_seed,
                               const ExperimentConfig& config);

// Per-cell seed derivation; independent of execution order and of which
// other cells are selected.
std::uint64_t cell_seed(std::uint64_t master_seed, int window_size, Algorithm algorithm,
                        int iteration);

struct AlgoSummary {
  int window_size = 0;
  Algorithm algorithm = Algorithm::tree;
  double f1 = 0.0;         // mean over iterations of the iteration F1
  double precision = 0.0;  // iteration means as well
  double recall = 0.0;
};

struct AucRow {
  Algorithm algorithm = Algorithm::tree;
  double roc_auc = 0.0;
  double pr_auc = 0.0;
};

struct AlgorithmCurve {
  Algorithm algorithm = Algorithm::tree;
  std::vector<CurvePoint> roc;
  std::vector<CurvePoint> pr;
};

struct SweepReport {
  std::vector<ExperimentRecord> records;
  std::vector<AlgoSummary> summaries;
  std::vector<AlgorithmCurve> window_curves;  // one point per window size
  std::vector<AucRow> aucs;
  std::vector<AlgorithmCurve> threshold_curves;  // empty unless requested
  std::uint64_t master_seed = 0;
  int total_skipped_folds = 0;
};

// One record per (window, algorithm, iteration) cell. Parallel and
// sequential execution produce identical reports for a given master seed.
// Throws data_error when the corpus is smaller than the fold count.
SweepReport run_sweep(const std::vector<SessionDecisions>& streams,
                      const ExperimentConfig& config);

// Derivations shared between run_sweep and the report command.
std::vector<AlgoSummary> summarize_records(const std::vector<ExperimentRecord>& records);
std::map<Algorithm, std::map<int, ConfusionMatrix>> window_matrices(
    const std::vector<ExperimentRecord>& records);
std::vector<AucRow> aucs_from_records(const std::vector<ExperimentRecord>& records);
std::vector<AlgorithmCurve> window_curves_from_records(
    const std::vector<ExperimentRecord>& records);

// CSV formats:
//   records: window_size,algorithm,iteration,tp,fp,fn,tn
//   summary: window_size,algorithm,f1,precision,recall
//   curves:  kind,algorithm,tag,x,y   (kind: roc_window|pr_window|roc_threshold|pr_threshold)
//   auc:     algorithm,roc_auc,pr_auc
void write_records_csv(const std::vector<ExperimentRecord>& records,
                       const std::filesystem::path& path);
std::vector<ExperimentRecord> read_records_csv(const std::filesystem::path& path);
void write_summary_csv(const std::vector<AlgoSummary>& summaries,
                       const std::filesystem::path& path);
void write_curves_csv(const std::vector<AlgorithmCurve>& window_curves,
                      const std::vector<AlgorithmCurve>& threshold_curves,
                      const std::filesystem::path& path);
void write_auc_csv(const std::vector<AucRow>& rows, const std::filesystem::path& path);

}  // namespace helpfuse
