#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "helpfuse/detectors.hpp"
#include "helpfuse/events.hpp"

namespace helpfuse {

struct DetectorTarget {
  double precision = 0.0;
  double recall = 0.0;
};

// Detector order everywhere: m_gaze, c_gaze, lexical, task.
using DetectorTargets = std::array<DetectorTarget, 4>;

inline constexpr DetectorTargets kDefaultTargets = {{
    {0.59, 0.12},  // mutual gaze
    {0.55, 0.10},  // confirmatory gaze
    {0.52, 0.04},  // lexical
    {0.63, 0.44},  // task
}};

struct GeneratorConfig {
  int n_sessions = 16;
  int events_per_session = 125;
  double mean_gap_seconds = 1.5;
  double prevalence = 0.45;   // stationary fraction of help states
  double persistence = 20.0;  // expected events between latent-state refreshes
  DetectorTargets targets = kDefaultTargets;
  std::uint64_t seed = 0;
};

void validate(const GeneratorConfig& config);

// Per-detector Bernoulli fire rates: fire_help[d] = target recall r_d, and
// fire_quiet[d] = q_d solved from the precision identity
//   p = r*pi / (r*pi + q*(1-pi)).
struct EmissionParams {
  std::array<double, 4> fire_help{};
  std::array<double, 4> fire_quiet{};
};

// Inverts the precision identity exactly; throws data_error naming the
// detector when the derived q falls outside (0,1).
EmissionParams solve_emissions(const DetectorTargets& targets, double prevalence);
double solve_false_fire_rate(const DetectorTarget& target, double prevalence);

struct GeneratedData {
  std::vector<Session> sessions;           // skeleton sessions carrying the labels
  std::vector<SessionDecisions> streams;   // calibrated decision streams
};

// Latent help state follows a lazy two-state chain: at each step the state is
// resampled from Bernoulli(prevalence) with probability 1/persistence and
// kept otherwise, so the stationary fraction is exactly the prevalence and
// persistence = 1 degenerates to an i.i.d. sequence. Timestamps have i.i.d.
// exponential gaps; decision components fire independently at the solved
// rates conditioned on the state.
GeneratedData generate(const GeneratorConfig& config);

// Event-kind mix and payload construction for exercising the rule-based
// detectors end to end. Rates the construction aims at (see
// rich_calibration); kinds are drawn at the annotation-type proportions.
std::vector<Session> generate_rich_sessions(const GeneratorConfig& config);

// The conditional payload probabilities behind generate_rich_sessions, plus
// the effective per-detector targets the construction can reach. The task
// detector fires only on task events, so its reachable recall is capped at
// the task-kind proportion; precision is recalibrated to hold at that cap.
struct RichCalibration {
  std::array<double, 5> kind_proportions{};  // gaze, user_speech, user_gesture, robot_speech, task
  double dwell_pass = 0.0;        // P(dwell >= min duration | gaze event)
  double recent_task = 0.0;       // P(task event within the confirm window)
  // Conditional probabilities, indexed [state] with 0 = no help, 1 = help.
  std::array<double, 2> robot_after_task{};
  std::array<double, 2> robot_otherwise{};
  std::array<double, 2> keyword_rate{};
  std::array<double, 2> task_fire{};
  DetectorTargets effective_targets{};  // what the construction aims at
};

RichCalibration rich_calibration(const GeneratorConfig& config);

}  // namespace helpfuse
