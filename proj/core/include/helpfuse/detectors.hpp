#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "helpfuse/events.hpp"

namespace helpfuse {

// The four detector outputs for one event; the base feature vector.
struct DecisionVector {
  double m_gaze = 0.0;
  double c_gaze = 0.0;
  double lexical = 0.0;
  double task = 0.0;

  std::array<double, 4> as_array() const { return {m_gaze, c_gaze, lexical, task}; }
  double component(std::size_t i) const { return as_array()[i]; }
  bool operator==(const DecisionVector&) const = default;
};

inline constexpr std::array<const char*, 4> kDetectorNames = {"m_gaze", "c_gaze",
                                                              "lexical", "task"};

struct DetectorConfig {
  double mutual_gaze_min_duration = 1.0;  // seconds of dwell to count as mutual gaze
  double confirm_window = 2.0;            // seconds after a task event
  std::string robot_tag = "robot";        // gaze direction matched as "at robot"
  std::vector<std::string> keywords = {"help",     "what",  "which", "where",
                                       "how",      "confused", "right", "correct"};
  double stall_score = 0.5;
};

// Throws data_error on out-of-range values.
void validate(const DetectorConfig& config);

// Each detector returns exactly one score per event, each in [0, 1].
std::vector<double> mutual_gaze_scores(const Session& session, const DetectorConfig& config);
std::vector<double> confirmatory_gaze_scores(const Session& session,
                                             const DetectorConfig& config);
std::vector<double> lexical_scores(const Session& session, const DetectorConfig& config);
std::vector<double> task_scores(const Session& session, const DetectorConfig& config);

struct LabeledDecision {
  DecisionVector vec;
  std::uint8_t help = 0;
  bool operator==(const LabeledDecision&) const = default;
};

using DecisionStream = std::vector<LabeledDecision>;

DecisionStream run_all_detectors(const Session& session, const DetectorConfig& config);

// One session's decision stream together with the event timestamps carried
// through the CSV format.
struct SessionDecisions {
  std::string session_id;
  std::vector<double> t_seconds;
  DecisionStream stream;
  bool operator==(const SessionDecisions&) const = default;
};

SessionDecisions decisions_for_session(const Session& session, const DetectorConfig& config);

// CSV with header
//   session_id,event_index,t_seconds,m_gaze,c_gaze,lexical,task,help
// floats at 6 decimals, rows grouped by session with event_index ascending
// from 0. Loading rejects values outside [0,1] and non-contiguous indices,
// naming the offending row. Throws data_error.
std::vector<SessionDecisions> load_decisions(const std::filesystem::path& path);
void save_decisions(const std::vector<SessionDecisions>& decisions,
                    const std::filesystem::path& path);

}  // namespace helpfuse
