#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace helpfuse {

enum class EventKind { gaze, user_speech, user_gesture, robot_speech, task };

const char* to_string(EventKind kind);

struct GazeEvent {
  // Free vocabulary ("robot", "grid", "away", ...); detectors match
  // configured tags rather than a closed enum.
  std::string direction;
  bool operator==(const GazeEvent&) const = default;
};

struct UserSpeechEvent {
  std::string transcript;
  bool operator==(const UserSpeechEvent&) const = default;
};

struct UserGestureEvent {
  bool moving = true;  // hands in motion
  bool operator==(const UserGestureEvent&) const = default;
};

struct RobotSpeechEvent {
  std::string utterance;
  bool operator==(const RobotSpeechEvent&) const = default;
};

enum class TaskAction { placed, removed };

struct TaskEvent {
  std::string cell;
  std::string med;
  TaskAction action = TaskAction::placed;
  bool operator==(const TaskEvent&) const = default;
};

using EventPayload =
    std::variant<GazeEvent, UserSpeechEvent, UserGestureEvent, RobotSpeechEvent, TaskEvent>;

struct AnnotationEvent {
  double t = 0.0;  // seconds from session start, stored at 6-decimal precision
  EventPayload payload;

  EventKind kind() const { return static_cast<EventKind>(payload.index()); }
  bool operator==(const AnnotationEvent&) const = default;
};

struct GoalPlacement {
  std::string cell;
  std::string med;
  bool operator==(const GoalPlacement&) const = default;
};

// One annotated interaction. labels[i] is the help label of events[i].
struct Session {
  std::string session_id;
  std::vector<GoalPlacement> task_spec;
  std::vector<AnnotationEvent> events;
  std::vector<std::uint8_t> labels;

  bool operator==(const Session&) const = default;
};

// Enforces: t >= 0, events sorted non-decreasing by t (out-of-order input is
// rejected, not re-sorted), one label per event, task_spec non-empty when any
// task events exist. Throws data_error.
void validate_session(const Session& session);

// path names a .json file (one session object or an array of them) or a
// directory of such files. Returned sessions are sorted by session_id;
// duplicate ids are rejected. Throws data_error naming file and field.
std::vector<Session> load_sessions(const std::filesystem::path& path);

// Writes one JSON array. Timestamps are rounded to 6 decimals so that
// save -> load -> save is byte-identical. Throws data_error.
void save_sessions(const std::vector<Session>& sessions, const std::filesystem::path& path);

inline double round6(double v) {
  return std::nearbyint(v * 1e6) / 1e6;
}

}  // namespace helpfuse
