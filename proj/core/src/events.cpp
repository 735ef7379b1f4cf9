#include "helpfuse/events.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "helpfuse/error.hpp"
#include "json.hpp"

namespace helpfuse {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* to_string(TaskAction action) {
  return action == TaskAction::placed ? "placed" : "removed";
}

std::string field_error(const std::string& context, const std::string& field,
                        const std::string& detail) {
  return context + ": field '" + field + "': " + detail;
}

const ordered_json& require(const ordered_json& obj, const char* field,
                            const std::string& context) {
  auto it = obj.find(field);
  if (it == obj.end())
    throw data_error(field_error(context, field, "missing"));
  return *it;
}

std::string require_string(const ordered_json& obj, const char* field,
                           const std::string& context) {
  const ordered_json& v = require(obj, field, context);
  if (!v.is_string())
    throw data_error(field_error(context, field, "expected a string"));
  return v.get<std::string>();
}

AnnotationEvent parse_event(const ordered_json& j, const std::string& context) {
  if (!j.is_object()) throw data_error(context + ": event is not an object");
  AnnotationEvent ev;
  const ordered_json& t = require(j, "t", context);
  if (!t.is_number())
    throw data_error(field_error(context, "t", "expected a number"));
  ev.t = t.get<double>();

  const std::string kind = require_string(j, "kind", context);
  if (kind == "gaze") {
    ev.payload = GazeEvent{require_string(j, "direction", context)};
  } else if (kind == "user_speech") {
    ev.payload = UserSpeechEvent{require_string(j, "transcript", context)};
  } else if (kind == "user_gesture") {
    const ordered_json& m = require(j, "moving", context);
    if (!m.is_boolean())
      throw data_error(field_error(context, "moving", "expected a boolean"));
    ev.payload = UserGestureEvent{m.get<bool>()};
  } else if (kind == "robot_speech") {
    ev.payload = RobotSpeechEvent{require_string(j, "utterance", context)};
  } else if (kind == "task") {
    TaskEvent task;
    task.cell = require_string(j, "cell", context);
    task.med = require_string(j, "med", context);
    const std::string action = require_string(j, "action", context);
    if (action == "placed")
      task.action = TaskAction::placed;
    else if (action == "removed")
      task.action = TaskAction::removed;
    else
      throw data_error(field_error(context, "action", "expected 'placed' or 'removed'"));
    ev.payload = task;
  } else {
    throw data_error(field_error(context, "kind", "unknown kind '" + kind + "'"));
  }
  return ev;
}

Session parse_session(const ordered_json& j, const std::string& context) {
  if (!j.is_object()) throw data_error(context + ": session is not an object");
  Session s;
  s.session_id = require_string(j, "session_id", context);
  const std::string ctx = context + ", session '" + s.session_id + "'";

  const ordered_json& spec = require(j, "task_spec", ctx);
  if (!spec.is_array())
    throw data_error(field_error(ctx, "task_spec", "expected an array"));
  for (const auto& g : spec) {
    GoalPlacement goal;
    goal.cell = require_string(g, "cell", ctx);
    goal.med = require_string(g, "med", ctx);
    s.task_spec.push_back(std::move(goal));
  }

  const ordered_json& events = require(j, "events", ctx);
  if (!events.is_array())
    throw data_error(field_error(ctx, "events", "expected an array"));
  for (const auto& e : events) s.events.push_back(parse_event(e, ctx));

  const ordered_json& labels = require(j, "labels", ctx);
  if (!labels.is_array())
    throw data_error(field_error(ctx, "labels", "expected an array"));
  for (const auto& l : labels) {
    if (!l.is_number_integer() || (l.get<int>() != 0 && l.get<int>() != 1))
      throw data_error(field_error(ctx, "labels", "expected 0 or 1"));
    s.labels.push_back(static_cast<std::uint8_t>(l.get<int>()));
  }
  return s;
}

ordered_json event_to_json(const AnnotationEvent& ev) {
  ordered_json j;
  j["t"] = round6(ev.t);
  j["kind"] = to_string(ev.kind());
  std::visit(
      [&j](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, GazeEvent>) {
          j["direction"] = payload.direction;
        } else if constexpr (std::is_same_v<T, UserSpeechEvent>) {
          j["transcript"] = payload.transcript;
        } else if constexpr (std::is_same_v<T, UserGestureEvent>) {
          j["moving"] = payload.moving;
        } else if constexpr (std::is_same_v<T, RobotSpeechEvent>) {
          j["utterance"] = payload.utterance;
        } else {
          j["cell"] = payload.cell;
          j["med"] = payload.med;
          j["action"] = to_string(payload.action);
        }
      },
      ev.payload);
  return j;
}

ordered_json session_to_json(const Session& s) {
  ordered_json j;
  j["session_id"] = s.session_id;
  ordered_json spec = ordered_json::array();
  for (const auto& g : s.task_spec) spec.push_back({{"cell", g.cell}, {"med", g.med}});
  j["task_spec"] = std::move(spec);
  ordered_json events = ordered_json::array();
  for (const auto& e : s.events) events.push_back(event_to_json(e));
  j["events"] = std::move(events);
  ordered_json labels = ordered_json::array();
  for (std::uint8_t l : s.labels) labels.push_back(static_cast<int>(l));
  j["labels"] = std::move(labels);
  return j;
}

void parse_file(const std::filesystem::path& file, std::vector<Session>& out) {
  std::ifstream in(file);
  if (!in) throw data_error("cannot open '" + file.string() + "' for reading");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw data_error("file '" + file.string() + "': " + e.what());
  }
  const std::string context = "file '" + file.string() + "'";
  if (doc.is_array()) {
    for (const auto& j : doc) out.push_back(parse_session(j, context));
  } else {
    out.push_back(parse_session(doc, context));
  }
}

}  // namespace

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::gaze: return "gaze";
    case EventKind::user_speech: return "user_speech";
    case EventKind::user_gesture: return "user_gesture";
    case EventKind::robot_speech: return "robot_speech";
    case EventKind::task: return "task";
  }
  return "unknown";
}

void validate_session(const Session& session) {
  const std::string ctx = "session '" + session.session_id + "'";
  if (session.labels.size() != session.events.size())
    throw data_error(ctx + ": label/event count mismatch (" +
                     std::to_string(session.labels.size()) + " labels, " +
                     std::to_string(session.events.size()) + " events)");
  bool has_task = false;
  double prev_t = 0.0;
  for (std::size_t i = 0; i < session.events.size(); ++i) {
    const AnnotationEvent& ev = session.events[i];
    if (!(ev.t >= 0.0))
      throw data_error(ctx + ": event " + std::to_string(i) + " has negative t");
    if (i > 0 && ev.t < prev_t)
      throw data_error(ctx + ": events out of order at index " + std::to_string(i));
    prev_t = ev.t;
    if (ev.kind() == EventKind::task) has_task = true;
  }
  for (std::uint8_t l : session.labels) {
    if (l > 1) throw data_error(ctx + ": label values must be 0 or 1");
  }
  if (has_task && session.task_spec.empty())
    throw data_error(ctx + ": task events present but task_spec is empty");
}

std::vector<Session> load_sessions(const std::filesystem::path& path) {
  std::vector<Session> sessions;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) parse_file(f, sessions);
  } else if (std::filesystem::exists(path)) {
    parse_file(path, sessions);
  } else {
    throw data_error("no such file or directory: '" + path.string() + "'");
  }

  for (const Session& s : sessions) validate_session(s);

  std::sort(sessions.begin(), sessions.end(),
            [](const Session& a, const Session& b) { return a.session_id < b.session_id; });
  for (std::size_t i = 1; i < sessions.size(); ++i) {
    if (sessions[i].session_id == sessions[i - 1].session_id)
      throw data_error("duplicate session_id '" + sessions[i].session_id + "'");
  }
  return sessions;
}

void save_sessions(const std::vector<Session>& sessions, const std::filesystem::path& path) {
  for (const Session& s : sessions) validate_session(s);
  ordered_json doc = ordered_json::array();
  for (const Session& s : sessions) doc.push_back(session_to_json(s));
  std::ofstream out(path);
  if (!out) throw data_error("cannot open '" + path.string() + "' for writing");
  out << doc.dump(1) << "\n";
  if (!out.good()) throw data_error("write failed for '" + path.string() + "'");
}

}  // namespace helpfuse
