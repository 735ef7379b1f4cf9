#include "helpfuse/detectors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "helpfuse/error.hpp"

namespace helpfuse {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Whole-word match on the lowercased transcript; words are maximal
// alphanumeric runs, so "whatever" does not match "what".
bool contains_keyword(const std::string& transcript,
                      const std::vector<std::string>& keywords) {
  const std::string text = lowercase(transcript);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      const std::string word = text.substr(i, j - i);
      for (const std::string& k : keywords) {
        if (word == k) return true;
      }
    }
    i = j;
  }
  return false;
}

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void validate(const DetectorConfig& config) {
  if (!(config.mutual_gaze_min_duration > 0.0))
    throw data_error("detector config: mutual_gaze_min_duration must be > 0");
  if (!(config.confirm_window > 0.0))
    throw data_error("detector config: confirm_window must be > 0");
  if (config.keywords.empty())
    throw data_error("detector config: keyword list must be non-empty");
  if (!(config.stall_score >= 0.0 && config.stall_score <= 1.0))
    throw data_error("detector config: stall_score must be in [0,1]");
}

std::vector<double> mutual_gaze_scores(const Session& session, const DetectorConfig& config) {
  const std::size_t n = session.events.size();
  std::vector<double> scores(n, 0.0);
  if (n == 0) return scores;
  const double session_end = session.events.back().t;
  for (std::size_t i = 0; i < n; ++i) {
    const auto* gaze = std::get_if<GazeEvent>(&session.events[i].payload);
    if (gaze == nullptr || gaze->direction != config.robot_tag) continue;
    // Dwell runs until the next gaze event; the final gaze closes at session end.
    double dwell_end = session_end;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (session.events[j].kind() == EventKind::gaze) {
        dwell_end = session.events[j].t;
        break;
      }
    }
    if (dwell_end - session.events[i].t >= config.mutual_gaze_min_duration)
      scores[i] = 1.0;
  }
  return scores;
}

std::vector<double> confirmatory_gaze_scores(const Session& session,
                                             const DetectorConfig& config) {
  const std::size_t n = session.events.size();
  std::vector<double> scores(n, 0.0);
  double last_task_t = -1.0;
  bool seen_task = false;
  for (std::size_t i = 0; i < n; ++i) {
    const AnnotationEvent& ev = session.events[i];
    if (ev.kind() == EventKind::task) {
      last_task_t = ev.t;
      seen_task = true;
      continue;
    }
    const auto* gaze = std::get_if<GazeEvent>(&ev.payload);
    if (gaze == nullptr || gaze->direction != config.robot_tag) continue;
    if (seen_task && ev.t - last_task_t <= config.confirm_window) scores[i] = 1.0;
  }
  return scores;
}

std::vector<double> lexical_scores(const Session& session, const DetectorConfig& config) {
  std::vector<double> scores(session.events.size(), 0.0);
  for (std::size_t i = 0; i < session.events.size(); ++i) {
    const auto* speech = std::get_if<UserSpeechEvent>(&session.events[i].payload);
    if (speech != nullptr && contains_keyword(speech->transcript, config.keywords))
      scores[i] = 1.0;
  }
  return scores;
}

std::vector<double> task_scores(const Session& session, const DetectorConfig& config) {
  const std::size_t n = session.events.size();
  std::vector<double> scores(n, 0.0);

  // Multiset of unsatisfied goals; a placement matching one of them is progress.
  std::multiset<std::pair<std::string, std::string>> remaining;
  for (const GoalPlacement& g : session.task_spec) remaining.insert({g.cell, g.med});
  // Pills currently on the grid that satisfy a goal; removing one regresses.
  std::multiset<std::pair<std::string, std::string>> satisfied;

  for (std::size_t i = 0; i < n; ++i) {
    const auto* task = std::get_if<TaskEvent>(&session.events[i].payload);
    if (task == nullptr) continue;
    const std::pair<std::string, std::string> key{task->cell, task->med};
    const std::size_t before = remaining.size();
    if (task->action == TaskAction::placed) {
      auto it = remaining.find(key);
      if (it != remaining.end()) {
        remaining.erase(it);
        satisfied.insert(key);
      }
      // A placement not matching an open goal (wrong cell, duplicate, or a
      // cell absent from the spec) leaves the count unchanged.
    } else {
      auto it = satisfied.find(key);
      if (it != satisfied.end()) {
        satisfied.erase(it);
        remaining.insert(key);
      }
    }
    const std::size_t after = remaining.size();
    if (after < before)
      scores[i] = 0.0;
    else if (after > before)
      scores[i] = 1.0;
    else
      scores[i] = config.stall_score;
  }
  return scores;
}

DecisionStream run_all_detectors(const Session& session, const DetectorConfig& config) {
  validate(config);
  validate_session(session);
  const std::vector<double> mg = mutual_gaze_scores(session, config);
  const std::vector<double> cg = confirmatory_gaze_scores(session, config);
  const std::vector<double> lex = lexical_scores(session, config);
  const std::vector<double> task = task_scores(session, config);
  DecisionStream stream;
  stream.reserve(session.events.size());
  for (std::size_t i = 0; i < session.events.size(); ++i) {
    LabeledDecision d;
    d.vec = DecisionVector{mg[i], cg[i], lex[i], task[i]};
    d.help = session.labels[i];
    stream.push_back(d);
  }
  return stream;
}

SessionDecisions decisions_for_session(const Session& session, const DetectorConfig& config) {
  SessionDecisions out;
  out.session_id = session.session_id;
  out.stream = run_all_detectors(session, config);
  out.t_seconds.reserve(session.events.size());
  for (const AnnotationEvent& ev : session.events) out.t_seconds.push_back(round6(ev.t));
  return out;
}

namespace {

constexpr const char* kDecisionsHeader =
    "session_id,event_index,t_seconds,m_gaze,c_gaze,lexical,task,help";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_double_field(const std::string& s, const std::string& what, std::size_t row) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw data_error("decisions row " + std::to_string(row) + ": bad " + what + " '" + s + "'");
  return v;
}

long parse_int_field(const std::string& s, const std::string& what, std::size_t row) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw data_error("decisions row " + std::to_string(row) + ": bad " + what + " '" + s + "'");
  return v;
}

}  // namespace

std::vector<SessionDecisions> load_decisions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line)) throw data_error("decisions file '" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kDecisionsHeader)
    throw data_error("decisions file '" + path.string() + "': unexpected header '" + line + "'");

  std::vector<SessionDecisions> out;
  std::set<std::string> closed_sessions;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 8)
      throw data_error("decisions row " + std::to_string(row) + ": expected 8 fields, got " +
                       std::to_string(f.size()));
    const std::string& sid = f[0];
    if (out.empty() || out.back().session_id != sid) {
      if (closed_sessions.count(sid) != 0)
        throw data_error("decisions row " + std::to_string(row) + ": session '" + sid +
                         "' is not contiguous");
      if (!out.empty()) closed_sessions.insert(out.back().session_id);
      out.push_back(SessionDecisions{sid, {}, {}});
    }
    SessionDecisions& sd = out.back();
    const long index = parse_int_field(f[1], "event_index", row);
    if (index != static_cast<long>(sd.stream.size()))
      throw data_error("decisions row " + std::to_string(row) + ": event_index " +
                       std::to_string(index) + " is not contiguous (expected " +
                       std::to_string(sd.stream.size()) + ")");
    const double t = parse_double_field(f[2], "t_seconds", row);
    LabeledDecision d;
    d.vec.m_gaze = parse_double_field(f[3], "m_gaze", row);
    d.vec.c_gaze = parse_double_field(f[4], "c_gaze", row);
    d.vec.lexical = parse_double_field(f[5], "lexical", row);
    d.vec.task = parse_double_field(f[6], "task", row);
    for (std::size_t c = 0; c < 4; ++c) {
      const double v = d.vec.component(c);
      if (!(v >= 0.0 && v <= 1.0))
        throw data_error("decisions row " + std::to_string(row) + ": " +
                         kDetectorNames[c] + " value " + f[3 + c] + " outside [0,1]");
    }
    const long help = parse_int_field(f[7], "help", row);
    if (help != 0 && help != 1)
      throw data_error("decisions row " + std::to_string(row) + ": help must be 0 or 1");
    d.help = static_cast<std::uint8_t>(help);
    sd.t_seconds.push_back(t);
    sd.stream.push_back(d);
  }
  return out;
}

void save_decisions(const std::vector<SessionDecisions>& decisions,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open '" + path.string() + "' for writing");
  out << kDecisionsHeader << "\n";
  for (const SessionDecisions& sd : decisions) {
    if (sd.t_seconds.size() != sd.stream.size())
      throw data_error("session '" + sd.session_id + "': timestamp/stream length mismatch");
    for (std::size_t i = 0; i < sd.stream.size(); ++i) {
      const LabeledDecision& d = sd.stream[i];
      out << sd.session_id << ',' << i << ',' << format6(sd.t_seconds[i]) << ','
          << format6(d.vec.m_gaze) << ',' << format6(d.vec.c_gaze) << ','
          << format6(d.vec.lexical) << ',' << format6(d.vec.task) << ','
          << static_cast<int>(d.help) << "\n";
    }
  }
  if (!out.good()) throw data_error("write failed for '" + path.string() + "'");
}

}  // namespace helpfuse
