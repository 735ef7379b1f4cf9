#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "helpfuse/detectors.hpp"
#include "helpfuse/error.hpp"
#include "helpfuse/rng.hpp"

using namespace helpfuse;

namespace {

Session gaze_session(std::initializer_list<std::pair<double, const char*>> gazes) {
  Session s;
  s.session_id = "g";
  for (const auto& [t, dir] : gazes) {
    s.events.push_back({t, GazeEvent{dir}});
    s.labels.push_back(0);
  }
  return s;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("helpfuse_det_" + name);
}

Session random_session(Rng& rng, int n_events) {
  Session s;
  s.session_id = "rand";
  s.task_spec = {{"a", "m"}, {"b", "m"}, {"c", "m"}};
  double t = 0.0;
  for (int i = 0; i < n_events; ++i) {
    t += rng.next_exponential(1.5);
    AnnotationEvent ev;
    ev.t = t;
    switch (rng.next_below(5)) {
      case 0: ev.payload = GazeEvent{rng.next_below(2) ? "robot" : "grid"}; break;
      case 1: ev.payload = UserSpeechEvent{rng.next_below(2) ? "help me" : "okay"}; break;
      case 2: ev.payload = UserGestureEvent{true}; break;
      case 3: ev.payload = RobotSpeechEvent{"keep going"}; break;
      default:
        ev.payload = TaskEvent{rng.next_below(2) ? "a" : "z", "m",
                               rng.next_below(4) == 0 ? TaskAction::removed : TaskAction::placed};
    }
    s.events.push_back(std::move(ev));
    s.labels.push_back(rng.next_below(2) != 0);
  }
  return s;
}

}  // namespace

TEST_CASE("mutual gaze fires on sustained robot gaze") {
  const DetectorConfig config;
  // Robot gaze with 2.0 s dwell, then grid.
  auto s = gaze_session({{0.0, "robot"}, {2.0, "grid"}});
  CHECK(mutual_gaze_scores(s, config) == std::vector<double>{1.0, 0.0});
  // Non-robot directions never fire.
  auto grid = gaze_session({{0.0, "grid"}, {2.0, "grid"}});
  CHECK(mutual_gaze_scores(grid, config) == std::vector<double>{0.0, 0.0});
  // Below the dwell threshold.
  auto brief = gaze_session({{0.0, "robot"}, {0.4, "grid"}});
  CHECK(mutual_gaze_scores(brief, config) == std::vector<double>{0.0, 0.0});
  // Non-gaze events in between do not close the dwell.
  Session mixed;
  mixed.session_id = "m";
  mixed.events = {{0.0, GazeEvent{"robot"}},
                  {0.5, UserSpeechEvent{"hmm"}},
                  {2.0, GazeEvent{"grid"}}};
  mixed.labels = {0, 0, 0};
  CHECK(mutual_gaze_scores(mixed, config) == std::vector<double>{1.0, 0.0, 0.0});
  // The final gaze closes at the session end (last event's t).
  Session tail;
  tail.session_id = "t";
  tail.events = {{0.0, GazeEvent{"robot"}}, {2.0, UserSpeechEvent{"done"}}};
  tail.labels = {0, 0};
  CHECK(mutual_gaze_scores(tail, config) == std::vector<double>{1.0, 0.0});
}

TEST_CASE("confirmatory gaze fires shortly after a task event") {
  const DetectorConfig config;
  Session s;
  s.session_id = "c";
  s.task_spec = {{"a", "m"}};
  s.events = {{5.0, TaskEvent{"a", "m", TaskAction::placed}}, {6.0, GazeEvent{"robot"}}};
  s.labels = {0, 0};
  CHECK(confirmatory_gaze_scores(s, config) == std::vector<double>{0.0, 1.0});

  Session late;
  late.session_id = "l";
  late.task_spec = {{"a", "m"}};
  late.events = {{5.0, TaskEvent{"a", "m", TaskAction::placed}}, {9.0, GazeEvent{"robot"}}};
  late.labels = {0, 0};
  CHECK(confirmatory_gaze_scores(late, config) == std::vector<double>{0.0, 0.0});

  auto no_task = gaze_session({{0.0, "robot"}, {1.0, "robot"}, {2.0, "robot"}});
  const auto scores = confirmatory_gaze_scores(no_task, config);
  for (double v : scores) CHECK(v == 0.0);
}

TEST_CASE("lexical matching is whole-word on lowercased transcripts") {
  const DetectorConfig config;
  Session s;
  s.session_id = "lex";
  s.events = {{0.0, UserSpeechEvent{"I need help here"}},
              {1.0, UserSpeechEvent{"okay done"}},
              {2.0, UserSpeechEvent{"whatever"}},
              {3.0, UserSpeechEvent{"WHAT goes here?"}},
              {4.0, GazeEvent{"robot"}}};
  s.labels = {0, 0, 0, 0, 0};
  CHECK(lexical_scores(s, config) == std::vector<double>{1.0, 0.0, 0.0, 1.0, 0.0});
}

TEST_CASE("task model scores progress, stalls and regressions") {
  const DetectorConfig config;
  Session s;
  s.session_id = "task";
  s.task_spec = {{"a1", "medA"}, {"b2", "medB"}};
  s.events = {
      {0.0, TaskEvent{"a1", "medA", TaskAction::placed}},   // progress: remaining 2 -> 1
      {1.0, TaskEvent{"zz", "medA", TaskAction::placed}},   // wrong cell: stall
      {2.0, TaskEvent{"a1", "medA", TaskAction::removed}},  // regression: remaining 1 -> 2
      {3.0, TaskEvent{"zz", "medA", TaskAction::removed}},  // removing a stray pill: stall
      {4.0, UserSpeechEvent{"okay"}},                       // non-task events never fire
  };
  s.labels = {0, 0, 0, 0, 0};
  CHECK(task_scores(s, config) == std::vector<double>{0.0, 0.5, 1.0, 0.5, 0.0});
}

TEST_CASE("run_all_detectors assembles the per-event stream") {
  const DetectorConfig config;
  Session empty;
  empty.session_id = "e";
  CHECK(run_all_detectors(empty, config).empty());

  Session s;
  s.session_id = "one";
  s.events = {{0.0, GazeEvent{"robot"}}, {2.0, UserSpeechEvent{"done"}}};
  s.labels = {1, 0};
  const DecisionStream stream = run_all_detectors(s, config);
  REQUIRE(stream.size() == 2);
  CHECK(stream[0].vec == DecisionVector{1.0, 0.0, 0.0, 0.0});
  CHECK(stream[0].help == 1);
  CHECK(stream[1].vec == DecisionVector{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("detectors are total, bounded and pure") {
  const DetectorConfig config;
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Session s = random_session(rng, 40);
    const DecisionStream a = run_all_detectors(s, config);
    const DecisionStream b = run_all_detectors(s, config);
    REQUIRE(a.size() == s.events.size());
    CHECK(a == b);
    for (const LabeledDecision& d : a) {
      for (double v : d.vec.as_array()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }
}

TEST_CASE("appending events only changes the tail and the last gaze dwell") {
  const DetectorConfig config;
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Session full = random_session(rng, 50);
    Session prefix = full;
    const std::size_t k = 30;
    prefix.events.resize(k);
    prefix.labels.resize(k);

    const DecisionStream full_stream = run_all_detectors(full, config);
    const DecisionStream prefix_stream = run_all_detectors(prefix, config);

    std::size_t last_gaze = k;  // sentinel
    for (std::size_t i = 0; i < k; ++i) {
      if (prefix.events[i].kind() == EventKind::gaze) last_gaze = i;
    }
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (i == last_gaze) continue;  // dwell of the final gaze may resolve differently
      CHECK(full_stream[i] == prefix_stream[i]);
    }
  }
}

TEST_CASE("decision CSV round-trips and validates") {
  const auto path = temp_path("roundtrip.csv");
  std::vector<SessionDecisions> data(2);
  data[0].session_id = "a";
  data[0].t_seconds = {0.5, 1.75, 2.25};
  data[0].stream = {{{0.0, 0.0, 0.0, 0.5}, 1},
                    {{1.0, 0.0, 0.0, 0.0}, 0},
                    {{0.0, 1.0, 1.0, 1.0}, 1}};
  data[1].session_id = "b";
  data[1].t_seconds = {0.25};
  data[1].stream = {{{0.0, 0.0, 0.0, 0.0}, 0}};
  save_decisions(data, path);

  const auto loaded = load_decisions(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded == data);

  // One session, three rows, in event order.
  CHECK(loaded[0].stream.size() == 3);
  CHECK(loaded[0].stream[1].vec.m_gaze == 1.0);
}

TEST_CASE("decision CSV rejects bad values naming the row") {
  const auto path = temp_path("bad.csv");
  {
    std::ofstream out(path);
    out << "session_id,event_index,t_seconds,m_gaze,c_gaze,lexical,task,help\n";
    out << "a,0,0.100000,0.000000,0.000000,1.200000,0.000000,0\n";
  }
  CHECK_THROWS_WITH_AS(load_decisions(path), doctest::Contains("row 2"), data_error);

  {
    std::ofstream out(path);
    out << "session_id,event_index,t_seconds,m_gaze,c_gaze,lexical,task,help\n";
    out << "a,0,0.100000,0.000000,0.000000,0.000000,0.000000,0\n";
    out << "a,2,0.200000,0.000000,0.000000,0.000000,0.000000,0\n";
  }
  CHECK_THROWS_WITH_AS(load_decisions(path), doctest::Contains("contiguous"), data_error);

  {
    std::ofstream out(path);
    out << "session_id,event_index,t_seconds,m_gaze,c_gaze,lexical,task,help\n";
    out << "a,0,0.1,0,0,0,0,0\n";
    out << "b,0,0.1,0,0,0,0,0\n";
    out << "a,1,0.2,0,0,0,0,0\n";  // session a reappears
  }
  CHECK_THROWS_WITH_AS(load_decisions(path), doctest::Contains("not contiguous"), data_error);

  {
    std::ofstream out(path);
    out << "wrong,header\n";
  }
  CHECK_THROWS_AS(load_decisions(path), data_error);

  // Header-only file: zero sessions.
  {
    std::ofstream out(path);
    out << "session_id,event_index,t_seconds,m_gaze,c_gaze,lexical,task,help\n";
  }
  CHECK(load_decisions(path).empty());
}
