#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "helpfuse/rng.hpp"
#include "helpfuse/windowing.hpp"

using namespace helpfuse;

namespace {

DecisionStream stream_of(std::initializer_list<LabeledDecision> items) { return items; }

std::vector<SessionDecisions> random_streams(Rng& rng, int n_sessions, int n_events) {
  std::vector<SessionDecisions> out;
  for (int s = 0; s < n_sessions; ++s) {
    SessionDecisions sd;
    sd.session_id = "s" + std::to_string(s);
    for (int e = 0; e < n_events; ++e) {
      LabeledDecision d;
      d.vec = {rng.next_double(), rng.next_double(), rng.next_double(), rng.next_double()};
      d.help = rng.next_below(2) != 0;
      sd.t_seconds.push_back(e);
      sd.stream.push_back(d);
    }
    out.push_back(std::move(sd));
  }
  return out;
}

}  // namespace

TEST_CASE("window of one is the identity") {
  const DecisionStream stream = stream_of({{{0.1, 0.2, 0.3, 0.4}, 1}, {{0.5, 0.6, 0.7, 0.8}, 0}});
  const auto out = build_windowed(stream, 1, "s");
  REQUIRE(out.size() == 2);
  CHECK(out[0].features == std::vector<double>{0.1, 0.2, 0.3, 0.4});
  CHECK(out[1].features == std::vector<double>{0.5, 0.6, 0.7, 0.8});
  CHECK(out[0].target == 1);
  CHECK(out[1].target == 0);
}

TEST_CASE("session starts are zero padded") {
  const DecisionStream stream = stream_of({{{0.9, 0.8, 0.7, 0.6}, 1}});
  const auto out = build_windowed(stream, 3, "s");
  REQUIRE(out.size() == 1);
  CHECK(out[0].features ==
        std::vector<double>{0.9, 0.8, 0.7, 0.6, 0, 0, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("concatenation is most recent first") {
  const DecisionStream stream =
      stream_of({{{0.1, 0, 0, 0.5}, 0}, {{0, 0, 1.0, 0.5}, 1}});
  const auto out = build_windowed(stream, 2, "s");
  REQUIRE(out.size() == 2);
  CHECK(out[0].features == std::vector<double>{0.1, 0, 0, 0.5, 0, 0, 0, 0});
  CHECK(out[1].features == std::vector<double>{0, 0, 1.0, 0.5, 0.1, 0, 0, 0.5});
}

TEST_CASE("window size must be positive") {
  CHECK_THROWS_AS(build_windowed({}, 0, "s"), std::invalid_argument);
  CHECK_THROWS_AS(build_windowed({}, -3, "s"), std::invalid_argument);
}

TEST_CASE("windows never cross session boundaries") {
  // Give each session a distinct constant so foreign components are detectable.
  std::vector<SessionDecisions> streams(2);
  for (int s = 0; s < 2; ++s) {
    const double c = s == 0 ? 0.25 : 0.75;
    streams[s].session_id = "s" + std::to_string(s);
    for (int e = 0; e < 3; ++e) {
      streams[s].t_seconds.push_back(e);
      streams[s].stream.push_back({{c, c, c, c}, 0});
    }
  }
  const auto corpus = build_corpus(streams, 5);
  REQUIRE(corpus.size() == 6);
  for (const WindowedInstance& inst : corpus) {
    const double own = inst.session_id == "s0" ? 0.25 : 0.75;
    CHECK(inst.features.size() == 20);
    for (double f : inst.features) CHECK((f == own || f == 0.0));
  }
  // First instance of session 2 contains no session-1 data: all padding zero.
  const WindowedInstance& first_s1 = corpus[3];
  CHECK(first_s1.session_id == "s1");
  for (std::size_t i = 4; i < first_s1.features.size(); ++i)
    CHECK(first_s1.features[i] == 0.0);
}

TEST_CASE("windowing laws hold on random corpora") {
  Rng rng(31);
  const auto streams = random_streams(rng, 3, 20);
  std::size_t total_events = 0;
  for (const auto& sd : streams) total_events += sd.stream.size();

  for (int s : {1, 2, 5, 13}) {
    const auto corpus = build_corpus(streams, s);
    const auto corpus_next = build_corpus(streams, s + 1);
    REQUIRE(corpus.size() == total_events);
    REQUIRE(corpus_next.size() == total_events);

    std::vector<int> targets_before, targets_after;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& inst = corpus[i];
      CHECK(inst.features.size() == static_cast<std::size_t>(4 * s));
      // Prefix property: the first 4s features under s+1 equal the features under s.
      for (std::size_t j = 0; j < inst.features.size(); ++j)
        CHECK(inst.features[j] == corpus_next[i].features[j]);
      // Zero padding beyond the event index.
      for (std::size_t back = inst.event_index + 1; back < static_cast<std::size_t>(s); ++back) {
        for (std::size_t c = 0; c < 4; ++c) CHECK(inst.features[4 * back + c] == 0.0);
      }
      targets_after.push_back(inst.target);
    }
    for (const auto& sd : streams) {
      for (const auto& d : sd.stream) targets_before.push_back(d.help);
    }
    std::sort(targets_before.begin(), targets_before.end());
    std::sort(targets_after.begin(), targets_after.end());
    CHECK(targets_before == targets_after);
  }
}

TEST_CASE("windowed corpus CSV dump has the documented shape") {
  Rng rng(5);
  const auto streams = random_streams(rng, 1, 3);
  const auto corpus = build_corpus(streams, 2);
  const auto path = std::filesystem::temp_directory_path() / "helpfuse_windowed.csv";
  write_windowed_csv(corpus, 2, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "session_id,event_index,target,f0,f1,f2,f3,f4,f5,f6,f7");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3);
}
