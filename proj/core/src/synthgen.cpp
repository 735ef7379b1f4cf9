#include "helpfuse/synthgen.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "helpfuse/error.hpp"
#include "helpfuse/rng.hpp"

namespace helpfuse {

namespace {

// Annotation-type counts observed in the source recordings; used as the
// relative rates of the five event kinds.
constexpr std::array<double, 5> kKindCounts = {956.0, 145.0, 220.0, 255.0, 402.0};

std::array<double, 5> kind_proportions() {
  double total = 0.0;
  for (double c : kKindCounts) total += c;
  std::array<double, 5> p{};
  for (std::size_t i = 0; i < 5; ++i) p[i] = kKindCounts[i] / total;
  return p;
}

std::string session_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth-%04d", index);
  return buf;
}

class LatentChain {
 public:
  LatentChain(double prevalence, double persistence, Rng& rng)
      : prevalence_(prevalence), refresh_(1.0 / persistence), rng_(rng) {
    state_ = rng_.next_bernoulli(prevalence_);
  }

  bool state() const { return state_; }

  void step() {
    if (rng_.next_bernoulli(refresh_)) state_ = rng_.next_bernoulli(prevalence_);
  }

 private:
  double prevalence_;
  double refresh_;
  Rng& rng_;
  bool state_;
};

const std::array<const char*, 3> kNeutralDirections = {"grid", "away", "organizer"};

const std::array<const char*, 6> kKeywordLines = {
    "i need help with this one",     "what goes here",
    "which slot is right",           "where does the blue one go",
    "how do i sort these",           "is this correct"};

const std::array<const char*, 6> kNeutralLines = {
    "okay",       "done with this row", "whatever",
    "next one",   "there we go",        "moving on"};

const std::array<const char*, 4> kRobotLines = {
    "place the round tablet in the morning slot",
    "you are doing well",
    "two medications remain",
    "check the evening column"};

}  // namespace

void validate(const GeneratorConfig& config) {
  if (config.n_sessions < 0) throw data_error("generator: n_sessions must be >= 0");
  if (config.events_per_session < 0)
    throw data_error("generator: events_per_session must be >= 0");
  if (!(config.mean_gap_seconds > 0.0))
    throw data_error("generator: mean_gap_seconds must be > 0");
  if (!(config.prevalence > 0.0 && config.prevalence < 1.0))
    throw data_error("generator: prevalence must be in (0,1)");
  if (!(config.persistence >= 1.0)) throw data_error("generator: persistence must be >= 1");
  for (std::size_t d = 0; d < 4; ++d) {
    const DetectorTarget& t = config.targets[d];
    if (!(t.precision > 0.0 && t.precision < 1.0))
      throw data_error(std::string("generator: ") + kDetectorNames[d] +
                       " precision must be in (0,1)");
    if (!(t.recall > 0.0 && t.recall < 1.0))
      throw data_error(std::string("generator: ") + kDetectorNames[d] +
                       " recall must be in (0,1)");
  }
}

double solve_false_fire_rate(const DetectorTarget& target, double prevalence) {
  return target.recall * prevalence * (1.0 - target.precision) /
         (target.precision * (1.0 - prevalence));
}

EmissionParams solve_emissions(const DetectorTargets& targets, double prevalence) {
  EmissionParams params;
  for (std::size_t d = 0; d < 4; ++d) {
    const double q = solve_false_fire_rate(targets[d], prevalence);
    if (!(q > 0.0 && q < 1.0))
      throw data_error(std::string("infeasible calibration target for detector '") +
                       kDetectorNames[d] + "': derived false-fire rate " + std::to_string(q) +
                       " outside (0,1)");
    params.fire_help[d] = targets[d].recall;
    params.fire_quiet[d] = q;
  }
  return params;
}

GeneratedData generate(const GeneratorConfig& config) {
  validate(config);
  const EmissionParams emissions = solve_emissions(config.targets, config.prevalence);

  GeneratedData out;
  out.sessions.reserve(static_cast<std::size_t>(config.n_sessions));
  out.streams.reserve(static_cast<std::size_t>(config.n_sessions));

  for (int si = 0; si < config.n_sessions; ++si) {
    Rng rng(mix_seed({config.seed, 1, static_cast<std::uint64_t>(si)}));
    LatentChain chain(config.prevalence, config.persistence, rng);

    Session session;
    session.session_id = session_name(si);
    SessionDecisions decisions;
    decisions.session_id = session.session_id;

    double t = 0.0;
    for (int e = 0; e < config.events_per_session; ++e) {
      t += rng.next_exponential(config.mean_gap_seconds);
      const bool help = chain.state();
      const std::array<double, 4>& rates =
          help ? emissions.fire_help : emissions.fire_quiet;
      LabeledDecision d;
      d.vec.m_gaze = rng.next_bernoulli(rates[0]) ? 1.0 : 0.0;
      d.vec.c_gaze = rng.next_bernoulli(rates[1]) ? 1.0 : 0.0;
      d.vec.lexical = rng.next_bernoulli(rates[2]) ? 1.0 : 0.0;
      d.vec.task = rng.next_bernoulli(rates[3]) ? 1.0 : 0.0;
      d.help = help ? 1 : 0;

      AnnotationEvent ev;
      ev.t = round6(t);
      ev.payload = GazeEvent{
          kNeutralDirections[static_cast<std::size_t>(rng.next_below(kNeutralDirections.size()))]};

      session.events.push_back(std::move(ev));
      session.labels.push_back(d.help);
      decisions.t_seconds.push_back(round6(t));
      decisions.stream.push_back(d);
      chain.step();
    }
    out.sessions.push_back(std::move(session));
    out.streams.push_back(std::move(decisions));
  }
  return out;
}

RichCalibration rich_calibration(const GeneratorConfig& config) {
  validate(config);
  const DetectorConfig detector_config;  // rich payloads target the default rules
  RichCalibration cal;
  cal.kind_proportions = kind_proportions();
  const double p_gaze = cal.kind_proportions[0];
  const double p_speech = cal.kind_proportions[1];
  const double p_task = cal.kind_proportions[4];
  const double pi = config.prevalence;

  // The next gaze event is a geometric number of exponential gaps away, so
  // dwell is exponential with mean gap/p_gaze; task arrivals thin the event
  // stream the same way.
  cal.dwell_pass =
      std::exp(-detector_config.mutual_gaze_min_duration * p_gaze / config.mean_gap_seconds);
  cal.recent_task =
      1.0 - std::exp(-detector_config.confirm_window * p_task / config.mean_gap_seconds);

  const DetectorTarget& mg = config.targets[0];
  const DetectorTarget& cg = config.targets[1];
  const DetectorTarget& lex = config.targets[2];
  const DetectorTarget& task = config.targets[3];

  const double q_mg = solve_false_fire_rate(mg, pi);
  const double q_cg = solve_false_fire_rate(cg, pi);
  const double q_lex = solve_false_fire_rate(lex, pi);

  // The task detector can only fire on task events, so recall is capped at
  // the task-kind proportion; precision is preserved at the capped recall.
  const double task_recall = std::min(task.recall, p_task);
  const double q_task = solve_false_fire_rate({task.precision, task_recall}, pi);

  const std::array<double, 2> m_fire = {q_mg / p_gaze, mg.recall / p_gaze};
  const std::array<double, 2> c_fire = {q_cg / p_gaze, cg.recall / p_gaze};
  for (int s = 0; s < 2; ++s) {
    cal.robot_after_task[s] = c_fire[s] / cal.recent_task;
    const double robot_total = m_fire[s] / cal.dwell_pass;
    cal.robot_otherwise[s] = (robot_total - c_fire[s]) / (1.0 - cal.recent_task);
    cal.keyword_rate[s] = (s == 1 ? lex.recall : q_lex) / p_speech;
    cal.task_fire[s] = (s == 1 ? task_recall : q_task) / p_task;
    const char* which = nullptr;
    if (!(cal.robot_after_task[s] >= 0.0 && cal.robot_after_task[s] <= 1.0)) which = "c_gaze";
    if (!(cal.robot_otherwise[s] >= 0.0 && cal.robot_otherwise[s] <= 1.0)) which = "m_gaze";
    if (!(cal.keyword_rate[s] >= 0.0 && cal.keyword_rate[s] <= 1.0)) which = "lexical";
    if (!(cal.task_fire[s] >= 0.0 && cal.task_fire[s] <= 1.0)) which = "task";
    if (which != nullptr)
      throw data_error(std::string("infeasible rich calibration for detector '") + which +
                       "' at the configured event mix");
  }

  cal.effective_targets = config.targets;
  cal.effective_targets[3].recall = task_recall;
  return cal;
}

std::vector<Session> generate_rich_sessions(const GeneratorConfig& config) {
  const RichCalibration cal = rich_calibration(config);
  const DetectorConfig detector_config;

  std::vector<Session> sessions;
  sessions.reserve(static_cast<std::size_t>(config.n_sessions));
  for (int si = 0; si < config.n_sessions; ++si) {
    Rng rng(mix_seed({config.seed, 2, static_cast<std::uint64_t>(si)}));
    LatentChain chain(config.prevalence, config.persistence, rng);

    Session session;
    session.session_id = session_name(si);

    double t = 0.0;
    double last_task_t = -1.0;
    bool seen_task = false;
    int next_goal = 0;
    bool any_task_event = false;

    for (int e = 0; e < config.events_per_session; ++e) {
      t += rng.next_exponential(config.mean_gap_seconds);
      const bool help = chain.state();
      const int state = help ? 1 : 0;

      // Kind draw at the annotation-type proportions.
      const double u = rng.next_double();
      std::size_t kind = 0;
      double acc = 0.0;
      for (; kind < 4; ++kind) {
        acc += cal.kind_proportions[kind];
        if (u < acc) break;
      }

      AnnotationEvent ev;
      ev.t = round6(t);
      switch (kind) {
        case 0: {  // gaze
          const bool recent =
              seen_task && (t - last_task_t) <= detector_config.confirm_window;
          const double robot_prob =
              recent ? cal.robot_after_task[state] : cal.robot_otherwise[state];
          if (rng.next_bernoulli(robot_prob)) {
            ev.payload = GazeEvent{detector_config.robot_tag};
          } else {
            ev.payload = GazeEvent{kNeutralDirections[static_cast<std::size_t>(
                rng.next_below(kNeutralDirections.size()))]};
          }
          break;
        }
        case 1: {  // user speech
          const char* line =
              rng.next_bernoulli(cal.keyword_rate[state])
                  ? kKeywordLines[static_cast<std::size_t>(rng.next_below(kKeywordLines.size()))]
                  : kNeutralLines[static_cast<std::size_t>(rng.next_below(kNeutralLines.size()))];
          ev.payload = UserSpeechEvent{line};
          break;
        }
        case 2:
          ev.payload = UserGestureEvent{rng.next_bernoulli(0.7)};
          break;
        case 3:
          ev.payload = RobotSpeechEvent{
              kRobotLines[static_cast<std::size_t>(rng.next_below(kRobotLines.size()))]};
          break;
        default: {  // task
          any_task_event = true;
          last_task_t = t;
          seen_task = true;
          TaskEvent task;
          if (rng.next_bernoulli(cal.task_fire[state])) {
            // Wrong-cell placement: leaves the remaining-goal count unchanged.
            task.cell = "offgrid";
            task.med = "medA";
          } else {
            task.cell = "c" + std::to_string(next_goal);
            task.med = next_goal % 2 == 0 ? "medA" : "medB";
            ++next_goal;
          }
          task.action = TaskAction::placed;
          ev.payload = std::move(task);
          break;
        }
      }
      session.events.push_back(std::move(ev));
      session.labels.push_back(help ? 1 : 0);
      chain.step();
    }

    for (int g = 0; g < next_goal; ++g)
      session.task_spec.push_back({"c" + std::to_string(g), g % 2 == 0 ? "medA" : "medB"});
    if (any_task_event && session.task_spec.empty())
      session.task_spec.push_back({"c0", "medA"});

    sessions.push_back(std::move(session));
  }
  return sessions;
}

}  // namespace helpfuse
