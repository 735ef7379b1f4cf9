#include "helpfuse/windowing.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "helpfuse/error.hpp"

namespace helpfuse {

std::vector<WindowedInstance> build_windowed(const DecisionStream& stream, int window_size,
                                             const std::string& session_id) {
  if (window_size < 1) throw std::invalid_argument("build_windowed: window_size must be >= 1");
  const std::size_t s = static_cast<std::size_t>(window_size);
  std::vector<WindowedInstance> out;
  out.reserve(stream.size());
  for (std::size_t t = 0; t < stream.size(); ++t) {
    WindowedInstance inst;
    inst.features.assign(4 * s, 0.0);
    for (std::size_t back = 0; back < s; ++back) {
      if (back > t) break;  // indices before the session start stay zero
      const auto v = stream[t - back].vec.as_array();
      for (std::size_t c = 0; c < 4; ++c) inst.features[4 * back + c] = v[c];
    }
    inst.target = stream[t].help;
    inst.session_id = session_id;
    inst.event_index = t;
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<WindowedInstance> build_corpus(const std::vector<SessionDecisions>& streams,
                                           int window_size) {
  std::vector<WindowedInstance> corpus;
  for (const SessionDecisions& sd : streams) {
    std::vector<WindowedInstance> part = build_windowed(sd.stream, window_size, sd.session_id);
    corpus.insert(corpus.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  return corpus;
}

void write_windowed_csv(const std::vector<WindowedInstance>& instances, int window_size,
                        const std::filesystem::path& path) {
  if (window_size < 1) throw std::invalid_argument("write_windowed_csv: window_size must be >= 1");
  std::ofstream out(path);
  if (!out) throw data_error("cannot open '" + path.string() + "' for writing");
  out << "session_id,event_index,target";
  for (int i = 0; i < 4 * window_size; ++i) out << ",f" << i;
  out << "\n";
  char buf[64];
  for (const WindowedInstance& inst : instances) {
    out << inst.session_id << ',' << inst.event_index << ',' << static_cast<int>(inst.target);
    for (double f : inst.features) {
      std::snprintf(buf, sizeof(buf), "%.6f", f);
      out << ',' << buf;
    }
    out << "\n";
  }
  if (!out.good()) throw data_error("write failed for '" + path.string() + "'");
}

}  // namespace helpfuse
