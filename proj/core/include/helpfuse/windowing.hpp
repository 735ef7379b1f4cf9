#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "helpfuse/detectors.hpp"

namespace helpfuse {

// One windowed feature vector: the current decision vector concatenated with
// its window_size-1 predecessors, most recent first, zero-padded at the
// session start. features.size() == 4 * window_size.
struct WindowedInstance {
  std::vector<double> features;
  std::uint8_t target = 0;
  std::string session_id;
  std::size_t event_index = 0;
};

// window_size >= 1, otherwise std::invalid_argument. Output length equals
// input length; targets are carried through unchanged.
std::vector<WindowedInstance> build_windowed(const DecisionStream& stream, int window_size,
                                             const std::string& session_id);

// Windows never span session boundaries; each session is padded independently.
std::vector<WindowedInstance> build_corpus(const std::vector<SessionDecisions>& streams,
                                           int window_size);

// Debug dump: session_id,event_index,target,f0,...,f{4s-1}
void write_windowed_csv(const std::vector<WindowedInstance>& instances, int window_size,
                        const std::filesystem::path& path);

}  // namespace helpfuse
