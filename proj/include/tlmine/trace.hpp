#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tlmine {

// Finite timed state sequence: strictly increasing sample times plus one
// state vector per sample, stored row-major. Channel names give meaning to
// the vector components.
struct TimedStateSequence {
  std::vector<double> times;
  std::vector<double> values;  // size() == times.size() * dim()
  std::vector<std::string> channels;

  std::size_t size() const { return times.size(); }
  std::size_t dim() const { return channels.size(); }

  std::span<const double> sample(std::size_t i) const {
    return {values.data() + i * dim(), dim()};
  }
  double value(std::size_t i, std::size_t channel) const {
    return values[i * dim() + channel];
  }

  // Index of a named channel, -1 if absent.
  int channel_index(const std::string& name) const;

  // Throws std::invalid_argument unless times are strictly increasing,
  // nonempty, finite, and value storage matches size()*dim().
  void validate() const;
};

// CSV exchange format: header row "time,<ch1>,<ch2>,..." then one row per
// sample. Throws std::runtime_error on malformed input.
TimedStateSequence read_trace_csv(const std::string& path);
void write_trace_csv(const std::string& path, const TimedStateSequence& tss);

}  // namespace tlmine
