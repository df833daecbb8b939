#include "tlmine/trace.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "text_util.hpp"

namespace tlmine {

int TimedStateSequence::channel_index(const std::string& name) const {
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (channels[k] == name) return static_cast<int>(k);
  }
  return -1;
}

void TimedStateSequence::validate() const {
  if (times.empty()) throw std::invalid_argument("trace: no samples");
  if (values.size() != times.size() * dim()) {
    throw std::invalid_argument("trace: value storage does not match " +
                                std::to_string(times.size()) + " samples x " +
                                std::to_string(dim()) + " channels");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) {
      throw std::invalid_argument("trace: non-finite time at sample " +
                                  std::to_string(i));
    }
    if (i > 0 && times[i] <= times[i - 1]) {
      throw std::invalid_argument(
          "trace: times must be strictly increasing (sample " +
          std::to_string(i) + ")");
    }
  }
}

namespace {

double parse_number(const std::string& text, const std::string& where) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw std::runtime_error("trace csv: bad number '" + text + "' in " +
                             where);
  }
  return v;
}

}  // namespace

TimedStateSequence read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("trace csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("trace csv: empty file " + path);
  }
  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "time") {
    throw std::runtime_error(
        "trace csv: header must be 'time,<channel>,...' in " + path);
  }

  TimedStateSequence tss;
  tss.channels.assign(header.begin() + 1, header.end());

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("trace csv: row " + std::to_string(row) +
                               " has " + std::to_string(cells.size()) +
                               " cells, expected " +
                               std::to_string(header.size()));
    }
    std::string where = path + " row " + std::to_string(row);
    tss.times.push_back(parse_number(cells[0], where));
    for (std::size_t k = 1; k < cells.size(); ++k) {
      tss.values.push_back(parse_number(cells[k], where));
    }
  }
  tss.validate();
  return tss;
}

void write_trace_csv(const std::string& path, const TimedStateSequence& tss) {
  tss.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("trace csv: cannot write " + path);
  out << "time";
  for (const auto& name : tss.channels) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < tss.size(); ++i) {
    out << format_double(tss.times[i]);
    for (std::size_t k = 0; k < tss.dim(); ++k) {
      out << ',' << format_double(tss.value(i, k));
    }
    out << '\n';
  }
}

}  // namespace tlmine
