#pragma once

#include <stdexcept>
#include <string>

namespace spikekit {

// Bad shapes, invalid hyperparameter values, broken directory layouts.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed event files; message carries the line or byte offset.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid runtime inputs (empty sample sets, label/record mismatches).
struct data_error : std::runtime_error {
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spikekit
