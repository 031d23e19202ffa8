#pragma once

#include <functional>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace scriptcausal::cli {

struct Command {
  std::string name;
  std::string help;
  std::vector<std::string> keys;      // settings read by the command
  std::vector<std::string> required;  // keys that must be set
  // Runs the command; returns the paths it wrote.
  std::function<std::vector<std::string>(const RunConfig&)> run;
};

const std::vector<Command>& commands();

}  // namespace scriptcausal::cli
