#pragma once

#include <functional>
#include <string>
#include <vector>

#include "settings.hpp"

namespace parabgmt::cli {

struct Command {
  std::string name;
  std::string description;
  std::vector<Param> params;  // `seed` is added for every command
  std::function<int(const Settings&)> run;
};

const std::vector<Command>& commands();
std::string version();

/// Parses argv, runs the chosen command and maps failures to exit codes: 0 ok, 1 parse or
/// configuration error, 2 failed verification.
int run(int argc, const char* const* argv);

}  // namespace parabgmt::cli
