#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "parabgmt/generators.hpp"
#include "parabgmt/io.hpp"
#include "parabgmt/parallel.hpp"
#include "parabgmt/rectify.hpp"

namespace parabgmt::cli {
namespace {

std::string flag_name(const std::string& key) {
  std::string out = key;
  for (auto& c : out) c = c == '_' ? '-' : c;
  return "--" + out;
}

int check_thread_env() {
  const char* env = std::getenv("PARABGMT_THREADS");
  if (env == nullptr) return 0;
  const std::string text(env);
  const bool digits = !text.empty() && text.find_first_not_of("0123456789") == std::string::npos;
  if (!digits || text.size() > 6 || std::stoi(text) < 1) {
    std::cerr << "error: PARABGMT_THREADS must be an integer >= 1, got '" << text << "'\n";
    return 1;
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Parabolic geometric measure theory toolkit", "parabgmt"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  struct Bound {
    const Command* command;
    CLI::App* sub;
    std::vector<Param> params;
    std::map<std::string, std::string> values;
    std::string config;
    int threads = 0;
  };
  std::vector<Bound> bound;
  bound.reserve(commands().size());
  for (const auto& cmd : commands()) {
    Bound b{&cmd, app.add_subcommand(cmd.name, cmd.description), cmd.params, {}, {}, 0};
    b.params.push_back({"seed", "1", "seed for every stochastic step"});
    bound.push_back(std::move(b));
  }
  for (auto& b : bound) {
    for (const auto& p : b.params) {
      std::string names = flag_name(p.key);
      if (p.key == "input") names = "-i," + names;
      if (p.key == "out") names = "-o," + names;
      b.sub->add_option(names, b.values[p.key], p.help + (p.fallback.empty() ? "" : " [default " + p.fallback + "]"));
    }
    b.sub->add_option("--config", b.config, "key=value file or a report JSON whose config is reused");
    b.sub->add_option("--threads", b.threads, "worker cap (overrides PARABGMT_THREADS)")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (check_thread_env() != 0) return 1;

  for (auto& b : bound) {
    if (!b.sub->parsed()) continue;
    try {
      Settings cfg(b.params);
      if (!b.config.empty()) cfg.load_file(b.config);
      for (const auto& p : b.params) {
        if (b.sub->count(flag_name(p.key)) > 0) cfg.set_flag(p.key, b.values[p.key]);
      }
      if (b.threads > 0) set_worker_override(b.threads);
      return b.command->run(cfg);
    } catch (const ParseError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    } catch (const GraphRejected& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    } catch (const NotFound& e) {
      std::cerr << "error: construction failed: " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 1;
}

}  // namespace parabgmt::cli
