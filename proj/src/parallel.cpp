#include "parabgmt/parallel.hpp"

#include <cstdlib>
#include <string>

namespace parabgmt {
namespace {
std::atomic<int> g_override{0};
}

int worker_count() {
  if (const int o = g_override.load(); o > 0) return o;
  if (const char* env = std::getenv("PARABGMT_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_worker_override(int workers) { g_override.store(workers > 0 ? workers : 0); }

}  // namespace parabgmt
