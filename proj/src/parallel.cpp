#include "thermo_billiards/parallel.hpp"

#include <cstdlib>
#include <string>

namespace tb {

namespace {
std::atomic<unsigned> g_default_threads{0};

unsigned from_environment() {
  if (const char *env = std::getenv("THERMO_BILLIARDS_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 0;
}
}  // namespace

void set_default_threads(unsigned threads) { g_default_threads = threads; }

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const unsigned d = g_default_threads.load(); d > 0) return d;
  if (const unsigned e = from_environment(); e > 0) return e;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace tb
