#include "bootperc/trial_runner.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace bootperc {

unsigned resolve_workers(unsigned requested) {
  if (const char* env = std::getenv("BOOTPERC_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
    }
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace bootperc
