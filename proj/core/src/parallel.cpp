#include "dcdiff/parallel.hpp"

#include <cstdlib>
#include <string>

#include "dcdiff/errors.hpp"

namespace dcdiff {

unsigned resolve_thread_count(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (requested < 0) throw ArgumentError("thread count must be positive");
  if (const char* env = std::getenv("DCDIFF_THREADS"); env && *env) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ArgumentError(std::string("DCDIFF_THREADS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

}  // namespace dcdiff
