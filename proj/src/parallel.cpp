#include "perclab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace perclab {

unsigned default_threads() {
  if (const char* env = std::getenv("PERCLAB_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // fall through to hardware concurrency
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace perclab
