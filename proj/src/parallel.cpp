#include "moment_spectra/parallel.hpp"

#include <cstdlib>
#include <string>

namespace moment_spectra {

std::size_t worker_count() {
  if (const char* env = std::getenv("MOMENT_SPECTRA_THREADS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (...) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace moment_spectra
