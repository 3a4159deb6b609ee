#include "langmuir/parallel.hpp"

#include <cstdlib>
#include <string>

namespace langmuir {

std::size_t default_threads() {
  const char* env = std::getenv("LANGMUIR_THREADS");
  if (!env) return 1;
  try {
    const long v = std::stol(env);
    return v > 0 ? static_cast<std::size_t>(v) : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace langmuir
