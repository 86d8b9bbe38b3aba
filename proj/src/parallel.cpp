#include "twinbeam/parallel.hpp"

#include <cstdlib>
#include <string>

namespace twinbeam {

int resolve_thread_count(std::optional<int> requested) {
  if (requested) return std::max(1, *requested);
  if (const char* env = std::getenv("TWINBEAM_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      return 1;
    }
  }
  return 1;
}

}  // namespace twinbeam
