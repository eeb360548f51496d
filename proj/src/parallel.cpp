#include "cvn/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cvn {

int thread_count() {
  if (char const* env = std::getenv("CVN_RIGIDITY_THREADS")) {
    try {
      int const n = std::stoi(env);
      if (n >= 1) return n;
    } catch (std::exception const&) {
    }
  }
  unsigned const hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace cvn
