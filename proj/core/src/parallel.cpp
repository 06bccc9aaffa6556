#include "qgp/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace qgp {

int max_threads() {
  if (const char* env = std::getenv("QGP_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) {
        return n;
      }
    } catch (...) {
      // fall through to the hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& fn,
                  int threads) {
  if (count == 0) {
    return;
  }
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : static_cast<std::size_t>(max_threads());
  workers = std::min(workers, count);
  if (workers <= 1) {
    fn(0, count);
    return;
  }

  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) {
      break;
    }
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(0, std::min(count, chunk));
  for (std::thread& t : pool) {
    t.join();
  }
}

}  // namespace qgp
