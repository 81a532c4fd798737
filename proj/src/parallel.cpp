#include "qpi/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qpi {

int worker_count() {
  if (const char* env = std::getenv("QPI_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(std::uint64_t total,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
  const int workers = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(worker_count()), std::max<std::uint64_t>(total, 1)));
  if (workers <= 1 || total < 2) {
    fn(0, 0, total);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  const std::uint64_t chunk = (total + static_cast<std::uint64_t>(workers) - 1) /
                              static_cast<std::uint64_t>(workers);
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min(total, chunk * static_cast<std::uint64_t>(w));
    const std::uint64_t end = std::min(total, begin + chunk);
    threads.emplace_back([=, &fn] { fn(w, begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace qpi
