#ifndef GBL_PARALLEL_HPP
#define GBL_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace gbl {

/// Worker count used by the corpus map-reduce helpers (>= 1).
int worker_count();
void set_worker_count(int jobs);

/// Splits [0, n) into contiguous chunks, runs map(begin, end) -> Acc on each
/// chunk concurrently, then folds the chunk results left to right with
/// merge(acc, next). The fold order is fixed, so results do not depend on the
/// number of workers as long as merge is associative.
template <typename Acc, typename Map, typename Merge>
Acc chunked_reduce(std::size_t n, Map&& map, Merge&& merge) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()), std::max<std::size_t>(n, 1));
  if (workers <= 1) return map(std::size_t{0}, n);
  std::vector<Acc> parts(workers);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = n * w / workers, e = n * (w + 1) / workers;
      pool.emplace_back([&, w, b, e] {
        try {
          parts[w] = map(b, e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  Acc acc = std::move(parts[0]);
  for (std::size_t w = 1; w < workers; ++w) merge(acc, std::move(parts[w]));
  return acc;
}

}  // namespace gbl

#endif  // GBL_PARALLEL_HPP
