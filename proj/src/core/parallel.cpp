#include "dgs/parallel.hpp"

#include <algorithm>

#include <oneapi/tbb/blocked_range.h>
#include <oneapi/tbb/global_control.h>
#include <oneapi/tbb/parallel_for.h>
#include <oneapi/tbb/task_arena.h>

#include "dgs/error.hpp"

namespace dgs {

struct WorkerPool::Arena {
  // The global limit defaults to the hardware thread count; raise it so the
  // requested worker count is honored on small machines.
  explicit Arena(int concurrency)
      : limit(tbb::global_control::max_allowed_parallelism,
              std::max<std::size_t>(static_cast<std::size_t>(concurrency),
                                    tbb::global_control::active_value(
                                        tbb::global_control::max_allowed_parallelism))),
        arena(concurrency) {}
  tbb::global_control limit;
  tbb::task_arena arena;
};

WorkerPool::WorkerPool(std::size_t workers) : workers_(workers) {
  if (workers == 0) throw InvalidArgument("worker count must be at least 1");
  if (workers > 1) arena_ = std::make_unique<Arena>(static_cast<int>(workers));
}

WorkerPool::~WorkerPool() = default;

WorkerPool& WorkerPool::serial() {
  static WorkerPool pool(1);
  return pool;
}

void WorkerPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  if (!arena_ || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> failures(n);
  arena_->arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n), [&](const auto& range) {
      for (std::size_t i = range.begin(); i != range.end(); ++i) {
        try {
          body(i);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    });
  });
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace dgs
