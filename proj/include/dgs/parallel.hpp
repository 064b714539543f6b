#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <memory>
#include <vector>

namespace dgs {

// Fixed-size worker pool for objective evaluations. parallel_for only
// schedules work; every reduction in the library happens afterwards in
// index order, so results never depend on the worker count.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers = 1);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t workers() const noexcept { return workers_; }

  // Runs body(i) for i in [0, n). Calls may nest (trials fanning out stencils).
  // If any body throws, the exception of the lowest failing index is
  // rethrown once all indices have finished.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

  // Shared single-worker pool used when callers pass none.
  static WorkerPool& serial();

 private:
  struct Arena;
  std::size_t workers_;
  std::unique_ptr<Arena> arena_;
};

}  // namespace dgs
