#include "pfw/worker_pool.hpp"

#include <utility>

namespace pfw {

WorkerPool::WorkerPool(std::size_t threads) {
  if (threads == 0) threads = 1;
  threads_.reserve(threads);
  for (std::size_t i = 0; i < threads; ++i) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  work_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::run(std::size_t task_count, const std::function<void(std::size_t)>& task) {
  if (task_count == 0) return;
  std::unique_lock lock(mu_);
  task_ = &task;
  task_count_ = task_count;
  next_task_.store(0, std::memory_order_relaxed);
  finished_.store(0, std::memory_order_relaxed);
  error_ = nullptr;
  ++generation_;
  work_cv_.notify_all();
  // A worker that joined this generation may still hold task_; wait it out.
  done_cv_.wait(lock, [&] {
    return finished_.load(std::memory_order_acquire) == task_count && active_ == 0;
  });
  task_ = nullptr;
  task_count_ = 0;
  if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
}

void WorkerPool::worker_loop() {
  std::size_t seen = 0;
  std::unique_lock lock(mu_);
  for (;;) {
    work_cv_.wait(lock, [&] { return stop_ || (generation_ != seen && task_ != nullptr); });
    if (stop_) return;
    seen = generation_;
    const auto* task = task_;
    const std::size_t count = task_count_;
    ++active_;
    lock.unlock();

    std::exception_ptr err;
    for (;;) {
      const std::size_t index = next_task_.fetch_add(1, std::memory_order_relaxed);
      if (index >= count) break;
      try {
        (*task)(index);
      } catch (...) {
        if (!err) err = std::current_exception();
      }
      finished_.fetch_add(1, std::memory_order_acq_rel);
    }

    lock.lock();
    if (err && !error_) error_ = err;
    if (--active_ == 0) done_cv_.notify_one();
  }
}

}  // namespace pfw
