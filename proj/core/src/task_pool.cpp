#include "hzgsvd/task_pool.hpp"

namespace hzg {

TaskPool::TaskPool(std::size_t threads) {
  for (std::size_t t = 1; t < threads; ++t) workers_.emplace_back([this] { worker_loop(); });
}

TaskPool::~TaskPool() {
  {
    std::lock_guard lk(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  for (auto& w : workers_) w.join();
}

void TaskPool::drain() {
  for (;;) {
    std::size_t i;
    {
      std::lock_guard lk(mu_);
      if (next_ >= count_) return;
      i = next_++;
    }
    try {
      (*job_)(i);
    } catch (...) {
      std::lock_guard lk(mu_);
      if (!error_) error_ = std::current_exception();
    }
  }
}

void TaskPool::worker_loop() {
  std::size_t seen = 0;
  for (;;) {
    {
      std::unique_lock lk(mu_);
      cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      ++active_;
    }
    drain();
    {
      std::lock_guard lk(mu_);
      --active_;
    }
    done_cv_.notify_all();
  }
}

void TaskPool::parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (workers_.empty() || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  {
    std::lock_guard lk(mu_);
    job_ = &fn;
    count_ = count;
    next_ = 0;
    error_ = nullptr;
    ++generation_;
  }
  cv_.notify_all();
  drain();
  std::exception_ptr err;
  {
    std::unique_lock lk(mu_);
    done_cv_.wait(lk, [&] { return active_ == 0 && next_ >= count_; });
    job_ = nullptr;
    err = error_;
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace hzg
