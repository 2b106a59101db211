// Copyright 2026 The sibgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// A small persistent fork-join pool for fanning out per-body oracle calls.
// Work is split into contiguous index ranges and every task writes only to
// its own slots, so results do not depend on the thread count.

#pragma once

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sibgame {

class WorkerPool {
 public:
  explicit WorkerPool(int threads) : threads_(threads < 1 ? 1 : threads) {
    for (int w = 1; w < threads_; ++w) workers_.emplace_back([this, w] { Run(w); });
  }

  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      shutdown_ = true;
      ++generation_;
    }
    start_cv_.notify_all();
    for (auto& t : workers_) t.join();
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int threads() const { return threads_; }

  // Calls body(i) for every i in [0, n). Blocks until all calls return and
  // rethrows the first exception raised by any of them.
  void ParallelFor(std::int64_t n, const std::function<void(std::int64_t)>& body) {
    if (threads_ == 1 || n < 2) {
      for (std::int64_t i = 0; i < n; ++i) body(i);
      return;
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      task_ = &body;
      count_ = n;
      pending_ = threads_ - 1;
      error_ = nullptr;
      ++generation_;
    }
    start_cv_.notify_all();
    RunChunk(0, body);
    std::unique_lock<std::mutex> lock(mu_);
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    task_ = nullptr;
    if (error_) std::rethrow_exception(error_);
  }

 private:
  void RunChunk(int worker, const std::function<void(std::int64_t)>& body) {
    const std::int64_t begin = count_ * worker / threads_;
    const std::int64_t end = count_ * (worker + 1) / threads_;
    try {
      for (std::int64_t i = begin; i < end; ++i) body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!error_) error_ = std::current_exception();
    }
  }

  void Run(int worker) {
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void(std::int64_t)>* task = nullptr;
      {
        std::unique_lock<std::mutex> lock(mu_);
        start_cv_.wait(lock, [&] { return generation_ != seen; });
        seen = generation_;
        if (shutdown_) return;
        task = task_;
      }
      RunChunk(worker, *task);
      {
        std::lock_guard<std::mutex> lock(mu_);
        --pending_;
      }
      done_cv_.notify_one();
    }
  }

  int threads_;
  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::int64_t)>* task_ = nullptr;
  std::int64_t count_ = 0;
  int pending_ = 0;
  std::uint64_t generation_ = 0;
  bool shutdown_ = false;
  std::exception_ptr error_;
};

}  // namespace sibgame
