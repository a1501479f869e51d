#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

namespace verifact {

/// Spaces out acquisitions so that at most `per_second` calls start per
/// second. A non-positive rate disables limiting.
class RateLimiter {
 public:
  explicit RateLimiter(double per_second = 0.0) : per_second_(per_second) {}

  void acquire() {
    if (per_second_ <= 0.0) return;
    const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / per_second_));
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lock(mutex_);
      const auto now = std::chrono::steady_clock::now();
      slot = std::max(now, next_);
      next_ = slot + interval;
    }
    std::this_thread::sleep_until(slot);
  }

  double rate() const noexcept { return per_second_; }

 private:
  double per_second_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point next_{};
};

/// Applies `fn(item, index)` to every item with at most `width` calls in
/// flight and returns the results in input order. If any call throws, the
/// remaining queued items are abandoned and the exception from the lowest
/// failing index is rethrown once all workers have stopped.
template <class In, class Fn>
auto parallel_map(std::span<const In> items, std::size_t width, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, const In&, std::size_t>> {
  using Out = std::invoke_result_t<Fn&, const In&, std::size_t>;
  const std::size_t n = items.size();
  std::vector<std::optional<Out>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        slots[i].emplace(fn(items[i], i));
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };

  const std::size_t threads = std::min(std::max<std::size_t>(width, 1), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Out> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace verifact
