#pragma once

#include <atomic>
#include <cstdint>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

namespace mslru {

inline void cpu_relax() {
#if defined(__x86_64__) || defined(__i386__)
  _mm_pause();
#endif
}

using LockByte = std::atomic<std::uint8_t>;
static_assert(sizeof(LockByte) == 1 && LockByte::is_always_lock_free);

/// Test-and-set on a one-byte lock, spinning on a plain load while held.
class SpinLockGuard {
 public:
  explicit SpinLockGuard(LockByte& lock) : lock_(lock) {
    while (lock_.exchange(1, std::memory_order_acquire) != 0) {
      while (lock_.load(std::memory_order_relaxed) != 0) cpu_relax();
    }
  }
  ~SpinLockGuard() { lock_.store(0, std::memory_order_release); }

  SpinLockGuard(const SpinLockGuard&) = delete;
  SpinLockGuard& operator=(const SpinLockGuard&) = delete;

 private:
  LockByte& lock_;
};

}  // namespace mslru
