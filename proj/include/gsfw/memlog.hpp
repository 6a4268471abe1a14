#pragma once

#include <atomic>
#include <cstddef>
#include <vector>

// Instrumented allocation counter for the solver's working set.
//
// Core solver containers allocate through tracked_vector so that the peak
// footprint, in 8-byte words, can be asserted against the O(n + |E| + k*n)
// budget. Dense shadow-mode objects use plain std::vector on purpose: shadow
// mode is a verification tool and exempt from the budget.

namespace gsfw::memlog {

std::size_t current_bytes();
std::size_t peak_bytes();

// Peak in 8-byte words, rounded up.
std::size_t peak_words();

void reset_peak();

namespace detail {
void add(std::size_t bytes);
void sub(std::size_t bytes);
}  // namespace detail

}  // namespace gsfw::memlog

namespace gsfw {

template <typename T>
struct TrackingAllocator {
  using value_type = T;

  TrackingAllocator() noexcept = default;
  template <typename U>
  TrackingAllocator(const TrackingAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    memlog::detail::add(n * sizeof(T));
    return static_cast<T*>(::operator new(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t n) noexcept {
    memlog::detail::sub(n * sizeof(T));
    ::operator delete(p);
  }

  template <typename U>
  bool operator==(const TrackingAllocator<U>&) const noexcept {
    return true;
  }
};

template <typename T>
using tracked_vector = std::vector<T, TrackingAllocator<T>>;

}  // namespace gsfw
