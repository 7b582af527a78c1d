#include "pntap/parallel.hpp"

namespace pntap {

namespace {
std::atomic<unsigned> configured_threads{1};
}

void set_thread_count(unsigned n) {
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  configured_threads = n;
}

unsigned thread_count() { return configured_threads; }

} // namespace pntap
