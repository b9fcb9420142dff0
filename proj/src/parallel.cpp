#include "subreg/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace subreg {

namespace {

SweepBest sweep_range(long long lo, long long hi,
                      const std::function<std::optional<double>(long long)>& value_at) {
  SweepBest best;
  for (long long i = lo; i < hi; ++i) {
    const std::optional<double> v = value_at(i);
    if (!v) continue;
    ++best.contributing;
    if (best.index < 0 || *v > best.value) {
      best.value = *v;
      best.index = i;
    }
  }
  return best;
}

}  // namespace

SweepBest sweep_max(long long n, int threads,
                    const std::function<std::optional<double>(long long)>& value_at) {
  if (n <= 0) return {};
  const int workers =
      static_cast<int>(std::min<long long>(std::max(threads, 1), n));
  if (workers == 1) return sweep_range(0, n, value_at);

  std::vector<SweepBest> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const long long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      const long long lo = w * chunk;
      const long long hi = std::min(n, lo + chunk);
      try {
        partial[w] = sweep_range(lo, hi, value_at);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Merge in ascending chunk order; ties keep the earlier index.
  SweepBest best;
  for (const SweepBest& p : partial) {
    best.contributing += p.contributing;
    if (p.index < 0) continue;
    if (best.index < 0 || p.value > best.value) {
      best.value = p.value;
      best.index = p.index;
    }
  }
  return best;
}

}  // namespace subreg
