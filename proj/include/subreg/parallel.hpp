#pragma once

#include <functional>
#include <optional>

namespace subreg {

struct SweepBest {
  double value = 0.0;          // max contribution; 0 when nothing contributed
  long long index = -1;        // smallest linear index attaining the max
  long long contributing = 0;  // evaluated (non-skipped) samples
};

/// Deterministic parallel max-reduction over [0, n). Per-index values are
/// combined by (larger value, then smaller index), so the result is
/// bit-identical for any thread count or partitioning. nullopt marks a
/// skipped (vacuous) index.
SweepBest sweep_max(long long n, int threads,
                    const std::function<std::optional<double>(long long)>& value_at);

}  // namespace subreg
