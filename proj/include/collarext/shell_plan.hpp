#pragma once

#include <vector>

namespace collarext {

/// One shell of an exhaustion: its outer radius t and the smallest length
/// q of a path crossing it in the unscaled metric.
struct Shell {
  double t = 0.0;
  double q = 1.0;
};

struct ShellPlan {
  std::vector<Shell> shells;

  /// Throws UsageError unless t is strictly increasing and every q > 0.
  void validate() const;

  /// n shells at t_j = j with gaps q_j = ratio^j, j = 1..n.
  static ShellPlan geometric(int n, double ratio);
};

}  // namespace collarext
