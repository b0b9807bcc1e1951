#pragma once

#include <string>
#include <vector>

#include "braidnav/belief.hpp"
#include "braidnav/world.hpp"

namespace braidnav {

enum class Condition { C1 = 1, C2, C3, C4, C5 };

Condition condition_from_string(const std::string& s);
std::string to_string(Condition c);

struct PolicyCondition {
  Condition tag = Condition::C2;
  bool knows_paths = false;  // C3, C5
  bool topological = false;  // C2, C3: cluster futures by braid

  static PolicyCondition of(Condition c);
};

struct DecisionTrace {
  double time = 0.0;
  int agent = 0;
  Condition condition = Condition::C1;
  double entropy_low = 0.0;
  double entropy_high = 0.0;
  SpeedChoice chosen = SpeedChoice::high;
};

/// Ties inside the tolerance go to the high speed (the stated preference);
/// otherwise pure argmin.
SpeedChoice tie_break(double entropy_low, double entropy_high, double tol);

/// One agent's speed decision from the shared cycle snapshot. Only called
/// while the ego negotiates; in the execution region the last choice holds.
SpeedChoice decide(const Scene& scene, int ego, const PolicyCondition& policy,
                   RolloutCache& cache, DecisionTrace* trace = nullptr);

}  // namespace braidnav
