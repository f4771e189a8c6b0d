#pragma once

#include <vector>

#include "kronsample/model.hpp"

namespace kronsample {

// One removal decision of a greedy design run.
struct GreedyStep {
  Index domain = 0;
  Index element = 0;
  double gain = 0.0;       // surrogate increase contributed by this removal
  double objective = 0.0;  // surrogate value after this removal
};

// Identifiability check of a diagonal-core design at termination.
struct KrRankReport {
  bool ok = false;
  Index privileged_domain = 0;
  Index rank = 0;      // numerical rank of the privileged sampled factor
  Index required = 0;  // core width the rank must reach
  std::vector<Index> zero_column_domains;
};

struct GreedyTrace {
  std::vector<GreedyStep> steps;
  Selection selection;
  std::vector<double> factor_fp;  // per-domain frame potential of the kept rows
  double objective_final = 0.0;
  double fp_final = 0.0;  // frame potential of the kept design
  double gamma = 0.0;     // near-optimality factor of the fp bound
  bool rank_ok = false;
  std::vector<Index> rank_deficient_domains;  // dense engine report
  KrRankReport kr_rank;                       // diagonal engine report
};

}  // namespace kronsample
