#pragma once

#include <span>
#include <vector>

#include "lagscan/model.hpp"
#include "lagscan/similarity.hpp"

namespace lagscan {

/// Groups consecutive pairs scoring >= threshold into maximal static runs.
/// A run of pairs (i,i+1)..(j-1,j) yields StaticRun[f_start=i, f_end=j];
/// the first unchanged frame opens the run. `pts` is the per-frame PTS of
/// the screencast the scores came from and supplies run durations.
std::vector<StaticRun> extract_static_runs(std::span<const PairScore> scores, double threshold,
                                           std::span<const double> pts);

/// Convenience overload pulling PTS from the screencast.
std::vector<StaticRun> extract_static_runs(std::span<const PairScore> scores, double threshold,
                                           const Screencast& cast);

} // namespace lagscan
