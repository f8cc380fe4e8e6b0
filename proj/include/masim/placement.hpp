#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "masim/beamforming.hpp"
#include "masim/channel.hpp"
#include "masim/config.hpp"
#include "masim/rng.hpp"
#include "masim/types.hpp"

namespace masim {

// M^2 sampling points p_{i,j} = [-A/2 + iA/M, -A/2 + jA/M], i,j in 1..M,
// stored row-major with i outer (lexicographic (i, j) order).
class SamplingGrid {
 public:
  SamplingGrid(double region_size, int m);

  int m() const { return m_; }
  double spacing() const { return region_size_ / m_; }
  double region_size() const { return region_size_; }
  const std::vector<Vec2>& points() const { return points_; }
  // i, j in 1..M.
  const Vec2& point(int i, int j) const {
    return points_[static_cast<size_t>((i - 1) * m_ + (j - 1))];
  }

 private:
  double region_size_;
  int m_;
  std::vector<Vec2> points_;
};

// Per-grid-point channel entries for every receiver (0 = SR, 1..K = PRs).
// Moving one antenna only changes one entry of each channel vector, so a
// candidate evaluation reduces to K+1 complex multiply-adds.
class PointChannelTable {
 public:
  PointChannelTable(const SamplingGrid& grid, const Scenario& sc,
                    double wavelength);
  cplx entry(int receiver, size_t point_index) const {
    return entries_[static_cast<size_t>(receiver)][point_index];
  }
  int receivers() const { return static_cast<int>(entries_.size()); }

 private:
  std::vector<std::vector<cplx>> entries_;
};

// Feasible sampling points for moving antenna n: grid points at least D_min
// away from every other antenna.
std::vector<Vec2> feasible_points(const SamplingGrid& grid, const Apv& apv,
                                  int moving_index);

struct SearchStats {
  long candidates_evaluated = 0;  // total grid points enumerated
  long candidates_per_sweep = 0;  // N * M^2 by construction
  int sweeps = 0;
  bool moved = false;
  bool constraint_stuck = false;  // an incumbent was IT-infeasible and no
                                  // feasible candidate existed
};

// Per-antenna enumeration over the sampling grid maximizing |h0^H w|^2
// under the IT constraints, swept until no antenna moves or cfg.max_sweeps.
// Ties keep the incumbent; among new ties the lexicographically first grid
// point wins. Requires (w, apv0) feasible.
Apv sequential_search(const Apv& apv0, const Beamformer& w,
                      const Scenario& scenario, const ScenarioConfig& cfg,
                      SearchStats* stats = nullptr,
                      const PointChannelTable* table = nullptr,
                      const SamplingGrid* grid = nullptr);

// Centered uniform layout with exact lambda/2 nearest-neighbor spacing,
// near-square, row-major fill.
Apv fpa_layout(const ScenarioConfig& cfg);

// Re-optimizes the beamformer for a candidate APV; warm may be null. Must
// return a power- and IT-feasible beamformer for that APV.
using BeamformerCallback =
    std::function<Beamformer(const Apv&, const Beamformer* warm)>;

struct PsoResult {
  Apv apv;
  Beamformer w;
  SolveReport report;
};

// Continuous-space PSO over antenna positions. Candidates are clamped to
// the region and repaired by greedy pairwise displacement to restore D_min;
// IT-infeasible candidates score -inf. The beamformer is refreshed through
// w_update either per candidate evaluation or once per round
// (cfg.pso_sca_per_candidate).
PsoResult pso_optimize(const BeamformerCallback& w_update,
                       const Scenario& scenario, const ScenarioConfig& cfg,
                       Rng& rng);

}  // namespace masim
