#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dualstop/payoff.hpp"
#include "dualstop/sde.hpp"
#include "dualstop/sieve_basis.hpp"
#include "dualstop/time_grid.hpp"

namespace dualstop {

// Martingale increments grouped into observation blocks so that
//   M_{e_k}(beta) = sum_{k' <= k} sum_q beta_q * block(j, k')[q].
// Block k sums the per-step contributions
//   sigma^i(u_l, X_l) * phi_q(u_l, X_l) * (W^i_{l+1} - W^i_l)
// over steps e_{k-1} <= l < e_k (with e_{-1} = 0), where i owns feature q.
// Observing every grid index yields one block per step (block 0 is empty).
class IncrementTensor {
 public:
  IncrementTensor(std::size_t paths, std::vector<std::size_t> observation,
                  std::size_t features);

  std::size_t paths() const { return paths_; }
  std::size_t blocks() const { return observation_.size(); }
  std::size_t features() const { return features_; }
  std::span<const std::size_t> observation_indices() const { return observation_; }

  // blocks() x features() values of path j.
  std::span<const double> path_blocks(std::size_t j) const;
  std::span<double> path_blocks(std::size_t j);

 private:
  std::size_t paths_;
  std::vector<std::size_t> observation_;
  std::size_t features_;
  std::vector<double> data_;
};

// Turns one simulated path into its observation blocks. Holds scratch
// buffers; one instance per thread.
class IncrementKernel {
 public:
  IncrementKernel(const SdeModel& model, const TimeGrid& grid,
                  const BasisSpec& basis, std::vector<std::size_t> observation);

  std::size_t blocks() const { return observation_.size(); }
  std::size_t features() const { return features_.feature_count(); }
  std::span<const std::size_t> observation_indices() const { return observation_; }

  // states: (S+1) x d, increments: S x d, blocks out: blocks() x features().
  void accumulate(std::span<const double> states, std::span<const double> increments,
                  std::span<double> blocks);

 private:
  const SdeModel* model_;
  const TimeGrid* grid_;
  FeatureMap features_;
  std::vector<std::size_t> observation_;
  std::vector<double> sigma_;
  std::vector<double> phi_;
};

// Validates an observation index set against a grid (ascending, distinct, in
// range). An empty set selects every grid index.
std::vector<std::size_t> normalize_observation(std::span<const std::size_t> observation,
                                               const TimeGrid& grid);

IncrementTensor build_increments(const PathBatch& paths, const BasisSpec& basis,
                                 const SdeModel& model,
                                 std::span<const std::size_t> observation = {});

// Cumulative martingale values, paths() x blocks(), at the observation
// indices. At grid index 0 the value is exactly 0.
std::vector<double> eval_martingale(const IncrementTensor& tensor,
                                    std::span<const double> beta);

// Per-path inputs of the dual objective: increment blocks and discounted
// payoffs at the observation indices.
struct PathView {
  std::span<const double> blocks;   // E x Q
  std::span<const double> payoffs;  // E
};

struct PathScratch {
  std::vector<double> states;
  std::vector<double> increments;
  std::vector<double> blocks;
  std::vector<double> payoffs;
  std::optional<IncrementKernel> kernel;
};

class PathSource {
 public:
  virtual ~PathSource() = default;
  virtual std::size_t paths() const = 0;
  virtual std::size_t observations() const = 0;
  virtual std::size_t features() const = 0;
  // The returned spans stay valid until scratch is reused.
  virtual PathView path(std::size_t j, PathScratch& scratch) const = 0;
};

// Everything needed to generate dual-objective inputs for a path.
struct PathModel {
  SdeModel model;
  TimeGrid grid;
  BasisSpec basis;
  PayoffSpec payoff;
  std::vector<std::size_t> observation;  // exercise indices
};

// Precomputed tensor plus payoff table.
class MaterializedPaths final : public PathSource {
 public:
  MaterializedPaths(IncrementTensor tensor, std::vector<double> payoffs);
  // Simulates count Euler paths and materializes their inputs.
  static MaterializedPaths simulate(const PathModel& pm, std::size_t count,
                                    NoiseKey noise);

  std::size_t paths() const override { return tensor_.paths(); }
  std::size_t observations() const override { return tensor_.blocks(); }
  std::size_t features() const override { return tensor_.features(); }
  PathView path(std::size_t j, PathScratch& scratch) const override;

  const IncrementTensor& tensor() const { return tensor_; }
  std::span<const double> payoffs() const { return payoffs_; }

 private:
  IncrementTensor tensor_;
  std::vector<double> payoffs_;
};

// Regenerates each path from its counter-based noise on every visit.
class StreamingPaths final : public PathSource {
 public:
  StreamingPaths(const PathModel& pm, std::size_t count, NoiseKey noise);

  std::size_t paths() const override { return count_; }
  std::size_t observations() const override { return pm_->observation.size(); }
  std::size_t features() const override { return pm_->basis.feature_count(); }
  PathView path(std::size_t j, PathScratch& scratch) const override;

 private:
  const PathModel* pm_;
  std::size_t count_;
  NoiseKey noise_;
};

// Simulates path j of (pm, noise) and fills its observation blocks and
// payoffs in scratch.
PathView generate_path(const PathModel& pm, NoiseKey noise, std::uint64_t j,
                       PathScratch& scratch);

}  // namespace dualstop
