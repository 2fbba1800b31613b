#include "dualstop/martingale.hpp"

#include <algorithm>
#include <stdexcept>

#include "dualstop/parallel.hpp"

namespace dualstop {

IncrementTensor::IncrementTensor(std::size_t paths,
                                 std::vector<std::size_t> observation,
                                 std::size_t features)
    : paths_(paths),
      observation_(std::move(observation)),
      features_(features),
      data_(paths * observation_.size() * features, 0.0) {}

std::span<const double> IncrementTensor::path_blocks(std::size_t j) const {
  const std::size_t w = observation_.size() * features_;
  return std::span<const double>(data_).subspan(j * w, w);
}

std::span<double> IncrementTensor::path_blocks(std::size_t j) {
  const std::size_t w = observation_.size() * features_;
  return std::span<double>(data_).subspan(j * w, w);
}

std::vector<std::size_t> normalize_observation(std::span<const std::size_t> observation,
                                               const TimeGrid& grid) {
  std::vector<std::size_t> out(observation.begin(), observation.end());
  if (out.empty()) {
    out.resize(grid.size());
    for (std::size_t l = 0; l < out.size(); ++l) out[l] = l;
    return out;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (out[k] >= grid.size()) {
      throw std::invalid_argument("observation index beyond the grid");
    }
    if (k > 0 && out[k] <= out[k - 1]) {
      throw std::invalid_argument("observation indices must be ascending and distinct");
    }
  }
  return out;
}

IncrementKernel::IncrementKernel(const SdeModel& model, const TimeGrid& grid,
                                 const BasisSpec& basis,
                                 std::vector<std::size_t> observation)
    : model_(&model),
      grid_(&grid),
      features_(basis),
      observation_(normalize_observation(observation, grid)),
      sigma_(model.dimension()),
      phi_(basis.feature_count()) {
  if (basis.dimension != model.dimension()) {
    throw std::invalid_argument("basis and model dimensions differ");
  }
}

void IncrementKernel::accumulate(std::span<const double> states,
                                 std::span<const double> increments,
                                 std::span<double> blocks) {
  const std::size_t d = model_->dimension();
  const std::size_t q_total = phi_.size();
  const std::size_t per_dim = q_total / d;
  if (blocks.size() != observation_.size() * q_total) {
    throw std::invalid_argument("block buffer size mismatch");
  }
  std::fill(blocks.begin(), blocks.end(), 0.0);

  const std::size_t last = observation_.back();
  std::size_t k = 0;
  for (std::size_t l = 0; l < last; ++l) {
    while (observation_[k] <= l) ++k;
    const double u = grid_->time(l);
    std::span<const double> x = states.subspan(l * d, d);
    model_->diffusion(u, x, sigma_);
    features_.evaluate(u, x, phi_);
    double* block = blocks.data() + k * q_total;
    const double* dw = increments.data() + l * d;
    for (std::size_t i = 0; i < d; ++i) {
      const double scale = sigma_[i] * dw[i];
      const double* phi = phi_.data() + i * per_dim;
      double* dst = block + i * per_dim;
      for (std::size_t q = 0; q < per_dim; ++q) dst[q] += scale * phi[q];
    }
  }
}

IncrementTensor build_increments(const PathBatch& paths, const BasisSpec& basis,
                                 const SdeModel& model,
                                 std::span<const std::size_t> observation) {
  if (paths.dimension() != model.dimension() || basis.dimension != model.dimension()) {
    throw std::invalid_argument("path batch, basis and model dimensions differ");
  }
  IncrementTensor tensor(paths.count(), normalize_observation(observation, paths.grid()),
                         basis.feature_count());
  const std::vector<std::size_t> obs(tensor.observation_indices().begin(),
                                     tensor.observation_indices().end());
  for_each_chunk(paths.count(), kPathChunk,
                 [&](std::size_t, std::size_t begin, std::size_t end) {
                   IncrementKernel kernel(model, paths.grid(), basis, obs);
                   for (std::size_t j = begin; j < end; ++j) {
                     kernel.accumulate(paths.path_states(j), paths.path_increments(j),
                                       tensor.path_blocks(j));
                   }
                 });
  return tensor;
}

std::vector<double> eval_martingale(const IncrementTensor& tensor,
                                    std::span<const double> beta) {
  if (beta.size() != tensor.features()) {
    throw std::invalid_argument("coefficient vector length differs from feature count");
  }
  const std::size_t e = tensor.blocks();
  const std::size_t q_total = tensor.features();
  std::vector<double> out(tensor.paths() * e);
  for_each_chunk(tensor.paths(), kPathChunk,
                 [&](std::size_t, std::size_t begin, std::size_t end) {
                   for (std::size_t j = begin; j < end; ++j) {
                     const auto blocks = tensor.path_blocks(j);
                     double m = 0.0;
                     for (std::size_t k = 0; k < e; ++k) {
                       const double* b = blocks.data() + k * q_total;
                       double dm = 0.0;
                       for (std::size_t q = 0; q < q_total; ++q) dm += beta[q] * b[q];
                       m += dm;
                       out[j * e + k] = m;
                     }
                   }
                 });
  return out;
}

PathView generate_path(const PathModel& pm, NoiseKey noise, std::uint64_t j,
                       PathScratch& scratch) {
  const std::size_t d = pm.model.dimension();
  const std::size_t e = pm.observation.size();
  if (!scratch.kernel) {
    scratch.kernel.emplace(pm.model, pm.grid, pm.basis, pm.observation);
    scratch.states.resize(pm.grid.size() * d);
    scratch.increments.resize(pm.grid.steps() * d);
    scratch.blocks.resize(e * pm.basis.feature_count());
    scratch.payoffs.resize(e);
  }
  draw_increments(pm.grid, d, noise, j, scratch.increments);
  integrate_path(pm.model, pm.grid, Scheme::kEuler, scratch.increments, scratch.states);
  scratch.kernel->accumulate(scratch.states, scratch.increments, scratch.blocks);
  for (std::size_t k = 0; k < e; ++k) {
    const std::size_t l = pm.observation[k];
    scratch.payoffs[k] = eval_payoff(
        pm.payoff, pm.grid.time(l),
        std::span<const double>(scratch.states).subspan(l * d, d));
  }
  return {scratch.blocks, scratch.payoffs};
}

MaterializedPaths::MaterializedPaths(IncrementTensor tensor, std::vector<double> payoffs)
    : tensor_(std::move(tensor)), payoffs_(std::move(payoffs)) {
  if (payoffs_.size() != tensor_.paths() * tensor_.blocks()) {
    throw std::invalid_argument("payoff table does not match the tensor shape");
  }
}

MaterializedPaths MaterializedPaths::simulate(const PathModel& pm, std::size_t count,
                                              NoiseKey noise) {
  if (count < 1) throw std::invalid_argument("path count must be >= 1");
  const std::vector<std::size_t> obs = normalize_observation(pm.observation, pm.grid);
  if (obs != pm.observation) {
    throw std::invalid_argument("path model observation set must be explicit");
  }
  const std::size_t e = obs.size();
  IncrementTensor tensor(count, obs, pm.basis.feature_count());
  std::vector<double> payoffs(count * e);
  for_each_chunk(count, kPathChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    PathScratch scratch;
    for (std::size_t j = begin; j < end; ++j) {
      const PathView v = generate_path(pm, noise, j, scratch);
      std::copy(v.blocks.begin(), v.blocks.end(), tensor.path_blocks(j).begin());
      std::copy(v.payoffs.begin(), v.payoffs.end(), payoffs.begin() + j * e);
    }
  });
  return MaterializedPaths(std::move(tensor), std::move(payoffs));
}

PathView MaterializedPaths::path(std::size_t j, PathScratch&) const {
  const std::size_t e = tensor_.blocks();
  return {tensor_.path_blocks(j), std::span<const double>(payoffs_).subspan(j * e, e)};
}

StreamingPaths::StreamingPaths(const PathModel& pm, std::size_t count, NoiseKey noise)
    : pm_(&pm), count_(count), noise_(noise) {
  if (normalize_observation(pm.observation, pm.grid) != pm.observation) {
    throw std::invalid_argument("path model observation set must be explicit");
  }
}

PathView StreamingPaths::path(std::size_t j, PathScratch& scratch) const {
  return generate_path(*pm_, noise_, j, scratch);
}

}  // namespace dualstop
