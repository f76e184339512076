#ifndef LIISS_CORE_TRAJECTORY_HPP
#define LIISS_CORE_TRAJECTORY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace liiss {

// Sampled solution record shared by the ODE and PDE simulators.
// `states` is sample-major (dim entries per sample).  `input_energy`
// holds the running input-energy integral on the same time grid; the
// simulators define its integrand.  PDE runs additionally carry the
// spatial grid, an auxiliary norm series, and solution snapshots.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> states;
  size_t dim = 0;
  std::vector<double> norms;
  std::vector<double> input_energy;
  std::optional<double> blow_up_time;

  std::vector<double> grid;
  std::vector<double> aux_norms;
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;

  size_t size() const { return times.size(); }

  std::span<const double> state(size_t i) const {
    return {states.data() + i * dim, dim};
  }

  double final_norm() const { return norms.empty() ? 0.0 : norms.back(); }

  double sup_norm() const {
    double m = 0.0;
    for (double v : norms) m = v > m ? v : m;
    return m;
  }
};

}  // namespace liiss

#endif
