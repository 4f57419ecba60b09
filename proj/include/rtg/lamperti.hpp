#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rtg/measure.hpp"
#include "rtg/random.hpp"

namespace rtg {

// Jumps of a pure-jump subordinator with Levy measure Lambda restricted to the
// simulated range. Proposals arrive at proposal_rate; propose() returns the jump
// size or nothing (thinning), so accepted jumps form a Poisson process with
// intensity Lambda.
struct JumpLaw {
  double proposal_rate = 0;
  std::function<std::optional<double>(Rng&)> propose;
  double neglected_drift = 0;  // int_{small jumps} y Lambda(dy), not compensated
  std::string describe;
};

JumpLaw single_atom_jumps(double y, double rate);
// Lambda = sum_i w_i delta_{y_i}
JumpLaw atom_jumps(std::vector<double> y, std::vector<double> w);
// Ordered-beta (alpha-theta) measure times `scale` (1 for kappa({1},{2}) = 1),
// jumps below the level where the neglected drift reaches drift_tol dropped.
JumpLaw ordered_beta_jumps(double alpha, double theta, double scale, double drift_tol = 1e-4);
// Atoms -log(1 - 1/j) with weight gamma j^(gamma-1), j >= first, cut where the
// neglected drift reaches drift_tol. Extra finite atoms are mixed in.
JumpLaw power_atom_jumps(double gamma, long first, double drift_tol = 1e-4, std::vector<double> extra_y = {},
                         std::vector<double> extra_w = {});
// Builds the jump law of -log|Gamma_1| under kappa for the supported variants.
JumpLaw jump_law_for(const DislocationMeasure& d, double drift_tol = 1e-4);

struct LampertiPath {
  std::vector<double> values;  // X at the requested times
  double absorption = 0;       // int_0^infty exp(-gamma xi_s) ds
  long jumps = 0;
};

// X_t = exp(-xi_{tau(t)}), tau(t) = inf{u : int_0^u exp(-gamma xi_s) ds > t}.
// Simulation stops once exp(-gamma xi) < stop; when psi_gamma > 0 the remaining
// integral is replaced by its mean exp(-gamma xi) / psi(gamma).
LampertiPath lamperti_path(const JumpLaw& law, double gamma, const std::vector<double>& times, Rng& rng,
                           double stop = 1e-6, double psi_gamma = 0);

}  // namespace rtg
