#include "wsnsim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wsnsim/types.hpp"

namespace wsnsim {

double RadioParams::tx_power() const {
  return reception_threshold + 10.0 * path_loss_exponent * std::log10(radio_range / reference_distance);
}

void RadioParams::validate() const {
  if (!(path_loss_exponent >= 2.0)) throw ConfigError("path loss exponent must be >= 2");
  if (!(reference_distance > 0.0)) throw ConfigError("reference distance must be positive");
  if (!(radio_range > reference_distance)) throw ConfigError("radio range must exceed the reference distance");
  if (!(bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
  if (!std::isfinite(reception_threshold)) throw ConfigError("reception threshold must be finite");
}

double received_power(const RadioParams& params, double distance) {
  if (distance < 0.0 || std::isnan(distance)) throw std::invalid_argument("negative distance");
  const double d = std::max(distance, params.reference_distance);
  return params.tx_power() - 10.0 * params.path_loss_exponent * std::log10(d / params.reference_distance);
}

bool link_feasible(const RadioParams& params, double distance) {
  if (distance < 0.0 || std::isnan(distance)) throw std::invalid_argument("negative distance");
  return distance <= params.radio_range;
}

double frame_airtime(const RadioParams& params, std::uint64_t bits) {
  return static_cast<double>(bits) / params.bandwidth;
}

void EnergyCoefficients::validate() const {
  if (!(elec > 0.0) || !(amp > 0.0)) throw ConfigError("energy coefficients must be positive");
}

double tx_energy(const EnergyCoefficients& coeff, std::uint64_t bits, double distance) {
  const double b = static_cast<double>(bits);
  return coeff.elec * b + coeff.amp * b * distance * distance;
}

double rx_energy(const EnergyCoefficients& coeff, std::uint64_t bits) {
  return coeff.elec * static_cast<double>(bits);
}

std::int64_t joules_to_pj(double joules) { return std::llround(joules * 1e12); }

double pj_to_joules(std::int64_t pj) { return static_cast<double>(pj) * 1e-12; }

EnergyState::EnergyState(double initial_j, double threshold_j)
    : residual_pj_(joules_to_pj(initial_j)),
      initial_pj_(joules_to_pj(initial_j)),
      threshold_pj_(joules_to_pj(threshold_j)) {
  if (initial_j < 0.0 || threshold_j < 0.0) throw ConfigError("energy levels must be non-negative");
}

double EnergyState::residual() const { return pj_to_joules(residual_pj_); }
double EnergyState::initial() const { return pj_to_joules(initial_pj_); }
double EnergyState::threshold() const { return pj_to_joules(threshold_pj_); }
double EnergyState::consumed() const { return pj_to_joules(consumed_pj_); }

std::int64_t EnergyState::take(double joules) {
  if (joules < 0.0 || std::isnan(joules)) throw std::invalid_argument("negative energy amount");
  const std::int64_t taken = std::min(joules_to_pj(joules), residual_pj_);
  residual_pj_ -= taken;
  consumed_pj_ += taken;
  return taken;
}

void EnergyState::drain_to(double joules) {
  const std::int64_t target = std::clamp<std::int64_t>(joules_to_pj(joules), 0, residual_pj_);
  consumed_pj_ += residual_pj_ - target;
  residual_pj_ = target;
}

EnergyState deduct(EnergyState state, double amount) {
  state.take(amount);
  return state;
}

}  // namespace wsnsim
