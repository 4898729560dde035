#pragma once

#include <cstdint>

namespace wsnsim {

/// Log-distance propagation. Transmit power is not a free parameter: it is
/// derived so that a receiver exactly `radio_range` away sees
/// `reception_threshold` dBm.
struct RadioParams {
  double path_loss_exponent = 2.0;
  double reference_distance = 1.0;     // m
  double reception_threshold = -80.0;  // dBm
  double radio_range = 350.0;          // m
  double bandwidth = 2'000'000.0;      // bit/s

  double tx_power() const;  // dBm
  void validate() const;
};

/// Throws std::invalid_argument for a negative distance.
double received_power(const RadioParams& params, double distance);

/// Received power at or above the threshold. Evaluated as
/// `distance <= radio_range`, which is the same predicate under calibration
/// and keeps the boundary exact.
bool link_feasible(const RadioParams& params, double distance);

double frame_airtime(const RadioParams& params, std::uint64_t bits);

/// First-order radio model coefficients.
struct EnergyCoefficients {
  double elec = 50e-9;  // J/bit
  double amp = 100e-12;  // J/bit/m^2

  void validate() const;
};

double tx_energy(const EnergyCoefficients& coeff, std::uint64_t bits, double distance);
double rx_energy(const EnergyCoefficients& coeff, std::uint64_t bits);

/// Battery of one node.
///
/// Stored as whole picojoules so the per-node ledger
/// `initial - residual == consumed` holds exactly after any number of
/// deductions.
class EnergyState {
 public:
  EnergyState() : EnergyState(10.0, 1.0e-6) {}
  EnergyState(double initial_j, double threshold_j);

  double residual() const;
  double initial() const;
  double threshold() const;
  double consumed() const;

  std::int64_t residual_pj() const { return residual_pj_; }
  std::int64_t initial_pj() const { return initial_pj_; }
  std::int64_t threshold_pj() const { return threshold_pj_; }
  std::int64_t consumed_pj() const { return consumed_pj_; }

  bool alive() const { return residual_pj_ >= threshold_pj_; }
  bool asleep() const { return !alive(); }

  /// Removes up to `joules` (clamped at zero). Returns the picojoules
  /// actually taken.
  std::int64_t take(double joules);

  /// Test hook: overwrite the residual, counting the difference as consumed.
  void drain_to(double joules);

  friend bool operator==(const EnergyState&, const EnergyState&) = default;

 private:
  std::int64_t residual_pj_ = 0;
  std::int64_t initial_pj_ = 0;
  std::int64_t threshold_pj_ = 0;
  std::int64_t consumed_pj_ = 0;
};

/// Value-semantics wrapper over EnergyState::take. Negative amounts throw
/// std::invalid_argument.
EnergyState deduct(EnergyState state, double amount);

std::int64_t joules_to_pj(double joules);
double pj_to_joules(std::int64_t pj);

}  // namespace wsnsim
