#include "qdm/modulation.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace qdm {

PskConfig::PskConfig(int order, double symbol_energy)
    : order_(order), symbol_energy_(symbol_energy) {
  if (order < 2 || !std::has_single_bit(static_cast<unsigned>(order))) {
    throw std::domain_error("PskConfig: order must be a power of two >= 2");
  }
  if (!std::isfinite(symbol_energy) || symbol_energy <= 0.0) {
    throw std::domain_error("PskConfig: symbol energy must be positive and finite");
  }
}

Phase psk_map(int symbol_index, const PskConfig& cfg) {
  if (symbol_index < 0 || symbol_index >= cfg.order()) {
    throw std::domain_error("psk_map: symbol index out of range");
  }
  // index/order is exact for power-of-two orders.
  return Phase(two_pi * (static_cast<double>(symbol_index) / cfg.order()));
}

Phase phase_doppler_of_position(double x_m, const WaveConfig& wave) {
  if (!std::isfinite(x_m) || x_m <= 0.0) {
    throw std::domain_error("phase_doppler_of_position: position must be positive");
  }
  return Phase(wave.wavenumber_rad_per_m() * x_m);
}

Phase required_phase_doppler(Phase axial_phase, Phase broadside_phase) {
  return Phase(axial_phase.radians() - broadside_phase.radians());
}

ElementSelection select_element(Phase target_phase_doppler, const ArrayConfig& array) {
  int best_index = 1;
  Phase best_phase;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= array.n_elements(); ++n) {
    const Phase achieved = phase_doppler_of_position(array.position_m(n), array.wave());
    const double dist = circular_distance(achieved, target_phase_doppler);
    if (dist < best_dist) {  // strict: ties keep the smallest index
      best_dist = dist;
      best_index = n;
      best_phase = achieved;
    }
  }
  return ElementSelection{best_index, best_phase, best_dist};
}

JointPhaseSymbol make_joint_phase_symbol(Phase axial_phase, Phase broadside_phase) {
  return JointPhaseSymbol{axial_phase, broadside_phase,
                          required_phase_doppler(axial_phase, broadside_phase)};
}

TxAssignment modulate_joint(int sym_axial, int sym_broadside, const PskConfig& psk_axial,
                            const PskConfig& psk_broadside, const ArrayConfig& array) {
  const Phase source_phase = psk_map(sym_broadside, psk_broadside);
  const Phase target = required_phase_doppler(psk_map(sym_axial, psk_axial), source_phase);
  const ElementSelection sel = select_element(target, array);
  return TxAssignment{
      sel.element_index,
      source_phase,
      sel.achieved_phase_doppler,
      source_phase + sel.achieved_phase_doppler,
      sel.quantization_error_rad,
  };
}

}  // namespace qdm
