#pragma once

#include "qdm/core.hpp"

namespace qdm {

/// M-ary PSK constellation: M must be a power of two >= 2 and the symbol
/// energy positive.
class PskConfig {
 public:
  PskConfig(int order, double symbol_energy);

  int order() const { return order_; }
  double symbol_energy() const { return symbol_energy_; }

 private:
  int order_;
  double symbol_energy_;
};

/// Phase of constellation point `symbol_index`: 2*pi*k/M on the uniform
/// grid. Throws std::domain_error when the index is outside 0..M-1.
Phase psk_map(int symbol_index, const PskConfig& cfg);

/// Phase imparted toward the axial receiver by radiating from a source
/// offset x > 0 along the array: K * x, wrapped.
Phase phase_doppler_of_position(double x_m, const WaveConfig& wave);

/// Phase-Doppler offset that turns the broadside phase into the desired
/// axial phase: (axial - broadside) mod 2*pi. Satisfies
/// broadside + result == axial on the canonical branch.
Phase required_phase_doppler(Phase axial_phase, Phase broadside_phase);

struct ElementSelection {
  int element_index;  // 1-based
  Phase achieved_phase_doppler;
  double quantization_error_rad;  // circular distance to the target
};

/// Picks the array element whose phase-Doppler is circularly closest to
/// the target; ties go to the smallest element index.
ElementSelection select_element(Phase target_phase_doppler, const ArrayConfig& array);

/// Desired phase pair for one symbol together with the exact offset that
/// links them.
struct JointPhaseSymbol {
  Phase axial_phase;
  Phase broadside_phase;
  Phase phase_doppler;
};

JointPhaseSymbol make_joint_phase_symbol(Phase axial_phase, Phase broadside_phase);

/// One symbol's transmit decision: the element that carries it, the phase
/// fed to the source, and what actually arrives on the axial side.
struct TxAssignment {
  int element_index;  // 1-based
  Phase source_phase;            // broadside stream phase, applied at the source
  Phase achieved_phase_doppler;  // K * x of the chosen element
  Phase achieved_axial_phase;    // source_phase + achieved_phase_doppler
  double quantization_error_rad;
};

/// Maps a symbol pair onto a transmit decision: the broadside stream sets
/// the source phase, the axial stream picks the element. The achieved
/// axial phase differs from the ideal constellation point by exactly the
/// quantization error.
TxAssignment modulate_joint(int sym_axial, int sym_broadside, const PskConfig& psk_axial,
                            const PskConfig& psk_broadside, const ArrayConfig& array);

}  // namespace qdm
