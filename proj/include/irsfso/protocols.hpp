#pragma once

#include "irsfso/channel.hpp"

#include <vector>

namespace irsfso {

enum class ProtocolKind { kTd, kIrsd, kIrsh };

// One configuration of the surface: which tiles carry which profiles, who
// owns them, and which pairs transmit. TD rebuilds the surface every slot;
// the spatial-division protocols hold a single static slot.
struct SlotConfig {
    std::vector<Tile> tiles;
    std::vector<int> owner;         // owning pair per tile
    std::vector<int> active_pairs;  // pairs transmitting during this slot
};

struct ProtocolAssignment {
    ProtocolKind kind = ProtocolKind::kIrsd;
    ProfileKind profile = ProfileKind::kLinear;
    int num_pairs = 0;
    // Per-pair nominal link with protocol footprint/lens centers installed.
    std::vector<LinkGeometry> links;
    std::vector<SlotConfig> slots;
};

// Builds the surface sharing for N = links.size() pairs:
//  - TD: the whole surface acts as one tile, reconfigured per slot for the
//    single active pair; beams and lenses aim at the surface center.
//  - IRSD: one tile per pair (layout must provide exactly N tiles); each
//    pair's beam footprint and lens boresight sit on its own tile center.
//  - IRSH: at least 4N tiles; every tile is owned by the pair whose nominal
//    footprint center (the N-way split of the surface) is nearest, ties to
//    the lower pair index. Beams and lenses aim at the surface center.
// Tile profiles are built from the owner's geometry; zeta_bar carries the
// passivity factor of the owner's detector angle.
ProtocolAssignment build_assignment(ProtocolKind kind,
                                    const std::vector<LinkGeometry>& links,
                                    const IrsLayout& layout, ProfileKind profile,
                                    const BeamParams& beam, double zeta0 = 1.0);

// Shifts pair's beam footprint by offset without touching any tile profile:
// the surface keeps serving the stale configuration, which is exactly the
// misalignment experiment.
ProtocolAssignment apply_misalignment(const ProtocolAssignment& assign, int pair,
                                      const Vec3& offset);

// Lens-captured power ratio (GML) from LS m into PD n for one slot, summing
// the closed-form fields of every tile of that slot over PD n's lens.
// Returns 0 when pair m does not transmit in the slot.
double protocol_gml(const ProtocolAssignment& assign, int slot, int m, int n,
                    const BeamParams& beam, int quad_n = 120,
                    bool enforce_regime = true);

// Full gain matrix of a slot: entry [m][n] as above.
std::vector<std::vector<double>> gain_matrix(const ProtocolAssignment& assign,
                                             int slot, const BeamParams& beam,
                                             int quad_n = 120,
                                             bool enforce_regime = true);

}  // namespace irsfso
