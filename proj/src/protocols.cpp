#include "irsfso/protocols.hpp"

#include <cmath>
#include <stdexcept>

namespace irsfso {

namespace {

PhaseProfile make_profile(ProfileKind kind, const LinkGeometry& owner_link,
                          const Vec3& r_qt, const BeamParams& beam) {
    if (kind == ProfileKind::kLinear)
        return lp_profile(owner_link.ls, owner_link.pd, r_qt, owner_link.r_l0.x);
    const IncidentBeamFrame frame =
        incident_frame(beam, owner_link.ls, owner_link.r_l0);
    return qp_profile(owner_link.ls, owner_link.pd, frame, r_qt);
}

Tile make_tile(const Vec3& center, double lx, double ly, int owner,
               const LinkGeometry& owner_link, ProfileKind kind,
               const BeamParams& beam, double zeta0) {
    Tile t;
    t.center = center;
    t.lx = lx;
    t.ly = ly;
    t.assigned_pair = owner;
    t.zeta0 = zeta0;
    t.zeta_bar = passivity_factor(owner_link.pd.theta);
    t.profile = make_profile(kind, owner_link, center, beam);
    return t;
}

}  // namespace

ProtocolAssignment build_assignment(ProtocolKind kind,
                                    const std::vector<LinkGeometry>& links,
                                    const IrsLayout& layout, ProfileKind profile,
                                    const BeamParams& beam, double zeta0) {
    const int n = static_cast<int>(links.size());
    if (n < 1) throw std::invalid_argument("build_assignment: no links");
    if (!(zeta0 > 0.0) || zeta0 > 1.0)
        throw std::invalid_argument("build_assignment: zeta0 must be in (0, 1]");

    ProtocolAssignment a;
    a.kind = kind;
    a.profile = profile;
    a.num_pairs = n;
    a.links = links;

    switch (kind) {
        case ProtocolKind::kTd: {
            // Whole surface, beams and lenses on the surface center; one slot
            // per pair with the surface re-phased for it.
            for (auto& l : a.links) {
                l.r_l0 = Vec3{};
                l.r_p0 = Vec3{};
            }
            for (int s = 0; s < n; ++s) {
                SlotConfig slot;
                slot.tiles.push_back(make_tile(Vec3{}, layout.total_lx,
                                               layout.total_ly, s, a.links[s],
                                               profile, beam, zeta0));
                slot.owner.push_back(s);
                slot.active_pairs.push_back(s);
                a.slots.push_back(std::move(slot));
            }
            break;
        }
        case ProtocolKind::kIrsd: {
            if (layout.qx * layout.qy != n)
                throw std::invalid_argument(
                    "build_assignment: IRSD needs exactly one tile per pair");
            SlotConfig slot;
            for (int m = 0; m < n; ++m) {
                a.links[m].r_l0 = layout.centers[m];
                a.links[m].r_p0 = layout.centers[m];
            }
            for (int m = 0; m < n; ++m) {
                slot.tiles.push_back(make_tile(layout.centers[m], layout.tile_lx,
                                               layout.tile_ly, m, a.links[m],
                                               profile, beam, zeta0));
                slot.owner.push_back(m);
                slot.active_pairs.push_back(m);
            }
            a.slots.push_back(std::move(slot));
            break;
        }
        case ProtocolKind::kIrsh: {
            if (layout.qx * layout.qy < 4 * n)
                throw std::invalid_argument(
                    "build_assignment: IRSH needs at least four tiles per pair");
            // Nominal footprint centers: the N-way split of the surface along
            // x. Tiles go to the nearest nominal center (ties to the lower
            // pair index); actual beams and lenses aim at the surface center.
            std::vector<Vec3> nominal(n);
            const double pitch = layout.total_lx / n;
            for (int m = 0; m < n; ++m)
                nominal[m] = Vec3{(m - 0.5 * (n - 1)) * pitch, 0.0, 0.0};
            for (auto& l : a.links) {
                l.r_l0 = Vec3{};
                l.r_p0 = Vec3{};
            }
            SlotConfig slot;
            for (const Vec3& c : layout.centers) {
                int best = 0;
                double best_d = (c - nominal[0]).norm();
                for (int m = 1; m < n; ++m) {
                    const double d = (c - nominal[m]).norm();
                    if (d < best_d - 1e-15) {
                        best = m;
                        best_d = d;
                    }
                }
                slot.tiles.push_back(make_tile(c, layout.tile_lx, layout.tile_ly,
                                               best, a.links[best], profile, beam,
                                               zeta0));
                slot.owner.push_back(best);
            }
            for (int m = 0; m < n; ++m) slot.active_pairs.push_back(m);
            a.slots.push_back(std::move(slot));
            break;
        }
    }
    return a;
}

ProtocolAssignment apply_misalignment(const ProtocolAssignment& assign, int pair,
                                      const Vec3& offset) {
    if (pair < 0 || pair >= assign.num_pairs)
        throw std::out_of_range("apply_misalignment: pair index");
    ProtocolAssignment out = assign;
    out.links[pair].r_l0 = out.links[pair].r_l0 + offset;
    return out;
}

double protocol_gml(const ProtocolAssignment& assign, int slot, int m, int n,
                    const BeamParams& beam, int quad_n, bool enforce_regime) {
    if (slot < 0 || slot >= static_cast<int>(assign.slots.size()))
        throw std::out_of_range("protocol_gml: slot index");
    if (m < 0 || m >= assign.num_pairs || n < 0 || n >= assign.num_pairs)
        throw std::out_of_range("protocol_gml: pair index");
    const SlotConfig& sc = assign.slots[slot];
    bool active = false;
    for (int p : sc.active_pairs) active = active || (p == m);
    if (!active) return 0.0;

    LinkGeometry eval;
    eval.ls = assign.links[m].ls;
    eval.pd = assign.links[n].pd;
    eval.lens_radius = assign.links[n].lens_radius;
    eval.r_l0 = assign.links[m].r_l0;
    eval.r_p0 = assign.links[n].r_p0;
    return gml_lens_quadrature(eval, sc.tiles, beam, quad_n, enforce_regime);
}

std::vector<std::vector<double>> gain_matrix(const ProtocolAssignment& assign,
                                             int slot, const BeamParams& beam,
                                             int quad_n, bool enforce_regime) {
    std::vector<std::vector<double>> h(assign.num_pairs,
                                       std::vector<double>(assign.num_pairs, 0.0));
    for (int m = 0; m < assign.num_pairs; ++m)
        for (int n = 0; n < assign.num_pairs; ++n)
            h[m][n] = protocol_gml(assign, slot, m, n, beam, quad_n, enforce_regime);
    return h;
}

}  // namespace irsfso
