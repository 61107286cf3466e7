#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holspec/domain.hpp"
#include "holspec/exponents.hpp"
#include "holspec/norms.hpp"
#include "holspec/potential.hpp"

namespace holspec {

// which branch of a = min(delta, c0 max(h, c1 delta)^{1/gamma}) produced a
enum class AKind { CuboidDelta, CuboidC0H, GraphCapped, InteriorCube };
// which selection rule produced delta
enum class CaseTag { Interior, Case1, Case2, Case3 };

struct OscillatoryDomain {
    Point center;
    double delta = 0.0;
    double a = 0.0;
    AKind kind = AKind::InteriorCube;
    CaseTag case_tag = CaseTag::Interior;
    double h_center = 0.0;  // meaningless for interior cubes off the chart

    Rect rect() const {
        return Rect{center.x - 0.5 * a, center.x + 0.5 * a, center.y - 0.5 * delta,
                    center.y + 0.5 * delta};
    }
};

enum class CoverRegion { Boundary, Interior, Full };

struct CoverConfig {
    double theta_interior = 1.0;  // implied "~1" constants, exposed as knobs
    double theta_case2 = 1.0;
    double theta_case3 = 1.0;
    int quad_res = 1;
    double probe_dx = 0.0;  // 0 = automatic from delta0 and the smallest a
    double probe_dy = 0.0;
    std::int64_t max_probes = 4'000'000;
    std::int64_t guard_factor = 64;  // abort after guard_factor * delta0^{-d} picks
};

struct Family {
    CaseTag klass_example = CaseTag::Interior;  // informational
    std::vector<std::int32_t> members;
};

struct CoverFamilies {
    std::vector<OscillatoryDomain> domains;
    std::vector<Family> families;  // disjointness holds within each family
    double delta0 = 0.0;
    CoverRegion region = CoverRegion::Full;
    double probe_dx = 0.0, probe_dy = 0.0;         // grids used by the construction
    double probe_dx_bdry = 0.0, probe_dy_bdry = 0.0;
    std::int64_t probe_count = 0;

    int k_used() const { return int(families.size()); }
};

struct DeltaSelection {
    double delta = 0.0;
    CaseTag tag = CaseTag::Interior;
    AKind kind = AKind::InteriorCube;
    double a = 0.0;
    double lhs = 0.0;  // the norm quantity that drove the selection
    double rhs = 0.0;  // the threshold it was balanced against
};

struct CoverReport {
    bool pairwise_disjoint = true;
    double coverage_fraction = 0.0;
    int k_used = 0;
    std::int64_t j_interior = 0, j_case1 = 0, j_case2 = 0, j_case3 = 0;
    std::int64_t total() const { return j_interior + j_case1 + j_case2 + j_case3; }
};

struct GeometryCheck {
    bool cuboid_contained = true;      // (i), cuboid kinds only
    bool h_ratio_ok = true;            // (iii), a = c0 h^{1/gamma}
    bool h_shift_ok = true;            // (iv), a = c2 delta^{1/gamma}
    double seminorm_ratio = 0.0;       // (v): |V|_{ptilde,beta,D}^p / (max(h,c1 d)^-beta |V|_{ptilde,D}^p)
    std::optional<Point> witness;
    std::string note;
};

OscillatoryDomain make_oscillatory_domain(const HolderSubgraphDomain& dom, Point x, double delta,
                                          const ExponentSet& es);

DeltaSelection select_delta(const HolderSubgraphDomain& dom, const PotentialField& V, Point x,
                            double delta0, const ExponentSet& es, const CoverConfig& cfg = {});

CoverFamilies greedy_cover(const HolderSubgraphDomain& dom, const PotentialField& V,
                           double delta0, const ExponentSet& es,
                           CoverRegion region = CoverRegion::Full, const CoverConfig& cfg = {});

// exact pairwise-disjointness within families plus probe-grid coverage
CoverReport verify_cover(const CoverFamilies& cf, const HolderSubgraphDomain& dom);

double count_vs_bound(const CoverFamilies& cf, double delta0, int d);

GeometryCheck local_geometry_checks(const OscillatoryDomain& od, const HolderSubgraphDomain& dom,
                                    const ExponentSet& es, const PotentialField* V = nullptr,
                                    int quad_res = 1);

// the explicit spectral lower-bound constant (1/2K) sum_D (1/|D|) int_D |4K V|
struct AveragedBound {
    double value = 0.0;
    bool divergent = false;
};
AveragedBound averaged_potential_lower_bound(const CoverFamilies& cf, const PotentialField& V,
                                             const HolderSubgraphDomain& dom, int quad_res = 1);

// true when the two oscillatory domains overlap inside Omega (exact test)
bool domains_intersect(const OscillatoryDomain& a, const OscillatoryDomain& b,
                       const HolderSubgraphDomain& dom);

}  // namespace holspec
