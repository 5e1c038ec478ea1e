#pragma once

#include <cstddef>
#include <vector>

#include "engel/projections.hpp"
#include "engel/types.hpp"

namespace engel {

// Inner window [a, b] with collar width delta on both sides.
struct BlendWindow {
    double a = 0, b = 0;
    double delta = 0;
};

// Adjacent pair of kinks with cancelling areas +A / -A.
struct AreaController {
    KinkSpec plus;
    KinkSpec minus;
    std::size_t plus_index = 0;   // indices into Front::kinks
    std::size_t minus_index = 0;
    double base_area = 0;
};

struct SelfTangencyConfig {
    double position_tol = 1e-4;
    double slope_tol = 1e-3;
    double param_separation = 0.05;
    double y_sep_tol = 1e-6;
};

// Lemma-style local surgery: on [a, b] replace (z, y) by the Lagrangian lift
// of the input's (x, w) seeded at (z(a), y(a)); blend back to the input over
// the collars with a C-infinity partition of unity; bit-identical outside
// [a - delta, b + delta].
DiscreteCurve make_engel_near(const DiscreteCurve& c, const BlendWindow& window,
                              double tol = 1e-3);

// Replace a front segment by a loop template with prescribed signed area and
// slope excursion; C^1 match at both ends, unchanged outside the segment.
Front insert_kink(const Front& f, const KinkSpec& spec, bool allow_nested = false);

// Rescale a previously inserted loop so its slope range covers
// [-|target_slope|, |target_slope|]; the resulting area change is recorded in
// the kink's area_drift field.
Front enlarge_wrinkle(const Front& f, const KinkSpec& kink, double target_slope);

// Insert two adjacent kinks with areas +A and -A; the net change of the
// integral of z dx over the modified region is zero.
std::pair<Front, AreaController> insert_area_controller(const Front& f, double at,
                                                        double A, double width);

// Retune controller i to the pair (A + targets[i], -A).  Capacity is
// |target| <= max_area_ratio * A.
Front tune_area_controllers(const Front& f,
                            const std::vector<AreaController>& controllers,
                            const std::vector<double>& targets,
                            double max_area_ratio = 10.0);

// True iff every detected front self-tangency has y-values differing by more
// than the configured tolerance.
bool self_tangency_y_separation(const Front& f, const std::vector<double>& y_values,
                                const SelfTangencyConfig& cfg = {});

// Signed area of z dx over the samples of a front segment [ja, jb] (helper
// shared with the tests' quadrature oracles).
double front_segment_area(const Front& f, std::size_t ja, std::size_t jb);

}  // namespace engel
