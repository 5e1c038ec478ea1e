#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "engel/types.hpp"

namespace engel {

// Curve in (R^3, ker{dz - y dx}).
struct LegendrianCurve {
    std::vector<double> x, y, z;
    std::vector<double> params;
    bool closed = false;
    std::size_t size() const { return x.size(); }
    void validate() const;
};

struct StabilizationRecord {
    int count_plus = 0;
    int count_minus = 0;
    std::vector<double> locations;
    int total() const { return count_plus + count_minus; }
};

struct LegendrianDefect {
    std::vector<double> residuals;  // per-sample |z' - y x'|
    double max_residual = 0;
};

LegendrianDefect legendrian_defect(const LegendrianCurve& c);

// z recovered as the action integral of y dx from (t0, z0).
LegendrianCurve action_lift(const std::vector<double>& x, const std::vector<double>& y,
                            const std::vector<double>& params, bool closed,
                            double z0, double t0);

// Insert one loop of signed area `area_change` (the change of the integral of
// y dx over the support) whose orientation adds `sign` to the rotation
// number; z is re-lifted locally from the action.
std::pair<LegendrianCurve, StabilizationRecord> stabilize(
    const LegendrianCurve& c, double at, int sign, double area,
    double width = 0.02, const StabilizationRecord& prior = {});

// Winding number of the planar tangent (x', y') around 0.
int rotation_number(const LegendrianCurve& c);

// Parametric Fuchs-Tabachnikov step at desk scale: stabilization pairs as
// area controllers, tuned to kill the z-closure defect, then action re-lift.
std::pair<LegendrianCurve, StabilizationRecord> legendrize(
    const LegendrianCurve& c, double eps, double eta);

}  // namespace engel
