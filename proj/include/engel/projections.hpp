#pragma once

#include <utility>
#include <vector>

#include "engel/types.hpp"

namespace engel {

// Minimum |x'| (model units per unit parameter) for a front to count as
// graphical; w = z'/x' must stay well conditioned.
inline constexpr double kMinXSlope = 1e-3;

// (x, z, w) shadow of a Darboux curve: image of the Geiges projection.
struct GeigesCurve {
    std::vector<double> x, z, w;
    std::vector<double> params;
    bool closed = false;
    std::size_t size() const { return x.size(); }
};

// Parametrized Reidemeister-I loop in the front.
struct KinkSpec {
    double center = 0;  // parameter
    double width = 0;   // parameter half-width of the support
    double height = 0;  // slope extent of the loop (w-excursion = height/width)
    double area = 0;    // signed contribution to the integral of z dx
};

// Surgery bookkeeping attached to a Front: the support of one inserted kink
// together with the base samples it replaced (needed for re-synthesis).
struct FrontKink {
    KinkSpec spec;
    std::size_t ja = 0, jb = 0;       // inclusive sample range of the support
    std::vector<double> base_x;       // original samples over [ja, jb]
    std::vector<double> base_z;
    double area_drift = 0;            // area change left by enlarge_wrinkle
    bool nested = false;
};

// (x, z) front of the Geiges projection.
struct Front {
    std::vector<double> x, z;
    std::vector<double> params;
    bool closed = false;
    std::vector<FrontKink> kinks;  // supports of inserted kinks, in order
    std::size_t size() const { return x.size(); }
};

// (x, w) Lagrangian-plane shadow.
struct LagrangianPlaneCurve {
    std::vector<double> x, w;
    std::vector<double> params;
    bool closed = false;
    std::size_t size() const { return x.size(); }
};

GeigesCurve geiges_project(const DiscreteCurve& c);
Front front_project(const GeigesCurve& g);
LagrangianPlaneCurve lagrangian_project(const GeigesCurve& g);

// w = z'/x' by finite differences, y by cumulative trapezoidal integration
// of z dx from (t0, y0).  Requires a graphical front: |x'| >= min_x_slope.
DiscreteCurve front_lift(const Front& f, double y0, double t0,
                         double min_x_slope = kMinXSlope);

// z = z0 + int w dx, then y = y0 + int z dx, both cumulative trapezoidal
// from t0; works for arbitrary immersed (x, w) curves.
DiscreteCurve lagrangian_lift(const LagrangianPlaneCurve& l, double z0, double y0,
                              double t0);

// Holonomy obstructions of the lift recipe around a closed (x, w) curve:
// dz = loop integral of w dx; dy = loop integral of z dx with the z-lift
// seeded at z0.  dy is canonical only when dz = 0.
std::pair<double, double> closure_defects(const LagrangianPlaneCurve& l, double z0);

// Endpoint gap of a lifted closed curve: how far the periodic continuation
// of (z, y) lands from the seed values.
std::pair<double, double> lift_closure_gap(const LagrangianPlaneCurve& l,
                                           double z0, double y0);

}  // namespace engel
