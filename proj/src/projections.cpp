#include "engel/projections.hpp"

#include <cmath>

#include "engel/numerics.hpp"
#include "engel/surgery.hpp"

namespace engel {

GeigesCurve geiges_project(const DiscreteCurve& c) {
    GeigesCurve g;
    g.closed = c.closed;
    g.params = c.params;
    g.x.reserve(c.size());
    g.z.reserve(c.size());
    g.w.reserve(c.size());
    for (const auto& p : c.samples) {
        g.x.push_back(p.x);
        g.z.push_back(p.z);
        g.w.push_back(p.w);
    }
    return g;
}

Front front_project(const GeigesCurve& g) {
    Front f;
    f.closed = g.closed;
    f.params = g.params;
    f.x = g.x;
    f.z = g.z;
    return f;
}

LagrangianPlaneCurve lagrangian_project(const GeigesCurve& g) {
    LagrangianPlaneCurve l;
    l.closed = g.closed;
    l.params = g.params;
    l.x = g.x;
    l.w = g.w;
    return l;
}

namespace {

std::size_t index_at_param(const std::vector<double>& params, double t0) {
    std::size_t best = 0;
    double d = std::abs(params[0] - t0);
    for (std::size_t j = 1; j < params.size(); ++j) {
        const double dj = std::abs(params[j] - t0);
        if (dj < d) {
            d = dj;
            best = j;
        }
    }
    return best;
}

}  // namespace

DiscreteCurve front_lift(const Front& f, double y0, double t0, double min_x_slope) {
    const std::size_t n = f.size();
    if (n < 16) throw Error(ErrorCategory::InvalidInput, "front too short");
    const auto xp = scalar_derivative(f.x, f.params, f.closed);
    const auto zp = scalar_derivative(f.z, f.params, f.closed);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(xp[j]) < min_x_slope)
            throw Error(ErrorCategory::Cusp,
                        "vertical tangency in front at t = " + std::to_string(f.params[j]));
    }
    const std::size_t j0 = index_at_param(f.params, t0);
    const auto y = cumulative_trapezoid(f.z, f.x, j0, y0, f.closed);
    DiscreteCurve c;
    c.closed = f.closed;
    c.params = f.params;
    c.samples.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        c.samples[j] = {f.x[j], y[j], f.z[j], zp[j] / xp[j]};
    return c;
}

DiscreteCurve lagrangian_lift(const LagrangianPlaneCurve& l, double z0, double y0,
                              double t0) {
    const std::size_t n = l.size();
    if (n < 16) throw Error(ErrorCategory::InvalidInput, "curve too short");
    const std::size_t j0 = index_at_param(l.params, t0);
    const auto z = cumulative_trapezoid(l.w, l.x, j0, z0, l.closed);
    const auto y = cumulative_trapezoid(z, l.x, j0, y0, l.closed);
    DiscreteCurve c;
    c.closed = l.closed;
    c.params = l.params;
    c.samples.resize(n);
    for (std::size_t j = 0; j < n; ++j) c.samples[j] = {l.x[j], y[j], z[j], l.w[j]};
    return c;
}

std::pair<double, double> closure_defects(const LagrangianPlaneCurve& l, double z0) {
    if (!l.closed)
        throw Error(ErrorCategory::InvalidInput, "closure_defects requires a closed curve");
    const double dz = loop_trapezoid(l.w, l.x);
    const auto z = cumulative_trapezoid(l.w, l.x, 0, z0, /*closed=*/true);
    const double dy = loop_trapezoid(z, l.x);
    return {dz, dy};
}

std::pair<double, double> lift_closure_gap(const LagrangianPlaneCurve& l, double z0,
                                           double y0) {
    if (!l.closed)
        throw Error(ErrorCategory::InvalidInput, "lift_closure_gap requires a closed curve");
    const std::size_t n = l.size();
    const auto z = cumulative_trapezoid(l.w, l.x, 0, z0, /*closed=*/true);
    const auto y = cumulative_trapezoid(z, l.x, 0, y0, /*closed=*/true);
    const double zg = z[n - 1] + 0.5 * (l.w[n - 1] + l.w[0]) * (l.x[0] - l.x[n - 1]) - z[0];
    // y gap uses the wrapped z value at the seam
    const double z_seam = z[n - 1] + 0.5 * (l.w[n - 1] + l.w[0]) * (l.x[0] - l.x[n - 1]);
    const double yg = y[n - 1] + 0.5 * (z[n - 1] + z_seam) * (l.x[0] - l.x[n - 1]) - y[0];
    return {zg, yg};
}

}  // namespace engel
