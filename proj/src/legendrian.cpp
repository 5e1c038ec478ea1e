#include "engel/legendrian.hpp"

#include <algorithm>
#include <cmath>

#include "engel/numerics.hpp"

namespace engel {

void LegendrianCurve::validate() const {
    const std::size_t n = x.size();
    if (n < 16) throw Error(ErrorCategory::InvalidInput, "curve needs at least 16 samples");
    if (y.size() != n || z.size() != n || params.size() != n)
        throw Error(ErrorCategory::InvalidInput, "coordinate array size mismatch");
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(x[j]) || !std::isfinite(y[j]) || !std::isfinite(z[j]) ||
            !std::isfinite(params[j]))
            throw Error(ErrorCategory::InvalidInput,
                        "non-finite value at sample " + std::to_string(j));
        if (j > 0 && !(params[j] > params[j - 1]))
            throw Error(ErrorCategory::InvalidInput,
                        "params not strictly increasing at index " + std::to_string(j));
    }
}

LegendrianDefect legendrian_defect(const LegendrianCurve& c) {
    c.validate();
    const auto xp = scalar_derivative(c.x, c.params, c.closed);
    const auto zp = scalar_derivative(c.z, c.params, c.closed);
    LegendrianDefect d;
    const std::size_t n = c.size();
    d.residuals.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        d.residuals[j] = std::abs(zp[j] - c.y[j] * xp[j]);
        d.max_residual = std::max(d.max_residual, d.residuals[j]);
    }
    return d;
}

LegendrianCurve action_lift(const std::vector<double>& x, const std::vector<double>& y,
                            const std::vector<double>& params, bool closed,
                            double z0, double t0) {
    const std::size_t n = x.size();
    if (n < 16 || y.size() != n || params.size() != n)
        throw Error(ErrorCategory::InvalidInput, "action_lift: bad input arrays");
    std::size_t j0 = 0;
    double best = std::abs(params[0] - t0);
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(params[j] - t0) < best) {
            best = std::abs(params[j] - t0);
            j0 = j;
        }
    LegendrianCurve c;
    c.x = x;
    c.y = y;
    c.params = params;
    c.closed = closed;
    c.z = cumulative_trapezoid(y, x, j0, z0, closed);
    return c;
}

namespace {

double curve_area(const LegendrianCurve& c) {
    if (c.closed) return loop_trapezoid(c.y, c.x);
    double a = 0;
    for (std::size_t j = 0; j + 1 < c.size(); ++j)
        a += 0.5 * (c.y[j] + c.y[j + 1]) * (c.x[j + 1] - c.x[j]);
    return a;
}

}  // namespace

std::pair<LegendrianCurve, StabilizationRecord> stabilize(const LegendrianCurve& c,
                                                          double at, int sign,
                                                          double area, double width,
                                                          const StabilizationRecord& prior) {
    c.validate();
    if (sign != 1 && sign != -1)
        throw Error(ErrorCategory::InvalidInput, "stabilization sign must be +1 or -1");
    if (!(width > 0) || (!c.closed && width >= c.params.back() - c.params.front()))
        throw Error(ErrorCategory::InvalidInput, "bad stabilization width");
    const std::size_t n = c.size();
    const long ln = long(n);
    double a = at - width / 2;
    if (c.closed) a -= std::floor(a);
    const double b = a + width;
    if (!c.closed && (a <= c.params.front() || b >= c.params.back()))
        throw Error(ErrorCategory::Placement,
                    "stabilization support leaves the open parameter range");

    // unrolled parameter: index u in [-n, 2n) has t = params[u mod n] + k,
    // where k is the winding offset (u - (u mod n)) / n in {-1, 0, 1}
    auto t_of = [&](long u) {
        const long j = ((u % ln) + ln) % ln;
        return c.params[std::size_t(j)] + double((u - j) / ln);
    };
    auto wrap = [&](long u) { return std::size_t(((u % ln) + ln) % ln); };

    // samples strictly inside a parameter interval (lo, hi)
    auto samples_in = [&](double lo, double hi, long& first, long& last) {
        first = 1;
        last = 0;
        const long u0 = c.closed ? -ln : 0;
        const long u1 = c.closed ? 2 * ln : ln;
        for (long u = u0; u < u1; ++u) {
            const double t = t_of(u);
            if (t > lo && t < hi) {
                if (first > last) first = u;
                last = u;
            } else if (first <= last) {
                break;
            }
        }
        return first <= last;
    };

    long ja = 0, jb = 0;
    if (!samples_in(a, b, ja, jb) || jb - ja + 1 < 32)
        throw Error(ErrorCategory::Resolution,
                    "stabilization support holds fewer than 32 samples");
    if (c.closed && jb - ja + 1 >= ln)
        throw Error(ErrorCategory::Placement, "stabilization support covers the circle");

    // loop radius: the circle tangent must dominate the base tangent over the
    // support so the rotation number changes by exactly `sign`
    const auto xp = scalar_derivative(c.x, c.params, c.closed);
    const auto yp = scalar_derivative(c.y, c.params, c.closed);
    double speed = 0;
    for (long u = ja; u <= jb; ++u)
        speed = std::max(speed, std::hypot(xp[wrap(u)], yp[wrap(u)]));
    const double rho = 1.1 * speed * width / M_PI + 1e-9;

    // align the loop with the base tangent at the support center so the
    // transitions at the edges do not unwind the turn
    const std::size_t jc = wrap((ja + jb) / 2);
    const double phi = std::atan2(yp[jc], xp[jc]);
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    LegendrianCurve out = c;
    for (long u = ja; u <= jb; ++u) {
        const double s = (t_of(u) - a) / width;
        const std::size_t j = wrap(u);
        const double dx = rho * std::sin(2 * M_PI * s);
        const double dy = sign * rho * (1.0 - std::cos(2 * M_PI * s));
        out.x[j] += cphi * dx - sphi * dy;
        out.y[j] += sphi * dx + cphi * dy;
    }
    const double a_loop = curve_area(out) - curve_area(c);

    // The remaining area (area - a_loop) rides on a graphical y-bump over a
    // disjoint interval next to the loop where x' keeps its sign.  A graphical
    // perturbation over an x-monotone stretch cannot change the rotation
    // number, so the loop's contribution of `sign` is untouched.
    std::vector<double> bump(n, 0.0);
    long ba = 1, bbv = 0;
    {
        bool placed = false;
        for (double wb = 2 * width; wb <= 0.3 + 1e-12 && !placed; wb *= 1.5) {
            for (int side = 0; side < 2 && !placed; ++side) {
                const double lo = side == 0 ? b + width / 4 : a - width / 4 - wb;
                const double hi = lo + wb;
                if (!c.closed && (lo <= c.params.front() || hi >= c.params.back()))
                    continue;
                if (c.closed && (hi - lo) + (b - a) > 0.9) continue;
                long f = 1, l = 0;
                if (!samples_in(lo, hi, f, l) || l - f + 1 < 16) continue;
                bool monotone = true;
                double sgn = 0;
                for (long u = f; u <= l && monotone; ++u) {
                    const double v = xp[wrap(u)];
                    if (sgn == 0) sgn = v > 0 ? 1 : (v < 0 ? -1 : 0);
                    if (sgn == 0 || v * sgn <= 0) monotone = false;
                }
                if (!monotone) continue;
                ba = f;
                bbv = l;
                for (long u = f; u <= l; ++u)
                    bump[wrap(u)] = bump_inf(2.0 * (t_of(u) - lo) / (hi - lo) - 1.0);
                placed = true;
            }
        }
        if (!placed)
            throw Error(ErrorCategory::Placement,
                        "no x-monotone interval next to the loop for the area bump");
    }
    double B = 0;
    {
        LegendrianCurve probe = out;
        for (std::size_t j = 0; j < n; ++j) probe.y[j] += bump[j];
        B = curve_area(probe) - curve_area(out);
    }
    if (std::abs(B) < 1e-12 * (1.0 + std::abs(area)))
        throw Error(ErrorCategory::Placement,
                    "degenerate area bump: no x-progress under its support");
    double beta = (area - a_loop) / B;
    for (int pass = 0; pass < 2; ++pass) {
        LegendrianCurve probe = out;
        for (std::size_t j = 0; j < n; ++j) probe.y[j] += beta * bump[j];
        const double got = curve_area(probe) - curve_area(c);
        beta += (area - got) / B;
    }
    for (std::size_t j = 0; j < n; ++j) out.y[j] += beta * bump[j];

    // local action re-lift over the union of the two supports; downstream
    // samples shift by the realized area change, upstream ones stay
    // bit-identical
    const long ulo = std::min(ja, ba);
    const long uhi = std::max(jb, bbv);
    if (c.closed && uhi - ulo + 1 >= ln)
        throw Error(ErrorCategory::Placement, "stabilization region covers the circle");
    if (!c.closed && (ulo <= 0 || uhi >= ln - 1))
        throw Error(ErrorCategory::Placement,
                    "stabilization region leaves the open parameter range");
    double zacc = c.z[wrap(ulo - 1)];
    double xprev = out.x[wrap(ulo - 1)], yprev = out.y[wrap(ulo - 1)];
    for (long u = ulo; u <= uhi; ++u) {
        const std::size_t j = wrap(u);
        zacc += 0.5 * (yprev + out.y[j]) * (out.x[j] - xprev);
        out.z[j] = zacc;
        xprev = out.x[j];
        yprev = out.y[j];
    }
    const std::size_t post = wrap(uhi + 1);
    const double zshift =
        (zacc + 0.5 * (yprev + out.y[post]) * (out.x[post] - xprev)) - c.z[post];
    const long tail = c.closed ? ulo + ln - 2 : ln - 1;
    for (long u = uhi + 1; u <= tail; ++u) out.z[wrap(u)] += zshift;

    StabilizationRecord rec = prior;
    if (sign > 0)
        ++rec.count_plus;
    else
        ++rec.count_minus;
    rec.locations.push_back(at - std::floor(at));
    return {std::move(out), std::move(rec)};
}

int rotation_number(const LegendrianCurve& c) {
    c.validate();
    if (!c.closed)
        throw Error(ErrorCategory::InvalidInput, "rotation number needs a closed curve");
    const auto xp = scalar_derivative(c.x, c.params, true);
    const auto yp = scalar_derivative(c.y, c.params, true);
    const std::size_t n = c.size();
    double total = 0;
    double prev = std::atan2(yp[n - 1], xp[n - 1]);
    for (std::size_t j = 0; j < n; ++j) {
        if (xp[j] == 0.0 && yp[j] == 0.0)
            throw Error(ErrorCategory::InvalidInput,
                        "vanishing tangent at sample " + std::to_string(j));
        const double ang = std::atan2(yp[j], xp[j]);
        double d = ang - prev;
        while (d > M_PI) d -= 2 * M_PI;
        while (d < -M_PI) d += 2 * M_PI;
        total += d;
        prev = ang;
    }
    return int(std::lround(total / (2 * M_PI)));
}

std::pair<LegendrianCurve, StabilizationRecord> legendrize(const LegendrianCurve& c,
                                                           double eps, double eta) {
    c.validate();
    if (!c.closed)
        throw Error(ErrorCategory::InvalidInput, "legendrize requires a closed curve");
    if (!(eps > 0 && eps < M_PI / 2))
        throw Error(ErrorCategory::InvalidInput, "eps must lie in (0, pi/2)");
    if (!(eta > 0)) throw Error(ErrorCategory::InvalidInput, "eta must be positive");
    const std::size_t n = c.size();
    const auto xp = scalar_derivative(c.x, c.params, true);
    const auto yp = scalar_derivative(c.y, c.params, true);
    const auto zp = scalar_derivative(c.z, c.params, true);
    for (std::size_t j = 0; j < n; ++j) {
        const double speed = std::hypot(xp[j], yp[j]);
        if (!(speed > 0))
            throw Error(ErrorCategory::InvalidInput, "vanishing planar tangent");
        if (std::atan2(std::abs(zp[j] - c.y[j] * xp[j]), speed) > eps)
            throw Error(ErrorCategory::ConstraintViolation,
                        "input is not eps-Legendrian at t = " +
                            std::to_string(c.params[j]));
    }

    const double G = loop_trapezoid(c.y, c.x);
    if (std::abs(G) <= 1e-8) {
        // already closes: just re-lift the action
        LegendrianCurve out = action_lift(c.x, c.y, c.params, true, c.z[0], c.params[0]);
        return {std::move(out), StabilizationRecord{}};
    }

    // two opposite stabilizations, each carrying half the correcting area,
    // placed where the front is steepest and well separated
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](std::size_t u, std::size_t v) { return std::abs(xp[u]) > std::abs(xp[v]); });
    const double t1 = c.params[order[0]];
    double t2 = t1;
    for (std::size_t j : order) {
        double dt = std::abs(c.params[j] - t1);
        dt = std::min(dt, 1.0 - dt);
        if (dt > 0.15) {
            t2 = c.params[j];
            break;
        }
    }
    if (t2 == t1)
        throw Error(ErrorCategory::Placement, "no separated placements for the pair");

    // support wide enough for the loop to be resolved on this grid
    const double width = std::max(0.05, 40.0 / double(n));
    auto [c1, rec1] = stabilize(c, t1, +1, -G / 2, width);
    auto [c2, rec2] = stabilize(c1, t2, -1, -G / 2, width, rec1);

    LegendrianCurve out =
        action_lift(c2.x, c2.y, c2.params, true, c2.z[0], c2.params[0]);
    const double G2 = loop_trapezoid(out.y, out.x);
    if (std::abs(G2) > 1e-8)
        throw Error(ErrorCategory::ConstraintViolation,
                    "closure defect not eliminated: " + std::to_string(G2));
    double sup = 0;
    for (std::size_t j = 0; j < n; ++j)
        sup = std::max(sup, std::hypot(out.x[j] - c.x[j], out.y[j] - c.y[j]));
    if (sup > eta)
        throw Error(ErrorCategory::Budget,
                    "C0 budget exceeded in the (x, y) plane: " + std::to_string(sup));
    return {std::move(out), std::move(rec2)};
}

}  // namespace engel
