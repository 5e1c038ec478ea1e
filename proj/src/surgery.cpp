#include "engel/surgery.hpp"

#include <algorithm>
#include <cmath>

#include "engel/core_geometry.hpp"
#include "engel/numerics.hpp"

namespace engel {

namespace {

// Unrolled circular index helpers: a window on a closed curve is handled as a
// contiguous index range in [0, 2n), mapped back through mod n.
struct IndexRange {
    std::size_t lo = 0, hi = 0;  // inclusive, unrolled
    std::size_t count() const { return hi - lo + 1; }
};

double wrap_param(double t) { return t - std::floor(t); }

// Index of the first sample at or after t (wrapped into [0, n) when closed).
std::size_t ceil_index(const std::vector<double>& params, bool closed, double t) {
    const std::size_t n = params.size();
    if (!closed) {
        auto it = std::lower_bound(params.begin(), params.end(), t);
        return std::size_t(it - params.begin());
    }
    auto it = std::lower_bound(params.begin(), params.end(), wrap_param(t));
    return std::size_t(it - params.begin()) % n;
}

// Index of the last sample at or before t (wrapped when closed).
std::size_t floor_index(const std::vector<double>& params, bool closed, double t) {
    const std::size_t n = params.size();
    if (!closed) {
        auto it = std::upper_bound(params.begin(), params.end(), t);
        if (it == params.begin())
            throw Error(ErrorCategory::InvalidInput, "window before first sample");
        return std::size_t(it - params.begin()) - 1;
    }
    auto it = std::upper_bound(params.begin(), params.end(), wrap_param(t));
    return it == params.begin() ? n - 1 : std::size_t(it - params.begin()) - 1;
}

double g_shape(double u) { return std::sin(2 * M_PI * u) * std::sin(M_PI * u) * std::sin(M_PI * u); }

double g_shape_max_deriv() {
    // fixed shape; scan once
    static const double m = [] {
        double best = 0;
        for (int i = 0; i <= 4000; ++i) {
            const double u = i / 4000.0;
            const double h = 1e-6;
            const double d = (g_shape(u + h) - g_shape(u - h)) / (2 * h);
            best = std::max(best, d);
        }
        return best;
    }();
    return m;
}

double plateau(double u) {
    return smoothstep_inf(u / 0.15) * smoothstep_inf((1.0 - u) / 0.15);
}

struct KinkSynthesis {
    std::vector<double> x, z;
    double achieved_area = 0;
    double base_area = 0;
    double slope_amp = 0;
};

double segment_area(const std::vector<double>& z, const std::vector<double>& x) {
    double a = 0;
    for (std::size_t j = 0; j + 1 < z.size(); ++j)
        a += 0.5 * (z[j] + z[j + 1]) * (x[j + 1] - x[j]);
    return a;
}

// Build the loop template over the given base samples.  The slope profile is
// prescribed directly (the Geiges front's slope is the w coordinate, so it
// must stay finite even where x turns around); z is integrated from it.
// Linear modes psi1/psi2 are solved so the endpoint and, when requested, the
// enclosed area hit their targets exactly.
KinkSynthesis synthesize_kink(const std::vector<double>& base_x,
                              const std::vector<double>& base_z,
                              const std::vector<double>& u, double slope_amp,
                              bool solve_area, double target_area) {
    const std::size_t m = base_x.size();
    KinkSynthesis out;
    out.base_area = segment_area(base_z, base_x);
    out.slope_amp = slope_amp;

    const double x_a = base_x.front(), x_b = base_x.back();
    const double L = x_b - x_a;
    const double s_a = (base_z[1] - base_z[0]) / (base_x[1] - base_x[0]);
    const double s_b = (base_z[m - 1] - base_z[m - 2]) / (base_x[m - 1] - base_x[m - 2]);

    const double beta = (slope_amp != 0.0) ? 1.6 / g_shape_max_deriv() : 0.0;
    out.x.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        out.x[j] = x_a + L * (u[j] - beta * g_shape(u[j]));

    auto slope = [&](std::size_t j, double l1, double l2) {
        const double uu = u[j];
        const double s_lin = s_a + (s_b - s_a) * smoothstep_inf(uu);
        const double mu = plateau(uu) * std::sin(2 * M_PI * uu);
        // p1 symmetric (moves the endpoint), p2 antisymmetric about u = 1/2
        // (moves the area at fixed endpoint); a symmetric pair would couple
        // area and endpoint proportionally and degenerate the solve
        const double p1 = std::sin(M_PI * uu) * std::sin(M_PI * uu);
        const double p2 = p1 * std::sin(2 * M_PI * uu);
        return s_lin + slope_amp * mu + l1 * p1 + l2 * p2;
    };
    auto integrate = [&](double l1, double l2) {
        std::vector<double> z(m);
        z[0] = base_z.front();
        for (std::size_t j = 0; j + 1 < m; ++j)
            z[j + 1] = z[j] + 0.5 * (slope(j, l1, l2) + slope(j + 1, l1, l2)) *
                                  (out.x[j + 1] - out.x[j]);
        return z;
    };
    auto residual = [&](const std::vector<double>& z) {
        const double r_end = z.back() - base_z.back();
        const double r_area = segment_area(z, out.x) - (out.base_area + target_area);
        return std::pair<double, double>{r_end, r_area};
    };

    const auto z00 = integrate(0, 0);
    const auto [e0, a0] = residual(z00);
    if (!solve_area) {
        const auto z10 = integrate(1, 0);
        const auto [e1, a1] = residual(z10);
        const double de = e1 - e0;
        if (std::abs(de) < 1e-14)
            throw Error(ErrorCategory::Resolution, "kink segment too coarse to solve");
        const double l1 = -e0 / de;
        out.z = integrate(l1, 0);
        out.achieved_area = segment_area(out.z, out.x);
        return out;
    }
    const auto z10 = integrate(1, 0);
    const auto z01 = integrate(0, 1);
    const auto [e1, a1] = residual(z10);
    const auto [e2, a2] = residual(z01);
    const double m00 = e1 - e0, m01 = e2 - e0;
    const double m10 = a1 - a0, m11 = a2 - a0;
    const double det = m00 * m11 - m01 * m10;
    if (std::abs(det) < 1e-16)
        throw Error(ErrorCategory::Resolution, "kink mode system is degenerate");
    const double l1 = (-e0 * m11 + a0 * m01) / det;
    const double l2 = (-a0 * m00 + e0 * m10) / det;
    out.z = integrate(l1, l2);
    out.achieved_area = segment_area(out.z, out.x);
    return out;
}

IndexRange kink_range(const Front& f, const KinkSpec& spec) {
    const std::size_t n = f.size();
    IndexRange r;
    r.lo = ceil_index(f.params, f.closed, spec.center - spec.width);
    r.hi = floor_index(f.params, f.closed, spec.center + spec.width);
    if (f.closed && r.hi < r.lo) r.hi += n;
    if (!f.closed && (r.lo == 0 || r.hi + 1 >= n))
        throw Error(ErrorCategory::InvalidInput, "kink support touches the front ends");
    if (r.hi < r.lo + 8)
        throw Error(ErrorCategory::Resolution, "kink support has too few samples");
    return r;
}

bool ranges_overlap(double lo1, double hi1, double lo2, double hi2) {
    return lo1 < hi2 && lo2 < hi1;
}

void check_graphical(const std::vector<double>& x) {
    const double dir = x.back() > x.front() ? 1.0 : -1.0;
    for (std::size_t j = 0; j + 1 < x.size(); ++j)
        if (dir * (x[j + 1] - x[j]) <= 0)
            throw Error(ErrorCategory::Cusp, "kink base segment is not graphical");
}

std::vector<double> normalized_u(const Front& f, const IndexRange& r) {
    const std::size_t n = f.size();
    std::vector<double> u(r.count());
    auto par = [&](std::size_t k) {
        return f.params[(r.lo + k) % n] + ((r.lo + k) >= n ? 1.0 : 0.0);
    };
    const double t0 = par(0);
    const double t1 = par(r.count() - 1);
    for (std::size_t k = 0; k < r.count(); ++k) u[k] = (par(k) - t0) / (t1 - t0);
    return u;
}

void splice(Front& f, const IndexRange& r, const std::vector<double>& x,
            const std::vector<double>& z) {
    const std::size_t n = f.size();
    for (std::size_t k = 0; k < r.count(); ++k) {
        f.x[(r.lo + k) % n] = x[k];
        f.z[(r.lo + k) % n] = z[k];
    }
}

std::vector<double> gather(const std::vector<double>& v, const IndexRange& r,
                           std::size_t n) {
    std::vector<double> out(r.count());
    for (std::size_t k = 0; k < r.count(); ++k) out[k] = v[(r.lo + k) % n];
    return out;
}

}  // namespace

double front_segment_area(const Front& f, std::size_t ja, std::size_t jb) {
    const std::size_t n = f.size();
    double a = 0;
    for (std::size_t k = ja; k < jb; ++k)
        a += 0.5 * (f.z[k % n] + f.z[(k + 1) % n]) * (f.x[(k + 1) % n] - f.x[k % n]);
    return a;
}

Front insert_kink(const Front& f, const KinkSpec& spec, bool allow_nested) {
    if (!(spec.width > 0)) throw Error(ErrorCategory::InvalidInput, "kink width must be > 0");
    for (const auto& k : f.kinks) {
        const bool overlap = ranges_overlap(spec.center - spec.width, spec.center + spec.width,
                                            k.spec.center - k.spec.width,
                                            k.spec.center + k.spec.width);
        if (!overlap) continue;
        const bool inside = spec.center - spec.width > k.spec.center - k.spec.width &&
                            spec.center + spec.width < k.spec.center + k.spec.width;
        if (!(allow_nested && inside))
            throw Error(ErrorCategory::Placement,
                        "kink support overlaps an existing non-nested kink");
    }
    const IndexRange r = kink_range(f, spec);
    const std::size_t n = f.size();
    const auto base_x = gather(f.x, r, n);
    const auto base_z = gather(f.z, r, n);
    check_graphical(base_x);
    const auto u = normalized_u(f, r);
    const double slope_amp = (spec.width > 0) ? spec.height / spec.width : 0.0;
    const auto syn =
        synthesize_kink(base_x, base_z, u, spec.height == 0.0 ? 0.0 : slope_amp,
                        /*solve_area=*/true, spec.area);
    Front out = f;
    splice(out, r, syn.x, syn.z);
    FrontKink rec;
    rec.spec = spec;
    rec.ja = r.lo % n;
    rec.jb = r.hi % n;
    rec.base_x = base_x;
    rec.base_z = base_z;
    rec.nested = allow_nested;
    out.kinks.push_back(std::move(rec));
    return out;
}

Front enlarge_wrinkle(const Front& f, const KinkSpec& kink, double target_slope) {
    if (target_slope == 0.0) return f;
    std::size_t ki = f.kinks.size();
    for (std::size_t i = 0; i < f.kinks.size(); ++i)
        if (std::abs(f.kinks[i].spec.center - kink.center) < 1e-12) ki = i;
    if (ki == f.kinks.size())
        throw Error(ErrorCategory::Lookup, "unknown kink at center " +
                                               std::to_string(kink.center));
    Front out = f;
    FrontKink& rec = out.kinks[ki];
    const std::size_t n = f.size();
    IndexRange r{rec.ja, rec.jb};
    if (f.closed && r.hi < r.lo) r.hi += n;
    const auto u = normalized_u(out, r);
    const std::size_t m = rec.base_x.size();
    const double s_a = (rec.base_z[1] - rec.base_z[0]) / (rec.base_x[1] - rec.base_x[0]);
    const double s_b = (rec.base_z[m - 1] - rec.base_z[m - 2]) /
                       (rec.base_x[m - 1] - rec.base_x[m - 2]);
    const double amp = std::abs(target_slope) + std::max(std::abs(s_a), std::abs(s_b));
    const auto syn = synthesize_kink(rec.base_x, rec.base_z, u, amp,
                                     /*solve_area=*/false, 0.0);
    splice(out, r, syn.x, syn.z);
    rec.area_drift = syn.achieved_area - (syn.base_area + rec.spec.area);
    rec.spec.height = amp * rec.spec.width;
    return out;
}

std::pair<Front, AreaController> insert_area_controller(const Front& f, double at,
                                                        double A, double width) {
    if (!(width > 0)) throw Error(ErrorCategory::InvalidInput, "controller width must be > 0");
    KinkSpec plus{at - width / 2, width * 0.225, width, A};
    KinkSpec minus{at + width / 2, width * 0.225, width, -A};
    Front g = insert_kink(f, plus);
    Front h = insert_kink(g, minus);
    AreaController ctl;
    ctl.plus = plus;
    ctl.minus = minus;
    ctl.plus_index = h.kinks.size() - 2;
    ctl.minus_index = h.kinks.size() - 1;
    ctl.base_area = A;
    return {std::move(h), ctl};
}

Front tune_area_controllers(const Front& f, const std::vector<AreaController>& controllers,
                            const std::vector<double>& targets, double max_area_ratio) {
    if (controllers.size() != targets.size())
        throw Error(ErrorCategory::InvalidInput, "controller/target count mismatch");
    Front out = f;
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < controllers.size(); ++i) {
        const auto& ctl = controllers[i];
        if (std::abs(targets[i]) > max_area_ratio * std::abs(ctl.base_area))
            throw Error(ErrorCategory::Capacity,
                        "target exceeds capacity of controller " + std::to_string(i));
        // locate the plus kink in the passed-in front
        std::size_t ki = out.kinks.size();
        for (std::size_t k = 0; k < out.kinks.size(); ++k)
            if (std::abs(out.kinks[k].spec.center - ctl.plus.center) < 1e-12) ki = k;
        if (ki == out.kinks.size())
            throw Error(ErrorCategory::Lookup,
                        "controller " + std::to_string(i) + " not present in front");
        FrontKink& rec = out.kinks[ki];
        IndexRange r{rec.ja, rec.jb};
        if (out.closed && r.hi < r.lo) r.hi += n;
        const auto u = normalized_u(out, r);
        const double slope_amp = rec.spec.height == 0.0 ? 0.0
                                                        : rec.spec.height / rec.spec.width;
        const auto syn = synthesize_kink(rec.base_x, rec.base_z, u, slope_amp,
                                         /*solve_area=*/true,
                                         ctl.base_area + targets[i]);
        splice(out, r, syn.x, syn.z);
        rec.spec.area = ctl.base_area + targets[i];
    }
    return out;
}

bool self_tangency_y_separation(const Front& f, const std::vector<double>& y_values,
                                const SelfTangencyConfig& cfg) {
    if (y_values.size() != f.size())
        throw Error(ErrorCategory::InvalidInput, "y_values size mismatch");
    const std::size_t n = f.size();
    std::vector<double> slope(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = f.closed ? (j + 1) % n : std::min(j + 1, n - 1);
        const std::size_t jm = f.closed ? (j + n - 1) % n : (j > 0 ? j - 1 : 0);
        const double dx = f.x[jp] - f.x[jm];
        slope[j] = std::abs(dx) > 1e-12 ? (f.z[jp] - f.z[jm]) / dx : 1e12;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dt = f.params[j] - f.params[i];
            if (f.closed) dt = std::min(dt, 1.0 - dt);
            if (dt < cfg.param_separation) continue;
            const double dxz = std::hypot(f.x[j] - f.x[i], f.z[j] - f.z[i]);
            if (dxz > cfg.position_tol) continue;
            if (std::abs(slope[j] - slope[i]) > cfg.slope_tol) continue;
            if (std::abs(y_values[j] - y_values[i]) <= cfg.y_sep_tol) return false;
        }
    }
    return true;
}

DiscreteCurve make_engel_near(const DiscreteCurve& c, const BlendWindow& window,
                              double tol) {
    c.validate();
    if (!(window.a < window.b) || !(window.delta > 0))
        throw Error(ErrorCategory::InvalidInput, "invalid blend window");
    const std::size_t n = c.size();
    double a = window.a, b = window.b;
    const double d = window.delta;
    if (c.closed) {
        // normalize so the outer window starts inside [0, 1)
        const double sh = std::floor(a - d);
        a -= sh;
        b -= sh;
    }
    if (!c.closed) {
        if (a - d <= c.params.front() || b + d >= c.params.back())
            throw Error(ErrorCategory::InvalidInput,
                        "blend window touches the open-curve endpoints");
    } else if ((b + d) - (a - d) >= 1.0) {
        throw Error(ErrorCategory::InvalidInput, "blend window wraps onto itself");
    }

    IndexRange outer;
    outer.lo = ceil_index(c.params, c.closed, a - d);
    outer.hi = floor_index(c.params, c.closed, b + d);
    if (c.closed && outer.hi < outer.lo) outer.hi += n;
    if (outer.count() < 8)
        throw Error(ErrorCategory::Resolution, "blend window has too few samples");

    // epsilon-Engel precondition on the window
    const auto tangents = curve_tangents(c);
    for (std::size_t k = 0; k < outer.count(); ++k) {
        const std::size_t j = (outer.lo + k) % n;
        if (tangency_angle(c.samples[j], tangents[j]) >= M_PI / 4)
            throw Error(ErrorCategory::ConstraintViolation,
                        "curve is not eps-Engel (eps < pi/4) on the window");
    }

    // Lagrangian data over the unrolled window
    const std::size_t m = outer.count();
    std::vector<double> xs(m), ws(m), ts(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = (outer.lo + k) % n;
        xs[k] = c.samples[j].x;
        ws[k] = c.samples[j].w;
        ts[k] = c.params[j] + ((outer.lo + k) >= n ? 1.0 : 0.0);
    }

    // anchor index: first sample at or after a
    std::size_t ka = 0;
    while (ka + 1 < m && ts[ka] < a) ++ka;

    std::vector<double> zt(m), yt(m);
    zt[0] = 0;
    for (std::size_t k = 0; k + 1 < m; ++k)
        zt[k + 1] = zt[k] + 0.5 * (ws[k] + ws[k + 1]) * (xs[k + 1] - xs[k]);
    const double z_anchor = c.samples[(outer.lo + ka) % n].z;
    const double z_shift = z_anchor - zt[ka];
    for (auto& v : zt) v += z_shift;
    yt[0] = 0;
    for (std::size_t k = 0; k + 1 < m; ++k)
        yt[k + 1] = yt[k] + 0.5 * (zt[k] + zt[k + 1]) * (xs[k + 1] - xs[k]);
    const double y_anchor = c.samples[(outer.lo + ka) % n].y;
    const double y_shift = y_anchor - yt[ka];
    for (auto& v : yt) v += y_shift;

    DiscreteCurve out = c;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = (outer.lo + k) % n;
        double lam;  // 0 at the outer collar edges, 1 on [a, b]
        const double t = ts[k];
        if (t < a)
            lam = smoothstep_inf((t - (a - d)) / d);
        else if (t > b)
            lam = smoothstep_inf(((b + d) - t) / d);
        else
            lam = 1.0;
        // input + lam * (lift - input): exact at both extremes
        out.samples[j].z = c.samples[j].z + lam * (zt[k] - c.samples[j].z);
        out.samples[j].y = c.samples[j].y + lam * (yt[k] - c.samples[j].y);
    }
    (void)tol;
    return out;
}

}  // namespace engel
