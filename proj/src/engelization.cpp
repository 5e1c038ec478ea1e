#include "engel/engelization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include "engel/numerics.hpp"
#include "engel/projections.hpp"
#include "engel/surgery.hpp"

namespace engel {

void EngelizeConfig::validate() const {
    if (!(eps > 0 && eps < M_PI / 2))
        throw Error(ErrorCategory::Configuration, "eps must lie in (0, pi/2)");
    if (!(eta > 0)) throw Error(ErrorCategory::Configuration, "eta must be positive");
    if (!(tol_engel > 0))
        throw Error(ErrorCategory::Configuration, "tol_engel must be positive");
    if (n_wrinkles < 2)
        throw Error(ErrorCategory::Configuration, "n_wrinkles must be at least 2");
    if (!(a0 > 0)) throw Error(ErrorCategory::Configuration, "a0 must be positive");
    if (!(delta_collar > 0))
        throw Error(ErrorCategory::Configuration, "delta_collar must be positive");
    if (max_wrinkles < n_wrinkles)
        throw Error(ErrorCategory::Configuration, "max_wrinkles below n_wrinkles");
    if (!(kernel_threshold > 0 && kernel_threshold < M_PI / 4))
        throw Error(ErrorCategory::Configuration, "kernel_threshold outside (0, pi/4)");
}

namespace {

// ------------------------------------------------------------------
// defect detection
// ------------------------------------------------------------------

// Marks samples where the curve fails to be Engel with margin: either the
// tangency angle exceeds tol/10 or a (z, y) step is inconsistent with the
// trapezoidal Pfaffian recurrences.
std::vector<bool> defect_mask(const DiscreteCurve& c, double tol) {
    const std::size_t n = c.size();
    std::vector<bool> mask(n, false);
    const auto tangents = curve_tangents(c);
    for (std::size_t j = 0; j < n; ++j)
        if (tangency_angle(c.samples[j], tangents[j]) > tol / 10) mask[j] = true;

    double scale = 1.0;
    for (const auto& p : c.samples)
        scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z),
                          std::abs(p.w)});
    const double qtol = 1e-10 * scale;
    const std::size_t steps = c.closed ? n : n - 1;
    for (std::size_t j = 0; j < steps; ++j) {
        const std::size_t jp = (j + 1) % n;
        const auto& p = c.samples[j];
        const auto& q = c.samples[jp];
        const double dx = q.x - p.x;
        const double rz = (q.z - p.z) - 0.5 * (p.w + q.w) * dx;
        const double ry = (q.y - p.y) - 0.5 * (p.z + q.z) * dx;
        if (std::abs(rz) > qtol || std::abs(ry) > qtol) {
            mask[j] = true;
            mask[jp] = true;
        }
    }
    return mask;
}

struct Window {
    std::size_t lo = 0, hi = 0;  // inclusive unrolled sample range
    bool full_circle = false;
    std::size_t count() const { return hi - lo + 1; }
};

// Merge mask runs into padded windows (index space, circular for closed).
std::vector<Window> windows_from_mask(const std::vector<bool>& mask, bool closed,
                                      std::size_t pad) {
    const std::size_t n = mask.size();
    std::vector<bool> dil(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        if (!mask[j]) continue;
        for (std::size_t d = 0; d <= pad; ++d) {
            if (closed) {
                dil[(j + d) % n] = true;
                dil[(j + n - d % n) % n] = true;
            } else {
                if (j + d < n) dil[j + d] = true;
                if (j >= d) dil[j - d] = true;
            }
        }
    }
    std::size_t marked = std::size_t(std::count(dil.begin(), dil.end(), true));
    std::vector<Window> out;
    if (marked == 0) return out;
    if (marked >= n - 4) {
        Window w;
        w.full_circle = closed;
        w.lo = 0;
        w.hi = n - 1;
        out.push_back(w);
        return out;
    }
    std::size_t start = 0;
    if (closed)
        while (dil[start]) ++start;
    bool open_run = false;
    std::size_t begin = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t j = closed ? (start + s) % n : s;
        const std::size_t uj = closed ? start + s : s;  // unrolled
        if (dil[j] && !open_run) {
            open_run = true;
            begin = uj;
        } else if (!dil[j] && open_run) {
            open_run = false;
            out.push_back({begin, uj - 1, false});
        }
    }
    if (open_run) out.push_back({begin, closed ? start + n - 1 : n - 1, false});
    return out;
}

// ------------------------------------------------------------------
// mode machinery (Lagrangian route)
// ------------------------------------------------------------------

struct Mode {
    std::vector<double> w;  // additive slope profile over the window samples
    bool controller = false;
    double position = 0;
};

struct WindowProblem {
    // unrolled sample data over the window (m samples; for full-circle
    // windows m = n + 1 and the last sample repeats the first)
    std::vector<double> ts, xs, ws, zs, ys;
    std::vector<std::size_t> idx;  // wrapped curve indices per window sample
    std::vector<Mode> modes;
};

// The two holonomy residuals of the window reconstruction: how far the
// (z, y) trapezoidal lift of the slope profile lands from the input values
// at the right end of the window.
std::pair<double, double> window_residual(const WindowProblem& wp,
                                          const std::vector<double>& lambda,
                                          std::vector<double>* z_out = nullptr,
                                          std::vector<double>* y_out = nullptr) {
    const std::size_t m = wp.ts.size();
    std::vector<double> wt = wp.ws;
    for (std::size_t q = 0; q < wp.modes.size(); ++q)
        if (lambda[q] != 0.0)
            for (std::size_t k = 0; k < m; ++k) wt[k] += lambda[q] * wp.modes[q].w[k];
    std::vector<double> z(m), y(m);
    z[0] = wp.zs[0];
    for (std::size_t k = 0; k + 1 < m; ++k)
        z[k + 1] = z[k] + 0.5 * (wt[k] + wt[k + 1]) * (wp.xs[k + 1] - wp.xs[k]);
    y[0] = wp.ys[0];
    for (std::size_t k = 0; k + 1 < m; ++k)
        y[k + 1] = y[k] + 0.5 * (z[k] + z[k + 1]) * (wp.xs[k + 1] - wp.xs[k]);
    if (z_out) *z_out = z;
    if (y_out) *y_out = y;
    if (z_out) {
        // caller wants the profile as well
        std::vector<double>& zz = *z_out;
        (void)zz;
    }
    const double rz = z[m - 1] - wp.zs[m - 1];
    const double ry = y[m - 1] - wp.ys[m - 1];
    return {rz, ry};
}

// Damped least-squares solve of the 2 x K linear response system with
// iterative refinement; the response is exactly linear so two passes reach
// machine precision.
std::vector<double> solve_window(const WindowProblem& wp, double damping = 1e-8) {
    const std::size_t K = wp.modes.size();
    std::vector<double> lambda(K, 0.0);
    if (K == 0) return lambda;
    // response columns
    std::vector<double> col_z(K), col_y(K);
    {
        std::vector<double> zero(K, 0.0);
        const auto [rz0, ry0] = window_residual(wp, zero);
        for (std::size_t q = 0; q < K; ++q) {
            auto probe = zero;
            probe[q] = 1.0;
            const auto [rz, ry] = window_residual(wp, probe);
            col_z[q] = rz - rz0;
            col_y[q] = ry - ry0;
        }
    }
    double scale = 1.0;
    for (double v : wp.zs) scale = std::max(scale, std::abs(v));
    for (double v : wp.ys) scale = std::max(scale, std::abs(v));
    for (int pass = 0; pass < 6; ++pass) {
        const auto [rz, ry] = window_residual(wp, lambda);
        if (std::abs(rz) <= 1e-12 * scale && std::abs(ry) <= 1e-12 * scale) break;
        // normal equations on (M M^T + damping I), M is 2 x K
        double a = damping, b = 0, c = damping;
        for (std::size_t q = 0; q < K; ++q) {
            a += col_z[q] * col_z[q];
            b += col_z[q] * col_y[q];
            c += col_y[q] * col_y[q];
        }
        const double det = a * c - b * b;
        if (!(std::abs(det) > 0))
            throw Error(ErrorCategory::Resolution, "window mode system is singular");
        const double mu_z = (-(rz)*c + ry * b) / det;
        const double mu_y = (-(ry)*a + rz * b) / det;
        for (std::size_t q = 0; q < K; ++q)
            lambda[q] += col_z[q] * mu_z + col_y[q] * mu_y;
    }
    return lambda;
}

double bump_at(double t, double center, double hw) {
    return bump_inf((t - center) / hw);
}

double mode_area(const std::vector<double>& m, const std::vector<double>& xs) {
    double a = 0;
    for (std::size_t k = 0; k + 1 < m.size(); ++k)
        a += 0.5 * (m[k] + m[k + 1]) * (xs[k + 1] - xs[k]);
    return a;
}

// Kink and controller modes at the scaffold positions i/N and (2i+1)/2N that
// fall inside the window.  Kinks carry slope (hence z-holonomy); controllers
// are cancelling-area pairs that move only the y-holonomy.
void build_modes(WindowProblem& wp, int N, bool full_circle) {
    const double hw = 0.225 / N;
    const std::size_t m = wp.ts.size();
    const double t_lo = wp.ts.front(), t_hi = wp.ts.back();
    auto in_window = [&](double t, double margin) {
        if (full_circle) return true;
        return t - margin > t_lo && t + margin < t_hi;
    };
    // for a full-circle window the scaffold is periodic: a bump near the seam
    // must take the same value at both copies of the seam sample, otherwise
    // the realized loop closure drifts from the window residual
    auto eval_bump = [&](double t, double center, double half) {
        double v = bump_at(t, center, half);
        if (full_circle)
            v += bump_at(t, center - 1.0, half) + bump_at(t, center + 1.0, half);
        return v;
    };
    auto add_mode = [&](double center, bool controller) {
        Mode md;
        md.controller = controller;
        md.position = center;
        md.w.assign(m, 0.0);
        if (!controller) {
            for (std::size_t k = 0; k < m; ++k)
                md.w[k] = eval_bump(wp.ts[k], center, hw);
        } else {
            std::vector<double> b1(m), b2(m);
            for (std::size_t k = 0; k < m; ++k) {
                b1[k] = eval_bump(wp.ts[k], center - hw / 2, hw / 2);
                b2[k] = eval_bump(wp.ts[k], center + hw / 2, hw / 2);
            }
            const double a1 = mode_area(b1, wp.xs);
            const double a2 = mode_area(b2, wp.xs);
            const double sigma = std::abs(a2) > 1e-14 ? a1 / a2 : 1.0;
            for (std::size_t k = 0; k < m; ++k) md.w[k] = b1[k] - sigma * b2[k];
        }
        // skip modes with no support inside the window
        double mx = 0;
        for (double v : md.w) mx = std::max(mx, std::abs(v));
        if (mx > 1e-13) wp.modes.push_back(std::move(md));
    };
    // scaffold positions, unrolled to cover the window's parameter span;
    // one period's worth suffices on a full circle (modes wrap)
    const long i_first = full_circle ? 0 : long(std::floor(t_lo * N)) - 1;
    const long i_last = full_circle ? N - 1 : long(std::ceil(t_hi * N)) + 1;
    for (long i = i_first; i <= i_last; ++i) {
        const double tk = double(i) / N;
        const double tc = (2.0 * i + 1.0) / (2.0 * N);
        if (in_window(tk, 2 * hw)) add_mode(tk, false);
        if (in_window(tc, 2.5 * hw)) add_mode(tc, true);
    }
}

WindowProblem gather_window(const DiscreteCurve& c, const Window& w) {
    const std::size_t n = c.size();
    WindowProblem wp;
    const std::size_t m = w.full_circle ? n + 1 : w.count();
    wp.ts.resize(m);
    wp.xs.resize(m);
    wp.ws.resize(m);
    wp.zs.resize(m);
    wp.ys.resize(m);
    wp.idx.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t u = w.lo + k;
        const std::size_t j = u % n;
        wp.idx[k] = j;
        wp.ts[k] = c.params[j] + double(u / n);
        wp.xs[k] = c.samples[j].x;
        wp.ws[k] = c.samples[j].w;
        wp.zs[k] = c.samples[j].z;
        wp.ys[k] = c.samples[j].y;
    }
    return wp;
}

bool window_has_kink_and_controller(const WindowProblem& wp) {
    bool k = false, c = false;
    for (const auto& md : wp.modes) (md.controller ? c : k) = true;
    return k && c;
}

// ------------------------------------------------------------------
// repair + extension
// ------------------------------------------------------------------

struct PipelineResult {
    DiscreteCurve curve;
    int wrinkles_used = 0;
};

PipelineResult run_extension(const DiscreteCurve& input, const EngelizeConfig& cfg,
                             SurgeryLog* log) {
    const std::size_t n = input.size();
    const double tol = cfg.tol_engel;

    int N = cfg.n_wrinkles;
    while (true) {
        const auto mask = defect_mask(input, tol);
        const std::size_t pad = std::max<std::size_t>(
            4, std::size_t(std::ceil(std::max(cfg.delta_collar, 2.0 / N) * double(n))));
        auto windows = windows_from_mask(mask, input.closed, pad);
        const bool dbg = std::getenv("ENGEL_DEBUG") != nullptr;
        if (dbg)
            std::fprintf(stderr, "[extension] N=%d windows=%zu\n", N, windows.size());
        DiscreteCurve out = input;
        bool ok = true;
        std::vector<SurgeryEvent> events;
        for (const auto& w : windows) {
            WindowProblem wp = gather_window(input, w);
            build_modes(wp, N, w.full_circle);
            if (!window_has_kink_and_controller(wp)) {
                if (dbg)
                    std::fprintf(stderr,
                                 "[extension]  window [%zu,%zu] modes=%zu: scaffold too coarse\n",
                                 w.lo, w.hi, wp.modes.size());
                ok = false;  // scaffold too coarse for this window
                break;
            }
            const auto lambda = solve_window(wp);
            std::vector<double> z, y;
            const auto [rz, ry] = window_residual(wp, lambda, &z, &y);
            double scale = 1.0;
            for (double v : wp.zs) scale = std::max(scale, std::abs(v));
            for (double v : wp.ys) scale = std::max(scale, std::abs(v));
            if (dbg)
                std::fprintf(stderr, "[extension]  window [%zu,%zu] modes=%zu rz=%g ry=%g\n",
                             w.lo, w.hi, wp.modes.size(), rz, ry);
            if (std::abs(rz) > 1e-9 * scale || std::abs(ry) > 1e-9 * scale) {
                ok = false;
                break;
            }
            // write back: interior samples only; window ends stay bit-identical
            const std::size_t m = wp.ts.size();
            std::vector<double> wt = wp.ws;
            for (std::size_t q = 0; q < wp.modes.size(); ++q)
                if (lambda[q] != 0.0)
                    for (std::size_t k = 0; k < m; ++k)
                        wt[k] += lambda[q] * wp.modes[q].w[k];
            // interior samples only; on a full circle the seam sample is
            // interior too (wrapped modes make wt[0] == wt[m-1], and z, y are
            // anchored there, so this realizes exactly the solved profile)
            for (std::size_t k = w.full_circle ? 0 : 1; k + 1 < m; ++k) {
                const std::size_t j = wp.idx[k];
                out.samples[j].z = z[k];
                out.samples[j].y = y[k];
                out.samples[j].w = wt[k];
            }
            for (std::size_t q = 0; q < wp.modes.size(); ++q) {
                if (lambda[q] == 0.0) continue;
                SurgeryEvent ev;
                ev.kind = wp.modes[q].controller ? "controller" : "kink";
                ev.t = wp.modes[q].position - std::floor(wp.modes[q].position);
                ev.width = 0.225 / N;
                ev.amplitude = lambda[q];
                events.push_back(ev);
            }
        }
        if (ok) {
            const auto rep = curve_defect(out);
            if (dbg)
                std::fprintf(stderr, "[extension]  post angle=%g dz=%g dy=%g\n",
                             rep.max_angle, rep.closure_dz, rep.closure_dy);
            if (rep.max_angle > tol) ok = false;
            if (input.closed &&
                (std::abs(rep.closure_dz) > 1e-8 || std::abs(rep.closure_dy) > 1e-8))
                ok = false;
            if (ok) {
                if (log) {
                    log->wrinkles_used = N;
                    for (auto& e : events) log->events.push_back(e);
                }
                return {std::move(out), N};
            }
        }
        if (N >= cfg.max_wrinkles)
            throw Error(ErrorCategory::Resolution,
                        "extension did not reach tol_engel at the wrinkle cap; "
                        "a finer sample grid is needed");
        N *= 2;
    }
}

}  // namespace

DiscreteCurve repair_tangency_locus(const DiscreteCurve& c, const EngelizeConfig& cfg,
                                    SurgeryLog* log) {
    cfg.validate();
    c.validate();
    if (!is_epsilon_engel(c, cfg.eps))
        throw Error(ErrorCategory::ConstraintViolation,
                    "curve is not eps-Engel for the configured eps");
    if (c.closed && !is_generic_knot(c, cfg.kernel_threshold))
        throw Error(ErrorCategory::ConstraintViolation,
                    "knot is everywhere tangent to ker(D); not in the generic class");
    const auto tset = kernel_tangency_set(c, cfg.kernel_threshold);
    DiscreteCurve out = c;
    const auto angles = curve_defect(c).angles;
    const double tol = cfg.tol_engel;
    const std::size_t n = c.size();
    for (const auto& iv : tset.intervals) {
        const double a = iv.lo - cfg.delta_collar;
        const double b = iv.hi + cfg.delta_collar;
        const double d = cfg.delta_collar;
        if (!c.closed && (a - d <= c.params.front() || b + d >= c.params.back()))
            continue;  // tangency at an open end: nothing to integrate against
        // skip windows that are already Engel with margin
        double worst = 0;
        for (std::size_t j = 0; j < n; ++j) {
            double t = c.params[j];
            if (c.closed && t < a - d) t += 1.0;
            if (t >= a - d && t <= b + d) worst = std::max(worst, angles[j]);
        }
        if (worst <= tol / 10) continue;
        out = make_engel_near(out, BlendWindow{a, b, d}, tol);
        if (log)
            log->events.push_back(
                {"repair-window", iv.lo - std::floor(iv.lo), b - a, worst});
    }
    return out;
}

std::pair<DiscreteCurve, DefectReport> engelize(const DiscreteCurve& c,
                                                const EngelizeConfig& cfg,
                                                SurgeryLog* log) {
    cfg.validate();
    c.validate();
    if (!c.closed)
        throw Error(ErrorCategory::InvalidInput, "engelize requires a closed curve");
    const DefectReport rep0 = curve_defect(c);
    if (!(rep0.min_separation > 0))
        throw Error(ErrorCategory::ConstraintViolation, "input curve is not embedded");
    if (rep0.max_angle > cfg.eps)
        throw Error(ErrorCategory::ConstraintViolation,
                    "input is not eps-Engel: max angle " + std::to_string(rep0.max_angle));
    if (!is_generic_knot(c, cfg.kernel_threshold))
        throw Error(ErrorCategory::ConstraintViolation,
                    "knot is everywhere tangent to ker(D); rejected");

    // Already a genuine Engel knot with closed holonomy: nothing to do.
    if (rep0.max_angle <= cfg.tol_engel && std::abs(rep0.closure_dz) <= 1e-8 &&
        std::abs(rep0.closure_dy) <= 1e-8) {
        return {c, curve_defect(c, &c)};
    }

    DiscreteCurve repaired = repair_tangency_locus(c, cfg, log);
    PipelineResult pr = run_extension(repaired, cfg, log);

    DefectReport rep = curve_defect(pr.curve, &c);
    if (rep.c0_distance > cfg.eta)
        throw Error(ErrorCategory::Budget,
                    "C0 budget exceeded: distance " + std::to_string(rep.c0_distance) +
                        " > eta " + std::to_string(cfg.eta) + " (overshoot " +
                        std::to_string(rep.c0_distance - cfg.eta) + ")");
    if (!(rep.min_separation > 0))
        throw Error(ErrorCategory::Placement,
                    "surgery collision: output lost embeddedness");
    if (std::abs(rep.closure_dz) > 1e-8 || std::abs(rep.closure_dy) > 1e-8)
        throw Error(ErrorCategory::ConstraintViolation,
                    "closure defects not eliminated (dz " +
                        std::to_string(rep.closure_dz) + ", dy " +
                        std::to_string(rep.closure_dy) + ")");
    return {std::move(pr.curve), std::move(rep)};
}

DiscreteCurve convex_integrate(const FormalEngelKnot& fk, const EngelizeConfig& cfg,
                               SurgeryLog* log) {
    cfg.validate();
    fk.validate();
    const DiscreteCurve& c = fk.curve;
    const std::size_t n = c.size();
    const auto tangents = curve_tangents(c);
    const double margin = 0.8 * cfg.eps;

    // radius of the in-cone velocity circle, per sample (0 where the input
    // already satisfies the relation with margin)
    std::vector<double> radius(n, 0.0);
    std::vector<bool> active(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        const EngelFrame fr = engel_frame(c.samples[j]);
        const Vec4 e1 = fr.X * (1.0 / fr.X.norm());
        const Vec4 e2 = fr.W;
        const Vec4& v = tangents[j];
        const Vec4 par = e1 * v.dot(e1) + e2 * v.dot(e2);
        const Vec4 res = v - par;
        const double angle = std::atan2(res.norm(), par.norm());
        if (angle <= margin) continue;
        active[j] = true;
        radius[j] = par.norm() + res.norm() / std::tan(margin);
    }
    // dilate the active set, then taper the radius smoothly inside it
    const std::size_t dil = 8;
    std::vector<bool> mask(n, false);
    for (std::size_t j = 0; j < n; ++j)
        if (active[j])
            for (std::size_t d = 0; d <= dil; ++d) {
                if (c.closed) {
                    mask[(j + d) % n] = true;
                    mask[(j + n - d % n) % n] = true;
                } else {
                    if (j + d < n) mask[j + d] = true;
                    if (j >= d) mask[j - d] = true;
                }
            }
    // moving-average mollification of the radius (keeps support inside mask)
    std::vector<double> r = radius;
    for (int pass = 0; pass < 3; ++pass) {
        std::vector<double> s(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (!mask[j]) continue;
            double acc = 0;
            int cnt = 0;
            for (int d = -3; d <= 3; ++d) {
                long jj = long(j) + d;
                if (c.closed)
                    jj = (jj % long(n) + long(n)) % long(n);
                else
                    jj = std::clamp(jj, 0L, long(n) - 1);
                acc += r[std::size_t(jj)];
                ++cnt;
            }
            s[j] = acc / cnt;
        }
        r = std::move(s);
    }
    double r_max = 0;
    for (double v : r) r_max = std::max(r_max, v);
    if (r_max == 0.0) {
        if (log) log->corrugation_freq = 0;
        return c;  // relation already satisfied with margin everywhere
    }

    const double f_cap = double(n) / 32.0;
    double freq = std::ceil(std::max(8.0, r_max / (M_PI * cfg.eta)));
    if (freq > f_cap)
        throw Error(ErrorCategory::Resolution,
                    "corrugation frequency " + std::to_string(freq) +
                        " not resolvable at N = " + std::to_string(n) +
                        "; increase the sample count");

    for (int attempt = 0; attempt < 5; ++attempt) {
        DiscreteCurve out = c;
        const double omega = 2 * M_PI * freq;
        for (std::size_t j = 0; j < n; ++j) {
            if (r[j] == 0.0) continue;
            const EngelFrame fr = engel_frame(c.samples[j]);
            const Vec4 e1 = fr.X * (1.0 / fr.X.norm());
            const Vec4 e2 = fr.W;
            const double a = fk.f1[j][0] * fr.X.norm();
            const double b = fk.f1[j][1];
            const double nm = std::hypot(a, b);
            const Vec4 u1 = e1 * (a / nm) + e2 * (b / nm);
            const Vec4 u2 = e1 * (-b / nm) + e2 * (a / nm);
            const double th = omega * c.params[j];
            out.samples[j] += (r[j] / omega) * (std::sin(th) * u1 - std::cos(th) * u2);
        }
        const auto rep = curve_defect(out);
        if (rep.max_angle <= cfg.eps) {
            double sup = 0;
            for (std::size_t j = 0; j < n; ++j)
                sup = std::max(sup, (out.samples[j] - c.samples[j]).norm());
            if (sup > cfg.eta)
                throw Error(ErrorCategory::Budget, "corrugation exceeds the C0 budget");
            if (log) log->corrugation_freq = freq;
            return out;
        }
        freq *= 2;
        if (freq > f_cap)
            throw Error(ErrorCategory::Resolution,
                        "eps-cone not reachable at this sample count; increase N");
    }
    throw Error(ErrorCategory::Resolution, "corrugation failed to enter the eps-cone");
}

CurveFamily engelize_family(const CurveFamily& fam, const EngelizeConfig& cfg,
                            std::vector<SurgeryLog>* logs) {
    cfg.validate();
    if (3 * cfg.delta_collar > 0.5)
        throw Error(ErrorCategory::Configuration,
                    "collar overlap: 3 * delta_collar exceeds 1/2");
    const std::size_t K = fam.members.size();
    if (K < 2) throw Error(ErrorCategory::InvalidInput, "family needs >= 2 members");
    const std::size_t n = fam.members[0].size();
    for (const auto& m : fam.members) {
        m.validate();
        if (m.size() != n || m.closed != fam.members[0].closed)
            throw Error(ErrorCategory::InvalidInput,
                        "family members must share sample count and closed flag");
    }
    double adj_in = 0;
    for (std::size_t k = 0; k + 1 < K; ++k)
        for (std::size_t j = 0; j < n; ++j)
            adj_in = std::max(adj_in,
                              (fam.members[k].samples[j] - fam.members[k + 1].samples[j])
                                  .norm());

    auto check_boundary = [&](std::size_t k) {
        const auto rep = curve_defect(fam.members[k]);
        if (rep.max_angle > cfg.tol_engel)
            throw Error(ErrorCategory::ConstraintViolation,
                        "boundary member k=" + std::to_string(k) +
                            " is not Engel within tol_engel");
    };
    if (fam.boundary_engel_lo) check_boundary(0);
    if (fam.boundary_engel_hi) check_boundary(K - 1);

    CurveFamily out;
    out.boundary_engel_lo = fam.boundary_engel_lo;
    out.boundary_engel_hi = fam.boundary_engel_hi;
    out.members.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        SurgeryLog lg;
        const bool boundary = (k == 0 && fam.boundary_engel_lo) ||
                              (k == K - 1 && fam.boundary_engel_hi);
        const auto rep = curve_defect(fam.members[k]);
        if (boundary ||
            (rep.max_angle <= cfg.tol_engel && std::abs(rep.closure_dz) <= 1e-8 &&
             std::abs(rep.closure_dy) <= 1e-8)) {
            out.members.push_back(fam.members[k]);  // bit-identical
        } else {
            auto [cur, rep2] = engelize(fam.members[k], cfg, &lg);
            (void)rep2;
            out.members.push_back(std::move(cur));
        }
        if (logs) logs->push_back(std::move(lg));
    }
    double adj_out = 0;
    for (std::size_t k = 0; k + 1 < K; ++k)
        for (std::size_t j = 0; j < n; ++j)
            adj_out = std::max(adj_out,
                               (out.members[k].samples[j] - out.members[k + 1].samples[j])
                                   .norm());
    if (adj_out > 2 * adj_in + 1e-12)
        throw Error(ErrorCategory::Budget,
                    "family continuity bound exceeded after surgery");
    return out;
}

ControllerResponse measure_controller_response(const DiscreteCurve& c,
                                               const EngelizeConfig& cfg) {
    cfg.validate();
    c.validate();
    if (!c.closed)
        throw Error(ErrorCategory::InvalidInput, "controller response needs a closed curve");
    const std::size_t n = c.size();
    // place one controller pair where the Lagrangian projection moves fastest
    const auto tangents = curve_tangents(c);
    std::size_t jbest = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(tangents[j].x) > std::abs(tangents[jbest].x)) jbest = j;
    const double center = c.params[jbest];
    const double hw = 0.225 / cfg.n_wrinkles;

    std::vector<double> xs(n), zs(n), mode(n);
    for (std::size_t j = 0; j < n; ++j) {
        xs[j] = c.samples[j].x;
        zs[j] = c.samples[j].z;
    }
    std::vector<double> b1(n), b2(n);
    for (std::size_t j = 0; j < n; ++j) {
        double t = c.params[j];
        double dt = t - center;
        if (c.closed) dt -= std::round(dt);
        b1[j] = bump_inf((dt + hw / 2) / (hw / 2));
        b2[j] = bump_inf((dt - hw / 2) / (hw / 2));
    }
    // cancelling pair on the slope profile; its y-response is the area unit
    const double a1 = loop_trapezoid(b1, xs);
    const double a2 = loop_trapezoid(b2, xs);
    const double sigma = std::abs(a2) > 1e-14 ? a1 / a2 : 1.0;
    for (std::size_t j = 0; j < n; ++j) mode[j] = b1[j] - sigma * b2[j];

    // predicted: the linear model says detuning by area d shifts the loop
    // integral of z dx by exactly d (per unit area)
    const auto zcum = cumulative_trapezoid(mode, xs, 0, 0.0, true);
    const double unit = loop_trapezoid(zcum, xs);
    if (std::abs(unit) < 1e-12)
        throw Error(ErrorCategory::Resolution, "controller placement is degenerate");
    const double d = 1e-3;
    const double scale = d / unit;
    std::vector<double> z2 = zs;
    for (std::size_t j = 0; j < n; ++j) z2[j] += scale * zcum[j];
    const double before = loop_trapezoid(zs, xs);
    const double after = loop_trapezoid(z2, xs);
    return {1.0, (after - before) / d};
}

}  // namespace engel
