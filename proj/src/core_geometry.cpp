#include "engel/core_geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "engel/numerics.hpp"
#include "engel/projections.hpp"

namespace engel {

EngelFrame engel_frame(const Point4& p) {
    return {Vec4{1.0, p.z, p.w, 0.0}, Vec4{0.0, 0.0, 0.0, 1.0}};
}

namespace {

// Finite-difference Lie bracket [A, B] = DB . A - DA . B at p.
Vec4 lie_bracket(const FrameField& A, const FrameField& B, const Point4& p, double h) {
    auto jac_apply = [&](const FrameField& F, const Vec4& v) {
        Vec4 out{};
        for (int i = 0; i < 4; ++i) {
            Point4 pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            const Vec4 d = (F(pp) - F(pm)) * (1.0 / (2.0 * h));
            out += d * v[i];
        }
        return out;
    };
    return jac_apply(B, A(p)) - jac_apply(A, B(p));
}

double smallest_singular_value(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
    Eigen::Matrix4d M;
    const Vec4* cols[4] = {&a, &b, &c, &d};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) M(i, j) = (*cols[j])[i];
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(M);
    return svd.singularValues()(3);
}

}  // namespace

bool verify_engel_condition_for_frame(const FrameField& A, const FrameField& B,
                                      const Point4& p, double h) {
    if (!(h > 0)) throw Error(ErrorCategory::InvalidInput, "step size must be positive");
    const Vec4 a = A(p), b = B(p);
    const Vec4 ab = lie_bracket(A, B, p, h);
    auto AB = [&](const Point4& q) { return lie_bracket(A, B, q, h); };
    const Vec4 aab = lie_bracket(A, AB, p, h);
    return smallest_singular_value(a, b, ab, aab) > 10.0 * h;
}

bool verify_engel_condition(const Point4& p, double h) {
    FrameField X = [](const Point4& q) { return engel_frame(q).X; };
    FrameField W = [](const Point4& q) { return engel_frame(q).W; };
    return verify_engel_condition_for_frame(X, W, p, h);
}

double tangency_angle(const Point4& p, const Vec4& v) {
    const double vn = v.norm();
    if (!(vn > 0)) throw Error(ErrorCategory::InvalidInput, "zero tangent vector");
    const EngelFrame fr = engel_frame(p);
    // X and W are orthogonal by construction; normalize X.
    const Vec4 e1 = fr.X * (1.0 / fr.X.norm());
    const Vec4 e2 = fr.W;
    const Vec4 par = e1 * v.dot(e1) + e2 * v.dot(e2);
    const Vec4 res = v - par;
    return std::atan2(res.norm(), par.norm());
}

double kernel_angle(const Vec4& v) {
    const double vn = v.norm();
    if (!(vn > 0)) throw Error(ErrorCategory::InvalidInput, "zero tangent vector");
    const double c = std::min(1.0, std::abs(v.w) / vn);
    return std::acos(c);
}

DefectReport curve_defect(const DiscreteCurve& c, const DiscreteCurve* reference) {
    c.validate();
    DefectReport rep;
    const auto tangents = curve_tangents(c);
    const std::size_t n = c.size();
    rep.angles.resize(n);
    rep.max_angle = 0;
    for (std::size_t j = 0; j < n; ++j) {
        rep.angles[j] = tangency_angle(c.samples[j], tangents[j]);
        rep.max_angle = std::max(rep.max_angle, rep.angles[j]);
    }
    if (c.closed) {
        const auto l = lagrangian_project(geiges_project(c));
        const auto [dz, dy] = closure_defects(l, c.samples[0].z);
        rep.closure_dz = dz;
        rep.closure_dy = dy;
    }
    rep.min_separation = embeddedness_check(c, 0.05);
    if (reference) {
        if (reference->size() != n)
            throw Error(ErrorCategory::InvalidInput,
                        "reference curve sample count mismatch");
        double d = 0;
        for (std::size_t j = 0; j < n; ++j)
            d = std::max(d, (c.samples[j] - reference->samples[j]).norm());
        rep.c0_distance = d;
    }
    return rep;
}

bool is_epsilon_engel(const DiscreteCurve& c, double eps) {
    if (!(eps >= 0 && eps < M_PI / 2))
        throw Error(ErrorCategory::InvalidInput, "eps must lie in [0, pi/2)");
    return curve_defect(c).max_angle <= eps;
}

TangencySet kernel_tangency_set(const DiscreteCurve& c, double threshold) {
    if (!(threshold > 0 && threshold < M_PI / 4))
        throw Error(ErrorCategory::InvalidInput, "threshold must lie in (0, pi/4)");
    c.validate();
    const auto tangents = curve_tangents(c);
    const std::size_t n = c.size();
    std::vector<bool> in(n);
    bool all = true, any = false;
    for (std::size_t j = 0; j < n; ++j) {
        in[j] = kernel_angle(tangents[j]) <= threshold;
        all = all && in[j];
        any = any || in[j];
    }
    TangencySet out;
    if (all) {
        out.covers_circle = c.closed;
        out.intervals.push_back({c.params.front(), c.params.back()});
        return out;
    }
    if (!any) return out;
    // maximal runs of flagged samples; for closed curves merge across the seam
    std::size_t start = 0;
    if (c.closed) {
        // rotate so sample `start` is unflagged
        while (in[start]) ++start;
    }
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    const std::size_t limit = c.closed ? n : n;
    bool open_run = false;
    std::size_t run_begin = 0;
    for (std::size_t s = 0; s < limit; ++s) {
        const std::size_t j = c.closed ? (start + s) % n : s;
        if (in[j] && !open_run) {
            open_run = true;
            run_begin = j;
        } else if (!in[j] && open_run) {
            open_run = false;
            runs.push_back({run_begin, c.closed ? (start + s - 1) % n : s - 1});
        }
    }
    if (open_run) runs.push_back({run_begin, c.closed ? (start + limit - 1) % n : limit - 1});
    for (auto [a, b] : runs) {
        double lo = c.params[a];
        double hi = c.params[b];
        if (c.closed && b < a) hi += 1.0;  // wrap interval
        out.intervals.push_back({lo, hi});
    }
    std::sort(out.intervals.begin(), out.intervals.end(),
              [](const ParamInterval& u, const ParamInterval& v) { return u.lo < v.lo; });
    return out;
}

bool is_generic_knot(const DiscreteCurve& c, double threshold) {
    if (!c.closed)
        throw Error(ErrorCategory::InvalidInput, "is_generic_knot requires a closed curve");
    return !kernel_tangency_set(c, threshold).covers_circle;
}

double embeddedness_check(const DiscreteCurve& c, double t_sep) {
    if (!(t_sep > 0 && t_sep < 0.25))
        throw Error(ErrorCategory::InvalidInput, "t_sep must lie in (0, 1/4)");
    const std::size_t n = c.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dt = c.params[j] - c.params[i];
            if (c.closed) dt = std::min(dt, 1.0 - dt);
            if (dt < t_sep) continue;
            best = std::min(best, (c.samples[j] - c.samples[i]).norm());
        }
    }
    return std::isfinite(best) ? best : 0.0;
}

FormalEngelKnot scanning(const DiscreteCurve& c, double tol) {
    const DefectReport rep = curve_defect(c);
    if (rep.max_angle > tol)
        throw Error(ErrorCategory::ConstraintViolation,
                    "scanning requires an Engel curve (max angle " +
                        std::to_string(rep.max_angle) + " > tol)");
    const auto tangents = curve_tangents(c);
    FormalEngelKnot fk;
    fk.curve = c;
    fk.f1.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        // c' = a X + b W reads off the (x, w) components: a = x', b = w'.
        fk.f1[j] = {tangents[j].x, tangents[j].w};
    }
    return fk;
}

DiscreteCurve perturb_generic(const DiscreteCurve& c, double amplitude,
                              std::uint64_t seed) {
    c.validate();
    Rng rng(seed);
    // Low-frequency trigonometric perturbation: C-infinity small on the grid.
    const int modes = 3;
    std::array<std::array<double, 4>, 3> ac{}, bc{};
    for (int m = 0; m < modes; ++m)
        for (int i = 0; i < 4; ++i) {
            ac[m][i] = rng.uniform(-1.0, 1.0);
            bc[m][i] = rng.uniform(-1.0, 1.0);
        }
    DiscreteCurve out = c;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double t = c.params[j];
        for (int m = 0; m < modes; ++m) {
            const double cs = std::cos(2 * M_PI * (m + 1) * t);
            const double sn = std::sin(2 * M_PI * (m + 1) * t);
            for (int i = 0; i < 4; ++i)
                out.samples[j][i] += amplitude * (ac[m][i] * cs + bc[m][i] * sn);
        }
    }
    return out;
}

}  // namespace engel
