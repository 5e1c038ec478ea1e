#include "engel/numerics.hpp"

#include <cassert>

namespace engel {

void DiscreteCurve::validate() const {
    if (samples.size() < 16)
        throw Error(ErrorCategory::InvalidInput, "curve needs at least 16 samples");
    if (params.size() != samples.size())
        throw Error(ErrorCategory::InvalidInput, "params/samples size mismatch");
    for (std::size_t j = 0; j < samples.size(); ++j) {
        if (!samples[j].finite())
            throw Error(ErrorCategory::InvalidInput,
                        "non-finite coordinate at sample " + std::to_string(j));
        if (j > 0 && !(params[j] > params[j - 1]))
            throw Error(ErrorCategory::InvalidInput,
                        "params not strictly increasing at index " + std::to_string(j));
    }
    const std::size_t n = samples.size();
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if ((samples[j + 1] - samples[j]).norm() == 0.0)
            throw Error(ErrorCategory::InvalidInput,
                        "duplicated consecutive sample at index " + std::to_string(j));
    }
    if (closed && (samples[0] - samples[n - 1]).norm() == 0.0)
        throw Error(ErrorCategory::InvalidInput,
                    "closed curve has duplicated endpoint sample");
}

void FormalEngelKnot::validate() const {
    curve.validate();
    if (f1.size() != curve.size())
        throw Error(ErrorCategory::InvalidInput, "F1 coefficient count mismatch");
    const std::size_t n = f1.size();
    double prev_angle = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = f1[j][0], b = f1[j][1];
        if (a == 0.0 && b == 0.0)
            throw Error(ErrorCategory::InvalidInput,
                        "F1 vanishes at sample " + std::to_string(j));
        const double ang = std::atan2(b, a);
        if (j > 0) {
            double d = ang - prev_angle;
            while (d > M_PI) d -= 2 * M_PI;
            while (d < -M_PI) d += 2 * M_PI;
            // line angle jump: reduce mod pi
            if (d > M_PI / 2) d -= M_PI;
            if (d < -M_PI / 2) d += M_PI;
            if (std::abs(d) >= M_PI / 2)
                throw Error(ErrorCategory::InvalidInput,
                            "F1 angular jump >= pi/2 at sample " + std::to_string(j));
        }
        prev_angle = ang;
    }
}

std::vector<Vec4> curve_tangents(const DiscreteCurve& c) {
    const std::size_t n = c.size();
    std::vector<Vec4> d(n);
    if (c.closed) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t jp = (j + 1) % n;
            const std::size_t jm = (j + n - 1) % n;
            double tp = c.params[jp] + (jp < j ? 1.0 : 0.0);
            double tm = c.params[jm] - (jm > j ? 1.0 : 0.0);
            d[j] = (c.samples[jp] - c.samples[jm]) * (1.0 / (tp - tm));
        }
    } else {
        for (std::size_t j = 1; j + 1 < n; ++j)
            d[j] = (c.samples[j + 1] - c.samples[j - 1]) *
                   (1.0 / (c.params[j + 1] - c.params[j - 1]));
        // second-order one-sided stencils, uniform grid assumed at the ends
        const double h0 = c.params[1] - c.params[0];
        d[0] = (c.samples[0] * -3.0 + c.samples[1] * 4.0 + c.samples[2] * -1.0) *
               (1.0 / (2.0 * h0));
        const double h1 = c.params[n - 1] - c.params[n - 2];
        d[n - 1] = (c.samples[n - 1] * 3.0 + c.samples[n - 2] * -4.0 + c.samples[n - 3]) *
                   (1.0 / (2.0 * h1));
    }
    return d;
}

std::vector<double> scalar_derivative(const std::vector<double>& f,
                                      const std::vector<double>& params, bool closed) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    if (closed) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t jp = (j + 1) % n;
            const std::size_t jm = (j + n - 1) % n;
            double tp = params[jp] + (jp < j ? 1.0 : 0.0);
            double tm = params[jm] - (jm > j ? 1.0 : 0.0);
            d[j] = (f[jp] - f[jm]) / (tp - tm);
        }
    } else {
        for (std::size_t j = 1; j + 1 < n; ++j)
            d[j] = (f[j + 1] - f[j - 1]) / (params[j + 1] - params[j - 1]);
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * (params[1] - params[0]));
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) /
                   (2.0 * (params[n - 1] - params[n - 2]));
    }
    return d;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& f,
                                         const std::vector<double>& g,
                                         std::size_t j0, double v0, bool closed) {
    const std::size_t n = f.size();
    std::vector<double> out(n);
    out[j0] = v0;
    if (!closed) {
        for (std::size_t j = j0; j + 1 < n; ++j)
            out[j + 1] = out[j] + 0.5 * (f[j] + f[j + 1]) * (g[j + 1] - g[j]);
        for (std::size_t j = j0; j > 0; --j)
            out[j - 1] = out[j] - 0.5 * (f[j - 1] + f[j]) * (g[j] - g[j - 1]);
    } else {
        for (std::size_t s = 0; s + 1 < n; ++s) {
            const std::size_t j = (j0 + s) % n;
            const std::size_t jp = (j + 1) % n;
            out[jp] = out[j] + 0.5 * (f[j] + f[jp]) * (g[jp] - g[j]);
        }
    }
    return out;
}

double loop_trapezoid(const std::vector<double>& f, const std::vector<double>& g) {
    const std::size_t n = f.size();
    double acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1) % n;
        acc += 0.5 * (f[j] + f[jp]) * (g[jp] - g[j]);
    }
    return acc;
}

}  // namespace engel
