#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace engel {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorCategory {
    InvalidInput,         // malformed or out-of-contract arguments
    ConstraintViolation,  // geometric precondition failed (non-Engel input, ...)
    Budget,               // C0 budget would be exceeded
    Cusp,                 // vertical tangency in a front that must be graphical
    Placement,            // surgery support collision
    Capacity,             // controller target beyond configured capacity
    Lookup,               // unknown kink / controller handle
    Configuration,        // inconsistent configuration values
    Resolution,           // sample count too small for the requested tolerance
    Parse,                // file / schema error
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& msg)
        : std::runtime_error(msg), category_(cat) {}
    ErrorCategory category() const { return category_; }

    // CLI exit-code convention: 2 malformed input, 3 configuration, 1 the rest.
    int exit_code() const {
        switch (category_) {
            case ErrorCategory::Parse: return 2;
            case ErrorCategory::InvalidInput: return 2;
            case ErrorCategory::Configuration: return 3;
            default: return 1;
        }
    }

private:
    ErrorCategory category_;
};

// ---------------------------------------------------------------------------
// Points and vectors in the Darboux chart
// ---------------------------------------------------------------------------

struct Vec4 {
    double x = 0, y = 0, z = 0, w = 0;

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    Vec4 operator+(const Vec4& o) const { return {x + o.x, y + o.y, z + o.z, w + o.w}; }
    Vec4 operator-(const Vec4& o) const { return {x - o.x, y - o.y, z - o.z, w - o.w}; }
    Vec4 operator*(double s) const { return {x * s, y * s, z * s, w * s}; }
    Vec4& operator+=(const Vec4& o) { x += o.x; y += o.y; z += o.z; w += o.w; return *this; }

    double dot(const Vec4& o) const { return x * o.x + y * o.y + z * o.z + w * o.w; }
    double norm() const { return std::sqrt(dot(*this)); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && std::isfinite(w);
    }
};

inline Vec4 operator*(double s, const Vec4& v) { return v * s; }

// A point of the Darboux chart (x,y,z,w); dimensionless model units.
using Point4 = Vec4;

// ---------------------------------------------------------------------------
// Discrete curves
// ---------------------------------------------------------------------------

// Uniformly sampled (by default) curve in R^4 Darboux coordinates.  Closed
// curves are periodic: sample 0 follows sample N-1, no duplicated endpoint.
struct DiscreteCurve {
    std::vector<Point4> samples;
    std::vector<double> params;  // strictly increasing values in [0,1]
    bool closed = false;

    std::size_t size() const { return samples.size(); }

    // Parameter step from sample j to j+1 (wrapping for closed curves,
    // where the period is 1).
    double step(std::size_t j) const {
        const std::size_t n = samples.size();
        if (j + 1 < n) return params[j + 1] - params[j];
        return closed ? (params[0] + 1.0) - params[n - 1] : 0.0;
    }

    static DiscreteCurve uniform(std::vector<Point4> pts, bool closed_flag) {
        DiscreteCurve c;
        c.closed = closed_flag;
        const std::size_t n = pts.size();
        c.samples = std::move(pts);
        c.params.resize(n);
        // closed: t_j = j/n over the period; open: t_j = j/(n-1)
        const double denom = closed_flag ? double(n) : double(n - 1);
        for (std::size_t j = 0; j < n; ++j) c.params[j] = double(j) / denom;
        return c;
    }

    void validate() const;
};

// Formal data: the target tangent line F1 expressed in the Darboux frame
// {X, W}; F0 = dgamma is implicit.
struct FormalEngelKnot {
    DiscreteCurve curve;
    std::vector<std::array<double, 2>> f1;  // (a_j, b_j), never both zero

    void validate() const;
};

// Parameter interval [lo, hi]; for closed curves hi may exceed 1 (wrap).
struct ParamInterval {
    double lo = 0, hi = 0;
    double length() const { return hi - lo; }
};

// Intervals where the tangent is within a threshold angle of ker(D) = <d_w>.
struct TangencySet {
    std::vector<ParamInterval> intervals;
    bool covers_circle = false;
    bool empty() const { return intervals.empty() && !covers_circle; }
};

// Aggregated per-curve diagnostics.
struct DefectReport {
    std::vector<double> angles;   // per-sample tangency angle, radians
    double max_angle = 0;
    double closure_dz = 0;        // signed, model units; 0 for open arcs
    double closure_dy = 0;
    double min_separation = 0;    // smallest parameter-separated pair distance
    double c0_distance = 0;       // sup distance to the reference, if given
};

}  // namespace engel
