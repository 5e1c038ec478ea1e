#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "engel/core_geometry.hpp"
#include "engel/types.hpp"

namespace engel {

struct EngelizeConfig {
    double eps = 0.2;            // epsilon of the epsilon-Engel relation
    double eta = 0.05;           // C0 budget, model units
    double tol_engel = kTolEngel;
    int n_wrinkles = 16;         // kinks at t_i = i/N, controllers at (2i+1)/2N
    double a0 = 0.01;            // base controller area
    std::uint64_t seed = 0;
    double delta_collar = 0.02;  // collar width (parameter units)

    // Detection thresholds; defaults are the artifact-wide constants.
    double kernel_threshold = 0.15;  // radians, tangency-locus detection
    int max_wrinkles = 256;          // auto-doubling cap for n_wrinkles

    void validate() const;
};

// One surgery event, for run reports.
struct SurgeryEvent {
    std::string kind;    // "repair-window", "kink", "controller", "stabilization"
    double t = 0;        // parameter position
    double width = 0;
    double amplitude = 0;
};

struct SurgeryLog {
    std::vector<SurgeryEvent> events;
    int wrinkles_used = 0;        // final N after auto-doubling
    double corrugation_freq = 0;  // convex_integrate instrumentation
    bool empty() const { return events.empty(); }
};

struct CurveFamily {
    std::vector<DiscreteCurve> members;  // over k_i uniform in [0,1]
    bool boundary_engel_lo = false;      // k = 0 member is Engel
    bool boundary_engel_hi = false;      // k = 1 member is Engel
};

// Constructive convex-integration substitute for the epsilon-relation:
// superimpose corrugations along the F1 line inside D so every tangent lies
// in the closed eps-cone while the curve moves at most eta in C0.
DiscreteCurve convex_integrate(const FormalEngelKnot& fk, const EngelizeConfig& cfg,
                               SurgeryLog* log = nullptr);

// Make the curve genuinely Engel on a neighbourhood of every kernel-tangency
// interval (make_engel_near driven by kernel_tangency_set).
DiscreteCurve repair_tangency_locus(const DiscreteCurve& c, const EngelizeConfig& cfg,
                                    SurgeryLog* log = nullptr);

// Full extension pipeline: tangency repair, wrinkles at i/N, slope
// realization, area controllers at (2i+1)/2N, closure solve, lift, verify.
std::pair<DiscreteCurve, DefectReport> engelize(const DiscreteCurve& c,
                                                const EngelizeConfig& cfg,
                                                SurgeryLog* log = nullptr);

// 1-parameter family version with relative boundary: members flagged Engel at
// k = 0, 1 are returned bit-identical.
CurveFamily engelize_family(const CurveFamily& fam, const EngelizeConfig& cfg,
                            std::vector<SurgeryLog>* logs = nullptr);

// Linear-response model check hook: predicted closure change per unit of
// detuned controller area, measured against an actual re-run.  Exposed for
// the acceptance suite.
struct ControllerResponse {
    double predicted = 0;  // model: d(closure)/d(area target)
    double measured = 0;
};
ControllerResponse measure_controller_response(const DiscreteCurve& c,
                                               const EngelizeConfig& cfg);

}  // namespace engel
