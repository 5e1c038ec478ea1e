// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances and budgets are pinned here on purpose.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "engel/core_geometry.hpp"
#include "engel/curve_io.hpp"
#include "engel/engelization.hpp"
#include "engel/legendrian.hpp"
#include "engel/numerics.hpp"
#include "engel/projections.hpp"
#include "engel/surgery.hpp"

using namespace engel;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
    int id;
    bool pass;
    std::string detail;
};

// ---------------------------------------------------------------------------
// shared builders
// ---------------------------------------------------------------------------

// Closed slope profile over x = cos(2 pi t): the two closure defects are
// linear in w, so two correction modes solve them exactly.  The sin(6 pi t)
// term keeps w' nonzero at the x-turning points (the solve removes the
// sin(2 pi t) and sin(4 pi t) components).
std::vector<double> closed_profile(const std::vector<double>& params,
                                   const std::vector<double>& x, double ph1,
                                   double ph2) {
    const std::size_t n = params.size();
    LagrangianPlaneCurve l;
    l.closed = true;
    l.params = params;
    l.x = x;
    l.w.resize(n);
    auto fill_w = [&](auto&& f) {
        for (std::size_t j = 0; j < n; ++j) l.w[j] = f(params[j]);
    };
    auto w0 = [&](double t) {
        return 0.8 * std::sin(2 * M_PI * t + ph1) + 0.5 * std::cos(4 * M_PI * t + ph2) +
               0.3 * std::sin(6 * M_PI * t + ph1 - ph2);
    };
    auto g1 = [](double t) { return std::sin(2 * M_PI * t); };
    auto g2 = [](double t) { return std::sin(4 * M_PI * t); };
    fill_w(w0);
    const auto [dz0, dy0] = closure_defects(l, 0.0);
    fill_w(g1);
    const auto [dz1, dy1] = closure_defects(l, 0.0);
    fill_w(g2);
    const auto [dz2, dy2] = closure_defects(l, 0.0);
    const double det = dz1 * dy2 - dz2 * dy1;
    const double a = (-dz0 * dy2 + dz2 * dy0) / det;
    const double b = (-dz1 * dy0 + dz0 * dy1) / det;
    fill_w([&](double t) { return w0(t) + a * g1(t) + b * g2(t); });
    return l.w;
}

DiscreteCurve engel_loop(std::size_t n, double ph1, double ph2) {
    std::vector<double> params(n), x(n);
    for (std::size_t j = 0; j < n; ++j) {
        params[j] = double(j) / double(n);
        x[j] = std::cos(2 * M_PI * params[j]);
    }
    LagrangianPlaneCurve l;
    l.closed = true;
    l.params = params;
    l.x = x;
    l.w = closed_profile(params, x, ph1, ph2);
    return lagrangian_lift(l, 0.1, -0.2, 0.0);
}

bool samples_equal(const DiscreteCurve& a, const DiscreteCurve& b, std::size_t j) {
    return a.samples[j].x == b.samples[j].x && a.samples[j].y == b.samples[j].y &&
           a.samples[j].z == b.samples[j].z && a.samples[j].w == b.samples[j].w;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunReport make_report(const std::string& command, const EngelizeConfig& cfg,
                      const DefectReport& before, const DefectReport& after,
                      const SurgeryLog& log) {
    RunReport r;
    r.command = command;
    r.config["eps"] = fmt(cfg.eps);
    r.config["eta"] = fmt(cfg.eta);
    r.config["n_wrinkles"] = fmt(cfg.n_wrinkles);
    r.config["tol"] = fmt(cfg.tol_engel);
    r.seed = cfg.seed;
    r.before = before;
    r.after = after;
    r.surgeries = log;
    return r;
}

// ---------------------------------------------------------------------------
// criterion 1: tangency angle against the brute-force plane-angle oracle
// ---------------------------------------------------------------------------

Criterion criterion1() {
    const auto t0 = Clock::now();
    Rng rng(1);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        Point4 p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                 rng.uniform(-2, 2)};
        Vec4 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
               rng.uniform(-1, 1)};
        if (v.norm() < 1e-3) {
            v.x += 1.0;
        }
        const EngelFrame fr = engel_frame(p);
        double best = M_PI;
        for (int i = 0; i < 20000; ++i) {
            const double th = M_PI * i / 20000;
            const Vec4 u = fr.X * (std::cos(th) / fr.X.norm()) + fr.W * std::sin(th);
            const double c = std::min(1.0, std::abs(v.dot(u)) / v.norm());
            best = std::min(best, std::acos(c));
        }
        worst = std::max(worst, std::abs(tangency_angle(p, v) - best));
    }
    const double dt = seconds_since(t0);
    const bool pass = worst < 1e-6 && dt < 5.0;
    std::ostringstream ss;
    ss << "tangency_angle vs oracle, 1000 inputs: max deviation " << worst << ", "
       << dt << " s";
    return {1, pass, ss.str()};
}

// ---------------------------------------------------------------------------
// criterion 2: projection/lift round trips with second-order refinement
// ---------------------------------------------------------------------------

double front_round_trip_error(std::size_t n) {
    Front f;
    f.closed = false;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = double(j) / double(n - 1);
        f.params.push_back(t);
        f.x.push_back(t);
        f.z.push_back(0.3 * std::sin(2 * M_PI * t));
    }
    const DiscreteCurve c = front_lift(f, -0.2, 0.0);
    double err = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = f.params[j];
        const double w_ref = 0.6 * M_PI * std::cos(2 * M_PI * t);
        const double y_ref = -0.2 + 0.3 * (1.0 - std::cos(2 * M_PI * t)) / (2 * M_PI);
        err = std::max(err, std::abs(c.samples[j].w - w_ref));
        err = std::max(err, std::abs(c.samples[j].y - y_ref));
    }
    return err;
}

double lagrangian_round_trip_error(std::size_t n) {
    LagrangianPlaneCurve l;
    l.closed = true;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = double(j) / double(n);
        l.params.push_back(t);
        l.x.push_back(std::cos(2 * M_PI * t));
        l.w.push_back(std::sin(2 * M_PI * t));
    }
    const DiscreteCurve c = lagrangian_lift(l, 0.0, 0.0, 0.0);
    double err = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = l.params[j];
        const double z_ref = -M_PI * t + 0.25 * std::sin(4 * M_PI * t);
        err = std::max(err, std::abs(c.samples[j].z - z_ref));
    }
    return err;
}

Criterion criterion2() {
    const auto t0 = Clock::now();
    const double f1 = front_round_trip_error(2048);
    const double f2 = front_round_trip_error(4096);
    const double tf = seconds_since(t0);
    const auto t1 = Clock::now();
    const double l1 = lagrangian_round_trip_error(2048);
    const double l2 = lagrangian_round_trip_error(4096);
    const double tl = seconds_since(t1);
    const bool pass = f1 <= 1e-5 && l1 <= 1e-5 && f1 / f2 >= 3.0 && l1 / l2 >= 3.0 &&
                      tf < 2.0 && tl < 2.0;
    std::ostringstream ss;
    ss << "round trips at N=2048: front err " << f1 << " (ratio " << f1 / f2
       << "), lagrangian err " << l1 << " (ratio " << l1 / l2 << "), " << tf + tl
       << " s";
    return {2, pass, ss.str()};
}

// ---------------------------------------------------------------------------
// criterion 3: make_engel_near window suite
// ---------------------------------------------------------------------------

Criterion criterion3() {
    const auto t0 = Clock::now();
    Rng rng(3);
    bool pass = true;
    std::string why;
    for (int k = 0; k < 20 && pass; ++k) {
        const std::size_t n = 2048;
        DiscreteCurve c = engel_loop(n, rng.uniform(0, 2 * M_PI), rng.uniform(0, 2 * M_PI));
        const double amp = rng.uniform(0.01, 0.03);
        const double ph = rng.uniform(0, 2 * M_PI);
        for (std::size_t j = 0; j < n; ++j) {
            const double t = c.params[j];
            c.samples[j].z += amp * std::sin(2 * M_PI * t + ph);
            c.samples[j].y += amp * std::cos(2 * M_PI * t - ph);
        }
        const BlendWindow win{0.15, 0.35, 0.05};
        const DiscreteCurve out = make_engel_near(c, win);
        const DefectReport rep = curve_defect(out);
        for (std::size_t j = 0; j < n; ++j) {
            const double t = out.params[j];
            if (t >= win.a + 0.02 && t <= win.b - 0.02 && rep.angles[j] > 1e-3) {
                pass = false;
                why = "inner window angle " + fmt(rep.angles[j]);
            }
            if ((t < win.a - win.delta - 1e-9 || t > win.b + win.delta + 1e-9) &&
                !samples_equal(out, c, j)) {
                pass = false;
                why = "sample outside the collar changed";
            }
        }
        // C0 perturbation shrinks monotonically with the window size
        double prev = 1e30;
        for (double len : {0.2, 0.1, 0.05}) {
            const DiscreteCurve o =
                make_engel_near(c, {0.25 - len / 2, 0.25 + len / 2, 0.05});
            double d = 0;
            for (std::size_t j = 0; j < n; ++j)
                d = std::max(d, (o.samples[j] - c.samples[j]).norm());
            if (!(d < prev)) {
                pass = false;
                why = "C0 perturbation not monotone in the window size";
            }
            prev = d;
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= 5.0) {
        pass = false;
        why = "too slow";
    }
    std::ostringstream ss;
    ss << "make_engel_near, 20 seeded curves x 3 window sizes";
    if (!why.empty()) ss << ": " << why;
    ss << ", " << dt << " s";
    return {3, pass, ss.str()};
}

// ---------------------------------------------------------------------------
// criterion 4 (+ stash for 6 and 10): the 100-curve corpus sweep
// ---------------------------------------------------------------------------

struct CorpusRun {
    bool pass = true;
    std::string why;
    double dt = 0;
    std::vector<DiscreteCurve> inputs, outputs;
    std::vector<SurgeryLog> logs;
    std::string report_bytes;
};

CorpusRun run_corpus(bool keep_curves) {
    CorpusRun run;
    const auto t0 = Clock::now();
    const EngelizeConfig cfg;  // eps 0.2, eta 0.05, tol 1e-3
    for (int i = 0; i < 100 && run.pass; ++i) {
        const DiscreteCurve c = gen_corpus_curve(42, i, 0.2, 4096);
        SurgeryLog log;
        DiscreteCurve out;
        DefectReport rep;
        try {
            std::tie(out, rep) = engelize(c, cfg, &log);
        } catch (const Error& e) {
            run.pass = false;
            run.why = "curve " + std::to_string(i) + ": " + e.what();
            break;
        }
        double c0 = 0;
        for (std::size_t j = 0; j < c.size(); ++j)
            c0 = std::max(c0, (out.samples[j] - c.samples[j]).norm());
        if (rep.max_angle > 1e-3 || std::abs(rep.closure_dz) > 1e-8 ||
            std::abs(rep.closure_dy) > 1e-8 || !(rep.min_separation > 0) ||
            c0 > cfg.eta) {
            run.pass = false;
            run.why = "curve " + std::to_string(i) + " postcondition: angle " +
                      fmt(rep.max_angle) + " dz " + fmt(rep.closure_dz) + " c0 " +
                      fmt(c0);
        }
        run.report_bytes += make_report("engelize", cfg, curve_defect(c), rep, log).to_json();
        run.report_bytes += "\n";
        if (keep_curves) {
            run.inputs.push_back(c);
            run.outputs.push_back(out);
            run.logs.push_back(log);
        }
    }
    run.dt = seconds_since(t0);
    return run;
}

Criterion criterion4(const CorpusRun& run) {
    bool pass = run.pass && run.dt < 120.0;
    std::ostringstream ss;
    ss << "engelize over 100 corpus curves (seed 42, eps 0.2, N=4096)";
    if (!run.why.empty()) ss << ": " << run.why;
    ss << ", " << run.dt << " s";
    return {4, pass, ss.str()};
}

// ---------------------------------------------------------------------------
// criterion 5: the Lagrangian circle with dz = -pi
// ---------------------------------------------------------------------------

Criterion criterion5() {
    const std::size_t n = 4096;
    LagrangianPlaneCurve l;
    l.closed = true;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = double(j) / double(n);
        l.params.push_back(t);
        l.x.push_back(std::cos(2 * M_PI * t));
        l.w.push_back(std::sin(2 * M_PI * t));
    }
    const auto [dz, dy] = closure_defects(l, 0.0);
    bool pass = std::abs(dz + M_PI) < 1e-5;  // signed-area oracle
    std::string why = pass ? "" : "dz oracle missed: " + fmt(dz);

    // distribute the holonomy over a graphical stretch so the data closes,
    // then ask engelize to produce a genuine Engel loop
    DiscreteCurve c = lagrangian_lift(l, 0.0, 0.0, 0.0);
    // half the holonomy on each monotone half of the circle keeps the ramp
    // slopes (and hence the tangency angles) moderate
    auto ramp = [](double t) {
        return 0.5 * (smoothstep_inf((t - 0.05) / 0.4) +
                      smoothstep_inf((t - 0.55) / 0.4));
    };
    for (std::size_t j = 0; j < n; ++j) c.samples[j].z -= dz * ramp(c.params[j]);
    {
        LagrangianPlaneCurve lz = lagrangian_project(geiges_project(c));
        const auto [dz2, dy2] = closure_defects(lz, c.samples[0].z);
        (void)dz2;
        for (std::size_t j = 0; j < n; ++j) c.samples[j].y -= dy2 * ramp(c.params[j]);
    }
    EngelizeConfig cfg;
    cfg.eps = 1.45;
    cfg.eta = 10.0;
    DefectReport rep;
    DiscreteCurve out;
    if (pass) {
        try {
            std::tie(out, rep) = engelize(c, cfg);
            if (std::abs(rep.closure_dz) > 1e-8 || std::abs(rep.closure_dy) > 1e-8) {
                pass = false;
                why = "closure after engelize: " + fmt(rep.closure_dz) + ", " +
                      fmt(rep.closure_dy);
            }
        } catch (const Error& e) {
            pass = false;
            why = e.what();
        }
    }
    // linear-response model of the area controllers
    ControllerResponse resp;
    if (pass) {
        resp = measure_controller_response(out, cfg);
        if (std::abs(resp.predicted - resp.measured) > 1e-6) {
            pass = false;
            why = "controller response " + fmt(resp.predicted) + " vs " +
                  fmt(resp.measured);
        }
    }
    std::ostringstream ss;
    ss << "circle dz=-pi: oracle gap " << std::abs(dz + M_PI)
       << ", controller response gap " << std::abs(resp.predicted - resp.measured);
    if (!why.empty()) ss << ": " << why;
    return {5, pass, ss.str()};
}

// ---------------------------------------------------------------------------
// criterion 6: locality and honest budget errors on the corpus
// ---------------------------------------------------------------------------

Criterion criterion6(const CorpusRun& run) {
    bool pass = run.pass;
    std::string why = run.why;
    std::size_t untouched_total = 0;
    for (std::size_t i = 0; i < run.inputs.size() && pass; ++i) {
        const DiscreteCurve& c = run.inputs[i];
        const DiscreteCurve& out = run.outputs[i];
        const SurgeryLog& log = run.logs[i];
        std::size_t untouched = 0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            double dist = 1e30;
            for (const auto& ev : log.events) {
                double dt = std::abs(out.params[j] - ev.t);
                dt = std::min(dt, 1.0 - dt);
                dist = std::min(dist, dt - ev.width);
            }
            if (dist > 0.16) {
                ++untouched;
                if (!samples_equal(out, c, j)) {
                    pass = false;
                    why = "curve " + std::to_string(i) +
                          ": sample away from all surgeries changed, t = " +
                          fmt(out.params[j]);
                }
            }
        }
        untouched_total += untouched;
    }
    if (pass && untouched_total == 0) {
        pass = false;
        why = "no margin subarcs found at all";
    }
    // a violated C0 budget must raise, never pass silently
    if (pass) {
        EngelizeConfig tight;
        tight.eta = 1e-6;
        try {
            engelize(gen_corpus_curve(42, 0, 0.2, 4096), tight);
            pass = false;
            why = "tiny eta did not raise a budget error";
        } catch (const Error& e) {
            if (e.category() != ErrorCategory::Budget) {
                pass = false;
                why = std::string("wrong error category: ") + e.what();
            }
        }
    }
    std::ostringstream ss;
    ss << "locality on 100 corpus curves: " << untouched_total
       << " margin samples verified bit-identical, budget violations raise";
    if (!why.empty()) ss << ": " << why;
    return {6, pass, ss.str()};
}

// ---------------------------------------------------------------------------
// criterion 7 (+ report for 10): the 11-member family
// ---------------------------------------------------------------------------

struct FamilyRun {
    bool pass = true;
    std::string why;
    double dt = 0;
    std::string report_bytes;
};

FamilyRun run_family() {
    FamilyRun run;
    const auto t0 = Clock::now();
    const std::size_t n = 2048, K = 11;
    std::vector<double> params(n), x(n);
    for (std::size_t j = 0; j < n; ++j) {
        params[j] = double(j) / double(n);
        x[j] = std::cos(2 * M_PI * params[j]);
    }
    const auto w_lo = closed_profile(params, x, 0.7, 1.3);
    const auto w_hi = closed_profile(params, x, -0.4, 2.1);
    CurveFamily fam;
    fam.boundary_engel_lo = fam.boundary_engel_hi = true;
    for (std::size_t k = 0; k < K; ++k) {
        const double s = double(k) / double(K - 1);
        LagrangianPlaneCurve l;
        l.closed = true;
        l.params = params;
        l.x = x;
        l.w.resize(n);
        for (std::size_t j = 0; j < n; ++j) l.w[j] = (1.0 - s) * w_lo[j] + s * w_hi[j];
        DiscreteCurve c = lagrangian_lift(l, 0.1, -0.2, 0.0);
        const double amp = 0.005 * std::sin(M_PI * s);
        for (std::size_t j = 0; j < n; ++j)
            c.samples[j].z += amp * bump_inf((params[j] - 0.2) / 0.06);
        fam.members.push_back(std::move(c));
    }
    double max_adj_in = 0;
    for (std::size_t k = 0; k + 1 < K; ++k) {
        double d = 0;
        for (std::size_t j = 0; j < n; ++j)
            d = std::max(d,
                         (fam.members[k + 1].samples[j] - fam.members[k].samples[j]).norm());
        max_adj_in = std::max(max_adj_in, d);
    }

    const EngelizeConfig cfg;
    std::vector<SurgeryLog> logs;
    CurveFamily out;
    try {
        out = engelize_family(fam, cfg, &logs);
    } catch (const Error& e) {
        run.pass = false;
        run.why = e.what();
        run.dt = seconds_since(t0);
        return run;
    }
    for (std::size_t j = 0; j < n && run.pass; ++j) {
        if (!samples_equal(out.members.front(), fam.members.front(), j) ||
            !samples_equal(out.members.back(), fam.members.back(), j)) {
            run.pass = false;
            run.why = "boundary member changed";
        }
    }
    for (std::size_t k = 0; k < K && run.pass; ++k) {
        const DefectReport rep = curve_defect(out.members[k]);
        if (rep.max_angle > 1e-3 || std::abs(rep.closure_dz) > 1e-8 ||
            std::abs(rep.closure_dy) > 1e-8) {
            run.pass = false;
            run.why = "member " + std::to_string(k) + " angle " + fmt(rep.max_angle);
        }
        run.report_bytes +=
            make_report("engelize-family", cfg, curve_defect(fam.members[k]), rep,
                        k < logs.size() ? logs[k] : SurgeryLog{})
                .to_json();
        run.report_bytes += "\n";
    }
    for (std::size_t k = 0; k + 1 < K && run.pass; ++k) {
        double d = 0;
        for (std::size_t j = 0; j < n; ++j)
            d = std::max(d,
                         (out.members[k + 1].samples[j] - out.members[k].samples[j]).norm());
        if (d > 2.0 * max_adj_in + 1e-9) {
            run.pass = false;
            run.why = "adjacent members drifted to " + fmt(d) + " (input bound " +
                      fmt(max_adj_in) + ")";
        }
    }
    run.dt = seconds_since(t0);
    return run;
}

Criterion criterion7(const FamilyRun& run) {
    const bool pass = run.pass && run.dt < 60.0;
    std::ostringstream ss;
    ss << "11-member family with relative boundary";
    if (!run.why.empty()) ss << ": " << run.why;
    ss << ", " << run.dt << " s";
    return {7, pass, ss.str()};
}

// ---------------------------------------------------------------------------
// criterion 8: convex integration suite
// ---------------------------------------------------------------------------

Criterion criterion8() {
    const auto t0 = Clock::now();
    Rng rng(8);
    bool pass = true;
    std::string why;
    EngelizeConfig cfg;
    cfg.eps = 0.3;
    cfg.eta = 0.05;
    // 20 already-Engel cases: bit-identical passthrough
    for (int k = 0; k < 20 && pass; ++k) {
        const DiscreteCurve c =
            engel_loop(1024, rng.uniform(0, 2 * M_PI), rng.uniform(0, 2 * M_PI));
        const FormalEngelKnot fk = scanning(c);
        const DiscreteCurve out = convex_integrate(fk, cfg);
        for (std::size_t j = 0; j < c.size(); ++j)
            if (!samples_equal(out, c, j)) {
                pass = false;
                why = "identity case " + std::to_string(k) + " changed a sample";
            }
    }
    // 30 active cases: straight segments in random directions
    for (int k = 0; k < 30 && pass; ++k) {
        const std::size_t n = 2048;
        Vec4 d{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
               rng.uniform(-1, 1)};
        if (d.norm() < 0.1) d.y += 1.0;
        d = d * (1.0 / d.norm());
        const Point4 p0{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                        rng.uniform(-1, 1)};
        FormalEngelKnot fk;
        fk.curve.closed = false;
        for (std::size_t j = 0; j < n; ++j) {
            const double t = double(j) / double(n - 1);
            fk.curve.params.push_back(t);
            fk.curve.samples.push_back(p0 + d * t);
            fk.f1.push_back({1.0, 0.0});
        }
        SurgeryLog log;
        DiscreteCurve out;
        try {
            out = convex_integrate(fk, cfg, &log);
        } catch (const Error& e) {
            pass = false;
            why = "active case " + std::to_string(k) + ": " + e.what();
            break;
        }
        const DefectReport rep = curve_defect(out, &fk.curve);
        if (rep.max_angle > cfg.eps) {
            pass = false;
            why = "active case " + std::to_string(k) + " left the eps cone: " +
                  fmt(rep.max_angle);
        }
        if (rep.c0_distance > cfg.eta) {
            pass = false;
            why = "active case " + std::to_string(k) + " exceeded eta: " +
                  fmt(rep.c0_distance);
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= 10.0) {
        pass = false;
        why = "too slow";
    }
    std::ostringstream ss;
    ss << "convex_integrate, 20 identity + 30 active cases";
    if (!why.empty()) ss << ": " << why;
    ss << ", " << dt << " s";
    return {8, pass, ss.str()};
}

// ---------------------------------------------------------------------------
// criterion 9 (+ report for 10): Legendrian layer
// ---------------------------------------------------------------------------

struct LegendrianRun {
    bool pass = true;
    std::string why;
    double dt = 0;
    std::string report_bytes;
};

LegendrianCurve planar_loop(std::size_t n, double e1, double e2, double ph) {
    std::vector<double> x(n), y(n), params(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = double(j) / double(n);
        params[j] = t;
        x[j] = std::cos(2 * M_PI * t) + e1 * std::cos(4 * M_PI * t + ph);
        y[j] = std::sin(2 * M_PI * t) + e2 * std::sin(4 * M_PI * t - ph);
    }
    return action_lift(x, y, params, true, 0.0, 0.0);
}

LegendrianRun run_legendrian() {
    LegendrianRun run;
    const auto t0 = Clock::now();

    // action lift round trip
    auto lift_error = [](std::size_t n) {
        std::vector<double> x(n), y(n), params(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double t = double(j) / double(n - 1);
            params[j] = t;
            x[j] = t;
            y[j] = 0.3 * std::sin(2 * M_PI * t);
        }
        const LegendrianCurve c = action_lift(x, y, params, false, 0.1, 0.0);
        double err = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double z_ref =
                0.1 + 0.3 * (1.0 - std::cos(2 * M_PI * params[j])) / (2 * M_PI);
            err = std::max(err, std::abs(c.z[j] - z_ref));
        }
        return err;
    };
    const double e = lift_error(2048);
    if (e > 1e-5) {
        run.pass = false;
        run.why = "action lift round trip error " + fmt(e);
    }
    run.report_bytes += "action_lift sup error " + fmt(e) + "\n";

    // 40 seeded stabilizations: rotation number moves by exactly the sign
    Rng rng(9);
    for (int k = 0; k < 40 && run.pass; ++k) {
        const LegendrianCurve c = planar_loop(4096, rng.uniform(0.0, 0.12),
                                              rng.uniform(0.0, 0.12),
                                              rng.uniform(0.0, 2 * M_PI));
        const int sign = rng.uniform() < 0.5 ? 1 : -1;
        const double at =
            rng.uniform() < 0.5 ? rng.uniform(0.2, 0.3) : rng.uniform(0.7, 0.8);
        const int r0 = rotation_number(c);
        try {
            auto [out, rec] = stabilize(c, at, sign, 0.005, 0.05);
            const int r1 = rotation_number(out);
            if (r1 != r0 + sign) {
                run.pass = false;
                run.why = "case " + std::to_string(k) + ": rotation " +
                          std::to_string(r0) + " -> " + std::to_string(r1) +
                          " for sign " + std::to_string(sign);
            }
            run.report_bytes += "stabilize " + std::to_string(k) + " at " + fmt(at) +
                                " sign " + std::to_string(sign) + " rot " +
                                std::to_string(r1) + "\n";
        } catch (const Error& err2) {
            run.pass = false;
            run.why = "case " + std::to_string(k) + ": " + err2.what();
        }
    }

    // legendrize closes the -pi circle with a nonzero stabilization record
    if (run.pass) {
        LegendrianCurve c = planar_loop(4096, 0.0, 0.0, 0.0);
        const double G = loop_trapezoid(c.y, c.x);
        for (std::size_t j = 0; j < c.size(); ++j) c.z[j] -= G * c.params[j];
        try {
            auto [out, rec] = legendrize(c, 0.6, 6.0);
            const double G2 = loop_trapezoid(out.y, out.x);
            if (std::abs(G2) > 1e-8 || rec.total() == 0) {
                run.pass = false;
                run.why = "legendrize left defect " + fmt(G2) + " with " +
                          std::to_string(rec.total()) + " stabilizations";
            }
            run.report_bytes += "legendrize defect " + fmt(G2) + " plus " +
                                std::to_string(rec.count_plus) + " minus " +
                                std::to_string(rec.count_minus) + "\n";
        } catch (const Error& err2) {
            run.pass = false;
            run.why = err2.what();
        }
    }
    run.dt = seconds_since(t0);
    return run;
}

Criterion criterion9(const LegendrianRun& run) {
    const bool pass = run.pass && run.dt < 10.0;
    std::ostringstream ss;
    ss << "legendrian layer: action lift, 40 stabilizations, legendrize";
    if (!run.why.empty()) ss << ": " << run.why;
    ss << ", " << run.dt << " s";
    return {9, pass, ss.str()};
}

// ---------------------------------------------------------------------------
// criterion 10: byte-identical reruns of 4, 7, 9
// ---------------------------------------------------------------------------

Criterion criterion10(const CorpusRun& c4, const FamilyRun& c7, const LegendrianRun& c9) {
    const CorpusRun c4b = run_corpus(/*keep_curves=*/false);
    const FamilyRun c7b = run_family();
    const LegendrianRun c9b = run_legendrian();
    bool pass = true;
    std::string why;
    if (c4.report_bytes != c4b.report_bytes) {
        pass = false;
        why = "corpus reports differ between runs";
    } else if (c7.report_bytes != c7b.report_bytes) {
        pass = false;
        why = "family reports differ between runs";
    } else if (c9.report_bytes != c9b.report_bytes) {
        pass = false;
        why = "legendrian reports differ between runs";
    }
    std::ostringstream ss;
    ss << "reruns of criteria 4, 7, 9 reproduce "
       << c4.report_bytes.size() + c7.report_bytes.size() + c9.report_bytes.size()
       << " report bytes";
    if (!why.empty()) ss << ": " << why;
    return {10, pass, ss.str()};
}

}  // namespace

int main() {
    std::vector<Criterion> results;
    results.push_back(criterion1());
    results.push_back(criterion2());
    results.push_back(criterion3());
    const CorpusRun corpus = run_corpus(/*keep_curves=*/true);
    results.push_back(criterion4(corpus));
    results.push_back(criterion5());
    results.push_back(criterion6(corpus));
    const FamilyRun family = run_family();
    results.push_back(criterion7(family));
    results.push_back(criterion8());
    const LegendrianRun leg = run_legendrian();
    results.push_back(criterion9(leg));
    results.push_back(criterion10(corpus, family, leg));

    int failures = 0;
    for (const auto& r : results) {
        std::printf("%s criterion %d: %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.detail.c_str());
        if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
