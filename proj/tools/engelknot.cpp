#include <chrono>
#include <cstdio>
#include <filesystem>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "engel/core_geometry.hpp"
#include "engel/curve_io.hpp"
#include "engel/engelization.hpp"
#include "engel/legendrian.hpp"
#include "engel/numerics.hpp"
#include "engel/projections.hpp"

namespace {

using namespace engel;

// Serial implementation; the thread cap is validated and honoured trivially.
int resolve_threads() {
    const char* env = std::getenv("ENGEL_HORIZON_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (!end || *end != '\0' || v < 1 || v > 64)
        throw Error(ErrorCategory::Configuration,
                    "ENGEL_HORIZON_THREADS must be an integer in [1, 64]");
    return int(v);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void print_defect(const DefectReport& r, bool closed) {
    std::cout << "max_angle " << fmt17(r.max_angle) << "\n";
    if (closed) {
        std::cout << "closure_dz " << fmt17(r.closure_dz) << "\n";
        std::cout << "closure_dy " << fmt17(r.closure_dy) << "\n";
    }
    std::cout << "min_separation " << fmt17(r.min_separation) << "\n";
}

// planar projection files: {"version", "projection", "closed", "params", "samples"}
void write_projection(const std::string& path, const std::string& kind, bool closed,
                      const std::vector<double>& params,
                      const std::vector<std::vector<double>>& cols) {
    std::ostringstream out;
    out << "{\n  \"version\": 1,\n  \"projection\": \"" << kind << "\",\n"
        << "  \"closed\": " << (closed ? "true" : "false") << ",\n  \"params\": [";
    for (std::size_t j = 0; j < params.size(); ++j) {
        if (j) out << ", ";
        out << fmt17(params[j]);
    }
    out << "],\n  \"samples\": [\n";
    for (std::size_t j = 0; j < params.size(); ++j) {
        out << "    [";
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out << ", ";
            out << fmt17(cols[i][j]);
        }
        out << "]" << (j + 1 < params.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    std::ofstream f(path);
    if (!f) throw Error(ErrorCategory::Parse, "cannot write '" + path + "'");
    f << out.str();
}

struct ProjectionFile {
    std::string kind;
    bool closed = false;
    std::vector<double> params;
    std::vector<std::vector<double>> cols;  // column-major
};

ProjectionFile read_projection(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::Parse, "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        ProjectionFile pf;
        if (j.at("version").get<int>() != 1)
            throw Error(ErrorCategory::Parse, "unsupported projection file version");
        pf.kind = j.at("projection").get<std::string>();
        pf.closed = j.at("closed").get<bool>();
        pf.params = j.at("params").get<std::vector<double>>();
        const auto rows = j.at("samples").get<std::vector<std::vector<double>>>();
        if (rows.size() != pf.params.size())
            throw Error(ErrorCategory::Parse, "params/samples length mismatch");
        if (rows.empty()) throw Error(ErrorCategory::Parse, "empty projection file");
        const std::size_t arity = rows[0].size();
        pf.cols.assign(arity, std::vector<double>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != arity)
                throw Error(ErrorCategory::Parse, "ragged sample rows");
            for (std::size_t i = 0; i < arity; ++i) pf.cols[i][r] = rows[r][i];
        }
        return pf;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCategory::Parse, std::string("bad projection file: ") + e.what());
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Engel knots in the Darboux model: projections, surgery, extension"};
    app.require_subcommand(1);
    resolve_threads();

    // ---- check ----------------------------------------------------------
    std::string chk_in;
    double chk_tol = kTolEngel;
    auto* chk = app.add_subcommand("check", "defect report for a curve file");
    chk->add_option("input", chk_in, "curve JSON")->required();
    chk->add_option("--tol", chk_tol, "Engel angle tolerance");

    // ---- project --------------------------------------------------------
    std::string prj_in, prj_out, prj_to = "front";
    auto* prj = app.add_subcommand("project", "project an Engel curve");
    prj->add_option("input", prj_in, "curve JSON")->required();
    prj->add_option("--to", prj_to, "front | lagrangian | geiges")
        ->check(CLI::IsMember({"front", "lagrangian", "geiges"}));
    prj->add_option("--out", prj_out, "output JSON")->required();

    // ---- lift -----------------------------------------------------------
    std::string lft_in, lft_out;
    double lft_y0 = 0, lft_z0 = 0, lft_t0 = 0;
    auto* lft = app.add_subcommand("lift", "lift a projection back to R^4");
    lft->add_option("input", lft_in, "projection JSON")->required();
    lft->add_option("--out", lft_out, "output curve JSON")->required();
    lft->add_option("--y0", lft_y0, "y seed");
    lft->add_option("--z0", lft_z0, "z seed (lagrangian lifts)");
    lft->add_option("--t0", lft_t0, "parameter of the seed");

    // ---- engelize -------------------------------------------------------
    std::string eng_in, eng_out, eng_report;
    EngelizeConfig eng_cfg;
    bool eng_timing = false;
    auto* eng = app.add_subcommand("engelize", "extend an eps-Engel knot to a genuine one");
    eng->add_option("input", eng_in, "curve JSON")->required();
    eng->add_option("--out", eng_out, "output curve JSON")->required();
    eng->add_option("--eps", eng_cfg.eps, "eps of the eps-Engel relation");
    eng->add_option("--eta", eng_cfg.eta, "C0 budget");
    eng->add_option("--tol", eng_cfg.tol_engel, "output Engel tolerance");
    eng->add_option("--n-wrinkles", eng_cfg.n_wrinkles, "wrinkle scaffold size N");
    eng->add_option("--seed", eng_cfg.seed, "deterministic seed");
    eng->add_option("--report", eng_report, "write a run report JSON");
    eng->add_flag("--timing", eng_timing, "record wall time in the report");

    // ---- engelize-family ------------------------------------------------
    std::vector<std::string> fam_in;
    std::string fam_outdir, fam_report;
    EngelizeConfig fam_cfg;
    bool fam_lo = false, fam_hi = false;
    auto* fam = app.add_subcommand("engelize-family", "relative family extension");
    fam->add_option("inputs", fam_in, "member curve files, in order")->required();
    fam->add_option("--out-dir", fam_outdir, "output directory")->required();
    fam->add_flag("--boundary-lo", fam_lo, "k = 0 member is already Engel");
    fam->add_flag("--boundary-hi", fam_hi, "k = 1 member is already Engel");
    fam->add_option("--eps", fam_cfg.eps, "eps");
    fam->add_option("--eta", fam_cfg.eta, "C0 budget");
    fam->add_option("--n-wrinkles", fam_cfg.n_wrinkles, "wrinkle scaffold size N");
    fam->add_option("--report", fam_report, "write a run report JSON");

    // ---- legendrize -----------------------------------------------------
    std::string leg_in, leg_out, leg_report;
    double leg_eps = 0.3, leg_eta = 0.5;
    auto* leg = app.add_subcommand("legendrize", "stabilization pairs + action re-lift");
    leg->add_option("input", leg_in, "legendrian-r3 curve JSON")->required();
    leg->add_option("--out", leg_out, "output curve JSON")->required();
    leg->add_option("--eps", leg_eps, "eps-Legendrian tolerance");
    leg->add_option("--eta", leg_eta, "planar C0 budget");
    leg->add_option("--report", leg_report, "write a run report JSON");

    // ---- gen-corpus -----------------------------------------------------
    int gc_count = 10;
    std::uint64_t gc_seed = 0;
    double gc_eps = 0.2;
    std::size_t gc_samples = 4096;
    std::string gc_outdir;
    auto* gc = app.add_subcommand("gen-corpus", "seeded eps-Engel test curves");
    gc->add_option("--count", gc_count, "number of curves");
    gc->add_option("--seed", gc_seed, "deterministic seed");
    gc->add_option("--eps", gc_eps, "eps of the corpus curves");
    gc->add_option("--samples", gc_samples, "samples per curve");
    gc->add_option("--out-dir", gc_outdir, "output directory")->required();

    // ---- plot -----------------------------------------------------------
    std::string plt_in, plt_out, plt_proj = "front";
    auto* plt = app.add_subcommand("plot", "SVG of a plane projection");
    plt->add_option("input", plt_in, "curve JSON")->required();
    plt->add_option("--proj", plt_proj, "front | lagrangian | geiges-xz | xy")
        ->check(CLI::IsMember({"front", "lagrangian", "geiges-xz", "xy"}));
    plt->add_option("--out", plt_out, "output SVG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // malformed command line
    }

    if (chk->parsed()) {
        const CurveFile cf = read_curve(chk_in);
        if (cf.space == CurveSpace::EngelR4) {
            const DiscreteCurve c = cf.to_discrete_curve();
            const DefectReport r = curve_defect(c);
            print_defect(r, c.closed);
            std::cout << "engel " << (r.max_angle <= chk_tol ? "yes" : "no") << "\n";
        } else {
            const LegendrianCurve c = cf.to_legendrian_curve();
            const LegendrianDefect d = legendrian_defect(c);
            std::cout << "max_residual " << fmt17(d.max_residual) << "\n";
            if (c.closed)
                std::cout << "closure_dz " << fmt17(loop_trapezoid(c.y, c.x)) << "\n";
        }
        return 0;
    }

    if (prj->parsed()) {
        const DiscreteCurve c = read_curve(prj_in).to_discrete_curve();
        const GeigesCurve g = geiges_project(c);
        if (prj_to == "front") {
            const Front f = front_project(g);
            write_projection(prj_out, "front", f.closed, f.params, {f.x, f.z});
        } else if (prj_to == "lagrangian") {
            const LagrangianPlaneCurve l = lagrangian_project(g);
            write_projection(prj_out, "lagrangian", l.closed, l.params, {l.x, l.w});
        } else {
            write_projection(prj_out, "geiges", g.closed, g.params, {g.x, g.z, g.w});
        }
        return 0;
    }

    if (lft->parsed()) {
        const ProjectionFile pf = read_projection(lft_in);
        DiscreteCurve c;
        if (pf.kind == "front") {
            Front f;
            f.closed = pf.closed;
            f.params = pf.params;
            f.x = pf.cols.at(0);
            f.z = pf.cols.at(1);
            c = front_lift(f, lft_y0, lft_t0);
        } else if (pf.kind == "lagrangian") {
            LagrangianPlaneCurve l;
            l.closed = pf.closed;
            l.params = pf.params;
            l.x = pf.cols.at(0);
            l.w = pf.cols.at(1);
            c = lagrangian_lift(l, lft_z0, lft_y0, lft_t0);
        } else {
            throw Error(ErrorCategory::InvalidInput,
                        "lift supports 'front' and 'lagrangian' projections");
        }
        write_curve(CurveFile::from_discrete_curve(c), lft_out);
        return 0;
    }

    if (eng->parsed()) {
        const DiscreteCurve c = read_curve(eng_in).to_discrete_curve();
        RunReport rep;
        rep.command = "engelize";
        rep.seed = eng_cfg.seed;
        rep.config = {{"eps", fmt17(eng_cfg.eps)},
                      {"eta", fmt17(eng_cfg.eta)},
                      {"n_wrinkles", std::to_string(eng_cfg.n_wrinkles)},
                      {"tol", fmt17(eng_cfg.tol_engel)}};
        rep.before = curve_defect(c);
        const auto t0 = std::chrono::steady_clock::now();
        auto [out, after] = engelize(c, eng_cfg, &rep.surgeries);
        const auto t1 = std::chrono::steady_clock::now();
        rep.after = after;
        if (eng_timing)
            rep.timing_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        CurveFile cf = CurveFile::from_discrete_curve(out);
        if (!rep.surgeries.events.empty()) {
            std::string kinks;
            for (const auto& e : rep.surgeries.events) {
                if (e.kind != "kink") continue;
                if (!kinks.empty()) kinks += ";";
                kinks += fmt17(e.t) + ":" + fmt17(e.width);
            }
            if (!kinks.empty()) cf.metadata["kinks"] = kinks;
        }
        write_curve(cf, eng_out);
        if (!eng_report.empty()) rep.write(eng_report);
        print_defect(after, out.closed);
        return 0;
    }

    if (fam->parsed()) {
        CurveFamily in;
        in.boundary_engel_lo = fam_lo;
        in.boundary_engel_hi = fam_hi;
        for (const auto& p : fam_in) in.members.push_back(read_curve(p).to_discrete_curve());
        std::vector<SurgeryLog> logs;
        const CurveFamily out = engelize_family(in, fam_cfg, &logs);
        std::filesystem::create_directories(fam_outdir);
        for (std::size_t k = 0; k < out.members.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof(name), "member_%03zu.json", k);
            write_curve(CurveFile::from_discrete_curve(out.members[k]),
                        (std::filesystem::path(fam_outdir) / name).string());
        }
        if (!fam_report.empty()) {
            RunReport rep;
            rep.command = "engelize-family";
            rep.config = {{"members", std::to_string(out.members.size())},
                          {"eps", fmt17(fam_cfg.eps)},
                          {"eta", fmt17(fam_cfg.eta)}};
            rep.before = curve_defect(in.members.front());
            rep.after = curve_defect(out.members.front());
            for (const auto& lg : logs)
                for (const auto& e : lg.events) rep.surgeries.events.push_back(e);
            rep.write(fam_report);
        }
        return 0;
    }

    if (leg->parsed()) {
        const LegendrianCurve c = read_curve(leg_in).to_legendrian_curve();
        auto [out, rec] = legendrize(c, leg_eps, leg_eta);
        write_curve(CurveFile::from_legendrian_curve(out), leg_out);
        if (!leg_report.empty()) {
            RunReport rep;
            rep.command = "legendrize";
            rep.config = {{"eps", fmt17(leg_eps)}, {"eta", fmt17(leg_eta)}};
            for (double loc : rec.locations)
                rep.surgeries.events.push_back({"stabilization", loc, 0.05, 0});
            rep.write(leg_report);
        }
        std::cout << "stabilizations +" << rec.count_plus << " -" << rec.count_minus
                  << "\n";
        return 0;
    }

    if (gc->parsed()) {
        const auto paths = gen_corpus(gc_count, gc_seed, gc_eps, gc_outdir, gc_samples);
        for (const auto& p : paths) std::cout << p << "\n";
        return 0;
    }

    if (plt->parsed()) {
        const CurveFile cf = read_curve(plt_in);
        PlotProjection proj = PlotProjection::Front;
        if (plt_proj == "lagrangian") proj = PlotProjection::Lagrangian;
        if (plt_proj == "geiges-xz") proj = PlotProjection::GeigesXZ;
        if (plt_proj == "xy") proj = PlotProjection::XY;
        plot_curve(cf, proj, plt_out);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const engel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
