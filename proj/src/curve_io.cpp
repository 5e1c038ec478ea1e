#include "engel/curve_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "engel/core_geometry.hpp"
#include "engel/numerics.hpp"

namespace engel {

std::string to_string(CurveSpace s) {
    return s == CurveSpace::EngelR4 ? "engel-r4" : "legendrian-r3";
}

CurveSpace curve_space_from_string(const std::string& s) {
    if (s == "engel-r4") return CurveSpace::EngelR4;
    if (s == "legendrian-r3") return CurveSpace::LegendrianR3;
    throw Error(ErrorCategory::Parse, "unknown curve space '" + s + "'");
}

namespace {

// %.17g: shortest text that round-trips any finite double bit-exactly.
std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

}  // namespace

DiscreteCurve CurveFile::to_discrete_curve() const {
    if (space != CurveSpace::EngelR4)
        throw Error(ErrorCategory::InvalidInput, "curve file is not in engel-r4 space");
    DiscreteCurve c;
    c.closed = closed;
    c.params = params;
    c.samples.reserve(samples.size());
    for (const auto& row : samples) {
        if (row.size() != 4)
            throw Error(ErrorCategory::Parse, "engel-r4 samples must have arity 4");
        c.samples.push_back({row[0], row[1], row[2], row[3]});
    }
    c.validate();
    return c;
}

LegendrianCurve CurveFile::to_legendrian_curve() const {
    if (space != CurveSpace::LegendrianR3)
        throw Error(ErrorCategory::InvalidInput, "curve file is not in legendrian-r3 space");
    LegendrianCurve c;
    c.closed = closed;
    c.params = params;
    for (const auto& row : samples) {
        if (row.size() != 3)
            throw Error(ErrorCategory::Parse, "legendrian-r3 samples must have arity 3");
        c.x.push_back(row[0]);
        c.y.push_back(row[1]);
        c.z.push_back(row[2]);
    }
    c.validate();
    return c;
}

CurveFile CurveFile::from_discrete_curve(const DiscreteCurve& c) {
    CurveFile cf;
    cf.space = CurveSpace::EngelR4;
    cf.closed = c.closed;
    cf.params = c.params;
    cf.samples.reserve(c.size());
    for (const auto& p : c.samples) cf.samples.push_back({p.x, p.y, p.z, p.w});
    return cf;
}

CurveFile CurveFile::from_legendrian_curve(const LegendrianCurve& c) {
    CurveFile cf;
    cf.space = CurveSpace::LegendrianR3;
    cf.closed = c.closed;
    cf.params = c.params;
    for (std::size_t j = 0; j < c.size(); ++j)
        cf.samples.push_back({c.x[j], c.y[j], c.z[j]});
    return cf;
}

CurveFile read_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::Parse, "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrorCategory::Parse, "JSON parse error in '" + path + "': " + e.what());
    }
    try {
        CurveFile cf;
        cf.version = j.at("version").get<int>();
        if (cf.version != 1)
            throw Error(ErrorCategory::Parse,
                        "unsupported curve file version " + std::to_string(cf.version));
        cf.space = curve_space_from_string(j.at("space").get<std::string>());
        cf.closed = j.at("closed").get<bool>();
        cf.params = j.at("params").get<std::vector<double>>();
        cf.samples = j.at("samples").get<std::vector<std::vector<double>>>();
        if (cf.params.size() != cf.samples.size())
            throw Error(ErrorCategory::Parse, "params/samples length mismatch");
        const std::size_t arity = cf.space == CurveSpace::EngelR4 ? 4 : 3;
        for (const auto& row : cf.samples)
            if (row.size() != arity)
                throw Error(ErrorCategory::Parse,
                            "sample arity " + std::to_string(row.size()) + " != " +
                                std::to_string(arity));
        if (j.contains("formal")) {
            std::vector<std::array<double, 2>> f;
            for (const auto& row : j.at("formal")) {
                if (!row.is_array() || row.size() != 2)
                    throw Error(ErrorCategory::Parse, "formal entries must be pairs");
                f.push_back({row[0].get<double>(), row[1].get<double>()});
            }
            if (f.size() != cf.samples.size())
                throw Error(ErrorCategory::Parse, "formal/samples length mismatch");
            cf.formal = std::move(f);
        }
        if (j.contains("metadata"))
            for (auto it = j.at("metadata").begin(); it != j.at("metadata").end(); ++it)
                cf.metadata[it.key()] = it.value().get<std::string>();
        return cf;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCategory::Parse, "bad curve file '" + path + "': " + e.what());
    }
}

void write_curve(const CurveFile& cf, const std::string& path) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"version\": " << cf.version << ",\n";
    out << "  \"space\": \"" << to_string(cf.space) << "\",\n";
    out << "  \"closed\": " << (cf.closed ? "true" : "false") << ",\n";
    out << "  \"params\": [";
    for (std::size_t j = 0; j < cf.params.size(); ++j) {
        if (j) out << ", ";
        out << fmt_double(cf.params[j]);
    }
    out << "],\n";
    out << "  \"samples\": [\n";
    for (std::size_t j = 0; j < cf.samples.size(); ++j) {
        out << "    [";
        for (std::size_t i = 0; i < cf.samples[j].size(); ++i) {
            if (i) out << ", ";
            out << fmt_double(cf.samples[j][i]);
        }
        out << "]" << (j + 1 < cf.samples.size() ? "," : "") << "\n";
    }
    out << "  ]";
    if (cf.formal) {
        out << ",\n  \"formal\": [\n";
        for (std::size_t j = 0; j < cf.formal->size(); ++j)
            out << "    [" << fmt_double((*cf.formal)[j][0]) << ", "
                << fmt_double((*cf.formal)[j][1]) << "]"
                << (j + 1 < cf.formal->size() ? "," : "") << "\n";
        out << "  ]";
    }
    if (!cf.metadata.empty()) {
        out << ",\n  \"metadata\": {";
        bool first = true;
        for (const auto& [k, v] : cf.metadata) {
            if (!first) out << ", ";
            first = false;
            out << "\"" << json_escape(k) << "\": \"" << json_escape(v) << "\"";
        }
        out << "}";
    }
    out << "\n}\n";
    std::ofstream f(path);
    if (!f) throw Error(ErrorCategory::Parse, "cannot write '" + path + "'");
    f << out.str();
}

// ---------------------------------------------------------------------------
// run reports
// ---------------------------------------------------------------------------

namespace {

void emit_defect(std::ostringstream& out, const char* key, const DefectReport& r,
                 const char* indent) {
    out << indent << "\"" << key << "\": {"
        << "\"max_angle\": " << fmt_double(r.max_angle)
        << ", \"closure_dz\": " << fmt_double(r.closure_dz)
        << ", \"closure_dy\": " << fmt_double(r.closure_dy)
        << ", \"min_separation\": " << fmt_double(r.min_separation)
        << ", \"c0_distance\": " << fmt_double(r.c0_distance) << "}";
}

}  // namespace

std::string RunReport::to_json() const {
    std::ostringstream out;
    out << "{\n";
    out << "  \"command\": \"" << json_escape(command) << "\",\n";
    out << "  \"config\": {";
    bool first = true;
    for (const auto& [k, v] : config) {
        if (!first) out << ", ";
        first = false;
        out << "\"" << json_escape(k) << "\": \"" << json_escape(v) << "\"";
    }
    out << "},\n";
    out << "  \"seed\": " << seed << ",\n";
    emit_defect(out, "before", before, "  ");
    out << ",\n";
    emit_defect(out, "after", after, "  ");
    out << ",\n";
    out << "  \"surgeries\": {\"wrinkles_used\": " << surgeries.wrinkles_used
        << ", \"corrugation_freq\": " << fmt_double(surgeries.corrugation_freq)
        << ", \"events\": [";
    for (std::size_t j = 0; j < surgeries.events.size(); ++j) {
        const auto& e = surgeries.events[j];
        if (j) out << ", ";
        out << "{\"kind\": \"" << json_escape(e.kind) << "\", \"t\": " << fmt_double(e.t)
            << ", \"width\": " << fmt_double(e.width)
            << ", \"amplitude\": " << fmt_double(e.amplitude) << "}";
    }
    out << "]}";
    if (timing_ms) out << ",\n  \"timing_ms\": " << fmt_double(*timing_ms);
    out << "\n}\n";
    return out.str();
}

void RunReport::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCategory::Parse, "cannot write '" + path + "'");
    f << to_json();
}

// ---------------------------------------------------------------------------
// corpus generation
// ---------------------------------------------------------------------------

namespace {

double bump01(double t, double center, double hw) {
    return bump_inf((t - center) / hw);
}

// periodic distance on [0,1)
double pdist(double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

DiscreteCurve build_corpus_candidate(Rng& rng, double eps, std::size_t n) {
    std::vector<double> ts(n), xs(n), ws(n);
    for (std::size_t j = 0; j < n; ++j) ts[j] = double(j) / double(n);

    // low-frequency random Fourier loop in the Lagrangian plane
    const int modes = 3;
    std::vector<double> ax(modes), bx(modes), aw(modes), bw(modes);
    for (int m = 0; m < modes; ++m) {
        const double s = 1.0 / (m + 1);
        ax[m] = s * rng.uniform(-1.0, 1.0);
        bx[m] = s * rng.uniform(-1.0, 1.0);
        aw[m] = 0.5 * s * rng.uniform(-1.0, 1.0);
        bw[m] = 0.5 * s * rng.uniform(-1.0, 1.0);
    }
    // guarantee an order-one fundamental mode so |x'| has genuine range
    ax[0] += (ax[0] >= 0 ? 1.0 : -1.0);
    bw[0] += (bw[0] >= 0 ? 0.5 : -0.5);
    for (std::size_t j = 0; j < n; ++j) {
        double x = 0, w = 0;
        for (int m = 0; m < modes; ++m) {
            const double c = std::cos(2 * M_PI * (m + 1) * ts[j]);
            const double s = std::sin(2 * M_PI * (m + 1) * ts[j]);
            x += ax[m] * c + bx[m] * s;
            w += aw[m] * c + bw[m] * s;
        }
        xs[j] = x;
        ws[j] = w;
    }

    // close the (z, y) holonomy exactly: one slope bump kills the z-defect,
    // one cancelling pair kills the y-defect; both placed where |x'| is large
    const auto xp = scalar_derivative(xs, ts, true);
    std::size_t jk = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(xp[j]) > std::abs(xp[jk])) jk = j;
    std::size_t jc = jk;
    for (std::size_t j = 0; j < n; ++j)
        if (pdist(ts[j], ts[jk]) > 0.25 &&
            (jc == jk || std::abs(xp[j]) > std::abs(xp[jc])))
            jc = j;
    const double tK = ts[jk], tC = ts[jc];
    const double hw = 0.09;

    std::vector<double> mk(n), mc(n);
    for (std::size_t j = 0; j < n; ++j) {
        double dk = ts[j] - tK;
        dk -= std::round(dk);
        mk[j] = bump_inf(dk / hw);
    }
    {
        std::vector<double> b1(n), b2(n);
        for (std::size_t j = 0; j < n; ++j) {
            double d1 = ts[j] - (tC - hw / 2);
            d1 -= std::round(d1);
            double d2 = ts[j] - (tC + hw / 2);
            d2 -= std::round(d2);
            b1[j] = bump_inf(d1 / (hw / 2));
            b2[j] = bump_inf(d2 / (hw / 2));
        }
        const double a1 = loop_trapezoid(b1, xs);
        const double a2 = loop_trapezoid(b2, xs);
        const double sigma = std::abs(a2) > 1e-14 ? a1 / a2 : 1.0;
        for (std::size_t j = 0; j < n; ++j) mc[j] = b1[j] - sigma * b2[j];
    }
    auto dy_of = [&](const std::vector<double>& w) {
        const auto z = cumulative_trapezoid(w, xs, 0, 0.0, true);
        return loop_trapezoid(z, xs);
    };
    // response columns of (dz, dy) to the two modes
    const double dz0 = loop_trapezoid(ws, xs);
    const double dy0 = dy_of(ws);
    auto col = [&](const std::vector<double>& m) {
        std::vector<double> w = ws;
        for (std::size_t j = 0; j < n; ++j) w[j] += m[j];
        return std::pair<double, double>{loop_trapezoid(w, xs) - dz0, dy_of(w) - dy0};
    };
    const auto [kz, ky] = col(mk);
    const auto [cz, cy] = col(mc);
    double lk = 0, lc = 0;
    for (int pass = 0; pass < 4; ++pass) {
        std::vector<double> w = ws;
        for (std::size_t j = 0; j < n; ++j) w[j] += lk * mk[j] + lc * mc[j];
        const double rz = loop_trapezoid(w, xs);
        const double ry = dy_of(w);
        const double det = kz * cy - ky * cz;
        if (std::abs(det) < 1e-12) break;
        lk += (-rz * cy + ry * cz) / det;
        lc += (-ry * kz + rz * ky) / det;
    }
    for (std::size_t j = 0; j < n; ++j) ws[j] += lk * mk[j] + lc * mc[j];

    const double z0 = rng.uniform(-0.2, 0.2);
    const double y0 = rng.uniform(-0.2, 0.2);
    auto zs = cumulative_trapezoid(ws, xs, 0, z0, true);
    auto ys = cumulative_trapezoid(zs, xs, 0, y0, true);

    // localized defect re-injection: slope and level bumps near a third
    // graphical spot, sized well inside the eps cone
    std::size_t jd = jk;
    for (std::size_t j = 0; j < n; ++j)
        if (pdist(ts[j], ts[jk]) > 0.15 && pdist(ts[j], ts[jc]) > 0.15 &&
            (jd == jk || std::abs(xp[j]) > std::abs(xp[jd])))
            jd = j;
    const double td = ts[jd];
    const double aw_def = 0.025 * eps * rng.uniform(0.5, 1.0) *
                          (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    const double az_def = 0.05 * eps * rng.uniform(0.5, 1.0) *
                          (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = ts[j] - td;
        d -= std::round(d);
        ws[j] += aw_def * bump01(d, 0.0, 0.05);
        zs[j] += az_def * bump01(d, 0.0, 0.05);
    }

    DiscreteCurve c;
    c.closed = true;
    c.params = ts;
    c.samples.resize(n);
    for (std::size_t j = 0; j < n; ++j) c.samples[j] = {xs[j], ys[j], zs[j], ws[j]};
    return c;
}

}  // namespace

DiscreteCurve gen_corpus_curve(std::uint64_t seed, int index, double eps,
                               std::size_t samples) {
    if (samples < 256)
        throw Error(ErrorCategory::InvalidInput, "corpus curves need >= 256 samples");
    if (!(eps > 0 && eps < M_PI / 2))
        throw Error(ErrorCategory::InvalidInput, "eps must lie in (0, pi/2)");
    for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
        Rng rng(seed ^ (0x9E3779B97F4A7C15ULL * std::uint64_t(index + 1)) ^
                (0xBF58476D1CE4E5B9ULL * attempt));
        DiscreteCurve c = build_corpus_candidate(rng, eps, samples);
        const auto rep = curve_defect(c);
        if (rep.max_angle <= eps && rep.min_separation > 1e-4 &&
            is_generic_knot(c, 0.15))
            return c;
    }
    throw Error(ErrorCategory::Resolution,
                "no admissible corpus curve for seed/index after 10 attempts");
}

std::vector<std::string> gen_corpus(int count, std::uint64_t seed, double eps,
                                    const std::string& out_dir, std::size_t samples) {
    if (count <= 0) throw Error(ErrorCategory::InvalidInput, "count must be positive");
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> paths;
    for (int i = 0; i < count; ++i) {
        DiscreteCurve c = gen_corpus_curve(seed, i, eps, samples);
        CurveFile cf = CurveFile::from_discrete_curve(c);
        cf.metadata["seed"] = std::to_string(seed);
        cf.metadata["index"] = std::to_string(i);
        cf.metadata["eps"] = fmt_double(eps);
        char name[64];
        std::snprintf(name, sizeof(name), "corpus_%03d.json", i);
        const std::string path = (std::filesystem::path(out_dir) / name).string();
        write_curve(cf, path);
        paths.push_back(path);
    }
    return paths;
}

// ---------------------------------------------------------------------------
// plotting
// ---------------------------------------------------------------------------

void plot_curve(const CurveFile& cf, PlotProjection proj, const std::string& out_path) {
    if (cf.samples.empty()) throw Error(ErrorCategory::InvalidInput, "empty curve");
    const bool engel = cf.space == CurveSpace::EngelR4;
    // coordinate picks per projection: (x,y,z,w) or (x,y,z)
    int ix = 0, iy = 2;
    switch (proj) {
        case PlotProjection::Front: ix = 0; iy = 2; break;
        case PlotProjection::Lagrangian: ix = 0; iy = engel ? 3 : 1; break;
        case PlotProjection::GeigesXZ: ix = 0; iy = 2; break;
        case PlotProjection::XY: ix = 0; iy = 1; break;
    }
    const std::size_t n = cf.samples.size();
    double xmin = cf.samples[0][ix], xmax = xmin;
    double ymin = cf.samples[0][iy], ymax = ymin;
    for (const auto& s : cf.samples) {
        xmin = std::min(xmin, s[ix]);
        xmax = std::max(xmax, s[ix]);
        ymin = std::min(ymin, s[iy]);
        ymax = std::max(ymax, s[iy]);
    }
    const double W = 800, H = 600, M = 40;
    const double sx = (xmax > xmin) ? (W - 2 * M) / (xmax - xmin) : 1.0;
    const double sy = (ymax > ymin) ? (H - 2 * M) / (ymax - ymin) : 1.0;
    auto px = [&](double x) { return M + (x - xmin) * sx; };
    auto py = [&](double y) { return H - M - (y - ymin) * sy; };

    std::vector<bool> highlight(n, false);
    if (engel && cf.closed) {
        try {
            const DiscreteCurve c = cf.to_discrete_curve();
            const auto tset = kernel_tangency_set(c, 0.15);
            for (std::size_t j = 0; j < n; ++j) {
                for (const auto& iv : tset.intervals) {
                    double t = cf.params[j];
                    if (t < iv.lo) t += 1.0;
                    if (t >= iv.lo && t <= iv.hi) highlight[j] = true;
                }
            }
        } catch (const Error&) {
            // diagnostics only: plot the raw curve if the checks reject it
        }
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // base polyline
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < n; ++j)
        out << px(cf.samples[j][ix]) << "," << py(cf.samples[j][iy]) << " ";
    if (cf.closed) out << px(cf.samples[0][ix]) << "," << py(cf.samples[0][iy]);
    out << "\"/>\n";
    // kernel-tangency highlights
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (!(highlight[j] && highlight[j + 1])) continue;
        out << "<line stroke=\"#d62728\" stroke-width=\"3\" x1=\""
            << px(cf.samples[j][ix]) << "\" y1=\"" << py(cf.samples[j][iy]) << "\" x2=\""
            << px(cf.samples[j + 1][ix]) << "\" y2=\"" << py(cf.samples[j + 1][iy])
            << "\"/>\n";
    }
    // kink supports recorded in metadata as "t:w;t:w;..."
    auto it = cf.metadata.find("kinks");
    if (it != cf.metadata.end()) {
        std::istringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ';')) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) continue;
            try {
                const double t = std::stod(tok.substr(0, colon));
                std::size_t jbest = 0;
                for (std::size_t j = 1; j < n; ++j)
                    if (std::abs(cf.params[j] - t) < std::abs(cf.params[jbest] - t))
                        jbest = j;
                out << "<circle fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\" "
                    << "r=\"6\" cx=\"" << px(cf.samples[jbest][ix]) << "\" cy=\""
                    << py(cf.samples[jbest][iy]) << "\"/>\n";
            } catch (const std::exception&) {
                continue;
            }
        }
    }
    out << "</svg>\n";
    std::ofstream f(out_path);
    if (!f) throw Error(ErrorCategory::Parse, "cannot write '" + out_path + "'");
    f << out.str();
}

}  // namespace engel
