#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "engel/engelization.hpp"
#include "engel/legendrian.hpp"
#include "engel/types.hpp"

namespace engel {

enum class CurveSpace { EngelR4, LegendrianR3 };

std::string to_string(CurveSpace s);
CurveSpace curve_space_from_string(const std::string& s);

// On-disk curve: JSON with canonical key order, numbers written with 17
// significant digits so round trips are bit-exact.
struct CurveFile {
    int version = 1;
    CurveSpace space = CurveSpace::EngelR4;
    bool closed = false;
    std::vector<double> params;
    std::vector<std::vector<double>> samples;                 // arity 4 or 3
    std::optional<std::vector<std::array<double, 2>>> formal;  // F1 coefficients
    std::map<std::string, std::string> metadata;

    DiscreteCurve to_discrete_curve() const;
    LegendrianCurve to_legendrian_curve() const;
    static CurveFile from_discrete_curve(const DiscreteCurve& c);
    static CurveFile from_legendrian_curve(const LegendrianCurve& c);
};

CurveFile read_curve(const std::string& path);
void write_curve(const CurveFile& cf, const std::string& path);

// Reproducibility report for a transforming command.  Timing is only
// recorded when requested so default reports are byte-identical across runs.
struct RunReport {
    std::string command;
    std::map<std::string, std::string> config;  // echoed flags, canonical order
    std::uint64_t seed = 0;
    DefectReport before;
    DefectReport after;
    SurgeryLog surgeries;
    std::optional<double> timing_ms;

    std::string to_json() const;
    void write(const std::string& path) const;
};

// Seeded random epsilon-Engel closed curves: Lagrangian lifts of random
// closed (x, w) curves, closure corrected exactly, then a localized defect of
// controlled size re-injected.  Deterministic per (seed, index).
DiscreteCurve gen_corpus_curve(std::uint64_t seed, int index, double eps,
                               std::size_t samples = 4096);
std::vector<std::string> gen_corpus(int count, std::uint64_t seed, double eps,
                                    const std::string& out_dir,
                                    std::size_t samples = 4096);

enum class PlotProjection { Front, Lagrangian, GeigesXZ, XY };

// SVG polyline of the chosen projection; kernel-tangency intervals are
// highlighted and kink supports (from metadata) annotated.
void plot_curve(const CurveFile& cf, PlotProjection proj, const std::string& out_path);

}  // namespace engel
