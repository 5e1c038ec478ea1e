#pragma once

#include <functional>
#include <optional>

#include "engel/types.hpp"

namespace engel {

// Discrete "Engel" tolerance: max tangency angle below which a curve counts
// as Engel on the grid.
inline constexpr double kTolEngel = 1e-3;

// Darboux frame of D_std at p: X = d_x + z d_y + w d_z, W = d_w.
struct EngelFrame {
    Vec4 X;
    Vec4 W;
};

EngelFrame engel_frame(const Point4& p);

// Finite-difference check that {X, W, [X,W], [X,[X,W]]} spans R^4 at p.
// Returns true iff the smallest singular value of the span exceeds 10*h.
bool verify_engel_condition(const Point4& p, double h);

// Same check for an arbitrary plane field given by two frame fields
// (test hook; lets degenerate plane fields be probed).
using FrameField = std::function<Vec4(const Point4&)>;
bool verify_engel_condition_for_frame(const FrameField& A, const FrameField& B,
                                      const Point4& p, double h);

// Principal angle in [0, pi/2] between v and span{X(p), W(p)}, Euclidean
// metric in Darboux coordinates.
double tangency_angle(const Point4& p, const Vec4& v);

// Angle in [0, pi/2] between the line spanned by v and the line <d_w>.
double kernel_angle(const Vec4& v);

DefectReport curve_defect(const DiscreteCurve& c,
                          const DiscreteCurve* reference = nullptr);

bool is_epsilon_engel(const DiscreteCurve& c, double eps);

// Maximal parameter intervals where angle(c'(t), <d_w>) <= threshold.
TangencySet kernel_tangency_set(const DiscreteCurve& c, double threshold);

// True iff the closed curve is not everywhere tangent to ker(D).
bool is_generic_knot(const DiscreteCurve& c, double threshold);

// Min distance over sample pairs with circular parameter distance >= t_sep.
double embeddedness_check(const DiscreteCurve& c, double t_sep);

// s(gamma) = (gamma, dgamma): decompose the tangent in the frame {X, W}.
FormalEngelKnot scanning(const DiscreteCurve& c, double tol = kTolEngel);

// Seeded C-infinity-small perturbation used to break degenerate kernel
// tangencies (genericity substitute).
DiscreteCurve perturb_generic(const DiscreteCurve& c, double amplitude,
                              std::uint64_t seed);

}  // namespace engel
