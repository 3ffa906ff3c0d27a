// weakmeas.hpp
// Normalized readout of the polarization probe, readout-vs-strength sweeps,
// synthetic photon counting, and extraction of the weak value by fitting
// the g → 0 limit.

#pragma once

#include <cstdint>
#include <vector>

#include "wvsim/optics.hpp"

namespace wvsim {

struct ReadoutPoint {
    double g;    // measurement strength in (0, 1]
    double p_v;  // P(V | postselected), in [0, 1]
    double r;    // normalized readout; anomalous values lie outside [0, 1]
};

// One simulated counting run at fixed strength. counts_v + counts_h never
// exceeds trials; the remainder failed postselection.
struct CountRecord {
    double g;
    std::uint64_t counts_v;
    std::uint64_t counts_h;
    std::uint64_t trials;
    std::uint64_t seed;
};

// P(V | postselected) of the interferometer output.
double conditional_prob_v(double p_a, const MeasurementStrength& strength);

// Normalized readout (P_V − sin²θ)/(cos²θ − sin²θ). Undefined at g = 0.
// Anomalous values are returned unclamped.
double readout(double p_v, const MeasurementStrength& strength);

// Closed-form readout as a function of (p_a, g):
//   R = (p² − p(p−1)√(1−g²)) / (p² + (p−1)² − 2p(p−1)√(1−g²)).
// This is the one-parameter model the fit minimizes over.
double readout_model(double p_a, double g);

ReadoutPoint readout_point(double p_a, const MeasurementStrength& strength);

struct ReadoutCurve {
    double p_a_nominal;
    std::vector<ReadoutPoint> points;
};

// Evaluates the readout over a strength grid; every g must lie in (0, 1].
ReadoutCurve readout_curve(double p_a, const std::vector<double>& g_grid);

// Seeded Monte-Carlo counting run. Each trial registers at most one event:
// a postselected signal photon detected in V or H, or — on trials where
// postselection failed — a background event at probability background_rate
// (clamped to 1), split evenly between V and H.
CountRecord synthesize_counts(double p_a, const MeasurementStrength& strength,
                              std::uint64_t trials, std::uint64_t seed,
                              double background_rate = 0.0);

// Empirical readout point from counts: P_V = counts_v/(counts_v+counts_h).
ReadoutPoint readout_point_from_counts(const CountRecord& record);

// Empirical re-calibration against two reference runs taken at the same
// nominal strength: ratios measured at p_a = 1 and p_a = 0 pin the readout
// scale (they map to R = 1 and R = 0), standing in for exact knowledge of θ.
// The empirical strength is ratio₁ − ratio₀, and p_v is back-computed from
// (g, r) so the ReadoutPoint identity r = (p_v − sin²θ)/g still holds.
ReadoutPoint calibrated_readout_point(const CountRecord& sample,
                                      const CountRecord& ref_one,
                                      const CountRecord& ref_zero);

struct FitResult {
    double p_a_hat;
    double rms_residual;
};

struct FitOptions {
    double lo = -10.0;
    double hi = 10.0;
    double tolerance = 1e-9;  // bracket width on p_a
};

// Least-squares fit of readout_model over p_a by scalar bracketing
// (coarse scan + golden section + parabolic polish). Needs at least two
// samples at distinct strengths.
FitResult fit_weak_value(const std::vector<ReadoutPoint>& samples, const FitOptions& options = {});
FitResult fit_weak_value(const std::vector<CountRecord>& samples, const FitOptions& options = {});

}  // namespace wvsim
