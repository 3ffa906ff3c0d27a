#include "wvsim/weakmeas.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wvsim {

namespace {

// 53-bit uniform in [0, 1) from the raw engine output, so runs are
// reproducible across standard libraries (uniform_real_distribution is not).
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct ArmAmplitudes {
    double out_h;
    double out_v;
    double norm_pre;  // p² + (p−1)²
};

ArmAmplitudes arm_amplitudes(double p_a, double theta) {
    const double q = p_a - 1.0;
    return ArmAmplitudes{
        p_a * std::sin(theta) - q * std::cos(theta),
        p_a * std::cos(theta) - q * std::sin(theta),
        p_a * p_a + q * q,
    };
}

double postselect_probability(double p_a, const MeasurementStrength& strength) {
    const ArmAmplitudes a = arm_amplitudes(p_a, strength.theta());
    return (a.out_h * a.out_h + a.out_v * a.out_v) / (2.0 * a.norm_pre);
}

void check_sample_grid(const std::vector<ReadoutPoint>& samples) {
    if (samples.size() < 2) {
        throw std::invalid_argument("fit_weak_value: need at least two samples");
    }
    bool distinct = false;
    for (const auto& s : samples) {
        if (!std::isfinite(s.g) || s.g <= 0.0 || s.g > 1.0) {
            throw std::invalid_argument("fit_weak_value: sample strengths must lie in (0, 1]");
        }
        if (!std::isfinite(s.r)) {
            throw std::invalid_argument("fit_weak_value: non-finite readout sample");
        }
        if (s.g != samples.front().g) distinct = true;
    }
    if (!distinct) {
        throw std::invalid_argument("fit_weak_value: samples must cover at least two strengths");
    }
}

double sum_squared_residual(double p_a, const std::vector<ReadoutPoint>& samples) {
    double acc = 0.0;
    for (const auto& s : samples) {
        const double d = readout_model(p_a, s.g) - s.r;
        acc += d * d;
    }
    return acc;
}

}  // namespace

double conditional_prob_v(double p_a, const MeasurementStrength& strength) {
    if (!std::isfinite(p_a)) {
        throw std::invalid_argument("conditional_prob_v: non-finite p_a");
    }
    const ArmAmplitudes a = arm_amplitudes(p_a, strength.theta());
    const double total = a.out_h * a.out_h + a.out_v * a.out_v;
    if (total < kOverlapCutoff * kOverlapCutoff) {
        throw std::domain_error("conditional_prob_v: postselection annihilates the state");
    }
    return (a.out_v * a.out_v) / total;
}

double readout(double p_v, const MeasurementStrength& strength) {
    if (!std::isfinite(p_v) || p_v < 0.0 || p_v > 1.0) {
        throw std::invalid_argument("readout: p_v must be a probability");
    }
    const double g = strength.g();
    if (g == 0.0) {
        throw std::invalid_argument("readout: undefined at g = 0");
    }
    const double sin2 = (1.0 - g) / 2.0;
    return (p_v - sin2) / g;
}

double readout_model(double p_a, double g) {
    if (!std::isfinite(p_a)) {
        throw std::invalid_argument("readout_model: non-finite p_a");
    }
    if (!std::isfinite(g) || g < 0.0 || g > 1.0) {
        throw std::invalid_argument("readout_model: g must lie in [0, 1]");
    }
    const double q = p_a - 1.0;
    const double s = std::sqrt((1.0 - g) * (1.0 + g));
    const double num = p_a * p_a - p_a * q * s;
    const double den = p_a * p_a + q * q - 2.0 * p_a * q * s;
    return num / den;
}

ReadoutPoint readout_point(double p_a, const MeasurementStrength& strength) {
    const double p_v = conditional_prob_v(p_a, strength);
    return ReadoutPoint{strength.g(), p_v, readout(p_v, strength)};
}

ReadoutCurve readout_curve(double p_a, const std::vector<double>& g_grid) {
    if (g_grid.empty()) {
        throw std::invalid_argument("readout_curve: empty strength grid");
    }
    ReadoutCurve curve{p_a, {}};
    curve.points.reserve(g_grid.size());
    for (double g : g_grid) {
        if (!std::isfinite(g) || g <= 0.0 || g > 1.0) {
            throw std::invalid_argument("readout_curve: strengths must lie in (0, 1]");
        }
        curve.points.push_back(readout_point(p_a, MeasurementStrength::from_g(g)));
    }
    return curve;
}

CountRecord synthesize_counts(double p_a, const MeasurementStrength& strength,
                              std::uint64_t trials, std::uint64_t seed,
                              double background_rate) {
    if (trials == 0) {
        throw std::invalid_argument("synthesize_counts: need at least one trial");
    }
    if (!std::isfinite(background_rate) || background_rate < 0.0) {
        throw std::invalid_argument("synthesize_counts: background_rate must be ≥ 0");
    }
    const double ps = postselect_probability(p_a, strength);
    const double pv = conditional_prob_v(p_a, strength);
    const double bg = std::min(background_rate, 1.0);

    std::mt19937_64 rng(seed);
    CountRecord rec{strength.g(), 0, 0, trials, seed};
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (uniform01(rng) < ps) {
            if (uniform01(rng) < pv) ++rec.counts_v; else ++rec.counts_h;
        } else if (bg > 0.0 && uniform01(rng) < bg) {
            if (uniform01(rng) < 0.5) ++rec.counts_v; else ++rec.counts_h;
        }
    }
    return rec;
}

ReadoutPoint readout_point_from_counts(const CountRecord& record) {
    const std::uint64_t total = record.counts_v + record.counts_h;
    if (total == 0) {
        throw std::domain_error("readout_point_from_counts: no detected events");
    }
    const double p_v = static_cast<double>(record.counts_v) / static_cast<double>(total);
    const MeasurementStrength strength = MeasurementStrength::from_g(record.g);
    return ReadoutPoint{record.g, p_v, readout(p_v, strength)};
}

ReadoutPoint calibrated_readout_point(const CountRecord& sample,
                                      const CountRecord& ref_one,
                                      const CountRecord& ref_zero) {
    if (sample.g != ref_one.g || sample.g != ref_zero.g) {
        throw std::invalid_argument(
            "calibrated_readout_point: references must share the sample's strength");
    }
    const auto ratio = [](const CountRecord& rec) {
        const std::uint64_t total = rec.counts_v + rec.counts_h;
        if (total == 0) {
            throw std::domain_error("calibrated_readout_point: reference run has no events");
        }
        return static_cast<double>(rec.counts_v) / static_cast<double>(total);
    };
    const double r1 = ratio(ref_one);
    const double r0 = ratio(ref_zero);
    const double g_emp = r1 - r0;
    if (g_emp <= 0.0) {
        throw std::domain_error("calibrated_readout_point: degenerate calibration scale");
    }
    const double r = (ratio(sample) - r0) / g_emp;
    return ReadoutPoint{g_emp, r * g_emp + (1.0 - g_emp) / 2.0, r};
}

FitResult fit_weak_value(const std::vector<ReadoutPoint>& samples, const FitOptions& options) {
    check_sample_grid(samples);
    if (!(options.lo < options.hi) || !(options.tolerance > 0.0) ||
        !std::isfinite(options.lo) || !std::isfinite(options.hi)) {
        throw std::invalid_argument("fit_weak_value: bad search options");
    }
    const auto objective = [&samples](double p) { return sum_squared_residual(p, samples); };

    // Coarse scan to localize the basin.
    constexpr int kScanPoints = 2001;
    double best_x = options.lo;
    double best_f = objective(best_x);
    const double step = (options.hi - options.lo) / (kScanPoints - 1);
    for (int k = 1; k < kScanPoints; ++k) {
        const double x = options.lo + k * step;
        const double f = objective(x);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }
    double a = std::max(options.lo, best_x - step);
    double b = std::min(options.hi, best_x + step);

    // Golden-section shrink of the bracket.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > options.tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    best_x = (fc < fd) ? c : d;
    best_f = std::min(fc, fd);

    // One guarded parabolic step through (x−h, x, x+h) to land on the vertex.
    const double h = std::max(options.tolerance, std::abs(best_x) * 1e-9);
    const double fl = objective(best_x - h);
    const double fr = objective(best_x + h);
    const double curvature = fr - 2.0 * best_f + fl;
    if (curvature > 0.0) {
        const double vertex = best_x - 0.5 * h * (fr - fl) / curvature;
        if (std::isfinite(vertex) && std::abs(vertex - best_x) <= h) {
            const double fv = objective(vertex);
            if (fv < best_f) {
                best_f = fv;
                best_x = vertex;
            }
        }
    }

    return FitResult{best_x, std::sqrt(best_f / static_cast<double>(samples.size()))};
}

FitResult fit_weak_value(const std::vector<CountRecord>& samples, const FitOptions& options) {
    std::vector<ReadoutPoint> points;
    points.reserve(samples.size());
    for (const auto& rec : samples) {
        points.push_back(readout_point_from_counts(rec));
    }
    return fit_weak_value(points, options);
}

}  // namespace wvsim
