#pragma once

#include "qwalk/geometry.hpp"
#include "qwalk/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qwalk {

struct HarmonicParams {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double phi0 = 0.0;
    double beta = 0.0;
};

// Validates the angle ranges and sets beta = (beta1 + beta2) / phi0.
HarmonicParams make_harmonic(double beta1, double beta2, double phi0);

// h(r, theta) = r^beta cos(beta theta - beta1), z in the normalized plane.
double h_eval(Vec2 z, const HarmonicParams& p);
Vec2 h_gradient(Vec2 z, const HarmonicParams& p);
Mat2 h_hessian(Vec2 z, const HarmonicParams& p);
// |beta| |z|^(beta - 1).
double h_gradient_norm(Vec2 z, const HarmonicParams& p);

// min((2b)^beta, h(z)).
double h_truncated(Vec2 z, const HarmonicParams& p, double b);

struct GrowthEnvelope {
    double delta = 0.0;  // angular margin of the widened wedge
    double eps0 = 0.0;   // eps0 |z|^beta <= h(z) <= |z|^beta on that wedge
};

// delta is half the largest admissible value, i.e. 4 delta |beta| =
// pi/2 - max(|beta1|, |beta2|); eps0 = cos(pi/2 - delta |beta|).
GrowthEnvelope growth_envelope(const HarmonicParams& p);

// theta in [-delta, phi0 + delta].
bool in_widened_wedge(Vec2 z, double phi0, double delta);

enum class BetaWindow { Below, Above };

// Midpoints of the admissible windows for beta1, beta2: |beta| lands in
// (|chi| - eps, |chi|) for Below and (|chi|, |chi| + eps) for Above, with
// sign beta = sign chi.
HarmonicParams choose_betas(double phi1, double phi2, double phi0, double chi, double epsilon, BetaWindow window);

struct DriftEstimate {
    Vec2 point;  // lattice state before the transform
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    double alpha = 0.0;
    int N = 1;
    Region region = Region::Interior;
};

struct DriftOptions {
    double alpha = 1.0;
    int N = 1;
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 1;
    std::optional<double> truncation_b;
    // From interior states the one-step increment T(w - z) has mean zero, so
    // grad f . T(w - z) is subtracted; the expectation is unchanged.
    bool control_variate = true;
    unsigned threads = 1;
};

// Mean and standard error of f(T Z~_1) - f(T z), f = h^alpha (or h_b^alpha),
// for one step of the N-compressed chain started at z.
DriftEstimate drift_estimate(const WalkSpec& spec, Point z, const HarmonicParams& p, const DriftOptions& opts,
                             std::optional<Region> expected_region = std::nullopt);

struct ProbePoint {
    Point z;
    Region region;
};

// Probe states on the shell of lattice radius `radius`: interior points at
// `angles` evenly spaced directions strictly inside the quadrant, and one
// point per boundary row of each boundary.
std::vector<ProbePoint> shell_points(int R, double radius, int angles = 3);

struct DriftSweepResult {
    int N = 0;
    std::vector<DriftEstimate> estimates;
    double fraction_resolved = 0.0;
    bool success = false;
    std::vector<std::pair<Region, double>> region_fraction;
};

struct DriftSweepOptions {
    double alpha = 0.5;
    std::vector<int> Ns;         // empty selects 2^0 .. 2^10
    std::vector<double> radii;   // lattice radii of the shells
    int angles = 3;
    std::uint64_t interior_samples = 1'000'000;
    std::uint64_t boundary_samples = 20'000;
    std::uint64_t seed = 1;
    std::optional<double> truncation_b;
    int expected_sign = -1;       // -1: CI below 0; +1: CI reaches [0, inf)
    double required_fraction = 0.9;
    bool boundaries_only = false;
    unsigned threads = 1;
};

// Tries each N in turn; returns the first N at which at least the required
// fraction of probes resolve the expected sign (or the last N tried).
DriftSweepResult drift_sweep(const WalkSpec& spec, const HarmonicParams& p, const DriftSweepOptions& opts);

// Whether an estimate resolves the sign: strictly negative 95% CI for -1,
// upper 95% limit >= 0 for +1.
bool resolves(const DriftEstimate& e, int expected_sign);

}  // namespace qwalk
