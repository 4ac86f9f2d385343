#include "qwalk/harmonic.hpp"

#include "qwalk/classify.hpp"
#include "qwalk/error.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/random.hpp"
#include "qwalk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace qwalk {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void require_nonzero(Vec2 z) {
    if (z.x == 0.0 && z.y == 0.0) throw DomainError("derivatives of h are undefined at the origin");
}

}  // namespace

HarmonicParams make_harmonic(double beta1, double beta2, double phi0) {
    if (!(phi0 > 0.0 && phi0 < std::numbers::pi)) throw DomainError("phi0 must lie in (0, pi)");
    if (!(std::fabs(beta1) < kHalfPi) || !(std::fabs(beta2) < kHalfPi)) {
        throw DomainError("beta1 and beta2 must lie in (-pi/2, pi/2)");
    }
    return {beta1, beta2, phi0, (beta1 + beta2) / phi0};
}

double h_eval(Vec2 z, const HarmonicParams& p) {
    const double r = z.norm();
    if (r == 0.0) {
        if (p.beta < 0.0) throw DomainError("h is unbounded at the origin for beta < 0");
        if (p.beta > 0.0) return 0.0;
        return std::cos(p.beta1);
    }
    const double theta = std::atan2(z.y, z.x);
    return std::pow(r, p.beta) * std::cos(p.beta * theta - p.beta1);
}

Vec2 h_gradient(Vec2 z, const HarmonicParams& p) {
    require_nonzero(z);
    const double r = z.norm();
    const double theta = std::atan2(z.y, z.x);
    const double c = p.beta * std::pow(r, p.beta - 1.0);
    const double a = (p.beta - 1.0) * theta - p.beta1;
    return {c * std::cos(a), -c * std::sin(a)};
}

Mat2 h_hessian(Vec2 z, const HarmonicParams& p) {
    require_nonzero(z);
    const double r = z.norm();
    const double theta = std::atan2(z.y, z.x);
    const double c = p.beta * (p.beta - 1.0) * std::pow(r, p.beta - 2.0);
    const double a = (p.beta - 2.0) * theta - p.beta1;
    const double d11 = c * std::cos(a);
    const double d12 = -c * std::sin(a);
    return {d11, d12, d12, -d11};
}

double h_gradient_norm(Vec2 z, const HarmonicParams& p) {
    require_nonzero(z);
    return std::fabs(p.beta) * std::pow(z.norm(), p.beta - 1.0);
}

double h_truncated(Vec2 z, const HarmonicParams& p, double b) {
    if (!(b > 0.0)) throw DomainError("truncation level must be positive");
    return std::min(std::pow(2.0 * b, p.beta), h_eval(z, p));
}

GrowthEnvelope growth_envelope(const HarmonicParams& p) {
    const double room = kHalfPi - std::max(std::fabs(p.beta1), std::fabs(p.beta2));
    GrowthEnvelope g;
    const double ab = std::fabs(p.beta);
    g.delta = ab > 0.0 ? room / (4.0 * ab) : 1.0;
    g.eps0 = ab > 0.0 ? std::cos(kHalfPi - g.delta * ab) : std::cos(std::max(std::fabs(p.beta1), std::fabs(p.beta2)));
    return g;
}

bool in_widened_wedge(Vec2 z, double phi0, double delta) {
    const double theta = std::atan2(z.y, z.x);
    return theta >= -delta && theta <= phi0 + delta;
}

HarmonicParams choose_betas(double phi1, double phi2, double phi0, double chi, double epsilon, BetaWindow window) {
    if (chi == 0.0) throw DomainError("beta windows need chi != 0");
    if (!(epsilon > 0.0 && epsilon < std::fabs(chi))) throw DomainError("epsilon must lie in (0, |chi|)");
    // Shifting both angles by +d moves beta by 2d/phi0.
    const bool up = (chi > 0.0) == (window == BetaWindow::Above);
    const double shift = (up ? 1.0 : -1.0) * epsilon * phi0 / 4.0;
    const double b1 = phi1 + shift;
    const double b2 = phi2 + shift;
    if (!(std::fabs(b1) < kHalfPi) || !(std::fabs(b2) < kHalfPi)) {
        throw DomainError("window midpoint leaves (-pi/2, pi/2); use a smaller epsilon");
    }
    return make_harmonic(b1, b2, phi0);
}

DriftEstimate drift_estimate(const WalkSpec& spec, Point z, const HarmonicParams& p, const DriftOptions& opts,
                             std::optional<Region> expected_region) {
    if (!(opts.alpha > 0.0)) throw DomainError("alpha must be positive");
    if (opts.N < 1) throw DomainError("compression factor must be at least 1");
    if (opts.samples < 2) throw DomainError("need at least two samples");
    if (z.x < 0 || z.y < 0) throw DomainError("probe point outside the quadrant");
    const Region region = spec.region_of(z);
    if (expected_region && *expected_region != region) {
        throw DomainError(std::string("probe point ") + to_string(z) + " lies in " + to_string(region) + ", not " +
                          to_string(*expected_region));
    }
    require_closed(spec);
    const Mat2 T = transform_matrix(covariance(spec.interior()));
    const Sampler sampler(spec);

    const double cap = opts.truncation_b ? std::pow(2.0 * *opts.truncation_b, p.beta) : 0.0;
    auto value = [&](Vec2 v) {
        double h = h_eval(v, p);
        if (opts.truncation_b) h = std::min(cap, h);
        if (h < 0.0) throw DomainError("h is negative outside the wedge");
        return std::pow(h, opts.alpha);
    };
    const Vec2 tz = T * z.to_vec();
    const double f0 = value(tz);
    Vec2 grad;
    const bool use_cv = opts.control_variate && region == Region::Interior;
    if (use_cv) {
        const double h0 = h_eval(tz, p);
        if (!(opts.truncation_b && h0 >= cap)) grad = opts.alpha * std::pow(h0, opts.alpha - 1.0) * h_gradient(tz, p);
    }

    constexpr std::uint64_t block = 4096;
    const std::uint64_t blocks = (opts.samples + block - 1) / block;
    std::vector<std::pair<double, double>> partial(blocks);
    parallel_for(
        blocks, opts.threads,
        [&](std::uint64_t b) {
            double s = 0.0, ss = 0.0;
            const std::uint64_t end = std::min(opts.samples, (b + 1) * block);
            for (std::uint64_t i = b * block; i < end; ++i) {
                Rng rng(stream_seed(opts.seed, i));
                std::uint64_t real = 0;
                const Point w = sampler.compressed_step(z, opts.N, rng, real);
                double d = value(T * w.to_vec()) - f0;
                if (use_cv) d -= dot(grad, T * (w - z).to_vec());
                s += d;
                ss += d * d;
            }
            partial[b] = {s, ss};
        },
        1);
    double s = 0.0, ss = 0.0;
    for (const auto& [a, q] : partial) {
        s += a;
        ss += q;
    }
    const double m = static_cast<double>(opts.samples);
    DriftEstimate e;
    e.point = z.to_vec();
    e.mean = s / m;
    const double var = std::max(0.0, (ss - m * e.mean * e.mean) / (m - 1.0));
    e.std_error = std::sqrt(var / m);
    e.samples = opts.samples;
    e.alpha = opts.alpha;
    e.N = opts.N;
    e.region = region;
    return e;
}

std::vector<ProbePoint> shell_points(int R, double radius, int angles) {
    std::vector<ProbePoint> out;
    for (int k = 1; k <= angles; ++k) {
        const double a = kHalfPi * k / (angles + 1);
        Point z{std::llround(radius * std::cos(a)), std::llround(radius * std::sin(a))};
        if (z.x >= R && z.y >= R) out.push_back({z, Region::Interior});
    }
    const auto far = static_cast<std::int64_t>(std::llround(radius));
    for (int i = 0; i < R; ++i) {
        out.push_back({Point{far, i}, Region::Horizontal});
        out.push_back({Point{i, far}, Region::Vertical});
    }
    return out;
}

bool resolves(const DriftEstimate& e, int expected_sign) {
    constexpr double z = 1.959963984540054;
    if (expected_sign < 0) return e.mean + z * e.std_error < 0.0;
    return e.mean + z * e.std_error >= 0.0;
}

DriftSweepResult drift_sweep(const WalkSpec& spec, const HarmonicParams& p, const DriftSweepOptions& opts) {
    std::vector<int> Ns = opts.Ns;
    if (Ns.empty()) {
        for (int k = 0; k <= 10; ++k) Ns.push_back(1 << k);
    }
    if (opts.radii.empty()) throw DomainError("drift sweep needs at least one shell radius");
    std::vector<ProbePoint> probes;
    for (double r : opts.radii) {
        for (const auto& q : shell_points(spec.R(), r, opts.angles)) {
            if (opts.boundaries_only && q.region == Region::Interior) continue;
            probes.push_back(q);
        }
    }
    if (probes.empty()) throw DomainError("no probe points");

    DriftSweepResult result;
    std::vector<std::optional<DriftEstimate>> interior_cache(probes.size());
    for (int N : Ns) {
        DriftSweepResult cur;
        cur.N = N;
        std::size_t ok = 0;
        std::map<Region, std::pair<std::size_t, std::size_t>> per_region;
        for (std::size_t k = 0; k < probes.size(); ++k) {
            const auto& q = probes[k];
            DriftEstimate e;
            if (q.region == Region::Interior && interior_cache[k]) {
                e = *interior_cache[k];
                e.N = N;
            } else {
                DriftOptions d;
                d.alpha = opts.alpha;
                d.N = N;
                d.samples = q.region == Region::Interior ? opts.interior_samples : opts.boundary_samples;
                d.seed = stream_seed(opts.seed, k);
                d.truncation_b = opts.truncation_b;
                d.threads = opts.threads;
                e = drift_estimate(spec, q.z, p, d, q.region);
                if (q.region == Region::Interior) interior_cache[k] = e;
            }
            const bool good = resolves(e, opts.expected_sign);
            ok += good ? 1 : 0;
            auto& pr = per_region[q.region];
            pr.first += good ? 1 : 0;
            ++pr.second;
            cur.estimates.push_back(e);
        }
        cur.fraction_resolved = static_cast<double>(ok) / static_cast<double>(probes.size());
        cur.success = cur.fraction_resolved >= opts.required_fraction;
        for (const auto& [r, c] : per_region) {
            cur.region_fraction.emplace_back(r, static_cast<double>(c.first) / static_cast<double>(c.second));
        }
        result = std::move(cur);
        if (result.success) break;
    }
    return result;
}

}  // namespace qwalk
