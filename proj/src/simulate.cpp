#include "qwalk/simulate.hpp"

#include "qwalk/error.hpp"
#include "qwalk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qwalk {

Sampler::Sampler(const WalkSpec& spec) : R_(spec.R()) {
    add(spec.interior());
    for (const auto& l : spec.horizontal()) add(l);
    for (const auto& l : spec.vertical()) add(l);
    for (const auto& l : spec.corner()) add(l);
}

void Sampler::add(const IncrementLaw& law) {
    std::vector<double> w;
    for (const auto& a : law.atoms()) {
        if (std::llabs(a.dx) > std::numeric_limits<std::int32_t>::max() / 2 ||
            std::llabs(a.dy) > std::numeric_limits<std::int32_t>::max() / 2) {
            throw DomainError("increment too large for the sampler");
        }
        w.push_back(to_double(a.prob));
    }
    const AliasTable table(w);
    tables_.push_back(Table{static_cast<std::uint32_t>(entries_.size()), static_cast<std::uint32_t>(w.size())});
    const auto& atoms = law.atoms();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& own = atoms[i];
        const auto& alt = atoms[table.aliases()[i]];
        entries_.push_back(Entry{table.thresholds()[i], static_cast<std::int32_t>(own.dx), static_cast<std::int32_t>(own.dy),
                                 static_cast<std::int32_t>(alt.dx), static_cast<std::int32_t>(alt.dy)});
    }
}

namespace {

inline double norm2(Point z) {
    return static_cast<double>(z.x) * static_cast<double>(z.x) + static_cast<double>(z.y) * static_cast<double>(z.y);
}

void require_in_quadrant(Point z) {
    if (z.x < 0 || z.y < 0) throw DomainError("start " + to_string(z) + " lies outside the quadrant");
}

}  // namespace

std::optional<std::uint64_t> passage_time(const Sampler& sampler, Point start, double r, std::uint64_t horizon,
                                          Rng& rng, int compression) {
    const double r2 = r * r;
    Point z = start;
    if (norm2(z) <= r2) return 0;
    if (compression <= 1) {
        for (std::uint64_t n = 1; n <= horizon; ++n) {
            z = sampler.step(z, rng);
            if (norm2(z) <= r2) return n;
        }
        return std::nullopt;
    }
    std::uint64_t real = 0;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        z = sampler.compressed_step(z, compression, rng, real);
        if (real < n || real > static_cast<std::uint64_t>(compression) * n) {
            throw std::logic_error("compressed clock left the band n <= T(n) <= N n");
        }
        if (norm2(z) <= r2) return n;
    }
    return std::nullopt;
}

std::vector<std::uint64_t> survival_grid(std::uint64_t horizon) {
    std::vector<std::uint64_t> grid;
    for (double g = 1.0; g <= static_cast<double>(horizon); g *= 1.25) {
        const auto n = static_cast<std::uint64_t>(std::llround(g));
        if (n > horizon) break;
        if (grid.empty() || n > grid.back()) grid.push_back(n);
    }
    if (grid.empty() || grid.back() != horizon) grid.push_back(horizon);
    return grid;
}

std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw DomainError("log-log fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0.0)) throw DomainError("log-log fit needs distinct abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

std::vector<GridPoint> survival_points(const std::vector<std::optional<std::uint64_t>>& times,
                                       const std::vector<std::uint64_t>& grid) {
    std::vector<std::uint64_t> died(grid.size() + 1, 0);
    for (const auto& t : times) {
        if (!t) continue;
        const auto idx = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), *t) - grid.begin());
        ++died[idx];
    }
    const auto T = static_cast<std::uint64_t>(times.size());
    std::vector<GridPoint> out;
    std::uint64_t gone = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        gone += died[k];
        GridPoint p;
        p.n = grid[k];
        p.survivors = T - gone;
        p.survival = static_cast<double>(p.survivors) / static_cast<double>(T);
        p.stderr_ = std::sqrt(p.survival * (1.0 - p.survival) / static_cast<double>(T));
        out.push_back(p);
    }
    return out;
}

SlopeFit fit_tail(const std::vector<GridPoint>& grid, std::uint64_t trials, std::uint64_t seed, int resamples) {
    if (grid.empty() || trials == 0) throw DomainError("empty survival curve");
    SlopeFit fit;
    std::uint64_t first90 = 0;
    for (const auto& p : grid) {
        if (p.survival <= 0.9) {
            first90 = p.n;
            break;
        }
    }
    if (first90 == 0) throw ConvergenceError("survival never falls to 0.9; no fit window", 1.0);
    fit.n_min = std::max<std::uint64_t>(100, first90);
    for (const auto& p : grid) {
        if (p.survivors >= 100) fit.n_max = p.n;
    }
    std::vector<std::size_t> window;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k].n >= fit.n_min && grid[k].n <= fit.n_max) window.push_back(k);
    }
    fit.points = window.size();
    if (window.size() < 3) {
        throw ConvergenceError("fit window [" + std::to_string(fit.n_min) + ", " + std::to_string(fit.n_max) +
                                   "] holds fewer than 3 grid points",
                               static_cast<double>(window.size()));
    }
    std::vector<double> xs, ys;
    for (auto k : window) {
        xs.push_back(static_cast<double>(grid[k].n));
        ys.push_back(grid[k].survival);
    }
    std::tie(fit.slope, fit.intercept) = loglog_fit(xs, ys);

    if (resamples <= 0) {
        fit.ci_lo = fit.ci_hi = fit.slope;
        return fit;
    }
    // Trials fall in bins: bin k dies in (n_{k-1}, n_k], the last bin survives.
    const std::size_t G = grid.size();
    std::vector<double> bin_weight(G + 1);
    std::uint64_t prev = trials;
    for (std::size_t k = 0; k < G; ++k) {
        if (grid[k].survivors > prev) throw SchemaError("survivor counts increase along the grid");
        bin_weight[k] = static_cast<double>(prev - grid[k].survivors);
        prev = grid[k].survivors;
    }
    bin_weight[G] = static_cast<double>(prev);
    const AliasTable bins(bin_weight);

    std::vector<double> slopes;
    std::vector<std::uint64_t> hist(G + 1);
    std::vector<double> yb(window.size());
    for (int b = 0; b < resamples; ++b) {
        Rng rng(stream_seed(seed, static_cast<std::uint64_t>(b)));
        std::fill(hist.begin(), hist.end(), 0);
        for (std::uint64_t t = 0; t < trials; ++t) ++hist[bins.sample(rng)];
        std::uint64_t alive = trials;
        std::size_t w = 0;
        bool ok = true;
        for (std::size_t k = 0; k < G && w < window.size(); ++k) {
            alive -= hist[k];
            if (k == window[w]) {
                if (alive == 0) ok = false;
                yb[w++] = static_cast<double>(alive) / static_cast<double>(trials);
            }
        }
        if (!ok) continue;
        slopes.push_back(loglog_fit(xs, yb).first);
    }
    fit.bootstrap_used = slopes.size();
    if (slopes.empty()) throw ConvergenceError("every bootstrap resample emptied the fit window", 0.0);
    std::sort(slopes.begin(), slopes.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(slopes.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, slopes.size() - 1);
        return slopes[lo] + (pos - static_cast<double>(lo)) * (slopes[hi] - slopes[lo]);
    };
    fit.ci_lo = quantile(0.025);
    fit.ci_hi = quantile(0.975);
    return fit;
}

TailEstimate survival_curve(const WalkSpec& spec, const SimConfig& cfg) {
    if (cfg.horizon == 0 || cfg.trials == 0) throw DomainError("horizon and trials must be positive");
    if (!(cfg.radius > spec.R() * std::sqrt(2.0))) {
        throw DomainError("radius must exceed R*sqrt(2) = " + std::to_string(spec.R() * std::sqrt(2.0)));
    }
    if (cfg.compression < 1) throw DomainError("compression factor must be at least 1");
    require_in_quadrant(cfg.start);
    require_closed(spec);

    const Sampler sampler(spec);
    std::vector<std::optional<std::uint64_t>> times(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t i) {
        Rng rng(stream_seed(cfg.master_seed, i));
        times[i] = passage_time(sampler, cfg.start, cfg.radius, cfg.horizon, rng, cfg.compression);
    });
    if (std::all_of(times.begin(), times.end(), [](const auto& t) { return t && *t == 0; })) {
        throw DomainError("every trial starts inside the ball; survival curve is degenerate");
    }

    TailEstimate est;
    est.trials = cfg.trials;
    est.horizon = cfg.horizon;
    est.grid = survival_points(times, survival_grid(cfg.horizon));
    est.censored_fraction = static_cast<double>(std::count(times.begin(), times.end(), std::nullopt)) /
                            static_cast<double>(cfg.trials);
    est.fit = fit_tail(est.grid, cfg.trials, stream_seed(cfg.master_seed, 0xb00757ULL));
    return est;
}

StabilizationEstimate stabilization_probe(const WalkSpec& spec, int side, std::uint64_t n, Point start,
                                          std::uint64_t samples, std::uint64_t seed, unsigned threads) {
    if (side != 1 && side != 2) throw DomainError("side must be 1 or 2");
    if (n == 0 || samples < 2) throw DomainError("need n >= 1 and at least two samples");
    const int R = spec.R();
    const Region region = side == 1 ? Region::Horizontal : Region::Vertical;
    if (spec.region_of(start) != region) throw DomainError("start " + to_string(start) + " is not on boundary " + std::to_string(side));
    if (!(start.norm() > 2.0 * R * static_cast<double>(n))) {
        throw DomainError("start must satisfy |z| > 2Rn = " + std::to_string(2 * R * n));
    }
    require_closed(spec);
    const Sampler sampler(spec);

    constexpr std::uint64_t block = 1024;
    const std::uint64_t blocks = (samples + block - 1) / block;
    struct Sums {
        double x = 0, y = 0, o = 0, xx = 0, yy = 0, oo = 0, xo = 0, yo = 0;
    };
    std::vector<Sums> partial(blocks);
    parallel_for(
        blocks, threads,
        [&](std::uint64_t b) {
            Sums s;
            const std::uint64_t end = std::min(samples, (b + 1) * block);
            for (std::uint64_t i = b * block; i < end; ++i) {
                Rng rng(stream_seed(seed, i));
                Point z = start;
                std::uint64_t occ = 0;
                for (std::uint64_t t = 0; t < n; ++t) {
                    if (side == 1 ? (z.x >= R && z.y < R) : (z.y >= R && z.x < R)) ++occ;
                    z = sampler.step(z, rng);
                }
                const double dx = static_cast<double>(z.x - start.x);
                const double dy = static_cast<double>(z.y - start.y);
                const double o = static_cast<double>(occ);
                s.x += dx;
                s.y += dy;
                s.o += o;
                s.xx += dx * dx;
                s.yy += dy * dy;
                s.oo += o * o;
                s.xo += dx * o;
                s.yo += dy * o;
            }
            partial[b] = s;
        },
        1);
    Sums t;
    for (const auto& s : partial) {
        t.x += s.x;
        t.y += s.y;
        t.o += s.o;
        t.xx += s.xx;
        t.yy += s.yy;
        t.oo += s.oo;
        t.xo += s.xo;
        t.yo += s.yo;
    }
    const double m = static_cast<double>(samples);
    StabilizationEstimate est;
    est.side = side;
    est.n = n;
    est.start = start;
    est.samples = samples;
    est.mean_occupation = t.o / m;
    if (!(est.mean_occupation > 0.0)) throw ConvergenceError("boundary occupation estimate is zero", 0.0);
    est.estimate = {t.x / t.o, t.y / t.o};
    // Delta method for a ratio of means.
    auto se = [&](double d, double sd, double sdd, double sdo) {
        const double var = (sdd - 2.0 * d * sdo + d * d * t.oo) / m - std::pow((sd - d * t.o) / m, 2);
        return std::sqrt(std::max(var, 0.0) / m) / est.mean_occupation;
    };
    est.std_error = {se(est.estimate.x, t.x, t.xx, t.xo), se(est.estimate.y, t.y, t.yy, t.yo)};
    est.ci_lo = est.estimate - 1.959963984540054 * est.std_error;
    est.ci_hi = est.estimate + 1.959963984540054 * est.std_error;
    return est;
}

ExcursionEstimate excursion_max_probe(const WalkSpec& spec, Point start, double r, const std::vector<double>& s_grid,
                                      std::uint64_t trials, std::uint64_t horizon, std::uint64_t seed,
                                      unsigned threads) {
    require_in_quadrant(start);
    if (!(start.norm() > r)) throw DomainError("start must lie outside the ball of radius r");
    if (s_grid.empty() || trials == 0 || horizon == 0) throw DomainError("need a level grid, trials and a horizon");
    require_closed(spec);
    const Sampler sampler(spec);
    const double smax = *std::max_element(s_grid.begin(), s_grid.end());
    const double smax2 = smax * smax;
    const double r2 = r * r;

    std::vector<double> peak(trials);
    std::vector<char> censored(trials, 0);
    parallel_for(trials, threads, [&](std::uint64_t i) {
        Rng rng(stream_seed(seed, i));
        Point z = start;
        double best = norm2(z);
        bool done = best >= smax2;
        for (std::uint64_t n = 1; n <= horizon && !done; ++n) {
            z = sampler.step(z, rng);
            const double q = norm2(z);
            best = std::max(best, q);
            done = best >= smax2 || q <= r2;
        }
        censored[i] = done ? 0 : 1;
        peak[i] = std::sqrt(best);
    });

    ExcursionEstimate est;
    est.censored_fraction = static_cast<double>(std::count(censored.begin(), censored.end(), 1)) / static_cast<double>(trials);
    std::vector<double> xs, ys;
    for (double s : s_grid) {
        ExcursionPoint p;
        p.s = s;
        p.hits = static_cast<std::uint64_t>(std::count_if(peak.begin(), peak.end(), [s](double v) { return v >= s; }));
        p.probability = static_cast<double>(p.hits) / static_cast<double>(trials);
        p.stderr_ = std::sqrt(p.probability * (1.0 - p.probability) / static_cast<double>(trials));
        est.points.push_back(p);
        if (s > start.norm() && p.hits >= 10 && p.probability < 1.0) {
            xs.push_back(s);
            ys.push_back(p.probability);
        }
    }
    est.fit_points = xs.size();
    if (xs.size() >= 2) est.slope = loglog_fit(xs, ys).first;
    else est.slope = std::numeric_limits<double>::quiet_NaN();
    return est;
}

}  // namespace qwalk
