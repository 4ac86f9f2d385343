#pragma once

#include "qwalk/geometry.hpp"
#include "qwalk/model.hpp"
#include "qwalk/random.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qwalk {

// Alias tables for every law of a spec, packed for the step loop.
class Sampler {
public:
    explicit Sampler(const WalkSpec& spec);

    [[nodiscard]] int R() const noexcept { return R_; }

    Point step(Point z, Rng& rng) const noexcept {
        const Table& t = table_for(z);
        const std::uint64_t u = rng();
        const Entry& e = entries_[t.offset + static_cast<std::uint32_t>(((u >> 32) * t.size) >> 32)];
        if ((u & 0xffffffffULL) < e.threshold) return {z.x + e.dx, z.y + e.dy};
        return {z.x + e.alias_dx, z.y + e.alias_dy};
    }

    // One step of the compressed chain: a single step from the interior, N
    // steps from anywhere else. Adds the real steps taken to `real_steps`.
    Point compressed_step(Point z, int N, Rng& rng, std::uint64_t& real_steps) const noexcept {
        if (z.x >= R_ && z.y >= R_) {
            ++real_steps;
            return step(z, rng);
        }
        for (int k = 0; k < N; ++k) z = step(z, rng);
        real_steps += static_cast<std::uint64_t>(N);
        return z;
    }

private:
    struct Entry {
        std::uint64_t threshold;
        std::int32_t dx, dy, alias_dx, alias_dy;
    };
    struct Table {
        std::uint32_t offset;
        std::uint32_t size;
    };

    const Table& table_for(Point z) const noexcept {
        if (z.x >= R_) return z.y >= R_ ? tables_[0] : tables_[1 + z.y];
        if (z.y >= R_) return tables_[1 + R_ + z.x];
        return tables_[1 + 2 * R_ + z.x * R_ + z.y];
    }

    void add(const IncrementLaw& law);

    int R_;
    std::vector<Table> tables_;
    std::vector<Entry> entries_;
};

// Passage time into the closed ball of radius r; nullopt when censored.
std::optional<std::uint64_t> passage_time(const Sampler& sampler, Point start, double r, std::uint64_t horizon,
                                          Rng& rng, int compression = 1);

struct SimConfig {
    Point start;
    double radius = 0.0;
    std::uint64_t horizon = 0;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
    int compression = 1;  // N > 1 runs the time-compressed chain
};

struct GridPoint {
    std::uint64_t n = 0;
    std::uint64_t survivors = 0;
    double survival = 0.0;
    double stderr_ = 0.0;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;
    std::size_t points = 0;
    std::size_t bootstrap_used = 0;
};

struct TailEstimate {
    std::vector<GridPoint> grid;
    std::uint64_t trials = 0;
    std::uint64_t horizon = 0;
    double censored_fraction = 0.0;
    SlopeFit fit;
    std::vector<std::uint64_t> real_steps_max;  // per trial when compressed; empty otherwise
};

// Geometric grid: rounded powers of 1.25 from 1, deduplicated, capped by
// `horizon`, which is always the last point.
std::vector<std::uint64_t> survival_grid(std::uint64_t horizon);

// Least-squares slope of log y on log x.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// Window: n_min = max(100, first n with survival <= 0.9), n_max = last n
// with at least 100 survivors. CI: percentile bootstrap over `resamples`
// resamples of the trials, the window held fixed.
SlopeFit fit_tail(const std::vector<GridPoint>& grid, std::uint64_t trials, std::uint64_t seed,
                  int resamples = 1000);

// Builds grid survivors from per-trial times (nullopt = censored).
std::vector<GridPoint> survival_points(const std::vector<std::optional<std::uint64_t>>& times,
                                       const std::vector<std::uint64_t>& grid);

TailEstimate survival_curve(const WalkSpec& spec, const SimConfig& cfg);

struct StabilizationEstimate {
    int side = 1;
    std::uint64_t n = 0;
    Point start;
    std::uint64_t samples = 0;
    Vec2 estimate;
    Vec2 std_error;
    Vec2 ci_lo;
    Vec2 ci_hi;
    double mean_occupation = 0.0;
};

// Ratio of means E[Z_n - z] / E[occupation of X_side over steps 0..n-1].
StabilizationEstimate stabilization_probe(const WalkSpec& spec, int side, std::uint64_t n, Point start,
                                          std::uint64_t samples, std::uint64_t seed, unsigned threads = 1);

struct ExcursionPoint {
    double s = 0.0;
    double probability = 0.0;
    double stderr_ = 0.0;
    std::uint64_t hits = 0;
};

struct ExcursionEstimate {
    std::vector<ExcursionPoint> points;
    double censored_fraction = 0.0;
    double slope = 0.0;  // log-log in s over points with s > |start| and >= 10 hits
    std::size_t fit_points = 0;
};

// P(max_{n <= tau} |Z_n| >= s) for each s in s_grid.
ExcursionEstimate excursion_max_probe(const WalkSpec& spec, Point start, double r, const std::vector<double>& s_grid,
                                      std::uint64_t trials, std::uint64_t horizon, std::uint64_t seed,
                                      unsigned threads = 1);

}  // namespace qwalk
