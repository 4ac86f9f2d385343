#pragma once

#include "qwalk/model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qwalk {

// Sparse pmf on the integers, keyed by value.
using IntPmf = std::map<std::int64_t, Rational>;

// One-dimensional chain of the coordinate transverse to boundary `side`.
// Rows i < R come from the boundary laws, rows i >= R from the interior law
// shifted by i.
struct ProjectionChain {
    int R = 1;
    int side = 1;
    std::vector<IntPmf> boundary_rows;  // i -> pmf over target j >= 0
    IntPmf interior_increment;          // pmf over j - i

    // Transition probability i -> j of the infinite chain.
    [[nodiscard]] Rational prob(std::int64_t i, std::int64_t j) const;
    [[nodiscard]] std::int64_t min_interior_increment() const { return interior_increment.begin()->first; }
    [[nodiscard]] bool left_continuous() const { return min_interior_increment() >= -1; }
};

ProjectionChain projection_chain(const WalkSpec& spec, int side);

enum class StationaryMethod { ExactEmbedded, Truncated, OccupationMC };

const char* to_string(StationaryMethod method);

struct StationaryMeasure {
    std::vector<double> weights;
    std::vector<Rational> exact_weights;  // filled by the exact method only
    StationaryMethod method = StationaryMethod::ExactEmbedded;
    double residual = 0.0;
    std::int64_t trunc_level = 0;
    std::uint64_t sample_count = 0;
    std::vector<double> std_errors;         // occupation MC only
    std::vector<double> truncated_vector;   // full invariant vector on {0..K}, truncated method only
    std::vector<std::string> diagnostics;
};

// Stationary law of the R x R embedded chain whose last column absorbs all
// targets j >= R-1. Exact under left-continuity.
StationaryMeasure embedded_exact(const ProjectionChain& chain);

// The R x R embedded matrix itself.
std::vector<std::vector<Rational>> embedded_matrix(const ProjectionChain& chain);

// Solves pi Q = pi, sum pi = 1 for a square stochastic matrix by exact
// Gaussian elimination. Throws HypothesisError if the solution is not unique.
std::vector<Rational> stationary_exact(const std::vector<std::vector<Rational>>& q);

struct TruncationOptions {
    std::int64_t K0 = 0;  // <= 0 selects max(64, 8R)
    double tol = 1e-10;
    std::int64_t max_sweeps = 1'000'000;
    std::int64_t max_level = 1 << 17;
};

// Dense transition matrix of the chain restricted to {0..K}, mass above K
// folded onto K. Row-major (K+1)^2 doubles; used by tests.
std::vector<double> truncated_matrix(const ProjectionChain& chain, std::int64_t K);

StationaryMeasure truncated_invariant(const ProjectionChain& chain, const TruncationOptions& opts = {});

// Occupation ratios of I_R along one trajectory started at 0. Standard errors
// treat excursions between visits to 0 as independent cycles.
StationaryMeasure occupation_mc(const ProjectionChain& chain, std::uint64_t steps, std::uint64_t seed);

enum class StationaryChoice { Auto, Exact, Truncate, MonteCarlo };

struct StationaryOptions {
    StationaryChoice method = StationaryChoice::Auto;
    TruncationOptions truncation;
    std::uint64_t mc_steps = 10'000'000;
    std::uint64_t seed = 1;
};

// Auto uses the exact solver for left-continuous chains, truncation otherwise.
StationaryMeasure stationary_measure(const WalkSpec& spec, int side, const StationaryOptions& opts = {});

}  // namespace qwalk
