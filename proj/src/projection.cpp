#include "qwalk/projection.hpp"

#include "qwalk/error.hpp"
#include "qwalk/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qwalk {

const char* to_string(StationaryMethod method) {
    switch (method) {
        case StationaryMethod::ExactEmbedded: return "exact-embedded";
        case StationaryMethod::Truncated: return "truncated";
        case StationaryMethod::OccupationMC: return "occupation-mc";
    }
    return "?";
}

Rational ProjectionChain::prob(std::int64_t i, std::int64_t j) const {
    if (i < 0 || j < 0) return Rational(0);
    const IntPmf* row = nullptr;
    std::int64_t key = j;
    if (i < R) {
        row = &boundary_rows[static_cast<std::size_t>(i)];
    } else {
        row = &interior_increment;
        key = j - i;
    }
    auto it = row->find(key);
    return it == row->end() ? Rational(0) : it->second;
}

ProjectionChain projection_chain(const WalkSpec& spec, int side) {
    if (side != 1 && side != 2) throw DomainError("side must be 1 or 2");
    ProjectionChain chain;
    chain.R = spec.R();
    chain.side = side;
    auto transverse = [side](const Atom& a) { return side == 1 ? a.dy : a.dx; };
    for (int i = 0; i < spec.R(); ++i) {
        IntPmf row;
        for (const auto& a : spec.boundary_law(side, i).atoms()) row[i + transverse(a)] += a.prob;
        chain.boundary_rows.push_back(std::move(row));
    }
    for (const auto& a : spec.interior().atoms()) chain.interior_increment[transverse(a)] += a.prob;
    return chain;
}

std::vector<std::vector<Rational>> embedded_matrix(const ProjectionChain& chain) {
    const auto R = static_cast<std::size_t>(chain.R);
    std::vector<std::vector<Rational>> q(R, std::vector<Rational>(R, Rational(0)));
    for (std::size_t i = 0; i < R; ++i) {
        for (const auto& [j, p] : chain.boundary_rows[i]) {
            const auto col = std::min<std::int64_t>(j, chain.R - 1);
            q[i][static_cast<std::size_t>(col)] += p;
        }
    }
    return q;
}

std::vector<Rational> stationary_exact(const std::vector<std::vector<Rational>>& q) {
    const std::size_t n = q.size();
    // Rows of (Q^T - I) with the last equation replaced by sum(pi) = 1.
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, Rational(0)));
    for (std::size_t r = 0; r + 1 < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) a[r][c] = q[c][r] - (r == c ? 1 : 0);
    }
    for (std::size_t c = 0; c < n; ++c) a[n - 1][c] = 1;
    a[n - 1][n] = 1;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw HypothesisError("embedded chain has no unique stationary law (reducible on I_R)");
        std::swap(a[piv], a[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<Rational> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
    return pi;
}

namespace {

void fill_weights(StationaryMeasure& m, const std::vector<Rational>& pi) {
    m.exact_weights = pi;
    m.weights.clear();
    for (const auto& p : pi) m.weights.push_back(to_double(p));
}

void require_positive(const std::vector<double>& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) {
            throw HypothesisError("stationary weight of state " + std::to_string(i) +
                                  " is not positive; projection chain is not irreducible on I_R");
        }
    }
}

}  // namespace

StationaryMeasure embedded_exact(const ProjectionChain& chain) {
    if (!chain.left_continuous()) {
        throw MethodUnavailableError("exact embedded solve needs a left-continuous chain (interior increment " +
                                     std::to_string(chain.min_interior_increment()) +
                                     " < -1); use the truncated or occupation-MC method");
    }
    StationaryMeasure m;
    m.method = StationaryMethod::ExactEmbedded;
    fill_weights(m, stationary_exact(embedded_matrix(chain)));
    require_positive(m.weights);
    return m;
}

namespace {

struct SparseRow {
    std::vector<std::int64_t> target;
    std::vector<double> prob;
};

std::vector<SparseRow> truncated_rows(const ProjectionChain& chain, std::int64_t K) {
    std::vector<SparseRow> rows(static_cast<std::size_t>(K + 1));
    for (std::int64_t i = 0; i <= K; ++i) {
        std::map<std::int64_t, double> acc;
        if (i < chain.R) {
            for (const auto& [j, p] : chain.boundary_rows[static_cast<std::size_t>(i)]) acc[std::min(j, K)] += to_double(p);
        } else {
            for (const auto& [d, p] : chain.interior_increment) acc[std::min(i + d, K)] += to_double(p);
        }
        for (const auto& [j, p] : acc) {
            rows[static_cast<std::size_t>(i)].target.push_back(j);
            rows[static_cast<std::size_t>(i)].prob.push_back(p);
        }
    }
    return rows;
}

}  // namespace

std::vector<double> truncated_matrix(const ProjectionChain& chain, std::int64_t K) {
    const auto n = static_cast<std::size_t>(K + 1);
    std::vector<double> P(n * n, 0.0);
    auto rows = truncated_rows(chain, K);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < rows[i].target.size(); ++k) {
            P[i * n + static_cast<std::size_t>(rows[i].target[k])] += rows[i].prob[k];
        }
    }
    return P;
}

StationaryMeasure truncated_invariant(const ProjectionChain& chain, const TruncationOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
    std::int64_t K = opts.K0 > 0 ? opts.K0 : std::max<std::int64_t>(64, 8 * chain.R);
    if (K < 4 * chain.R) throw DomainError("truncation level must be at least 4R");
    for (const auto& row : chain.boundary_rows) {
        if (row.begin()->first < 0) throw HypothesisError("boundary row jumps below 0");
    }
    if (chain.min_interior_increment() < -chain.R) throw HypothesisError("interior increment below -R");

    // The stopping residual sits well below tol: the error in pi is roughly
    // residual / spectral gap.
    const double target = opts.tol * 1e-3;
    const auto R = static_cast<std::size_t>(chain.R);

    std::vector<double> pi(static_cast<std::size_t>(K + 1), 1.0 / static_cast<double>(K + 1));
    std::vector<double> restriction;
    double change = std::numeric_limits<double>::infinity();

    while (true) {
        const auto rows = truncated_rows(chain, K);
        const auto n = static_cast<std::size_t>(K + 1);
        std::vector<double> next(n);
        double residual = std::numeric_limits<double>::infinity();
        std::int64_t sweep = 0;
        for (; sweep < opts.max_sweeps; ++sweep) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double w = pi[i];
                const auto& row = rows[i];
                for (std::size_t k = 0; k < row.target.size(); ++k) next[static_cast<std::size_t>(row.target[k])] += w * row.prob[k];
            }
            residual = 0.0;
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                residual += std::fabs(next[i] - pi[i]);
                next[i] = 0.5 * (next[i] + pi[i]);
                total += next[i];
            }
            for (std::size_t i = 0; i < n; ++i) pi[i] = next[i] / total;
            if (residual < target) break;
        }
        if (!(residual < target)) {
            throw ConvergenceError("power iteration did not converge at K = " + std::to_string(K), residual);
        }

        const double mass = std::accumulate(pi.begin(), pi.begin() + static_cast<std::ptrdiff_t>(R), 0.0);
        if (!(mass > 0.0)) throw HypothesisError("truncated invariant vector puts no mass on I_R");
        std::vector<double> current(R);
        for (std::size_t i = 0; i < R; ++i) current[i] = pi[i] / mass;

        if (!restriction.empty()) {
            change = 0.0;
            for (std::size_t i = 0; i < R; ++i) change = std::max(change, std::fabs(current[i] - restriction[i]));
            if (change < opts.tol) {
                StationaryMeasure m;
                m.method = StationaryMethod::Truncated;
                m.weights = current;
                m.residual = change;
                m.trunc_level = K;
                m.truncated_vector = pi;
                m.diagnostics.push_back("power-iteration residual " + std::to_string(residual) + " at K = " +
                                        std::to_string(K) + " after " + std::to_string(sweep + 1) + " sweeps");
                require_positive(m.weights);
                return m;
            }
        }
        restriction = std::move(current);

        if (2 * K > opts.max_level) {
            throw ConvergenceError("I_R restriction still moving at truncation level " + std::to_string(K), change);
        }
        // Warm start on {0..2K}: extend flat beyond K, then renormalize.
        const double edge = pi[static_cast<std::size_t>(K - 1)];
        pi[static_cast<std::size_t>(K)] = edge;
        pi.resize(static_cast<std::size_t>(2 * K + 1), edge);
        const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
        for (auto& v : pi) v /= total;
        K *= 2;
    }
}

StationaryMeasure occupation_mc(const ProjectionChain& chain, std::uint64_t steps, std::uint64_t seed) {
    if (steps == 0) throw DomainError("occupation MC needs at least one step");
    const auto R = static_cast<std::size_t>(chain.R);

    std::vector<AliasTable> row_tables;
    std::vector<std::vector<std::int64_t>> row_targets;
    for (const auto& row : chain.boundary_rows) {
        std::vector<double> w;
        std::vector<std::int64_t> t;
        for (const auto& [j, p] : row) {
            t.push_back(j);
            w.push_back(to_double(p));
        }
        row_tables.emplace_back(w);
        row_targets.push_back(std::move(t));
    }
    std::vector<double> iw;
    std::vector<std::int64_t> inc;
    for (const auto& [d, p] : chain.interior_increment) {
        inc.push_back(d);
        iw.push_back(to_double(p));
    }
    const AliasTable interior(iw);

    Rng rng(seed);
    std::vector<std::uint64_t> total(R, 0);
    // Per-cycle visit counts, a cycle starting at each visit to 0.
    std::vector<std::vector<std::uint64_t>> cycles;
    std::vector<std::uint64_t> current(R, 0);
    std::int64_t state = 0;
    for (std::uint64_t t = 0; t < steps; ++t) {
        if (state < chain.R) {
            const auto s = static_cast<std::size_t>(state);
            if (state == 0 && t > 0) {
                cycles.push_back(current);
                std::fill(current.begin(), current.end(), 0);
            }
            ++current[s];
            ++total[s];
            state = row_targets[s][row_tables[s].sample(rng)];
        } else {
            state += inc[interior.sample(rng)];
        }
    }
    cycles.push_back(current);

    const std::uint64_t visits = std::accumulate(total.begin(), total.end(), std::uint64_t{0});
    if (visits == 0) throw ConvergenceError("no visits to I_R", std::numeric_limits<double>::infinity());

    StationaryMeasure m;
    m.method = StationaryMethod::OccupationMC;
    m.sample_count = steps;
    for (std::size_t i = 0; i < R; ++i) m.weights.push_back(static_cast<double>(total[i]) / static_cast<double>(visits));

    const double ncyc = static_cast<double>(cycles.size());
    const double mean_len = static_cast<double>(visits) / ncyc;
    m.std_errors.assign(R, std::numeric_limits<double>::infinity());
    if (cycles.size() >= 2) {
        for (std::size_t i = 0; i < R; ++i) {
            double ss = 0.0;
            for (const auto& c : cycles) {
                const double len = static_cast<double>(std::accumulate(c.begin(), c.end(), std::uint64_t{0}));
                const double d = static_cast<double>(c[i]) - m.weights[i] * len;
                ss += d * d;
            }
            const double var = ss / (ncyc - 1.0);
            m.std_errors[i] = std::sqrt(var / ncyc) / mean_len;
        }
    } else {
        m.diagnostics.push_back("chain never returned to 0; standard errors unavailable");
    }
    m.residual = *std::max_element(m.std_errors.begin(), m.std_errors.end());
    if (static_cast<double>(visits) < 1e-3 * static_cast<double>(steps)) {
        m.diagnostics.push_back("occupation of I_R below 0.1% of steps (" + std::to_string(visits) + " of " +
                                std::to_string(steps) + "); estimate may be unreliable");
    }
    m.diagnostics.push_back(std::to_string(cycles.size()) + " regeneration cycles, " + std::to_string(visits) +
                            " visits to I_R");
    require_positive(m.weights);
    return m;
}

StationaryMeasure stationary_measure(const WalkSpec& spec, int side, const StationaryOptions& opts) {
    const auto chain = projection_chain(spec, side);
    switch (opts.method) {
        case StationaryChoice::Exact: return embedded_exact(chain);
        case StationaryChoice::Truncate: return truncated_invariant(chain, opts.truncation);
        case StationaryChoice::MonteCarlo: return occupation_mc(chain, opts.mc_steps, opts.seed);
        case StationaryChoice::Auto: break;
    }
    if (chain.R == 1) {
        StationaryMeasure m;
        m.method = StationaryMethod::ExactEmbedded;
        fill_weights(m, {Rational(1)});
        return m;
    }
    return chain.left_continuous() ? embedded_exact(chain) : truncated_invariant(chain, opts.truncation);
}

}  // namespace qwalk
