#include "qwalk/random.hpp"

#include "qwalk/error.hpp"

#include <cmath>
#include <numeric>

namespace qwalk {

AliasTable::AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0 || n > 0xffffffffULL) throw DomainError("alias table needs between 1 and 2^32-1 weights");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) throw DomainError("alias weights must have positive finite sum");

    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        if (weights[i] < 0.0) throw DomainError("negative alias weight");
        scaled[i] = weights[i] * static_cast<double>(n) / total;
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    threshold_.assign(n, 1ULL << 32);
    alias_.resize(n);
    std::iota(alias_.begin(), alias_.end(), 0U);
    while (!small.empty() && !large.empty()) {
        const auto s = small.back();
        small.pop_back();
        const auto l = large.back();
        threshold_[s] = static_cast<std::uint64_t>(std::llround(scaled[s] * 4294967296.0));
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Leftovers are 1 up to rounding.
}

double AliasTable::probability(std::uint32_t i) const {
    const double n = static_cast<double>(threshold_.size());
    double p = 0.0;
    for (std::size_t c = 0; c < threshold_.size(); ++c) {
        const double keep = static_cast<double>(threshold_[c]) / 4294967296.0;
        if (c == i) p += keep;
        if (alias_[c] == i) p += 1.0 - keep;
    }
    return p / n;
}

}  // namespace qwalk
