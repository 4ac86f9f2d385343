#include "qwalk/walks.hpp"

#include "qwalk/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace qwalk {

IncrementReport validate_increment_A(const IncrementLaw& zeta) {
    IncrementReport r;
    auto [mx, my] = zeta.exact_mean();
    r.zero_mean = mx == 0 && my == 0;
    r.mean_exact = "(" + format_rational(mx) + "," + format_rational(my) + ")";
    r.R = static_cast<int>(std::max<std::int64_t>({-zeta.min_dx(), -zeta.min_dy(), 0}));
    auto m = zeta.exact_second_moment();
    const Rational det = m[0] * m[2] - m[1] * m[1];
    r.det_exact = format_rational(det);
    r.sigma = covariance(zeta);
    r.positive_definite = m[0] > 0 && det > 0;
    if (m[0] > 0 && m[2] > 0) {
        r.rho = r.sigma.a12 / std::sqrt(r.sigma.a11 * r.sigma.a22);
        r.rho_in_range = r.positive_definite && r.rho > -1.0 && r.rho < 1.0;
    }
    return r;
}

IncrementLaw folded_law(const IncrementLaw& zeta, Point z, Fold fold) {
    auto apply = [fold](std::int64_t v) { return fold == Fold::Mirror ? (v < 0 ? -v : v) : std::max<std::int64_t>(v, 0); };
    std::map<std::pair<std::int64_t, std::int64_t>, Rational> acc;
    for (const auto& a : zeta.atoms()) {
        const std::int64_t x = apply(z.x + a.dx);
        const std::int64_t y = apply(z.y + a.dy);
        acc[{x - z.x, y - z.y}] += a.prob;
    }
    std::vector<Atom> atoms;
    for (const auto& [d, p] : acc) atoms.push_back(Atom{d.first, d.second, p});
    return IncrementLaw(std::move(atoms));
}

WalkSpec reflected_spec(const IncrementLaw& zeta, Fold fold) {
    const auto rep = validate_increment_A(zeta);
    if (!rep.zero_mean) throw HypothesisError("increment mean is not zero: " + rep.mean_exact);
    if (!rep.positive_definite) throw HypothesisError("increment covariance is singular: det = " + rep.det_exact);
    const int R = std::max(rep.R, 1);
    std::vector<IncrementLaw> horizontal, vertical, corner;
    for (int i = 0; i < R; ++i) {
        horizontal.push_back(folded_law(zeta, {R, i}, fold));
        vertical.push_back(folded_law(zeta, {i, R}, fold));
    }
    for (int x = 0; x < R; ++x) {
        for (int y = 0; y < R; ++y) corner.push_back(folded_law(zeta, {x, y}, fold));
    }
    return WalkSpec(R, zeta, std::move(horizontal), std::move(vertical), std::move(corner));
}

double lindley_exponent(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("tail exponent formula needs rho in (0, 1)");
    return 1.0 - std::numbers::pi / (2.0 * std::acos(-rho));
}

}  // namespace qwalk
