#pragma once

#include "qwalk/geometry.hpp"
#include "qwalk/model.hpp"

#include <string>

namespace qwalk {

struct IncrementReport {
    bool zero_mean = false;
    std::string mean_exact;
    int R = 0;  // max(-min dx, -min dy, 0)
    Mat2 sigma;
    std::string det_exact;
    bool positive_definite = false;
    double rho = 0.0;
    bool rho_in_range = false;

    [[nodiscard]] bool pass() const { return zero_mean && positive_definite && rho_in_range; }
};

IncrementReport validate_increment_A(const IncrementLaw& zeta);

enum class Fold { Mirror, Lindley };

// Law of w - z where w = |z + zeta| (mirror) or (z + zeta)^+ (Lindley),
// componentwise.
IncrementLaw folded_law(const IncrementLaw& zeta, Point z, Fold fold);

WalkSpec reflected_spec(const IncrementLaw& zeta, Fold fold);
inline WalkSpec mirror_spec(const IncrementLaw& zeta) { return reflected_spec(zeta, Fold::Mirror); }
inline WalkSpec lindley_spec(const IncrementLaw& zeta) { return reflected_spec(zeta, Fold::Lindley); }

// 1 - pi / (2 arccos(-rho)) for rho in (0, 1).
double lindley_exponent(double rho);

}  // namespace qwalk
