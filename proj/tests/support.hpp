#pragma once

#include "qwalk/model.hpp"

#include <initializer_list>
#include <string>
#include <tuple>

namespace testing {

using qwalk::Atom;
using qwalk::IncrementLaw;
using qwalk::WalkSpec;

inline IncrementLaw law(std::initializer_list<std::tuple<int, int, const char*>> atoms) {
    std::vector<Atom> out;
    for (const auto& [dx, dy, p] : atoms) out.push_back(Atom{dx, dy, qwalk::parse_rational(p)});
    return IncrementLaw(std::move(out));
}

inline IncrementLaw four_point() { return law({{1, 0, "1/4"}, {-1, 0, "1/4"}, {0, 1, "1/4"}, {0, -1, "1/4"}}); }

inline IncrementLaw eight_point() {
    return law({{1, 0, "1/8"}, {-1, 0, "1/8"}, {0, 1, "1/8"}, {0, -1, "1/8"},
                {1, 1, "1/8"}, {1, -1, "1/8"}, {-1, 1, "1/8"}, {-1, -1, "1/8"}});
}

// Diagonal-step law with correlation rho = 2a - 1 where a = P(dx = dy).
inline IncrementLaw diagonal(const char* same_half, const char* cross_half) {
    return law({{1, 1, same_half}, {-1, -1, same_half}, {1, -1, cross_half}, {-1, 1, cross_half}});
}

// R = 1 walk with the given interior law, boundary laws and default corners.
inline WalkSpec simple_spec(const IncrementLaw& interior, const IncrementLaw& h0, const IncrementLaw& v0) {
    std::vector<IncrementLaw> h{h0}, v{v0};
    auto c = qwalk::default_corner_laws(1, h, v);
    return WalkSpec(1, interior, h, v, c);
}

// Four-point interior with orthogonal boundary pushes.
inline WalkSpec orthogonal_spec() {
    return simple_spec(four_point(), law({{1, 0, "1/3"}, {-1, 0, "1/3"}, {0, 1, "1/3"}}),
                       law({{0, 1, "1/3"}, {0, -1, "1/3"}, {1, 0, "1/3"}}));
}

}  // namespace testing

#include <algorithm>
#include <map>
#include <random>

namespace testing {

// Random law with atoms drawn from the box [lo_x, hi]x[lo_y, hi] and weights
// k/den for small integers k.
inline IncrementLaw random_law(std::mt19937_64& gen, int lo_x, int lo_y, int hi, int max_atoms = 4) {
    std::uniform_int_distribution<int> nx(lo_x, hi), ny(lo_y, hi), natoms(1, max_atoms), weight(1, 5);
    std::map<std::pair<int, int>, int> picks;
    const int n = natoms(gen);
    for (int k = 0; k < n; ++k) picks[{nx(gen), ny(gen)}] += weight(gen);
    int total = 0;
    for (const auto& [_, w] : picks) total += w;
    std::vector<Atom> atoms;
    for (const auto& [z, w] : picks) atoms.push_back(Atom{z.first, z.second, qwalk::Rational(w, total)});
    return IncrementLaw(std::move(atoms));
}

// Symmetric (hence zero-mean) interior law supported in [-m, m]^2 with a
// non-degenerate second moment.
inline IncrementLaw random_symmetric_law(std::mt19937_64& gen, int m) {
    std::uniform_int_distribution<int> coord(-m, m), natoms(2, 4), weight(1, 4);
    while (true) {
        std::map<std::pair<int, int>, int> picks;
        const int n = natoms(gen);
        for (int k = 0; k < n; ++k) {
            int x = coord(gen), y = coord(gen);
            if (x == 0 && y == 0) continue;
            int w = weight(gen);
            picks[{x, y}] += w;
            picks[{-x, -y}] += w;
        }
        if (picks.empty()) continue;
        int total = 0;
        for (const auto& [_, w] : picks) total += w;
        std::vector<Atom> atoms;
        for (const auto& [z, w] : picks) atoms.push_back(Atom{z.first, z.second, qwalk::Rational(w, total)});
        IncrementLaw l(std::move(atoms));
        auto s = l.exact_second_moment();
        if (s[0] * s[2] - s[1] * s[1] > 0) return l;
    }
}

// Random valid spec. Boundary rows always hold an upward atom so the
// projection chains can leave every state of I_R.
inline WalkSpec random_spec(std::mt19937_64& gen, int R, bool left_continuous) {
    const int m = left_continuous ? 1 : R;
    auto interior = random_symmetric_law(gen, m);
    std::vector<IncrementLaw> h, v;
    for (int i = 0; i < R; ++i) {
        // Base law with weight 1/3, plus a step away from the axis and a step
        // straight to the axis, 1/3 each.
        auto add_up = [i](IncrementLaw base, bool horizontal) {
            std::map<std::pair<std::int64_t, std::int64_t>, qwalk::Rational> acc;
            for (const auto& a : base.atoms()) acc[{a.dx, a.dy}] += a.prob / 3;
            if (horizontal) {
                acc[{0, 1}] += qwalk::Rational(1, 3);
                acc[{1, -i}] += qwalk::Rational(1, 3);
            } else {
                acc[{1, 0}] += qwalk::Rational(1, 3);
                acc[{-i, 1}] += qwalk::Rational(1, 3);
            }
            std::vector<Atom> atoms;
            for (const auto& [z, p] : acc) atoms.push_back(Atom{z.first, z.second, p});
            return IncrementLaw(std::move(atoms));
        };
        h.push_back(add_up(random_law(gen, -R, -i, R), true));
        v.push_back(add_up(random_law(gen, -i, -R, R), false));
    }
    auto c = qwalk::default_corner_laws(R, h, v);
    return WalkSpec(R, interior, h, v, c);
}

inline WalkSpec transpose(const WalkSpec& spec) {
    auto flip = [](const IncrementLaw& l) {
        std::vector<Atom> atoms;
        for (const auto& a : l.atoms()) atoms.push_back(Atom{a.dy, a.dx, a.prob});
        return IncrementLaw(std::move(atoms));
    };
    std::vector<IncrementLaw> h, v, c(spec.corner().size());
    for (const auto& l : spec.vertical()) h.push_back(flip(l));
    for (const auto& l : spec.horizontal()) v.push_back(flip(l));
    const int R = spec.R();
    for (int x = 0; x < R; ++x)
        for (int y = 0; y < R; ++y) c[static_cast<std::size_t>(y * R + x)] = flip(spec.corner(x, y));
    return WalkSpec(R, flip(spec.interior()), h, v, c);
}

}  // namespace testing
