#include "qwalk/model.hpp"

#include "qwalk/error.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace qwalk {

std::string to_string(Point p) {
    std::ostringstream os;
    os << "(" << p.x << "," << p.y << ")";
    return os.str();
}

const char* to_string(Region region) {
    switch (region) {
        case Region::Interior: return "interior";
        case Region::Horizontal: return "boundary1";
        case Region::Vertical: return "boundary2";
        case Region::Corner: return "corner";
    }
    return "?";
}

IncrementLaw::IncrementLaw(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw SchemaError("increment law has no atoms");
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return std::pair(a.dx, a.dy) < std::pair(b.dx, b.dy); });
    Rational total = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (atoms_[i].prob <= 0) {
            throw SchemaError("non-positive probability at atom " + to_string(atoms_[i].step()));
        }
        if (i > 0 && atoms_[i].dx == atoms_[i - 1].dx && atoms_[i].dy == atoms_[i - 1].dy) {
            throw SchemaError("duplicate atom " + to_string(atoms_[i].step()));
        }
        total += atoms_[i].prob;
    }
    if (total != 1) {
        throw SchemaError("probabilities sum to " + format_rational(total) + ", not 1");
    }
}

IncrementLaw IncrementLaw::point_mass(Point step) { return IncrementLaw({Atom{step.x, step.y, Rational(1)}}); }

std::int64_t IncrementLaw::min_dx() const {
    std::int64_t m = atoms_.at(0).dx;
    for (const auto& a : atoms_) m = std::min(m, a.dx);
    return m;
}

std::int64_t IncrementLaw::min_dy() const {
    std::int64_t m = atoms_.at(0).dy;
    for (const auto& a : atoms_) m = std::min(m, a.dy);
    return m;
}

Rational IncrementLaw::prob(Point step) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), step, [](const Atom& a, Point s) {
        return std::pair(a.dx, a.dy) < std::pair(s.x, s.y);
    });
    if (it != atoms_.end() && it->dx == step.x && it->dy == step.y) return it->prob;
    return Rational(0);
}

std::pair<Rational, Rational> IncrementLaw::exact_mean() const {
    Rational mx = 0, my = 0;
    for (const auto& a : atoms_) {
        mx += a.prob * a.dx;
        my += a.prob * a.dy;
    }
    return {mx, my};
}

std::array<Rational, 3> IncrementLaw::exact_second_moment() const {
    Rational xx = 0, xy = 0, yy = 0;
    for (const auto& a : atoms_) {
        xx += a.prob * (a.dx * a.dx);
        xy += a.prob * (a.dx * a.dy);
        yy += a.prob * (a.dy * a.dy);
    }
    return {xx, xy, yy};
}

WalkSpec::WalkSpec(int R, IncrementLaw interior, std::vector<IncrementLaw> horizontal,
                   std::vector<IncrementLaw> vertical, std::vector<IncrementLaw> corner)
    : R_(R),
      interior_(std::move(interior)),
      horizontal_(std::move(horizontal)),
      vertical_(std::move(vertical)),
      corner_(std::move(corner)) {
    if (R_ < 1) throw SchemaError("R must be a positive integer, got " + std::to_string(R_));
    const auto r = static_cast<std::size_t>(R_);
    if (interior_.empty()) throw SchemaError("interior law is empty");
    if (horizontal_.size() != r) {
        throw SchemaError("expected " + std::to_string(r) + " horizontal laws, got " + std::to_string(horizontal_.size()));
    }
    if (vertical_.size() != r) {
        throw SchemaError("expected " + std::to_string(r) + " vertical laws, got " + std::to_string(vertical_.size()));
    }
    if (corner_.size() != r * r) {
        throw SchemaError("expected " + std::to_string(r * r) + " corner laws, got " + std::to_string(corner_.size()));
    }
    auto check = [](const std::vector<IncrementLaw>& laws, const char* name) {
        for (std::size_t i = 0; i < laws.size(); ++i) {
            if (laws[i].empty()) throw SchemaError(std::string(name) + " law " + std::to_string(i) + " is empty");
        }
    };
    check(horizontal_, "horizontal");
    check(vertical_, "vertical");
    check(corner_, "corner");
}

const IncrementLaw& WalkSpec::law_at(Point z) const {
    switch (region_of(z)) {
        case Region::Interior: return interior_;
        case Region::Horizontal: return horizontal_[static_cast<std::size_t>(z.y)];
        case Region::Vertical: return vertical_[static_cast<std::size_t>(z.x)];
        case Region::Corner: return corner(static_cast<int>(z.x), static_cast<int>(z.y));
    }
    return interior_;
}

const IncrementLaw& WalkSpec::boundary_law(int side, int index) const {
    if (index < 0 || index >= R_) throw DomainError("boundary index " + std::to_string(index) + " outside [0,R)");
    if (side == 1) return horizontal_[static_cast<std::size_t>(index)];
    if (side == 2) return vertical_[static_cast<std::size_t>(index)];
    throw DomainError("side must be 1 or 2");
}

namespace {

IncrementLaw clip_to_quadrant(const IncrementLaw& law, std::int64_t x, std::int64_t y) {
    std::vector<Atom> kept;
    Rational mass = 0;
    for (const auto& a : law.atoms()) {
        if (x + a.dx >= 0 && y + a.dy >= 0) {
            kept.push_back(a);
            mass += a.prob;
        }
    }
    if (kept.empty()) return {};
    for (auto& a : kept) a.prob /= mass;
    return IncrementLaw(std::move(kept));
}

}  // namespace

std::vector<IncrementLaw> default_corner_laws(int R, const std::vector<IncrementLaw>& horizontal,
                                              const std::vector<IncrementLaw>& vertical) {
    std::vector<IncrementLaw> out;
    out.reserve(static_cast<std::size_t>(R * R));
    for (int x = 0; x < R; ++x) {
        for (int y = 0; y < R; ++y) {
            // Distance to the horizontal strip is R-x, to the vertical strip R-y.
            const IncrementLaw& source = x >= y ? horizontal.at(static_cast<std::size_t>(y))
                                                : vertical.at(static_cast<std::size_t>(x));
            IncrementLaw clipped = clip_to_quadrant(source, x, y);
            if (clipped.empty()) clipped = IncrementLaw::point_mass({R - x, R - y});
            out.push_back(std::move(clipped));
        }
    }
    return out;
}

IncrementLaw default_corner_law(const WalkSpec& partial, int x, int y) {
    return default_corner_laws(partial.R(), partial.horizontal(), partial.vertical())
        .at(static_cast<std::size_t>(x * partial.R() + y));
}

Vec2 interior_mean(const IncrementLaw& law) {
    auto [mx, my] = law.exact_mean();
    return {to_double(mx), to_double(my)};
}

Mat2 covariance(const IncrementLaw& law) {
    auto m = law.exact_second_moment();
    const double xy = to_double(m[1]);
    return {to_double(m[0]), xy, xy, to_double(m[2])};
}

std::vector<std::string> escaping_atoms(const WalkSpec& spec) {
    const std::int64_t R = spec.R();
    std::vector<std::string> out;
    auto report = [&](const std::string& where, const Atom& a) {
        out.push_back(where + " atom " + to_string(a.step()));
    };
    for (const auto& a : spec.interior().atoms()) {
        if (a.dx < -R || a.dy < -R) report("interior", a);
    }
    for (std::int64_t y = 0; y < R; ++y) {
        for (const auto& a : spec.horizontal()[static_cast<std::size_t>(y)].atoms()) {
            if (a.dx < -R || a.dy < -y) report("horizontal[" + std::to_string(y) + "]", a);
        }
    }
    for (std::int64_t x = 0; x < R; ++x) {
        for (const auto& a : spec.vertical()[static_cast<std::size_t>(x)].atoms()) {
            if (a.dy < -R || a.dx < -x) report("vertical[" + std::to_string(x) + "]", a);
        }
    }
    for (std::int64_t x = 0; x < R; ++x) {
        for (std::int64_t y = 0; y < R; ++y) {
            for (const auto& a : spec.corner(static_cast<int>(x), static_cast<int>(y)).atoms()) {
                if (a.dx < -x || a.dy < -y) report("corner" + to_string({x, y}), a);
            }
        }
    }
    return out;
}

void require_closed(const WalkSpec& spec) {
    auto bad = escaping_atoms(spec);
    if (!bad.empty()) throw HypothesisError("partial homogeneity violated: " + bad.front() + " leaves the quadrant");
}

namespace {

// Strong connectivity of the states of `keep` inside [0,core]^2, using only
// transitions that stay inside `keep` and the box [0,outer]^2.
template <class Keep>
std::string connectivity_witness(const WalkSpec& spec, std::int64_t core, std::int64_t outer, Point root, Keep keep) {
    const std::int64_t side = outer + 1;
    auto index = [side](Point p) { return static_cast<std::size_t>(p.x * side + p.y); };
    auto in_box = [outer](Point p) { return p.x >= 0 && p.y >= 0 && p.x <= outer && p.y <= outer; };
    const std::size_t n = static_cast<std::size_t>(side * side);

    std::vector<std::vector<std::size_t>> forward(n), backward(n);
    for (std::int64_t x = 0; x <= outer; ++x) {
        for (std::int64_t y = 0; y <= outer; ++y) {
            Point z{x, y};
            if (!keep(z)) continue;
            for (const auto& a : spec.law_at(z).atoms()) {
                Point w = z + a.step();
                if (!in_box(w) || !keep(w)) continue;
                forward[index(z)].push_back(index(w));
                backward[index(w)].push_back(index(z));
            }
        }
    }
    auto reach = [&](const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<char> seen(n, 0);
        std::deque<std::size_t> queue{index(root)};
        seen[index(root)] = 1;
        while (!queue.empty()) {
            auto u = queue.front();
            queue.pop_front();
            for (auto v : adj[u]) {
                if (!seen[v]) {
                    seen[v] = 1;
                    queue.push_back(v);
                }
            }
        }
        return seen;
    };
    auto from_root = reach(forward);
    auto to_root = reach(backward);
    for (std::int64_t x = 0; x <= core; ++x) {
        for (std::int64_t y = 0; y <= core; ++y) {
            Point z{x, y};
            if (!keep(z)) continue;
            if (!from_root[index(z)]) return to_string(z) + " not reachable from " + to_string(root);
            if (!to_root[index(z)]) return to_string(root) + " not reachable from " + to_string(z);
        }
    }
    return {};
}

}  // namespace

ValidationReport validate(const WalkSpec& spec, int trunc) {
    ValidationReport rep;
    const int R = spec.R();
    rep.truncation = trunc > 0 ? trunc : 8 * R;

    rep.offending_atoms = escaping_atoms(spec);
    rep.hypothesis_H = rep.offending_atoms.empty();

    auto [mx, my] = spec.interior().exact_mean();
    rep.zero_drift_D = (mx == 0 && my == 0);
    rep.interior_drift = {to_double(mx), to_double(my)};
    rep.interior_drift_exact = "(" + format_rational(mx) + "," + format_rational(my) + ")";

    auto m = spec.interior().exact_second_moment();
    Rational det = m[0] * m[2] - m[1] * m[1];
    rep.covariance_Sigma = det > 0;
    rep.det_sigma = to_double(det);
    rep.det_sigma_exact = format_rational(det);

    rep.left_continuous = spec.interior().min_dx() >= -1 && spec.interior().min_dy() >= -1;

    if (!rep.hypothesis_H) {
        rep.irreducibility = IrreducibilityStatus::NotVerified;
        rep.irreducibility_witness = "skipped: walk leaves the quadrant";
        return rep;
    }
    const std::int64_t core = rep.truncation;
    const std::int64_t outer = 2 * core;
    const Point root{R, R};
    auto w1 = connectivity_witness(spec, core, outer, root, [R](Point z) { return z.x >= R; });
    auto w2 = connectivity_witness(spec, core, outer, root, [R](Point z) { return z.y >= R; });
    if (w1.empty() && w2.empty()) {
        rep.irreducibility = IrreducibilityStatus::VerifiedOnTruncation;
    } else {
        rep.irreducibility = IrreducibilityStatus::NotVerified;
        rep.irreducibility_witness = !w1.empty() ? "avoiding boundary 2 and corner: " + w1
                                                 : "avoiding boundary 1 and corner: " + w2;
    }
    return rep;
}

bool operator==(const ValidationReport& a, const ValidationReport& b) {
    return a.hypothesis_H == b.hypothesis_H && a.offending_atoms == b.offending_atoms &&
           a.zero_drift_D == b.zero_drift_D && a.interior_drift == b.interior_drift &&
           a.interior_drift_exact == b.interior_drift_exact && a.covariance_Sigma == b.covariance_Sigma &&
           a.det_sigma_exact == b.det_sigma_exact && a.irreducibility == b.irreducibility &&
           a.truncation == b.truncation && a.irreducibility_witness == b.irreducibility_witness &&
           a.left_continuous == b.left_continuous;
}

}  // namespace qwalk
