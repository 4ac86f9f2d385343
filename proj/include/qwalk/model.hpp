#pragma once

#include "qwalk/geometry.hpp"
#include "qwalk/rational.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

// A state of the walk, or an increment, on the integer lattice.
struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;

    [[nodiscard]] double norm() const { return std::hypot(static_cast<double>(x), static_cast<double>(y)); }
    [[nodiscard]] Vec2 to_vec() const { return {static_cast<double>(x), static_cast<double>(y)}; }

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend auto operator<=>(const Point&, const Point&) = default;
};

std::string to_string(Point p);

struct Atom {
    std::int64_t dx = 0;
    std::int64_t dy = 0;
    Rational prob;

    [[nodiscard]] Point step() const { return {dx, dy}; }

    friend bool operator==(const Atom& a, const Atom& b) { return a.dx == b.dx && a.dy == b.dy && a.prob == b.prob; }
};

// Finite-support probability mass function on Z^2. Atoms are kept sorted by
// (dx, dy); probabilities are strictly positive and sum to exactly one.
class IncrementLaw {
public:
    IncrementLaw() = default;
    explicit IncrementLaw(std::vector<Atom> atoms);

    static IncrementLaw point_mass(Point step);

    [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }
    [[nodiscard]] bool empty() const noexcept { return atoms_.empty(); }

    [[nodiscard]] std::int64_t min_dx() const;
    [[nodiscard]] std::int64_t min_dy() const;

    // Probability of a given increment (zero off the support).
    [[nodiscard]] Rational prob(Point step) const;

    [[nodiscard]] std::pair<Rational, Rational> exact_mean() const;
    // Second-moment entries E[dx^2], E[dx dy], E[dy^2].
    [[nodiscard]] std::array<Rational, 3> exact_second_moment() const;

    friend bool operator==(const IncrementLaw& a, const IncrementLaw& b) { return a.atoms_ == b.atoms_; }

private:
    std::vector<Atom> atoms_;
};

enum class Region { Interior, Horizontal, Vertical, Corner };

const char* to_string(Region region);

// Partially homogeneous walk on Z_+^2 with homogeneity depth R.
//   interior     law in [R,inf)^2
//   horizontal[y] law in [R,inf) x {y}, y < R
//   vertical[x]   law in {x} x [R,inf), x < R
//   corner[x*R+y] law at (x,y), x,y < R
class WalkSpec {
public:
    WalkSpec(int R, IncrementLaw interior, std::vector<IncrementLaw> horizontal,
             std::vector<IncrementLaw> vertical, std::vector<IncrementLaw> corner);

    [[nodiscard]] int R() const noexcept { return R_; }
    [[nodiscard]] const IncrementLaw& interior() const noexcept { return interior_; }
    [[nodiscard]] const std::vector<IncrementLaw>& horizontal() const noexcept { return horizontal_; }
    [[nodiscard]] const std::vector<IncrementLaw>& vertical() const noexcept { return vertical_; }
    [[nodiscard]] const std::vector<IncrementLaw>& corner() const noexcept { return corner_; }
    [[nodiscard]] const IncrementLaw& corner(int x, int y) const { return corner_.at(static_cast<std::size_t>(x * R_ + y)); }

    [[nodiscard]] Region region_of(Point z) const noexcept {
        const bool far_x = z.x >= R_;
        const bool far_y = z.y >= R_;
        if (far_x && far_y) return Region::Interior;
        if (far_x) return Region::Horizontal;
        if (far_y) return Region::Vertical;
        return Region::Corner;
    }

    // The one-step increment law used at state z.
    [[nodiscard]] const IncrementLaw& law_at(Point z) const;

    // Law for boundary k in {1,2} at transverse index i in [0,R).
    [[nodiscard]] const IncrementLaw& boundary_law(int side, int index) const;

    friend bool operator==(const WalkSpec& a, const WalkSpec& b) {
        return a.R_ == b.R_ && a.interior_ == b.interior_ && a.horizontal_ == b.horizontal_ &&
               a.vertical_ == b.vertical_ && a.corner_ == b.corner_;
    }

private:
    int R_;
    IncrementLaw interior_;
    std::vector<IncrementLaw> horizontal_;
    std::vector<IncrementLaw> vertical_;
    std::vector<IncrementLaw> corner_;
};

// Corner law obtained from the nearer boundary law, clipped to Z_+^2 and
// renormalized. Falls back to a point mass toward (R,R) if nothing survives.
IncrementLaw default_corner_law(const WalkSpec& partial, int x, int y);
std::vector<IncrementLaw> default_corner_laws(int R, const std::vector<IncrementLaw>& horizontal,
                                              const std::vector<IncrementLaw>& vertical);

Vec2 interior_mean(const IncrementLaw& law);
// Uncentred second-moment matrix sum_z p(z) z z^T.
Mat2 covariance(const IncrementLaw& law);

enum class IrreducibilityStatus { VerifiedOnTruncation, NotVerified };

struct ValidationReport {
    bool hypothesis_H = true;
    std::vector<std::string> offending_atoms;

    bool zero_drift_D = true;
    Vec2 interior_drift;
    std::string interior_drift_exact;

    bool covariance_Sigma = true;
    double det_sigma = 0.0;
    std::string det_sigma_exact;

    IrreducibilityStatus irreducibility = IrreducibilityStatus::NotVerified;
    int truncation = 0;
    std::string irreducibility_witness;

    // Finite support makes every moment finite.
    double nu_interior = std::numeric_limits<double>::infinity();
    double nu_horizontal = std::numeric_limits<double>::infinity();
    double nu_vertical = std::numeric_limits<double>::infinity();

    bool left_continuous = false;

    // (H), (D) and (Sigma) hold; irreducibility is advisory.
    [[nodiscard]] bool hard_pass() const { return hypothesis_H && zero_drift_D && covariance_Sigma; }
};

bool operator==(const ValidationReport& a, const ValidationReport& b);

// Checks the model hypotheses. Irreducibility is tested by reachability on
// the box [0,trunc]^2 (paths may use [0,2*trunc]^2). trunc <= 0 selects 8R.
ValidationReport validate(const WalkSpec& spec, int trunc = 0);

// Atoms leaving Z_+^2 from some state of their region, formatted as witnesses.
std::vector<std::string> escaping_atoms(const WalkSpec& spec);

// Throws HypothesisError when the walk could leave Z_+^2.
void require_closed(const WalkSpec& spec);

}  // namespace qwalk
