#include "qwalk/classify.hpp"

#include "qwalk/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qwalk {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Recurrent: return "Recurrent";
        case Verdict::Transient: return "Transient";
        case Verdict::Critical: return "Critical";
    }
    return "?";
}

namespace {

void require_positive_definite(const Mat2& sigma) {
    if (!sigma.finite()) throw HypothesisError("covariance has non-finite entries");
    if (std::fabs(sigma.a12 - sigma.a21) > 1e-12 * (std::fabs(sigma.a12) + 1.0)) {
        throw HypothesisError("covariance is not symmetric");
    }
    const double det = sigma.det();
    if (!(sigma.a11 > 0.0) || !(det > 0.0)) {
        std::ostringstream os;
        os << "covariance is not positive definite (det = " << det << ")";
        throw HypothesisError(os.str());
    }
}

std::string vec_text(Vec2 v) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << v.x << "," << v.y << ")";
    return os.str();
}

}  // namespace

double correlation(const Mat2& sigma) {
    require_positive_definite(sigma);
    return sigma.a12 / std::sqrt(sigma.a11 * sigma.a22);
}

Mat2 transform_matrix(const Mat2& sigma) {
    require_positive_definite(sigma);
    const double s = std::sqrt(sigma.det());
    const double sigma2 = std::sqrt(sigma.a22);
    const double c = 1.0 / (s * sigma2);
    return {c * sigma.a22, -c * sigma.a12, 0.0, c * s};
}

double wedge_angle(const Mat2& sigma) { return std::acos(-correlation(sigma)); }

Vec2 boundary_drift(const WalkSpec& spec, int side, int i) { return interior_mean(spec.boundary_law(side, i)); }

Vec2 effective_drift(const std::vector<Vec2>& drifts, const std::vector<double>& pi) {
    if (drifts.size() != pi.size()) throw DomainError("stationary vector length differs from R");
    double total = 0.0;
    Vec2 out;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (pi[i] < 0.0) throw DomainError("stationary vector has a negative entry");
        total += pi[i];
        out = out + pi[i] * drifts[i];
    }
    if (std::fabs(total - 1.0) > 1e-12) throw DomainError("stationary vector is not normalized");
    return out;
}

Vec2 effective_drift(const WalkSpec& spec, int side, const StationaryMeasure& pi) {
    std::vector<Vec2> drifts;
    for (int i = 0; i < spec.R(); ++i) drifts.push_back(boundary_drift(spec, side, i));
    return effective_drift(drifts, pi.weights);
}

ReflectionAngles reflection_angles(const Mat2& sigma, Vec2 mu_bar1, Vec2 mu_bar2) {
    require_positive_definite(sigma);
    if (!(mu_bar1.norm() > 0.0) || !(mu_bar1.y > 0.0)) {
        throw HypothesisError("effective drift on boundary 1 " + vec_text(mu_bar1) + " does not point into the quadrant");
    }
    if (!(mu_bar2.norm() > 0.0) || !(mu_bar2.x > 0.0)) {
        throw HypothesisError("effective drift on boundary 2 " + vec_text(mu_bar2) + " does not point into the quadrant");
    }
    ReflectionAngles a;
    a.theta1 = std::atan2(-mu_bar1.x, mu_bar1.y) + 0.0;
    a.theta2 = std::atan2(-mu_bar2.y, mu_bar2.x) + 0.0;

    const double s22 = sigma.a22;
    const double kappa = sigma.a12;
    const double s = std::sqrt(sigma.det());
    const double phi0 = std::acos(-kappa / std::sqrt(sigma.a11 * sigma.a22));

    a.phi1 = std::atan((s22 * std::sin(a.theta1) + kappa * std::cos(a.theta1)) / (s * std::cos(a.theta1)));
    const double u = s22 * std::cos(a.theta2) + kappa * std::sin(a.theta2);
    const double v = s * std::sin(a.theta2);
    a.phi2 = std::atan(-(u * std::cos(phi0) - v * std::sin(phi0)) / (u * std::sin(phi0) + v * std::cos(phi0)));
    return a;
}

ReflectionAngles reflection_angles_geometric(const Mat2& sigma, Vec2 mu_bar1, Vec2 mu_bar2) {
    const Mat2 T = transform_matrix(sigma);
    ReflectionAngles a;
    a.theta1 = std::atan2(-mu_bar1.x, mu_bar1.y) + 0.0;
    a.theta2 = std::atan2(-mu_bar2.y, mu_bar2.x) + 0.0;
    const double half_pi = std::numbers::pi / 2.0;
    // Inward normals of the two image edges, rotated from the edge directions.
    const Vec2 n1 = rotate(T * Vec2{1.0, 0.0}, half_pi);
    const Vec2 n2 = rotate(T * Vec2{0.0, 1.0}, -half_pi);
    a.phi1 = oriented_angle(n1, T * mu_bar1);
    a.phi2 = oriented_angle(T * mu_bar2, n2);
    return a;
}

double chi(double phi0, double phi1, double phi2) { return (phi1 + phi2) / phi0; }

Verdict verdict_of(double chi_value, double tol_crit) {
    if (chi_value > tol_crit) return Verdict::Recurrent;
    if (chi_value < -tol_crit) return Verdict::Transient;
    return Verdict::Critical;
}

ClassificationReport classify(const WalkSpec& spec, const ClassifyOptions& opts) {
    auto rep_v = validate(spec);
    if (!rep_v.hypothesis_H) throw HypothesisError("partial homogeneity violated: " + rep_v.offending_atoms.front());
    if (!rep_v.zero_drift_D) throw HypothesisError("interior drift is not zero: " + rep_v.interior_drift_exact);
    if (!rep_v.covariance_Sigma) throw HypothesisError("covariance is singular: det = " + rep_v.det_sigma_exact);

    ClassificationReport r;
    r.sigma = covariance(spec.interior());
    r.rho = correlation(r.sigma);
    r.s = std::sqrt(r.sigma.det());
    r.transform = transform_matrix(r.sigma);
    r.phi0 = wedge_angle(r.sigma);
    r.pi1 = stationary_measure(spec, 1, opts.stationary);
    r.pi2 = stationary_measure(spec, 2, opts.stationary);
    r.mu_bar1 = effective_drift(spec, 1, r.pi1);
    r.mu_bar2 = effective_drift(spec, 2, r.pi2);
    const auto angles = reflection_angles(r.sigma, r.mu_bar1, r.mu_bar2);
    r.theta1 = angles.theta1;
    r.theta2 = angles.theta2;
    r.phi1 = angles.phi1;
    r.phi2 = angles.phi2;
    r.chi = chi(r.phi0, r.phi1, r.phi2);
    r.verdict = verdict_of(r.chi, opts.tol_crit);
    r.tail_exponent = r.chi / 2.0;
    r.moment_note = "finite support: all moments finite (nu = infinity), so the tail exponent is chi/2";
    return r;
}

}  // namespace qwalk
