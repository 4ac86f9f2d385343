#pragma once

#include "qwalk/geometry.hpp"
#include "qwalk/model.hpp"
#include "qwalk/projection.hpp"

#include <string>

namespace qwalk {

enum class Verdict { Recurrent, Transient, Critical };

const char* to_string(Verdict v);

struct ReflectionAngles {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
};

struct ClassificationReport {
    Mat2 sigma;
    double rho = 0.0;
    double s = 0.0;
    Mat2 transform;
    double phi0 = 0.0;
    StationaryMeasure pi1;
    StationaryMeasure pi2;
    Vec2 mu_bar1;
    Vec2 mu_bar2;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double chi = 0.0;
    Verdict verdict = Verdict::Critical;
    double tail_exponent = 0.0;
    std::string moment_note;
};

struct ClassifyOptions {
    double tol_crit = 1e-9;
    StationaryOptions stationary;
};

// Correlation coefficient kappa / sqrt(sigma1^2 sigma2^2).
double correlation(const Mat2& sigma);

// Upper-triangular T with T sigma T^T = I and positive diagonal.
Mat2 transform_matrix(const Mat2& sigma);

// arccos(-rho), the opening angle of the normalized quadrant.
double wedge_angle(const Mat2& sigma);

// Mean increment of boundary law p_side(i; .).
Vec2 boundary_drift(const WalkSpec& spec, int side, int i);

// Drifts averaged against pi over the R boundary rows.
Vec2 effective_drift(const WalkSpec& spec, int side, const StationaryMeasure& pi);
Vec2 effective_drift(const std::vector<Vec2>& drifts, const std::vector<double>& pi);

ReflectionAngles reflection_angles(const Mat2& sigma, Vec2 mu_bar1, Vec2 mu_bar2);

// The same phi1, phi2 measured directly as oriented angles in the normalized
// plane; independent of the closed-form expressions.
ReflectionAngles reflection_angles_geometric(const Mat2& sigma, Vec2 mu_bar1, Vec2 mu_bar2);

double chi(double phi0, double phi1, double phi2);

Verdict verdict_of(double chi, double tol_crit = 1e-9);

ClassificationReport classify(const WalkSpec& spec, const ClassifyOptions& opts = {});

}  // namespace qwalk
