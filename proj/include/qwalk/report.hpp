#pragma once

#include "qwalk/classify.hpp"
#include "qwalk/harmonic.hpp"
#include "qwalk/io.hpp"
#include "qwalk/projection.hpp"
#include "qwalk/simulate.hpp"
#include "qwalk/walks.hpp"

#include <string>

namespace qwalk {

// Serialization of module results. Non-finite reals become the strings
// "Infinity", "-Infinity" or "NaN".
json to_json(double v);
json to_json(Vec2 v);
json to_json(const Mat2& m);
json to_json(const ValidationReport& r);
json to_json(const StationaryMeasure& m);
json to_json(const ClassificationReport& r);
json to_json(const SlopeFit& f);
json to_json(const TailEstimate& t);
json to_json(const StabilizationEstimate& s);
json to_json(const ExcursionEstimate& e);
json to_json(const HarmonicParams& p);
json to_json(const DriftEstimate& d);
json to_json(const DriftSweepResult& r);
json to_json(const IncrementReport& r);

// "n,survival,stderr" with a header row; reals printed round-trip exact.
std::string curve_csv(const std::vector<GridPoint>& grid);

struct ParsedCurve {
    std::vector<GridPoint> grid;
    std::uint64_t trials = 0;
};

// Reads a curve CSV. When trials is 0 it is recovered from the standard
// errors, stderr^2 = S(1-S)/trials, as the median over interior points.
ParsedCurve parse_curve_csv(const std::string& text, std::uint64_t trials = 0);

// "key: value" lines for the text output format.
std::string render_text(const json& j);

}  // namespace qwalk
