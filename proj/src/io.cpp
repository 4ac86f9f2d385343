#include "qwalk/io.hpp"

#include "qwalk/error.hpp"

#include <fstream>
#include <sstream>

namespace qwalk {

namespace {

std::int64_t as_int(const json& v, const char* what) {
    if (!v.is_number_integer()) throw SchemaError(std::string(what) + " must be an integer");
    return v.get<std::int64_t>();
}

Rational as_prob(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_float()) return parse_rational(v.dump());
    throw SchemaError("probability must be a string or a number");
}

std::vector<IncrementLaw> law_array(const json& j, const char* key) {
    if (!j.contains(key)) throw SchemaError(std::string("missing \"") + key + "\"");
    const json& arr = j.at(key);
    if (!arr.is_array()) throw SchemaError(std::string("\"") + key + "\" must be an array of laws");
    std::vector<IncrementLaw> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        try {
            out.push_back(law_from_json(arr[i]));
        } catch (const SchemaError& e) {
            throw SchemaError(std::string(key) + "[" + std::to_string(i) + "]: " + e.what());
        }
    }
    return out;
}

}  // namespace

json law_to_json(const IncrementLaw& law) {
    json arr = json::array();
    for (const auto& a : law.atoms()) arr.push_back(json::array({a.dx, a.dy, format_rational(a.prob)}));
    return arr;
}

IncrementLaw law_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("law must be an array of [dx, dy, p] atoms");
    std::vector<Atom> atoms;
    atoms.reserve(j.size());
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 3) throw SchemaError("atom must be [dx, dy, p]");
        atoms.push_back(Atom{as_int(entry[0], "dx"), as_int(entry[1], "dy"), as_prob(entry[2])});
    }
    return IncrementLaw(std::move(atoms));
}

json spec_to_json(const WalkSpec& spec) {
    json j;
    j["R"] = spec.R();
    j["interior"] = law_to_json(spec.interior());
    auto arr = [](const std::vector<IncrementLaw>& laws) {
        json a = json::array();
        for (const auto& l : laws) a.push_back(law_to_json(l));
        return a;
    };
    j["horizontal"] = arr(spec.horizontal());
    j["vertical"] = arr(spec.vertical());
    j["corner"] = arr(spec.corner());
    return j;
}

WalkSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("model must be a JSON object");
    if (!j.contains("R")) throw SchemaError("missing \"R\"");
    const auto R = as_int(j.at("R"), "R");
    if (R < 1 || R > 4096) throw SchemaError("R must lie in [1, 4096]");
    if (!j.contains("interior")) throw SchemaError("missing \"interior\"");
    IncrementLaw interior;
    try {
        interior = law_from_json(j.at("interior"));
    } catch (const SchemaError& e) {
        throw SchemaError(std::string("interior: ") + e.what());
    }
    auto horizontal = law_array(j, "horizontal");
    auto vertical = law_array(j, "vertical");
    const int r = static_cast<int>(R);
    if (horizontal.size() != static_cast<std::size_t>(r) || vertical.size() != static_cast<std::size_t>(r)) {
        throw SchemaError("horizontal and vertical must each hold R = " + std::to_string(r) + " laws");
    }
    std::vector<IncrementLaw> corner = j.contains("corner") ? law_array(j, "corner")
                                                            : default_corner_laws(r, horizontal, vertical);
    return WalkSpec(r, std::move(interior), std::move(horizontal), std::move(vertical), std::move(corner));
}

IncrementLaw increment_from_json(const json& j) {
    if (j.is_object()) {
        if (!j.contains("atoms")) throw SchemaError("increment object needs \"atoms\"");
        return law_from_json(j.at("atoms"));
    }
    return law_from_json(j);
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write " + path.string());
    out << text;
    if (!out) throw SchemaError("write failed for " + path.string());
}

}  // namespace qwalk
