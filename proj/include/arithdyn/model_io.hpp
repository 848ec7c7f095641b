#ifndef ARITHDYN_MODEL_IO_HPP
#define ARITHDYN_MODEL_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "arithdyn/errors.hpp"
#include "arithdyn/model.hpp"
#include "arithdyn/parser.hpp"

namespace arithdyn {

// Model file schema:
//   {"n": int, "degree": int, "variables": [names], "lift": [polynomial strings]}
inline MapModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("model JSON parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("degree") ||
        !j.contains("variables") || !j.contains("lift"))
        throw validation_error("model JSON needs keys n, degree, variables, lift");
    int n = j["n"].get<int>();
    int degree = j["degree"].get<int>();
    std::vector<std::string> vars = j["variables"].get<std::vector<std::string>>();
    std::vector<std::string> lift_text = j["lift"].get<std::vector<std::string>>();
    if (static_cast<int>(vars.size()) != n + 1)
        throw validation_error("model JSON: expected n+1 variables");
    if (static_cast<int>(lift_text.size()) != n + 1)
        throw validation_error("model JSON: expected n+1 lift entries");
    std::vector<HomogeneousForm> lift;
    for (const auto& s : lift_text) lift.push_back(parse_form(s, vars));
    MapModel m = validate_model(std::move(lift), vars);
    if (m.d != degree)
        throw validation_error("model JSON: declared degree " + std::to_string(degree) +
                               " but lift has degree " + std::to_string(m.d));
    return m;
}

inline MapModel model_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

inline std::string model_to_json(const MapModel& m) {
    nlohmann::ordered_json j;
    j["n"] = m.n;
    j["degree"] = m.d;
    j["variables"] = m.vars;
    std::vector<std::string> lift;
    for (const auto& f : m.lift) lift.push_back(f.str(m.vars));
    j["lift"] = lift;
    return j.dump(2);
}

} // namespace arithdyn

#endif
