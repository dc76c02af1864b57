#include "zmtile/io.hpp"

#include "zmtile/error.hpp"

namespace zmtile {

namespace {

int64_t read_modulus(const Json& j) {
    if (!j.is_object() || !j.contains("M") || !j["M"].is_number_integer()) {
        throw InvalidInput("expected an object with an integer field \"M\"");
    }
    return j["M"].get<int64_t>();
}

Json optional_rational(const std::optional<Rational>& q) { return q ? rational_to_json(*q) : Json(nullptr); }

std::optional<Rational> optional_rational_from(const Json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return rational_from_json(j[key]);
}

}  // namespace

Json rational_to_json(const Rational& q) { return q.fraction_str(); }

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw InvalidInput("expected a rational as \"num/den\" string, got " + j.dump());
}

Json step_to_json(const StepFunction& f) {
    Json coeffs = Json::object();
    const auto& mod = f.modulus();
    for (std::size_t i = 0; i < mod.num_divisors(); ++i) {
        if (!f.coeff_at(i).is_zero()) coeffs[std::to_string(mod.divisor(i))] = rational_to_json(f.coeff_at(i));
    }
    return Json{{"M", mod.M()}, {"coeffs", std::move(coeffs)}};
}

StepFunction step_from_json(const Json& j) {
    const Modulus mod(read_modulus(j));
    if (!j.contains("coeffs") || !j["coeffs"].is_object()) throw InvalidInput("step function needs a \"coeffs\" object");
    std::vector<Rational> coeffs(mod.num_divisors());
    for (const auto& [key, value] : j["coeffs"].items()) {
        int64_t d = 0;
        try {
            std::size_t used = 0;
            d = std::stoll(key, &used);
            if (used != key.size()) throw InvalidInput("");
        } catch (const std::exception&) {
            throw InvalidInput("step class key '" + key + "' is not an integer");
        }
        coeffs[mod.index_of(d)] = rational_from_json(value);
    }
    return StepFunction(mod, std::move(coeffs));
}

Json tileset_to_json(const TileSet& A) {
    return Json{{"M", A.modulus().M()}, {"elements", std::vector<int64_t>(A.elements().begin(), A.elements().end())}};
}

TileSet tileset_from_json(const Json& j) {
    const Modulus mod(read_modulus(j));
    if (!j.contains("elements") || !j["elements"].is_array()) throw InvalidInput("tile set needs an \"elements\" array");
    return TileSet(mod, j["elements"].get<std::vector<int64_t>>());
}

Json classset_to_json(const ClassSet& H) {
    return Json{{"M", H.modulus().M()}, {"members", H.members()}, {"hex", H.to_hex()}};
}

ClassSet classset_from_json(const Json& j) {
    const Modulus mod(read_modulus(j));
    if (j.contains("members")) return ClassSet(mod, j["members"].get<std::vector<int64_t>>());
    if (j.contains("hex")) return ClassSet::parse(mod, j["hex"].get<std::string>());
    throw InvalidInput("class set needs \"members\" or \"hex\"");
}

Json cyclo_to_json(const CycloReport& r) {
    return Json{{"spectrum", r.spectrum},
                {"S_F", r.S_F},
                {"t1", r.t1},
                {"t2", r.t2},
                {"t2_witness", r.t2_witness ? Json(*r.t2_witness) : Json(nullptr)}};
}

Json screen_to_json(const ScreenReport& r) {
    return Json{{"k_H", r.k_H},
                {"delta", rational_to_json(r.delta_used)},
                {"d_delta_plus", optional_rational(r.d_delta_plus)},
                {"d_plus", optional_rational(r.d_plus)},
                {"d_minus", optional_rational(r.d_minus)},
                {"d_plus_solved", r.d_plus_solved},
                {"passes", r.passes}};
}

ScreenReport screen_from_json(const Json& j) {
    ScreenReport r;
    try {
        r.k_H = j.at("k_H").get<int64_t>();
        r.delta_used = rational_from_json(j.at("delta"));
        r.d_delta_plus = optional_rational_from(j, "d_delta_plus");
        r.d_plus = optional_rational_from(j, "d_plus");
        r.d_minus = optional_rational_from(j, "d_minus");
        r.d_plus_solved = j.at("d_plus_solved").get<bool>();
        r.passes = j.at("passes").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed screen report: ") + e.what());
    }
    return r;
}

Json pd_report_to_json(const PdTilingReport& r) {
    const auto& c = r.checks;
    return Json{{"valid", r.valid},
                {"checks",
                 {{"nonnegative", c.nonnegative},
                  {"unit_at_zero", c.unit_at_zero},
                  {"positive_definite", c.positive_definite},
                  {"convolution_one", c.convolution_one},
                  {"weight_product", c.weight_product}}},
                {"t1_f", r.t1_f},
                {"t2_f", r.t2_f},
                {"t1_g", r.t1_g},
                {"t2_g", r.t2_g},
                {"cyclo_f", r.cyclo_f ? cyclo_to_json(*r.cyclo_f) : Json(nullptr)},
                {"cyclo_g", r.cyclo_g ? cyclo_to_json(*r.cyclo_g) : Json(nullptr)}};
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace zmtile
