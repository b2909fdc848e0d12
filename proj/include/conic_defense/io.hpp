#pragma once
/**
 * @file io.hpp
 * @brief Instance files (JSON, 17 significant digits) and small formatting helpers.
 *
 * Document layout:
 *   {"theta": T, "rho": R, "v": V, "r": C, "arrivals": [{"t": t, "alpha": a}, ...]}
 */

#include "conic_defense/errors.hpp"
#include "conic_defense/instances.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace conic_defense {

/// printf-style %.{digits}g.
inline std::string format_number(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

inline std::string write_instance(const InputInstance& instance) {
    auto num = [](double x) { return format_number(x, 17); };
    std::string out = "{\"theta\": " + num(instance.params.theta) + ", \"rho\": " + num(instance.params.rho) +
                      ", \"v\": " + num(instance.params.v) + ", \"r\": " + num(instance.params.r) +
                      ", \"arrivals\": [";
    for (std::size_t i = 0; i < instance.arrivals.size(); ++i) {
        if (i) out += ", ";
        out += "{\"t\": " + num(instance.arrivals[i].time) + ", \"alpha\": " + num(instance.arrivals[i].angle) + "}";
    }
    out += "]}\n";
    return out;
}

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline double number_field(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError("missing field \"" + std::string(key) + "\"" + where, 1, 1);
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ParseError("field \"" + std::string(key) + "\" is not a number" + where, 1, 1);
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError("field \"" + std::string(key) + "\" is not finite" + where, 1, 1);
    return x;
}

}  // namespace detail

/// Parses and validates an instance document.
inline InputInstance read_instance(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        auto [line, col] = detail::line_column(text, byte);
        throw ParseError(std::string("malformed instance document: ") + e.what(), line, col);
    }
    if (!doc.is_object()) throw ParseError("instance document must be a JSON object", 1, 1);
    InputInstance out;
    out.params.theta = detail::number_field(doc, "theta", "");
    out.params.rho = detail::number_field(doc, "rho", "");
    out.params.v = detail::number_field(doc, "v", "");
    out.params.r = detail::number_field(doc, "r", "");
    if (!doc.contains("arrivals") || !doc["arrivals"].is_array()) throw ParseError("missing array \"arrivals\"", 1, 1);
    const auto& arr = doc["arrivals"];
    out.arrivals.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = " in arrival " + std::to_string(i);
        out.arrivals.push_back({detail::number_field(arr[i], "t", where), detail::number_field(arr[i], "alpha", where)});
    }
    validate(out);
    return out;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

inline InputInstance load_instance(const std::string& path) { return read_instance(read_text_file(path)); }

inline void save_instance(const std::string& path, const InputInstance& instance) {
    write_text_file(path, write_instance(validate(instance)));
}

}  // namespace conic_defense
