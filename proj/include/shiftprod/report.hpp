#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "shiftprod/numeric.hpp"

namespace shiftprod {

using Json = nlohmann::ordered_json;

/// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

inline std::string csv_value(const Json& v)
{
    if (v.is_string()) {
        return csv_field(v.get<std::string>());
    }
    if (v.is_structured()) {
        return csv_field(v.dump());
    }
    return v.dump();
}

/// Header line plus one row per object; every object must have the same keys
/// in the same order.
inline std::string to_csv(const std::vector<Json>& rows)
{
    if (rows.empty()) {
        return "";
    }
    std::string out;
    bool first = true;
    for (const auto& item : rows.front().items()) {
        out += (first ? "" : ",") + csv_field(item.key());
        first = false;
    }
    out += "\n";
    for (const auto& row : rows) {
        first = true;
        for (const auto& item : row.items()) {
            out += (first ? "" : ",") + csv_value(item.value());
            first = false;
        }
        out += "\n";
    }
    return out;
}

inline Json rational_json(const Rational& r) { return r.str(); }
inline Rational rational_from_json(const Json& j) { return Rational::parse(j.get<std::string>()); }

inline Rational size_ratio(std::uint64_t num, std::uint64_t den)
{
    if (den == 0) {
        return Rational(0);
    }
    return Rational(mpz_class(static_cast<unsigned long>(num)), mpz_class(static_cast<unsigned long>(den)));
}

}  // namespace shiftprod
