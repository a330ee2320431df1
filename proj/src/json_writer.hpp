#pragma once

// Compact JSON output with every float written as 17 significant digits;
// non-finite floats become null.

#include "mvlag/numerics.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <ostream>

namespace mvlag::detail {

inline void write_json(const nlohmann::ordered_json& j, std::ostream& out) {
    using json = nlohmann::ordered_json;
    switch (j.type()) {
    case json::value_t::object: {
        out << '{';
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first)
                out << ',';
            first = false;
            out << json(key).dump() << ':';
            write_json(value, out);
        }
        out << '}';
        break;
    }
    case json::value_t::array:
        out << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out << ',';
            write_json(j[i], out);
        }
        out << ']';
        break;
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (std::isfinite(v))
            out << format_double(v);
        else
            out << "null";
        break;
    }
    default:
        out << j.dump();
    }
}

}  // namespace mvlag::detail
