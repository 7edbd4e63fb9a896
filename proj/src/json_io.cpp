#include "qgraph/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace qgraph {

namespace {

void write(const Json& v, int depth, bool pretty, std::string& out) {
    const auto pad = [&](int d) {
        if (pretty) out.append(static_cast<std::size_t>(2 * d), ' ');
    };
    const char* open_sep = pretty ? "\n" : "";
    const char* item_sep = pretty ? ",\n" : ",";
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += open_sep;
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) out += item_sep;
                first = false;
                pad(depth + 1);
                out += Json(key).dump();
                out += pretty ? ": " : ":";
                write(item, depth + 1, pretty, out);
            }
            out += open_sep;
            pad(depth);
            out += "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            out += open_sep;
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += item_sep;
                first = false;
                pad(depth + 1);
                write(item, depth + 1, pretty, out);
            }
            out += open_sep;
            pad(depth);
            out += "]";
            return;
        }
        case Json::value_t::number_float:
            out += std::isfinite(v.get<double>()) ? format_double(v.get<double>()) : "null";
            return;
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string dump_json(const Json& value, bool pretty) {
    std::string out;
    write(value, 0, pretty, out);
    if (pretty) out += "\n";
    return out;
}

Json complex_to_json(std::complex<double> z) {
    Json j;
    j["re"] = z.real();
    j["im"] = z.imag();
    return j;
}

}  // namespace qgraph
