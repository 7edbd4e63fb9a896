#ifndef QGRAPH_JSON_IO_HPP
#define QGRAPH_JSON_IO_HPP

#include <complex>
#include <string>

#include <json.hpp>

namespace qgraph {

using Json = nlohmann::ordered_json;

/// Deterministic serialization: insertion-ordered keys, doubles with 17
/// significant digits (exact round trip), non-finite doubles as null.
/// Pretty output uses a two-space indent and ends with a newline; compact
/// output is a single line without one.
std::string dump_json(const Json& value, bool pretty = true);

/// %.17g formatting shared by JSON and CSV output.
std::string format_double(double value);

/// {"re": ..., "im": ...}
Json complex_to_json(std::complex<double> z);

}  // namespace qgraph

#endif  // QGRAPH_JSON_IO_HPP
