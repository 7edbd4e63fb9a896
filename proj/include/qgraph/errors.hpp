#ifndef QGRAPH_ERRORS_HPP
#define QGRAPH_ERRORS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgraph {

/// Base of every exception the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, invalid graphs, unsupported requests.
class InputError : public Error {
public:
    using Error::Error;
};

/// The computation itself failed (poles, root finding, extrapolation).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Syntax or schema error in a graph document. Syntax errors carry the byte
/// offset reported by the JSON parser.
class ParseError : public InputError {
public:
    explicit ParseError(const std::string& what) : InputError(what) {}
    ParseError(const std::string& what, std::size_t byte_offset)
        : InputError(what + " (at byte " + std::to_string(byte_offset) + ")"), offset_(byte_offset) {}

    std::optional<std::size_t> offset() const noexcept { return offset_; }

private:
    std::optional<std::size_t> offset_;
};

class ValidationError : public InputError {
public:
    explicit ValidationError(std::vector<std::string> diagnostics)
        : InputError(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "invalid graph";
        for (const auto& d : items) out += "; " + d;
        return out;
    }

    std::vector<std::string> diagnostics_;
};

class UnsupportedTopology : public InputError {
public:
    using InputError::InputError;
};

class OutOfRange : public InputError {
public:
    using InputError::InputError;
};

/// k = 0, where the vertex and free-line formulas degenerate.
class SingularWavenumber : public InputError {
public:
    using InputError::InputError;
};

/// Evaluation point sits on (or numerically next to) a spectral pole.
class PoleProximity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// sin(kL) = 0: k is a Dirichlet eigenvalue of the bond.
class ResonantBond : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InsufficientSpectrum : public InputError {
public:
    using InputError::InputError;
};

class RootFindingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace qgraph

#endif  // QGRAPH_ERRORS_HPP
