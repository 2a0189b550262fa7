#pragma once

#include <stdexcept>
#include <string>

namespace ptsad {

/// Malformed input file (bad row, bad token). Message carries the line number.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Time indices out of order.
class OrderingError : public std::runtime_error {
public:
    explicit OrderingError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite or otherwise unacceptable value.
class ValueError : public std::runtime_error {
public:
    explicit ValueError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Degenerate geometry (coincident points, zero-length segment).
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Violated operation contract (bad parameters, empty inputs).
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace ptsad
