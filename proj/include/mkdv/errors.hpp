#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mkdv {

/// Base error carrying a stable machine-readable kind string.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error("invalid_argument", msg) {}
};

struct NonConvergence : Error {
    explicit NonConvergence(const std::string& msg) : Error("non_convergence", msg) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& msg) : Error("out_of_range", msg) {}
};

struct BlowUp : Error {
    explicit BlowUp(const std::string& msg) : Error("blow_up", msg) {}
};

struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& msg) : Error("quadrature_failure", msg) {}
};

struct AmbiguousCalibration : Error {
    explicit AmbiguousCalibration(const std::string& msg) : Error("ambiguous_calibration", msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config", msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("io", msg) {}
};

} // namespace mkdv
