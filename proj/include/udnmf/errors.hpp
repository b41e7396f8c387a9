#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace udnmf {

// Error taxonomy mirrored by the C API status codes.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller-supplied parameter violates a precondition (bad density, alpha <= 2, ...).
class parameter_error : public error {
public:
    explicit parameter_error(const std::string& msg) : error(msg) {}
};

// Input is syntactically valid but outside the function's domain (negative Lambert-W argument, ...).
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// Iterative solver failed to reach tolerance; carries the residual trace for diagnosis.
class convergence_error : public error {
public:
    convergence_error(const std::string& msg, std::vector<double> residuals)
        : error(msg), residual_trace(std::move(residuals)) {}
    std::vector<double> residual_trace;
};

// An estimator was asked to summarize an empty or degenerate sample.
class insufficient_data_error : public error {
public:
    explicit insufficient_data_error(const std::string& msg) : error(msg) {}
};

// Filesystem failures while writing results.
class io_error : public error {
public:
    explicit io_error(const std::string& msg) : error(msg) {}
};

// Config text could not be parsed or is missing required fields.
class parse_error : public error {
public:
    explicit parse_error(const std::string& msg) : error(msg) {}
};

}  // namespace udnmf
