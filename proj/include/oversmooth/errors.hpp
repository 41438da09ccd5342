#pragma once

#include <stdexcept>
#include <string>

namespace oversmooth {

// Error taxonomy mirrored by the CLI exit codes:
//   parameter_error -> 2 (usage), io_error/parse_error -> 3, the rest -> 4.

/// Invalid argument values (model parameters, ranges, bad suite names).
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dimension mismatch between a signal and a graph/operator/weight chain.
class shape_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Filesystem / stream failures.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file content; carries the offending line number when known.
class parse_error : public io_error {
public:
    parse_error(const std::string& path, long line, const std::string& what)
        : io_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
    explicit parse_error(const std::string& what) : io_error(what), line_(-1) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

/// Numerical failures: eigensolver non-convergence, iteration caps.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// All eigenvalues below the zero tolerance (edgeless graph).
class degenerate_spectrum_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

/// Rayleigh quotient of the zero signal.
class undefined_quotient_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

} // namespace oversmooth
