#pragma once

#include <stdexcept>
#include <string>

namespace fcs {

// Configuration problems: bad input files, invalid physical parameters,
// non-unitary scatterer matrices. CLI exit code 1.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Quadrature failed to converge under node doubling. CLI exit code 2.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two independent computation routes disagreed, or a structural identity
// (completeness, positivity, normalization) failed. CLI exit code 3.
struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bunching/anti-bunching bound failed in the regime where it is a
// theorem. Signals an implementation bug, not physics. CLI exit code 4.
struct inequality_violation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct size_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct range_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Physically meaningless request, e.g. a closed channel inside the packet
// support.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input state is (numerically) null, e.g. two fermions injected in the
// same mode.
struct degenerate_input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct unsupported_kind_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace fcs
