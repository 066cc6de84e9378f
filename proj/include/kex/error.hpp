#pragma once
#include <stdexcept>
#include <string>

namespace kex {

// All module failures are typed so the CLI can map them to exit codes.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: parse failures, schema violations, precondition violations.
struct input_error : error {
    using error::error;
};

// A named relation or exactness check failed on otherwise well-formed data.
struct verification_error : error {
    using error::error;
};

// A correction system has no integer solution; carries the violated
// relation's name. Never a silent wrong invariant.
struct construction_error : error {
    using error::error;
};

// A postcondition the library guarantees was violated; indicates a bug.
struct internal_error : error {
    using error::error;
};

}  // namespace kex
