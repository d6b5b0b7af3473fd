#pragma once

#include <stdexcept>
#include <string>

namespace dakit {

/// Malformed input: bad shapes, points outside the ball, unparsable files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A checked property (commutativity, row contraction, admissibility) failed.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ill-conditioning or a rank decision that could not be made reliably.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dakit
