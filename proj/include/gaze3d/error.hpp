#pragma once

#include <stdexcept>
#include <string>

namespace gaze3d {

// All toolkit failures surface as this one exception type with a
// human-readable message; the CLI maps it to a nonzero exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gaze3d
