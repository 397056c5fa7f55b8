#pragma once

#include <stdexcept>
#include <string>

namespace virasoro {

// input is structurally fine but outside an operation's mathematical domain
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a module action would step outside the truncation window; never silently zero
struct BoundaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace virasoro
