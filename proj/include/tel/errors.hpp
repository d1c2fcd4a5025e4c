#pragma once

#include <stdexcept>

namespace tel {

// Thrown when an operation is refused because its cost grows explosively
// (Bell-number enumerations, q^(n^2) group listings, O(p^2) sums).
class SizeGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Size caps are on unless the environment says TEL_SIZE_GUARD=off.
bool size_guard_enabled();

}  // namespace tel
