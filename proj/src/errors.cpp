#include "tel/errors.hpp"

#include <cstdlib>
#include <cstring>

namespace tel {

bool size_guard_enabled() {
    const char* v = std::getenv("TEL_SIZE_GUARD");
    return !(v && std::strcmp(v, "off") == 0);
}

}  // namespace tel
