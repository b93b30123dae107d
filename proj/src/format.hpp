#pragma once

#include <sstream>
#include <string>

namespace cproots::detail {

inline std::string num(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

}  // namespace cproots::detail
