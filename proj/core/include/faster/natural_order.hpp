#pragma once

#include <string_view>

namespace faster {

// Natural (numeric-aware) ordering for identifiers: digit runs compare
// by value, everything else byte-wise. "v3" < "v10", "v2" < "v12".
// Every id ordering in this library (neighbor lists, canonical pairs,
// tie-breaks) uses this comparison so results are independent of file
// row order.
int natural_compare(std::string_view a, std::string_view b);

inline bool natural_less(std::string_view a, std::string_view b) {
    return natural_compare(a, b) < 0;
}

} // namespace faster
