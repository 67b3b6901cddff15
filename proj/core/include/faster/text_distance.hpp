#pragma once

#include <cstddef>
#include <string_view>

namespace faster {

// Unnormalized, case-sensitive Levenshtein distance.
size_t edit_distance(std::string_view a, std::string_view b);

// Banded variant: true iff edit_distance(a, b) <= limit, without
// filling the full table.
bool edit_within(std::string_view a, std::string_view b, size_t limit);

} // namespace faster
