#include "faster/natural_order.hpp"

#include <cctype>

namespace faster {

int natural_compare(std::string_view a, std::string_view b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        unsigned char ca = a[i], cb = b[j];
        if (std::isdigit(ca) && std::isdigit(cb)) {
            // Compare whole digit runs numerically.
            size_t ia = i, jb = j;
            while (ia < a.size() && std::isdigit(static_cast<unsigned char>(a[ia]))) ++ia;
            while (jb < b.size() && std::isdigit(static_cast<unsigned char>(b[jb]))) ++jb;
            std::string_view ra = a.substr(i, ia - i), rb = b.substr(j, jb - j);
            std::string_view ta = ra.substr(std::min(ra.find_first_not_of('0'), ra.size()));
            std::string_view tb = rb.substr(std::min(rb.find_first_not_of('0'), rb.size()));
            if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
            if (int c = ta.compare(tb); c != 0) return c < 0 ? -1 : 1;
            // Equal value: fewer leading zeros first, keeps the order total.
            if (ra.size() != rb.size()) return ra.size() < rb.size() ? -1 : 1;
            i = ia;
            j = jb;
            continue;
        }
        if (ca != cb) return ca < cb ? -1 : 1;
        ++i;
        ++j;
    }
    if (i < a.size()) return 1;
    if (j < b.size()) return -1;
    return 0;
}

} // namespace faster
