#include "faster/attr_value.hpp"

#include <charconv>
#include <cmath>

#include "faster/errors.hpp"

namespace faster {

AttrValue AttrValue::number(double d) {
    if (!std::isfinite(d)) throw Error("attribute numbers must be finite");
    AttrValue v;
    v.v_ = d;
    return v;
}

bool AttrValue::canonical_less(const AttrValue& o) const {
    if (v_.index() != o.v_.index()) return v_.index() < o.v_.index();
    if (is_number()) return as_number() < o.as_number();
    if (is_text()) return as_text() < o.as_text();
    return false;
}

std::string AttrValue::to_display() const {
    if (is_absent()) return "";
    if (is_text()) return as_text();
    return attr_to_json(*this).dump();
}

std::optional<double> parse_finite_decimal(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double out = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    if (!std::isfinite(out)) return std::nullopt;
    return out;
}

AttrValue attr_from_json(const nlohmann::json& j) {
    if (j.is_null()) return AttrValue{};
    if (j.is_number()) {
        double d = j.get<double>();
        if (!std::isfinite(d)) throw Error("non-finite number in attributes");
        return AttrValue::number(d);
    }
    if (j.is_boolean()) return AttrValue::text(j.get<bool>() ? "true" : "false");
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (auto d = parse_finite_decimal(s)) return AttrValue::number(*d);
        return AttrValue::text(s);
    }
    throw Error("attribute values must be scalars");
}

nlohmann::json attr_to_json(const AttrValue& v) {
    if (v.is_absent()) return nullptr;
    if (v.is_text()) return v.as_text();
    double d = v.as_number();
    // Integral doubles serialize as JSON integers so files stay tidy.
    if (d == static_cast<double>(static_cast<long long>(d)) &&
        std::abs(d) < 9.0e15) {
        return static_cast<long long>(d);
    }
    return d;
}

} // namespace faster
