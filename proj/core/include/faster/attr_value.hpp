#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

namespace faster {

// Attribute value: absent, text, or a finite 64-bit float. Typing is
// decided per value at load time: anything that parses as a finite
// decimal becomes a number, everything else stays text. Comparisons
// between mismatched types are "unsatisfied", never an error.
class AttrValue {
public:
    AttrValue() = default; // absent

    static AttrValue text(std::string s) {
        AttrValue v;
        v.v_ = std::move(s);
        return v;
    }
    static AttrValue number(double d); // throws Error on non-finite input

    bool is_absent() const { return std::holds_alternative<std::monostate>(v_); }
    bool is_text() const { return std::holds_alternative<std::string>(v_); }
    bool is_number() const { return std::holds_alternative<double>(v_); }

    const std::string& as_text() const { return std::get<std::string>(v_); }
    double as_number() const { return std::get<double>(v_); }

    bool operator==(const AttrValue& o) const { return v_ == o.v_; }
    bool operator!=(const AttrValue& o) const { return !(*this == o); }

    // Total order used only for deterministic tie-breaks (vote/any
    // aggregation): absent < numbers (by value) < text (lexicographic).
    bool canonical_less(const AttrValue& o) const;

    // Display form, also used in reports: numbers via JSON shortest
    // round-trip, text verbatim, absent as "".
    std::string to_display() const;

private:
    std::variant<std::monostate, double, std::string> v_;
};

// Full-string finite-decimal parse; nullopt when `s` is not a number.
std::optional<double> parse_finite_decimal(std::string_view s);

// Load-time typing rule applied to one JSON scalar. Strings that parse
// as finite decimals become numbers; booleans become the text
// "true"/"false"; null becomes absent. Arrays/objects are rejected.
AttrValue attr_from_json(const nlohmann::json& j);
nlohmann::json attr_to_json(const AttrValue& v);

} // namespace faster
