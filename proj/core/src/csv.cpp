#include "faster/csv.hpp"

#include "faster/errors.hpp"

namespace faster {

CsvReader::CsvReader(std::istream& in, std::string file_for_errors)
    : in_(in), file_(std::move(file_for_errors)) {}

std::optional<std::vector<std::string>> CsvReader::next_record() {
    if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;
    record_line_ = line_;

    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool saw_any = false;

    int ci;
    while ((ci = in_.get()) != std::char_traits<char>::eof()) {
        char c = static_cast<char>(ci);
        saw_any = true;
        if (c == '\n') ++line_;

        if (quoted) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    field.push_back('"');
                    in_.get();
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty())
                throw MalformedRow(file_, record_line_, "quote inside unquoted field");
            quoted = true;
            break;
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            break;
        case '\r':
            if (in_.peek() == '\n') break; // swallowed; '\n' ends the record
            field.push_back(c);
            break;
        case '\n':
            fields.push_back(std::move(field));
            return fields;
        default:
            field.push_back(c);
        }
    }
    if (quoted) throw MalformedRow(file_, record_line_, "unterminated quoted field");
    if (!saw_any) return std::nullopt;
    fields.push_back(std::move(field)); // last record without trailing newline
    return fields;
}

void write_csv_record(std::ostream& out, std::span<const std::string> fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        const std::string& f = fields[i];
        bool needs_quote = f.find_first_of(",\"\n\r") != std::string::npos;
        if (!needs_quote) {
            out << f;
            continue;
        }
        out.put('"');
        for (char c : f) {
            if (c == '"') out.put('"');
            out.put(c);
        }
        out.put('"');
    }
    out.put('\n');
}

} // namespace faster
