#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace faster {

// Minimal RFC-4180 reader. Quoted fields may contain commas, escaped
// quotes ("") and embedded newlines; records end on an unquoted '\n'
// (a preceding '\r' is stripped). line() reports the 1-based line the
// current record started on, for error messages.
class CsvReader {
public:
    CsvReader(std::istream& in, std::string file_for_errors);

    // Next record, or nullopt at EOF. Throws MalformedRow on an
    // unterminated quote or stray quote inside an unquoted field.
    std::optional<std::vector<std::string>> next_record();

    size_t record_line() const { return record_line_; }
    const std::string& file() const { return file_; }

private:
    std::istream& in_;
    std::string file_;
    size_t line_ = 1;        // current scan position
    size_t record_line_ = 1; // line the last record started on
};

// Writes one record, quoting fields that contain commas, quotes or
// newlines. Terminates with '\n'.
void write_csv_record(std::ostream& out, std::span<const std::string> fields);

} // namespace faster
