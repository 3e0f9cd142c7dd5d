#include "comem/csv.hpp"

#include <istream>

#include "comem/errors.hpp"

namespace comem::csv {

std::vector<Record> read(std::istream &in) {
    std::vector<Record> records;
    std::vector<std::string> fields;
    std::string field;
    std::size_t line = 1;
    std::size_t recordStart = 1;
    bool inQuotes = false;
    bool anyData = false; // current record has content (distinguishes a final bare newline)

    auto endField = [&] {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto endRecord = [&] {
        endField();
        records.push_back({std::move(fields), recordStart});
        fields.clear();
        anyData = false;
    };

    char c = 0;
    while (in.get(c)) {
        if (inQuotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    inQuotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            // Only a field-initial quote opens quoting; stray quotes stay literal.
            if (field.empty()) {
                inQuotes = true;
                anyData = true;
            } else {
                field += '"';
            }
            break;
        case ',':
            endField();
            anyData = true;
            break;
        case '\r':
            break; // swallowed; the following '\n' ends the record
        case '\n':
            ++line;
            if (anyData || !field.empty() || !fields.empty()) {
                endRecord();
            }
            recordStart = line;
            break;
        default:
            field += c;
            anyData = true;
            break;
        }
    }
    if (inQuotes) {
        throw DataError("csv: unterminated quoted field starting near line " +
                        std::to_string(recordStart));
    }
    if (anyData || !field.empty() || !fields.empty()) {
        endRecord();
    }
    return records;
}

} // namespace comem::csv
