#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace comem::csv {

struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0; // 1-based line on which the record starts
};

/// RFC 4180 reader: comma separated, double-quote quoting with "" escapes,
/// quoted fields may span lines. Throws DataError on an unterminated quote.
std::vector<Record> read(std::istream &in);

} // namespace comem::csv
