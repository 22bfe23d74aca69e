#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace simlr::csv {

// Splits one RFC 4180 record. Quoted fields may contain commas and doubled
// quotes; embedded newlines are not supported.
std::vector<std::string> split_record(std::string_view line);

// Reads all non-empty records. Lines starting with '#' are skipped.
std::vector<std::vector<std::string>> read_records(std::istream& in);

std::string trim(std::string_view s);

// Formats a double so that parsing it back yields the same bits.
std::string format_exact(double value);

}  // namespace simlr::csv
