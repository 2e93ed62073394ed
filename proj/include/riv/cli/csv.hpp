#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace riv::cli {

/// Bad flags or configuration (exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed data (exit code 3).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Splits one CSV record on commas; strips a trailing '\r' and surrounding
/// whitespace. Quoting is not supported (numeric data only).
std::vector<std::string> split_record(std::string_view line);

/// Parses a decimal number with '.' separator. nullopt on failure or trailing junk.
std::optional<double> parse_number(std::string_view text);

/// Shortest form is not required; 17 significant digits round-trip any binary64.
std::string format_number(double value);

/// Incremental FNV-1a 64-bit hash used as a data fingerprint.
class Fingerprint {
public:
    void update(std::string_view bytes);
    std::uint64_t value() const { return hash_; }
    std::string hex() const;

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

/// Line-oriented reader: header first, then records.
class CsvReader {
public:
    explicit CsvReader(std::istream& in);

    const std::vector<std::string>& header() const { return header_; }
    /// Index of a header column, or nullopt.
    std::optional<std::size_t> column(std::string_view name) const;
    /// Next non-empty record; false at end of stream. `line` is 1-based in the file.
    bool next(std::vector<std::string>& fields);
    std::size_t line() const { return line_; }
    const Fingerprint& fingerprint() const { return fingerprint_; }

private:
    std::istream& in_;
    std::vector<std::string> header_;
    std::size_t line_ = 0;
    Fingerprint fingerprint_;
};

/// Fully numeric table read from a file.
struct NumericTable {
    std::vector<std::string> header;
    std::vector<double> values;  ///< row-major
    std::size_t rows = 0;
    std::string fingerprint;

    std::size_t columns() const { return header.size(); }
    double at(std::size_t row, std::size_t col) const { return values[row * header.size() + col]; }
    std::size_t require_column(std::string_view name) const;
};

/// Throws DataError naming the row of the first non-numeric or short record.
NumericTable read_numeric_csv(const std::string& path);
NumericTable read_numeric_csv(std::istream& in, const std::string& label);

}  // namespace riv::cli
