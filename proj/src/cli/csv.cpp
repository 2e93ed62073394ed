#include "riv/cli/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>

namespace riv::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<std::string> split_record(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        out.emplace_back(trim(field));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::string format_number(double value) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
    return std::string(buf, static_cast<std::size_t>(len));
}

void Fingerprint::update(std::string_view bytes) {
    for (unsigned char c : bytes) {
        hash_ ^= c;
        hash_ *= 0x100000001b3ULL;
    }
}

std::string Fingerprint::hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
}

CsvReader::CsvReader(std::istream& in) : in_(in) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        fingerprint_.update(line);
        fingerprint_.update("\n");
        if (trim(line).empty()) continue;
        header_ = split_record(line);
        return;
    }
    throw DataError("input has no header row");
}

std::optional<std::size_t> CsvReader::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    return std::nullopt;
}

bool CsvReader::next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        fingerprint_.update(line);
        fingerprint_.update("\n");
        if (trim(line).empty()) continue;
        fields = split_record(line);
        return true;
    }
    return false;
}

std::size_t NumericTable::require_column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ConfigError("column '" + std::string(name) + "' not present in the header");
}

NumericTable read_numeric_csv(std::istream& in, const std::string& label) {
    CsvReader reader(in);
    NumericTable table;
    table.header = reader.header();
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        if (fields.size() != table.header.size()) {
            throw DataError(label + ": row " + std::to_string(table.rows) + " (line " + std::to_string(reader.line()) +
                            ") has " + std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(table.header.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = parse_number(fields[c]);
            if (!v) {
                throw DataError(label + ": row " + std::to_string(table.rows) + " (line " +
                                std::to_string(reader.line()) + ") column '" + table.header[c] +
                                "' is not numeric: '" + fields[c] + "'");
            }
            table.values.push_back(*v);
        }
        ++table.rows;
    }
    table.fingerprint = reader.fingerprint().hex();
    return table;
}

NumericTable read_numeric_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return read_numeric_csv(in, path);
}

}  // namespace riv::cli
