#include "stirap/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "stirap/errors.hpp"

namespace stirap {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    if (value == std::floor(value) && std::fabs(value) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", value);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

void Table::set_metadata(std::string key, std::string value) {
    for (auto& kv : metadata_) {
        if (kv.first == key) {
            kv.second = std::move(value);
            return;
        }
    }
    metadata_.emplace_back(std::move(key), std::move(value));
}

void Table::set_columns(std::vector<std::string> names) {
    columns_ = std::move(names);
}

void Table::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) {
        throw std::logic_error("table row width does not match the header");
    }
    rows_.push_back(cells);
}

void Table::add_row(const std::vector<double>& cells) {
    std::vector<std::string> formatted;
    formatted.reserve(cells.size());
    for (double v : cells) formatted.push_back(format_double(v));
    add_row(formatted);
}

void Table::write(std::ostream& os) const {
    for (const auto& [key, value] : metadata_) {
        os << "# " << key << " = " << value << '\n';
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        os << (i ? "\t" : "") << columns_[i];
    }
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "\t" : "") << row[i];
        }
        os << '\n';
    }
}

void Table::write_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path);
    write(os);
    if (!os.flush()) throw ConfigError("failed writing output file: " + path);
}

} // namespace stirap
