#pragma once

// Plain-text result tables: "# key = value" metadata lines followed by a
// tab-separated header row and data rows. Numbers are written with the
// shortest decimal representation that round-trips to the same double.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace stirap {

std::string format_double(double value);

class Table {
public:
    void set_metadata(std::string key, std::string value);
    void set_columns(std::vector<std::string> names);

    // Cells are formatted on insertion; add_row checks the column count.
    void add_row(const std::vector<std::string>& cells);
    void add_row(const std::vector<double>& cells);

    const std::vector<std::pair<std::string, std::string>>& metadata() const {
        return metadata_;
    }
    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    void write(std::ostream& os) const;
    void write_file(const std::string& path) const;

private:
    std::vector<std::pair<std::string, std::string>> metadata_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace stirap
