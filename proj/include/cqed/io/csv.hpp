#pragma once
// CSV artifacts: '#'-prefixed metadata, one header line, then numeric rows
// at full double precision.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqed::io {

inline std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path), columns_(columns.size()) {
        if (!out_) throw std::runtime_error("cannot open " + path);
        path_ = path;
        header_.clear();
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) header_ += ',';
            header_ += columns[i];
        }
    }

    void metadata(const std::string& key, const std::string& value) {
        if (header_written_)
            throw std::logic_error("metadata must precede the header");
        out_ << "# " << key << " = " << value << "\n";
    }
    void metadata(const std::string& key, double value) {
        metadata(key, format_full(value));
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_)
            throw std::logic_error("row width mismatch in " + path_);
        ensure_header();
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_full(values[i]);
        }
        out_ << "\n";
    }

    void close() {
        ensure_header();
        out_.close();
        if (!out_) throw std::runtime_error("write failed for " + path_);
    }

  private:
    void ensure_header() {
        if (!header_written_) {
            out_ << header_ << "\n";
            header_written_ = true;
        }
    }

    std::ofstream out_;
    std::size_t columns_;
    std::string header_;
    std::string path_;
    bool header_written_ = false;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // row-major
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != table.columns.size())
            throw std::runtime_error("ragged row in " + path);
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw std::runtime_error("missing header in " + path);
    return table;
}

// Two-column numeric text (whitespace or comma separated), '#' comments,
// strictly increasing first column. Used for tabulated spectra.
inline void read_two_column(const std::string& path, std::vector<double>& x,
                            std::vector<double>& y) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    x.clear();
    y.clear();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        for (auto& c : line)
            if (c == ',') c = ' ';
        std::stringstream ss(line);
        double a, b;
        if (!(ss >> a >> b))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected two numeric columns");
        if (!x.empty() && a <= x.back())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": first column must be strictly "
                                     "increasing");
        x.push_back(a);
        y.push_back(b);
    }
    if (x.size() < 2)
        throw std::runtime_error(path + ": need at least two rows");
}

}  // namespace cqed::io
