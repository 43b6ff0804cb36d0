#include "chainlab/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chainlab/errors.hpp"

namespace chainlab::table {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& cell) {
    if (cell == "nan") return std::nan("");
    if (cell == "inf") return INFINITY;
    if (cell == "-inf") return -INFINITY;
    double v = 0.0;
    const char* first = cell.data();
    if (!cell.empty() && cell.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        throw DomainError("csv: '" + cell + "' is not a number");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void CsvTable::add(std::vector<double> row) {
    if (row.size() != header.size()) throw DomainError("CsvTable: row length does not match header");
    rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    CsvTable table;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cells = split(line);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw DomainError("csv: row has " + std::to_string(cells.size()) + " cells, header has " +
                              std::to_string(table.header.size()));
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_number(c));
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw DomainError("csv: missing header row");
    return table;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json window_to_json(const LatticeWindow& w) {
    return {{"offset", w.offset()},
            {"values", w.values()},
            {"fill", w.fill() == Fill::zero ? "zero" : "none"}};
}

LatticeWindow window_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DomainError("window json: expected an object");
    for (const auto& [key, _] : j.items()) {
        if (key != "offset" && key != "values" && key != "fill") {
            throw DomainError("window json: unknown key '" + key + "'");
        }
    }
    if (!j.contains("offset") || !j.at("offset").is_number_integer()) {
        throw DomainError("window json: 'offset' must be an integer");
    }
    if (!j.contains("values") || !j.at("values").is_array()) {
        throw DomainError("window json: 'values' must be an array");
    }
    std::vector<double> values;
    for (const auto& v : j.at("values")) {
        if (!v.is_number()) throw DomainError("window json: values must be numbers");
        values.push_back(v.get<double>());
    }
    Fill fill = Fill::zero;
    if (j.contains("fill")) {
        const auto f = j.at("fill").get<std::string>();
        if (f == "none") {
            fill = Fill::none;
        } else if (f != "zero") {
            throw DomainError("window json: fill must be 'zero' or 'none'");
        }
    }
    return {j.at("offset").get<std::int64_t>(), std::move(values), fill};
}

std::string window_to_csv(const LatticeWindow& w) {
    std::string out = "site,value\n";
    for (std::int64_t n = w.first(); n <= w.last(); ++n) {
        out += std::to_string(n);
        out += ',';
        out += format_double(w[n]);
        out += '\n';
    }
    return out;
}

LatticeWindow window_from_csv(const std::string& text, Fill fill) {
    const auto t = parse_csv(text);
    if (t.header.size() != 2 || t.header[0] != "site" || t.header[1] != "value") {
        throw DomainError("window csv: header must be 'site,value'");
    }
    if (t.rows.empty()) throw DomainError("window csv: no rows");
    const auto offset = static_cast<std::int64_t>(t.rows.front()[0]);
    std::vector<double> values;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double site = t.rows[i][0];
        if (site != static_cast<double>(offset + static_cast<std::int64_t>(i))) {
            throw DomainError("window csv: sites must be consecutive integers");
        }
        values.push_back(t.rows[i][1]);
    }
    return {offset, std::move(values), fill};
}

LatticeWindow load_window(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    const auto text = read_file(path);
    if (ext == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw DomainError(path.string() + ": " + e.what());
        }
        return window_from_json(j);
    }
    if (ext == ".csv") return window_from_csv(text);
    throw DomainError(path.string() + ": expected a .json or .csv window file");
}

void save_window(const std::filesystem::path& path, const LatticeWindow& w) {
    const auto ext = path.extension().string();
    if (ext == ".json") {
        write_atomic(path, window_to_json(w).dump(2) + "\n");
    } else if (ext == ".csv") {
        write_atomic(path, window_to_csv(w));
    } else {
        throw DomainError(path.string() + ": expected a .json or .csv window file");
    }
}

}  // namespace chainlab::table
