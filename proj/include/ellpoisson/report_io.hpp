#ifndef ELLPOISSON_REPORT_IO_HPP
#define ELLPOISSON_REPORT_IO_HPP

#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "report.hpp"

namespace ellpoisson
{

inline nlohmann::ordered_json cell_to_json(const Cell &c)
{
    return std::visit([](const auto &v) { return nlohmann::ordered_json(v); }, c);
}

inline nlohmann::ordered_json to_json(const Report &r, bool with_timing = true)
{
    nlohmann::ordered_json j;
    j["command"] = r.command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto &[k, v] : r.params) {
        params[k] = cell_to_json(v);
    }
    j["params"] = params;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto &c : r.checks) {
        checks.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    }
    j["checks"] = checks;
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    for (const auto &t : r.tables) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto &row : t.rows) {
            nlohmann::ordered_json o;
            for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
                o[t.columns[i]] = cell_to_json(row[i]);
            }
            rows.push_back(o);
        }
        tables[t.name] = rows;
    }
    j["tables"] = tables;
    if (!r.warnings.empty()) {
        j["warnings"] = r.warnings;
    }
    j["pass"] = r.passed();
    if (with_timing) {
        j["elapsed_ms"] = r.elapsed_ms;
    }
    return j;
}

inline std::string csv_quote(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

inline std::string to_csv(const Report &r)
{
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    os << "command,name,residual,tolerance,pass\n";
    for (const auto &c : r.checks) {
        os << csv_quote(r.command) << ',' << csv_quote(c.name) << ',' << c.residual << ',' << c.tolerance << ','
           << (c.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

} // namespace ellpoisson

#endif
