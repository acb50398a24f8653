#ifndef ELLPOISSON_REPORT_HPP
#define ELLPOISSON_REPORT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ellpoisson
{

/// Invalid configuration; the CLI maps it to exit code 2.
class usage_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Check {
    std::string name;
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, Cell>> params;
    std::vector<Check> checks;
    std::vector<Table> tables;
    std::vector<std::string> warnings;
    double elapsed_ms = 0;

    // residual <= tolerance
    Check &check_at_most(std::string name, double residual, double tolerance)
    {
        checks.push_back({std::move(name), residual, tolerance, residual <= tolerance});
        return checks.back();
    }
    // residual >= tolerance, for lower bounds such as convergence slopes
    Check &check_at_least(std::string name, double value, double bound)
    {
        checks.push_back({std::move(name), value, bound, value >= bound});
        return checks.back();
    }

    bool passed() const
    {
        for (const auto &c : checks) {
            if (!c.pass) {
                return false;
            }
        }
        return true;
    }
};

} // namespace ellpoisson

#endif
