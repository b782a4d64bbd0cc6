#ifndef QEDKIT_TABLES_HPP
#define QEDKIT_TABLES_HPP

// Built-in registry of the reference tables. Each table pins its parameter
// grid in code, computes every deterministic column from the library, and
// carries the published value next to it so that reproduction is a single
// call (and the acceptance suite is one loop).

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qedkit::tables {

struct Cell {
    double computed;
    std::optional<double> published;  // value printed in the source table
    double tolerance = 1e-3;          // |computed - published| gate
};

struct Row {
    std::string label;
    std::vector<Cell> cells;
};

struct Table {
    std::string id;
    std::string title;
    std::vector<std::string> columns;
    std::vector<Row> rows;
    std::vector<std::string> notes;

    // worst |computed - published| over cells carrying a published value,
    // measured in units of each cell's tolerance
    double worst_error_ratio() const;
};

std::vector<std::string> table_ids();
Table build(const std::string& id);

} // namespace qedkit::tables

#endif
