/*
 Copyright 2026 The sidare-control Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "sidare/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "sidare/errors.hpp"

namespace sidare {

namespace {

constexpr const char* kMagic = "# sidare-strategy 1";

// Shortest representation that reads back to the same double.
std::string format_exact(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Row {
    double t;
    double u;
};

double parse_number(const std::string& field, std::size_t line) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "strategy file line " << line << ": '" << field << "' is not a number";
        throw UsageError(msg.str());
    }
    return v;
}

std::vector<Row> read_rows(std::istream& in, const TimeGrid& grid) {
    std::vector<Row> rows;
    std::string text;
    std::size_t line = 0;
    bool header = false;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') {
            text.pop_back();
        }
        if (text.empty() || text[0] == '#') {
            continue;
        }
        if (!header) {
            if (text != "t,u") {
                throw UsageError("strategy file must start with the column header 't,u'");
            }
            header = true;
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
            std::ostringstream msg;
            msg << "strategy file line " << line << ": expected 't,u'";
            throw UsageError(msg.str());
        }
        const Row row{parse_number(text.substr(0, comma), line),
                      parse_number(text.substr(comma + 1), line)};
        if (!rows.empty() && !(row.t > rows.back().t)) {
            std::ostringstream msg;
            msg << "strategy file line " << line << ": times must be strictly increasing";
            throw UsageError(msg.str());
        }
        rows.push_back(row);
    }
    if (rows.empty()) {
        throw UsageError("strategy file has no rows");
    }
    if (std::abs(rows.front().t) > 1e-9) {
        throw UsageError("strategy file must start at t = 0");
    }
    if (std::abs(rows.back().t - grid.horizon()) > 1e-6 * std::max(1.0, grid.horizon())) {
        std::ostringstream msg;
        msg << "strategy file ends at t = " << rows.back().t << " but the horizon is "
            << grid.horizon();
        throw UsageError(msg.str());
    }
    return rows;
}

void write_header(std::ostream& out, const TimeGrid& grid) {
    out << kMagic << '\n'
        << "# horizon " << format_exact(grid.horizon()) << '\n'
        << "# step " << format_exact(grid.step()) << '\n'
        << "t,u\n";
}

}  // namespace

void write_strategy(std::ostream& out, const Strategy& u, const TimeGrid& grid) {
    if (u.size() != grid.nodes()) {
        throw UsageError("strategy does not match the grid");
    }
    write_header(out, grid);
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
        out << format_exact(grid.time(k)) << ',' << format_exact(u.u[k]) << '\n';
    }
}

Strategy read_strategy(std::istream& in, const TimeGrid& grid, double u_max) {
    const std::vector<Row> rows = read_rows(in, grid);
    for (const Row& r : rows) {
        if (!(r.u >= 0.0 && r.u <= u_max)) {
            std::ostringstream msg;
            msg << "strategy value " << r.u << " at t = " << r.t << " is outside [0, " << u_max
                << "]";
            throw DomainError(msg.str());
        }
    }
    Strategy out;
    out.u.resize(grid.nodes());
    std::size_t j = 0;
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
        const double t = grid.time(k);
        while (j + 1 < rows.size() && rows[j + 1].t <= t + 1e-9) {
            ++j;
        }
        out.u[k] = rows[j].u;
    }
    return out;
}

void write_discrete_strategy(std::ostream& out, const DiscreteStrategy& s, const TimeGrid& grid,
                             const PolicyCatalog& catalog) {
    s.validate(grid, catalog);
    write_header(out, grid);
    out << "# levels " << s.used_levels().size() << '\n'
        << "# switches " << s.switch_count() << '\n';
    for (std::size_t j = 0; j < s.levels.size(); ++j) {
        const std::size_t start = j == 0 ? 0 : s.switches[j - 1];
        out << format_exact(grid.time(start)) << ',' << format_exact(catalog.level(s.levels[j]))
            << '\n';
    }
    out << format_exact(grid.horizon()) << ',' << format_exact(catalog.level(s.levels.back()))
        << '\n';
}

DiscreteStrategy read_discrete_strategy(std::istream& in, const TimeGrid& grid,
                                        const PolicyCatalog& catalog) {
    const std::vector<Row> rows = read_rows(in, grid);
    if (rows.size() < 2) {
        throw UsageError("discrete strategy file needs a closing row at the horizon");
    }
    DiscreteStrategy out;
    for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
        if (j > 0) {
            out.switches.push_back(grid.index_of(rows[j].t));
        }
        out.levels.push_back(catalog.index_of(rows[j].u));
    }
    if (catalog.index_of(rows.back().u) != out.levels.back()) {
        throw UsageError("closing row of a discrete strategy must repeat the last level");
    }
    out.validate(grid, catalog);
    return out;
}

std::string format_csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,s,i,d,a,r,e\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const EpidemicState& x = traj.states[k];
        out << format_csv_number(traj.grid.time(k));
        for (double v : {x.s, x.i, x.d, x.a, x.r, x.e}) {
            out << ',' << format_csv_number(v);
        }
        out << '\n';
    }
}

}  // namespace sidare
