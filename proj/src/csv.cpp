#include "qslab/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "qslab/model_core.hpp"
#include "qslab/observables.hpp"

namespace qslab {

std::string format_g17(double v) {
    char buf[36];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string reduced_csv(const Trajectory& traj) {
    if (traj.dim() != 8) throw std::invalid_argument("reduced_csv: expects 8 components");
    std::ostringstream os;
    os << "t,omega1_re,omega1_im,omega3_re,omega3_im,omega5_re,omega5_im,"
          "omega7_re,omega7_im,A,B,E,R\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << format_g17(traj.times[i]);
        for (double v : traj.states[i]) os << ',' << format_g17(v);
        const ModeState s = ModeState::from_flat(traj.states[i].data());
        const Diagnostics d = diagnostics(s);
        os << ',' << format_g17(d.A) << ',' << format_g17(d.B) << ',' << format_g17(d.E)
           << ',';
        if (d.R) os << format_g17(*d.R);
        os << '\n';
    }
    return os.str();
}

std::string observable_csv(const Trajectory& traj) {
    if (traj.dim() != 8)
        throw std::invalid_argument("observable_csv: expects 8 components");
    std::ostringstream os;
    os << "t,R,A,w,z,P_re,P_im,Q_re,Q_im\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << format_g17(traj.times[i]);
        for (double v : traj.states[i]) os << ',' << format_g17(v);
        os << '\n';
    }
    return os.str();
}

std::string columns_csv(const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("columns_csv: header/column mismatch");
    std::ostringstream os;
    for (std::size_t c = 0; c < header.size(); ++c)
        os << header[c] << (c + 1 < header.size() ? ',' : '\n');
    const std::size_t n = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != n) throw std::invalid_argument("columns_csv: ragged columns");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << format_g17(columns[c][i]) << (c + 1 < columns.size() ? ',' : '\n');
    return os.str();
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (first) {
            table.header = cells;
            first = false;
            continue;
        }
        std::vector<std::optional<double>> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            if (c.empty()) {
                row.push_back(std::nullopt);
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (end == c.c_str()) throw std::invalid_argument("parse_csv: bad cell " + c);
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace qslab
