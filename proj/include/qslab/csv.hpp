#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qslab/integrator.hpp"

namespace qslab {

/// Shortest representation that round-trips a double (17 significant digits).
std::string format_g17(double v);

/// Reduced-model trajectory CSV: t, the four mode re/im pairs, A, B, E and
/// R (left blank when the R chart is degenerate).
std::string reduced_csv(const Trajectory& traj);

/// Observable-model trajectory CSV: t, R, A, w, z, P_re, P_im, Q_re, Q_im.
std::string observable_csv(const Trajectory& traj);

/// Generic CSV from a header and column vectors (all the same length).
std::string columns_csv(const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& columns);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;  // nullopt = blank cell
};

CsvTable parse_csv(const std::string& text);

}  // namespace qslab
