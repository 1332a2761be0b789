#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace qslab {

enum class ModelKind { Reduced, Observable, Scaled, Spectral };

enum class CsvMode { Standard, LogA, LogB };

/// One deterministic experiment: model, parameters, initial data
/// (explicit or seeded), grid, and requested outputs.
struct Scenario {
    std::string name = "custom";
    ModelKind model = ModelKind::Reduced;

    double nu = 0.01;
    double delta = 1.0;
    double eps = 0.01;
    int eps0 = 1;
    double nu0 = 1.0;
    double alpha = 1.0;
    int K = 6;

    double t_end = 100.0;
    double dt = 0.0;  // 0 selects the model default
    std::size_t stride = 0;  // 0 selects ~2000 output rows

    std::uint64_t seed = 1;
    std::vector<double> init;      // explicit flat components; empty = seeded
    double init_amplitude = 0.0;   // seeded scale; 0 selects 0.5*nu

    std::vector<std::string> outputs;  // "cert:symmetric" | "cert:asymmetric" | "cert:ratio"
    CsvMode csv_mode = CsvMode::Standard;
    bool strict = false;
    std::string out;  // output path; empty = no file written
};

/// exit_code: 0 ok, 2 invalid scenario, 3 blow-up guard, 4 certificate
/// failure under strict.
struct RunResult {
    int exit_code = 0;
    std::string csv;
    std::vector<std::string> report;
    std::string out_path;  // resolved path actually written (if any)
};

RunResult run(const Scenario& sc);

/// Named presets; a preset may expand to several scenarios.
std::vector<Scenario> make_preset(const std::string& name, std::uint64_t seed = 1);
std::vector<std::string> preset_names();

/// key=value configuration lines; '#' starts a comment.
void apply_config(Scenario& sc, std::istream& is);

/// Applies QSLAB_OUT_DIR to relative output paths.
std::string resolve_out_path(const std::string& path);

}  // namespace qslab
