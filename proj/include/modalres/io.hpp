#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "modalres/asymptotics.hpp"
#include "modalres/errors.hpp"
#include "modalres/resolvent_scan.hpp"
#include "modalres/simulate.hpp"
#include "modalres/spectral_model.hpp"
#include "modalres/witness.hpp"

namespace modalres {

using Json = nlohmann::json;

/// Invalid job configuration. `pointer` is the JSON pointer of the offending
/// value; `line` is its 1-based line in the source text, 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(std::string pointer, const std::string& what, int line = 0)
        : Error("config", what), pointer_(std::move(pointer)), line_(line) {}

    const std::string& pointer() const noexcept { return pointer_; }
    int line() const noexcept { return line_; }
    void set_line(int line) noexcept { line_ = line; }

private:
    std::string pointer_;
    int line_;
};

enum class Command { Scan, Classify, Witness, Simulate, Abscissa, Certify };

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

struct FitOptions {
    double decades = 2.0;
    std::vector<double> bound_exponents;
    std::optional<double> lambda0;
    std::vector<double> log_powers;
};

struct WitnessOptions {
    Witness::Construction construction = Witness::Construction::NonAnalytic;
    std::vector<double> omegas;  ///< bare eigenvalues
    std::vector<Index> modes;    ///< indices into the spectrum
};

struct SimulateOptions {
    std::vector<double> times;
    InitialData initial;
    bool sync = false;
    bool per_mode = false;
    std::optional<DecayModel> fit_model;
};

struct JobConfig {
    Command command = Command::Scan;
    double theta = 0.0;
    std::optional<SystemParams> params;      ///< absent only for classify
    std::optional<SpectrumModel> spectrum;   ///< absent only for classify
    ScanConfig scan;
    FitOptions fit;
    WitnessOptions witness;
    SimulateOptions simulate;
    Index abscissa_n_max = 500;
    std::uint64_t seed = 0;
    Json source;  ///< the validated input document, echoed into reports
};

/// Validates a config document. When `expected` is given the document's
/// optional "command" field must agree with it.
JobConfig parse_config(const Json& doc, std::optional<Command> expected = std::nullopt);

/// Reads and validates a config file; ConfigError carries the source line.
JobConfig load_config(const std::filesystem::path& path, std::optional<Command> expected = std::nullopt);

struct RunResult {
    Json report;
    std::vector<std::pair<std::string, std::string>> files;  ///< file name, contents
    std::string console;                                     ///< text for stdout
};

RunResult run(const JobConfig& config);

/// Writes report.json and the CSV files into `out_dir` (created if needed).
void write_outputs(const RunResult& result, const std::filesystem::path& out_dir);

/// Checks the structure of an emitted report and re-validates its inputs.
void validate_report(const Json& report);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

std::string scan_csv(const ResolventScan& scan);
std::string witness_csv(const SystemParams& params, const std::vector<Witness>& rows);
std::string trace_csv(const Trace& trace);

Json to_json(const RegularityClass& rc);
/// Regularity/stability regimes over the theta intervals, as text.
std::string regime_table();

const char* version();

}  // namespace modalres
