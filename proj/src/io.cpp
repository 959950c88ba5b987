#include "modalres/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#ifndef MODALRES_VERSION
#define MODALRES_VERSION "0.0.0"
#endif

namespace modalres {

const char* version() { return MODALRES_VERSION; }

std::string to_string(Command c) {
    switch (c) {
        case Command::Scan: return "scan";
        case Command::Classify: return "classify";
        case Command::Witness: return "witness";
        case Command::Simulate: return "simulate";
        case Command::Abscissa: return "abscissa";
        case Command::Certify: return "certify";
    }
    return "scan";
}

std::optional<Command> parse_command(const std::string& name) {
    for (Command c : {Command::Scan, Command::Classify, Command::Witness, Command::Simulate, Command::Abscissa,
                      Command::Certify}) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }

void reject_unknown(const Json& obj, const std::string& ptr, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(ptr.empty() ? "/" : ptr, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.count(key)) throw ConfigError(child(ptr, key), "unknown field '" + key + "'");
    }
}

double get_number(const Json& obj, const std::string& ptr, const char* key) {
    if (!obj.contains(key)) throw ConfigError(child(ptr, key), std::string("missing required field '") + key + "'");
    const Json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(child(ptr, key), std::string("'") + key + "' must be a number");
    return v.get<double>();
}

double get_number_or(const Json& obj, const std::string& ptr, const char* key, double fallback) {
    return obj.contains(key) ? get_number(obj, ptr, key) : fallback;
}

Index get_index_or(const Json& obj, const std::string& ptr, const char* key, Index fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(child(ptr, key), std::string("'") + key + "' must be an integer");
    return v.get<Index>();
}

bool get_bool_or(const Json& obj, const std::string& ptr, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(child(ptr, key), std::string("'") + key + "' must be true or false");
    return v.get<bool>();
}

std::string get_string(const Json& obj, const std::string& ptr, const char* key) {
    if (!obj.contains(key)) throw ConfigError(child(ptr, key), std::string("missing required field '") + key + "'");
    const Json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(child(ptr, key), std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> get_numbers(const Json& obj, const std::string& ptr, const char* key) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const Json& v = obj.at(key);
    if (!v.is_array()) throw ConfigError(child(ptr, key), std::string("'") + key + "' must be an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(child(child(ptr, key), std::to_string(i)), "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

// Runs a constructor and converts its InvalidArgument into a ConfigError at `ptr`.
template <typename F>
auto at_pointer(const std::string& ptr, F&& f) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        throw ConfigError(ptr, e.what());
    }
}

SystemParams parse_params(const Json& doc) {
    const std::string ptr = "/params";
    const Json& p = doc.at("params");
    reject_unknown(p, ptr, {"a", "b", "gamma", "theta", "undamped"});
    const double a = get_number(p, ptr, "a");
    const double b = get_number(p, ptr, "b");
    const double theta = get_number(p, ptr, "theta");
    if (get_bool_or(p, ptr, "undamped", false)) {
        if (p.contains("gamma") && get_number(p, ptr, "gamma") != 0.0) {
            throw ConfigError(child(ptr, "gamma"), "gamma must be omitted or 0 when undamped is true");
        }
        return at_pointer(ptr, [&] { return SystemParams::undamped(a, b, theta); });
    }
    const double gamma = get_number(p, ptr, "gamma");
    return at_pointer(ptr, [&] { return SystemParams::make(a, b, gamma, theta); });
}

SpectrumModel parse_spectrum(const Json& doc) {
    const std::string ptr = "/spectrum";
    const Json& s = doc.at("spectrum");
    if (!s.is_object()) throw ConfigError(ptr, "expected an object");
    const std::string kind = get_string(s, ptr, "kind");
    if (kind == "power-law") {
        reject_unknown(s, ptr, {"kind", "scale", "exponent"});
        const double c = get_number(s, ptr, "scale");
        const double p = get_number(s, ptr, "exponent");
        return at_pointer(ptr, [&] { return SpectrumModel::power_law(c, p); });
    }
    if (kind == "explicit") {
        reject_unknown(s, ptr, {"kind", "values"});
        if (!s.contains("values")) throw ConfigError(child(ptr, "values"), "missing required field 'values'");
        auto values = get_numbers(s, ptr, "values");
        return at_pointer(child(ptr, "values"), [&] { return SpectrumModel::explicit_values(std::move(values)); });
    }
    if (kind == "membrane" || kind == "plate") {
        reject_unknown(s, ptr, {"kind", "length", "count"});
        const double length = get_number(s, ptr, "length");
        const Index count = get_index_or(s, ptr, "count", 0);
        return at_pointer(ptr, [&] {
            return kind == "membrane" ? make_membrane_spectrum(length, count) : make_plate_spectrum(length, count);
        });
    }
    throw ConfigError(child(ptr, "kind"), "kind must be one of power-law, explicit, membrane, plate");
}

ScanConfig parse_scan(const Json& doc) {
    ScanConfig cfg;
    if (!doc.contains("scan")) return cfg;
    const std::string ptr = "/scan";
    const Json& s = doc.at("scan");
    reject_unknown(s, ptr,
                   {"lambda_min", "lambda_max", "points", "window_factor", "baseline_modes", "exhaustive_limit",
                    "guided_samples", "resonance_halo", "resolve_peaks"});
    cfg.lambda_min = get_number_or(s, ptr, "lambda_min", cfg.lambda_min);
    cfg.lambda_max = get_number_or(s, ptr, "lambda_max", cfg.lambda_max);
    cfg.points = static_cast<int>(get_index_or(s, ptr, "points", cfg.points));
    cfg.window_factor = get_number_or(s, ptr, "window_factor", cfg.window_factor);
    cfg.baseline_modes = get_index_or(s, ptr, "baseline_modes", cfg.baseline_modes);
    cfg.exhaustive_limit = get_index_or(s, ptr, "exhaustive_limit", cfg.exhaustive_limit);
    cfg.guided_samples = static_cast<int>(get_index_or(s, ptr, "guided_samples", cfg.guided_samples));
    cfg.resonance_halo = get_index_or(s, ptr, "resonance_halo", cfg.resonance_halo);
    cfg.resolve_peaks = get_bool_or(s, ptr, "resolve_peaks", cfg.resolve_peaks);
    at_pointer(ptr, [&] {
        cfg.validate();
        return 0;
    });
    return cfg;
}

FitOptions parse_fit(const Json& doc) {
    FitOptions fit;
    if (!doc.contains("fit")) return fit;
    const std::string ptr = "/fit";
    const Json& f = doc.at("fit");
    reject_unknown(f, ptr, {"decades", "bound_exponents", "lambda0", "log_powers"});
    fit.decades = get_number_or(f, ptr, "decades", fit.decades);
    if (!(fit.decades > 0.0)) throw ConfigError(child(ptr, "decades"), "decades must be positive");
    fit.bound_exponents = get_numbers(f, ptr, "bound_exponents");
    if (f.contains("lambda0")) {
        fit.lambda0 = get_number(f, ptr, "lambda0");
        if (!(*fit.lambda0 > 1.0)) throw ConfigError(child(ptr, "lambda0"), "lambda0 must exceed 1");
    }
    fit.log_powers = get_numbers(f, ptr, "log_powers");
    return fit;
}

WitnessOptions parse_witness(const Json& doc, const SpectrumModel& spectrum) {
    WitnessOptions w;
    const std::string ptr = "/witness";
    if (!doc.contains("witness")) throw ConfigError(ptr, "missing required section 'witness'");
    const Json& s = doc.at("witness");
    reject_unknown(s, ptr, {"construction", "omegas", "modes"});
    const std::string kind = get_string(s, ptr, "construction");
    if (kind == "nonanalytic") {
        w.construction = Witness::Construction::NonAnalytic;
    } else if (kind == "polyopt") {
        w.construction = Witness::Construction::PolyOpt;
    } else {
        throw ConfigError(child(ptr, "construction"), "construction must be 'nonanalytic' or 'polyopt'");
    }
    w.omegas = get_numbers(s, ptr, "omegas");
    for (std::size_t i = 0; i < w.omegas.size(); ++i) {
        if (!(w.omegas[i] > 0.0)) throw ConfigError(child(child(ptr, "omegas"), std::to_string(i)), "omega must be positive");
    }
    if (s.contains("modes")) {
        const Json& m = s.at("modes");
        if (!m.is_array()) throw ConfigError(child(ptr, "modes"), "'modes' must be an array of integers");
        for (std::size_t i = 0; i < m.size(); ++i) {
            const std::string ip = child(child(ptr, "modes"), std::to_string(i));
            if (!m[i].is_number_integer()) throw ConfigError(ip, "expected an integer");
            const Index n = m[i].get<Index>();
            at_pointer(ip, [&] {
                try {
                    return spectrum.mode_at(n);
                } catch (const IndexError& e) {
                    throw InvalidArgument("modes", e.what());
                }
            });
            w.modes.push_back(n);
        }
    }
    if (w.omegas.empty() && w.modes.empty()) throw ConfigError(ptr, "give at least one entry in 'omegas' or 'modes'");
    return w;
}

Complex parse_complex(const Json& v, const std::string& ptr) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ConfigError(ptr, "expected a number or a [re, im] pair");
}

SimulateOptions parse_simulate(const Json& doc, const SystemParams& params, const SpectrumModel& spectrum,
                               std::uint64_t seed) {
    SimulateOptions sim;
    const std::string ptr = "/simulate";
    if (!doc.contains("simulate")) throw ConfigError(ptr, "missing required section 'simulate'");
    const Json& s = doc.at("simulate");
    reject_unknown(s, ptr, {"times", "t_max", "time_points", "modes", "profile", "initial", "sync", "fit_model", "per_mode"});

    if (s.contains("times")) {
        sim.times = get_numbers(s, ptr, "times");
    } else {
        const double t_max = get_number(s, ptr, "t_max");
        const Index points = get_index_or(s, ptr, "time_points", 64);
        if (!(t_max > 0.0) || points < 2) throw ConfigError(ptr, "need t_max > 0 and time_points >= 2");
        for (Index j = 0; j < points; ++j) sim.times.push_back(t_max * static_cast<double>(j) / static_cast<double>(points - 1));
    }
    if (sim.times.empty() || sim.times.front() != 0.0) throw ConfigError(child(ptr, "times"), "time grid must start at 0");
    for (std::size_t i = 1; i < sim.times.size(); ++i) {
        if (!(sim.times[i] > sim.times[i - 1])) throw ConfigError(child(ptr, "times"), "time grid must be strictly increasing");
    }

    const std::string profile = s.contains("profile") ? get_string(s, ptr, "profile") : "smooth";
    const Index modes = get_index_or(s, ptr, "modes", 16);
    if (profile == "smooth") {
        sim.initial = at_pointer(child(ptr, "modes"), [&] {
            try {
                return smooth_profile(spectrum, modes);
            } catch (const IndexError& e) {
                throw InvalidArgument("modes", e.what());
            }
        });
    } else if (profile == "random") {
        if (modes < 1) throw ConfigError(child(ptr, "modes"), "need at least one mode");
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        for (Index n = 1; n <= modes; ++n) {
            const double omega = at_pointer(child(ptr, "modes"), [&] {
                try {
                    return spectrum.mode_at(n);
                } catch (const IndexError& e) {
                    throw InvalidArgument("modes", e.what());
                }
            });
            // Scaled so every mode carries energy of order 1/omega.
            const double su = 1.0 / (omega * std::sqrt(params.a() * omega));
            const double sw = 1.0 / (omega * std::sqrt(params.b() * omega));
            const double sv = 1.0 / omega;
            ModalState st{omega,
                          Complex(normal(rng), normal(rng)) * su,
                          Complex(normal(rng), normal(rng)) * sv,
                          Complex(normal(rng), normal(rng)) * sw,
                          Complex(normal(rng), normal(rng)) * sv};
            sim.initial.terms.push_back({n, st});
        }
    } else if (profile == "explicit") {
        const std::string ip = child(ptr, "initial");
        if (!s.contains("initial") || !s.at("initial").is_array() || s.at("initial").empty()) {
            throw ConfigError(ip, "explicit profile needs a non-empty 'initial' array");
        }
        const Json& init = s.at("initial");
        for (std::size_t i = 0; i < init.size(); ++i) {
            const std::string ep = child(ip, std::to_string(i));
            reject_unknown(init[i], ep, {"n", "u", "v", "w", "z"});
            const Index n = get_index_or(init[i], ep, "n", 0);
            const double omega = at_pointer(child(ep, "n"), [&] {
                try {
                    return spectrum.mode_at(n);
                } catch (const IndexError& e) {
                    throw InvalidArgument("n", e.what());
                }
            });
            ModalState st{omega};
            if (init[i].contains("u")) st.u = parse_complex(init[i]["u"], child(ep, "u"));
            if (init[i].contains("v")) st.v = parse_complex(init[i]["v"], child(ep, "v"));
            if (init[i].contains("w")) st.w = parse_complex(init[i]["w"], child(ep, "w"));
            if (init[i].contains("z")) st.z = parse_complex(init[i]["z"], child(ep, "z"));
            sim.initial.terms.push_back({n, st});
        }
    } else {
        throw ConfigError(child(ptr, "profile"), "profile must be 'smooth', 'random' or 'explicit'");
    }

    sim.sync = get_bool_or(s, ptr, "sync", false);
    if (sim.sync && params.a() != params.b()) throw ConfigError(child(ptr, "sync"), "sync check requires a == b");
    sim.per_mode = get_bool_or(s, ptr, "per_mode", false);
    if (s.contains("fit_model")) {
        const std::string m = get_string(s, ptr, "fit_model");
        if (m == "exponential") {
            sim.fit_model = DecayModel::Exponential;
        } else if (m == "polynomial") {
            sim.fit_model = DecayModel::Polynomial;
        } else if (m != "none") {
            throw ConfigError(child(ptr, "fit_model"), "fit_model must be exponential, polynomial or none");
        }
    }
    return sim;
}

// Best-effort source line of a JSON pointer: follows the path components
// through the text, each searched after the previous match.
int locate_line(const std::string& text, const std::string& pointer) {
    std::size_t pos = 0;
    bool found = false;
    std::size_t start = 1;
    while (start <= pointer.size() && !pointer.empty()) {
        const std::size_t end = pointer.find('/', start);
        const std::string key = pointer.substr(start, end == std::string::npos ? std::string::npos : end - start);
        const bool is_index = !key.empty() && key.find_first_not_of("0123456789") == std::string::npos;
        if (!key.empty() && !is_index) {
            const std::size_t hit = text.find("\"" + key + "\"", pos);
            if (hit == std::string::npos) break;
            pos = hit;
            found = true;
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    if (!found) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

}  // namespace

JobConfig parse_config(const Json& doc, std::optional<Command> expected) {
    reject_unknown(doc, "", {"command", "params", "spectrum", "scan", "fit", "witness", "simulate", "abscissa", "seed"});
    JobConfig cfg;
    cfg.source = doc;

    std::optional<Command> named;
    if (doc.contains("command")) {
        named = parse_command(get_string(doc, "", "command"));
        if (!named) throw ConfigError("/command", "unknown command '" + doc.at("command").get<std::string>() + "'");
    }
    if (expected && named && *expected != *named) {
        throw ConfigError("/command", "config is for '" + to_string(*named) + "' but '" + to_string(*expected) + "' was requested");
    }
    if (!expected && !named) throw ConfigError("/command", "no command given");
    cfg.command = expected ? *expected : *named;

    if (doc.contains("seed")) {
        const Json& seed = doc.at("seed");
        if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
            throw ConfigError("/seed", "seed must be a non-negative integer");
        }
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }

    if (!doc.contains("params")) throw ConfigError("/params", "missing required section 'params'");
    if (cfg.command == Command::Classify) {
        const Json& p = doc.at("params");
        reject_unknown(p, "/params", {"a", "b", "gamma", "theta", "undamped"});
        cfg.theta = get_number(p, "/params", "theta");
        if (!(cfg.theta >= -1.0 && cfg.theta <= 1.0)) throw ConfigError("/params/theta", "theta must lie in [-1, 1]");
        if (p.contains("a") || p.contains("b") || p.contains("gamma")) cfg.params = parse_params(doc);
        if (doc.contains("spectrum")) cfg.spectrum = parse_spectrum(doc);
        return cfg;
    }

    cfg.params = parse_params(doc);
    cfg.theta = cfg.params->theta();
    if (!doc.contains("spectrum")) throw ConfigError("/spectrum", "missing required section 'spectrum'");
    cfg.spectrum = parse_spectrum(doc);
    cfg.scan = parse_scan(doc);
    cfg.fit = parse_fit(doc);

    const bool needs_damping = cfg.command == Command::Scan || cfg.command == Command::Witness ||
                               cfg.command == Command::Certify;
    if (needs_damping && cfg.params->is_undamped()) {
        throw ConfigError("/params/undamped", "'" + to_string(cfg.command) + "' requires positive damping");
    }

    switch (cfg.command) {
        case Command::Witness:
        case Command::Certify:
            cfg.witness = parse_witness(doc, *cfg.spectrum);
            if (cfg.params->beta_half() == 0.0) throw ConfigError("/params/b", "witness constructions require a != b");
            break;
        case Command::Simulate:
            cfg.simulate = parse_simulate(doc, *cfg.params, *cfg.spectrum, cfg.seed);
            break;
        case Command::Abscissa:
            if (doc.contains("abscissa")) {
                reject_unknown(doc.at("abscissa"), "/abscissa", {"n_max"});
                cfg.abscissa_n_max = get_index_or(doc.at("abscissa"), "/abscissa", "n_max", cfg.abscissa_n_max);
            }
            if (cfg.abscissa_n_max < 1) throw ConfigError("/abscissa/n_max", "n_max must be >= 1");
            break;
        default:
            break;
    }
    return cfg;
}

JobConfig load_config(const std::filesystem::path& path, std::optional<Command> expected) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto byte = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
        throw ConfigError("", std::string("JSON syntax error: ") + e.what(), line);
    }
    try {
        return parse_config(doc, expected);
    } catch (ConfigError& e) {
        e.set_line(locate_line(text, e.pointer()));
        throw;
    }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string scan_csv(const ResolventScan& scan) {
    std::string out = "lambda,norm,mode_index,omega,modes_examined\n";
    for (const auto& s : scan.samples) {
        out += format_double(s.lambda) + "," + format_double(s.norm) + "," + std::to_string(s.mode_index) + "," +
               format_double(s.omega) + "," + std::to_string(s.modes_examined) + "\n";
    }
    return out;
}

std::string witness_csv(const SystemParams& params, const std::vector<Witness>& rows) {
    std::string out = "n,omega,lambda,residual,lower_bound,hnorm_error\n";
    for (const auto& w : rows) {
        out += std::to_string(w.n) + "," + format_double(w.omega) + "," + format_double(w.lambda) + "," +
               format_double(w.residual) + "," + format_double(w.lower_bound) + "," +
               format_double(w.hnorm_error(params)) + "\n";
    }
    return out;
}

std::string trace_csv(const Trace& trace) {
    std::string out = "t,total_norm";
    if (trace.q_norm) out += ",q_norm";
    for (std::size_t k = 0; k < trace.mode_norms.size(); ++k) out += ",mode_" + std::to_string(k + 1) + "_norm";
    out += "\n";
    for (std::size_t j = 0; j < trace.times.size(); ++j) {
        out += format_double(trace.times[j]) + "," + format_double(trace.total_norm[j]);
        if (trace.q_norm) out += "," + format_double((*trace.q_norm)[j]);
        for (const auto& mode : trace.mode_norms) out += "," + format_double(mode[j]);
        out += "\n";
    }
    return out;
}

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// JSON has no infinities; they are written as strings.
Json num(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

Json fit_json(const ExponentFit& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"lambda_lo", f.lambda_lo},
            {"lambda_hi", f.lambda_hi}, {"residual", f.residual}, {"points", f.points}};
}

Json run_scan(const JobConfig& cfg, RunResult& out) {
    const ResolventScan sc = scan(*cfg.params, *cfg.spectrum, cfg.scan);
    out.files.emplace_back("scan.csv", scan_csv(sc));
    const BoundCheck peak = check_bound(sc, 0.0);
    Json res = {{"points", sc.samples.size()},
                {"truncated_spectrum", sc.truncated_spectrum},
                {"max_norm", peak.sup},
                {"argmax_lambda", peak.arg_lambda},
                {"classification", to_json(classify(cfg.params->theta()))}};
    try {
        res["fit"] = fit_json(fit_exponent(sc, cfg.fit.decades));
    } catch (const InvalidArgument& e) {
        res["fit"] = nullptr;
        res["fit_note"] = e.what();
    }
    Json bounds = Json::array();
    for (const double s : cfg.fit.bound_exponents) {
        const BoundCheck b = check_bound(sc, s);
        bounds.push_back({{"s", s}, {"sup", b.sup}, {"arg_lambda", b.arg_lambda}});
    }
    res["bounds"] = bounds;
    if (cfg.fit.lambda0) {
        const DifferentiabilityEstimate d = estimate_K0(sc, *cfg.fit.lambda0, cfg.fit.log_powers);
        Json lp = Json::array();
        for (const auto& c : d.log_power_checks) lp.push_back({{"r", c.r}, {"sup", c.sup}, {"arg_lambda", c.arg_lambda}});
        res["differentiability"] = {{"K0_estimate", d.K0_estimate}, {"lambda0", d.lambda0},
                                    {"arg_lambda", d.arg_lambda}, {"log_power_checks", lp}};
    }
    return res;
}

std::vector<Witness> build_witnesses(const JobConfig& cfg) {
    std::vector<Witness> rows;
    const auto kind = cfg.witness.construction;
    for (const double omega : cfg.witness.omegas) {
        rows.push_back(kind == Witness::Construction::NonAnalytic ? witness_nonanalytic(*cfg.params, omega)
                                                                  : witness_polyopt(*cfg.params, omega));
    }
    for (const Index n : cfg.witness.modes) rows.push_back(witness_for_mode(*cfg.params, *cfg.spectrum, n, kind));
    return rows;
}

Json witness_summary(const JobConfig& cfg, const std::vector<Witness>& rows) {
    double max_hnorm_error = 0.0, max_residual_gap = 0.0;
    bool outside = false;
    for (const auto& w : rows) {
        max_hnorm_error = std::max(max_hnorm_error, w.hnorm_error(*cfg.params));
        max_residual_gap = std::max(max_residual_gap, std::abs(w.residual - w.residual_direct) / w.residual);
        outside = outside || w.outside_theorem_range;
    }
    return {{"construction", cfg.witness.construction == Witness::Construction::NonAnalytic ? "nonanalytic" : "polyopt"},
            {"rows", rows.size()},
            {"max_hnorm_error", max_hnorm_error},
            {"max_residual_relative_gap", max_residual_gap},
            {"outside_theorem_range", outside}};
}

Json run_witness(const JobConfig& cfg, RunResult& out) {
    const auto rows = build_witnesses(cfg);
    out.files.emplace_back("witness.csv", witness_csv(*cfg.params, rows));
    return witness_summary(cfg, rows);
}

Json run_certify(const JobConfig& cfg, RunResult& out) {
    const auto rows = build_witnesses(cfg);
    std::string csv = "n,omega,lambda,lower_bound,modal_norm,global_norm\n";
    for (const auto& w : rows) {
        // Rows built from a bare omega need not be a mode of the spectrum, so
        // only the modal check applies to them.
        const double bound = w.n > 0 ? certify_lower_bound(*cfg.params, w, *cfg.spectrum, cfg.scan)
                                     : certify_lower_bound(*cfg.params, w);
        const double modal = modal_resolvent_norm(*cfg.params, w.omega, w.lambda);
        const double global =
            w.n > 0 ? global_resolvent_norm(*cfg.params, *cfg.spectrum, w.lambda, cfg.scan).norm : std::nan("");
        csv += std::to_string(w.n) + "," + format_double(w.omega) + "," + format_double(w.lambda) + "," +
               format_double(bound) + "," + format_double(modal) + "," + format_double(global) + "\n";
    }
    out.files.emplace_back("witness.csv", witness_csv(*cfg.params, rows));
    out.files.emplace_back("certify.csv", csv);
    Json res = witness_summary(cfg, rows);
    res["certified"] = true;
    return res;
}

Json run_simulate(const JobConfig& cfg, RunResult& out) {
    const auto& sim = cfg.simulate;
    Trace tr = sim.sync ? sync_check(*cfg.params, sim.initial, sim.times)
                        : evolve(*cfg.params, sim.initial, sim.times, sim.per_mode);
    if (sim.sync && sim.per_mode) tr.mode_norms = evolve(*cfg.params, sim.initial, sim.times, true).mode_norms;
    out.files.emplace_back("trace.csv", trace_csv(tr));
    Json res = {{"modes", sim.initial.terms.size()},
                {"time_points", tr.times.size()},
                {"initial_norm", tr.total_norm.front()},
                {"final_norm", tr.total_norm.back()},
                {"graph_norm", tr.graph_norm}};
    if (tr.q_norm) {
        double dev = 0.0;
        for (const double q : *tr.q_norm) dev = std::max(dev, std::abs(q - tr.q_norm->front()));
        res["q_norm_initial"] = tr.q_norm->front();
        res["q_norm_max_deviation"] = dev;
        res["p_norm_initial"] = tr.p_norm->front();
        res["p_norm_final"] = tr.p_norm->back();
    }
    if (sim.fit_model) {
        const DecayFit f = fit_decay(tr, *sim.fit_model);
        res["decay_fit"] = {{"model", *sim.fit_model == DecayModel::Exponential ? "exponential" : "polynomial"},
                            {"rate", f.rate},
                            {"residual", f.residual}};
    }
    return res;
}

}  // namespace

Json to_json(const RegularityClass& rc) {
    return {{"theta", rc.theta},
            {"analytic", to_string(rc.analytic)},
            {"differentiable", to_string(rc.differentiable)},
            {"gevrey_s", opt(rc.gevrey_s)},
            {"gevrey_delta_threshold", opt(rc.gevrey_delta_threshold)},
            {"stability", to_string(rc.stability)},
            {"poly_rate", opt(rc.poly_rate)},
            {"nonanalytic_threshold", opt(rc.nonanalytic_threshold)},
            {"optimal_lower_exponent", opt(rc.optimal_lower_exponent)}};
}

std::string regime_table() {
    struct Row {
        const char* interval;
        double sample;
    };
    const Row rows[] = {{"[-1, 0)", -0.5},  {"0", 0.0},          {"(0, 1/4]", 0.2}, {"(1/4, 1/2)", 0.4},
                        {"1/2", 0.5},       {"(1/2, 1)", 0.75},  {"1", 1.0}};
    std::ostringstream os;
    os << "theta        analytic      differentiable  gevrey s            stability\n";
    os << "-----------  ------------  --------------  ------------------  ------------------------\n";
    for (const auto& r : rows) {
        const RegularityClass rc = classify(r.sample);
        std::string gev = "-";
        if (rc.gevrey_s) gev = std::string(r.sample <= 0.25 ? "2 theta" : "3 theta/(1+2 theta)");
        std::string stab = to_string(rc.stability);
        if (rc.poly_rate) stab += ", rate -1/(2 theta)";
        char line[160];
        std::snprintf(line, sizeof(line), "%-11s  %-12s  %-14s  %-18s  %s\n", r.interval, to_string(rc.analytic).c_str(),
                      to_string(rc.differentiable).c_str(), gev.c_str(), stab.c_str());
        os << line;
    }
    return os.str();
}

RunResult run(const JobConfig& cfg) {
    RunResult out;
    Json results;
    switch (cfg.command) {
        case Command::Classify: {
            const RegularityClass rc = classify(cfg.theta);
            results = to_json(rc);
            std::ostringstream os;
            os << regime_table() << "\n" << "theta = " << format_double(cfg.theta) << ": analytic "
               << to_string(rc.analytic) << ", differentiable " << to_string(rc.differentiable) << ", "
               << to_string(rc.stability) << " stability";
            if (rc.gevrey_s) os << ", Gevrey s = " << format_double(*rc.gevrey_s);
            os << "\n";
            out.console = os.str();
            break;
        }
        case Command::Scan: results = run_scan(cfg, out); break;
        case Command::Witness: results = run_witness(cfg, out); break;
        case Command::Certify: results = run_certify(cfg, out); break;
        case Command::Simulate: results = run_simulate(cfg, out); break;
        case Command::Abscissa: {
            const Abscissa ab = spectral_abscissa(*cfg.params, *cfg.spectrum, cfg.abscissa_n_max);
            results = {{"value", num(ab.value)}, {"mode_index", ab.mode_index}, {"n_max", cfg.abscissa_n_max}};
            break;
        }
    }
    Json files = Json::array();
    for (const auto& f : out.files) files.push_back(f.first);
    out.report = {{"tool", "modalres"},
                  {"version", version()},
                  {"command", to_string(cfg.command)},
                  {"inputs", cfg.source},
                  {"results", results},
                  {"files", files}};
    return out;
}

void write_outputs(const RunResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream f(out_dir / name, std::ios::binary);
        if (!f) throw Error("write_outputs", "cannot write " + (out_dir / name).string());
        f << body;
    };
    write("report.json", result.report.dump(2) + "\n");
    for (const auto& [name, body] : result.files) write(name, body);
}

void validate_report(const Json& report) {
    if (!report.is_object()) throw ConfigError("", "report must be a JSON object");
    reject_unknown(report, "", {"tool", "version", "command", "inputs", "results", "files"});
    if (!report.contains("tool") || report["tool"] != "modalres") throw ConfigError("/tool", "missing or wrong tool name");
    if (!report.contains("version") || !report["version"].is_string()) throw ConfigError("/version", "missing version");
    if (!report.contains("command") || !report["command"].is_string()) throw ConfigError("/command", "missing command");
    const auto cmd = parse_command(report["command"].get<std::string>());
    if (!cmd) throw ConfigError("/command", "unknown command");
    if (!report.contains("results") || !report["results"].is_object()) throw ConfigError("/results", "missing results");
    if (!report.contains("files") || !report["files"].is_array()) throw ConfigError("/files", "missing file list");
    if (!report.contains("inputs")) throw ConfigError("/inputs", "missing inputs");
    parse_config(report["inputs"], cmd);
}

}  // namespace modalres
