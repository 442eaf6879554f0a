#include "cqed/io/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "cqed/io/csv.hpp"

namespace cqed::io {

namespace {

enum class Kind { time, angular, rate, real, integer, text, lines, time_list };

struct KeyInfo {
    Kind kind;
};

// section.key -> value dimension
const std::map<std::string, KeyInfo>& schema() {
    static const std::map<std::string, KeyInfo> table = {
        {"experiment.kind", {Kind::text}},
        {"experiment.output_dir", {Kind::text}},
        {"experiment.seed", {Kind::integer}},
        {"system.qubit_splitting", {Kind::angular}},
        {"system.cavity_freq", {Kind::angular}},
        {"system.delta", {Kind::angular}},
        {"system.g", {Kind::angular}},
        {"system.kappa", {Kind::angular}},
        {"system.kappa_1", {Kind::angular}},
        {"system.kappa_2", {Kind::angular}},
        {"system.kappa_ext", {Kind::angular}},
        {"system.gamma_phi", {Kind::rate}},
        {"system.t2star", {Kind::time}},
        {"sequence.n_pulses", {Kind::integer}},
        {"sequence.tau", {Kind::time}},
        {"sequence.duration", {Kind::time}},
        {"sequence.pulses", {Kind::time_list}},
        {"spin.hyperfine", {Kind::angular}},
        {"spin.field_x", {Kind::angular}},
        {"spin.field_z", {Kind::angular}},
        {"spin.polarization", {Kind::real}},
        {"spectrum.lines", {Kind::lines}},
        {"spectrum.file", {Kind::text}},
        {"spectrum.quantum_file", {Kind::text}},
        {"grids.time_start", {Kind::time}},
        {"grids.time_stop", {Kind::time}},
        {"grids.time_points", {Kind::integer}},
        {"grids.freq_start", {Kind::angular}},
        {"grids.freq_stop", {Kind::angular}},
        {"grids.freq_points", {Kind::integer}},
        {"transmission.probe_points", {Kind::integer}},
        {"transmission.tolerance", {Kind::real}},
        {"signal.n_echoes", {Kind::integer}},
        {"signal.t_on", {Kind::time}},
        {"signal.sigma_x0", {Kind::real}},
        {"reconstruct.n_echoes", {Kind::integer}},
        {"reconstruct.detunings", {Kind::integer}},
        {"reconstruct.threshold", {Kind::real}},
        {"oracle.line_mode", {Kind::text}},
        {"oracle.modes", {Kind::integer}},
        {"oracle.span", {Kind::angular}},
        {"oracle.t_final", {Kind::time}},
        {"oracle.samples_per_tau", {Kind::integer}},
    };
    return table;
}

const std::set<std::string>& known_sections() {
    static const std::set<std::string> s = {
        "experiment", "system",       "sequence", "spin",      "spectrum",
        "grids",      "transmission", "signal",   "reconstruct", "oracle"};
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawEntry {
    std::string value;
    int line = 0;
};

class Collector {
  public:
    void error(int line, const std::string& msg) {
        diags_.push_back({line, msg});
    }
    void raise_if_any() {
        if (!diags_.empty()) throw ConfigError(std::move(diags_));
    }

  private:
    std::vector<ConfigDiagnostic> diags_;
};

// number followed by an optional unit suffix, converted to working units
double parse_quantity(const std::string& raw, Kind kind, int line,
                      Collector& errs) {
    const char* begin = raw.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin) {
        errs.error(line, "expected a number, got '" + raw + "'");
        return 0.0;
    }
    std::string suffix = trim(std::string(end));
    if (suffix.empty()) return value;
    switch (kind) {
        case Kind::time:
            if (suffix == "us") return value;
            if (suffix == "ns") return value * 1e-3;
            if (suffix == "ms") return value * 1e3;
            errs.error(line, "'" + suffix + "' is not a time unit (us, ns, ms)");
            return value;
        case Kind::angular:
            if (suffix == "rad_per_us") return value;
            if (suffix == "MHz") return value * 2.0 * M_PI;
            if (suffix == "kHz") return value * 2.0 * M_PI * 1e-3;
            if (suffix == "GHz") return value * 2.0 * M_PI * 1e3;
            errs.error(line, "'" + suffix +
                                 "' is not an angular-frequency unit "
                                 "(rad_per_us, MHz, kHz, GHz)");
            return value;
        case Kind::rate:
            if (suffix == "per_us") return value;
            if (suffix == "per_ms") return value * 1e-3;
            errs.error(line,
                       "'" + suffix + "' is not a rate unit (per_us, per_ms)");
            return value;
        default:
            errs.error(line, "key takes a bare value, found suffix '" +
                                 suffix + "'");
            return value;
    }
}

long long parse_integer(const std::string& raw, int line, Collector& errs) {
    const char* begin = raw.c_str();
    char* end = nullptr;
    long long value = std::strtoll(begin, &end, 10);
    if (end == begin || !trim(std::string(end)).empty()) {
        errs.error(line, "expected an integer, got '" + raw + "'");
        return 0;
    }
    return value;
}

std::vector<double> parse_time_list(const std::string& raw, int line,
                                    Collector& errs) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) continue;
        out.push_back(parse_quantity(cell, Kind::time, line, errs));
    }
    if (out.empty()) errs.error(line, "expected a comma-separated time list");
    return out;
}

std::vector<SpectralLine> parse_lines(const std::string& raw, int line,
                                      Collector& errs) {
    std::vector<SpectralLine> out;
    std::stringstream ss(raw);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
        pair = trim(pair);
        if (pair.empty()) continue;
        auto colon = pair.find(':');
        if (colon == std::string::npos) {
            errs.error(line, "line entries use omega:weight, got '" + pair +
                                 "'");
            continue;
        }
        SpectralLine ln;
        ln.omega =
            parse_quantity(trim(pair.substr(0, colon)), Kind::angular, line,
                           errs);
        ln.weight = parse_quantity(trim(pair.substr(colon + 1)), Kind::real,
                                   line, errs);
        out.push_back(ln);
    }
    if (out.empty()) errs.error(line, "expected omega:weight entries");
    return out;
}

}  // namespace

std::string ConfigError::join(const std::vector<ConfigDiagnostic>& diags) {
    std::string msg;
    for (const auto& d : diags) {
        if (!msg.empty()) msg += '\n';
        if (d.line > 0) msg += "line " + std::to_string(d.line) + ": ";
        msg += d.message;
    }
    return msg;
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::fid: return "fid";
        case ExperimentKind::cpmg: return "cpmg";
        case ExperimentKind::eseem: return "eseem";
        case ExperimentKind::transmission: return "transmission";
        case ExperimentKind::signal: return "signal";
        case ExperimentKind::oracle_compare: return "oracle-compare";
        case ExperimentKind::reconstruct: return "reconstruct";
    }
    throw std::logic_error("unreachable experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    for (auto kind :
         {ExperimentKind::fid, ExperimentKind::cpmg, ExperimentKind::eseem,
          ExperimentKind::transmission, ExperimentKind::signal,
          ExperimentKind::oracle_compare, ExperimentKind::reconstruct})
        if (to_string(kind) == name) return kind;
    throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

ExperimentConfig parse_config(const std::string& text) {
    Collector errs;
    std::map<std::string, RawEntry> entries;

    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                errs.error(lineno, "unterminated section header");
                continue;
            }
            section = trim(t.substr(1, t.size() - 2));
            if (!known_sections().count(section))
                errs.error(lineno, "unknown section [" + section + "]");
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            errs.error(lineno, "expected key = value");
            continue;
        }
        if (section.empty()) {
            errs.error(lineno, "key before any [section] header");
            continue;
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        std::string full = section + "." + key;
        if (!known_sections().count(section)) continue;  // already reported
        if (!schema().count(full)) {
            errs.error(lineno, "unknown key '" + key + "' in [" + section +
                                   "]");
            continue;
        }
        if (entries.count(full)) {
            errs.error(lineno, "duplicate key '" + key + "' in [" + section +
                                   "]");
            continue;
        }
        entries[full] = {value, lineno};
    }

    ExperimentConfig cfg;
    bool kappa2_given = false;

    auto take = [&](const std::string& full) -> const RawEntry* {
        auto it = entries.find(full);
        return it == entries.end() ? nullptr : &it->second;
    };
    auto number = [&](const std::string& full, double& target) {
        if (const auto* e = take(full))
            target = parse_quantity(e->value, schema().at(full).kind, e->line,
                                    errs);
    };
    auto integer = [&](const std::string& full, auto& target) {
        if (const auto* e = take(full))
            target = static_cast<std::decay_t<decltype(target)>>(
                parse_integer(e->value, e->line, errs));
    };
    auto text_value = [&](const std::string& full, std::string& target) {
        if (const auto* e = take(full)) target = e->value;
    };

    if (const auto* e = take("experiment.kind")) {
        try {
            cfg.kind = experiment_kind_from_string(e->value);
        } catch (const std::invalid_argument& ex) {
            errs.error(e->line, ex.what());
        }
    } else {
        errs.error(0, "missing required key 'kind' in [experiment]");
    }
    text_value("experiment.output_dir", cfg.output_dir);
    integer("experiment.seed", cfg.seed);

    number("system.qubit_splitting", cfg.system.qubit_splitting);
    number("system.cavity_freq", cfg.system.cavity_freq);
    number("system.delta", cfg.system.delta);
    number("system.g", cfg.system.g);
    number("system.kappa", cfg.system.kappa);
    number("system.kappa_1", cfg.system.kappa1);
    number("system.kappa_ext", cfg.system.kappa_ext);
    if (const auto* e = take("system.kappa_2")) {
        cfg.system.kappa2 =
            parse_quantity(e->value, Kind::angular, e->line, errs);
        kappa2_given = true;
    }
    number("system.gamma_phi", cfg.system.gamma_phi);
    number("system.t2star", cfg.system.t2star);
    if (!kappa2_given)
        cfg.system.kappa2 =
            cfg.system.kappa - cfg.system.kappa1 - cfg.system.kappa_ext;

    integer("sequence.n_pulses", cfg.sequence.n_pulses);
    number("sequence.tau", cfg.sequence.tau);
    number("sequence.duration", cfg.sequence.duration);
    if (const auto* e = take("sequence.pulses"))
        cfg.sequence.custom_pulses = parse_time_list(e->value, e->line, errs);

    for (const char* key : {"hyperfine", "field_x", "field_z", "polarization"})
        if (take(std::string("spin.") + key)) cfg.has_spin = true;
    number("spin.hyperfine", cfg.spin.hyperfine);
    number("spin.field_x", cfg.spin.zeeman_x);
    number("spin.field_z", cfg.spin.zeeman_z);
    number("spin.polarization", cfg.spin.polarization);
    cfg.spin.gamma_phi = cfg.system.gamma_phi;

    if (const auto* e = take("spectrum.lines"))
        cfg.spectrum.lines = parse_lines(e->value, e->line, errs);
    text_value("spectrum.file", cfg.spectrum.table_path);
    text_value("spectrum.quantum_file", cfg.spectrum.quantum_table_path);

    number("grids.time_start", cfg.grids.time_start);
    number("grids.time_stop", cfg.grids.time_stop);
    integer("grids.time_points", cfg.grids.time_points);
    number("grids.freq_start", cfg.grids.freq_start);
    number("grids.freq_stop", cfg.grids.freq_stop);
    integer("grids.freq_points", cfg.grids.freq_points);

    integer("transmission.probe_points", cfg.transmission.probe_points);
    number("transmission.tolerance", cfg.transmission.tolerance);

    integer("signal.n_echoes", cfg.signal.n_echoes);
    number("signal.t_on", cfg.signal.t_on);
    number("signal.sigma_x0", cfg.signal.sigma_x0);

    integer("reconstruct.n_echoes", cfg.reconstruct.n_echoes);
    integer("reconstruct.detunings", cfg.reconstruct.detunings);
    number("reconstruct.threshold", cfg.reconstruct.threshold);

    text_value("oracle.line_mode", cfg.oracle.line_mode);
    integer("oracle.modes", cfg.oracle.modes);
    number("oracle.span", cfg.oracle.span);
    number("oracle.t_final", cfg.oracle.t_final);
    integer("oracle.samples_per_tau", cfg.oracle.samples_per_tau);

    errs.raise_if_any();

    // semantic checks that need the assembled config
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) errs.error(0, msg);
    };
    const bool uses_cavity = cfg.kind != ExperimentKind::eseem;
    if (uses_cavity) {
        try {
            validate_system(cfg.system, cfg.sequence.tau);
        } catch (const std::invalid_argument& ex) {
            errs.error(0, ex.what());
        }
    } else {
        require(cfg.system.t2star >= 0.0, "t2star must be >= 0");
    }
    switch (cfg.kind) {
        case ExperimentKind::fid:
            require(cfg.sequence.duration > 0.0 || cfg.grids.time_points > 1,
                    "fid needs sequence.duration or a time grid");
            break;
        case ExperimentKind::cpmg:
        case ExperimentKind::oracle_compare:
            require(cfg.sequence.tau > 0.0, "sequence.tau must be > 0");
            require(cfg.sequence.n_pulses >= 1,
                    "sequence.n_pulses must be >= 1");
            break;
        case ExperimentKind::eseem:
            require(cfg.has_spin, "eseem needs a [spin] section");
            require(cfg.grids.time_points > 3,
                    "eseem needs grids.time_points > 3");
            require(cfg.grids.time_stop > cfg.grids.time_start,
                    "eseem needs time_stop > time_start");
            break;
        case ExperimentKind::transmission:
            require(cfg.has_spin, "transmission needs a [spin] section");
            require(cfg.transmission.probe_points > 10,
                    "transmission.probe_points must be > 10");
            break;
        case ExperimentKind::signal:
            require(cfg.sequence.tau > 0.0, "sequence.tau must be > 0");
            require(cfg.signal.n_echoes >= 1 || cfg.signal.t_on >= 0.0,
                    "signal needs n_echoes >= 1 or a pulsed t_on");
            break;
        case ExperimentKind::reconstruct:
            require(cfg.sequence.tau > 0.0, "sequence.tau must be > 0");
            require(cfg.reconstruct.n_echoes >= 1,
                    "reconstruct.n_echoes must be >= 1");
            break;
    }
    if (cfg.oracle.line_mode != "markovian" &&
        cfg.oracle.line_mode != "discretized")
        errs.error(0, "oracle.line_mode must be markovian or discretized");
    errs.raise_if_any();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({{0, "cannot open config file " + path}});
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

void emit(std::ostream& os, const std::string& key, double v,
          const char* suffix) {
    os << key << " = " << format_full(v);
    if (*suffix) os << ' ' << suffix;
    os << '\n';
}

}  // namespace

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "[experiment]\n";
    os << "kind = " << to_string(cfg.kind) << '\n';
    os << "output_dir = " << cfg.output_dir << '\n';
    os << "seed = " << cfg.seed << '\n';

    os << "\n[system]\n";
    emit(os, "qubit_splitting", cfg.system.qubit_splitting, "rad_per_us");
    emit(os, "cavity_freq", cfg.system.cavity_freq, "rad_per_us");
    emit(os, "delta", cfg.system.delta, "rad_per_us");
    emit(os, "g", cfg.system.g, "rad_per_us");
    emit(os, "kappa", cfg.system.kappa, "rad_per_us");
    emit(os, "kappa_1", cfg.system.kappa1, "rad_per_us");
    emit(os, "kappa_2", cfg.system.kappa2, "rad_per_us");
    emit(os, "kappa_ext", cfg.system.kappa_ext, "rad_per_us");
    emit(os, "gamma_phi", cfg.system.gamma_phi, "per_us");
    emit(os, "t2star", cfg.system.t2star, "us");

    os << "\n[sequence]\n";
    os << "n_pulses = " << cfg.sequence.n_pulses << '\n';
    emit(os, "tau", cfg.sequence.tau, "us");
    emit(os, "duration", cfg.sequence.duration, "us");
    if (!cfg.sequence.custom_pulses.empty()) {
        os << "pulses = ";
        for (std::size_t i = 0; i < cfg.sequence.custom_pulses.size(); ++i) {
            if (i) os << ", ";
            os << format_full(cfg.sequence.custom_pulses[i]);
        }
        os << '\n';
    }

    if (cfg.has_spin) {
        os << "\n[spin]\n";
        emit(os, "hyperfine", cfg.spin.hyperfine, "rad_per_us");
        emit(os, "field_x", cfg.spin.zeeman_x, "rad_per_us");
        emit(os, "field_z", cfg.spin.zeeman_z, "rad_per_us");
        emit(os, "polarization", cfg.spin.polarization, "");
    }

    if (!cfg.spectrum.empty()) {
        os << "\n[spectrum]\n";
        if (!cfg.spectrum.lines.empty()) {
            os << "lines = ";
            for (std::size_t i = 0; i < cfg.spectrum.lines.size(); ++i) {
                if (i) os << "; ";
                os << format_full(cfg.spectrum.lines[i].omega) << ":"
                   << format_full(cfg.spectrum.lines[i].weight);
            }
            os << '\n';
        }
        if (!cfg.spectrum.table_path.empty())
            os << "file = " << cfg.spectrum.table_path << '\n';
        if (!cfg.spectrum.quantum_table_path.empty())
            os << "quantum_file = " << cfg.spectrum.quantum_table_path << '\n';
    }

    os << "\n[grids]\n";
    emit(os, "time_start", cfg.grids.time_start, "us");
    emit(os, "time_stop", cfg.grids.time_stop, "us");
    os << "time_points = " << cfg.grids.time_points << '\n';
    emit(os, "freq_start", cfg.grids.freq_start, "rad_per_us");
    emit(os, "freq_stop", cfg.grids.freq_stop, "rad_per_us");
    os << "freq_points = " << cfg.grids.freq_points << '\n';

    os << "\n[transmission]\n";
    os << "probe_points = " << cfg.transmission.probe_points << '\n';
    emit(os, "tolerance", cfg.transmission.tolerance, "");

    os << "\n[signal]\n";
    os << "n_echoes = " << cfg.signal.n_echoes << '\n';
    if (cfg.signal.t_on >= 0.0) emit(os, "t_on", cfg.signal.t_on, "us");
    emit(os, "sigma_x0", cfg.signal.sigma_x0, "");

    os << "\n[reconstruct]\n";
    os << "n_echoes = " << cfg.reconstruct.n_echoes << '\n';
    os << "detunings = " << cfg.reconstruct.detunings << '\n';
    emit(os, "threshold", cfg.reconstruct.threshold, "");

    os << "\n[oracle]\n";
    os << "line_mode = " << cfg.oracle.line_mode << '\n';
    os << "modes = " << cfg.oracle.modes << '\n';
    emit(os, "span", cfg.oracle.span, "rad_per_us");
    emit(os, "t_final", cfg.oracle.t_final, "us");
    os << "samples_per_tau = " << cfg.oracle.samples_per_tau << '\n';
    return os.str();
}

bool operator==(const SequenceSpec& a, const SequenceSpec& b) {
    return a.n_pulses == b.n_pulses && a.tau == b.tau &&
           a.duration == b.duration && a.custom_pulses == b.custom_pulses;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    auto sys = [](const SystemParams& s) {
        return std::tie(s.qubit_splitting, s.cavity_freq, s.delta, s.g,
                        s.kappa, s.kappa1, s.kappa2, s.kappa_ext, s.gamma_phi,
                        s.t2star);
    };
    auto spin = [](const SpinBathParams& s) {
        return std::tie(s.hyperfine, s.zeeman_x, s.zeeman_z, s.polarization,
                        s.gamma_phi);
    };
    auto lines_eq = [](const std::vector<SpectralLine>& x,
                       const std::vector<SpectralLine>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].omega != y[i].omega || x[i].weight != y[i].weight)
                return false;
        return true;
    };
    return a.kind == b.kind && a.output_dir == b.output_dir &&
           a.seed == b.seed && sys(a.system) == sys(b.system) &&
           a.sequence == b.sequence && spin(a.spin) == spin(b.spin) &&
           a.has_spin == b.has_spin &&
           lines_eq(a.spectrum.lines, b.spectrum.lines) &&
           a.spectrum.table_path == b.spectrum.table_path &&
           a.spectrum.quantum_table_path == b.spectrum.quantum_table_path &&
           std::tie(a.grids.time_start, a.grids.time_stop,
                    a.grids.time_points, a.grids.freq_start,
                    a.grids.freq_stop, a.grids.freq_points) ==
               std::tie(b.grids.time_start, b.grids.time_stop,
                        b.grids.time_points, b.grids.freq_start,
                        b.grids.freq_stop, b.grids.freq_points) &&
           a.transmission.probe_points == b.transmission.probe_points &&
           a.transmission.tolerance == b.transmission.tolerance &&
           std::tie(a.signal.n_echoes, a.signal.t_on, a.signal.sigma_x0) ==
               std::tie(b.signal.n_echoes, b.signal.t_on, b.signal.sigma_x0) &&
           std::tie(a.reconstruct.n_echoes, a.reconstruct.detunings,
                    a.reconstruct.threshold) ==
               std::tie(b.reconstruct.n_echoes, b.reconstruct.detunings,
                        b.reconstruct.threshold) &&
           a.oracle.line_mode == b.oracle.line_mode &&
           a.oracle.modes == b.oracle.modes && a.oracle.span == b.oracle.span &&
           a.oracle.t_final == b.oracle.t_final &&
           a.oracle.samples_per_tau == b.oracle.samples_per_tau;
}

}  // namespace cqed::io
