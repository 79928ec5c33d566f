#include "stretchlab/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "stretchlab/errors.hpp"

namespace stretchlab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": key '" + key +
                         "': cannot parse '" + v + "' as a number");
    }
}

long long parse_int(const std::string& key, const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": key '" + key +
                         "': cannot parse '" + v + "' as an integer");
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(key, trim(item), line));
    }
    if (out.empty()) {
        throw ParseError("line " + std::to_string(line) + ": key '" + key +
                         "': empty list");
    }
    return out;
}

Vec3 parse_vec3(const std::string& key, const std::string& v, int line) {
    const std::vector<double> xs = parse_list(key, v, line);
    if (xs.size() != 3) {
        throw ParseError("line " + std::to_string(line) + ": key '" + key +
                         "': expected three comma-separated numbers");
    }
    return {xs[0], xs[1], xs[2]};
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt(const Vec3& v) { return fmt(v.x) + "," + fmt(v.y) + "," + fmt(v.z); }

}  // namespace

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::trajectories: return "trajectories";
        case Experiment::line: return "line";
        case Experiment::blowup_scan: return "blowup_scan";
        case Experiment::reconstruct: return "reconstruct";
        case Experiment::weakcheck: return "weakcheck";
        case Experiment::ensemble: return "ensemble";
    }
    return "?";
}

std::size_t Scenario::n_steps() const {
    return static_cast<std::size_t>(std::llround(T / dt));
}

std::vector<std::pair<std::string, std::string>> Scenario::to_key_values() const {
    std::string snaps;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        if (i) snaps += ",";
        snaps += fmt(snapshots[i]);
    }
    return {
        {"field", field},
        {"alpha", fmt(alpha)},
        {"gamma", fmt(gamma)},
        {"initial_field", initial_field},
        {"sigma", fmt(sigma)},
        {"T", fmt(T)},
        {"dt", fmt(dt)},
        {"seed", std::to_string(seed)},
        {"experiment", to_string(experiment)},
        {"r_min", fmt(r_min)},
        {"r_max", fmt(r_max)},
        {"n_r", std::to_string(n_r)},
        {"n_theta", std::to_string(n_theta)},
        {"line_from", fmt(line_from)},
        {"line_to", fmt(line_to)},
        {"refine_len", fmt(refine_len)},
        {"vertex_budget", std::to_string(vertex_budget)},
        {"snapshots", snaps},
        {"replicates", std::to_string(replicates)},
        {"phi_center", fmt(phi_center)},
        {"phi_width", fmt(phi_width)},
    };
}

void validate(const Scenario& s) {
    if (s.field != "holder") {
        throw ValidationError("field must be 'holder'");
    }
    if (!(s.alpha > 0.0 && s.alpha <= 1.0)) {
        throw ValidationError("alpha must be in (0, 1]");
    }
    if (!(s.gamma > 0.0)) throw ValidationError("gamma must be > 0");
    if (!(s.sigma >= 0.0)) throw ValidationError("sigma must be >= 0");
    if (!(s.T > 0.0)) throw ValidationError("T must be > 0");
    if (!(s.dt > 0.0)) throw ValidationError("dt must be > 0");
    const double steps = s.T / s.dt;
    if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps)) {
        throw ValidationError("T/dt must be an integer number of steps");
    }
    if (!(s.r_min > 0.0 && s.r_max > s.r_min)) {
        throw ValidationError("need 0 < r_min < r_max");
    }
    if (s.n_r < 1 || s.n_theta < 1) {
        throw ValidationError("n_r and n_theta must be >= 1");
    }
    if (!(s.refine_len > 0.0)) throw ValidationError("refine_len must be > 0");
    if (s.vertex_budget < 2) throw ValidationError("vertex_budget must be >= 2");
    if (s.replicates < 1) throw ValidationError("replicates must be >= 1");
    if (!(s.phi_width > 0.0)) throw ValidationError("phi_width must be > 0");
    if (s.experiment == Experiment::line) {
        if (s.snapshots.empty()) throw ValidationError("snapshots must be nonempty");
        double prev = 0.0;
        for (double t : s.snapshots) {
            const double k = t / s.dt;
            if (t <= prev || t > s.T + 1e-12 ||
                std::abs(k - std::round(k)) > 1e-6 * std::max(1.0, k)) {
                throw ValidationError(
                    "snapshots must be ascending multiples of dt within (0, T]");
            }
            prev = t;
        }
        if ((s.line_to - s.line_from).norm() <= 0.0) {
            throw ValidationError("line_from and line_to must differ");
        }
    }
    if (s.experiment == Experiment::blowup_scan && s.sigma != 0.0) {
        throw ValidationError(
            "blowup_scan is the deterministic scan and requires sigma = 0; "
            "use the ensemble experiment for noisy supremum statistics");
    }
    if ((s.experiment == Experiment::blowup_scan ||
         s.experiment == Experiment::ensemble) &&
        !(s.r_max < 1.0)) {
        throw ValidationError(
            "blowup_scan/ensemble compare against the closed form and need r_max < 1");
    }
}

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
    Scenario s;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(name + ": line " + std::to_string(line_no) +
                             ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError(name + ": line " + std::to_string(line_no) +
                             ": expected key = value");
        }
        if (seen.count(key)) {
            throw ParseError(name + ": line " + std::to_string(line_no) +
                             ": duplicate key '" + key + "' (first at line " +
                             std::to_string(seen[key]) + ")");
        }
        seen[key] = line_no;

        if (key == "field") s.field = value;
        else if (key == "alpha") s.alpha = parse_double(key, value, line_no);
        else if (key == "gamma") s.gamma = parse_double(key, value, line_no);
        else if (key == "initial_field") s.initial_field = value;
        else if (key == "sigma") s.sigma = parse_double(key, value, line_no);
        else if (key == "T") s.T = parse_double(key, value, line_no);
        else if (key == "dt") s.dt = parse_double(key, value, line_no);
        else if (key == "seed") s.seed = static_cast<std::uint64_t>(parse_int(key, value, line_no));
        else if (key == "experiment") {
            if (value == "trajectories") s.experiment = Experiment::trajectories;
            else if (value == "line") s.experiment = Experiment::line;
            else if (value == "blowup_scan") s.experiment = Experiment::blowup_scan;
            else if (value == "reconstruct") s.experiment = Experiment::reconstruct;
            else if (value == "weakcheck") s.experiment = Experiment::weakcheck;
            else if (value == "ensemble") s.experiment = Experiment::ensemble;
            else
                throw ParseError(name + ": line " + std::to_string(line_no) +
                                 ": unknown experiment '" + value + "'");
        }
        else if (key == "r_min") s.r_min = parse_double(key, value, line_no);
        else if (key == "r_max") s.r_max = parse_double(key, value, line_no);
        else if (key == "n_r") s.n_r = static_cast<int>(parse_int(key, value, line_no));
        else if (key == "n_theta") s.n_theta = static_cast<int>(parse_int(key, value, line_no));
        else if (key == "line_from") s.line_from = parse_vec3(key, value, line_no);
        else if (key == "line_to") s.line_to = parse_vec3(key, value, line_no);
        else if (key == "refine_len") s.refine_len = parse_double(key, value, line_no);
        else if (key == "vertex_budget") s.vertex_budget = static_cast<int>(parse_int(key, value, line_no));
        else if (key == "snapshots") s.snapshots = parse_list(key, value, line_no);
        else if (key == "replicates") s.replicates = static_cast<int>(parse_int(key, value, line_no));
        else if (key == "phi_center") s.phi_center = parse_vec3(key, value, line_no);
        else if (key == "phi_width") s.phi_width = parse_double(key, value, line_no);
        else {
            throw ParseError(name + ": line " + std::to_string(line_no) +
                             ": unknown key '" + key + "'");
        }
    }
    validate(s);
    return s;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

}  // namespace stretchlab
