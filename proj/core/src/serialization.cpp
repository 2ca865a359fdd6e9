#include "sysid/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <system_error>

#include <nlohmann/json.hpp>

namespace sysid {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

namespace {
double parse_double(std::string_view text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end) {
        throw std::invalid_argument("malformed number: " + std::string(text));
    }
    return value;
}

long long parse_integer(std::string_view text) {
    long long value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end) {
        throw std::invalid_argument("malformed integer: " + std::string(text));
    }
    return value;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& name) {
    if (!j.is_array()) {
        throw std::invalid_argument(name + " must be a 2-D array");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) {
        return Eigen::MatrixXd(0, 0);
    }
    const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw std::invalid_argument(name + " has ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& cell = row[static_cast<std::size_t>(c)];
            if (!cell.is_number()) {
                throw std::invalid_argument(name + " must contain finite numbers");
            }
            m(i, c) = cell.get<double>();
        }
    }
    if (!m.allFinite()) {
        throw std::invalid_argument(name + " must contain finite numbers");
    }
    return m;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open file for writing: " + path);
    }
    out << contents;
}

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
        throw std::invalid_argument("malformed JSON");
    }
    return j;
}
}  // namespace

std::string to_json(const StateSpaceSystem& system) {
    json j;
    j["n"] = system.state_dim();
    j["d_u"] = system.input_dim();
    j["d_y"] = system.output_dim();
    j["A"] = matrix_to_json(system.A);
    j["B"] = matrix_to_json(system.B);
    j["C"] = matrix_to_json(system.C);
    return j.dump(2);
}

StateSpaceSystem system_from_json(const std::string& text) {
    const json j = parse_json(text);
    for (const char* key : {"n", "d_u", "d_y", "A", "B", "C"}) {
        if (!j.contains(key)) {
            throw std::invalid_argument(std::string("system JSON is missing \"") + key + "\"");
        }
    }
    StateSpaceSystem system;
    system.A = matrix_from_json(j["A"], "A");
    system.B = matrix_from_json(j["B"], "B");
    system.C = matrix_from_json(j["C"], "C");
    validate(system);
    if (j["n"].get<Eigen::Index>() != system.state_dim() ||
        j["d_u"].get<Eigen::Index>() != system.input_dim() ||
        j["d_y"].get<Eigen::Index>() != system.output_dim()) {
        throw std::invalid_argument("declared dimensions disagree with the matrices");
    }
    return system;
}

void save_system(const StateSpaceSystem& system, const std::string& path) {
    write_file(path, to_json(system) + "\n");
}

StateSpaceSystem load_system(const std::string& path) {
    return system_from_json(read_file(path));
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << 't';
    for (Eigen::Index i = 1; i <= traj.input_dim(); ++i) {
        out << ",u_" << i;
    }
    for (Eigen::Index i = 1; i <= traj.output_dim(); ++i) {
        out << ",y_" << i;
    }
    out << '\n';
    for (Eigen::Index t = 0; t < traj.length(); ++t) {
        out << (t + 1);
        for (Eigen::Index i = 0; i < traj.input_dim(); ++i) {
            out << ',' << format_double(traj.inputs(i, t));
        }
        for (Eigen::Index i = 0; i < traj.output_dim(); ++i) {
            out << ',' << format_double(traj.outputs(i, t));
        }
        out << '\n';
    }
}

namespace {
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}
}  // namespace

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty trajectory file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || header.front() != "t") {
        throw std::invalid_argument("trajectory CSV must start with a 't' column");
    }
    Eigen::Index d_u = 0;
    Eigen::Index d_y = 0;
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i].rfind("u_", 0) == 0 && d_y == 0) {
            ++d_u;
        } else if (header[i].rfind("y_", 0) == 0) {
            ++d_y;
        } else {
            throw std::invalid_argument("unexpected trajectory column: " + header[i]);
        }
    }
    if (d_u == 0 || d_y == 0) {
        throw std::invalid_argument("trajectory CSV needs u_* and y_* columns");
    }

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (static_cast<Eigen::Index>(fields.size()) != 1 + d_u + d_y) {
            throw std::invalid_argument("trajectory row has the wrong number of fields");
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const std::string& f : fields) {
            row.push_back(parse_double(f));
        }
        if (static_cast<Eigen::Index>(rows.size()) + 1 != static_cast<Eigen::Index>(row[0])) {
            throw std::invalid_argument("trajectory time index must start at 1 and be contiguous");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw std::invalid_argument("trajectory file has no data rows");
    }

    Trajectory traj;
    traj.inputs.resize(d_u, static_cast<Eigen::Index>(rows.size()));
    traj.outputs.resize(d_y, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (Eigen::Index i = 0; i < d_u; ++i) {
            traj.inputs(i, static_cast<Eigen::Index>(t)) = rows[t][static_cast<std::size_t>(1 + i)];
        }
        for (Eigen::Index i = 0; i < d_y; ++i) {
            traj.outputs(i, static_cast<Eigen::Index>(t)) =
                rows[t][static_cast<std::size_t>(1 + d_u + i)];
        }
    }
    return traj;
}

void save_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open file for writing: " + path);
    }
    write_trajectory_csv(traj, out);
}

Trajectory load_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    return read_trajectory_csv(in);
}

std::string to_json(const IdentificationResult& result) {
    json j;
    j["order"] = result.order;
    j["A"] = matrix_to_json(result.A_hat);
    j["B"] = matrix_to_json(result.B_hat);
    j["C"] = matrix_to_json(result.C_hat);
    j["xi"] = result.threshold;
    json s = json::array();
    for (Eigen::Index i = 0; i < result.retained_singular_values.size(); ++i) {
        s.push_back(result.retained_singular_values(i));
    }
    j["singular_values"] = std::move(s);
    return j.dump(2);
}

const char* const kTrialRecordCsvHeader =
    "status,T,trial,xi,order_estimate,hankel_op_error,hankel_fro_error_thresholded,"
    "markov_cab_error,oracle_cab_error,bound_rhs_prop1";

void write_trial_records_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
    out << kTrialRecordCsvHeader << '\n';
    for (const TrialRecord& r : records) {
        out << r.status << ',' << r.T << ',' << r.trial_index << ',' << format_double(r.xi)
            << ',' << r.order_estimate << ',' << format_double(r.hankel_op_error) << ','
            << format_double(r.hankel_fro_error_thresholded) << ','
            << format_double(r.markov_cab_error) << ',' << format_double(r.oracle_cab_error)
            << ',' << format_double(r.bound_rhs_prop1) << '\n';
    }
}

std::vector<TrialRecord> read_trial_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || (line != kTrialRecordCsvHeader &&
                                    line != std::string(kTrialRecordCsvHeader) + "\r")) {
        throw std::invalid_argument("unexpected trial record CSV header");
    }
    std::vector<TrialRecord> records;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 10) {
            throw std::invalid_argument("trial record row has the wrong number of fields");
        }
        TrialRecord r;
        r.status = fields[0];
        r.T = parse_integer(fields[1]);
        r.trial_index = static_cast<int>(parse_integer(fields[2]));
        r.xi = parse_double(fields[3]);
        r.order_estimate = static_cast<Eigen::Index>(parse_integer(fields[4]));
        r.hankel_op_error = parse_double(fields[5]);
        r.hankel_fro_error_thresholded = parse_double(fields[6]);
        r.markov_cab_error = parse_double(fields[7]);
        r.oracle_cab_error = parse_double(fields[8]);
        r.bound_rhs_prop1 = parse_double(fields[9]);
        records.push_back(std::move(r));
    }
    return records;
}

namespace {
DesignKind mode_from_string(const std::string& mode) {
    if (mode == "single") {
        return DesignKind::single_trajectory;
    }
    if (mode == "multi") {
        return DesignKind::multi_trajectory;
    }
    throw std::invalid_argument("mode must be \"single\" or \"multi\"");
}

std::string mode_to_string(DesignKind kind) {
    return kind == DesignKind::single_trajectory ? "single" : "multi";
}
}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    const json j = parse_json(text);
    for (const char* key : {"mode", "n", "d_u", "d_y", "tau", "sigma_u", "sigma_z", "delta",
                            "T_grid", "trials_per_T", "master_seed", "output_path"}) {
        if (!j.contains(key)) {
            throw std::invalid_argument(std::string("config is missing \"") + key + "\"");
        }
    }

    ExperimentConfig config;
    config.mode = mode_from_string(j["mode"].get<std::string>());
    config.n = j["n"].get<Eigen::Index>();
    config.d_u = j["d_u"].get<Eigen::Index>();
    config.d_y = j["d_y"].get<Eigen::Index>();
    config.tau = j["tau"].get<Eigen::Index>();
    config.sigma_u = j["sigma_u"].get<double>();
    config.sigma_z = j["sigma_z"].get<double>();
    config.delta = j["delta"].get<double>();
    config.T_grid = j["T_grid"].get<std::vector<long long>>();
    config.trials_per_T = j["trials_per_T"].get<int>();
    config.master_seed = j["master_seed"].get<std::uint64_t>();
    config.output_path = j["output_path"].get<std::string>();
    if (j.contains("beta_override") && !j["beta_override"].is_null()) {
        config.beta_override = j["beta_override"].get<double>();
    }
    if (j.contains("allow_small_tau")) {
        config.allow_small_tau = j["allow_small_tau"].get<bool>();
    }
    validate(config);
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_json(read_file(path));
}

std::string to_json(const ExperimentConfig& config) {
    json j;
    j["mode"] = mode_to_string(config.mode);
    j["n"] = config.n;
    j["d_u"] = config.d_u;
    j["d_y"] = config.d_y;
    j["tau"] = config.tau;
    j["sigma_u"] = config.sigma_u;
    j["sigma_z"] = config.sigma_z;
    j["delta"] = config.delta;
    j["T_grid"] = config.T_grid;
    j["trials_per_T"] = config.trials_per_T;
    j["master_seed"] = config.master_seed;
    if (config.beta_override.has_value()) {
        j["beta_override"] = *config.beta_override;
    } else {
        j["beta_override"] = nullptr;
    }
    j["output_path"] = config.output_path;
    j["allow_small_tau"] = config.allow_small_tau;
    return j.dump(2);
}

std::string summary_to_json(const std::vector<ExperimentSummary>& summary) {
    json out = json::array();
    for (const ExperimentSummary& s : summary) {
        json j;
        j["T"] = s.T;
        // NaN (no ok trials) serializes as null.
        j["mean_order"] = std::isnan(s.mean_order) ? json() : json(s.mean_order);
        j["median_markov_cab_error"] =
            std::isnan(s.median_markov_cab_error) ? json() : json(s.median_markov_cab_error);
        j["median_oracle_cab_error"] =
            std::isnan(s.median_oracle_cab_error) ? json() : json(s.median_oracle_cab_error);
        j["median_hankel_fro_error"] =
            std::isnan(s.median_hankel_fro_error) ? json() : json(s.median_hankel_fro_error);
        out.push_back(std::move(j));
    }
    return out.dump(2);
}

}  // namespace sysid
