#include "regrowth/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "regrowth/error.hpp"

namespace regrowth {

namespace {

Eigen::MatrixXd default_transition() {
    Eigen::MatrixXd p(3, 3);
    p << 0.5, 0.4, 0.1, 0.25, 0.5, 0.25, 0.1, 0.4, 0.5;
    return p;
}

// A value is either a bare token or a bracketed list of values.
struct Value {
    std::variant<std::string, std::vector<Value>> data;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class ValueParser {
public:
    explicit ValueParser(std::string_view text) : text_(text) {}

    Value parse() {
        Value v = value();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing text");
        return v;
    }

private:
    Value value() {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '[') return list();
        const auto start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '[') ++pos_;
        const auto token = trim(text_.substr(start, pos_ - start));
        if (token.empty()) fail("missing value");
        return Value{std::string(token)};
    }

    Value list() {
        ++pos_;
        std::vector<Value> items;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            return Value{std::move(items)};
        }
        for (;;) {
            items.push_back(value());
            skip_space();
            if (pos_ >= text_.size()) fail("unterminated list");
            if (text_[pos_] == ']') {
                ++pos_;
                return Value{std::move(items)};
            }
            if (text_[pos_] != ',') fail("expected ',' or ']'");
            ++pos_;
        }
    }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& what) const { throw std::invalid_argument(what); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

const std::string& scalar(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v.data)) return *s;
    throw std::invalid_argument("expected a single value, found a list");
}

const std::vector<Value>& items(const Value& v) {
    if (const auto* l = std::get_if<std::vector<Value>>(&v.data)) return *l;
    throw std::invalid_argument("expected a bracketed list");
}

double to_double(const Value& v) {
    const std::string& s = scalar(v);
    double out = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(out)) {
        throw std::invalid_argument("'" + s + "' is not a finite number");
    }
    return out;
}

std::uint64_t to_unsigned(const Value& v) {
    const std::string& s = scalar(v);
    std::uint64_t out = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || end != s.data() + s.size()) {
        throw std::invalid_argument("'" + s + "' is not a non-negative integer");
    }
    return out;
}

bool to_bool(const Value& v) {
    const std::string& s = scalar(v);
    if (s == "true") return true;
    if (s == "false") return false;
    throw std::invalid_argument("'" + s + "' is not true or false");
}

std::vector<double> to_vector(const Value& v) {
    std::vector<double> out;
    for (const auto& item : items(v)) out.push_back(to_double(item));
    return out;
}

std::vector<std::string> to_words(const Value& v) {
    std::vector<std::string> out;
    for (const auto& item : items(v)) out.push_back(scalar(item));
    return out;
}

Eigen::MatrixXd to_matrix(const Value& v) {
    const auto& rows = items(v);
    if (rows.empty()) throw std::invalid_argument("matrix has no rows");
    std::vector<std::vector<double>> cells;
    for (const auto& row : rows) cells.push_back(to_vector(row));
    const std::size_t cols = cells.front().size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(cells.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].size() != cols) throw std::invalid_argument("matrix rows differ in length");
        for (std::size_t j = 0; j < cols; ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cells[i][j];
    }
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

using Setter = std::function<void(RunConfig&, const Value&)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
    static const std::map<std::string, std::map<std::string, Setter>> table{
        {"model",
         {
             {"beta", [](RunConfig& c, const Value& v) { c.model.beta = to_double(v); }},
             {"gamma", [](RunConfig& c, const Value& v) { c.model.gamma = to_double(v); }},
             {"sigma", [](RunConfig& c, const Value& v) { c.model.sigma = to_double(v); }},
             {"r", [](RunConfig& c, const Value& v) { c.model.r = to_double(v); }},
             {"omega", [](RunConfig& c, const Value& v) { c.model.omega = to_vector(v); }},
             {"transition", [](RunConfig& c, const Value& v) { c.model.transition = to_matrix(v); }},
             {"shock",
              [](RunConfig& c, const Value& v) {
                  c.model.shock = scalar(v);
                  require(c.model.shock == "lognormal" || c.model.shock == "discrete",
                          "shock must be lognormal or discrete");
              }},
             {"shock_mu", [](RunConfig& c, const Value& v) { c.model.shock_mu = to_double(v); }},
             {"shock_sigma", [](RunConfig& c, const Value& v) { c.model.shock_sigma = to_double(v); }},
             {"shock_points", [](RunConfig& c, const Value& v) { c.model.shock_points = to_vector(v); }},
             {"shock_weights", [](RunConfig& c, const Value& v) { c.model.shock_weights = to_vector(v); }},
             {"baseline_regime", [](RunConfig& c, const Value& v) { c.model.baseline_regime = to_unsigned(v); }},
         }},
        {"numerics",
         {
             {"x_max", [](RunConfig& c, const Value& v) { c.numerics.x_max = to_double(v); }},
             {"x_count", [](RunConfig& c, const Value& v) { c.numerics.x_count = to_unsigned(v); }},
             {"x_spacing",
              [](RunConfig& c, const Value& v) {
                  const std::string& s = scalar(v);
                  require(s == "linear" || s == "log", "x_spacing must be linear or log");
                  c.numerics.x_spacing = s == "linear" ? GridSpacing::Linear : GridSpacing::LogLinear;
              }},
             {"x_min", [](RunConfig& c, const Value& v) { c.numerics.x_min = to_double(v); }},
             {"y_count", [](RunConfig& c, const Value& v) { c.numerics.y_count = to_unsigned(v); }},
             {"refine", [](RunConfig& c, const Value& v) { c.numerics.refine = to_bool(v); }},
             {"quad_intervals", [](RunConfig& c, const Value& v) { c.numerics.quad_intervals = to_unsigned(v); }},
             {"quad_epsilon", [](RunConfig& c, const Value& v) { c.numerics.quad_epsilon = to_double(v); }},
             {"max_iters",
              [](RunConfig& c, const Value& v) {
                  const auto n = to_unsigned(v);
                  require(n >= 1 && n <= 1000000, "max_iters must lie in [1, 1000000]");
                  c.numerics.max_iters = static_cast<int>(n);
              }},
             {"tol_w", [](RunConfig& c, const Value& v) { c.numerics.tol_w = to_double(v); }},
         }},
        {"simulation",
         {
             {"T", [](RunConfig& c, const Value& v) { c.simulation.T = to_unsigned(v); }},
             {"burn_in", [](RunConfig& c, const Value& v) { c.simulation.burn_in = to_unsigned(v); }},
             {"seed", [](RunConfig& c, const Value& v) { c.simulation.seed = to_unsigned(v); }},
             {"x0", [](RunConfig& c, const Value& v) { c.simulation.x0 = to_double(v); }},
             {"theta0", [](RunConfig& c, const Value& v) { c.simulation.theta0 = to_unsigned(v); }},
             {"bins", [](RunConfig& c, const Value& v) { c.simulation.bins = to_unsigned(v); }},
             {"write_path", [](RunConfig& c, const Value& v) { c.simulation.write_path = to_bool(v); }},
         }},
        {"output",
         {
             {"directory", [](RunConfig& c, const Value& v) { c.output.directory = scalar(v); }},
             {"formats",
              [](RunConfig& c, const Value& v) {
                  c.output.formats = to_words(v);
                  for (const auto& f : c.output.formats) require(f == "csv" || f == "svg", "formats are csv and svg");
              }},
         }},
    };
    return table;
}

int bracket_depth(std::string_view s) {
    int depth = 0;
    for (char ch : s) {
        if (ch == '[') ++depth;
        if (ch == ']') --depth;
    }
    return depth;
}

void config_error(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ConfigError, where + ": " + what);
}

std::string list_text(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_number(v[i]);
    }
    return out + "]";
}

std::string model_text(const RunConfig& c) {
    std::ostringstream os;
    const auto& m = c.model;
    os << "[model]\n";
    os << "beta = " << format_number(m.beta) << "\n";
    os << "gamma = " << format_number(m.gamma) << "\n";
    os << "sigma = " << format_number(m.sigma) << "\n";
    os << "r = " << format_number(m.r) << "\n";
    os << "omega = " << list_text(m.omega) << "\n";
    os << "transition = [";
    for (Eigen::Index i = 0; i < m.transition.rows(); ++i) {
        std::vector<double> row;
        for (Eigen::Index j = 0; j < m.transition.cols(); ++j) row.push_back(m.transition(i, j));
        os << (i ? ", " : "") << list_text(row);
    }
    os << "]\n";
    os << "shock = " << m.shock << "\n";
    os << "shock_mu = " << format_number(m.shock_mu) << "\n";
    os << "shock_sigma = " << format_number(m.shock_sigma) << "\n";
    os << "shock_points = " << list_text(m.shock_points) << "\n";
    os << "shock_weights = " << list_text(m.shock_weights) << "\n";
    os << "baseline_regime = " << m.baseline_regime << "\n";
    return os.str();
}

std::string numerics_text(const RunConfig& c) {
    std::ostringstream os;
    const auto& n = c.numerics;
    os << "[numerics]\n";
    os << "x_max = " << format_number(n.x_max) << "\n";
    os << "x_count = " << n.x_count << "\n";
    os << "x_spacing = " << (n.x_spacing == GridSpacing::Linear ? "linear" : "log") << "\n";
    os << "x_min = " << format_number(n.x_min) << "\n";
    os << "y_count = " << n.y_count << "\n";
    os << "refine = " << (n.refine ? "true" : "false") << "\n";
    os << "quad_intervals = " << n.quad_intervals << "\n";
    os << "quad_epsilon = " << format_number(n.quad_epsilon) << "\n";
    os << "max_iters = " << n.max_iters << "\n";
    os << "tol_w = " << format_number(n.tol_w) << "\n";
    return os.str();
}

std::string fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

ModelBlock::ModelBlock() : transition(default_transition()) {}

bool OutputBlock::wants(std::string_view format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

ModelSpec RunConfig::model_spec() const {
    ShockModel shock = model.shock == "lognormal"
                           ? ShockModel::lognormal(model.shock_mu, model.shock_sigma)
                           : ShockModel(DiscreteShock{model.shock_points, model.shock_weights});
    return ModelSpec(model.beta, model.gamma, model.sigma, model.r, model.omega, RegimeChain(model.transition),
                     std::move(shock));
}

ModelSpec RunConfig::baseline_spec() const {
    if (model.baseline_regime == 0) throw Error(ErrorCode::ConfigError, "model.baseline_regime: no baseline requested");
    return model_spec().eternal(model.baseline_regime - 1);
}

IncomeGrid RunConfig::grid() const {
    return numerics.x_spacing == GridSpacing::Linear
               ? IncomeGrid::linear(numerics.x_max, numerics.x_count)
               : IncomeGrid::log_linear(numerics.x_max, numerics.x_count, numerics.x_min);
}

InvestmentSearch RunConfig::search() const { return {numerics.y_count, numerics.refine}; }

QuadratureRule RunConfig::rule() const {
    return {static_cast<int>(numerics.quad_intervals), numerics.quad_epsilon};
}

StopRule RunConfig::stop() const { return {numerics.max_iters, numerics.tol_w}; }

SimulationConfig RunConfig::simulation_config() const {
    return {simulation.T, simulation.burn_in, simulation.seed, simulation.x0, simulation.theta0 - 1};
}

void RunConfig::validate() const {
    const auto check = [](const char* where, const auto& build) {
        try {
            build();
        } catch (const Error& e) {
            config_error(where, e.what());
        }
    };
    check("model", [&] { model_spec(); });
    check("model.baseline_regime", [&] {
        if (model.baseline_regime > model.omega.size()) {
            throw Error(ErrorCode::DomainError, "names a regime that does not exist");
        }
        if (model.baseline_regime > 0) baseline_spec();
    });
    check("numerics", [&] {
        if (numerics.x_count < 3) throw Error(ErrorCode::DomainError, "x_count must be at least 3");
        if (numerics.y_count < 2) throw Error(ErrorCode::DomainError, "y_count must be at least 2");
        if (!(numerics.tol_w >= 0.0)) throw Error(ErrorCode::DomainError, "tol_w must be >= 0");
        if (numerics.quad_intervals < 1 || numerics.quad_intervals > 100000) {
            throw Error(ErrorCode::DomainError, "quad_intervals must lie in [1, 100000]");
        }
        grid();
        rule().validate();
    });
    check("simulation", [&] {
        if (simulation.theta0 < 1) throw Error(ErrorCode::DomainError, "theta0 is 1-based");
        if (simulation.bins < 1) throw Error(ErrorCode::DomainError, "bins must be positive");
        simulation_config().validate(model.omega.size());
    });
    if (output.directory.empty()) config_error("output.directory", "must not be empty");
}

RunConfig parse_config(std::string_view text, const std::string& source) {
    RunConfig config;
    std::string block;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t start_line = line_no;
        const auto where = [&] { return source + ":" + std::to_string(start_line); };
        std::string content(trim(std::string_view(line).substr(0, line.find('#'))));
        if (content.empty()) continue;

        if (content.front() == '[' && content.find('=') == std::string::npos) {
            if (content.back() != ']') config_error(where(), "malformed block header");
            block = std::string(trim(std::string_view(content).substr(1, content.size() - 2)));
            if (!setters().count(block)) config_error(where(), "unknown block [" + block + "]");
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) config_error(where(), "expected key = value");
        if (block.empty()) config_error(where(), "entry outside of any block");
        const std::string key(trim(std::string_view(content).substr(0, eq)));
        std::string raw(trim(std::string_view(content).substr(eq + 1)));
        while (bracket_depth(raw) > 0 && std::getline(in, line)) {
            ++line_no;
            raw += " ";
            raw += trim(std::string_view(line).substr(0, line.find('#')));
        }

        const auto& keys = setters().at(block);
        const auto setter = keys.find(key);
        if (setter == keys.end()) config_error(where(), "unknown key '" + key + "' in [" + block + "]");
        if (!seen.insert(block + "." + key).second) config_error(where(), "duplicate key '" + key + "'");
        try {
            setter->second(config, ValueParser(raw).parse());
        } catch (const std::invalid_argument& e) {
            config_error(where(), block + "." + key + ": " + e.what());
        }
    }
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

std::string format_number(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc() ? end : buf);
}

std::string canonical_text(const RunConfig& c) {
    std::ostringstream os;
    os << model_text(c) << "\n" << numerics_text(c) << "\n";
    const auto& s = c.simulation;
    os << "[simulation]\n";
    os << "T = " << s.T << "\n";
    os << "burn_in = " << s.burn_in << "\n";
    os << "seed = " << s.seed << "\n";
    os << "x0 = " << format_number(s.x0) << "\n";
    os << "theta0 = " << s.theta0 << "\n";
    os << "bins = " << s.bins << "\n";
    os << "write_path = " << (s.write_path ? "true" : "false") << "\n\n";
    os << "[output]\n";
    os << "directory = " << c.output.directory << "\n";
    os << "formats = [";
    for (std::size_t i = 0; i < c.output.formats.size(); ++i) os << (i ? ", " : "") << c.output.formats[i];
    os << "]\n";
    return os.str();
}

std::string config_hash(const RunConfig& config) { return fnv1a(canonical_text(config)); }

std::string solve_hash(const RunConfig& config) { return fnv1a(model_text(config) + numerics_text(config)); }

}  // namespace regrowth
