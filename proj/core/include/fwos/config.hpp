#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fwos/problems.hpp"
#include "fwos/trainer.hpp"

namespace fwos {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// Value tree for the run-configuration files: TOML-style key/value pairs,
// nested tables ([a.b]), arrays of scalars, and arrays of tables ([[a.b]]).
class ConfigNode {
  public:
    using Array = std::vector<ConfigNode>;
    using Table = std::map<std::string, ConfigNode>;
    using Value = std::variant<std::monostate, bool, std::int64_t, double, std::string, Array, Table>;

    Value value;
    int line = 0;  // source line of the defining key, 0 if synthesized

    ConfigNode() = default;
    explicit ConfigNode(Value v, int ln = 0) : value(std::move(v)), line(ln) {}
    static ConfigNode table() { return ConfigNode(Table{}); }

    bool is_table() const { return std::holds_alternative<Table>(value); }
    bool is_array() const { return std::holds_alternative<Array>(value); }

    Table& as_table();
    const Table& as_table() const;
    const Array& as_array(const std::string& context) const;

    // Table lookup; nullptr when the key is absent.
    const ConfigNode* find(const std::string& key) const;

    bool get_bool(const std::string& key, bool fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t require_int(const std::string& key) const;
    double require_double(const std::string& key) const;
    std::string require_string(const std::string& key) const;
    std::vector<double> get_double_array(const std::string& key) const;  // empty if absent

    bool operator==(const ConfigNode& other) const;
};

ConfigNode parse_toml(const std::string& text);
ConfigNode parse_toml_file(const std::string& path);
std::string serialize_toml(const ConfigNode& root);

enum class Method { Fwos, Fnwos, Bfnwos };
Method method_from_name(const std::string& name);
std::string method_name(Method m);

// Fully resolved run description: benchmark + domain + method parameters +
// evaluation settings. Precedence: command-line flags > environment
// (FWOS_SEED, FWOS_WORKERS) > config file > defaults.
struct RunConfig {
    Method method = Method::Fwos;
    BenchmarkId benchmark;
    std::optional<Domain> custom_domain;
    std::optional<ConfigNode> domain_node;  // original [domain] description, re-embedded in summaries
    TrainPlan plan;

    int fwos_n_traj = 1000;
    int fwos_k_cap = 1000;
    double fwos_eps = 1e-4;

    int eval_points = 100000;
    std::string points_file;
    std::vector<long> n_list = {100, 1000, 10000};

    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = hardware parallelism
    std::string checkpoint_path;
    std::string label;
    bool long_running = false;

    static RunConfig from_node(const ConfigNode& root);
    static RunConfig load(const std::string& path);  // file, then environment overrides

    void apply_env_overrides();
    Problem build_problem() const;
    ConfigNode resolved_node() const;  // canonical view embedded into summaries
};

Domain parse_domain(const ConfigNode& node, int dimension);

}  // namespace fwos
