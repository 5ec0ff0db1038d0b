#include "fwos/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fwos {

ConfigNode::Table& ConfigNode::as_table() {
    if (!is_table()) throw ConfigError("expected a table", line);
    return std::get<Table>(value);
}

const ConfigNode::Table& ConfigNode::as_table() const {
    if (!is_table()) throw ConfigError("expected a table", line);
    return std::get<Table>(value);
}

const ConfigNode::Array& ConfigNode::as_array(const std::string& context) const {
    if (!is_array()) throw ConfigError(context + ": expected an array", line);
    return std::get<Array>(value);
}

const ConfigNode* ConfigNode::find(const std::string& key) const {
    if (!is_table()) return nullptr;
    const auto& t = std::get<Table>(value);
    const auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second;
}

namespace {

template <typename T>
const T* value_as(const ConfigNode& n) {
    return std::get_if<T>(&n.value);
}

[[noreturn]] void type_error(const std::string& key, const char* want, const ConfigNode& n) {
    throw ConfigError("key '" + key + "' must be " + want, n.line);
}

}  // namespace

bool ConfigNode::get_bool(const std::string& key, bool fallback) const {
    const ConfigNode* n = find(key);
    if (n == nullptr) return fallback;
    if (const bool* b = value_as<bool>(*n)) return *b;
    type_error(key, "a boolean", *n);
}

std::int64_t ConfigNode::get_int(const std::string& key, std::int64_t fallback) const {
    const ConfigNode* n = find(key);
    if (n == nullptr) return fallback;
    if (const auto* i = value_as<std::int64_t>(*n)) return *i;
    type_error(key, "an integer", *n);
}

double ConfigNode::get_double(const std::string& key, double fallback) const {
    const ConfigNode* n = find(key);
    if (n == nullptr) return fallback;
    if (const auto* d = value_as<double>(*n)) return *d;
    if (const auto* i = value_as<std::int64_t>(*n)) return static_cast<double>(*i);
    type_error(key, "a number", *n);
}

std::string ConfigNode::get_string(const std::string& key, const std::string& fallback) const {
    const ConfigNode* n = find(key);
    if (n == nullptr) return fallback;
    if (const auto* s = value_as<std::string>(*n)) return *s;
    type_error(key, "a string", *n);
}

std::int64_t ConfigNode::require_int(const std::string& key) const {
    const ConfigNode* n = find(key);
    if (n == nullptr) throw ConfigError("missing required key '" + key + "'", line);
    if (const auto* i = value_as<std::int64_t>(*n)) return *i;
    type_error(key, "an integer", *n);
}

double ConfigNode::require_double(const std::string& key) const {
    const ConfigNode* n = find(key);
    if (n == nullptr) throw ConfigError("missing required key '" + key + "'", line);
    if (const auto* d = value_as<double>(*n)) return *d;
    if (const auto* i = value_as<std::int64_t>(*n)) return static_cast<double>(*i);
    type_error(key, "a number", *n);
}

std::string ConfigNode::require_string(const std::string& key) const {
    const ConfigNode* n = find(key);
    if (n == nullptr) throw ConfigError("missing required key '" + key + "'", line);
    if (const auto* s = value_as<std::string>(*n)) return *s;
    type_error(key, "a string", *n);
}

std::vector<double> ConfigNode::get_double_array(const std::string& key) const {
    const ConfigNode* n = find(key);
    if (n == nullptr) return {};
    std::vector<double> out;
    for (const auto& e : n->as_array(key)) {
        if (const auto* d = value_as<double>(e))
            out.push_back(*d);
        else if (const auto* i = value_as<std::int64_t>(e))
            out.push_back(static_cast<double>(*i));
        else
            throw ConfigError("key '" + key + "' must be an array of numbers", e.line);
    }
    return out;
}

bool ConfigNode::operator==(const ConfigNode& other) const { return value == other.value; }

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    std::istringstream in;
    int line_no = 0;
    ConfigNode root = ConfigNode::table();
    ConfigNode* current = nullptr;

    explicit Parser(const std::string& text) : in(text) { current = &root; }

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(msg, line_no); }

    static std::string trim(const std::string& s) {
        size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        size_t e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    // Strips a trailing comment, respecting quoted strings.
    static std::string strip_comment(const std::string& s) {
        bool in_str = false;
        for (size_t i = 0; i < s.size(); ++i) {
            const char c = s[i];
            if (c == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
            if (c == '#' && !in_str) return s.substr(0, i);
        }
        return s;
    }

    static bool valid_key(const std::string& k) {
        if (k.empty()) return false;
        for (char c : k)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
        return true;
    }

    std::vector<std::string> split_path(const std::string& path) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : path) {
            if (c == '.') {
                if (!valid_key(cur)) fail("bad table name '" + path + "'");
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!valid_key(cur)) fail("bad table name '" + path + "'");
        parts.push_back(cur);
        return parts;
    }

    ConfigNode* descend(const std::vector<std::string>& parts, bool array_of_tables) {
        ConfigNode* node = &root;
        for (size_t i = 0; i < parts.size(); ++i) {
            const bool last = (i + 1 == parts.size());
            auto& table = node->as_table();
            auto [it, inserted] = table.try_emplace(parts[i], ConfigNode::table());
            if (inserted) it->second.line = line_no;
            ConfigNode* next = &it->second;
            if (last && array_of_tables) {
                if (inserted) next->value = ConfigNode::Array{};
                if (!next->is_array()) fail("'" + parts[i] + "' is not an array of tables");
                auto& arr = std::get<ConfigNode::Array>(next->value);
                arr.push_back(ConfigNode::table());
                arr.back().line = line_no;
                return &arr.back();
            }
            if (next->is_array()) {
                // Navigating through an array of tables targets its last entry.
                auto& arr = std::get<ConfigNode::Array>(next->value);
                if (arr.empty() || !arr.back().is_table()) fail("'" + parts[i] + "' is not a table");
                next = &arr.back();
            }
            if (!next->is_table()) fail("'" + parts[i] + "' is not a table");
            node = next;
        }
        return node;
    }

    ConfigNode parse_value(std::string text) {
        text = trim(text);
        if (text.empty()) fail("missing value");
        if (text.front() == '"') {
            if (text.size() < 2 || text.back() != '"') fail("unterminated string");
            std::string out;
            for (size_t i = 1; i + 1 < text.size(); ++i) {
                char c = text[i];
                if (c == '\\' && i + 2 < text.size()) {
                    const char n = text[++i];
                    switch (n) {
                        case 'n': out += '\n'; break;
                        case 't': out += '\t'; break;
                        case '"': out += '"'; break;
                        case '\\': out += '\\'; break;
                        default: fail(std::string("unsupported escape '\\") + n + "'");
                    }
                } else {
                    out += c;
                }
            }
            return ConfigNode(out, line_no);
        }
        if (text == "true") return ConfigNode(true, line_no);
        if (text == "false") return ConfigNode(false, line_no);
        if (text.front() == '[') {
            if (text.back() != ']') fail("unterminated array");
            ConfigNode::Array arr;
            std::string inner = text.substr(1, text.size() - 2);
            std::string cur;
            int depth = 0;
            bool in_str = false;
            for (char c : inner) {
                if (c == '"') in_str = !in_str;
                if (!in_str) {
                    if (c == '[') ++depth;
                    if (c == ']') --depth;
                    if (c == ',' && depth == 0) {
                        if (!trim(cur).empty()) arr.push_back(parse_value(cur));
                        cur.clear();
                        continue;
                    }
                }
                cur += c;
            }
            if (!trim(cur).empty()) arr.push_back(parse_value(cur));
            return ConfigNode(std::move(arr), line_no);
        }
        // Number: integer when it looks like one, double otherwise.
        const bool looks_float = text.find_first_of(".eE") != std::string::npos;
        errno = 0;
        char* end = nullptr;
        if (!looks_float) {
            const long long v = std::strtoll(text.c_str(), &end, 10);
            if (end != nullptr && *end == '\0' && errno == 0)
                return ConfigNode(static_cast<std::int64_t>(v), line_no);
        }
        errno = 0;
        const double d = std::strtod(text.c_str(), &end);
        if (end == nullptr || *end != '\0' || end == text.c_str()) fail("cannot parse value '" + text + "'");
        return ConfigNode(d, line_no);
    }

    void run() {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            const std::string s = trim(strip_comment(raw));
            if (s.empty()) continue;
            if (s.front() == '[') {
                const bool aot = s.size() > 1 && s[1] == '[';
                const std::string close = aot ? "]]" : "]";
                if (s.substr(s.size() - close.size()) != close) fail("unterminated table header");
                const std::string path = trim(s.substr(aot ? 2 : 1, s.size() - 2 * (aot ? 2 : 1)));
                current = descend(split_path(path), aot);
                continue;
            }
            const size_t eq = s.find('=');
            if (eq == std::string::npos) fail("expected 'key = value'");
            const std::string key = trim(s.substr(0, eq));
            if (!valid_key(key)) fail("bad key '" + key + "'");
            auto& table = current->as_table();
            if (table.contains(key)) fail("duplicate key '" + key + "'");
            table.emplace(key, parse_value(s.substr(eq + 1)));
        }
    }
};

}  // namespace

ConfigNode parse_toml(const std::string& text) {
    Parser p(text);
    p.run();
    return std::move(p.root);
}

ConfigNode parse_toml_file(const std::string& path) {
    std::ifstream ifs(path);
    if (!ifs) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << ifs.rdbuf();
    return parse_toml(ss.str());
}

// ---------------------------------------------------------------------------
// Serializer (canonical: sorted keys, scalars before subtables)
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double d) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos && s.find_first_of("in") == std::string::npos) s += ".0";
    return s;
}

std::string format_scalar(const ConfigNode& n);

std::string format_array(const ConfigNode::Array& arr) {
    std::string out = "[";
    for (size_t i = 0; i < arr.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_scalar(arr[i]);
    }
    out += "]";
    return out;
}

std::string format_scalar(const ConfigNode& n) {
    if (const auto* b = std::get_if<bool>(&n.value)) return *b ? "true" : "false";
    if (const auto* i = std::get_if<std::int64_t>(&n.value)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&n.value)) return format_double(*d);
    if (const auto* s = std::get_if<std::string>(&n.value)) {
        std::string out = "\"";
        for (char c : *s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                default: out += c;
            }
        }
        out += "\"";
        return out;
    }
    if (const auto* a = std::get_if<ConfigNode::Array>(&n.value)) return format_array(*a);
    throw ConfigError("cannot serialize value");
}

bool is_array_of_tables(const ConfigNode& n) {
    const auto* a = std::get_if<ConfigNode::Array>(&n.value);
    if (a == nullptr || a->empty()) return false;
    for (const auto& e : *a)
        if (!e.is_table()) return false;
    return true;
}

void emit_table(const ConfigNode& table, const std::string& prefix, std::string& out) {
    const auto& t = table.as_table();
    for (const auto& [key, val] : t) {
        if (val.is_table() || is_array_of_tables(val)) continue;
        out += key + " = " + format_scalar(val) + "\n";
    }
    for (const auto& [key, val] : t) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (val.is_table()) {
            out += "\n[" + path + "]\n";
            emit_table(val, path, out);
        } else if (is_array_of_tables(val)) {
            for (const auto& e : std::get<ConfigNode::Array>(val.value)) {
                out += "\n[[" + path + "]]\n";
                emit_table(e, path, out);
            }
        }
    }
}

}  // namespace

std::string serialize_toml(const ConfigNode& root) {
    if (!root.is_table()) throw ConfigError("top-level config must be a table");
    std::string out;
    emit_table(root, "", out);
    return out;
}

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

Method method_from_name(const std::string& name) {
    if (name == "fwos") return Method::Fwos;
    if (name == "fnwos") return Method::Fnwos;
    if (name == "bfnwos") return Method::Bfnwos;
    throw ConfigError("unknown method '" + name + "' (expected fwos | fnwos | bfnwos)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Fwos: return "fwos";
        case Method::Fnwos: return "fnwos";
        case Method::Bfnwos: return "bfnwos";
    }
    return "?";
}

namespace {

Vec node_to_vec(const ConfigNode& parent, const std::string& key, int dim) {
    const std::vector<double> vals = parent.get_double_array(key);
    if (vals.empty()) return Vec::Zero(dim);
    if (static_cast<int>(vals.size()) != dim)
        throw ConfigError("key '" + key + "' must have exactly " + std::to_string(dim) + " components",
                          parent.find(key)->line);
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = vals[i];
    return v;
}

}  // namespace

Domain parse_domain(const ConfigNode& node, int dimension) {
    const std::string kind = node.require_string("kind");
    if (kind == "ball") {
        const double radius = node.get_double("radius", 1.0);
        return Domain::ball(node_to_vec(node, "center", dimension), radius);
    }
    if (kind == "box") {
        const ConfigNode* lo = node.find("lo");
        const ConfigNode* hi = node.find("hi");
        if (lo == nullptr && hi == nullptr) return Domain::unit_cube(dimension);
        Vec vlo = node_to_vec(node, "lo", dimension);
        Vec vhi = hi != nullptr ? node_to_vec(node, "hi", dimension) : Vec(Vec::Ones(dimension));
        return Domain::hypercube(std::move(vlo), std::move(vhi));
    }
    if (kind == "union" || kind == "intersect") {
        const ConfigNode* children = node.find("children");
        if (children == nullptr) throw ConfigError("composite domain needs [[...children]] tables", node.line);
        std::vector<Domain> parts;
        for (const auto& c : children->as_array("children")) parts.push_back(parse_domain(c, dimension));
        return kind == "union" ? Domain::join(std::move(parts)) : Domain::meet(std::move(parts));
    }
    if (kind == "difference") {
        const ConfigNode* base = node.find("base");
        const ConfigNode* cut = node.find("cut");
        if (base == nullptr || cut == nullptr)
            throw ConfigError("difference domain needs [ ...base] and [...cut] tables", node.line);
        return Domain::carve(parse_domain(*base, dimension), parse_domain(*cut, dimension));
    }
    if (kind == "complement") {
        const ConfigNode* inner = node.find("inner");
        if (inner == nullptr) throw ConfigError("complement domain needs an [...inner] table", node.line);
        return Domain::complement(parse_domain(*inner, dimension));
    }
    if (kind == "blob") return blob_domain(dimension);
    if (kind == "shell") return shell_domain(dimension);
    throw ConfigError("unknown domain kind '" + kind + "'", node.line);
}

RunConfig RunConfig::from_node(const ConfigNode& root) {
    RunConfig cfg;
    const ConfigNode* run = root.find("run");
    if (run == nullptr) throw ConfigError("missing [run] section");
    cfg.method = method_from_name(run->require_string("method"));
    cfg.seed = static_cast<std::uint64_t>(run->get_int("seed", 0));
    cfg.out_dir = run->get_string("out", "out");
    cfg.workers = static_cast<int>(run->get_int("workers", 0));
    cfg.label = run->get_string("label", "");
    cfg.long_running = run->get_bool("long_running", false);

    const ConfigNode* prob = root.find("problem");
    if (prob == nullptr) throw ConfigError("missing [problem] section");
    cfg.benchmark.kind = benchmark_from_name(prob->require_string("benchmark"));
    cfg.benchmark.dimension = static_cast<int>(prob->require_int("dimension"));
    cfg.benchmark.alpha = prob->require_double("alpha");
    cfg.benchmark.n_max = static_cast<int>(prob->get_int("n_max", cfg.benchmark.n_max));
    cfg.benchmark.l_max = static_cast<int>(prob->get_int("l_max", cfg.benchmark.l_max));
    if (cfg.benchmark.dimension < 1) throw ConfigError("[problem] dimension must be positive", prob->line);
    if (!(cfg.benchmark.alpha > 0.0) || !(cfg.benchmark.alpha < 2.0))
        throw ConfigError("[problem] alpha must lie in (0,2)", prob->line);
    if (!(static_cast<double>(cfg.benchmark.dimension) > cfg.benchmark.alpha))
        throw ConfigError("[problem] requires dimension > alpha", prob->line);

    if (const ConfigNode* dom = root.find("domain")) {
        cfg.custom_domain = parse_domain(*dom, cfg.benchmark.dimension);
        cfg.domain_node = *dom;
    }

    if (const ConfigNode* fw = root.find("fwos")) {
        cfg.fwos_n_traj = static_cast<int>(fw->get_int("trajectories", cfg.fwos_n_traj));
        cfg.fwos_k_cap = static_cast<int>(fw->get_int("k_cap", cfg.fwos_k_cap));
        cfg.fwos_eps = fw->get_double("eps", cfg.fwos_eps);
        if (cfg.fwos_n_traj < 1) throw ConfigError("[fwos] trajectories must be positive", fw->line);
        if (cfg.fwos_k_cap < 1) throw ConfigError("[fwos] k_cap must be positive", fw->line);
        if (!(cfg.fwos_eps > 0.0)) throw ConfigError("[fwos] eps must be positive", fw->line);
    }

    TrainPlan& p = cfg.plan;
    if (const ConfigNode* tr = root.find("train")) {
        p.iterations = tr->get_int("iterations", p.iterations);
        p.warmup = tr->get_int("warmup", p.warmup);
        p.refresh_interval = tr->get_int("refresh_interval", p.refresh_interval);
        p.m = static_cast<int>(tr->get_int("m", p.m));
        p.p_boundary = tr->get_double("p_boundary", p.p_boundary);
        p.p_refine = tr->get_double("p_refine", p.p_refine);
        p.n_traj = static_cast<int>(tr->get_int("n_traj", p.n_traj));
        p.n_traj_init = static_cast<int>(tr->get_int("n_traj_init", p.n_traj_init));
        p.k_cap = static_cast<int>(tr->get_int("k_cap", p.k_cap));
        p.k_cap_init = static_cast<int>(tr->get_int("k_cap_init", p.k_cap_init));
        p.eps = tr->get_double("eps", p.eps);
        p.beta = tr->get_double("beta", p.beta);
        p.boundary_pool_factor = static_cast<int>(tr->get_int("boundary_pool_factor", p.boundary_pool_factor));
    }
    if (const ConfigNode* net = root.find("net")) {
        p.width = static_cast<int>(net->get_int("width", p.width));
        p.depth = static_cast<int>(net->get_int("depth", p.depth));
        p.base_lr = net->get_double("base_lr", p.base_lr);
    }
    p.seed = cfg.seed;

    if (const ConfigNode* ev = root.find("eval")) {
        cfg.eval_points = static_cast<int>(ev->get_int("n_points", cfg.eval_points));
        cfg.points_file = ev->get_string("points_file", "");
        cfg.checkpoint_path = ev->get_string("checkpoint", "");
        if (cfg.eval_points < 1) throw ConfigError("[eval] n_points must be positive", ev->line);
    }
    if (const ConfigNode* cv = root.find("convergence")) {
        const std::vector<double> ns = cv->get_double_array("n_list");
        if (!ns.empty()) {
            cfg.n_list.clear();
            for (double v : ns) cfg.n_list.push_back(static_cast<long>(v));
        }
    }

    if (cfg.method != Method::Fwos) p.validate();
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    RunConfig cfg = from_node(parse_toml_file(path));
    cfg.apply_env_overrides();
    return cfg;
}

void RunConfig::apply_env_overrides() {
    if (const char* s = std::getenv("FWOS_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(s, &end, 10);
        if (end == s || *end != '\0') throw ConfigError("FWOS_SEED must be an unsigned integer");
        seed = static_cast<std::uint64_t>(v);
        plan.seed = seed;
    }
    if (const char* s = std::getenv("FWOS_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end == s || *end != '\0' || v < 0) throw ConfigError("FWOS_WORKERS must be a non-negative integer");
        workers = static_cast<int>(v);
    }
}

Problem RunConfig::build_problem() const {
    if (custom_domain.has_value()) return make_problem(benchmark, *custom_domain);
    return make_problem(benchmark);
}

namespace {

ConfigNode scalar(std::int64_t v) { return ConfigNode(v); }
ConfigNode scalar(double v) { return ConfigNode(v); }
ConfigNode scalar(const std::string& v) { return ConfigNode(v); }
ConfigNode scalar(bool v) { return ConfigNode(v); }

}  // namespace

ConfigNode RunConfig::resolved_node() const {
    ConfigNode root = ConfigNode::table();
    auto& t = root.as_table();

    ConfigNode run = ConfigNode::table();
    run.as_table()["method"] = scalar(method_name(method));
    run.as_table()["seed"] = scalar(static_cast<std::int64_t>(seed));
    run.as_table()["out"] = scalar(out_dir);
    run.as_table()["workers"] = scalar(static_cast<std::int64_t>(workers));
    if (!label.empty()) run.as_table()["label"] = scalar(label);
    run.as_table()["long_running"] = scalar(long_running);
    t["run"] = std::move(run);

    ConfigNode prob = ConfigNode::table();
    prob.as_table()["benchmark"] = scalar(benchmark_name(benchmark.kind));
    prob.as_table()["dimension"] = scalar(static_cast<std::int64_t>(benchmark.dimension));
    prob.as_table()["alpha"] = scalar(benchmark.alpha);
    if (benchmark.kind == BenchmarkKind::DiskIndicator) {
        prob.as_table()["n_max"] = scalar(static_cast<std::int64_t>(benchmark.n_max));
        prob.as_table()["l_max"] = scalar(static_cast<std::int64_t>(benchmark.l_max));
    }
    t["problem"] = std::move(prob);

    if (domain_node.has_value()) t["domain"] = *domain_node;

    ConfigNode fw = ConfigNode::table();
    fw.as_table()["trajectories"] = scalar(static_cast<std::int64_t>(fwos_n_traj));
    fw.as_table()["k_cap"] = scalar(static_cast<std::int64_t>(fwos_k_cap));
    fw.as_table()["eps"] = scalar(fwos_eps);
    t["fwos"] = std::move(fw);

    ConfigNode tr = ConfigNode::table();
    tr.as_table()["iterations"] = scalar(static_cast<std::int64_t>(plan.iterations));
    tr.as_table()["warmup"] = scalar(static_cast<std::int64_t>(plan.warmup));
    tr.as_table()["refresh_interval"] = scalar(static_cast<std::int64_t>(plan.refresh_interval));
    tr.as_table()["m"] = scalar(static_cast<std::int64_t>(plan.m));
    tr.as_table()["p_boundary"] = scalar(plan.p_boundary);
    tr.as_table()["p_refine"] = scalar(plan.p_refine);
    tr.as_table()["n_traj"] = scalar(static_cast<std::int64_t>(plan.n_traj));
    tr.as_table()["n_traj_init"] = scalar(static_cast<std::int64_t>(plan.n_traj_init));
    tr.as_table()["k_cap"] = scalar(static_cast<std::int64_t>(plan.k_cap));
    tr.as_table()["k_cap_init"] = scalar(static_cast<std::int64_t>(plan.k_cap_init));
    tr.as_table()["eps"] = scalar(plan.eps);
    tr.as_table()["beta"] = scalar(plan.beta);
    tr.as_table()["boundary_pool_factor"] = scalar(static_cast<std::int64_t>(plan.boundary_pool_factor));
    t["train"] = std::move(tr);

    ConfigNode net = ConfigNode::table();
    net.as_table()["width"] = scalar(static_cast<std::int64_t>(plan.width));
    net.as_table()["depth"] = scalar(static_cast<std::int64_t>(plan.depth));
    net.as_table()["base_lr"] = scalar(plan.base_lr);
    t["net"] = std::move(net);

    ConfigNode ev = ConfigNode::table();
    ev.as_table()["n_points"] = scalar(static_cast<std::int64_t>(eval_points));
    if (!points_file.empty()) ev.as_table()["points_file"] = scalar(points_file);
    if (!checkpoint_path.empty()) ev.as_table()["checkpoint"] = scalar(checkpoint_path);
    t["eval"] = std::move(ev);

    ConfigNode cv = ConfigNode::table();
    ConfigNode::Array ns;
    for (long n : n_list) ns.push_back(ConfigNode(static_cast<std::int64_t>(n)));
    cv.as_table()["n_list"] = ConfigNode(std::move(ns));
    t["convergence"] = std::move(cv);

    return root;
}

}  // namespace fwos
