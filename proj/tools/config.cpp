#include "config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "pum/version.hpp"

namespace pumrun {

// ============================================================================
// TOML-subset parser
// ============================================================================

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// strip a trailing comment that is not inside a string
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

ConfigValue parse_value(const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (v.empty()) throw ConfigError("line " + std::to_string(line) + ": missing value");
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw ConfigError("line " + std::to_string(line) + ": unterminated string");
        return v.substr(1, v.size() - 2);
    }
    if (v.front() == '[') {
        if (v.back() != ']')
            throw ConfigError("line " + std::to_string(line) + ": unterminated array");
        std::vector<double> arr;
        std::stringstream ss(v.substr(1, v.size() - 2));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            size_t used = 0;
            double d = std::stod(item, &used);
            if (used != item.size())
                throw ConfigError("line " + std::to_string(line) + ": bad array entry '" + item +
                                  "'");
            arr.push_back(d);
        }
        return arr;
    }
    try {
        size_t used = 0;
        double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("line " + std::to_string(line) + ": cannot parse value '" + v + "'");
}

}  // namespace

ConfigTable parse_config_text(const std::string& text) {
    ConfigTable out;
    std::string section;  // "" = top level
    std::stringstream ss(text);
    std::string line;
    int ln = 0;
    while (std::getline(ss, line)) {
        ++ln;
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(ln) + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(ln) + ": empty section name");
            out[section];
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(ln) + ": expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(ln) + ": empty key");
        if (out[section].count(key))
            throw ConfigError("line " + std::to_string(ln) + ": duplicate key '" + key + "'");
        out[section][key] = parse_value(s.substr(eq + 1), ln);
    }
    return out;
}

ConfigTable parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ============================================================================
// Resolution with strict key checking
// ============================================================================

namespace {

class SectionReader {
  public:
    SectionReader(const ConfigTable& t, const std::string& section) : section_(section) {
        auto it = t.find(section);
        if (it != t.end()) kv_ = &it->second;
    }

    double num(const std::string& key, double dflt) {
        const ConfigValue* v = take(key);
        if (!v) return dflt;
        if (const double* d = std::get_if<double>(v)) return *d;
        throw ConfigError(where(key) + " must be a number");
    }
    int integer(const std::string& key, int dflt) {
        const double d = num(key, dflt);
        if (d != static_cast<int>(d)) throw ConfigError(where(key) + " must be an integer");
        return static_cast<int>(d);
    }
    std::string str(const std::string& key, const std::string& dflt) {
        const ConfigValue* v = take(key);
        if (!v) return dflt;
        if (const std::string* s = std::get_if<std::string>(v)) return *s;
        throw ConfigError(where(key) + " must be a string");
    }
    bool flag(const std::string& key, bool dflt) {
        const ConfigValue* v = take(key);
        if (!v) return dflt;
        if (const bool* b = std::get_if<bool>(v)) return *b;
        throw ConfigError(where(key) + " must be a boolean");
    }
    std::vector<double> array(const std::string& key, std::vector<double> dflt) {
        const ConfigValue* v = take(key);
        if (!v) return dflt;
        if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
        throw ConfigError(where(key) + " must be an array of numbers");
    }

    void finish() const {
        if (!kv_) return;
        for (const auto& [k, v] : *kv_)
            if (!used_.count(k))
                throw ConfigError("unknown key '" + k + "' in section [" + section_ + "]");
    }

  private:
    const ConfigValue* take(const std::string& key) {
        used_.insert(key);
        if (!kv_) return nullptr;
        auto it = kv_->find(key);
        return it == kv_->end() ? nullptr : &it->second;
    }
    std::string where(const std::string& key) const {
        return "[" + section_ + "] " + key;
    }
    const std::map<std::string, ConfigValue>* kv_ = nullptr;
    std::string section_;
    std::set<std::string> used_;
};

void check_enum(const std::string& what, const std::string& v,
                std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (v == a) return;
    throw ConfigError("unknown " + what + " '" + v + "'");
}

}  // namespace

ExperimentConfig resolve_config(const ConfigTable& table) {
    static const std::set<std::string> known_sections{
        "", "mesh", "field", "initial", "time", "stepper", "seminorm", "scan"};
    for (const auto& [name, _] : table)
        if (!known_sections.count(name))
            throw ConfigError("unknown section [" + name + "]");

    ExperimentConfig c;
    SectionReader top(table, "");
    c.experiment = top.str("experiment", "");
    check_enum("experiment", c.experiment,
               {"advect", "example16", "vcoords-scan", "seminorm-propagation", "residue-decay",
                "coupled"});
    c.out_dir = top.str("out", c.out_dir);
    c.seed = static_cast<unsigned>(top.integer("seed", 0));
    c.workers = top.integer("workers", 1);
    c.quiet = top.flag("quiet", false);
    top.finish();
    if (c.workers < 1) throw ConfigError("workers must be positive");

    SectionReader mesh(table, "mesh");
    c.mesh_file = mesh.str("file", "");
    c.generator = mesh.str("generator", c.generator);
    check_enum("mesh generator", c.generator, {"cartesian", "alternating", "hexagonal", "disc"});
    c.mesh_h = mesh.num("h", c.mesh_h);
    c.margin = mesh.integer("margin", c.margin);
    c.radius = mesh.num("radius", 0.0);
    c.refinements = mesh.integer("refinements", c.refinements);
    const auto dom = mesh.array("domain", {0, 0, 1, 1});
    mesh.finish();
    if (dom.size() != 4) throw ConfigError("[mesh] domain must be [x0, y0, x1, y1]");
    c.domain = pum::Box{{dom[0], dom[1]}, {dom[2], dom[3]}};
    if (!(c.mesh_h > 0.0)) throw ConfigError("[mesh] h must be positive");
    if (c.radius == 0.0) c.radius = c.mesh_h / 4;
    if (!(c.radius > 0.0)) throw ConfigError("[mesh] radius must be positive");
    if (c.margin < 0) throw ConfigError("[mesh] margin must be nonnegative");
    if (c.refinements < 0 || c.refinements > 8)
        throw ConfigError("[mesh] refinements must lie in [0, 8]");

    SectionReader field(table, "field");
    c.field = field.str("kind", c.field);
    check_enum("field kind", c.field, {"constant", "rotation", "shear", "rough"});
    c.bx = field.num("bx", c.bx);
    c.by = field.num("by", c.by);
    c.cx = field.num("cx", c.cx);
    c.cy = field.num("cy", c.cy);
    c.omega = field.num("omega", c.omega);
    c.rate = field.num("rate", c.rate);
    c.max_mode = field.integer("max_mode", c.max_mode);
    c.decay = field.num("decay", c.decay);
    c.amplitude = field.num("amplitude", c.amplitude);
    c.oscillate = field.num("oscillate", 0.0);
    field.finish();
    if (c.max_mode < 1) throw ConfigError("[field] max_mode must be positive");

    SectionReader init(table, "initial");
    c.initial = init.str("kind", c.initial);
    check_enum("initial profile", c.initial, {"bump", "cone"});
    c.icx = init.num("cx", c.icx);
    c.icy = init.num("cy", c.icy);
    c.iradius = init.num("radius", c.iradius);
    init.finish();
    if (!(c.iradius > 0.0)) throw ConfigError("[initial] radius must be positive");

    SectionReader time(table, "time");
    c.T = time.num("T", c.T);
    c.outputs = time.integer("outputs", c.outputs);
    time.finish();
    if (!(c.T > 0.0)) throw ConfigError("[time] T must be positive");
    if (c.outputs < 1) throw ConfigError("[time] outputs must be positive");

    SectionReader st(table, "stepper");
    const std::string method = st.str("method", "rk4");
    check_enum("stepper method", method, {"euler", "rk4"});
    c.stepper.method =
        method == "euler" ? pum::StepperSpec::Method::Euler : pum::StepperSpec::Method::RK4;
    c.stepper.cfl = st.num("cfl", c.stepper.cfl);
    c.stepper.fixed_dt = st.num("fixed_dt", 0.0);
    st.finish();
    if (!(c.stepper.cfl > 0.0) || c.stepper.cfl > 1.0)
        throw ConfigError("[stepper] cfl must lie in (0, 1]");

    SectionReader sn(table, "seminorm");
    c.seminorm.h0 = sn.num("h0", c.seminorm.h0);
    c.seminorm.p = sn.num("p", c.seminorm.p);
    c.seminorm.theta = sn.num("theta", c.seminorm.theta);
    c.seminorm.p_star = sn.num("p_star", c.seminorm.p_star);
    c.seminorm.h_count = sn.integer("h_count", c.seminorm.h_count);
    sn.finish();

    SectionReader scan(table, "scan");
    c.h_list = scan.array("h_list", {});
    c.s_list = scan.array("s_list", c.s_list);
    c.directions = scan.integer("directions", c.directions);
    scan.finish();
    for (double h : c.h_list)
        if (!(h > 0.0)) throw ConfigError("[scan] h_list entries must be positive");
    for (double s : c.s_list)
        if (!(s > 0.0 && s < 1.0)) throw ConfigError("[scan] s_list entries must lie in (0, 1)");
    if (c.directions < 1) throw ConfigError("[scan] directions must be positive");
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["experiment"] = c.experiment;
    j["out"] = c.out_dir;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["quiet"] = c.quiet;
    j["mesh"] = {{"file", c.mesh_file},
                 {"generator", c.generator},
                 {"h", c.mesh_h},
                 {"margin", c.margin},
                 {"radius", c.radius},
                 {"refinements", c.refinements},
                 {"domain", {c.domain.lo.x, c.domain.lo.y, c.domain.hi.x, c.domain.hi.y}}};
    j["field"] = {{"kind", c.field},      {"bx", c.bx},
                  {"by", c.by},           {"cx", c.cx},
                  {"cy", c.cy},           {"omega", c.omega},
                  {"rate", c.rate},       {"max_mode", c.max_mode},
                  {"decay", c.decay},     {"amplitude", c.amplitude},
                  {"oscillate", c.oscillate}};
    j["initial"] = {{"kind", c.initial}, {"cx", c.icx}, {"cy", c.icy}, {"radius", c.iradius}};
    j["time"] = {{"T", c.T}, {"outputs", c.outputs}};
    j["stepper"] = {{"method", c.stepper.method == pum::StepperSpec::Method::Euler ? "euler"
                                                                                   : "rk4"},
                    {"cfl", c.stepper.cfl},
                    {"fixed_dt", c.stepper.fixed_dt}};
    j["seminorm"] = {{"h0", c.seminorm.h0},
                     {"p", c.seminorm.p},
                     {"theta", c.seminorm.theta},
                     {"p_star", c.seminorm.p_star},
                     {"h_count", c.seminorm.h_count}};
    j["scan"] = {{"h_list", c.h_list}, {"s_list", c.s_list}, {"directions", c.directions}};
    return j;
}

// ============================================================================
// Catalog
// ============================================================================

namespace {

struct CatalogEntry {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, double>> parameters;
    std::string extra_key, extra_val;  // e.g. the Sobolev declaration
    std::string sample_config;
};

std::vector<CatalogEntry> generator_entries() {
    return {
        {"cartesian", "uniform square cells of side h", {{"h", 0.125}, {"margin", 1}}, "", "",
         "experiment = \"vcoords-scan\"\n[mesh]\ngenerator = \"cartesian\"\nh = 0.25\nmargin = 2\n"
         "radius = 0.0625\ndomain = [0, 0, 1, 1]\n[scan]\ndirections = 4\n"},
        {"alternating",
         "rows of height h alternating horizontal sizes h and h/2",
         {{"h", 0.125}, {"margin", 1}},
         "", "",
         "experiment = \"vcoords-scan\"\n[mesh]\ngenerator = \"alternating\"\nh = 0.25\nmargin = 2\n"
         "radius = 0.0625\ndomain = [0, 0, 1, 1]\n[scan]\ndirections = 4\n"},
        {"hexagonal", "regular hexagons of circumradius h", {{"h", 0.125}, {"margin", 1}}, "", "",
         "experiment = \"vcoords-scan\"\n[mesh]\ngenerator = \"hexagonal\"\nh = 0.2\nmargin = 2\n"
         "radius = 0.1\ndomain = [0, 0, 1, 1]\n[scan]\ndirections = 4\n"},
        {"disc", "triangulated unit disc (hat cells), refined `refinements` times",
         {{"refinements", 3}}, "", "",
         "experiment = \"coupled\"\n[mesh]\ngenerator = \"disc\"\nrefinements = 3\n"
         "domain = [-1, -1, 1, 1]\n[initial]\ncx = 0\ncy = 0\nradius = 0.3\n[time]\nT = 0.05\n"
         "outputs = 1\n"},
    };
}

std::vector<CatalogEntry> field_entries() {
    const std::string advect_head =
        "experiment = \"advect\"\n[mesh]\ngenerator = \"cartesian\"\nh = 0.125\nmargin = 2\n"
        "domain = [0, 0, 1, 1]\n[initial]\nradius = 0.15\n[time]\nT = 0.05\noutputs = 1\n";
    return {
        {"constant", "b = (bx, by)", {{"bx", 1.0}, {"by", 0.0}}, "", "",
         advect_head + "[field]\nkind = \"constant\"\nbx = 1\nby = 0.5\n"},
        {"rotation", "rigid rotation about (cx, cy) with angular rate omega",
         {{"cx", 0.5}, {"cy", 0.5}, {"omega", 1.0}}, "", "",
         advect_head + "[field]\nkind = \"rotation\"\ncx = 0.5\ncy = 0.5\nomega = 1\n"},
        {"shear", "b = (rate*y, 0)", {{"rate", 1.0}}, "", "",
         advect_head + "[field]\nkind = \"shear\"\nrate = 1\n"},
        {"rough", "random trigonometric sample with mode decay |k|^-decay",
         {{"max_mode", 3}, {"decay", 2.0}, {"amplitude", 1.0}},
         "sobolev", "W^{1,q} for every q with q*(decay - 1) > 2",
         advect_head + "[field]\nkind = \"rough\"\nmax_mode = 3\ndecay = 2\namplitude = 0.3\n"},
    };
}

}  // namespace

std::string catalog_text() {
    std::ostringstream os;
    os << "mesh generators:\n";
    for (const CatalogEntry& e : generator_entries()) {
        os << "  " << e.name << " - " << e.description << " (parameters:";
        for (const auto& [k, v] : e.parameters) os << " " << k << "=" << v;
        os << ")\n";
    }
    os << "fields:\n";
    for (const CatalogEntry& e : field_entries()) {
        os << "  " << e.name << " - " << e.description << " (parameters:";
        for (const auto& [k, v] : e.parameters) os << " " << k << "=" << v;
        os << ")";
        if (!e.extra_key.empty()) os << " [" << e.extra_key << ": " << e.extra_val << "]";
        os << "\n";
    }
    os << "every field accepts oscillate = f for a cos(2*pi*f*t) time factor\n";
    return os.str();
}

nlohmann::json catalog_json() {
    auto to_json = [](const std::vector<CatalogEntry>& entries) {
        nlohmann::json arr = nlohmann::json::array();
        for (const CatalogEntry& e : entries) {
            nlohmann::json j;
            j["name"] = e.name;
            j["description"] = e.description;
            nlohmann::json params = nlohmann::json::array();
            for (const auto& [k, v] : e.parameters)
                params.push_back({{"name", k}, {"default", v}});
            j["parameters"] = params;
            if (!e.extra_key.empty()) j[e.extra_key] = e.extra_val;
            j["sample_config"] = e.sample_config;
            arr.push_back(j);
        }
        return arr;
    };
    nlohmann::json j;
    j["version"] = pum::kVersion;
    j["generators"] = to_json(generator_entries());
    j["fields"] = to_json(field_entries());
    return j;
}

}  // namespace pumrun
